from __future__ import annotations

import pytest
from conftest import golden_text

from metaurban.alignment import (
    RULE_SETS,
    Llm,
    LlmEndpointConfig,
    align_llm,
    align_rule_based,
    build_prompt,
    extract_csv_block,
)
from metaurban.errors import (
    EndpointUnreachable,
    HttpError,
    MalformedReply,
    MissingCredentials,
    NoCsvInResponse,
    ProducedInvalidDocument,
)
from metaurban.schema import SchemaCategory

BC = SchemaCategory.BUILDING_CHARACTERISTICS

CBECS_REPLY = "Here is the aligned schema.\n\n```csv\n" + golden_text("cbecs_aligned.tsv") + "```\n"


def config(url: str, **kw) -> LlmEndpointConfig:
    kw.setdefault("backoff", 0.0)
    kw.setdefault("max_retries", 0)
    return LlmEndpointConfig(url, "test-model", **kw)


def test_reply_reproduces_rule_based_document(cbecs, mock_endpoint, llm_token):
    mock_endpoint.reply_text(CBECS_REPLY)
    result = align_llm(cbecs, BC, config(mock_endpoint.url))
    expected = align_rule_based(cbecs, BC, RULE_SETS["cbecs"])
    assert result.document == expected.document
    assert result.plan == expected.plan
    assert isinstance(result.provenance, Llm) and result.provenance.model_id == "test-model"


def test_request_shape(cbecs, mock_endpoint, llm_token):
    mock_endpoint.reply_text(CBECS_REPLY)
    align_llm(cbecs, BC, config(mock_endpoint.url, row_cap=3))
    (body,) = mock_endpoint.requests
    assert body["model"] == "test-model"
    (message,) = body["messages"]
    assert message["role"] == "user"
    assert message["content"].startswith(build_prompt(BC, True))
    assert "File 2 (codebook)" in message["content"]
    assert "\n4," not in message["content"]
    assert mock_endpoint.headers[0]["Authorization"] == "Bearer test-token"


def test_retries_after_server_error(cbecs, mock_endpoint, llm_token):
    mock_endpoint.reply_raw(500, {"error": "busy"})
    mock_endpoint.reply_text("no table today")
    mock_endpoint.reply_text(CBECS_REPLY)
    result = align_llm(cbecs, BC, config(mock_endpoint.url, max_retries=2))
    assert result.report.valid()
    assert len(mock_endpoint.requests) == 3


def test_client_error_is_not_retried(cbecs, mock_endpoint, llm_token):
    mock_endpoint.reply_raw(401, {"error": "denied"})
    mock_endpoint.reply_text(CBECS_REPLY)
    with pytest.raises(HttpError) as err:
        align_llm(cbecs, BC, config(mock_endpoint.url, max_retries=2))
    assert err.value.status == 401
    assert len(mock_endpoint.requests) == 1


def test_reply_without_csv(cbecs, mock_endpoint, llm_token):
    mock_endpoint.reply_text("I could not read the files.")
    with pytest.raises(NoCsvInResponse):
        align_llm(cbecs, BC, config(mock_endpoint.url))


def test_reply_missing_required_field(cbecs, mock_endpoint, llm_token):
    text = "\n".join(ln for ln in CBECS_REPLY.splitlines() if not ln.startswith("Sample or Probability"))
    mock_endpoint.reply_text(text)
    with pytest.raises(ProducedInvalidDocument) as err:
        align_llm(cbecs, BC, config(mock_endpoint.url))
    assert [(f.field, f.rule) for f in err.value.report.errors] == [("Sample or Probability", "R1")]


def test_reply_for_wrong_category(cbecs, mock_endpoint, llm_token):
    mock_endpoint.reply_text("```\n" + golden_text("eia_aligned.tsv") + "```")
    with pytest.raises(MalformedReply):
        align_llm(cbecs, BC, config(mock_endpoint.url))


def test_unreachable_endpoint(cbecs, dead_url, llm_token):
    with pytest.raises(EndpointUnreachable):
        align_llm(cbecs, BC, config(dead_url, timeout=2.0))


def test_missing_token(cbecs, mock_endpoint, monkeypatch):
    monkeypatch.delenv("METAURBAN_LLM_TOKEN", raising=False)
    with pytest.raises(MissingCredentials, match="METAURBAN_LLM_TOKEN"):
        align_llm(cbecs, BC, config(mock_endpoint.url))
    assert mock_endpoint.requests == []


@pytest.mark.parametrize(
    "reply, first_line",
    [
        ("```csv\nField,Value\nSector,Commercial\n```", "Field,Value"),
        ("```\nprint(1)\n```\n```csv\nA,B\n```", "A,B"),
        ("Result:\nField,Value\nSector,Commercial\n\nDone.", "Field,Value"),
        ("field\tvalue\nSector\tCommercial", "field\tvalue"),
    ],
)
def test_extract_csv_block(reply, first_line):
    assert extract_csv_block(reply).splitlines()[0] == first_line


@pytest.mark.parametrize("kw", [{"timeout": 0}, {"max_retries": 6}, {"max_retries": -1}, {"row_cap": -1}])
def test_config_bounds(kw):
    with pytest.raises(ValueError):
        LlmEndpointConfig("http://x", "m", **kw)
