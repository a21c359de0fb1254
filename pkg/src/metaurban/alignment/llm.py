"""Model-backed alignment over a generic chat-completion HTTP endpoint.

The request is ``POST <base_url>`` with JSON ``{"model", "messages"}`` and a
bearer token read from an environment variable. The reply's first text
content is searched for a CSV block, which is parsed and validated like any
other metadata.csv. Transport failures and model failures raise distinct
exception families so callers can tell them apart.
"""

from __future__ import annotations

import csv
import hashlib
import io
import logging
import os
import re
import time
from dataclasses import dataclass

import httpx

from ..errors import (
    AlignmentError,
    EndpointUnreachable,
    HttpError,
    InputError,
    MalformedListLiteral,
    MalformedReply,
    MissingCredentials,
    NoCsvInResponse,
    ProducedInvalidDocument,
    TransportError,
    UnresolvableCategory,
)
from ..ingestion import Codebook, RawDataset, detect_key_column
from ..schema import SchemaCategory
from .core import AlignmentResult, Llm, finish
from .metadata_csv import parse_metadata
from .prompt import build_prompt

log = logging.getLogger(__name__)

TOKEN_ENV = "METAURBAN_LLM_TOKEN"
MAX_RETRIES = 5

_FENCE = re.compile(r"```[ \t]*([\w-]*)[ \t]*\r?\n(.*?)```", re.DOTALL)
_HEADER_LINE = re.compile(r"^\s*\"?field\"?\s*[,\t]\s*\"?value\"?\s*$", re.IGNORECASE)


@dataclass(frozen=True)
class LlmEndpointConfig:
    base_url: str
    model: str
    token_env: str = TOKEN_ENV
    timeout: float = 120.0
    max_retries: int = 2
    row_cap: int | None = 1000  # data rows uploaded; None sends everything
    max_upload_bytes: int = 8_000_000
    backoff: float = 0.5

    def __post_init__(self) -> None:
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if not 0 <= self.max_retries <= MAX_RETRIES:
            raise ValueError(f"max_retries must be between 0 and {MAX_RETRIES}")
        if self.row_cap is not None and self.row_cap < 0:
            raise ValueError("row_cap must be non-negative")

    def token(self) -> str:
        token = os.environ.get(self.token_env)
        if not token:
            raise MissingCredentials(self.token_env)
        return token


def codebook_text(book: Codebook) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["variable", "label", "code", "meaning", "units"])
    for name, entry in book.entries.items():
        writer.writerow([name, entry.label, "", "", entry.units or ""])
        for code, meaning in entry.decodes.items():
            writer.writerow(["", "", code, meaning, ""])
    return buf.getvalue()


def render_message(dataset: RawDataset, category: SchemaCategory, cfg: LlmEndpointConfig) -> str:
    """The full user message: prompt followed by the uploaded files inline."""
    prompt = build_prompt(category, dataset.codebook is not None)
    table = dataset.table if cfg.row_cap is None else dataset.table.head(cfg.row_cap)
    parts = [prompt, f"File 1 ({dataset.table.source_name}):\n```csv\n{table.to_text()}```\n"]
    if dataset.codebook is not None:
        parts.append(f"File 2 (codebook):\n```csv\n{codebook_text(dataset.codebook)}```\n")
    message = "\n".join(parts)
    size = len(message.encode("utf-8"))
    if size > cfg.max_upload_bytes:
        raise InputError(f"upload is {size} bytes, over the {cfg.max_upload_bytes} byte limit; lower the row cap")
    return message


def extract_csv_block(reply: str) -> str:
    """Return the first CSV block in a model reply.

    Fenced code blocks are preferred; failing that, a bare ``Field,Value``
    header starts the block, which runs to the next blank line.
    """
    for match in _FENCE.finditer(reply):
        body = match.group(2)
        if any(("," in ln or "\t" in ln) for ln in body.splitlines()):
            return body
    lines = reply.splitlines()
    for i, line in enumerate(lines):
        if _HEADER_LINE.match(line):
            block = []
            for ln in lines[i:]:
                if not ln.strip():
                    break
                block.append(ln)
            return "\n".join(block) + "\n"
    raise NoCsvInResponse("model reply contains no CSV block")


def reply_text(payload: object) -> str:
    """First text content of a chat-completion style JSON response."""
    if isinstance(payload, dict):
        choices = payload.get("choices")
        if isinstance(choices, list) and choices:
            first = choices[0] if isinstance(choices[0], dict) else {}
            content = (first.get("message") or {}).get("content", first.get("text"))
            if isinstance(content, str):
                return content
            if isinstance(content, list):
                for part in content:
                    if isinstance(part, dict) and isinstance(part.get("text"), str):
                        return part["text"]
        content = payload.get("content")
        if isinstance(content, list):
            for part in content:
                if isinstance(part, dict) and isinstance(part.get("text"), str):
                    return part["text"]
        if isinstance(content, str):
            return content
        if isinstance(payload.get("output_text"), str):
            return payload["output_text"]
    raise NoCsvInResponse("response JSON carries no text content")


def _post(client: httpx.Client, cfg: LlmEndpointConfig, message: str, token: str) -> str:
    body = {"model": cfg.model, "messages": [{"role": "user", "content": message}]}
    try:
        resp = client.post(cfg.base_url, json=body, headers={"Authorization": f"Bearer {token}"})
    except httpx.TransportError as exc:
        raise EndpointUnreachable(f"{cfg.base_url}: {exc}") from exc
    if resp.status_code >= 400:
        raise HttpError(resp.status_code, resp.text[:500])
    try:
        payload = resp.json()
    except ValueError as exc:
        raise NoCsvInResponse(f"response is not JSON: {exc}") from exc
    return reply_text(payload)


def _retryable(exc: Exception) -> bool:
    if isinstance(exc, HttpError):
        return exc.status == 429 or exc.status >= 500
    return isinstance(exc, (EndpointUnreachable, NoCsvInResponse, MalformedReply, ProducedInvalidDocument))


def align_llm(
    dataset: RawDataset,
    category: SchemaCategory,
    cfg: LlmEndpointConfig,
    client: httpx.Client | None = None,
) -> AlignmentResult:
    """Ask the model to align *dataset* and accept the reply only if it validates."""
    token = cfg.token()
    message = render_message(dataset, category, cfg)
    digest = hashlib.sha256(message.encode("utf-8")).hexdigest()
    key = detect_key_column(dataset.profiles())

    owned = client is None
    client = client or httpx.Client(timeout=cfg.timeout)
    try:
        last: Exception | None = None
        for attempt in range(cfg.max_retries + 1):
            if attempt:
                time.sleep(cfg.backoff * attempt)
            try:
                reply = _post(client, cfg, message, token)
                try:
                    parsed = parse_metadata(extract_csv_block(reply), category)
                except (UnresolvableCategory, MalformedListLiteral) as exc:
                    raise MalformedReply(f"cannot read model metadata: {exc}") from exc
                if parsed.document.category is not category:
                    raise MalformedReply(
                        f"model reply describes {parsed.document.category}, expected {category}"
                    )
                warnings = [f"unknown field {n!r} in model reply ignored" for n in parsed.unknown_fields]
                return finish(parsed.document, dataset.table, key, Llm(cfg.model, digest), warnings)
            except (TransportError, AlignmentError) as exc:
                last = exc
                if not _retryable(exc) or attempt == cfg.max_retries:
                    raise
                log.warning("attempt %d failed (%s); retrying", attempt + 1, exc)
        raise AssertionError(last)  # loop always returns or raises
    finally:
        if owned:
            client.close()
