from __future__ import annotations

import json
import socket
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

from metaurban.ingestion import RawDataset, read_codebook_file, read_table_file

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"
GOLDEN = HERE / "golden"

CBECS_DATA = FIXTURES / "cbecs2018_final_public.csv"
CBECS_CODEBOOK = FIXTURES / "cbecs2018_codebook.csv"
EIA_DATA = FIXTURES / "eia_monthly_commercial.csv"
RECS_DATA = FIXTURES / "recs2020_public.csv"


def golden_text(name: str) -> str:
    return (GOLDEN / name).read_text(encoding="utf-8")


@pytest.fixture
def cbecs() -> RawDataset:
    return RawDataset(read_table_file(CBECS_DATA), read_codebook_file(CBECS_CODEBOOK))


@pytest.fixture
def eia() -> RawDataset:
    return RawDataset(read_table_file(EIA_DATA))


@pytest.fixture
def recs() -> RawDataset:
    return RawDataset(read_table_file(RECS_DATA))


class MockEndpoint:
    """Chat-completion stand-in serving queued (status, body) replies."""

    def __init__(self) -> None:
        self.replies: list[tuple[int, object]] = []
        self.requests: list[dict] = []
        self.headers: list[dict[str, str]] = []
        mock = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self) -> None:  # noqa: N802
                length = int(self.headers.get("Content-Length", 0))
                mock.requests.append(json.loads(self.rfile.read(length)))
                mock.headers.append(dict(self.headers))
                status, body = mock.replies.pop(0) if mock.replies else (500, {"error": "no reply queued"})
                data = body.encode() if isinstance(body, str) else json.dumps(body).encode()
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def log_message(self, *args) -> None:
                pass

        self.server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.url = f"http://127.0.0.1:{self.server.server_address[1]}/v1/chat/completions"
        self.thread = threading.Thread(target=self.server.serve_forever, args=(0.02,), daemon=True)

    def reply_text(self, text: str, status: int = 200) -> None:
        self.replies.append((status, {"choices": [{"message": {"role": "assistant", "content": text}}]}))

    def reply_raw(self, status: int, body: object) -> None:
        self.replies.append((status, body))


@pytest.fixture
def mock_endpoint():
    mock = MockEndpoint()
    mock.thread.start()
    try:
        yield mock
    finally:
        mock.server.shutdown()
        mock.server.server_close()


@pytest.fixture
def dead_url() -> str:
    """URL of a local port with nothing listening."""
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        port = s.getsockname()[1]
    return f"http://127.0.0.1:{port}/v1/chat/completions"


@pytest.fixture
def llm_token(monkeypatch):
    monkeypatch.setenv("METAURBAN_LLM_TOKEN", "test-token")
    return "test-token"
