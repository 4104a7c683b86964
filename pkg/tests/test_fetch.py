"""Dataset download and unpacking."""

from __future__ import annotations

import gzip
import zipfile
from pathlib import Path
from typing import List

import httpx
import pytest

from socialcentrality.archive import unpack
from socialcentrality.fetch import fetch, target_name

URL = "https://datasets.example.org/snap/email-Enron.txt.gz"
PAYLOAD = b"0\t1\n1\t2\n2\t0\n" * 50


def client_for(handler) -> httpx.Client:
    return httpx.Client(transport=httpx.MockTransport(handler))


def test_target_name_comes_from_the_url_path() -> None:
    assert target_name(URL) == "email-Enron.txt.gz"
    assert target_name("https://example.org/") == "download"


def test_full_download(tmp_path: Path) -> None:
    seen: List[httpx.Request] = []

    def handler(request: httpx.Request) -> httpx.Response:
        seen.append(request)
        return httpx.Response(200, content=PAYLOAD)

    path = fetch(URL, tmp_path, client=client_for(handler))

    assert path == tmp_path / "email-Enron.txt.gz"
    assert path.read_bytes() == PAYLOAD
    assert "range" not in seen[0].headers
    assert seen[0].headers["user-agent"].startswith("socialcentrality/")


def test_partial_file_is_resumed_with_a_range_request(tmp_path: Path) -> None:
    (tmp_path / "email-Enron.txt.gz").write_bytes(PAYLOAD[:100])

    def handler(request: httpx.Request) -> httpx.Response:
        assert request.headers["range"] == "bytes=100-"
        return httpx.Response(206, content=PAYLOAD[100:])

    path = fetch(URL, tmp_path, client=client_for(handler))

    assert path.read_bytes() == PAYLOAD


def test_server_ignoring_range_restarts_the_file(tmp_path: Path) -> None:
    (tmp_path / "email-Enron.txt.gz").write_bytes(b"stale bytes")

    def handler(request: httpx.Request) -> httpx.Response:
        return httpx.Response(200, content=PAYLOAD)

    path = fetch(URL, tmp_path, client=client_for(handler))

    assert path.read_bytes() == PAYLOAD


def test_complete_file_is_left_alone(tmp_path: Path) -> None:
    (tmp_path / "email-Enron.txt.gz").write_bytes(PAYLOAD)

    def handler(request: httpx.Request) -> httpx.Response:
        return httpx.Response(416)

    path = fetch(URL, tmp_path, client=client_for(handler))

    assert path.read_bytes() == PAYLOAD


def test_transient_errors_are_retried_with_backoff(tmp_path: Path) -> None:
    attempts = {"count": 0}
    waits: List[float] = []

    def handler(request: httpx.Request) -> httpx.Response:
        attempts["count"] += 1
        if attempts["count"] < 3:
            return httpx.Response(503)
        return httpx.Response(200, content=PAYLOAD)

    path = fetch(URL, tmp_path, client=client_for(handler), sleep=waits.append)

    assert path.read_bytes() == PAYLOAD
    assert waits == [2, 4]


def test_download_gives_up_after_retries(tmp_path: Path) -> None:
    waits: List[float] = []

    def handler(request: httpx.Request) -> httpx.Response:
        raise httpx.ConnectError("connection refused", request=request)

    with pytest.raises(RuntimeError, match="after 3 attempts"):
        fetch(URL, tmp_path, client=client_for(handler), sleep=waits.append)
    assert waits == [2, 4]


def test_unpack_gzip(tmp_path: Path) -> None:
    archive = tmp_path / "graph.tsv.gz"
    with gzip.open(archive, "wb") as handle:
        handle.write(PAYLOAD)

    files = unpack(archive, tmp_path / "out")

    assert files == [(tmp_path / "out" / "graph.tsv").resolve()]
    assert files[0].read_bytes() == PAYLOAD


def test_unpack_zip_clears_previous_contents(tmp_path: Path) -> None:
    archive = tmp_path / "bundle.zip"
    with zipfile.ZipFile(archive, "w") as bundle:
        bundle.writestr("data/edges.tsv", PAYLOAD)
        bundle.writestr("data/README", "demo")
    target = tmp_path / "out"
    target.mkdir()
    (target / "old.txt").write_text("stale", encoding="utf-8")

    files = unpack(archive, target)

    assert sorted(path.name for path in files) == ["README", "edges.tsv"]
    assert not (target / "old.txt").exists()
    assert (target / "data" / "edges.tsv").read_bytes() == PAYLOAD


def test_unpack_rejects_path_traversal(tmp_path: Path) -> None:
    archive = tmp_path / "evil.zip"
    with zipfile.ZipFile(archive, "w") as bundle:
        bundle.writestr("../escape.txt", "gotcha")

    with pytest.raises(ValueError, match="escapes"):
        unpack(archive, tmp_path / "out")
    assert not (tmp_path / "escape.txt").exists()


def test_unpack_rejects_unknown_formats(tmp_path: Path) -> None:
    archive = tmp_path / "graph.rar"
    archive.write_bytes(b"")

    with pytest.raises(ValueError):
        unpack(archive, tmp_path / "out")
