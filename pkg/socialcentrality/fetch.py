"""Resumable dataset download."""

from __future__ import annotations

import logging
import time
from pathlib import Path
from typing import Callable, Optional
from urllib.parse import unquote, urlparse

import httpx

from . import __version__, config
from .utils import human_readable_bytes

logger = logging.getLogger(__name__)

USER_AGENT = f"socialcentrality/{__version__}"


def target_name(url: str) -> str:
    name = Path(unquote(urlparse(url).path)).name
    return name or "download"


def fetch(
    url: str,
    out_dir: Path,
    *,
    client: Optional[httpx.Client] = None,
    retries: int = config.DOWNLOAD_RETRIES,
    backoff: float = config.DOWNLOAD_BACKOFF,
    sleep: Callable[[float], None] = time.sleep,
) -> Path:
    """Download ``url`` into ``out_dir``, resuming a partial file when present.

    Failed attempts are retried with exponential backoff. ``client`` lets
    callers supply their own transport.
    """

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    destination = out_dir / target_name(url)
    owned = client is None
    if client is None:
        client = httpx.Client(timeout=None, follow_redirects=True)
    last_error: Optional[Exception] = None
    try:
        for attempt in range(1, retries + 1):
            try:
                _stream_download(client, url, destination)
                return destination
            except (httpx.HTTPError, OSError) as exc:
                last_error = exc
                logger.warning("Download attempt %d/%d failed: %s", attempt, retries, exc)
                if attempt < retries:
                    sleep(backoff**attempt)
    finally:
        if owned:
            client.close()
    raise RuntimeError(f"Download failed after {retries} attempts: {last_error}")


def _stream_download(client: httpx.Client, url: str, destination: Path) -> None:
    resume_position = destination.stat().st_size if destination.exists() else 0
    headers = {"User-Agent": USER_AGENT}
    if resume_position:
        headers["Range"] = f"bytes={resume_position}-"

    with client.stream("GET", url, headers=headers) as response:
        if resume_position and response.status_code == 416:
            logger.info("%s is already complete (%s)", destination.name, human_readable_bytes(resume_position))
            return
        response.raise_for_status()
        if resume_position and response.status_code != 206:
            # Server ignored the range request; restart from scratch
            logger.info("Server ignored range request; restarting %s", destination.name)
            resume_position = 0
        total = response.headers.get("Content-Length")
        total_bytes = int(total) + resume_position if total is not None else None
        downloaded = resume_position
        mode = "ab" if resume_position else "wb"
        with destination.open(mode) as handle:
            for chunk in response.iter_bytes(config.DEFAULT_DOWNLOAD_CHUNK_SIZE):
                if not chunk:
                    continue
                handle.write(chunk)
                downloaded += len(chunk)
                logger.debug("%s", _format_progress(downloaded, total_bytes))
    logger.info("Downloaded %s: %s", destination.name, _format_progress(downloaded, total_bytes))


def _format_progress(downloaded: int, total: Optional[int]) -> str:
    if total:
        return f"{human_readable_bytes(downloaded)} / {human_readable_bytes(total)}"
    return f"{human_readable_bytes(downloaded)} downloaded"
