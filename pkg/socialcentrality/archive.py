"""Dataset archive unpacking."""

from __future__ import annotations

import gzip
import logging
import shutil
from pathlib import Path
from typing import List
from zipfile import ZipFile, ZipInfo

logger = logging.getLogger(__name__)

COPY_BUFFER = 1024 * 1024


def unpack(archive_path: Path, target_dir: Path) -> List[Path]:
    """Unpack a ``.zip`` or ``.gz`` dataset into ``target_dir``.

    The target directory is emptied first. Returns the written files.
    """

    archive_path = Path(archive_path)
    target_dir = Path(target_dir)
    target_dir.mkdir(parents=True, exist_ok=True)
    if any(target_dir.iterdir()):
        _clear_directory(target_dir)

    suffix = archive_path.suffix.lower()
    if suffix == ".zip":
        return _unpack_zip(archive_path, target_dir)
    if suffix == ".gz":
        return [_unpack_gzip(archive_path, target_dir)]
    raise ValueError(f"Unsupported archive type: {archive_path.name}")


def _unpack_zip(archive_path: Path, target_dir: Path) -> List[Path]:
    written: List[Path] = []
    with ZipFile(archive_path) as archive:
        members = archive.infolist()
        total = len(members)
        for index, member in enumerate(members, start=1):
            path = _extract_member(archive, member, target_dir)
            if path is not None:
                written.append(path)
            logger.debug("Extracted %d/%d entries", index, total)
    logger.info("Unpacked %d file(s) from %s", len(written), archive_path.name)
    return written


def _unpack_gzip(archive_path: Path, target_dir: Path) -> Path:
    destination = _safe_destination(target_dir, archive_path.stem)
    with gzip.open(archive_path, "rb") as src, destination.open("wb") as dst:
        shutil.copyfileobj(src, dst, length=COPY_BUFFER)
    logger.info("Decompressed %s to %s", archive_path.name, destination.name)
    return destination


def _clear_directory(path: Path) -> None:
    for item in path.iterdir():
        if item.is_dir():
            shutil.rmtree(item)
        else:
            item.unlink()


def _extract_member(archive: ZipFile, member: ZipInfo, target_dir: Path):
    target_path = _safe_destination(target_dir, member.filename)
    if member.is_dir():
        target_path.mkdir(parents=True, exist_ok=True)
        return None
    target_path.parent.mkdir(parents=True, exist_ok=True)
    with archive.open(member, "r") as src, target_path.open("wb") as dst:
        shutil.copyfileobj(src, dst, length=COPY_BUFFER)
    return target_path


def _safe_destination(base_dir: Path, name: str) -> Path:
    base = base_dir.resolve()
    resolved = (base_dir / name).resolve()
    if resolved != base and base not in resolved.parents:
        raise ValueError(f"Archive member escapes extraction directory: {name}")
    return resolved
