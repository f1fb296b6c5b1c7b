"""Shared plumbing: stable hashing, seed derivation, bounded parallelism, JSONL I/O."""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Iterable, Iterator, TypeVar

T = TypeVar("T")
R = TypeVar("R")

# Version of the on-disk file formats, embedded into dataset provenance.
FORMAT_VERSION = "1"


def stable_hash64(*parts: object) -> int:
    """64-bit hash of the string forms of ``parts``, stable across processes."""
    text = "\x1f".join(str(p) for p in parts)
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def derive_seed(seed: int, *scope: object) -> int:
    """Derive a per-stage or per-item seed from the single pipeline seed.

    Every source of randomness in the pipeline draws from a seed produced
    here, so reruns with the same configured seed are bit-reproducible and
    per-item RNG streams do not depend on work scheduling.
    """
    return (int(seed) ^ stable_hash64(*scope)) & 0x7FFF_FFFF_FFFF_FFFF


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    """Ordered map over ``items`` with at most ``threads`` workers.

    The result order matches the input order regardless of thread count, so
    parallelism can never change pipeline output.
    """
    todo = list(items)
    if threads <= 1 or len(todo) <= 1:
        return [fn(item) for item in todo]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, todo))


def json_line(obj: Any) -> str:
    """Canonical single-line JSON used by every writer (stable key order)."""
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def write_jsonl(path: str | Path, records: Iterable[Any]) -> int:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = 0
    with path.open("w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json_line(rec))
            fh.write("\n")
            n += 1
    return n


def read_jsonl(path: str | Path) -> Iterator[dict]:
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)


def write_tsv(path: str | Path, rows: Iterable[Iterable[object]], header: Iterable[str] | None = None) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        if header is not None:
            fh.write("\t".join(header) + "\n")
        for row in rows:
            fh.write("\t".join(str(cell) for cell in row) + "\n")


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()
