"""Readers for the line-delimited author-registry and citation-corpus files.

Both inputs are UTF-8 JSON Lines.  A registry line carries ``author_id``,
``cfn`` and ``dois[]``; a citation line carries ``doi``, ``paper_id``,
``title``, ``abstract``, ``venue``, ``year`` (optional) and
``authors[] = {name, affiliation}``.  Records are validated and normalized
as they stream by; malformed lines are counted per category and skipped.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .util import json_line


@dataclass(frozen=True)
class AuthorSlot:
    name: str
    affiliation: str = ""


@dataclass(frozen=True)
class AuthorRecord:
    author_id: str
    cfn: str
    claimed_dois: tuple[str, ...]


@dataclass(frozen=True)
class CitationRecord:
    doi: str
    paper_id: str
    title: str
    abstract: str
    venue: str
    year: int | None
    authors: tuple[AuthorSlot, ...]


@dataclass
class IngestCounters:
    lines: int = 0
    accepted: int = 0
    errors: Counter = field(default_factory=Counter)

    @property
    def rejected(self) -> int:
        return sum(self.errors.values())


@dataclass(frozen=True)
class IngestReport:
    lines: int
    accepted: int
    rejected: int
    errors: dict[str, int]


def ingest_report(counters: IngestCounters) -> IngestReport:
    """Summarize a completed read: totals plus per-category error counts."""
    return IngestReport(
        lines=counters.lines,
        accepted=counters.accepted,
        rejected=counters.rejected,
        errors=dict(sorted(counters.errors.items())),
    )


def normalize_doi(doi: str) -> str:
    """DOIs are case-insensitive join keys; trim and lowercase only."""
    return doi.strip().lower()


class _JsonlReader:
    """Single-pass streaming reader; counters fill in as the stream is consumed."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        if not self.path.is_file():
            raise FileNotFoundError(f"input file not found: {self.path}")
        self.counters = IngestCounters()

    def report(self) -> IngestReport:
        return ingest_report(self.counters)

    def _lines(self) -> Iterator[dict]:
        with self.path.open("r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                self.counters.lines += 1
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError:
                    self.counters.errors["invalid_json"] += 1
                    continue
                if not isinstance(obj, dict):
                    self.counters.errors["invalid_json"] += 1
                    continue
                yield obj


class RegistryReader(_JsonlReader):
    def __iter__(self) -> Iterator[AuthorRecord]:
        seen_ids: set[str] = set()
        for obj in self._lines():
            author_id = str(obj.get("author_id") or "").strip()
            if not author_id:
                self.counters.errors["missing_author_id"] += 1
                continue
            if author_id in seen_ids:
                self.counters.errors["duplicate_author_id"] += 1
                continue
            cfn = str(obj.get("cfn") or "").strip()
            if not cfn:
                self.counters.errors["missing_cfn"] += 1
                continue
            raw_dois = obj.get("dois")
            if not isinstance(raw_dois, list):
                self.counters.errors["missing_dois"] += 1
                continue
            dois: list[str] = []
            for doi in raw_dois:
                doi = normalize_doi(str(doi))
                if doi and doi not in dois:
                    dois.append(doi)
            seen_ids.add(author_id)
            self.counters.accepted += 1
            yield AuthorRecord(author_id=author_id, cfn=cfn, claimed_dois=tuple(dois))


class CorpusReader(_JsonlReader):
    def __iter__(self) -> Iterator[CitationRecord]:
        seen_dois: set[str] = set()
        for obj in self._lines():
            doi = normalize_doi(str(obj.get("doi") or ""))
            if not doi:
                self.counters.errors["missing_doi"] += 1
                continue
            if doi in seen_dois:
                self.counters.errors["duplicate_doi"] += 1
                continue
            paper_id = str(obj.get("paper_id") or "").strip()
            if not paper_id:
                self.counters.errors["missing_paper_id"] += 1
                continue
            year = obj.get("year")
            if year is not None:
                try:
                    year = int(year)
                except (TypeError, ValueError):
                    self.counters.errors["bad_year"] += 1
                    continue
            raw_authors = obj.get("authors")
            if not isinstance(raw_authors, list) or not raw_authors:
                self.counters.errors["empty_authors"] += 1
                continue
            slots: list[AuthorSlot] = []
            for slot in raw_authors:
                if not isinstance(slot, dict):
                    slots = []
                    break
                name = str(slot.get("name") or "").strip()
                if not name:
                    slots = []
                    break
                slots.append(AuthorSlot(name=name, affiliation=str(slot.get("affiliation") or "")))
            if not slots:
                self.counters.errors["bad_author_slot"] += 1
                continue
            seen_dois.add(doi)
            self.counters.accepted += 1
            yield CitationRecord(
                doi=doi,
                paper_id=paper_id,
                title=str(obj.get("title") or ""),
                abstract=str(obj.get("abstract") or ""),
                venue=str(obj.get("venue") or ""),
                year=year,
                authors=tuple(slots),
            )


def read_author_registry(path: str | Path) -> RegistryReader:
    """Stream AuthorRecords from a registry file; see ``RegistryReader.counters``."""
    return RegistryReader(path)


def read_citation_corpus(path: str | Path) -> CorpusReader:
    """Stream CitationRecords from a corpus file; see ``CorpusReader.counters``."""
    return CorpusReader(path)


# round-trip writers (also used by the synthetic corpus generator)

def author_to_obj(rec: AuthorRecord) -> dict:
    return {"author_id": rec.author_id, "cfn": rec.cfn, "dois": list(rec.claimed_dois)}


def citation_to_obj(rec: CitationRecord) -> dict:
    return {
        "doi": rec.doi,
        "paper_id": rec.paper_id,
        "title": rec.title,
        "abstract": rec.abstract,
        "venue": rec.venue,
        "year": rec.year,
        "authors": [{"name": s.name, "affiliation": s.affiliation} for s in rec.authors],
    }


def write_author_registry(path: str | Path, records) -> int:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = 0
    with path.open("w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json_line(author_to_obj(rec)) + "\n")
            n += 1
    return n


def write_citation_corpus(path: str | Path, records) -> int:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = 0
    with path.open("w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json_line(citation_to_obj(rec)) + "\n")
            n += 1
    return n
