"""Shared fixture builders for the test suite."""

from __future__ import annotations

import random

import pytest

from andbench.ingest import AuthorRecord, AuthorSlot, CitationRecord
from andbench.linker import LinkedClaim
from andbench.synth import COMMON_WORDS, FAMILY_NAMES, GIVEN_NAMES, TOPIC_WORDS, VENUES, random_full_name
from andbench.util import derive_seed

_paper_counter = [0]


def make_claim(
    author_id: str,
    cfn: str,
    byline: str | None = None,
    position: int = 1,
    doi: str | None = None,
    paper_id: str | None = None,
    title: str = "",
    abstract: str = "",
    venue: str = "",
    year: int | None = None,
    coauthors: tuple[str, ...] = (),
    affiliation: str = "",
) -> LinkedClaim:
    """Build a positioned claim with its citation in one call."""
    _paper_counter[0] += 1
    pid = paper_id or f"T{_paper_counter[0]:06d}"
    slots = [AuthorSlot(name=nm) for nm in coauthors]
    slots.insert(position - 1, AuthorSlot(name=byline or cfn, affiliation=affiliation))
    citation = CitationRecord(
        doi=doi or f"10.9999/{pid.lower()}",
        paper_id=pid,
        title=title,
        abstract=abstract,
        venue=venue,
        year=year,
        authors=tuple(slots),
    )
    return LinkedClaim(
        doi=citation.doi, author_id=author_id, cfn=cfn, citation=citation, position=position
    )


def all_partitions(elements: list):
    """Every partition of ``elements`` (Bell-number enumeration)."""
    if not elements:
        yield []
        return
    first, rest = elements[0], elements[1:]
    for partition in all_partitions(rest):
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1 :]
        yield [[first]] + partition


def partition_to_labels(partition: list[list[int]], n: int) -> list[int]:
    labels = [0] * n
    for cid, cluster in enumerate(partition):
        for el in cluster:
            labels[el] = cid
    return labels


# ---------------------------------------------------------------------------
# degenerate-tuning corpus: ~94.5% single-author blocks, with a small junk
# population whose metadata carries no signal

def _names(seed: int, n: int) -> list[str]:
    rng = random.Random(derive_seed(seed, "degen-names"))
    combos = [(g, f) for g in GIVEN_NAMES for f in FAMILY_NAMES]
    rng.shuffle(combos)
    return [f"{g} {f}" for g, f in combos[:n]]


def build_degenerate_corpus(
    seed: int = 101,
    n_single: int = 945,
    n_junk_multi: int = 30,
    n_signal_multi: int = 25,
    drifted_authors: frozenset[str] = frozenset(),
) -> tuple[list[AuthorRecord], list[CitationRecord]]:
    """Corpus whose block structure mirrors the observed single-author skew.

    Single-author blocks hold one author with two topically consistent
    citations; junk multi-author blocks hold two homonyms with one
    signal-free citation each; signal multi-author blocks hold two homonyms
    with three citations each and partially overlapping venues.  Authors in
    ``drifted_authors`` get their second citation replaced by a signal-free
    one, which turns their within-author pair into a hard positive.
    """
    topics = sorted(TOPIC_WORDS)
    names = _names(seed, n_single + n_junk_multi + n_signal_multi)
    authors: list[AuthorRecord] = []
    citations: list[CitationRecord] = []
    counter = [0]

    def emit(author_id, cfn, junk, arng, topic, venue_pool, base_year, affiliation):
        counter[0] += 1
        pid = f"D{counter[0]:06d}"
        doi = f"10.7777/{pid.lower()}"
        if junk:
            title = " ".join(arng.sample(COMMON_WORDS, 2))
            abstract, venue, slot_aff = "", "", ""
            year = arng.randint(1980, 2020)
        else:
            title = " ".join(
                [arng.choice(TOPIC_WORDS[topic]) for _ in range(4)]
                + [arng.choice(COMMON_WORDS) for _ in range(2)]
            )
            abstract = " ".join(arng.choice(TOPIC_WORDS[topic]) for _ in range(10))
            venue = arng.choice(venue_pool)
            slot_aff = affiliation
            year = base_year + arng.randint(-3, 3)
        n_co = arng.randint(1, 3)
        coauthors = [random_full_name(arng) for _ in range(n_co)]
        position = arng.randint(1, n_co + 1)
        slots = [AuthorSlot(name=nm) for nm in coauthors]
        slots.insert(position - 1, AuthorSlot(name=cfn, affiliation=slot_aff))
        citations.append(
            CitationRecord(
                doi=doi, paper_id=pid, title=title, abstract=abstract,
                venue=venue, year=year, authors=tuple(slots),
            )
        )
        return doi

    def add_author(author_id, cfn, n_cit, junk_all, topic, venue_pool):
        arng = random.Random(derive_seed(seed, "degen-author", author_id))
        base_year = arng.randint(1990, 2014)
        affiliation = arng.choice(VENUES)
        dois = []
        for k in range(n_cit):
            junk = junk_all or (author_id in drifted_authors and k == n_cit - 1)
            dois.append(emit(author_id, cfn, junk, arng, topic, venue_pool, base_year, affiliation))
        authors.append(AuthorRecord(author_id=author_id, cfn=cfn, claimed_dois=tuple(dois)))

    idx = 0
    for i in range(n_single):
        cfn = names[idx]
        idx += 1
        rng = random.Random(derive_seed(seed, "degen-cfg", i))
        add_author(f"S{i:05d}", cfn, 2, False, topics[i % len(topics)], [rng.choice(VENUES)])
    for i in range(n_junk_multi):
        cfn = names[idx]
        idx += 1
        add_author(f"J{i:05d}a", cfn, 1, True, topics[0], VENUES)
        add_author(f"J{i:05d}b", cfn, 1, True, topics[0], VENUES)
    for i in range(n_signal_multi):
        cfn = names[idx]
        idx += 1
        rng = random.Random(derive_seed(seed, "degen-pool", i))
        pool = rng.sample(VENUES, 4)
        t1, t2 = topics[i % len(topics)], topics[(i + 5) % len(topics)]
        add_author(f"M{i:05d}a", cfn, 3, False, t1, pool)
        add_author(f"M{i:05d}b", cfn, 3, False, t2, pool)

    return authors, citations
