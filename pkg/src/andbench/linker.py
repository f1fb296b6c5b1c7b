"""Join registry claims to citations by DOI and identify the claimed author's position.

Position identification scores the registry full name (CFN) against every
byline name of the citation with the bigram Dice coefficient, then accepts
the best-scoring position only when it beats the runner-up by more than a
margin (default 0.2).  Citations with a single author have no runner-up, so
they are accepted when the score reaches a configurable floor (default 0.5);
the floor is a local policy, not an established constant, and is therefore
echoed into every link report.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .ingest import AuthorRecord, CitationRecord
from .namekit import bigrams, dice_similarity, normalize_for_ngrams

POSITION_MARGIN = 0.2
SINGLE_AUTHOR_FLOOR = 0.5


@dataclass(frozen=True)
class LinkedClaim:
    """One (DOI, author, CFN, citation, position) link; position 0 = unidentified."""

    doi: str
    author_id: str
    cfn: str
    citation: CitationRecord
    position: int = 0

    @property
    def paper_id(self) -> str:
        return self.citation.paper_id

    @property
    def byline_name(self) -> str:
        return self.citation.authors[self.position - 1].name if self.position else ""

    @property
    def affiliation(self) -> str:
        return self.citation.authors[self.position - 1].affiliation if self.position else ""


@dataclass
class LinkReport:
    resolved: int = 0
    unresolved: int = 0
    positioned: int = 0
    rejected: int = 0
    single_author_accepted: int = 0
    position_margin: float = POSITION_MARGIN
    single_author_floor: float = SINGLE_AUTHOR_FLOOR

    def to_obj(self) -> dict:
        return {
            "resolved": self.resolved,
            "unresolved": self.unresolved,
            "positioned": self.positioned,
            "rejected": self.rejected,
            "single_author_accepted": self.single_author_accepted,
            "position_margin": self.position_margin,
            "single_author_floor": self.single_author_floor,
        }


def build_citation_index(corpus: Iterable[CitationRecord]) -> dict[str, CitationRecord]:
    """Index a corpus by normalized DOI (read-only after construction)."""
    return {rec.doi: rec for rec in corpus}


def link_by_doi(
    registry: Iterable[AuthorRecord],
    index: Mapping[str, CitationRecord],
    report: LinkReport | None = None,
) -> Iterator[LinkedClaim]:
    """Yield one claim per (author, claimed DOI) pair that resolves in the corpus."""
    report = report if report is not None else LinkReport()
    for author in registry:
        for doi in author.claimed_dois:
            citation = index.get(doi)
            if citation is None:
                report.unresolved += 1
                continue
            report.resolved += 1
            yield LinkedClaim(doi=doi, author_id=author.author_id, cfn=author.cfn, citation=citation)


def identify_author_position(
    cfn: str,
    author_names: Sequence[str],
    threshold: float = POSITION_MARGIN,
    single_author_floor: float = SINGLE_AUTHOR_FLOOR,
) -> int:
    """Return the 1-based byline position of ``cfn``, or 0 when ambiguous.

    The best position wins only if its Dice score exceeds the second best by
    more than ``threshold``; ties keep the earlier position as the candidate
    but are rejected by the margin rule.  All-zero scores are never accepted.
    """
    if not author_names:
        raise ValueError("author_names must be non-empty")
    cfn_profile = bigrams(normalize_for_ngrams(cfn))
    scores = [dice_similarity(cfn_profile, bigrams(normalize_for_ngrams(name))) for name in author_names]

    best = max(range(len(scores)), key=lambda i: (scores[i], -i))
    if scores[best] <= 0.0:
        return 0
    if len(scores) == 1:
        return 1 if scores[0] >= single_author_floor else 0
    runner_up = max(scores[:best] + scores[best + 1 :])
    return best + 1 if scores[best] - runner_up > threshold else 0


def link_and_position(
    registry: Iterable[AuthorRecord],
    index: Mapping[str, CitationRecord],
    threshold: float = POSITION_MARGIN,
    single_author_floor: float = SINGLE_AUTHOR_FLOOR,
) -> tuple[list[LinkedClaim], LinkReport]:
    """Link by DOI, identify positions, drop unidentifiable claims.

    The surviving claims are sorted on (author_id, doi) so downstream stages
    see a deterministic order no matter how the inputs were ordered.
    """
    report = LinkReport(position_margin=threshold, single_author_floor=single_author_floor)
    claims: list[LinkedClaim] = []
    for claim in link_by_doi(registry, index, report):
        names = [slot.name for slot in claim.citation.authors]
        position = identify_author_position(claim.cfn, names, threshold, single_author_floor)
        if position == 0:
            report.rejected += 1
            continue
        report.positioned += 1
        if len(names) == 1:
            report.single_author_accepted += 1
        claims.append(LinkedClaim(claim.doi, claim.author_id, claim.cfn, claim.citation, position))
    claims.sort(key=lambda c: (c.author_id, c.doi))
    return claims, report
