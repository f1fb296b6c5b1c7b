"""Distribution reports for corpus validation and block-structure profiling.

Every report is an ordered list of (key, proportion) bins summing to one,
written out as plot-ready delimited text so the curves can be redrawn and
compared against a reference corpus.  Frequency-style facets (name
popularity, block size) use logarithmic bucket edges (1, 2, 3-4, 5-8, ...)
so desk-scale and corpus-scale reports stay comparable.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from .builder import BlockDataset
from .ingest import CitationRecord
from .linker import LinkedClaim
from .namekit import MEASURES, is_variant, parse_name, variation_degree
from .util import write_tsv

UNKNOWN = "unknown"
DEFAULT_POSITION_CAP = 10


@dataclass(frozen=True)
class DistributionReport:
    facet: str
    bins: tuple[tuple[str, float], ...]
    total: int

    def proportion(self, key: str) -> float:
        for k, p in self.bins:
            if k == key:
                return p
        return 0.0


def _report(facet: str, counts: Counter, order: Sequence[str]) -> DistributionReport:
    total = sum(counts.values())
    bins = tuple((key, counts[key] / total) for key in order if counts[key] > 0) if total else ()
    return DistributionReport(facet=facet, bins=bins, total=total)


def _numeric_then_unknown(keys: Iterable[str]) -> list[str]:
    def sort_key(k: str):
        return (1, 0.0, k) if k == UNKNOWN else (0, float(k.split("-")[0].rstrip("+")), k)

    return sorted(set(keys), key=sort_key)


def log_bucket(value: int) -> str:
    """Logarithmic frequency bucket label: 1, 2, 3-4, 5-8, 9-16, ..."""
    if value < 1:
        raise ValueError("log buckets start at 1")
    if value <= 2:
        return str(value)
    lo = 2
    hi = 4
    while value > hi:
        lo, hi = hi, hi * 2
    return f"{lo + 1}-{hi}"


def year_distribution(citations: Iterable[CitationRecord]) -> DistributionReport:
    """Share of publications per year; citations without a year bin as unknown."""
    counts = Counter(str(c.year) if c.year is not None else UNKNOWN for c in citations)
    return _report("year", counts, _numeric_then_unknown(counts))


def position_distribution(
    claims: Iterable[LinkedClaim], cap: int = DEFAULT_POSITION_CAP
) -> DistributionReport:
    """Share of claims per identified byline position, capped at '<cap+1>+'."""
    counts = Counter()
    for claim in claims:
        counts[str(claim.position) if claim.position <= cap else f"{cap + 1}+"] += 1
    return _report("author_position", counts, _numeric_then_unknown(counts))


def _popularity_key(claim: LinkedClaim, kind: str) -> str:
    parsed = parse_name(claim.byline_name)
    family = parsed.family.lower()
    if kind == "LN":
        return family
    initial = parsed.given[:1].lower() if parsed.given else ""
    return f"{family}_{initial}"


def name_popularity(claims: Sequence[LinkedClaim], key: str = "LN") -> DistributionReport:
    """Distribution of name-frequency buckets over claims.

    A claim's name key is the parsed family name (LN) or family name plus
    first given initial (LNFI); its frequency is how often that key occurs in
    the input, bucketed logarithmically.
    """
    if key not in ("LN", "LNFI"):
        raise ValueError("popularity key must be 'LN' or 'LNFI'")
    keys = [_popularity_key(c, key) for c in claims]
    freq = Counter(keys)
    counts = Counter(log_bucket(freq[k]) for k in keys)
    return _report(f"name_popularity_{key}", counts, _numeric_then_unknown(counts))


def normalize_lookup_key(name: str) -> str:
    """Lookup-table key rule: lowercased, letters only, single-spaced."""
    words = ["".join(ch for ch in w.lower() if ch.isalpha()) for w in name.split()]
    return " ".join(w for w in words if w)


def load_lookup_table(path: str | Path) -> dict[str, str]:
    """Two-column TSV (name, category); keys are normalized on load."""
    table: dict[str, str] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        name, _, category = line.partition("\t")
        key = normalize_lookup_key(name)
        if key and key not in table:
            table[key] = category.strip()
    return table


def lookup_distribution(
    claims: Iterable[LinkedClaim],
    table: Mapping[str, str],
    facet: str = "lookup",
) -> DistributionReport:
    """Join claims to an external category table by byline name."""
    counts = Counter(table.get(normalize_lookup_key(c.byline_name), UNKNOWN) for c in claims)
    order = sorted(k for k in counts if k != UNKNOWN) + ([UNKNOWN] if counts[UNKNOWN] else [])
    return _report(facet, counts, order)


def block_profile(
    ds: BlockDataset,
    variant_measure: str = "endwith",
    char_sensitive: bool = True,
) -> tuple[DistributionReport, DistributionReport, DistributionReport]:
    """Block-structure views: block sizes, variants per block size, authors per block.

    A variant is a claim whose byline name varies from the family name parsed
    out of the block key; variant counts are distributed over the size bucket
    of the block they occur in.
    """
    size_counts = Counter()
    author_counts = Counter()
    variant_counts = Counter()
    for block in ds.blocks:
        bucket = log_bucket(block.size)
        size_counts[bucket] += 1
        author_counts[str(block.n_authors)] += 1
        family = parse_name(block.cfn_key).family
        for claim in block.claims():
            verdict = is_variant(claim.byline_name, family, variant_measure, char_sensitive)
            if verdict.is_variant:
                variant_counts[bucket] += 1
    return (
        _report("block_size", size_counts, _numeric_then_unknown(size_counts)),
        _report("variants_by_block_size", variant_counts, _numeric_then_unknown(variant_counts)),
        _report("authors_per_block", author_counts, _numeric_then_unknown(author_counts)),
    )


@dataclass(frozen=True)
class VariationRow:
    measure: str
    csvd: float
    civd: float
    total: int


def variation_report(
    claims: Sequence[LinkedClaim],
    measures: Sequence[str] = MEASURES,
) -> list[VariationRow]:
    """Character-sensitive and -insensitive variation degrees per measure.

    Byline names are compared against the family name parsed from the claim's
    registry full name, mirroring the construction of the published degrees.
    """
    rows = []
    for measure in measures:
        sensitive = []
        insensitive = []
        for claim in claims:
            family = parse_name(claim.cfn).family
            sensitive.append(is_variant(claim.byline_name, family, measure, True))
            insensitive.append(is_variant(claim.byline_name, family, measure, False))
        rows.append(
            VariationRow(
                measure=measure,
                csvd=variation_degree(sensitive),
                civd=variation_degree(insensitive),
                total=len(sensitive),
            )
        )
    return rows


@dataclass(frozen=True)
class ReportComparison:
    facet: str
    gaps: tuple[tuple[str, float, float, float], ...]  # key, a, b, |a-b|
    max_gap: float


def compare_reports(a: DistributionReport, b: DistributionReport) -> ReportComparison:
    """Per-bin absolute differences between two reports of the same facet."""
    keys = list(dict.fromkeys([k for k, _ in a.bins] + [k for k, _ in b.bins]))
    gaps = tuple((k, a.proportion(k), b.proportion(k), abs(a.proportion(k) - b.proportion(k))) for k in keys)
    max_gap = max((g[3] for g in gaps), default=0.0)
    return ReportComparison(facet=a.facet, gaps=gaps, max_gap=max_gap)


def write_report(report: DistributionReport, path: str | Path) -> None:
    write_tsv(path, [(report.facet, k, p) for k, p in report.bins], header=("facet", "key", "proportion"))


def write_comparison(comparison: ReportComparison, path: str | Path) -> None:
    rows = [(comparison.facet, k, a, b, gap) for k, a, b, gap in comparison.gaps]
    write_tsv(path, rows, header=("facet", "key", "left", "right", "abs_gap"))
