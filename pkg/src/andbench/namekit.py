"""Name normalization, character-bigram similarity, and last-name variation measures.

The similarity used for author-position identification is a Dice coefficient
over character 2-gram multisets:

    dice(a, b) = 2 * |grams(a) & grams(b)| / (|grams(a)| + |grams(b)|)

where ``grams(x)`` is the multiset of consecutive character pairs of the
normalized name (lowercased, letters only).  Multiset semantics keep
``|grams(x)| == len(x) - 1``, so e.g. "Florina Carmen Ciornei" scores exactly
12/27 against both "M.C. Ciornei" and "F.C. Ciornei".

Last-name variation is measured two ways: ``endwith`` asks whether a
printed byline name ends with the registry family name, ``parser`` extracts
the family name with the rule-based parser and asks for equality.  Each
measure has a character-sensitive and a character-insensitive (transliterated)
reading; the transliteration map, particle and suffix tables are data files
shipped with the package and can be overridden.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable


# ---------------------------------------------------------------------------
# shipped data tables

def _data_text(name: str) -> str:
    return resources.files("andbench.data").joinpath(name).read_text(encoding="utf-8")


def _load_wordlist(text: str) -> frozenset[str]:
    words = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.append(line.lower())
    return frozenset(words)


def load_translit_table(path: str | Path | None = None) -> dict[str, str]:
    """Load a char -> base-letter map; default is the shipped folding table."""
    text = Path(path).read_text(encoding="utf-8") if path else _data_text("translit.tsv")
    table: dict[str, str] = {}
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        src, _, dst = line.partition("\t")
        if src:
            table[src] = dst
    return table


def load_particles(path: str | Path | None = None) -> frozenset[str]:
    text = Path(path).read_text(encoding="utf-8") if path else _data_text("particles.txt")
    return _load_wordlist(text)


def load_suffixes(path: str | Path | None = None) -> frozenset[str]:
    text = Path(path).read_text(encoding="utf-8") if path else _data_text("suffixes.txt")
    return _load_wordlist(text)


_TRANSLIT = load_translit_table()
PARTICLES = load_particles()
SUFFIXES = load_suffixes()


# ---------------------------------------------------------------------------
# normalization and bigram profiles

@dataclass(frozen=True)
class NormalizedName:
    """Lowercased, letters-only form of a raw name (diacritics preserved)."""

    text: str
    source: str


@dataclass(frozen=True)
class BigramProfile:
    """Multiset of consecutive character pairs; ``size`` counts multiplicity."""

    grams: Counter
    size: int


def normalize_for_ngrams(raw: str) -> NormalizedName:
    """Lowercase and drop every non-letter character (spaces, dots, hyphens)."""
    text = "".join(ch for ch in raw.lower() if ch.isalpha())
    return NormalizedName(text=text, source=raw)


def transliterate(raw: str, table: dict[str, str] | None = None) -> str:
    """Fold accented or stroked Latin letters to their base letters ('á' -> 'a').

    Characters outside the table pass through unchanged; the fold is
    idempotent because the table only targets ASCII letters.
    """
    tab = _TRANSLIT if table is None else table
    return "".join(tab.get(ch, ch) for ch in raw)


def bigrams(name: NormalizedName | str) -> BigramProfile:
    """Character 2-gram multiset of a normalized name."""
    text = name.text if isinstance(name, NormalizedName) else name
    grams = Counter(text[i : i + 2] for i in range(len(text) - 1))
    return BigramProfile(grams=grams, size=max(0, len(text) - 1))


def dice_similarity(a: BigramProfile, b: BigramProfile) -> float:
    """2 * |multiset intersection| / (|a| + |b|); 0.0 when both are empty."""
    if a.size == 0 and b.size == 0:
        return 0.0
    inter = sum((a.grams & b.grams).values())
    return 2.0 * inter / (a.size + b.size)


def name_dice(a: str, b: str) -> float:
    """Dice similarity of two raw names (normalize, then compare 2-grams)."""
    return dice_similarity(bigrams(normalize_for_ngrams(a)), bigrams(normalize_for_ngrams(b)))


def bigram_jaccard(a: str, b: str) -> float:
    """Set Jaccard over distinct 2-grams of two raw names (classifier feature)."""
    ga = set(bigrams(normalize_for_ngrams(a)).grams)
    gb = set(bigrams(normalize_for_ngrams(b)).grams)
    if not ga and not gb:
        return 0.0
    return len(ga & gb) / len(ga | gb)


# ---------------------------------------------------------------------------
# rule-based name parsing

@dataclass(frozen=True)
class ParsedName:
    given: str
    particles: tuple[str, ...]
    family: str
    suffix: str


def _bare(token: str) -> str:
    return token.strip(".,").lower()


def parse_name(
    full: str,
    particles: frozenset[str] = PARTICLES,
    suffixes: frozenset[str] = SUFFIXES,
) -> ParsedName:
    """Split a full name into given names, particles, family name, and suffix.

    Rule: strip generational suffixes from the end, take the last remaining
    token as the family core, then absorb trailing particles ("van", "de", ...)
    into the family.  Single-token input becomes a bare family name.
    """
    tokens = full.split()
    if not tokens:
        raise ValueError("cannot parse an empty name")

    suffix_parts: list[str] = []
    while len(tokens) > 1 and _bare(tokens[-1]) in suffixes:
        suffix_parts.insert(0, _bare(tokens.pop()))

    core = tokens.pop()
    absorbed: list[str] = []
    while tokens and _bare(tokens[-1]) in particles:
        absorbed.insert(0, tokens.pop())

    return ParsedName(
        given=" ".join(tokens),
        particles=tuple(absorbed),
        family=" ".join(absorbed + [core]),
        suffix=" ".join(suffix_parts),
    )


# ---------------------------------------------------------------------------
# last-name variation

ENDWITH = "endwith"
PARSER = "parser"
MEASURES = (ENDWITH, PARSER)


@dataclass(frozen=True)
class VariationVerdict:
    measure: str
    char_sensitive: bool
    is_variant: bool


def is_variant(
    fn: str,
    official_family: str,
    measure: str = ENDWITH,
    char_sensitive: bool = True,
    translit_table: dict[str, str] | None = None,
) -> VariationVerdict:
    """Decide whether a printed byline name varies from the official family name.

    ``endwith`` tests whether the lowercased byline ends with the family name;
    ``parser`` tests whether the parsed-out family name equals it.  With
    ``char_sensitive=False`` both comparands are transliterated first, which
    can only reconcile names, never split them, so the insensitive reading
    never finds more variants than the sensitive one.
    """
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}")
    if not fn.strip() or not official_family.strip():
        raise ValueError("byline name and family name must be non-empty")

    family = official_family.strip().lower()
    if measure == ENDWITH:
        probe = fn.strip().lower()
    else:
        probe = parse_name(fn).family.lower()

    if not char_sensitive:
        probe = transliterate(probe, translit_table)
        family = transliterate(family, translit_table)

    matched = probe.endswith(family) if measure == ENDWITH else probe == family
    return VariationVerdict(measure=measure, char_sensitive=char_sensitive, is_variant=not matched)


def variation_degree(verdicts: Iterable[VariationVerdict]) -> float:
    """Fraction of verdicts flagged as variants (the CSVD/CIVD ratio)."""
    total = 0
    variants = 0
    for verdict in verdicts:
        total += 1
        variants += verdict.is_variant
    if total == 0:
        raise ValueError("variation_degree needs at least one verdict")
    return variants / total
