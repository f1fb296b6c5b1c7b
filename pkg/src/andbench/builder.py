"""Block-based dataset construction, pairwise sampling, trimming, and splits.

Positioned claims are grouped into citation groups (one per registry author)
and citation groups into blocks keyed by the exact full registry name, so a
block holds every author who declared that name.  The pairwise dataset
samples unordered citation pairs inside each block, labelled by author-id
equality; a per-block cap keeps giant blocks from dominating.  Splits are
assigned per block key and inherited by the pairwise instances so the two
datasets stay aligned fold by fold.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .ingest import AuthorSlot, CitationRecord
from .linker import LinkedClaim
from .util import FORMAT_VERSION, derive_seed, json_line, parallel_map, read_jsonl

FOLDS = ("train", "validation", "test")
DEFAULT_RATIOS = (50, 25, 25)
DEFAULT_PAIR_CAP = 10


@dataclass(frozen=True)
class CitationGroup:
    author_id: str
    items: tuple[LinkedClaim, ...]

    @property
    def size(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class Block:
    cfn_key: str
    groups: tuple[CitationGroup, ...]

    @property
    def n_authors(self) -> int:
        return len(self.groups)

    @property
    def size(self) -> int:
        return sum(g.size for g in self.groups)

    def claims(self) -> Iterator[LinkedClaim]:
        for group in self.groups:
            yield from group.items


@dataclass
class BlockDataset:
    blocks: list[Block]
    provenance: dict = field(default_factory=dict)

    def __iter__(self) -> Iterator[Block]:
        return iter(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def n_citations(self) -> int:
        return sum(b.size for b in self.blocks)


@dataclass(frozen=True)
class PairwiseInstance:
    left: LinkedClaim
    right: LinkedClaim
    label: bool
    cfn_key: str


@dataclass
class SplitAssignment:
    folds: dict[str, str]
    ratios: tuple[int, int, int] = DEFAULT_RATIOS

    def fold_of(self, cfn_key: str) -> str:
        return self.folds[cfn_key]

    def keys_in(self, fold: str) -> list[str]:
        return sorted(k for k, f in self.folds.items() if f == fold)


def build_block_dataset(claims: Iterable[LinkedClaim], provenance: dict | None = None) -> BlockDataset:
    """Group claims into citation groups by author and into blocks by exact CFN.

    Ordering is fully deterministic: blocks by key, groups by author id,
    items by DOI (first claim wins when an author claims a DOI twice).
    """
    by_block: dict[str, dict[str, dict[str, LinkedClaim]]] = {}
    for claim in claims:
        if claim.position < 1:
            raise ValueError(f"claim {claim.author_id}/{claim.doi} has no identified position")
        key = claim.cfn.strip()
        groups = by_block.setdefault(key, {})
        items = groups.setdefault(claim.author_id, {})
        items.setdefault(claim.doi, claim)

    blocks = []
    for key in sorted(by_block):
        groups = tuple(
            CitationGroup(
                author_id=author_id,
                items=tuple(items[doi] for doi in sorted(items)),
            )
            for author_id, items in sorted(by_block[key].items())
        )
        blocks.append(Block(cfn_key=key, groups=groups))
    return BlockDataset(blocks=blocks, provenance=dict(provenance or {}))


def trim_single_author_blocks(ds: BlockDataset) -> BlockDataset:
    """Keep only blocks with at least two real authors (idempotent)."""
    kept = [b for b in ds.blocks if b.n_authors >= 2]
    provenance = dict(ds.provenance)
    provenance["trimmed"] = True
    return BlockDataset(blocks=kept, provenance=provenance)


def _pair_from_linear(index: int, n: int) -> tuple[int, int]:
    # decode a linear index over the upper triangle of an n x n grid into (i, j), i < j
    i = 0
    row = n - 1
    while index >= row:
        index -= row
        i += 1
        row -= 1
    return i, i + 1 + index


def sample_pairwise(
    ds: BlockDataset,
    pairs_per_block_cap: int = DEFAULT_PAIR_CAP,
    seed: int = 0,
    threads: int = 1,
) -> list[PairwiseInstance]:
    """Sample unordered citation pairs within each block, capped per block.

    Sampling is uniform without replacement over a block's pairs, driven by a
    per-block RNG stream derived from the seed and the block key, so neither
    block order nor thread count can change the output.  No class rebalancing
    is applied; the natural same-author skew of the blocks carries through.
    """
    if pairs_per_block_cap < 1:
        raise ValueError("pairs_per_block_cap must be >= 1")

    def sample_block(block: Block) -> list[PairwiseInstance]:
        claims = list(block.claims())
        n = len(claims)
        total = n * (n - 1) // 2
        if total == 0:
            return []
        rng = random.Random(derive_seed(seed, "pairwise", block.cfn_key))
        if total <= pairs_per_block_cap:
            chosen = range(total)
        else:
            chosen = sorted(rng.sample(range(total), pairs_per_block_cap))
        out = []
        for linear in chosen:
            i, j = _pair_from_linear(linear, n)
            left, right = claims[i], claims[j]
            out.append(
                PairwiseInstance(
                    left=left,
                    right=right,
                    label=left.author_id == right.author_id,
                    cfn_key=block.cfn_key,
                )
            )
        return out

    per_block = parallel_map(sample_block, ds.blocks, threads=threads)
    return [pair for chunk in per_block for pair in chunk]


def split(
    ds: BlockDataset,
    pairs: Sequence[PairwiseInstance] = (),
    ratios: tuple[int, int, int] = DEFAULT_RATIOS,
    seed: int = 0,
) -> SplitAssignment:
    """Assign every block key to one fold; pairwise instances follow their key."""
    if sum(ratios) != 100:
        raise ValueError(f"split ratios must sum to 100, got {ratios}")
    keys = sorted(b.cfn_key for b in ds.blocks)
    rng = random.Random(derive_seed(seed, "split"))
    rng.shuffle(keys)
    n = len(keys)
    n_train = round(n * ratios[0] / 100)
    n_val = round(n * ratios[1] / 100)
    folds: dict[str, str] = {}
    for i, key in enumerate(keys):
        if i < n_train:
            folds[key] = "train"
        elif i < n_train + n_val:
            folds[key] = "validation"
        else:
            folds[key] = "test"
    missing = {p.cfn_key for p in pairs} - folds.keys()
    if missing:
        raise ValueError(f"pairwise instances reference unknown block keys: {sorted(missing)[:3]}")
    return SplitAssignment(folds=folds, ratios=tuple(ratios))


# ---------------------------------------------------------------------------
# file formats (one record per line)

def _claim_to_obj(claim: LinkedClaim) -> dict:
    cit = claim.citation
    return {
        "doi": claim.doi,
        "author_id": claim.author_id,
        "cfn": claim.cfn,
        "position": claim.position,
        "citation": {
            "doi": cit.doi,
            "paper_id": cit.paper_id,
            "title": cit.title,
            "abstract": cit.abstract,
            "venue": cit.venue,
            "year": cit.year,
            "authors": [{"name": s.name, "affiliation": s.affiliation} for s in cit.authors],
        },
    }


def _claim_from_obj(obj: dict) -> LinkedClaim:
    cit = obj["citation"]
    citation = CitationRecord(
        doi=cit["doi"],
        paper_id=cit["paper_id"],
        title=cit["title"],
        abstract=cit["abstract"],
        venue=cit["venue"],
        year=cit["year"],
        authors=tuple(AuthorSlot(name=s["name"], affiliation=s["affiliation"]) for s in cit["authors"]),
    )
    return LinkedClaim(
        doi=obj["doi"],
        author_id=obj["author_id"],
        cfn=obj["cfn"],
        citation=citation,
        position=obj["position"],
    )


def write_claims(claims: Iterable[LinkedClaim], path: str | Path) -> int:
    """Positioned claims with embedded citations, one per line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = 0
    with path.open("w", encoding="utf-8") as fh:
        for claim in claims:
            fh.write(json_line(_claim_to_obj(claim)) + "\n")
            n += 1
    return n


def read_claims(path: str | Path) -> list[LinkedClaim]:
    return [_claim_from_obj(obj) for obj in read_jsonl(path)]


def write_dataset(ds: BlockDataset, path: str | Path) -> None:
    """One header line (format version + provenance), then one block per line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        header = {"type": "header", "format_version": FORMAT_VERSION, "provenance": ds.provenance}
        fh.write(json_line(header) + "\n")
        for block in ds.blocks:
            obj = {
                "type": "block",
                "cfn_key": block.cfn_key,
                "groups": [
                    {"author_id": g.author_id, "items": [_claim_to_obj(c) for c in g.items]}
                    for g in block.groups
                ],
            }
            fh.write(json_line(obj) + "\n")


def read_dataset(path: str | Path) -> BlockDataset:
    blocks: list[Block] = []
    provenance: dict = {}
    for obj in read_jsonl(path):
        if obj.get("type") == "header":
            provenance = obj.get("provenance", {})
            continue
        groups = tuple(
            CitationGroup(
                author_id=g["author_id"],
                items=tuple(_claim_from_obj(c) for c in g["items"]),
            )
            for g in obj["groups"]
        )
        blocks.append(Block(cfn_key=obj["cfn_key"], groups=groups))
    return BlockDataset(blocks=blocks, provenance=provenance)


def write_pairs(pairs: Iterable[PairwiseInstance], path: str | Path) -> int:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = 0
    with path.open("w", encoding="utf-8") as fh:
        for p in pairs:
            obj = {
                "cfn_key": p.cfn_key,
                "left_paper_id": p.left.paper_id,
                "right_paper_id": p.right.paper_id,
                "label": p.label,
            }
            fh.write(json_line(obj) + "\n")
            n += 1
    return n


def read_pairs(path: str | Path, ds: BlockDataset) -> list[PairwiseInstance]:
    """Resolve a pairwise file against its block dataset."""
    claims_by_key: dict[tuple[str, str], LinkedClaim] = {}
    for block in ds.blocks:
        for claim in block.claims():
            claims_by_key.setdefault((block.cfn_key, claim.paper_id), claim)
    pairs = []
    for obj in read_jsonl(path):
        left = claims_by_key[(obj["cfn_key"], obj["left_paper_id"])]
        right = claims_by_key[(obj["cfn_key"], obj["right_paper_id"])]
        pairs.append(PairwiseInstance(left=left, right=right, label=bool(obj["label"]), cfn_key=obj["cfn_key"]))
    return pairs


def write_split(assignment: SplitAssignment, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(json_line({"type": "header", "ratios": list(assignment.ratios)}) + "\n")
        for key in sorted(assignment.folds):
            fh.write(json_line({"cfn_key": key, "fold": assignment.folds[key]}) + "\n")


def read_split(path: str | Path) -> SplitAssignment:
    folds: dict[str, str] = {}
    ratios = DEFAULT_RATIOS
    for obj in read_jsonl(path):
        if obj.get("type") == "header":
            ratios = tuple(obj["ratios"])
            continue
        folds[obj["cfn_key"]] = obj["fold"]
    return SplitAssignment(folds=folds, ratios=ratios)
