"""Hierarchical agglomerative clustering within blocks and the threshold tuner.

Distances are ``1 - predicted same-author probability``.  Merging continues
while the minimum linkage distance stays at or below the threshold; equal
candidates are resolved toward the pair with the smallest indices in the
canonical citation order (claims sorted by paper id), which makes the output
independent of input order.  The tuner walks the threshold grid from 0.0 to
1.0 and keeps the smallest threshold that maximizes B-cubed F1 on the
validation blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .builder import Block, PairwiseInstance
from .linker import LinkedClaim
from .metrics import BCubedScore, ClusterAssignment, bcubed_from_labels
from .util import parallel_map

LINKAGES = ("average", "single", "complete")
GRID_STEP = 0.05


@dataclass
class DistanceMatrix:
    cfn_key: str
    paper_ids: list[str]
    gold_author_ids: list[str]
    distances: np.ndarray  # symmetric, zero diagonal, values in [0, 1]


def canonical_claims(block: Block) -> list[LinkedClaim]:
    """Block claims sorted by (paper_id, author_id); the clustering order."""
    return sorted(block.claims(), key=lambda c: (c.paper_id, c.author_id))


def block_distances(block: Block, scorer: Callable[[PairwiseInstance], float]) -> DistanceMatrix:
    """Pairwise distances 1 - scorer(pair) over a block's citations.

    ``scorer`` maps a pair of claims to a same-author probability; when it
    offers a ``batch`` method (as the trained model scorer does) all of the
    block's pairs are scored in one call.
    """
    claims = canonical_claims(block)
    n = len(claims)
    pairs = [
        PairwiseInstance(
            left=claims[i],
            right=claims[j],
            label=claims[i].author_id == claims[j].author_id,
            cfn_key=block.cfn_key,
        )
        for i in range(n)
        for j in range(i + 1, n)
    ]
    batch = getattr(scorer, "batch", None)
    probs = list(batch(pairs)) if batch is not None else [scorer(p) for p in pairs]

    d = np.zeros((n, n), dtype=float)
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            dist = 1.0 - float(probs[k])
            d[i, j] = d[j, i] = min(1.0, max(0.0, dist))
            k += 1
    return DistanceMatrix(
        cfn_key=block.cfn_key,
        paper_ids=[c.paper_id for c in claims],
        gold_author_ids=[c.author_id for c in claims],
        distances=d,
    )


def hac_labels(distances: np.ndarray, threshold: float, linkage: str = "average") -> list[int]:
    """Cluster labels for a distance matrix cut at ``threshold``.

    Labels are renumbered 0..k-1 by first appearance in element order.
    """
    if linkage not in LINKAGES:
        raise ValueError(f"unknown linkage {linkage!r}")
    n = len(distances)
    if n == 0:
        return []
    d = distances.astype(float).copy()
    np.fill_diagonal(d, np.inf)
    sizes = np.ones(n)
    members: list[list[int] | None] = [[i] for i in range(n)]
    active = n

    while active > 1:
        flat = np.argmin(d)
        i, j = divmod(int(flat), n)
        if i > j:
            i, j = j, i
        if d[i, j] > threshold:
            break
        # merge j into i; Lance-Williams update of row/column i
        row_i, row_j = d[i], d[j]
        if linkage == "average":
            merged = (sizes[i] * row_i + sizes[j] * row_j) / (sizes[i] + sizes[j])
        elif linkage == "single":
            merged = np.minimum(row_i, row_j)
        else:
            merged = np.maximum(row_i, row_j)
        d[i, :] = merged
        d[:, i] = merged
        d[i, i] = np.inf
        d[j, :] = np.inf
        d[:, j] = np.inf
        sizes[i] += sizes[j]
        members[i].extend(members[j])  # type: ignore[union-attr]
        members[j] = None
        active -= 1

    label_of_element: dict[int, int] = {}
    for gid, group in enumerate(members):
        if group is None:
            continue
        for idx in group:
            label_of_element[idx] = gid
    labels = [0] * n
    seen: dict[int, int] = {}
    for idx in range(n):
        gid = label_of_element[idx]
        if gid not in seen:
            seen[gid] = len(seen)
        labels[idx] = seen[gid]
    return labels


def hac(matrix: DistanceMatrix, threshold: float, linkage: str = "average") -> ClusterAssignment:
    labels = hac_labels(matrix.distances, threshold, linkage)
    return ClusterAssignment(
        cfn_key=matrix.cfn_key,
        labels=dict(zip(matrix.paper_ids, labels)),
    )


def threshold_grid(lo: float = 0.0, hi: float = 1.0, step: float = GRID_STEP) -> list[float]:
    """Inclusive grid [lo, hi]; default 0.00, 0.05, ..., 1.00 (21 points)."""
    n = int(round((hi - lo) / step))
    return [round(lo + k * step, 10) for k in range(n + 1)]


@dataclass(frozen=True)
class TunePoint:
    threshold: float
    score: BCubedScore


@dataclass(frozen=True)
class TuneResult:
    best_threshold: float
    grid: tuple[TunePoint, ...]


def tune_threshold(
    matrices: Iterable[DistanceMatrix],
    lo: float = 0.0,
    hi: float = 1.0,
    step: float = GRID_STEP,
    linkage: str = "average",
    per_block: bool = False,
    threads: int = 1,
) -> TuneResult:
    """Grid-search the cut threshold maximizing B-cubed F1 over the given blocks.

    Ties go to the smaller threshold.  Pass the validation-fold distance
    matrices; they are clustered once per grid point.
    """
    mats = list(matrices)
    if not mats:
        raise ValueError("tune_threshold needs at least one block")
    grid = threshold_grid(lo, hi, step)

    def evaluate(threshold: float) -> TunePoint:
        labelled = [
            (hac_labels(m.distances, threshold, linkage), m.gold_author_ids)
            for m in mats
        ]
        return TunePoint(threshold=threshold, score=bcubed_from_labels(labelled, per_block=per_block))

    points = parallel_map(evaluate, grid, threads=threads)
    best = points[0]
    for point in points[1:]:
        if point.score.b3_f1 > best.score.b3_f1:
            best = point
    return TuneResult(best_threshold=best.threshold, grid=tuple(points))
