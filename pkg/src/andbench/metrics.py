"""Classification scores, B-cubed clustering scores, and the external-ID audit.

B-cubed looks at each element: precision is the share of its predicted
cluster that shares its gold cluster, recall the share of its gold cluster
captured by its predicted cluster.  Scores are averaged uniformly over all
elements pooled across blocks by default (a per-block average is available
for sensitivity checks).  The per-element ratios are accumulated in exact
rational arithmetic, so results are independent of summation order and match
a brute-force reference bit for bit.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .builder import Block, BlockDataset, PairwiseInstance


@dataclass(frozen=True)
class ClassificationScore:
    precision: float
    recall: float
    f1: float
    macro_f1: float


@dataclass(frozen=True)
class BCubedScore:
    b3_precision: float
    b3_recall: float
    b3_f1: float


@dataclass(frozen=True)
class ClusterAssignment:
    """Predicted cluster id per citation of one block."""

    cfn_key: str
    labels: dict[str, int]  # paper_id -> cluster id


def _prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f1


def classification_metrics(labels: Sequence[bool], predictions: Sequence[bool]) -> ClassificationScore:
    """P/R/F1 on the positive class plus the unweighted two-class Macro-F1."""
    if len(labels) != len(predictions) or not labels:
        raise ValueError("labels and predictions must be equal-length and non-empty")
    tp = fp = fn = tn = 0
    for y, yhat in zip(labels, predictions):
        if y and yhat:
            tp += 1
        elif not y and yhat:
            fp += 1
        elif y and not yhat:
            fn += 1
        else:
            tn += 1
    p, r, f1 = _prf(tp, fp, fn)
    _, _, f1_neg = _prf(tn, fn, fp)
    return ClassificationScore(precision=p, recall=r, f1=f1, macro_f1=(f1 + f1_neg) / 2)


def _block_sums(predicted: Sequence[Hashable], gold: Sequence[Hashable]) -> tuple[Fraction, Fraction, int]:
    """Exact sums of per-element B-cubed precision and recall for one block."""
    if len(predicted) != len(gold):
        raise ValueError("predicted and gold labellings must cover the same elements")
    pred_sizes = Counter(predicted)
    gold_sizes = Counter(gold)
    cell_sizes = Counter(zip(predicted, gold))
    p_sum = Fraction(0)
    r_sum = Fraction(0)
    for (c, g), inter in cell_sizes.items():
        p_sum += Fraction(inter * inter, pred_sizes[c])
        r_sum += Fraction(inter * inter, gold_sizes[g])
    return p_sum, r_sum, len(predicted)


def _harmonic(p: Fraction, r: Fraction) -> Fraction:
    return 2 * p * r / (p + r) if p + r else Fraction(0)


def bcubed_from_labels(
    blocks: Iterable[tuple[Sequence[Hashable], Sequence[Hashable]]],
    per_block: bool = False,
) -> BCubedScore:
    """B-cubed over (predicted, gold) labellings, one tuple per block.

    Cluster labels only need to be consistent inside a block; they are never
    compared across blocks.  With ``per_block=True`` the element averages are
    taken inside each block and the block means are averaged instead.
    """
    if per_block:
        bp = br = Fraction(0)
        n_blocks = 0
        for predicted, gold in blocks:
            p_sum, r_sum, n = _block_sums(predicted, gold)
            if n == 0:
                continue
            bp += p_sum / n
            br += r_sum / n
            n_blocks += 1
        if n_blocks == 0:
            raise ValueError("bcubed needs at least one non-empty block")
        p, r = bp / n_blocks, br / n_blocks
    else:
        p_total = r_total = Fraction(0)
        n_total = 0
        for predicted, gold in blocks:
            p_sum, r_sum, n = _block_sums(predicted, gold)
            p_total += p_sum
            r_total += r_sum
            n_total += n
        if n_total == 0:
            raise ValueError("bcubed needs at least one element")
        p, r = p_total / n_total, r_total / n_total
    return BCubedScore(b3_precision=float(p), b3_recall=float(r), b3_f1=float(_harmonic(p, r)))


def gold_labels(block: Block) -> tuple[list[str], list[str]]:
    """(paper_ids, author_ids) of a block's citations in canonical claim order."""
    papers, authors = [], []
    for claim in block.claims():
        papers.append(claim.paper_id)
        authors.append(claim.author_id)
    return papers, authors


def bcubed(
    assignments: Iterable[ClusterAssignment],
    ds: BlockDataset,
    per_block: bool = False,
) -> BCubedScore:
    """Score predicted per-block assignments against the author-id partition."""
    by_key = {b.cfn_key: b for b in ds.blocks}
    labelled = []
    for assignment in assignments:
        block = by_key[assignment.cfn_key]
        papers, authors = gold_labels(block)
        predicted = [assignment.labels[p] for p in papers]
        labelled.append((predicted, authors))
    return bcubed_from_labels(labelled, per_block=per_block)


@dataclass(frozen=True)
class AuditResult:
    bcubed: BCubedScore
    classification: ClassificationScore
    missing_ids: int


def audit_id_system(
    ds: BlockDataset,
    pairs: Sequence[PairwiseInstance],
    external_ids: Mapping[tuple[str, int], str],
    per_block: bool = False,
) -> AuditResult:
    """Score an externally supplied author-ID assignment against the gold labels.

    ``external_ids`` maps (paper_id, position) to the external system's author
    id.  Claims without an id become their own singleton cluster (and count as
    'different' in every pair) and are reported.  The ids act as a predicted
    clustering per block for B-cubed and as pairwise same/different predictions
    for the classification metrics.
    """
    resolved: dict[tuple[str, int], str] = {}
    missing_keys: set[tuple[str, int]] = set()

    def resolve(claim) -> str:
        key = (claim.paper_id, claim.position)
        if key not in resolved:
            ext = external_ids.get(key)
            if ext is None:
                missing_keys.add(key)
                ext = f"\x00missing:{claim.paper_id}:{claim.position}"
            resolved[key] = ext
        return resolved[key]

    labelled = []
    for block in ds.blocks:
        predicted, gold = [], []
        for claim in block.claims():
            predicted.append(resolve(claim))
            gold.append(claim.author_id)
        if predicted:
            labelled.append((predicted, gold))
    b3 = bcubed_from_labels(labelled, per_block=per_block)

    labels = [p.label for p in pairs]
    predictions = [resolve(p.left) == resolve(p.right) for p in pairs]
    cls = classification_metrics(labels, predictions)
    return AuditResult(bcubed=b3, classification=cls, missing_ids=len(missing_keys))
