"""Pair features and the random-forest same-author classifier.

A citation pair is described by four base features (byline-name similarity
as set-Jaccard over character 2-grams, absolute publication-year gap,
word-level Jaccard of venues and of affiliations) plus one optional content
feature over title+abstract: word Jaccard, tf-idf cosine, or scores supplied
by an external plugin file.  Missing metadata contributes similarity 0 plus
an explicit missing-mask feature, and a missing year gap is imputed with the
training-fold median so the trees can learn missingness directly.

The forest bags 100 purity-grown CART trees by default (bootstrap per tree,
ceil(sqrt(d)) random split candidates per node, Gini impurity, nodes with
fewer than two samples never split).  tf-idf uses the smoothed inverse
document frequency  idf(t) = ln((1 + N) / (1 + df(t))) + 1  and cosine over
L2-normalized raw-count vectors, fit on training-fold content only.
"""

from __future__ import annotations

import math
import re
import statistics
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .builder import PairwiseInstance
from .linker import LinkedClaim
from .namekit import bigram_jaccard
from .util import derive_seed, parallel_map

CF_KINDS = ("none", "jaccard", "tfidf", "plugin")
DEFAULT_N_TREES = 100

_TOKEN_SPLIT = re.compile(r"[^0-9a-z]+")


def word_tokens(text: str) -> list[str]:
    return [tok for tok in _TOKEN_SPLIT.split(text.lower()) if tok]


def word_jaccard(a: str, b: str) -> float:
    """Set Jaccard over lowercased word tokens; 0.0 when both sides are empty."""
    sa, sb = set(word_tokens(a)), set(word_tokens(b))
    if not sa and not sb:
        return 0.0
    return len(sa & sb) / len(sa | sb)


def year_gap(y1: int, y2: int) -> int:
    return abs(int(y1) - int(y2))


def name_similarity(n1: str, n2: str) -> float:
    """Set Jaccard over character 2-grams (distinct from the linker's Dice)."""
    return bigram_jaccard(n1, n2)


# ---------------------------------------------------------------------------
# tf-idf content similarity

@dataclass
class TfidfIndex:
    df: dict[str, int]
    n_docs: int

    def idf(self, term: str) -> float:
        return math.log((1 + self.n_docs) / (1 + self.df.get(term, 0))) + 1.0


def fit_tfidf(train_contents: Iterable[str]) -> TfidfIndex:
    """Document frequencies over the training-fold contents only."""
    df: dict[str, int] = {}
    n = 0
    for doc in train_contents:
        n += 1
        for term in set(word_tokens(doc)):
            df[term] = df.get(term, 0) + 1
    return TfidfIndex(df=df, n_docs=n)


def _tfidf_vector(index: TfidfIndex, text: str) -> dict[str, float]:
    counts: dict[str, int] = {}
    for term in word_tokens(text):
        counts[term] = counts.get(term, 0) + 1
    vec = {term: tf * index.idf(term) for term, tf in counts.items()}
    norm = math.sqrt(sum(w * w for w in vec.values()))
    if norm == 0.0:
        return {}
    return {term: w / norm for term, w in vec.items()}


def content_tfidf_sim(index: TfidfIndex, a: str, b: str) -> float:
    """Cosine of the tf-idf vectors of two documents."""
    va, vb = _tfidf_vector(index, a), _tfidf_vector(index, b)
    if len(vb) < len(va):
        va, vb = vb, va
    return sum(w * vb[t] for t, w in va.items() if t in vb)


# ---------------------------------------------------------------------------
# feature extraction

MISSABLE_FIELDS = ("year", "venue", "affil", "content")


@dataclass(frozen=True)
class FeatureVector:
    name_sim: float
    year_gap: float
    venue_sim: float
    affil_sim: float
    content_sim: float | None
    missing: dict[str, bool]


def claim_content(claim: LinkedClaim) -> str:
    return f"{claim.citation.title} {claim.citation.abstract}".strip()


class FeatureExtractor:
    """Turns citation pairs into numeric rows; fit on the training fold."""

    def __init__(
        self,
        cf_kind: str = "none",
        tfidf: TfidfIndex | None = None,
        year_gap_impute: float = 0.0,
        plugin_scores: Mapping[tuple[str, str, str], float] | None = None,
    ):
        if cf_kind not in CF_KINDS:
            raise ValueError(f"unknown content-feature kind {cf_kind!r}")
        if cf_kind == "tfidf" and tfidf is None:
            raise ValueError("cf_kind 'tfidf' needs a fitted TfidfIndex")
        self.cf_kind = cf_kind
        self.tfidf = tfidf
        self.year_gap_impute = float(year_gap_impute)
        self.plugin_scores = dict(plugin_scores or {})

    @property
    def with_content(self) -> bool:
        return self.cf_kind != "none"

    def feature_names(self) -> list[str]:
        names = ["name_sim", "year_gap", "venue_sim", "affil_sim"]
        if self.with_content:
            names.append("content_sim")
        names += ["year_missing", "venue_missing", "affil_missing"]
        if self.with_content:
            names.append("content_missing")
        return names

    def _content_sim(self, pair: PairwiseInstance) -> tuple[float, bool]:
        if self.cf_kind == "plugin":
            key = (pair.cfn_key, pair.left.paper_id, pair.right.paper_id)
            swapped = (pair.cfn_key, pair.right.paper_id, pair.left.paper_id)
            score = self.plugin_scores.get(key, self.plugin_scores.get(swapped))
            return (float(score), False) if score is not None else (0.0, True)
        a, b = claim_content(pair.left), claim_content(pair.right)
        if not a or not b:
            return 0.0, True
        if self.cf_kind == "jaccard":
            return word_jaccard(a, b), False
        return content_tfidf_sim(self.tfidf, a, b), False

    def extract(self, pair: PairwiseInstance) -> FeatureVector:
        left, right = pair.left, pair.right
        missing = dict.fromkeys(MISSABLE_FIELDS, False)

        name_sim = name_similarity(left.byline_name, right.byline_name)

        y1, y2 = left.citation.year, right.citation.year
        if y1 is None or y2 is None:
            gap, missing["year"] = self.year_gap_impute, True
        else:
            gap = float(year_gap(y1, y2))

        v1, v2 = left.citation.venue, right.citation.venue
        if not v1.strip() or not v2.strip():
            venue_sim, missing["venue"] = 0.0, True
        else:
            venue_sim = word_jaccard(v1, v2)

        a1, a2 = left.affiliation, right.affiliation
        if not a1.strip() or not a2.strip():
            affil_sim, missing["affil"] = 0.0, True
        else:
            affil_sim = word_jaccard(a1, a2)

        if self.with_content:
            content_sim, missing["content"] = self._content_sim(pair)
        else:
            content_sim = None

        return FeatureVector(
            name_sim=name_sim,
            year_gap=gap,
            venue_sim=venue_sim,
            affil_sim=affil_sim,
            content_sim=content_sim,
            missing=missing,
        )

    def to_row(self, fv: FeatureVector) -> list[float]:
        row = [fv.name_sim, fv.year_gap, fv.venue_sim, fv.affil_sim]
        if self.with_content:
            row.append(fv.content_sim if fv.content_sim is not None else 0.0)
        row += [float(fv.missing["year"]), float(fv.missing["venue"]), float(fv.missing["affil"])]
        if self.with_content:
            row.append(float(fv.missing["content"]))
        return row

    def matrix(self, pairs: Sequence[PairwiseInstance], threads: int = 1) -> tuple[np.ndarray, np.ndarray]:
        rows = parallel_map(lambda p: self.to_row(self.extract(p)), pairs, threads=threads)
        X = np.asarray(rows, dtype=float).reshape(len(rows), len(self.feature_names()))
        y = np.asarray([p.label for p in pairs], dtype=np.int8)
        return X, y


def extract_features(pair: PairwiseInstance, cf_kind: str = "none", **kwargs) -> FeatureVector:
    """One-off extraction with default settings; see FeatureExtractor for folds."""
    return FeatureExtractor(cf_kind=cf_kind, **kwargs).extract(pair)


def fit_extractor(
    train_pairs: Sequence[PairwiseInstance],
    cf_kind: str = "none",
    train_contents: Iterable[str] | None = None,
    plugin_scores: Mapping[tuple[str, str, str], float] | None = None,
) -> FeatureExtractor:
    """Fit imputation and (when requested) the tf-idf index on the training fold."""
    gaps = [
        year_gap(p.left.citation.year, p.right.citation.year)
        for p in train_pairs
        if p.left.citation.year is not None and p.right.citation.year is not None
    ]
    impute = float(statistics.median(gaps)) if gaps else 0.0
    tfidf = None
    if cf_kind == "tfidf":
        if train_contents is None:
            train_contents = sorted(
                {claim_content(c) for p in train_pairs for c in (p.left, p.right)}
            )
        tfidf = fit_tfidf(train_contents)
    return FeatureExtractor(
        cf_kind=cf_kind, tfidf=tfidf, year_gap_impute=impute, plugin_scores=plugin_scores
    )


# ---------------------------------------------------------------------------
# random forest

@dataclass
class ForestModel:
    trees: list[dict]
    n_trees: int
    seed: int
    feature_names: list[str] = field(default_factory=list)


def _gini(pos: float, n: float) -> float:
    if n <= 0:
        return 0.0
    p = pos / n
    return 2.0 * p * (1.0 - p)


def _grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    rng: np.random.Generator,
    max_features: int,
    min_samples_split: int,
    importances: np.ndarray,
) -> dict:
    n_root = len(y)
    root: dict = {}
    stack: list[tuple[dict, np.ndarray]] = [(root, np.arange(n_root))]

    while stack:
        node, idx = stack.pop()
        ys = y[idx]
        n = len(idx)
        pos = int(ys.sum())
        if pos == 0 or pos == n or n < min_samples_split:
            node.update(p=pos / n, n=n)
            continue

        parent_imp = _gini(pos, n)
        # features are drawn without replacement; ones that are constant within
        # the node do not count against the candidate budget
        candidates = rng.permutation(X.shape[1])
        informative_seen = 0
        best_gain = 0.0
        best: tuple[int, float] | None = None
        for f in candidates:
            if informative_seen >= max_features:
                break
            xs = X[idx, f]
            order = np.argsort(xs, kind="stable")
            xs_sorted = xs[order]
            cum_pos = np.cumsum(ys[order])
            ks = np.arange(1, n)
            valid = xs_sorted[1:] > xs_sorted[:-1]
            if not valid.any():
                continue
            informative_seen += 1
            nl = ks.astype(float)
            nr = n - nl
            pl = cum_pos[:-1].astype(float)
            pr = pos - pl
            imp_l = 2.0 * (pl / nl) * (1.0 - pl / nl)
            imp_r = 2.0 * (pr / nr) * (1.0 - pr / nr)
            weighted = (nl * imp_l + nr * imp_r) / n
            gain = np.where(valid, parent_imp - weighted, -np.inf)
            k = int(np.argmax(gain))
            if gain[k] > best_gain:
                # split between xs_sorted[k] and xs_sorted[k+1]; if the float
                # midpoint collapses onto the right value, fall back to the
                # left one so the partition stays non-trivial
                thr = float((xs_sorted[k] + xs_sorted[k + 1]) / 2.0)
                if thr >= xs_sorted[k + 1]:
                    thr = float(xs_sorted[k])
                best_gain = float(gain[k])
                best = (int(f), thr)
        if best is None:
            node.update(p=pos / n, n=n)
            continue

        f, thr = best
        importances[f] += (n / n_root) * best_gain
        mask = X[idx, f] <= thr
        left_node: dict = {}
        right_node: dict = {}
        node.update(f=f, t=thr, l=left_node, r=right_node)
        stack.append((right_node, idx[~mask]))
        stack.append((left_node, idx[mask]))
    return root


def train_forest(
    X: np.ndarray,
    y: np.ndarray,
    n_trees: int = DEFAULT_N_TREES,
    seed: int = 0,
    feature_names: Sequence[str] | None = None,
    threads: int = 1,
) -> ForestModel:
    """Bagged CART forest; deterministic for a given seed at any thread count."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y).astype(np.int8).ravel()
    if len(X) != len(y) or len(y) == 0:
        raise ValueError("X and y must be non-empty and aligned")
    n, d = X.shape
    names = list(feature_names) if feature_names else [f"f{i}" for i in range(d)]

    if len(np.unique(y)) < 2:
        warnings.warn("training labels contain a single class; model is constant", stacklevel=2)
        constant = [{"p": float(y[0]), "n": n} for _ in range(n_trees)]
        return ForestModel(trees=constant, n_trees=n_trees, seed=seed, feature_names=names)

    max_features = max(1, math.ceil(math.sqrt(d)))

    def build(tree_idx: int) -> dict:
        rng = np.random.Generator(np.random.PCG64(derive_seed(seed, "tree", tree_idx)))
        boot = rng.integers(0, n, size=n)
        importances = np.zeros(d)
        tree = _grow_tree(X[boot], y[boot], rng, max_features, 2, importances)
        tree["importances"] = importances.tolist()
        return tree

    trees = parallel_map(build, range(n_trees), threads=threads)
    return ForestModel(trees=trees, n_trees=n_trees, seed=seed, feature_names=names)


def _tree_proba(tree: dict, X: np.ndarray) -> np.ndarray:
    out = np.empty(len(X))
    stack = [(tree, np.arange(len(X)))]
    while stack:
        node, idx = stack.pop()
        if "f" not in node:
            out[idx] = node["p"]
            continue
        mask = X[idx, node["f"]] <= node["t"]
        stack.append((node["l"], idx[mask]))
        stack.append((node["r"], idx[~mask]))
    return out


def predict_proba(model: ForestModel, X: np.ndarray) -> np.ndarray | float:
    """Mean of the per-tree votes; accepts a single row or a matrix."""
    X = np.asarray(X, dtype=float)
    single = X.ndim == 1
    if single:
        X = X.reshape(1, -1)
    total = np.zeros(len(X))
    for tree in model.trees:
        total += _tree_proba(tree, X)
    proba = total / len(model.trees)
    return float(proba[0]) if single else proba


def feature_importance(model: ForestModel) -> list[tuple[str, float, float]]:
    """Per-feature (name, mean, std) of normalized Gini importance across trees.

    Each tree's importances are normalized to sum to one before aggregating;
    the means are renormalized so they sum to one whenever any tree split.
    A forest that never split returns all zeros.
    """
    d = len(model.feature_names)
    per_tree = []
    for tree in model.trees:
        imp = np.asarray(tree.get("importances", [0.0] * d))
        total = imp.sum()
        per_tree.append(imp / total if total > 0 else np.zeros(d))
    stacked = np.vstack(per_tree)
    means = stacked.mean(axis=0)
    stds = stacked.std(axis=0)
    total = means.sum()
    if total > 0:
        means = means / total
    return [(name, float(m), float(s)) for name, m, s in zip(model.feature_names, means, stds)]


class PairScorer:
    """Same-author probability of citation pairs under a trained model."""

    def __init__(self, extractor: FeatureExtractor, model: ForestModel):
        self.extractor = extractor
        self.model = model

    def __call__(self, pair: PairwiseInstance) -> float:
        row = np.asarray(self.extractor.to_row(self.extractor.extract(pair)))
        return float(predict_proba(self.model, row))

    def batch(self, pairs: Sequence[PairwiseInstance]) -> np.ndarray:
        if not pairs:
            return np.zeros(0)
        rows = np.asarray([self.extractor.to_row(self.extractor.extract(p)) for p in pairs])
        return predict_proba(self.model, rows)


# ---------------------------------------------------------------------------
# model bundle serialization

def model_to_obj(model: ForestModel) -> dict:
    def strip(node: dict) -> dict:
        if "f" in node:
            return {"f": node["f"], "t": node["t"], "l": strip(node["l"]), "r": strip(node["r"])}
        return {"p": node["p"], "n": node["n"]}

    return {
        "n_trees": model.n_trees,
        "seed": model.seed,
        "feature_names": model.feature_names,
        "trees": [
            {"root": strip(t), "importances": t.get("importances", [])} for t in model.trees
        ],
    }


def model_from_obj(obj: dict) -> ForestModel:
    trees = []
    for entry in obj["trees"]:
        tree = dict(entry["root"])
        tree["importances"] = entry.get("importances", [])
        trees.append(tree)
    return ForestModel(
        trees=trees,
        n_trees=obj["n_trees"],
        seed=obj["seed"],
        feature_names=list(obj["feature_names"]),
    )
