"""Subcommand front-end wiring the pipeline end to end.

Every stage reads and writes only the files named on its command line (or
derived from the configured output directory); inputs are never mutated, so
any stage can be rerun.  All randomness derives from the single configured
seed, and ``--threads N`` must produce byte-identical outputs for every N.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .builder import (
    BlockDataset,
    build_block_dataset,
    read_claims,
    read_dataset,
    read_pairs,
    read_split,
    sample_pairwise,
    split as split_blocks,
    trim_single_author_blocks,
    write_claims,
    write_dataset,
    write_pairs,
    write_split,
)
from .config import PipelineConfig, _parse_ratios, apply_overrides, load_config
from .disambig import (
    FeatureExtractor,
    PairScorer,
    TfidfIndex,
    claim_content,
    feature_importance,
    fit_extractor,
    model_from_obj,
    model_to_obj,
    predict_proba,
    train_forest,
)
from .cluster import block_distances, hac, threshold_grid, tune_threshold
from .ingest import read_author_registry, read_citation_corpus, write_author_registry, write_citation_corpus
from .linker import build_citation_index, link_and_position
from .metrics import ClusterAssignment, audit_id_system, bcubed, classification_metrics
from .profiler import (
    block_profile,
    compare_reports,
    load_lookup_table,
    lookup_distribution,
    name_popularity,
    position_distribution,
    variation_report,
    write_comparison,
    write_report,
    year_distribution,
)
from .synth import SynthSpec, generate, simulate_external_ids
from .util import FORMAT_VERSION, derive_seed, json_line, parallel_map, sha256_file, write_tsv

METHOD_NAMES = {
    "none": "BF",
    "jaccard": "BF+CF_jaccard",
    "tfidf": "BF+CF_tfidf",
    "plugin": "BF+CF_plugin",
}

SCORECARD_HEADER = (
    "method",
    "precision",
    "recall",
    "f1",
    "macro_f1",
    "b3_precision",
    "b3_recall",
    "b3_f1",
)


class CliError(Exception):
    def __init__(self, category: str, message: str, code: int = 1):
        super().__init__(message)
        self.category = category
        self.code = code


def _out(cfg: PipelineConfig, name: str, override: str | None = None) -> Path:
    return Path(override) if override else Path(cfg.out_dir) / name


def _write_scorecard(path: Path, rows: list[dict]) -> None:
    table = [[row.get(col, "") for col in SCORECARD_HEADER] for row in rows]
    write_tsv(path, table, header=SCORECARD_HEADER)


def _write_json(path: Path, obj: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json_line(obj) + "\n", encoding="utf-8")


def _blocks_in_fold(ds: BlockDataset, folds: dict[str, str], fold: str) -> list:
    if fold == "all":
        return list(ds.blocks)
    return [b for b in ds.blocks if folds.get(b.cfn_key) == fold]


def _load_plugin_scores(path: str | None) -> dict:
    if not path:
        return {}
    scores = {}
    for obj in _read_jsonl(path):
        scores[(obj["cfn_key"], obj["left_paper_id"], obj["right_paper_id"])] = float(obj["score"])
    return scores


def _read_jsonl(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)


def _load_bundle(path: str, plugin_scores: dict | None = None):
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    tfidf = None
    if obj.get("tfidf"):
        tfidf = TfidfIndex(df=dict(obj["tfidf"]["df"]), n_docs=obj["tfidf"]["n_docs"])
    extractor = FeatureExtractor(
        cf_kind=obj["cf_kind"],
        tfidf=tfidf,
        year_gap_impute=obj["year_gap_impute"],
        plugin_scores=plugin_scores,
    )
    model = model_from_obj(obj["forest"])
    return extractor, model, obj.get("method", METHOD_NAMES[obj["cf_kind"]])


# ---------------------------------------------------------------------------
# subcommands

def cmd_make_synth(cfg: PipelineConfig, args) -> None:
    lo, hi = (int(x) for x in args.citations_per_author.split(":"))
    spec = SynthSpec(
        n_authors=args.authors,
        seed=cfg.seed,
        citations_per_author=(lo, hi),
        homonym_fraction=args.homonym_fraction,
        variant_rate=args.variant_rate,
        venue_policy=args.venue_policy,
        year_policy=args.year_policy,
        missing_year_rate=args.missing_year_rate,
    )
    corpus = generate(spec)
    out_dir = Path(cfg.out_dir)
    write_author_registry(out_dir / "registry.jsonl", corpus.authors)
    write_citation_corpus(out_dir / "citations.jsonl", corpus.citations)

    index = build_citation_index(corpus.citations)
    claims, _ = link_and_position(corpus.authors, index, cfg.position_margin, cfg.single_author_floor)
    ids = simulate_external_ids(claims, split_rate=args.split_rate, merge_pairs=args.merge_pairs, seed=cfg.seed)
    with (out_dir / "external_ids.jsonl").open("w", encoding="utf-8") as fh:
        for (paper_id, position), ext in sorted(ids.items()):
            fh.write(json_line({"paper_id": paper_id, "position": position, "external_id": ext}) + "\n")
    print(f"wrote {len(corpus.authors)} authors, {len(corpus.citations)} citations to {out_dir}")


def cmd_link(cfg: PipelineConfig, args) -> None:
    registry_path = args.registry or cfg.registry
    citations_path = args.citations or cfg.citations
    if not registry_path or not citations_path:
        raise CliError("config", "link needs --registry and --citations (or config values)", 3)
    corpus_reader = read_citation_corpus(citations_path)
    index = build_citation_index(corpus_reader)
    registry_reader = read_author_registry(registry_path)
    claims, report = link_and_position(
        registry_reader, index, cfg.position_margin, cfg.single_author_floor
    )
    claims_path = _out(cfg, "claims.jsonl", args.out)
    write_claims(claims, claims_path)
    report_obj = report.to_obj()
    report_obj["registry_ingest"] = registry_reader.report().__dict__
    report_obj["corpus_ingest"] = corpus_reader.report().__dict__
    _write_json(_out(cfg, "link_report.json", args.report), report_obj)
    print(f"linked {report.positioned} claims ({report.rejected} rejected, {report.unresolved} unresolved DOIs)")


def cmd_build_block(cfg: PipelineConfig, args) -> None:
    claims = read_claims(args.claims or _out(cfg, "claims.jsonl"))
    provenance = {
        "seed": cfg.seed,
        "position_margin": cfg.position_margin,
        "single_author_floor": cfg.single_author_floor,
        "sources": {"claims": sha256_file(args.claims or _out(cfg, "claims.jsonl"))},
    }
    ds = build_block_dataset(claims, provenance)
    write_dataset(ds, _out(cfg, "blocks.jsonl", args.out))
    multi = sum(1 for b in ds if b.n_authors > 1)
    print(f"built {len(ds)} blocks ({multi} with >=2 authors) over {ds.n_citations} citations")


def cmd_trim(cfg: PipelineConfig, args) -> None:
    ds = read_dataset(args.blocks or _out(cfg, "blocks.jsonl"))
    trimmed = trim_single_author_blocks(ds)
    write_dataset(trimmed, _out(cfg, "blocks_trimmed.jsonl", args.out))
    print(f"kept {len(trimmed)} of {len(ds)} blocks")


def cmd_build_pairwise(cfg: PipelineConfig, args) -> None:
    ds = read_dataset(args.blocks or _out(cfg, "blocks.jsonl"))
    pairs = sample_pairwise(ds, args.cap or cfg.pairs_per_block_cap, seed=cfg.seed, threads=cfg.threads)
    n = write_pairs(pairs, _out(cfg, "pairs.jsonl", args.out))
    positives = sum(p.label for p in pairs)
    print(f"sampled {n} pairs ({positives} positive)")


def cmd_split(cfg: PipelineConfig, args) -> None:
    ds = read_dataset(args.blocks or _out(cfg, "blocks.jsonl"))
    pairs = read_pairs(args.pairs or _out(cfg, "pairs.jsonl"), ds)
    ratios = _parse_ratios(args.ratios) if args.ratios else cfg.split_ratios
    assignment = split_blocks(ds, pairs, ratios=ratios, seed=cfg.seed)
    write_split(assignment, _out(cfg, "split.jsonl", args.out))
    counts = {fold: 0 for fold in ("train", "validation", "test")}
    for fold in assignment.folds.values():
        counts[fold] += 1
    print(f"split {len(assignment.folds)} block keys: {counts}")


def cmd_profile(cfg: PipelineConfig, args) -> None:
    ds = read_dataset(args.blocks or _out(cfg, "blocks.jsonl"))
    out_dir = Path(cfg.out_dir)
    reports = block_profile(ds)
    for report in reports:
        write_report(report, out_dir / f"profile_{report.facet}.tsv")
        if cfg.figures:
            from . import plots

            plots.render_distribution(report, out_dir / f"profile_{report.facet}.png")
    claims = [c for b in ds for c in b.claims()]
    rows = variation_report(claims)
    write_tsv(
        out_dir / "variation.tsv",
        [(r.measure, r.csvd, r.civd, r.total) for r in rows],
        header=("measure", "csvd", "civd", "total"),
    )
    print(f"profiled {len(ds)} blocks -> {out_dir}")


def _facet_reports(cfg: PipelineConfig, claims, citations, lookups) -> list:
    reports = [
        year_distribution(citations),
        position_distribution(claims, cap=cfg.position_cap),
        name_popularity(claims, "LN"),
        name_popularity(claims, "LNFI"),
    ]
    for name, table in lookups:
        reports.append(lookup_distribution(claims, table, facet=f"lookup_{name}"))
    return reports


def _dedup_citations(claims) -> list:
    seen = {}
    for claim in claims:
        seen.setdefault(claim.paper_id, claim.citation)
    return [seen[pid] for pid in sorted(seen)]


def cmd_report(cfg: PipelineConfig, args) -> None:
    claims = read_claims(args.claims or _out(cfg, "claims.jsonl"))
    citations = (
        list(read_citation_corpus(args.citations)) if args.citations else _dedup_citations(claims)
    )
    lookups = []
    for spec in args.lookup or []:
        name, _, path = spec.partition("=")
        if not path:
            raise CliError("config", f"--lookup expects NAME=PATH, got {spec!r}", 3)
        lookups.append((name, load_lookup_table(path)))

    out_dir = Path(cfg.out_dir)
    reports = _facet_reports(cfg, claims, citations, lookups)
    for report in reports:
        write_report(report, out_dir / f"report_{report.facet}.tsv")
        if cfg.figures:
            from . import plots

            plots.render_distribution(report, out_dir / f"report_{report.facet}.png")

    rows = variation_report(claims)
    write_tsv(
        out_dir / "variation.tsv",
        [(r.measure, r.csvd, r.civd, r.total) for r in rows],
        header=("measure", "csvd", "civd", "total"),
    )

    if args.reference_claims:
        ref_claims = read_claims(args.reference_claims)
        ref_citations = (
            list(read_citation_corpus(args.reference_citations))
            if args.reference_citations
            else _dedup_citations(ref_claims)
        )
        ref_reports = _facet_reports(cfg, ref_claims, ref_citations, lookups)
        for mine, ref in zip(reports, ref_reports):
            comparison = compare_reports(mine, ref)
            write_comparison(comparison, out_dir / f"compare_{comparison.facet}.tsv")
            if cfg.figures:
                from . import plots

                plots.render_comparison(comparison, out_dir / f"compare_{comparison.facet}.png")
    print(f"wrote {len(reports)} facet reports -> {out_dir}")


def cmd_train(cfg: PipelineConfig, args) -> None:
    ds = read_dataset(args.blocks or _out(cfg, "blocks.jsonl"))
    pairs = read_pairs(args.pairs or _out(cfg, "pairs.jsonl"), ds)
    assignment = read_split(args.split or _out(cfg, "split.jsonl"))
    cf_kind = args.cf_kind or cfg.cf_kind
    plugin_scores = _load_plugin_scores(args.plugin_scores)

    train_pairs = [p for p in pairs if assignment.folds.get(p.cfn_key) == "train"]
    if not train_pairs:
        raise CliError("data", "no pairs fall in the training fold", 4)

    contents = None
    if cf_kind == "tfidf":
        seen: dict[str, str] = {}
        for block in _blocks_in_fold(ds, assignment.folds, "train"):
            for claim in block.claims():
                seen.setdefault(claim.paper_id, claim_content(claim))
        contents = [seen[pid] for pid in sorted(seen)]

    extractor = fit_extractor(train_pairs, cf_kind, train_contents=contents, plugin_scores=plugin_scores)
    X, y = extractor.matrix(train_pairs, threads=cfg.threads)
    model = train_forest(
        X,
        y,
        n_trees=args.n_trees or cfg.n_trees,
        seed=derive_seed(cfg.seed, "forest"),
        feature_names=extractor.feature_names(),
        threads=cfg.threads,
    )

    bundle = {
        "format_version": FORMAT_VERSION,
        "method": METHOD_NAMES[cf_kind],
        "cf_kind": cf_kind,
        "year_gap_impute": extractor.year_gap_impute,
        "tfidf": {"df": extractor.tfidf.df, "n_docs": extractor.tfidf.n_docs} if extractor.tfidf else None,
        "forest": model_to_obj(model),
    }
    _write_json(_out(cfg, "model.json", args.out), bundle)

    rows = feature_importance(model)
    write_tsv(
        _out(cfg, "importance.tsv", args.importance),
        [(n, m, s) for n, m, s in rows],
        header=("feature", "mean", "std"),
    )
    if cfg.figures:
        from . import plots

        plots.render_importance(rows, _out(cfg, "importance.png"))
    print(f"trained {METHOD_NAMES[cf_kind]} on {len(train_pairs)} pairs")


def _fold_matrices(cfg: PipelineConfig, ds, folds, fold: str, scorer) -> list:
    blocks = _blocks_in_fold(ds, folds, fold)
    return parallel_map(lambda b: block_distances(b, scorer), blocks, threads=cfg.threads)


def cmd_tune(cfg: PipelineConfig, args) -> None:
    ds = read_dataset(args.blocks or _out(cfg, "blocks.jsonl"))
    assignment = read_split(args.split or _out(cfg, "split.jsonl"))
    extractor, model, method = _load_bundle(
        args.model or _out(cfg, "model.json"), _load_plugin_scores(args.plugin_scores)
    )
    matrices = _fold_matrices(cfg, ds, assignment.folds, args.fold, PairScorer(extractor, model))
    if not matrices:
        raise CliError("data", f"no blocks in fold {args.fold!r}", 4)
    result = tune_threshold(
        matrices,
        step=args.grid_step or cfg.grid_step,
        linkage=args.linkage or cfg.linkage,
        per_block=args.per_block,
        threads=cfg.threads,
    )
    obj = {
        "method": method,
        "fold": args.fold,
        "linkage": args.linkage or cfg.linkage,
        "best_threshold": result.best_threshold,
        "grid": [
            {
                "threshold": p.threshold,
                "b3_precision": p.score.b3_precision,
                "b3_recall": p.score.b3_recall,
                "b3_f1": p.score.b3_f1,
            }
            for p in result.grid
        ],
    }
    _write_json(_out(cfg, "tune.json", args.out), obj)
    if cfg.figures:
        from . import plots

        plots.render_tune_grid(
            [(p.threshold, p.score.b3_f1) for p in result.grid],
            result.best_threshold,
            _out(cfg, "tune.png"),
        )
    print(f"tuned threshold = {result.best_threshold:g} over {len(matrices)} blocks")


def cmd_cluster(cfg: PipelineConfig, args) -> None:
    ds = read_dataset(args.blocks or _out(cfg, "blocks.jsonl"))
    assignment = read_split(args.split or _out(cfg, "split.jsonl")) if args.split != "none" else None
    folds = assignment.folds if assignment else {}
    extractor, model, method = _load_bundle(
        args.model or _out(cfg, "model.json"), _load_plugin_scores(args.plugin_scores)
    )
    if args.threshold is not None:
        threshold = args.threshold
    elif args.tune_file:
        threshold = json.loads(Path(args.tune_file).read_text(encoding="utf-8"))["best_threshold"]
    else:
        raise CliError("config", "cluster needs --threshold or --tune-file", 3)

    linkage = args.linkage or cfg.linkage
    fold = args.fold if assignment else "all"
    matrices = _fold_matrices(cfg, ds, folds, fold, PairScorer(extractor, model))
    assignments = [hac(m, threshold, linkage) for m in matrices]

    path = _out(cfg, "assignments.jsonl", args.out)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        header = {"type": "header", "method": method, "threshold": threshold, "linkage": linkage, "fold": fold}
        fh.write(json_line(header) + "\n")
        for a in assignments:
            for paper_id in sorted(a.labels):
                fh.write(
                    json_line({"cfn_key": a.cfn_key, "paper_id": paper_id, "cluster_id": a.labels[paper_id]})
                    + "\n"
                )
    n_clusters = sum(len(set(a.labels.values())) for a in assignments)
    print(f"clustered {len(assignments)} blocks into {n_clusters} clusters at threshold {threshold:g}")


def _read_assignments(path: str) -> tuple[list[ClusterAssignment], str]:
    method = "clustering"
    by_key: dict[str, dict[str, int]] = {}
    for obj in _read_jsonl(path):
        if obj.get("type") == "header":
            method = obj.get("method", method)
            continue
        by_key.setdefault(obj["cfn_key"], {})[obj["paper_id"]] = int(obj["cluster_id"])
    return [ClusterAssignment(cfn_key=k, labels=v) for k, v in sorted(by_key.items())], method


def cmd_evaluate(cfg: PipelineConfig, args) -> None:
    ds = read_dataset(args.blocks or _out(cfg, "blocks.jsonl"))
    rows = []
    if args.model or args.pairs:
        if not (args.model and args.pairs and args.split):
            raise CliError("config", "classification evaluation needs --model, --pairs and --split", 3)
        pairs = read_pairs(args.pairs, ds)
        assignment = read_split(args.split)
        fold_pairs = [p for p in pairs if assignment.folds.get(p.cfn_key) == args.fold]
        if not fold_pairs:
            raise CliError("data", f"no pairs in fold {args.fold!r}", 4)
        extractor, model, method = _load_bundle(args.model, _load_plugin_scores(args.plugin_scores))
        X, y = extractor.matrix(fold_pairs, threads=cfg.threads)
        proba = predict_proba(model, X)
        score = classification_metrics([bool(v) for v in y], [p >= 0.5 for p in proba])
        rows.append(
            {
                "method": method,
                "precision": score.precision,
                "recall": score.recall,
                "f1": score.f1,
                "macro_f1": score.macro_f1,
            }
        )
    if args.assignments:
        assignments, method = _read_assignments(args.assignments)
        score = bcubed(assignments, ds, per_block=args.per_block)
        rows.append(
            {
                "method": method,
                "b3_precision": score.b3_precision,
                "b3_recall": score.b3_recall,
                "b3_f1": score.b3_f1,
            }
        )
    if not rows:
        raise CliError("config", "evaluate needs --model/--pairs/--split and/or --assignments", 3)
    _write_scorecard(_out(cfg, "scorecard.tsv", args.out), rows)
    for row in rows:
        print("  ".join(f"{k}={v}" for k, v in row.items()))


def cmd_audit_ids(cfg: PipelineConfig, args) -> None:
    ds = read_dataset(args.blocks or _out(cfg, "blocks.jsonl"))
    pairs = read_pairs(args.pairs or _out(cfg, "pairs.jsonl"), ds)
    external = {}
    for obj in _read_jsonl(args.external_ids):
        external[(obj["paper_id"], int(obj["position"]))] = str(obj["external_id"])
    result = audit_id_system(ds, pairs, external, per_block=args.per_block)
    row = {
        "method": args.method,
        "precision": result.classification.precision,
        "recall": result.classification.recall,
        "f1": result.classification.f1,
        "macro_f1": result.classification.macro_f1,
        "b3_precision": result.bcubed.b3_precision,
        "b3_recall": result.bcubed.b3_recall,
        "b3_f1": result.bcubed.b3_f1,
    }
    _write_scorecard(_out(cfg, "scorecard_audit.tsv", args.out), [row])
    if result.missing_ids:
        print(f"warning: {result.missing_ids} claims had no external id (treated as singletons)")
    print("  ".join(f"{k}={v}" for k, v in row.items()))


# ---------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="andbench",
        description="Build and evaluate gold-standard author-name-disambiguation datasets.",
    )
    parser.add_argument("--version", action="version", version=f"andbench {__version__} (format {FORMAT_VERSION})")
    parser.add_argument("--config", help="plain-text key=value config file")
    parser.add_argument("--out-dir", help="output directory (default 'out')")
    parser.add_argument("--seed", type=int, help="pipeline seed")
    parser.add_argument("--threads", type=int, help="worker thread bound (output independent of N)")
    parser.add_argument("--no-figures", action="store_true", help="skip PNG rendering")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("make-synth", help="generate a synthetic registry/corpus for demos and tests")
    p.add_argument("--authors", type=int, default=200)
    p.add_argument("--citations-per-author", default="2:6")
    p.add_argument("--homonym-fraction", type=float, default=0.10)
    p.add_argument("--variant-rate", type=float, default=0.15)
    p.add_argument("--venue-policy", choices=("author", "shared"), default="author")
    p.add_argument("--year-policy", choices=("career", "uniform"), default="career")
    p.add_argument("--missing-year-rate", type=float, default=0.0)
    p.add_argument("--split-rate", type=float, default=0.3, help="external-id over-splitting rate")
    p.add_argument("--merge-pairs", type=int, default=0, help="external-id merged author pairs")
    p.set_defaults(func=cmd_make_synth)

    p = sub.add_parser("link", help="join registry claims to citations by DOI and identify positions")
    p.add_argument("--registry")
    p.add_argument("--citations")
    p.add_argument("--out")
    p.add_argument("--report")
    p.set_defaults(func=cmd_link)

    p = sub.add_parser("build-block", help="aggregate claims into the block dataset")
    p.add_argument("--claims")
    p.add_argument("--out")
    p.set_defaults(func=cmd_build_block)

    p = sub.add_parser("trim", help="drop blocks with a single author")
    p.add_argument("--blocks")
    p.add_argument("--out")
    p.set_defaults(func=cmd_trim)

    p = sub.add_parser("build-pairwise", help="sample labelled citation pairs from blocks")
    p.add_argument("--blocks")
    p.add_argument("--cap", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_build_pairwise)

    p = sub.add_parser("split", help="assign block keys to train/validation/test folds")
    p.add_argument("--blocks")
    p.add_argument("--pairs")
    p.add_argument("--ratios")
    p.add_argument("--out")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("profile", help="block-structure distribution reports")
    p.add_argument("--blocks")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("report", help="facet distribution reports (and reference comparison)")
    p.add_argument("--claims")
    p.add_argument("--citations")
    p.add_argument("--lookup", action="append", metavar="NAME=PATH")
    p.add_argument("--reference-claims")
    p.add_argument("--reference-citations")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("train", help="train the same-author forest on the training fold")
    p.add_argument("--blocks")
    p.add_argument("--pairs")
    p.add_argument("--split")
    p.add_argument("--cf-kind", choices=("none", "jaccard", "tfidf", "plugin"))
    p.add_argument("--n-trees", type=int)
    p.add_argument("--plugin-scores")
    p.add_argument("--out")
    p.add_argument("--importance")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("tune", help="grid-search the clustering threshold on a fold")
    p.add_argument("--blocks")
    p.add_argument("--split")
    p.add_argument("--model")
    p.add_argument("--fold", default="validation")
    p.add_argument("--linkage", choices=("average", "single", "complete"))
    p.add_argument("--grid-step", type=float)
    p.add_argument("--per-block", action="store_true")
    p.add_argument("--plugin-scores")
    p.add_argument("--out")
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("cluster", help="cluster blocks at a threshold")
    p.add_argument("--blocks")
    p.add_argument("--split", default=None)
    p.add_argument("--model")
    p.add_argument("--threshold", type=float)
    p.add_argument("--tune-file")
    p.add_argument("--fold", default="test")
    p.add_argument("--linkage", choices=("average", "single", "complete"))
    p.add_argument("--plugin-scores")
    p.add_argument("--out")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("evaluate", help="score a model on pairs and/or assignments against gold")
    p.add_argument("--blocks")
    p.add_argument("--pairs")
    p.add_argument("--split")
    p.add_argument("--model")
    p.add_argument("--fold", default="test")
    p.add_argument("--assignments")
    p.add_argument("--per-block", action="store_true")
    p.add_argument("--plugin-scores")
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("audit-ids", help="score an external author-ID system against gold")
    p.add_argument("--blocks")
    p.add_argument("--pairs")
    p.add_argument("--external-ids", required=True)
    p.add_argument("--method", default="external-id")
    p.add_argument("--per-block", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_audit_ids)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
        overrides: dict[str, str] = {}
        if args.out_dir:
            overrides["out_dir"] = args.out_dir
        if args.seed is not None:
            overrides["seed"] = str(args.seed)
        if args.threads is not None:
            overrides["threads"] = str(args.threads)
        if args.no_figures:
            overrides["figures"] = "false"
        cfg = apply_overrides(cfg, overrides)
        args.func(cfg, args)
        return 0
    except CliError as exc:
        print(f"error[{exc.category}]: {exc}", file=sys.stderr)
        return exc.code
    except FileNotFoundError as exc:
        print(f"error[input]: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error[validation]: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
