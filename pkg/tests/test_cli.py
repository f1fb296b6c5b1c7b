"""CLI wiring: smoke pipeline, determinism, config handling, exit codes."""

import json
from pathlib import Path

import pytest

from andbench.cli import main
from andbench.config import PipelineConfig, apply_overrides, load_config, read_config_file


def run(*argv) -> int:
    return main([str(a) for a in argv])


def run_pipeline(out_dir: Path, threads: int = 1, authors: int = 60) -> None:
    base = ["--out-dir", out_dir, "--seed", "42", "--threads", str(threads), "--no-figures"]
    assert run(*base, "make-synth", "--authors", authors) == 0
    assert run(*base, "link", "--registry", out_dir / "registry.jsonl",
               "--citations", out_dir / "citations.jsonl") == 0
    assert run(*base, "build-block") == 0
    assert run(*base, "build-pairwise") == 0
    assert run(*base, "split") == 0


class TestPipelineSmoke:
    def test_dataset_files_produced(self, tmp_path):
        out = tmp_path / "out"
        run_pipeline(out)
        for name in ("blocks.jsonl", "pairs.jsonl", "split.jsonl", "claims.jsonl", "link_report.json"):
            assert (out / name).exists(), name

    def test_rerun_is_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        run_pipeline(a)
        run_pipeline(b)
        for name in ("blocks.jsonl", "pairs.jsonl", "split.jsonl", "claims.jsonl"):
            assert (a / name).read_bytes() == (b / name).read_bytes(), name

    def test_threads_do_not_change_bytes(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        run_pipeline(a, threads=1)
        run_pipeline(b, threads=8)
        for name in ("blocks.jsonl", "pairs.jsonl", "split.jsonl"):
            assert (a / name).read_bytes() == (b / name).read_bytes(), name

    def test_trim_and_model_stages(self, tmp_path):
        out = tmp_path / "out"
        run_pipeline(out, authors=80)
        base = ["--out-dir", out, "--seed", "42", "--no-figures"]
        assert run(*base, "trim") == 0
        assert run(*base, "train", "--n-trees", "10") == 0
        assert run(*base, "tune") == 0
        tune = json.loads((out / "tune.json").read_text())
        assert len(tune["grid"]) == 21
        assert run(*base, "cluster", "--split", out / "split.jsonl",
                   "--tune-file", out / "tune.json") == 0
        assert run(*base, "evaluate", "--model", out / "model.json", "--pairs", out / "pairs.jsonl",
                   "--split", out / "split.jsonl", "--assignments", out / "assignments.jsonl") == 0
        card = (out / "scorecard.tsv").read_text().splitlines()
        assert card[0].startswith("method\tprecision")
        assert len(card) == 3

    def test_audit_ids(self, tmp_path):
        out = tmp_path / "out"
        run_pipeline(out)
        base = ["--out-dir", out, "--seed", "42", "--no-figures"]
        assert run(*base, "audit-ids", "--external-ids", out / "external_ids.jsonl") == 0
        lines = (out / "scorecard_audit.tsv").read_text().splitlines()
        assert len(lines) == 2 and lines[1].startswith("external-id\t")


class TestReportCommand:
    def test_facet_inventory(self, tmp_path):
        out = tmp_path / "out"
        run_pipeline(out)
        lookup = tmp_path / "genders.tsv"
        lookup.write_text("Ann Berg\tF\n", encoding="utf-8")
        base = ["--out-dir", out, "--seed", "42", "--no-figures"]
        assert run(*base, "report", "--lookup", f"gender={lookup}") == 0
        expected = [
            "report_year.tsv",
            "report_author_position.tsv",
            "report_name_popularity_LN.tsv",
            "report_name_popularity_LNFI.tsv",
            "report_lookup_gender.tsv",
            "variation.tsv",
        ]
        for name in expected:
            assert (out / name).exists(), name

    def test_reference_comparison(self, tmp_path):
        out = tmp_path / "out"
        run_pipeline(out)
        base = ["--out-dir", out, "--seed", "42", "--no-figures"]
        assert run(*base, "report", "--reference-claims", out / "claims.jsonl") == 0
        comparison = (out / "compare_year.tsv").read_text().splitlines()
        assert comparison[0] == "facet\tkey\tleft\tright\tabs_gap"
        assert all(line.rsplit("\t", 1)[1] == "0.0" for line in comparison[1:])

    def test_figures_rendered_when_enabled(self, tmp_path):
        out = tmp_path / "out"
        run_pipeline(out)
        assert run("--out-dir", out, "--seed", "42", "report") == 0
        assert (out / "report_year.png").exists()
        assert run("--out-dir", out, "--seed", "42", "profile") == 0
        assert (out / "profile_block_size.png").exists()
        assert (out / "profile_authors_per_block.tsv").exists()


class TestConfigHandling:
    def test_config_file_and_overrides(self, tmp_path):
        cfg_file = tmp_path / "pipeline.cfg"
        cfg_file.write_text(
            "# comment\nseed = 7\nsplit_ratios = 60:20:20\ncf_kind = jaccard\nfigures = off\n",
            encoding="utf-8",
        )
        cfg = load_config(cfg_file)
        assert cfg.seed == 7
        assert cfg.split_ratios == (60, 20, 20)
        assert cfg.cf_kind == "jaccard"
        assert cfg.figures is False

    def test_unknown_key_rejected(self, tmp_path):
        cfg_file = tmp_path / "bad.cfg"
        cfg_file.write_text("no_such_key = 1\n", encoding="utf-8")
        with pytest.raises(ValueError):
            load_config(cfg_file)

    def test_defaults_match_published_settings(self):
        cfg = PipelineConfig()
        assert cfg.position_margin == 0.2
        assert cfg.n_trees == 100
        assert cfg.split_ratios == (50, 25, 25)
        assert cfg.grid_step == 0.05
        assert cfg.pairs_per_block_cap == 10
        assert cfg.single_author_floor == 0.5

    def test_cli_flag_overrides_config(self, tmp_path):
        cfg_file = tmp_path / "pipeline.cfg"
        cfg_file.write_text(f"out_dir = {tmp_path / 'from_config'}\nseed = 9\n", encoding="utf-8")
        out = tmp_path / "flag_wins"
        assert run("--config", cfg_file, "--out-dir", out, "--no-figures",
                   "make-synth", "--authors", 10) == 0
        assert (out / "registry.jsonl").exists()
        assert not (tmp_path / "from_config").exists()


class TestErrorPaths:
    def test_missing_input_exit_code(self, tmp_path):
        assert run("--out-dir", tmp_path, "link", "--registry", tmp_path / "nope.jsonl",
                   "--citations", tmp_path / "nope2.jsonl") == 2

    def test_cluster_without_threshold(self, tmp_path):
        out = tmp_path / "out"
        run_pipeline(out, authors=20)
        base = ["--out-dir", out, "--no-figures"]
        assert run(*base, "train", "--n-trees", "5") == 0
        code = run(*base, "cluster", "--split", out / "split.jsonl")
        assert code == 3

    def test_inputs_never_mutated(self, tmp_path):
        out = tmp_path / "out"
        base = ["--out-dir", out, "--seed", "42", "--no-figures"]
        assert run(*base, "make-synth", "--authors", 20) == 0
        registry_bytes = (out / "registry.jsonl").read_bytes()
        citation_bytes = (out / "citations.jsonl").read_bytes()
        assert run(*base, "link", "--registry", out / "registry.jsonl",
                   "--citations", out / "citations.jsonl") == 0
        assert run(*base, "build-block") == 0
        assert (out / "registry.jsonl").read_bytes() == registry_bytes
        assert (out / "citations.jsonl").read_bytes() == citation_bytes
