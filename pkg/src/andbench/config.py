"""Pipeline configuration: plain-text key-value file with CLI overrides.

Defaults follow the published settings wherever one exists: position margin
0.2, single-author floor 0.5 (local policy, surfaced in reports), pairwise
cap 10, split ratios 50:25:25, 100 forest trees, average linkage, threshold
grid step 0.05.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path


@dataclass(frozen=True)
class PipelineConfig:
    registry: str = ""
    citations: str = ""
    out_dir: str = "out"
    seed: int = 42
    position_margin: float = 0.2
    single_author_floor: float = 0.5
    pairs_per_block_cap: int = 10
    split_ratios: tuple[int, int, int] = (50, 25, 25)
    cf_kind: str = "tfidf"
    n_trees: int = 100
    linkage: str = "average"
    grid_step: float = 0.05
    position_cap: int = 10
    threads: int = 1
    figures: bool = True


def _parse_ratios(text: str) -> tuple[int, int, int]:
    parts = [int(p) for p in text.replace(",", ":").split(":") if p.strip()]
    if len(parts) != 3:
        raise ValueError(f"split_ratios must have three parts, got {text!r}")
    return tuple(parts)  # type: ignore[return-value]


def _parse_bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


_PARSERS = {
    "seed": int,
    "pairs_per_block_cap": int,
    "n_trees": int,
    "position_cap": int,
    "threads": int,
    "position_margin": float,
    "single_author_floor": float,
    "grid_step": float,
    "split_ratios": _parse_ratios,
    "figures": _parse_bool,
}


def read_config_file(path: str | Path) -> dict[str, str]:
    """Parse ``key = value`` lines; blank lines and ``#`` comments are ignored."""
    values: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {stripped!r}")
        key, _, value = stripped.partition("=")
        values[key.strip()] = value.strip()
    return values


def apply_overrides(cfg: PipelineConfig, values: dict[str, str]) -> PipelineConfig:
    known = {f.name for f in fields(PipelineConfig)}
    updates = {}
    for key, raw in values.items():
        if key not in known:
            raise ValueError(f"unknown config key {key!r}")
        parser = _PARSERS.get(key, str)
        updates[key] = parser(raw)
    return replace(cfg, **updates)


def load_config(path: str | Path | None) -> PipelineConfig:
    cfg = PipelineConfig()
    if path:
        cfg = apply_overrides(cfg, read_config_file(path))
    return cfg
