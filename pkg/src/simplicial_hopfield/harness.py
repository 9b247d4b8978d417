"""End-to-end experiment harness.

Each experiment takes a :class:`RunConfig`, runs seeded trials, and
produces a :class:`RunResult` of per-trial rows plus summary rows.
:func:`emit_outputs` writes ``rows.csv``, ``summary.csv``,
``config-echo.json``, and SVG figures into the output directory; the
CSVs are the reproducibility contract (identical config and seed give
byte-identical rows), figures are rendered best effort alongside them.

Per-trial random streams are derived from the master seed together
with the experiment, condition, loading, and trial indices, so trial
order or parallelism cannot change any result.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import plots
from .binary_nets import interaction_from_name, run_to_convergence
from .complexes import (
    CONDITION_NAMES,
    condition_spec,
    downward_closure,
    hebbian_weights,
    sample_diluted,
)
from .continuous_net import Similarity, settle
from .homology import betti_numbers, pearson_r
from .metrics import correct_recall, score_binary, summarize
from .patterns import (
    GaussianNoise,
    corrupt,
    load_image_corpus,
    random_binary_patterns,
    random_continuous_patterns,
)
from .theory import capacity_report

EXPERIMENTS = (
    "binary_overlap",
    "continuous_recall",
    "homology_correlation",
    "energy_grid",
    "capacity_report",
)

# stream tags keep the per-purpose RNG streams of one experiment apart
_STREAM_COMPLEX, _STREAM_PATTERNS, _STREAM_STATE, _STREAM_QUERY = 0, 1, 2, 3


class ConfigError(ValueError):
    """Invalid run configuration; reported before any trial runs."""


@dataclass
class RunConfig:
    experiment: str
    n: int = 100
    conditions: list = field(default_factory=lambda: ["K1"])
    loadings: list = field(default_factory=lambda: [0.05])
    trials: int = 25
    seed: int = 0
    dynamics: str = "traditional"
    interaction: str = "poly2"
    max_steps: int = 100
    inv_t: float = 100.0
    measures: list = field(default_factory=lambda: ["euclidean"])
    noise_variance: float = 0.5
    dataset: str | None = None
    dataset_format: str | None = None
    grayscale: bool = False
    max_queries: int | None = None
    inv_t_grid: list = field(default_factory=lambda: [1.0, 2.0, 10.0])
    grid_points: int = 10
    homology_method: str = "exact"
    max_degree: int = 2
    out_dir: str = "runs"

    def resolved_loadings(self) -> list[int]:
        """Loadings below 1 are fractions of N, otherwise absolute counts."""
        out = []
        for value in self.loadings:
            count = round(float(value) * self.n) if float(value) < 1 else int(value)
            out.append(count)
        return out

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; known: {EXPERIMENTS}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.n < 2:
            raise ConfigError("n must be >= 2")
        for cond in self.conditions:
            if cond not in CONDITION_NAMES:
                raise ConfigError(
                    f"unknown condition {cond!r}; known: {', '.join(CONDITION_NAMES)}"
                )
        if self.experiment != "capacity_report":
            if not self.loadings:
                raise ConfigError("at least one pattern loading is required")
            for count in self.resolved_loadings():
                if count < 1:
                    raise ConfigError(f"loadings must be positive, got {self.loadings}")
        if self.dynamics not in ("traditional", "modern"):
            raise ConfigError(f"unknown dynamics {self.dynamics!r}")
        try:
            interaction_from_name(self.interaction)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        for m in self.measures:
            try:
                Similarity.from_name(m)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
        if self.inv_t <= 0 or any(b <= 0 for b in self.inv_t_grid):
            raise ConfigError("inverse temperatures must be positive")
        if self.noise_variance <= 0:
            raise ConfigError("noise variance must be positive")
        if self.max_steps < 1:
            raise ConfigError("max_steps must be >= 1")
        if self.grid_points < 2:
            raise ConfigError("grid_points must be >= 2")
        if self.homology_method not in ("exact", "gf2"):
            raise ConfigError(f"unknown homology method {self.homology_method!r}")
        if self.dataset is not None and not Path(self.dataset).exists():
            raise ConfigError(f"dataset not found: {self.dataset}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, obj: dict) -> "RunConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(obj) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "experiment" not in obj:
            raise ConfigError("config must name an experiment")
        return cls(**obj)

    @classmethod
    def from_json_file(cls, path) -> "RunConfig":
        try:
            obj = json.loads(Path(path).read_text())
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise ConfigError("config JSON must be an object")
        return cls.from_dict(obj)


@dataclass
class RunResult:
    experiment: str
    columns: list
    rows: list
    summary_columns: list
    summary_rows: list
    config: RunConfig
    extras: dict = field(default_factory=dict)


def _rng(*keys) -> np.random.Generator:
    return np.random.default_rng([int(k) for k in keys])


def _random_state(rng: np.random.Generator, n: int) -> np.ndarray:
    return (rng.integers(0, 2, size=n) * 2 - 1).astype(np.int64)


# -- binary experiments ------------------------------------------------------


def _binary_trial(cfg: RunConfig, cond_index: int, condition: str, loading: int, trial: int):
    spec = condition_spec(condition)
    base = (cfg.seed, 1, cond_index, loading, trial)
    cx = sample_diluted(cfg.n, spec, [*base, _STREAM_COMPLEX])
    pats = random_binary_patterns(loading, cfg.n, [*base, _STREAM_PATTERNS])
    loaded = hebbian_weights(cx, pats)
    init = _random_state(_rng(*base, _STREAM_STATE), cfg.n)
    kwargs = {"max_steps": cfg.max_steps}
    if cfg.dynamics == "modern":
        kwargs.update(patterns=pats, interaction=interaction_from_name(cfg.interaction))
    outcome = run_to_convergence(init, loaded, dynamics=cfg.dynamics, **kwargs)
    score = score_binary(outcome.final_state, pats)
    return cx, score, outcome


def run_binary_overlap(cfg: RunConfig) -> RunResult:
    """Fresh network, patterns, and random start per trial; records the
    best overlap across the stored patterns after convergence."""
    cfg.validate()
    rows = []
    summary_rows = []
    for cond_index, condition in enumerate(cfg.conditions):
        for loading in cfg.resolved_loadings():
            overlaps = []
            for trial in range(cfg.trials):
                _, score, outcome = _binary_trial(cfg, cond_index, condition, loading, trial)
                overlaps.append(score.best_value)
                rows.append({
                    "condition": condition,
                    "n_patterns": loading,
                    "trial": trial,
                    "best_overlap": score.best_value,
                    "best_index": score.best_index,
                    "steps": outcome.steps_taken,
                    "stop_reason": outcome.stop_reason,
                })
            mean, sd = summarize(overlaps)
            summary_rows.append({
                "condition": condition,
                "n_patterns": loading,
                "mean_overlap": mean,
                "sd_overlap": sd,
                "trials": cfg.trials,
            })
    return RunResult(
        cfg.experiment,
        ["condition", "n_patterns", "trial", "best_overlap", "best_index", "steps", "stop_reason"],
        rows,
        ["condition", "n_patterns", "mean_overlap", "sd_overlap", "trials"],
        summary_rows,
        cfg,
    )


def run_homology_correlation(cfg: RunConfig) -> RunResult:
    """Per trial: Betti numbers of the closure of the sampled functional
    complex alongside the final overlap; per condition and loading, the
    Pearson correlation between overlap and the first Betti number."""
    cfg.validate()
    rows = []
    summary_rows = []
    for cond_index, condition in enumerate(cfg.conditions):
        for loading in cfg.resolved_loadings():
            overlaps, beta1s = [], []
            for trial in range(cfg.trials):
                cx, score, outcome = _binary_trial(cfg, cond_index, condition, loading, trial)
                betti = betti_numbers(downward_closure(cx), max_dim=2, method=cfg.homology_method)
                overlaps.append(score.best_value)
                beta1s.append(betti[1])
                rows.append({
                    "condition": condition,
                    "n_patterns": loading,
                    "trial": trial,
                    "best_overlap": score.best_value,
                    "beta0": betti[0],
                    "beta1": betti[1],
                    "beta2": betti[2],
                    "steps": outcome.steps_taken,
                    "stop_reason": outcome.stop_reason,
                })
            try:
                r = pearson_r(overlaps, beta1s)
                r_out = repr(float(r))
            except ValueError:
                r_out = "undefined"
            mean, sd = summarize(overlaps)
            b1_mean, _ = summarize(beta1s)
            summary_rows.append({
                "condition": condition,
                "n_patterns": loading,
                "pearson_r": r_out,
                "mean_overlap": mean,
                "sd_overlap": sd,
                "mean_beta1": b1_mean,
                "trials": cfg.trials,
            })
    return RunResult(
        cfg.experiment,
        ["condition", "n_patterns", "trial", "best_overlap", "beta0", "beta1", "beta2",
         "steps", "stop_reason"],
        rows,
        ["condition", "n_patterns", "pearson_r", "mean_overlap", "sd_overlap",
         "mean_beta1", "trials"],
        summary_rows,
        cfg,
    )


# -- continuous experiment ---------------------------------------------------


def _continuous_corpus(cfg: RunConfig, needed: int):
    if cfg.dataset is not None:
        corpus = load_image_corpus(
            cfg.dataset, fmt=cfg.dataset_format, grayscale=cfg.grayscale
        )
    else:
        corpus = random_continuous_patterns(needed, cfg.n, [cfg.seed, 2, 0])
    if corpus.p < needed:
        raise ConfigError(
            f"corpus holds {corpus.p} patterns but the largest loading needs {needed}"
        )
    return corpus


def run_continuous_recall(cfg: RunConfig) -> RunResult:
    """Store the first P corpus patterns, query each with a noisy copy,
    settle, and classify recall. Corrupted queries depend only on the
    loading and query index, so all measures and conditions answer the
    same queries (a paired comparison). ced/cmd are skipped on K1 where
    they reduce to the plain pairwise distance."""
    cfg.validate()
    loadings = cfg.resolved_loadings()
    corpus = _continuous_corpus(cfg, max(loadings))
    n = corpus.n
    measures = [Similarity.from_name(m) for m in cfg.measures]
    noise = GaussianNoise(cfg.noise_variance)
    rows = []
    summary_rows = []
    for cond_index, condition in enumerate(cfg.conditions):
        spec = condition_spec(condition)
        for trial in range(cfg.trials):
            cx = sample_diluted(n, spec, [cfg.seed, 2, cond_index, trial, _STREAM_COMPLEX])
            for loading in loadings:
                stored = corpus.take(loading)
                n_queries = loading if cfg.max_queries is None else min(loading, cfg.max_queries)
                queries = [
                    corrupt(stored.data[qi], noise, [cfg.seed, 2, loading, qi, _STREAM_QUERY])
                    for qi in range(n_queries)
                ]
                for measure in measures:
                    if condition == "K1" and measure.kind in ("ced", "cmd"):
                        continue
                    hits = 0
                    for qi, query in enumerate(queries):
                        final, steps = settle(
                            query, stored, cx, measure, cfg.inv_t, max_steps=cfg.max_steps
                        )
                        ok = correct_recall(final, stored.data[qi])
                        hits += ok
                        rows.append({
                            "condition": condition,
                            "measure": measure.name,
                            "n_patterns": loading,
                            "trial": trial,
                            "query": qi,
                            "recalled": int(ok),
                            "settle_steps": steps,
                        })
                    summary_rows.append({
                        "condition": condition,
                        "measure": measure.name,
                        "n_patterns": loading,
                        "trial": trial,
                        "recall_fraction": hits / n_queries,
                        "queries": n_queries,
                    })
    return RunResult(
        cfg.experiment,
        ["condition", "measure", "n_patterns", "trial", "query", "recalled", "settle_steps"],
        rows,
        ["condition", "measure", "n_patterns", "trial", "recall_fraction", "queries"],
        summary_rows,
        cfg,
    )


# -- energy landscape grid ---------------------------------------------------


def principal_plane(data: np.ndarray):
    """Mean, first two principal axes, projections, and the explained
    variance ratio of a P x N pattern matrix."""
    if data.shape[0] < 3:
        raise ConfigError("energy grid needs at least 3 patterns for a stable plane")
    mean = data.mean(axis=0)
    centered = data - mean
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    axes = vt[:2]
    projected = centered @ axes.T
    power = s**2
    explained = float(power[:2].sum() / power.sum()) if power.sum() > 0 else 1.0
    return mean, axes, projected, explained


def run_energy_grid(cfg: RunConfig) -> RunResult:
    """Evaluate the continuous energy on a grid spanning the projection
    of the stored patterns onto their first two principal axes."""
    cfg.validate()
    from .continuous_net import continuous_energy

    loading = cfg.resolved_loadings()[0]
    corpus = _continuous_corpus(cfg, loading)
    stored = corpus.take(loading)
    mean, axes, projected, explained = principal_plane(stored.data)
    g = cfg.grid_points
    xs = np.linspace(projected[:, 0].min(), projected[:, 0].max(), g)
    ys = np.linspace(projected[:, 1].min(), projected[:, 1].max(), g)
    rows = []
    summary_rows = []
    grids = {}
    for cond_index, condition in enumerate(cfg.conditions):
        cx = sample_diluted(
            stored.n, condition_spec(condition), [cfg.seed, 3, cond_index, _STREAM_COMPLEX]
        )
        for inv_t in cfg.inv_t_grid:
            grid = np.zeros((g, g))
            for j, b in enumerate(ys):
                for i, a in enumerate(xs):
                    state = mean + a * axes[0] + b * axes[1]
                    e = continuous_energy(state, stored, cx, inv_t)
                    grid[j, i] = e
                    rows.append({
                        "condition": condition,
                        "inv_t": inv_t,
                        "grid_i": i,
                        "grid_j": j,
                        "component_1": float(a),
                        "component_2": float(b),
                        "energy": e,
                    })
            grids[(condition, inv_t)] = grid
            summary_rows.append({
                "condition": condition,
                "inv_t": inv_t,
                "min_energy": float(grid.min()),
                "max_energy": float(grid.max()),
                "energy_sd": float(grid.std()),
            })
    return RunResult(
        cfg.experiment,
        ["condition", "inv_t", "grid_i", "grid_j", "component_1", "component_2", "energy"],
        rows,
        ["condition", "inv_t", "min_energy", "max_energy", "energy_sd"],
        summary_rows,
        cfg,
        extras={"explained_variance": explained, "projected": projected, "grids": grids},
    )


# -- capacity report ---------------------------------------------------------


def run_capacity_report(cfg: RunConfig) -> RunResult:
    cfg.validate()
    n_patterns = cfg.resolved_loadings()[0] if cfg.loadings else None
    report = capacity_report(cfg.n, cfg.max_degree, n_patterns)
    row = {
        "n": cfg.n,
        "max_degree": cfg.max_degree,
        "n_patterns": "" if n_patterns is None else n_patterns,
        "capacity_with_errors": report["capacity_with_errors"],
        "capacity_without_errors": report["capacity_without_errors"],
        "connections": report["connections"],
        "z_total": report.get("z_total", ""),
        "prob_stable_pattern": report.get("prob_stable_pattern", ""),
    }
    cols = list(row)
    return RunResult(cfg.experiment, cols, [row], cols, [row], cfg, extras={"report": report})


# -- dispatch and emission ---------------------------------------------------


_RUNNERS = {
    "binary_overlap": run_binary_overlap,
    "continuous_recall": run_continuous_recall,
    "homology_correlation": run_homology_correlation,
    "energy_grid": run_energy_grid,
    "capacity_report": run_capacity_report,
}


def run(cfg: RunConfig) -> RunResult:
    cfg.validate()
    return _RUNNERS[cfg.experiment](cfg)


def _format_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, columns, rows) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format_cell(row[c]) for c in columns])


def emit_outputs(result: RunResult, out_dir) -> dict:
    """Write rows.csv, summary.csv, config-echo.json, and figures.
    Returns the written paths keyed by artifact name."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "rows": out / "rows.csv",
        "summary": out / "summary.csv",
        "config": out / "config-echo.json",
    }
    _write_csv(paths["rows"], result.columns, result.rows)
    _write_csv(paths["summary"], result.summary_columns, result.summary_rows)
    paths["config"].write_text(
        json.dumps(result.config.to_dict(), indent=2, sort_keys=True) + "\n"
    )
    try:
        if result.experiment in ("binary_overlap", "homology_correlation") and result.rows:
            paths["boxplot"] = out / "overlap_box.svg"
            plots.save_overlap_boxplot(result.rows, paths["boxplot"])
        elif result.experiment == "continuous_recall" and result.summary_rows:
            paths["curves"] = out / "recall_curves.svg"
            plots.save_recall_curves(result.summary_rows, paths["curves"])
        elif result.experiment == "energy_grid":
            projected = result.extras["projected"]
            for (condition, inv_t), grid in result.extras["grids"].items():
                name = f"energy_grid_{condition}_invt{inv_t:g}.svg"
                paths[name] = out / name
                plots.save_energy_heatmap(grid, projected, inv_t, paths[name])
    except Exception as exc:  # figures are decoration, CSVs the contract
        paths["plot_error"] = str(exc)
    if result.experiment == "capacity_report":
        paths["report"] = out / "capacity.json"
        paths["report"].write_text(json.dumps(result.extras["report"], indent=2) + "\n")
    return paths
