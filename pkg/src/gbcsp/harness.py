"""Seeded Monte Carlo sweeps over constraint density, with CSV output.

Each grid point draws ``trials`` independent instances (one stream per
trial index, decorrelated across points by a per-point stream label),
optionally measures search-tree nodes, satisfiability, and unit-constraint
success, and lines the sample statistics up against the exact and
asymptotic expected-node formulas.  Runs are bit-reproducible: per-trial
records depend only on (master_seed, trial index, point), aggregation is a
deterministic fold in trial order, and floats are rendered with shortest
round-trip repr.
"""

from __future__ import annotations

import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import analytics
from .backtracker import solve_all
from .generator import sample_instance
from .model import Params
from .rng import SeedSpec
from .uc import run_uc

CSV_HEADER = "t,r,trials,mean_nodes,stderr_nodes,sat_fraction,uc_success,log_T_exact,log_T_asym,z_score"

MEASURES = ("nodes", "sat", "uc")


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: base parameters, a grid of constraint counts, and flags."""

    n: int
    d: int
    k: int
    q: int
    t_grid: tuple[int, ...]
    trials: int
    master_seed: int
    measures: tuple[str, ...] = ("nodes",)
    out: str | None = None
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "t_grid", tuple(int(t) for t in self.t_grid))
        object.__setattr__(self, "measures", tuple(self.measures))
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        for m in self.measures:
            if m not in MEASURES:
                raise ValueError(f"unknown measure {m!r}; choose from {MEASURES}")
        if not self.measures:
            raise ValueError("at least one measure is required")

    @classmethod
    def with_r_grid(cls, r_grid, **kwargs) -> "ExperimentConfig":
        """Convenience: real densities are rounded to t = round(r * n); the
        realized r = t/n is what gets reported."""
        n = kwargs["n"]
        t_grid = tuple(int(round(r * n)) for r in r_grid)
        return cls(t_grid=t_grid, **kwargs)

    def to_doc(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "k": self.k,
            "q": self.q,
            "t_grid": list(self.t_grid),
            "trials": self.trials,
            "master_seed": self.master_seed,
            "measures": list(self.measures),
            "out": self.out,
            "jobs": self.jobs,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "ExperimentConfig":
        known = {f: doc[f] for f in (
            "n", "d", "k", "q", "t_grid", "trials", "master_seed", "measures", "out", "jobs"
        ) if f in doc}
        return cls(**known)


@dataclass(frozen=True)
class SummaryRow:
    """Aggregates for one grid point; None marks an unmeasured field."""

    t: int
    r: float
    trials: int
    mean_nodes: float | None
    stderr_nodes: float | None
    sat_fraction: float | None
    uc_success: float | None
    log_T_exact: float | None
    log_T_asym: float | None
    z_score: float | None


def _run_one_trial(args) -> tuple[int, int | None, bool | None, bool | None]:
    params, master_seed, trial, measures = args
    spec = SeedSpec(master_seed, trial)
    label = f"instance/t{params.t}"
    inst = sample_instance(params, spec, label=label)
    nodes = None
    sat = None
    uc_ok = None
    if "nodes" in measures or "sat" in measures:
        stats = solve_all(inst)
        nodes = stats.nodes if "nodes" in measures else None
        sat = (stats.solution_count > 0) if "sat" in measures else None
    if "uc" in measures:
        uc_ok = run_uc(inst, spec, label=f"uc/t{params.t}").found
    return trial, nodes, sat, uc_ok


def run_point(params: Params, trials: int, master_seed: int, measures, jobs: int = 1,
              trial_offset: int = 0):
    """Per-trial records, in trial order, for one grid point.

    Trial j's draws depend only on (master_seed, trial_offset + j, point), so
    one 2N-trial run splits into two N-trial runs that pool identically.
    """
    tasks = [
        (params, master_seed, trial, tuple(measures))
        for trial in range(trial_offset, trial_offset + trials)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_one_trial, tasks, chunksize=max(1, trials // (jobs * 8))))
    else:
        records = [_run_one_trial(t) for t in tasks]
    records.sort(key=lambda rec: rec[0])
    return records


def _mean_stderr(values: list[int]) -> tuple[float, float | None]:
    count = len(values)
    total = sum(values)  # exact integer arithmetic
    mean = total / count
    if count < 2:
        return mean, None
    sq = sum(v * v for v in values)
    var = (sq - total * total / count) / (count - 1)
    return mean, math.sqrt(max(var, 0.0) / count)


def summarize_point(params: Params, records, measures) -> SummaryRow:
    measures = tuple(measures)
    mean = stderr = sat_fraction = uc_success = z_score = None
    log_t_exact = log_t_asym = None
    if params.strict:
        log_t_exact = analytics.log_exact_expected_nodes(params)
        if params.t >= 1:
            _, log_t_asym = analytics.prefactor_and_asymptote(params)
    if "nodes" in measures:
        values = [rec[1] for rec in records]
        mean, stderr = _mean_stderr(values)
        if stderr is not None and stderr > 0.0 and log_t_exact is not None:
            z_score = (mean - math.exp(log_t_exact)) / stderr
    if "sat" in measures:
        sat_fraction = sum(1 for rec in records if rec[2]) / len(records)
    if "uc" in measures:
        uc_success = sum(1 for rec in records if rec[3]) / len(records)
    return SummaryRow(
        t=params.t,
        r=params.t / params.n,
        trials=len(records),
        mean_nodes=mean,
        stderr_nodes=stderr,
        sat_fraction=sat_fraction,
        uc_success=uc_success,
        log_T_exact=log_t_exact,
        log_T_asym=log_t_asym,
        z_score=z_score,
    )


def run_sweep(config: ExperimentConfig) -> list[SummaryRow]:
    """All grid points; invalid points are reported and skipped."""
    rows = []
    for t in config.t_grid:
        try:
            params = Params(n=config.n, d=config.d, k=config.k, t=t, q=config.q)
        except (ValueError, TypeError) as exc:
            print(f"skipping grid point t={t}: {exc}", file=sys.stderr)
            continue
        records = run_point(params, config.trials, config.master_seed, config.measures, config.jobs)
        rows.append(summarize_point(params, records, config.measures))
    return rows


# --- output ----------------------------------------------------------------


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


_FIELDS = (
    "t", "r", "trials", "mean_nodes", "stderr_nodes", "sat_fraction",
    "uc_success", "log_T_exact", "log_T_asym", "z_score",
)


def format_csv(rows) -> str:
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(",".join(_cell(getattr(row, f)) for f in _FIELDS))
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> list[SummaryRow]:
    lines = [ln for ln in text.splitlines() if ln]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("unrecognized CSV header")
    rows = []
    for ln in lines[1:]:
        cells = ln.split(",")
        if len(cells) != len(_FIELDS):
            raise ValueError(f"expected {len(_FIELDS)} columns, got {len(cells)}")
        kwargs = {}
        for field, cell in zip(_FIELDS, cells):
            if cell == "":
                kwargs[field] = None
            elif field in ("t", "trials"):
                kwargs[field] = int(cell)
            else:
                kwargs[field] = float(cell)
        rows.append(SummaryRow(**kwargs))
    return rows


def emit_csv(rows, path: str) -> None:
    if not rows:
        raise ValueError("refusing to emit an empty table")
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(format_csv(rows))
    except OSError as exc:
        raise OSError(f"could not write CSV to {path}: {exc}") from exc


def format_plotdata(rows) -> str:
    lines = ["# " + " ".join(_FIELDS)]
    for row in rows:
        cells = [_cell(getattr(row, f)) or "nan" for f in _FIELDS]
        lines.append(" ".join(cells))
    return "\n".join(lines) + "\n"


def emit_plotdata(rows, path: str) -> None:
    if not rows:
        raise ValueError("refusing to emit an empty table")
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(format_plotdata(rows))
    except OSError as exc:
        raise OSError(f"could not write plot data to {path}: {exc}") from exc
