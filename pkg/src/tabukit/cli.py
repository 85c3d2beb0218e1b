"""Experiment runner: seeded repeat runs over the built-in problems.

Problems are registered by name; an experiment is `runs` independent
searches with seeds base_seed + run_index, reported as an aligned table
on stdout and optionally a CSV file. Every tuning constant can be
overridden from a key=value config file or --set flags (flags win).
"""
from __future__ import annotations

import argparse
import statistics
import sys
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .benchmarks import BUMP_VARIANTS, make_bump, make_schwefel10
from .control import RunResult, SearchConfig, run_single
from .core import Objective, normalize
from .hydraulic import STARVATION_POLICIES, CircuitTargets, make_circuit
from .multithread import MultiConfig, MultiRunResult, run_multi

SINGLE = "single"
MULTI = "multi"
START_FIXED = "fixed"
START_RANDOM = "random"

#: SearchConfig fields settable via --set / config file. The per-run seed
#: is excluded: it is always derived from the experiment's base seed.
SEARCH_FIELDS: dict[str, Callable[[str], object]] = {
    "n_tabu": int,
    "m_elite": int,
    "k_pattern": float,
    "step_initial": float,
    "step_reduce_factor": float,
    "step_min": float,
    "intensify_after": int,
    "diversify_after": int,
    "reduce_after": int,
    "match_tol": float,
    "max_evals": int,
}


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


#: Problem- and method-level options settable the same way.
OPTION_FIELDS: dict[str, Callable[[str], object]] = {
    "bump_variant": str,
    "pump_speed": float,
    "starvation": str,
    "lockstep": _parse_bool,
}


@dataclass
class ExperimentSpec:
    """One experiment: a problem, a method and a block of seeded runs."""

    problem: str
    method: str = SINGLE
    start: str = START_FIXED
    runs: int = 5
    base_seed: int = 0
    overrides: dict[str, object] = field(default_factory=dict)
    options: dict[str, object] = field(default_factory=dict)

    def validate(self) -> None:
        if self.problem not in PROBLEMS:
            raise ValueError(f"unknown problem: {self.problem!r}")
        if self.method not in (SINGLE, MULTI):
            raise ValueError(f"method must be {SINGLE!r} or {MULTI!r}")
        if self.start not in (START_FIXED, START_RANDOM):
            raise ValueError(f"start must be {START_FIXED!r} or {START_RANDOM!r}")
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        for key in self.overrides:
            if key not in SEARCH_FIELDS:
                raise ValueError(f"unknown search setting: {key!r}")
        for key in self.options:
            if key not in OPTION_FIELDS:
                raise ValueError(f"unknown option: {key!r}")


@dataclass
class ResultRow:
    """One run's outcome in the problem's native sense."""

    run_index: int
    seed_used: int
    best_value: float
    eval_count: int
    wall_time_ms: float
    best_params: np.ndarray


@dataclass
class Summary:
    """Across-run statistics of best values and evaluation counts."""

    mean_value: float
    median_value: float
    min_value: float
    max_value: float
    mean_evals: float
    median_evals: float
    min_evals: int
    max_evals: int


def _bump_problem(n: int):
    def build(options: dict) -> tuple[Objective, np.ndarray | None]:
        variant = str(options.get("bump_variant", "keane"))
        if variant not in BUMP_VARIANTS:
            raise ValueError(f"unknown bump variant: {variant!r}")
        objective = make_bump(n, variant)
        start = normalize(objective.space, np.full(n, 5.0))
        return objective, start

    return build


def _schwefel_problem(options: dict) -> tuple[Objective, np.ndarray | None]:
    return make_schwefel10(), None


def _circuit_problem(options: dict) -> tuple[Objective, np.ndarray | None]:
    targets = CircuitTargets(pump_speed=float(options.get("pump_speed", 1500.0)))
    policy = str(options.get("starvation", "proportional"))
    if policy not in STARVATION_POLICIES:
        raise ValueError(f"unknown starvation policy: {policy!r}")
    return make_circuit(targets, policy), None


#: name -> builder(options) -> (objective, fixed normalized start or None)
PROBLEMS: dict[str, Callable[[dict], tuple[Objective, np.ndarray | None]]] = {
    "schwefel10": _schwefel_problem,
    "bump20": _bump_problem(20),
    "bump50": _bump_problem(50),
    "circuit": _circuit_problem,
}


def run_experiment(spec: ExperimentSpec) -> tuple[list[ResultRow], Summary]:
    """Execute the experiment's runs in order and summarize them.

    Run i uses seed base_seed + i, so any row can be reproduced alone.
    A fixed start applies to the single thread, or to thread A with
    thread B random; start=random leaves every start seeded-random.
    """
    spec.validate()
    objective, fixed_start = PROBLEMS[spec.problem](spec.options)
    if spec.start == START_RANDOM:
        fixed_start = None
    lockstep = bool(spec.options.get("lockstep", True))

    rows = []
    for i in range(spec.runs):
        config = SearchConfig(seed=spec.base_seed + i, **spec.overrides)
        t0 = time.perf_counter()
        result: RunResult | MultiRunResult
        if spec.method == SINGLE:
            result = run_single(objective, config, start=fixed_start)
        else:
            result = run_multi(
                objective,
                MultiConfig(base=config, start_a=fixed_start, lockstep=lockstep),
            )
        wall_ms = (time.perf_counter() - t0) * 1000.0
        rows.append(
            ResultRow(
                run_index=i,
                seed_used=config.seed,
                best_value=result.best_native(objective),
                eval_count=result.evals,
                wall_time_ms=wall_ms,
                best_params=result.best_raw,
            )
        )
    return rows, summarize(rows)


def summarize(rows: list[ResultRow]) -> Summary:
    if not rows:
        raise ValueError("no rows to summarize")
    values = [r.best_value for r in rows]
    evals = [r.eval_count for r in rows]
    return Summary(
        mean_value=statistics.fmean(values),
        median_value=statistics.median(values),
        min_value=min(values),
        max_value=max(values),
        mean_evals=statistics.fmean(evals),
        median_evals=statistics.median(evals),
        min_evals=min(evals),
        max_evals=max(evals),
    )


def _fmt(value: float) -> str:
    """Shared numeric formatter: 6 significant digits."""
    return format(float(value), ".6g")


def _csv_cells(rows: list[ResultRow], summary: Summary) -> list[list[str]]:
    dim = rows[0].best_params.size
    header = ["run", "seed", "best_value", "evals", "wall_ms"]
    header += [f"param{j + 1}" for j in range(dim)]
    table = [header]
    for r in rows:
        cells = [str(r.run_index), str(r.seed_used), _fmt(r.best_value), str(r.eval_count)]
        cells.append(_fmt(r.wall_time_ms))
        cells += [_fmt(p) for p in r.best_params]
        table.append(cells)
    average = ["AVERAGE", "", _fmt(summary.mean_value), _fmt(summary.mean_evals), ""]
    average += [""] * dim
    table.append(average)
    return table


def emit_csv(rows: list[ResultRow], summary: Summary, path: str) -> None:
    """Write the experiment as UTF-8 CSV with a trailing AVERAGE row."""
    if not rows:
        raise ValueError("refusing to write an empty CSV")
    lines = [",".join(cells) for cells in _csv_cells(rows, summary)]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def emit_table(rows: list[ResultRow], summary: Summary) -> str:
    """Render the same cells as the CSV, aligned for a terminal."""
    if not rows:
        raise ValueError("no rows to render")
    cells = _csv_cells(rows, summary)
    widths = [max(len(row[j]) for row in cells) for j in range(len(cells[0]))]
    return "\n".join(
        "  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in cells
    )


def read_config_file(path: str) -> dict[str, str]:
    """Parse a `key = value` file; # starts a comment, blank lines skipped."""
    settings: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw_line in enumerate(fh, start=1):
            line = raw_line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, value = line.split("=", 1)
            settings[key.strip()] = value.strip()
    return settings


EXPERIMENT_FIELDS: dict[str, Callable[[str], object]] = {
    "problem": str,
    "method": str,
    "start": str,
    "runs": int,
    "seed": int,
    "out": str,
}


def build_spec(settings: dict[str, str]) -> tuple[ExperimentSpec, str | None]:
    """Turn a flat key->string mapping into a validated ExperimentSpec."""
    known: dict[str, object] = {}
    overrides: dict[str, object] = {}
    options: dict[str, object] = {}
    for key, text in settings.items():
        if key in EXPERIMENT_FIELDS:
            known[key] = EXPERIMENT_FIELDS[key](text)
        elif key in SEARCH_FIELDS:
            overrides[key] = SEARCH_FIELDS[key](text)
        elif key in OPTION_FIELDS:
            options[key] = OPTION_FIELDS[key](text)
        else:
            raise ValueError(f"unknown setting: {key!r}")
    if "problem" not in known:
        raise ValueError("no problem selected (use --problem or a config file)")
    spec = ExperimentSpec(
        problem=str(known["problem"]),
        method=str(known.get("method", SINGLE)),
        start=str(known.get("start", START_FIXED)),
        runs=int(known.get("runs", 5)),
        base_seed=int(known.get("seed", 0)),
        overrides=overrides,
        options=options,
    )
    spec.validate()
    SearchConfig(**spec.overrides).validate()
    out = known.get("out")
    return spec, None if out is None else str(out)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="tabukit",
        description="Run seeded tabu-search experiments on the built-in problems.",
    )
    parser.add_argument("--problem", choices=sorted(PROBLEMS))
    parser.add_argument("--method", choices=(SINGLE, MULTI))
    parser.add_argument("--runs", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--start", choices=(START_FIXED, START_RANDOM))
    parser.add_argument("--out", help="write results to this CSV file")
    parser.add_argument("--config", help="key = value settings file")
    parser.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        dest="assignments",
        help="override any search or problem setting; repeatable",
    )
    args = parser.parse_args(argv)

    try:
        settings: dict[str, str] = {}
        if args.config:
            settings.update(read_config_file(args.config))
        for assignment in args.assignments:
            if "=" not in assignment:
                raise ValueError(f"--set expects KEY=VALUE, got {assignment!r}")
            key, value = assignment.split("=", 1)
            settings[key.strip()] = value.strip()
        for flag in ("problem", "method", "runs", "seed", "start", "out"):
            value = getattr(args, flag)
            if value is not None:
                settings[flag] = str(value)
        spec, out_path = build_spec(settings)
        rows, summary = run_experiment(spec)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    print(emit_table(rows, summary))
    if out_path:
        try:
            emit_csv(rows, summary, out_path)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(f"wrote {out_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
