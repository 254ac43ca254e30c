"""Timed subtyping runs, benchmark families and CSV/JSON output."""

from __future__ import annotations

import csv
import json
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, TextIO

from .budget import Budget, BudgetExceeded
from .charform import subtype_cf_sub, subtype_cf_sup
from .generator import GenParams, gen_norec, gen_random, gen_super, gen_unfolded_pair
from .gh import subtype_gh
from .kps import subtype_kps
from .syntax import print_type
from .types import Kind, SessionType, nummsg, unfold_measure

ALGORITHMS: dict[str, Callable[..., bool]] = {
    "gh": subtype_gh,
    "kps": subtype_kps,
    "cf-sub": subtype_cf_sub,
    "cf-sup": subtype_cf_sup,
}
FAMILIES = ("random", "norec", "super-send", "super-recv", "unfolded")
CSV_HEADER = (
    "family",
    "param",
    "algorithm",
    "nummsg_lhs",
    "unfold_lhs",
    "nummsg_rhs",
    "unfold_rhs",
    "verdict",
    "timeout",
    "wall_nanos",
)


class AlgorithmDisagreement(RuntimeError):
    """Two completed algorithms returned different verdicts: an internal bug."""


def expand_algos(algos: str | Iterable[str]) -> list[str]:
    names = [a.strip() for a in algos.split(",")] if isinstance(algos, str) else list(algos)
    out: list[str] = []
    for name in names:
        for a in ALGORITHMS if name == "all" else (name,):
            if a not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}")
            if a not in out:
                out.append(a)
    return out


@dataclass
class CheckReport:
    algorithm: str
    lhs: str
    rhs: str
    verdict: bool | None
    wall_nanos: int
    metrics: dict[str, int] = field(default_factory=dict)

    @property
    def timeout(self) -> bool:
        return self.verdict is None

    def to_json(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "verdict": "timeout" if self.verdict is None else self.verdict,
            "wall_nanos": self.wall_nanos,
            "metrics": self.metrics,
        }


def pair_metrics(t: SessionType, u: SessionType) -> dict[str, int]:
    return {
        "nummsg_lhs": nummsg(t),
        "unfold_lhs": unfold_measure(t),
        "nummsg_rhs": nummsg(u),
        "unfold_rhs": unfold_measure(u),
    }


def timed(algo: str, t: SessionType, u: SessionType, timeout: float | None, max_steps: int | None = None) -> tuple[bool | None, int]:
    """One run under a fresh budget; ``(None, elapsed)`` on timeout."""
    budget = Budget(max_steps=max_steps, timeout=timeout)
    start = time.perf_counter_ns()
    try:
        verdict: bool | None = ALGORITHMS[algo](t, u, budget=budget)
    except BudgetExceeded:
        verdict = None
    return verdict, max(1, time.perf_counter_ns() - start)


def run_check(
    t: SessionType,
    u: SessionType,
    algos: str | Iterable[str] = "all",
    timeout: float | None = None,
    max_steps: int | None = None,
) -> list[CheckReport]:
    """Run each algorithm under its own deadline; completed verdicts must agree.

    ``timeout`` is in seconds per algorithm.
    """
    metrics = pair_metrics(t, u)
    lhs, rhs = print_type(t), print_type(u)
    reports = []
    for algo in expand_algos(algos):
        verdict, nanos = timed(algo, t, u, timeout, max_steps)
        reports.append(CheckReport(algo, lhs, rhs, verdict, nanos, dict(metrics)))
    verdicts = {r.algorithm: r.verdict for r in reports if r.verdict is not None}
    if len(set(verdicts.values())) > 1:
        raise AlgorithmDisagreement(f"verdicts differ on {lhs} <= {rhs}: {verdicts}")
    return reports


@dataclass(frozen=True)
class BenchRow:
    family: str
    param: int
    algorithm: str
    nummsg_lhs: int
    unfold_lhs: int
    nummsg_rhs: int
    unfold_rhs: int
    verdict: bool | None
    timeout: bool
    wall_nanos: int

    def csv_fields(self) -> list[str]:
        verdict = "" if self.verdict is None else str(self.verdict).lower()
        return [
            self.family,
            str(self.param),
            self.algorithm,
            str(self.nummsg_lhs),
            str(self.unfold_lhs),
            str(self.nummsg_rhs),
            str(self.unfold_rhs),
            verdict,
            str(self.timeout).lower(),
            str(self.wall_nanos),
        ]


def family_instance(family: str, param: int, seed: int = 0) -> tuple[SessionType, SessionType]:
    """The pair benchmarked for ``family`` at ``param`` (size, or ``k`` for super-*)."""
    match family:
        case "random":
            t = gen_random(GenParams(target_size=param, seed=seed))
            return t, t
        case "norec":
            t = gen_norec(GenParams(target_size=param, seed=seed))
            return t, t
        case "super-send":
            t = gen_super(param, Kind.INTERNAL)
            return t, t
        case "super-recv":
            t = gen_super(param, Kind.EXTERNAL)
            return t, t
        case "unfolded":
            return gen_unfolded_pair(GenParams(target_size=param, seed=seed))
    raise ValueError(f"unknown family {family!r}")


def _bench_cell(cell: tuple[str, int, str, float | None, int, int]) -> BenchRow:
    family, param, algo, timeout, reps, seed = cell
    t, u = family_instance(family, param, seed)
    m = pair_metrics(t, u)
    times: list[int] = []
    verdict: bool | None = None
    for _ in range(max(1, reps)):
        verdict, nanos = timed(algo, t, u, timeout)
        times.append(nanos)
        if verdict is None:
            # one timeout is enough; the remaining reps would time out too
            return BenchRow(family, param, algo, **m, verdict=None, timeout=True, wall_nanos=nanos)
    return BenchRow(family, param, algo, **m, verdict=verdict, timeout=False, wall_nanos=int(statistics.median(times)))


def run_bench(
    families: Iterable[str],
    sizes: Iterable[int],
    algos: str | Iterable[str] = "all",
    timeout: float | None = 60.0,
    repetitions: int = 3,
    seed: int = 0,
    jobs: int = 1,
) -> list[BenchRow]:
    """Median wall time of each (family, size, algorithm) cell.

    Rows are sorted by family, size and algorithm. ``jobs > 1`` runs cells in
    worker processes; results are the same apart from timings.
    """
    families = list(families)
    for f in families:
        if f not in FAMILIES:
            raise ValueError(f"unknown family {f!r}")
    cells = [
        (f, int(n), a, timeout, repetitions, seed)
        for f in families
        for n in sizes
        for a in expand_algos(algos)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_bench_cell, cells))
    else:
        rows = [_bench_cell(c) for c in cells]
    rows.sort(key=lambda r: (r.family, r.param, r.algorithm))
    for key in {(r.family, r.param) for r in rows}:
        verdicts = {r.verdict for r in rows if (r.family, r.param) == key and r.verdict is not None}
        if len(verdicts) > 1:
            raise AlgorithmDisagreement(f"verdicts differ on {key}")
    return rows


def emit_csv(rows: Iterable[BenchRow], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow(r.csv_fields())


def write_csv(rows: Iterable[BenchRow], path: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            emit_csv(rows, fh)
    except OSError as e:
        raise OSError(f"cannot write {path}: {e.strerror}") from e


def emit_json(reports: Iterable[CheckReport], out: TextIO) -> None:
    json.dump([r.to_json() for r in reports], out, indent=2)
    out.write("\n")
