"""Benchmark harness: plans, trials, CSV emission and scaling reports.

A plan is a list of cells; a cell fixes one (variant, generator, algorithm,
alpha, budget) combination and a trial count.  Trial t of a cell runs with
seed ``cell.seed + t`` (recorded in the CSV, replayable via ``solve``);
random cells draw their per-trial instance from the sub-stream
``derive_seed(cell.seed, f"instance:{t}")``, while hard cells share one
deterministic instance.

Every row whose run reports success is re-verified from scratch through the
oracle module before it is written; a verification failure aborts the plan
with RuntimeError rather than writing a lying row.  Rows appear in trial
order even when ``DUALVC_THREADS`` spreads trials over worker processes.
"""

from __future__ import annotations

import json
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, e, log
from typing import Sequence, TextIO

from . import dual as dual_mod
from . import oracle
from .dual import DualSolution
from .heuristics import ALGORITHMS, RunConfig, TransitionRecord, run
from .instances import (HARD_VARIANTS, VARIANTS, DynamicInstance, derive_seed,
                        hard_instance, random_dynamic)
from .numeric import RadicalValue, canonicalize_alpha, ceil_log, float_value

CSV_HEADER = "variant,algorithm,m,D,alpha,wmax,seed,evaluations,success,wall_ms"

#: Columns of the deterministic prefix (everything but wall time); the
#: ``solve`` command prints exactly these so repeated runs are byte-identical.
SOLVE_HEADER = CSV_HEADER.rsplit(",", 1)[0]


# ---------------------------------------------------------------------------
# plan model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BenchCell:
    """One benchmark configuration; ``trials`` seeded runs of it."""

    variant: str
    algorithm: str
    alpha: int
    trials: int
    budget: int
    seed: int
    kind: str = "random"      # "random" | "hard"
    n: int = 0                # random: vertex count
    m: int = 0                # random: edge count; hard: instance size
    d: int = 1                # random: edit scale
    w_max: int = 1            # random: weight cap (hard: alpha**m implied)

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        if self.kind not in ("random", "hard"):
            raise ValueError(f"cell kind must be random or hard: {self.kind}")
        if self.kind == "hard" and self.variant not in HARD_VARIANTS:
            raise ValueError(
                f"hard cells support variants {HARD_VARIANTS}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.kind == "random" and (self.n < 2 or self.d < 1
                                      or self.w_max < 1):
            raise ValueError("random cells need n >= 2, d >= 1, w_max >= 1")


@dataclass(frozen=True)
class BenchPlan:
    cells: tuple[BenchCell, ...]
    out: str = "results.csv"

    def __post_init__(self) -> None:
        if not self.cells:
            raise ValueError("plan has no cells")


_CELL_KEYS = {"variant", "algorithm", "alpha", "trials", "budget", "seed",
              "kind", "n", "m", "d", "w_max"}


def plan_from_json(data: dict) -> BenchPlan:
    cells = []
    for raw in data.get("cells", []):
        unknown = set(raw) - _CELL_KEYS
        if unknown:
            raise ValueError(f"unknown cell keys: {sorted(unknown)}")
        cells.append(BenchCell(**raw))
    return BenchPlan(tuple(cells), data.get("out", "results.csv"))


def load_plan(path: str) -> BenchPlan:
    with open(path, encoding="utf-8") as fh:
        return plan_from_json(json.load(fh))


# ---------------------------------------------------------------------------
# trials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BenchRecord:
    """One CSV row."""

    variant: str
    algorithm: str
    m: int
    d_scale: int
    alpha: int
    wmax: int
    seed: int
    evaluations: int
    success: bool
    wall_ms: float

    def row_prefix(self) -> str:
        return (f"{self.variant},{self.algorithm},{self.m},{self.d_scale},"
                f"{self.alpha},{encode_wmax(self.wmax, self.alpha)},"
                f"{self.seed},{self.evaluations},{int(self.success)}")

    def to_csv(self) -> str:
        return f"{self.row_prefix()},{self.wall_ms:.3f}"


def encode_wmax(wmax: int, alpha: int) -> str:
    """Decimal when it fits 64 bits, else the exact power ``alpha^e``."""
    if wmax < 2 ** 63:
        return str(wmax)
    e = ceil_log(alpha, wmax)
    if alpha ** e == wmax:
        return f"{alpha}^{e}"
    return str(wmax)


def decode_wmax(text: str) -> int:
    if "^" in text:
        base, exp = text.split("^")
        return int(base) ** int(exp)
    return int(text)


_MAX_REDRAWS = 64


def build_instance(cell: BenchCell, trial: int) -> DynamicInstance:
    if cell.kind == "hard":
        return hard_instance(cell.variant, cell.m, cell.alpha)
    # A random edit can leave the carried solution maximal on the edited
    # graph, in which case the trial measures nothing; redraw (seeded, hence
    # reproducible) until the edit actually invalidates it.  Degenerate
    # parameter corners where every edit is harmless give up after a cap and
    # keep the last draw.
    label = f"instance:{trial}"
    inst = random_dynamic(cell.variant, cell.n, cell.m, cell.d, cell.w_max,
                          derive_seed(cell.seed, label))
    for redraw in range(_MAX_REDRAWS):
        if not oracle.validate_mfds_naive(inst.graph_star, inst.y_init):
            break
        inst = random_dynamic(cell.variant, cell.n, cell.m, cell.d,
                              cell.w_max,
                              derive_seed(cell.seed, f"{label}:r{redraw}"))
    return inst


def verify_final(instance: DynamicInstance, alpha: int,
                 coeff_rows: Sequence[Sequence]) -> None:
    """Independent re-check of a reported success; raises RuntimeError."""
    a = canonicalize_alpha(alpha)
    values = [RadicalValue(a, row) for row in coeff_rows]
    if not oracle.validate_mfds_naive(instance.graph_star, values):
        raise RuntimeError(
            "reported success failed the independent maximality check")
    y = DualSolution(instance.graph_star, a, values, w_max=instance.w_max)
    _cover, cert = dual_mod.extract_cover(y)
    if not cert.ok:
        raise RuntimeError("tight-vertex cover failed its weight certificate")


def run_trial(cell: BenchCell, trial: int) -> BenchRecord:
    instance = build_instance(cell, trial)
    seed = cell.seed + trial
    config = RunConfig(cell.algorithm, cell.alpha, instance.w_max,
                       cell.budget, seed)
    t0 = time.perf_counter()
    result = run(instance, config)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    if result.success:
        verify_final(instance, cell.alpha, result.final_coeffs)
    # m and wmax record the cell's requested parameters (the experiment's
    # independent variables); a random instance may realize slightly
    # different edge counts or weights, reproducible from the recorded seed.
    w_cap = instance.w_max if cell.kind == "hard" else cell.w_max
    return BenchRecord(cell.variant, cell.algorithm, cell.m,
                       instance.d_scale, cell.alpha, w_cap, seed,
                       result.evaluations, result.success, wall_ms)


def _trial_job(job: tuple[BenchCell, int]) -> BenchRecord:
    return run_trial(*job)


def thread_count() -> int:
    raw = os.environ.get("DUALVC_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"DUALVC_THREADS must be an integer, got {raw!r}")
    if n < 1:
        raise ValueError(f"DUALVC_THREADS must be >= 1, got {n}")
    return n


def execute_plan(plan: BenchPlan, out: TextIO) -> list[BenchRecord]:
    """Run all trials, streaming CSV rows in trial order, then the summary."""
    jobs = [(cell, t) for cell in plan.cells for t in range(cell.trials)]
    out.write(CSV_HEADER + "\n")
    records: list[BenchRecord] = []
    workers = thread_count()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for rec in pool.map(_trial_job, jobs, chunksize=1):
                records.append(rec)
                out.write(rec.to_csv() + "\n")
                out.flush()
    else:
        for job in jobs:
            rec = _trial_job(job)
            records.append(rec)
            out.write(rec.to_csv() + "\n")
            out.flush()
    for line in summarize(plan, records):
        out.write(line + "\n")
    return records


def summarize(plan: BenchPlan, records: Sequence[BenchRecord]) -> list[str]:
    """Per-cell '#'-prefixed summary lines (CSV readers skip them)."""
    lines = ["# summary"]
    i = 0
    for cell in plan.cells:
        group = records[i:i + cell.trials]
        i += cell.trials
        evals = [r.evaluations for r in group]
        rate = sum(r.success for r in group) / cell.trials
        lines.append(
            f"# cell variant={cell.variant} algorithm={cell.algorithm}"
            f" m={group[0].m} D={group[0].d_scale} alpha={cell.alpha}"
            f" wmax={encode_wmax(group[0].wmax, cell.alpha)}"
            f" trials={cell.trials} success_rate={rate:.3f}"
            f" median_evals={statistics.median(evals):g}"
            f" mean_evals={statistics.fmean(evals):g}")
    return lines


def read_records(path: str) -> list[BenchRecord]:
    """Parse a results CSV back into records (summary lines are skipped)."""
    records = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header: {header!r}")
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 10:
                raise ValueError(f"malformed row: {line!r}")
            records.append(BenchRecord(
                parts[0], parts[1], int(parts[2]), int(parts[3]),
                int(parts[4]), decode_wmax(parts[5]), int(parts[6]),
                int(parts[7]), bool(int(parts[8])), float(parts[9])))
    return records


# ---------------------------------------------------------------------------
# scaling report
# ---------------------------------------------------------------------------


def bound_shape(m: int, d: int, alpha: int, w_max: int) -> float:
    """Reference runtime shape alpha * m * log_alpha(w_max) * ln(max(alpha*m,
    alpha*d*w_max)).  The weight factor is floored at 1 so unit weights do
    not zero the bound."""
    logw = max(log(w_max, alpha) if w_max > 1 else 0.0, 1.0)
    return alpha * m * logw * log(max(alpha * m, alpha * d * w_max))


def contrast_bound(m: int, alpha: int, w_max: int) -> float:
    """Budget shape for the fast-vs-slow contrast experiment: with
    core = alpha * m * log_alpha(w_max), the bound is core * ln(core)."""
    core = alpha * m * max(log(w_max, alpha) if w_max > 1 else 0.0, 1.0)
    return core * log(max(core, e))


def scaling_plan(trials: int = 12, base_seed: int = 20260821,
                 sizes: Sequence[int] = (64, 128, 256),
                 d_scales: Sequence[int] = (1, 4, 16),
                 w_max: int = 2 ** 14,
                 out: str = "scaling.csv") -> BenchPlan:
    """Canonical scaling-experiment plan: rls and ea on random edge-edit and
    weight-edit families, n = m/2, 8x bound_shape budget headroom, one
    well-separated seed block per cell."""
    cells = []
    alpha = 2
    for variant in ("E", "W"):
        for algorithm in ("rls", "ea"):
            for m in sizes:
                for d in d_scales:
                    budget = ceil(8 * bound_shape(m, d, alpha, w_max))
                    cells.append(BenchCell(
                        variant=variant, algorithm=algorithm, alpha=alpha,
                        trials=trials, budget=budget,
                        seed=base_seed + 1000 * len(cells),
                        kind="random", n=m // 2, m=m, d=d, w_max=w_max))
    return BenchPlan(tuple(cells), out=out)


@dataclass(frozen=True)
class ScalingCell:
    """Scaling statistics of one (variant, algorithm, D, alpha, wmax) group
    across its m values."""

    variant: str
    algorithm: str
    d_scale: int
    alpha: int
    wmax: int
    ms: tuple[int, ...]
    medians: tuple[float, ...]
    success_rates: tuple[float, ...]
    bounds: tuple[float, ...]
    ratios: tuple[float, ...]
    fit_constant: float       # least-squares constant over the ratios
    spread: float             # max ratio / min ratio
    within_band: bool         # spread <= 4
    super_bound_growth: bool  # ratios strictly increase across every m


@dataclass(frozen=True)
class ScalingReport:
    cells: tuple[ScalingCell, ...]


def scaling_report(records: Sequence[BenchRecord]) -> ScalingReport:
    """Group rows by everything but m and compare median evaluations against
    bound_shape across m.

    Requires at least one group spanning >= 3 distinct m values; groups with
    fewer are dropped (a stray extra cell in the CSV is not data).  Medians
    are floored at one evaluation for the ratio statistics: a zero median
    (instances already solved by the carried-over values) has no log-scale
    ratio, and it cannot witness super-bound growth either way.
    """
    groups: dict[tuple, dict[int, list[BenchRecord]]] = {}
    for r in records:
        key = (r.variant, r.algorithm, r.d_scale, r.alpha, r.wmax)
        groups.setdefault(key, {}).setdefault(r.m, []).append(r)
    cells = []
    for key in sorted(groups):
        by_m = groups[key]
        if len(by_m) < 3:
            continue
        variant, algorithm, d_scale, alpha, wmax = key
        ms = tuple(sorted(by_m))
        medians = tuple(
            float(statistics.median([r.evaluations for r in by_m[m]]))
            for m in ms)
        rates = tuple(
            sum(r.success for r in by_m[m]) / len(by_m[m]) for m in ms)
        bounds = tuple(bound_shape(m, d_scale, alpha, wmax) for m in ms)
        ratios = tuple(max(med, 1.0) / b for med, b in zip(medians, bounds))
        fit = statistics.fmean(ratios)
        spread = max(ratios) / min(ratios)
        super_growth = all(b > a for a, b in zip(ratios, ratios[1:]))
        cells.append(ScalingCell(
            variant, algorithm, d_scale, alpha, wmax, ms, medians, rates,
            bounds, ratios, fit, spread, spread <= 4.0, super_growth))
    if not cells:
        raise ValueError(
            "scaling report needs >= 3 distinct m values for some "
            "(variant, algorithm, D, alpha, wmax) group")
    return ScalingReport(tuple(cells))


def format_scaling_report(report: ScalingReport) -> str:
    lines = []
    for c in report.cells:
        lines.append(f"variant={c.variant} algorithm={c.algorithm}"
                     f" D={c.d_scale} alpha={c.alpha}"
                     f" wmax={encode_wmax(c.wmax, c.alpha)}")
        for m, med, rate, b, r in zip(c.ms, c.medians, c.success_rates,
                                      c.bounds, c.ratios):
            lines.append(f"  m={m} median_evals={med:g} success={rate:.2f}"
                         f" bound={b:.1f} ratio={r:.4g}")
        lines.append(f"  fit_constant={c.fit_constant:.4g}"
                     f" spread={c.spread:.3g}"
                     f" within_factor_4={'yes' if c.within_band else 'no'}"
                     f" super_bound_growth="
                     f"{'yes' if c.super_bound_growth else 'no'}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# run log (optional line-oriented trace for solve --log)
# ---------------------------------------------------------------------------


class RunLogger:
    """Streams one CSV-compatible line per evaluation: index, accepted, |I|,
    direction, sign after the step, and a decimal approximation of sum(Y)
    tracked incrementally from the changed values."""

    HEADER = "eval,accepted,i_size,direction,sign,sum_y"

    def __init__(self, fh: TextIO, instance: DynamicInstance,
                 alpha: int) -> None:
        self._fh = fh
        self._alpha = canonicalize_alpha(alpha)
        self._total = [Fraction(0)] * self._alpha.basis_dim
        for v in instance.y_init:
            self._accumulate(v, 1)
        fh.write(self.HEADER + "\n")

    def _accumulate(self, value, direction: int) -> None:
        if isinstance(value, RadicalValue):
            coeffs: Sequence = value.coeffs
        elif isinstance(value, tuple):
            coeffs = value
        else:
            coeffs = (value,)
        for k, c in enumerate(coeffs):
            self._total[k] += direction * c

    def __call__(self, rec: TransitionRecord) -> None:
        for _e, old, new in rec.changed:
            self._accumulate(old, -1)
            self._accumulate(new, 1)
        sum_y = float_value(RadicalValue(self._alpha, self._total))
        self._fh.write(f"{rec.eval_index},{int(rec.accepted)},"
                       f"{len(rec.edges)},{rec.direction},{rec.sign_after},"
                       f"{sum_y:.6g}\n")


# ---------------------------------------------------------------------------
# CLI command bodies (argument objects come from cli.build_parser)
# ---------------------------------------------------------------------------


def _plain_values(values: Sequence[RadicalValue]) -> tuple:
    """Map integer-valued RadicalValues back to plain ints (fast path)."""
    out = []
    for v in values:
        if all(c == 0 for c in v.coeffs[1:]) and v.coeffs[0].denominator == 1:
            out.append(int(v.coeffs[0]))
        else:
            out.append(v)
    return tuple(out)


def _instance_from_args(args) -> DynamicInstance:
    from .dual import load_dual
    from .graph import load_edit, load_instance
    from .instances import make_dynamic

    if args.hard:
        if args.m < 2:
            raise ValueError("--hard needs --m >= 2")
        return hard_instance(args.variant, args.m, args.alpha)
    if not (args.graph and args.edit and args.y0):
        raise ValueError("need --graph, --edit and --y0 (or --hard)")
    g = load_instance(args.graph)
    edit = load_edit(args.edit)
    y0 = load_dual(args.y0, g)
    variant = args.variant
    if variant is None:
        variant = "E" if edit.kind == "edges" else "W"
    return make_dynamic(g, _plain_values(y0.y), edit, variant)


def cmd_gen(args) -> int:
    """Emit <out>.graph.json, <out>.edit.json and <out>.y0.txt."""
    from .graph import save_edit, save_instance
    from .dual import save_dual

    if args.hard:
        if args.m < 2:
            raise ValueError("--hard needs --m >= 2")
        inst = hard_instance(args.variant, args.m, args.alpha)
    else:
        if args.variant is None:
            raise ValueError("gen needs --variant")
        if not (args.n and args.m and args.wmax):
            raise ValueError("random gen needs --n, --m and --wmax")
        inst = random_dynamic(args.variant, args.n, args.m, args.d,
                              args.wmax, args.seed)
    if not args.out:
        raise ValueError("gen needs --out <prefix>")
    y0 = DualSolution.from_ints(inst.graph, args.alpha, inst.y_orig,
                                w_max=inst.w_max)
    paths = (args.out + ".graph.json", args.out + ".edit.json",
             args.out + ".y0.txt")
    save_instance(inst.graph, paths[0])
    save_edit(inst.edit, paths[1])
    save_dual(y0, paths[2])
    for p in paths:
        print(p)
    return 0


def cmd_solve(args) -> int:
    """One run; prints the deterministic CSV row (no wall time).  Exit 0 on
    success, 1 when the budget runs out first."""
    from .dual import save_dual

    instance = _instance_from_args(args)
    config = RunConfig(args.algo, args.alpha, instance.w_max, args.budget,
                       args.seed)
    hook = None
    log_fh = None
    try:
        if args.log:
            log_fh = open(args.log, "w", encoding="utf-8")
            hook = RunLogger(log_fh, instance, args.alpha)
        result = run(instance, config, hook)
    finally:
        if log_fh is not None:
            log_fh.close()
    if result.success:
        verify_final(instance, args.alpha, result.final_coeffs)
    record = BenchRecord(instance.requested, args.algo, instance.m,
                         instance.d_scale, args.alpha, instance.w_max,
                         args.seed, result.evaluations, result.success, 0.0)
    print(SOLVE_HEADER)
    print(record.row_prefix())
    if args.out:
        a = canonicalize_alpha(args.alpha)
        final = DualSolution(
            instance.graph_star, a,
            [RadicalValue(a, row) for row in result.final_coeffs],
            w_max=instance.w_max)
        save_dual(final, args.out)
    return 0 if result.success else 1


def cmd_bench(args) -> int:
    """Execute a plan from --config; write CSV (+summary) to the plan's out
    path or --out."""
    if not args.config:
        raise ValueError("bench needs --config <plan.json>")
    plan = load_plan(args.config)
    out_path = args.out or plan.out
    with open(out_path, "w", encoding="utf-8") as fh:
        records = execute_plan(plan, fh)
    for line in summarize(plan, records):
        print(line)
    print(f"wrote {out_path} ({len(records)} rows)")
    return 0


def cmd_verify(args) -> int:
    """Check a dual dump against its graph; exit 0 only on a full pass."""
    from .dual import load_dual
    from .graph import load_instance

    g = load_instance(args.graph)
    y = load_dual(args.dual, g, w_max=args.wmax)
    feasible = dual_mod.sign(y) > 0
    maximal = dual_mod.is_mfds(y)
    print(f"feasible: {'yes' if feasible else 'no'}")
    print(f"maximal: {'yes' if maximal else 'no'}")
    ok = feasible and maximal
    if maximal:
        _cover, cert = dual_mod.extract_cover(y)
        print(f"cover_weight: {cert.cover_weight}")
        print(f"two_sum_y: {float_value(cert.sum_y.scale(2)):.6g}")
        print(f"weight_ok: {'yes' if cert.weight_ok else 'no'}")
        ok = ok and cert.ok
    return 0 if ok else 1
