"""Seeded multi-trial harness, scaling fits, hypothesis suites, and the
CSV result pipeline.

A grid run executes ``trials`` independent trials per (benchmark, n, k)
cell. Every trial's seed is derived by hashing the master seed together
with the cell identity and trial index, so the result set is a pure
function of the configuration, independent of scheduling and cell order.
Hypothesis suites are pure functions of a result collection (plus their
thresholds); they never re-run simulations, and every report embeds the
master seed and a configuration hash so its inputs can be regenerated.
"""

from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass, replace
from multiprocessing import Pool
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.stats import chi2 as _chi2_dist

from . import calibration as cal
from .benchmarks import BenchmarkSpec, Kind, default_max_iterations
from .bounds import reference_model
from .engine import (AlgorithmSpec, TrajectoryRecord, TrialResult, measure,
                     run_offspring_budget, run_until_cover)

MAX_ITERATION_LIMIT = 2 ** 62  # cells beyond this are rejected up front


@dataclass(frozen=True)
class Checkpoint:
    """Named per-cell iteration checkpoint, e.g. 0.001 * n^2 * ln n.

    Shapes: "n2_log" -> c*n^2*ln(n); "n2" -> c*n^2; "n_pow_k1" -> c*n^(k+1);
    "const" -> c. Values are floored to integers.
    """

    name: str
    shape: str
    coefficient: float

    def iterations(self, n: int, k: Optional[int] = None) -> int:
        if self.shape == "n2_log":
            value = self.coefficient * n * n * math.log(n)
        elif self.shape == "n2":
            value = self.coefficient * n * n
        elif self.shape == "n_pow_k1":
            if k is None:
                raise ValueError(f"checkpoint {self.name!r} needs a gap size")
            value = self.coefficient * float(n) ** (k + 1)
        elif self.shape == "const":
            value = self.coefficient
        else:
            raise ValueError(f"unknown checkpoint shape {self.shape!r}")
        result = int(value)
        if result < 0:
            raise ValueError(f"checkpoint {self.name!r} is negative at n={n}")
        return result


@dataclass(frozen=True)
class ExperimentConfig:
    benchmark: str
    algorithm: str
    variant: str
    ns: tuple[int, ...]
    trials: int
    master_seed: int
    ks: tuple[int, ...] = ()
    max_iterations: Optional[int] = None
    interior_init: bool = False
    record_trajectories: bool = True
    checkpoints: tuple[Checkpoint, ...] = ()

    def __post_init__(self):
        if self.benchmark not in ("cocz", "omm", "ojzj"):
            raise ValueError(f"unknown benchmark {self.benchmark!r}")
        if self.algorithm not in ("semo", "gsemo"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.variant not in ("original", "modified"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.trials < 1:
            raise ValueError("trials per cell must be >= 1")
        if not self.ns:
            raise ValueError("empty problem-size grid")
        if any(b <= a for a, b in zip(self.ns, self.ns[1:])):
            raise ValueError("problem-size grid must be strictly increasing")
        if self.benchmark == "ojzj":
            if not self.ks:
                raise ValueError("ojzj grid needs at least one gap size")
        elif self.ks:
            raise ValueError(f"{self.benchmark} takes no gap sizes")
        if self.interior_init and self.benchmark != "ojzj":
            raise ValueError("interior initialization is ojzj-specific")
        for n, k in self.cells():
            BenchmarkSpec(Kind(self.benchmark), n, k)  # validates n/k
            for cp in self.checkpoints:
                cp.iterations(n, k)

    def cells(self) -> list[tuple[int, Optional[int]]]:
        if self.benchmark == "ojzj":
            return [(n, k) for n in self.ns for k in self.ks]
        return [(n, None) for n in self.ns]

    def benchmark_spec(self, n: int, k: Optional[int]) -> BenchmarkSpec:
        return BenchmarkSpec(Kind(self.benchmark), n, k)

    def resolve_max_iterations(self, n: int, k: Optional[int]) -> int:
        if self.max_iterations is not None:
            return self.max_iterations
        return default_max_iterations(self.benchmark_spec(n, k),
                                      cal.MAX_ITERATIONS_C)


def config_hash(config: ExperimentConfig) -> str:
    """Short stable digest of a configuration, embedded in reports."""
    return hashlib.sha256(repr(config).encode()).hexdigest()[:16]


def trial_seed(master_seed: int, benchmark: str, n: int, k: Optional[int],
               algorithm: str, variant: str, trial: int) -> int:
    """Per-trial seed from the master seed and the cell identity.

    Hash-derived, so the seed depends only on what the trial is, never on
    where it sits in the execution schedule.
    """
    text = f"{master_seed}|{benchmark}|n={n}|k={k}|{algorithm}|{variant}|t={trial}"
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:16], "big")


def _run_task(args) -> TrialResult:
    config, n, k, trial = args
    seed = trial_seed(config.master_seed, config.benchmark, n, k,
                      config.algorithm, config.variant, trial)
    bspec = config.benchmark_spec(n, k)
    alg = AlgorithmSpec.from_names(config.algorithm, config.variant,
                                   config.resolve_max_iterations(n, k))
    sample_at = tuple(cp.iterations(n, k) for cp in config.checkpoints)
    return run_until_cover(bspec, alg, seed,
                           interior_init=config.interior_init,
                           record_trajectory=config.record_trajectories,
                           sample_at=sample_at)


def run_grid(config: ExperimentConfig, jobs: int = 1) -> list[TrialResult]:
    """All trials of the grid, ordered by (cell, trial index).

    The output is identical for any ``jobs`` value and any scheduling,
    because seeds are content-derived and the collector keeps task order.
    """
    for n, k in config.cells():
        cutoff = config.resolve_max_iterations(n, k)
        if cutoff > MAX_ITERATION_LIMIT:
            raise ValueError(
                f"cell n={n} k={k}: iteration cutoff {cutoff} exceeds the "
                f"supported limit {MAX_ITERATION_LIMIT}")
    tasks = [(config, n, k, trial)
             for n, k in config.cells()
             for trial in range(config.trials)]
    if jobs <= 1:
        return [_run_task(t) for t in tasks]
    with Pool(processes=jobs) as pool:
        return pool.map(_run_task, tasks, chunksize=1)


# ---------------------------------------------------------------------------
# scaling fits


@dataclass(frozen=True)
class ScalingFit:
    """Log-log least squares of per-n medians against a model term.

    ``pure_poly`` regresses log(median) on log(n); ``poly_log`` on
    log(n^2 ln n). The exponent is the slope, the constant exp(intercept);
    the CI comes from a trial-level bootstrap of the cell medians.
    """

    model: str
    metric: str
    exponent: float
    exponent_ci: tuple[float, float]
    constant: float
    residuals: tuple[float, ...]
    n_grid: tuple[int, ...]
    per_n_median: dict[int, float]
    per_n_iqr: dict[int, tuple[float, float]]


def _runtime_metric(result: TrialResult, metric: str) -> float:
    value = (result.runtime_evals if metric == "evals"
             else result.runtime_iters)
    return math.inf if result.censored else float(value)


def _single_series(results: Sequence[TrialResult]) -> None:
    ids = {(r.benchmark, r.k, r.algorithm, r.variant) for r in results}
    if len(ids) != 1:
        raise ValueError(f"results mix incompatible cells: {sorted(ids)}")


def _model_term(model: str, n: int) -> float:
    if model == "pure_poly":
        return float(n)
    if model == "poly_log":
        return n * n * math.log(n)
    raise ValueError(f"unknown scaling model {model!r}")


def fit_scaling(results: Sequence[TrialResult], model: str = "pure_poly", *,
                metric: str = "evals",
                bootstrap: int = cal.BOOTSTRAP_RESAMPLES,
                bootstrap_seed: int = 0) -> ScalingFit:
    """Fit the growth of median runtimes over the n grid."""
    _single_series(results)
    by_n: dict[int, list[float]] = {}
    for r in results:
        by_n.setdefault(r.n, []).append(_runtime_metric(r, metric))
    ns = sorted(by_n)
    if len(ns) < 3:
        raise ValueError(f"need >= 3 grid points for a fit, got {len(ns)}")
    medians = {}
    iqrs = {}
    for n in ns:
        values = by_n[n]
        med = float(np.median(values))
        if not math.isfinite(med):
            raise ValueError(
                f"cell n={n}: censored median ({sum(map(math.isinf, values))}"
                f"/{len(values)} trials censored); cannot fit")
        medians[n] = med
        finite = [v for v in values if math.isfinite(v)]
        iqrs[n] = (float(np.quantile(finite, 0.25)),
                   float(np.quantile(finite, 0.75)))

    x = np.array([math.log(_model_term(model, n)) for n in ns])
    y = np.array([math.log(medians[n]) for n in ns])
    slope, intercept = np.polyfit(x, y, 1)
    residuals = tuple(float(r) for r in (y - (slope * x + intercept)))

    rng = np.random.default_rng(bootstrap_seed)
    slopes = []
    dropped = 0
    for _ in range(bootstrap):
        yb = []
        ok = True
        for n in ns:
            values = by_n[n]
            sample = rng.choice(values, size=len(values), replace=True)
            med = float(np.median(sample))
            if not math.isfinite(med):
                ok = False
                break
            yb.append(math.log(med))
        if not ok:
            dropped += 1
            continue
        slopes.append(np.polyfit(x, np.array(yb), 1)[0])
    if dropped > bootstrap // 5:
        raise ValueError(
            f"{dropped}/{bootstrap} bootstrap resamples had censored "
            "medians; too much censoring for a stable CI")
    ci = (float(np.quantile(slopes, 0.025)), float(np.quantile(slopes, 0.975)))
    return ScalingFit(model=model, metric=metric, exponent=float(slope),
                      exponent_ci=ci, constant=float(math.exp(intercept)),
                      residuals=residuals, n_grid=tuple(ns),
                      per_n_median=medians, per_n_iqr=iqrs)


# ---------------------------------------------------------------------------
# hypothesis suites


@dataclass(frozen=True)
class CellOutcome:
    cell: str
    passes: int
    trials: int
    required: float
    detail: str = ""

    @property
    def frequency(self) -> float:
        return self.passes / self.trials if self.trials else 0.0

    @property
    def ok(self) -> bool:
        return self.trials > 0 and self.frequency >= self.required


@dataclass(frozen=True)
class HypothesisReport:
    hypothesis: str
    threshold: float
    cells: tuple[CellOutcome, ...]
    verdict: str
    master_seed: Optional[int] = None
    config_hash: Optional[str] = None
    notes: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"


def _verdict(cells: Iterable[CellOutcome]) -> str:
    cells = list(cells)
    return "PASS" if cells and all(c.ok for c in cells) else "FAIL"


def _cell_label(r: TrialResult) -> str:
    k = f",k={r.k}" if r.k is not None else ""
    return f"{r.benchmark},n={r.n}{k},{r.algorithm},{r.variant}"


def group_by_cell(results: Sequence[TrialResult]) -> dict[str, list[TrialResult]]:
    grouped: dict[str, list[TrialResult]] = {}
    for r in results:
        grouped.setdefault(_cell_label(r), []).append(r)
    return grouped


def _require_trajectories(results: Sequence[TrialResult], suite: str) -> None:
    missing = [r for r in results if not r.trajectory]
    if missing:
        raise ValueError(
            f"{suite}: {len(missing)} trials carry no trajectory samples; "
            "run the grid with trajectory recording enabled")


def check_front_spread(results: Sequence[TrialResult],
                       config: ExperimentConfig, *,
                       coefficient: float = cal.FRONT_SPREAD_C,
                       threshold: float = cal.PASS_FREQUENCY) -> HypothesisReport:
    """Time to gather a linear number of Pareto-optimal members.

    A trial passes when it first holds at least n/4 (cocz) resp. n/2
    (omm/ojzj) Pareto-optimal members within coefficient*n^2 iterations.
    """
    _require_trajectories(results, "front_spread")
    cells = []
    for label, group in group_by_cell(results).items():
        n = group[0].n
        need = math.ceil(n / 4) if group[0].benchmark == "cocz" else math.ceil(n / 2)
        budget = int(coefficient * n * n)
        passes = 0
        for r in group:
            hit = next((rec.t for rec in r.trajectory if rec.covered >= need),
                       None)
            if hit is not None and hit <= budget:
                passes += 1
        cells.append(CellOutcome(label, passes, len(group), threshold,
                                 detail=f"need>={need} members within t<={budget}"))
    return HypothesisReport(
        hypothesis="front_spread", threshold=threshold, cells=tuple(cells),
        verdict=_verdict(cells), master_seed=config.master_seed,
        config_hash=config_hash(config),
        notes=f"budget coefficient {coefficient:.4g} (calibrated)")


def check_border_distance(results: Sequence[TrialResult],
                          config: ExperimentConfig, *,
                          coefficient: float = cal.BORDER_DISTANCE_C,
                          threshold: float = cal.PASS_FREQUENCY) -> HypothesisReport:
    """Persistence of the distance to the extremal front points.

    A trial passes when every sampled iteration t <= floor(c*n^2*ln n) has
    population border distance >= sqrt(n) (>= max(sqrt(n), k) for ojzj).
    """
    _require_trajectories(results, "border_distance")
    cells = []
    for label, group in group_by_cell(results).items():
        n = group[0].n
        k = group[0].k
        horizon = int(coefficient * n * n * math.log(n))
        bar = math.sqrt(n)
        if group[0].benchmark == "ojzj" and k is not None:
            bar = max(bar, float(k))
        passes = 0
        for r in group:
            worst = min(rec.d_pf for rec in r.trajectory if rec.t <= horizon)
            if worst >= bar:
                passes += 1
        cells.append(CellOutcome(label, passes, len(group), threshold,
                                 detail=f"d_pf>={bar:.3g} through t<={horizon}"))
    return HypothesisReport(
        hypothesis="border_distance", threshold=threshold, cells=tuple(cells),
        verdict=_verdict(cells), master_seed=config.master_seed,
        config_hash=config_hash(config),
        notes=f"horizon coefficient {coefficient:.4g} (calibrated, not a "
              "theoretical constant)")


def check_lower_bound_runtime(results: Sequence[TrialResult],
                              config: ExperimentConfig, *,
                              epsilon: Optional[float] = None,
                              ratio_window: Optional[tuple[float, float]] = None,
                              check_ratios: bool = True,
                              metric: str = "evals") -> HypothesisReport:
    """Growth-shape gate for cover times.

    Per grid point, the 10% runtime quantile must exceed epsilon*model(n);
    per grid doubling, the median ratio must land in the accepted window
    (skipped with ``check_ratios=False``; the heavy-tailed gap benchmarks
    make desk-scale median ratios too noisy for a hard gate). Censored
    runtimes enter the q10 at their cutoff value (conservative) and poison
    medians (reported as failures).
    """
    _single_series(results)
    sample = results[0]
    kind = Kind(sample.benchmark)
    if epsilon is None:
        epsilon = cal.LOWER_BOUND_EPSILON[sample.benchmark]
    if ratio_window is None:
        ratio_window = cal.DOUBLING_RATIO_WINDOW[sample.benchmark]
    by_n: dict[int, list[TrialResult]] = {}
    for r in results:
        by_n.setdefault(r.n, []).append(r)
    cells = []
    medians: dict[int, float] = {}
    for n in sorted(by_n):
        group = by_n[n]
        censored = sum(r.censored for r in group)
        if censored > len(group) // 2:
            raise ValueError(
                f"cell n={n}: {censored}/{len(group)} trials censored; "
                "majority must finish for the runtime gate")
        values = [float(r.runtime_evals if metric == "evals" else r.runtime_iters)
                  for r in group]
        q10 = float(np.quantile(values, 0.10))
        med = float(np.median([_runtime_metric(r, metric) for r in group]))
        medians[n] = med
        floor_value = epsilon * reference_model(kind, n, sample.k)
        ok = q10 > floor_value
        cells.append(CellOutcome(
            f"{sample.benchmark},n={n}:q10", int(ok), 1, 1.0,
            detail=f"q10={q10:.0f} vs floor {floor_value:.0f}"))
    if check_ratios:
        ns = sorted(medians)
        lo, hi = ratio_window
        for n in ns:
            if 2 * n not in medians:
                continue
            ratio = medians[2 * n] / medians[n]
            ok = math.isfinite(ratio) and lo <= ratio <= hi
            cells.append(CellOutcome(
                f"{sample.benchmark},n={n}->{2 * n}:ratio", int(ok), 1, 1.0,
                detail=f"median ratio {ratio:.3g}, window [{lo}, {hi}]"))
    return HypothesisReport(
        hypothesis="lower_bound_runtime", threshold=1.0, cells=tuple(cells),
        verdict=_verdict(cells), master_seed=config.master_seed,
        config_hash=config_hash(config),
        notes=f"epsilon={epsilon}, growth metric={metric}")


def check_semo_ojzj_failure(results: Sequence[TrialResult], *,
                            config: Optional[ExperimentConfig] = None,
                            control_threshold: float = cal.CONTROL_COVER_FREQUENCY
                            ) -> HypothesisReport:
    """One-bit mutation cannot reach the extremal points from the interior.

    Every semo cell must have zero covering trials; gsemo cells in the
    same result set act as controls and must cover in at least
    ``control_threshold`` of trials.
    """
    if any(r.benchmark != "ojzj" for r in results):
        raise ValueError("semo-failure suite expects ojzj results only")
    notes = []
    cells = []
    for label, group in group_by_cell(results).items():
        not_interior = [r for r in group if r.interior_init is False]
        unknown = [r for r in group if r.interior_init is None]
        if group[0].algorithm == "semo":
            if not_interior:
                raise ValueError(
                    f"{label}: {len(not_interior)} trials ran without "
                    "interior initialization; the failure argument needs it")
            if unknown:
                notes.append(f"{label}: interior flag unknown for "
                             f"{len(unknown)} trials (loaded from CSV)")
            passes = sum(r.censored for r in group)
            cells.append(CellOutcome(label, passes, len(group), 1.0,
                                     detail="censored (never covered)"))
        else:
            passes = sum(not r.censored for r in group)
            cells.append(CellOutcome(label, passes, len(group),
                                     control_threshold,
                                     detail="control: covered"))
    return HypothesisReport(
        hypothesis="semo_ojzj_failure", threshold=1.0, cells=tuple(cells),
        verdict=_verdict(cells),
        master_seed=config.master_seed if config else None,
        config_hash=config_hash(config) if config else None,
        notes="; ".join(notes))


def _state_statistic(bspec: BenchmarkSpec, state) -> tuple[int, int]:
    rec = measure(state)
    first = rec.max_g1 if bspec.kind is Kind.COCZ else rec.covered
    return (first, rec.pop_size)


def check_equivalence_modified_original(
        bspec: BenchmarkSpec, *,
        algorithm: str = "gsemo",
        offspring_steps: int = 30,
        trials_per_variant: int = 10_000,
        master_seed: int = 0,
        slot_count_offset: int = 0,
        p_threshold: float = cal.EQUIVALENCE_P_THRESHOLD,
        min_expected: float = cal.EQUIVALENCE_MIN_EXPECTED) -> HypothesisReport:
    """Distributional equivalence of the two selection rules.

    Runs both variants for a fixed number of non-idle steps and compares
    the joint histogram of (best cooperative level, population size) with
    a two-sample chi-square test. Filtering idle iterations away turns the
    slot-based process into the uniform one, so the histograms must agree;
    ``slot_count_offset`` deliberately breaks the slot range for negative
    controls.
    """
    histograms: list[dict[tuple[int, int], int]] = []
    for variant in ("modified", "original"):
        alg = AlgorithmSpec.from_names(algorithm, variant)
        offset = slot_count_offset if variant == "modified" else 0
        hist: dict[tuple[int, int], int] = {}
        for trial in range(trials_per_variant):
            seed = trial_seed(master_seed, bspec.kind.value, bspec.n, bspec.k,
                              algorithm, f"equiv-{variant}", trial)
            try:
                state = run_offspring_budget(bspec, alg, seed, offspring_steps,
                                             slot_count_offset=offset)
            except RuntimeError:
                # a broken slot range can strand every member outside the
                # draw range; count the stuck run as its own outcome state
                key = (-1, -1)
            else:
                key = _state_statistic(bspec, state)
            hist[key] = hist.get(key, 0) + 1
        histograms.append(hist)
    h_mod, h_orig = histograms
    n1 = sum(h_mod.values())
    n2 = sum(h_orig.values())
    keys = sorted(set(h_mod) | set(h_orig))
    raw = [(h_mod.get(key, 0), h_orig.get(key, 0)) for key in keys]
    # pool rare bins so every expected count clears the chi-square rule
    total_floor = min_expected * (n1 + n2) / min(n1, n2)
    raw.sort(key=lambda c: c[0] + c[1], reverse=True)
    bins: list[tuple[int, int]] = []
    rest = [0, 0]
    for c1, c2 in raw:
        if c1 + c2 >= total_floor:
            bins.append((c1, c2))
        else:
            rest[0] += c1
            rest[1] += c2
    if rest[0] + rest[1] > 0:
        if rest[0] + rest[1] >= total_floor or not bins:
            bins.append((rest[0], rest[1]))
        else:
            c1, c2 = bins.pop()
            bins.append((c1 + rest[0], c2 + rest[1]))
    if len(bins) < 2:
        raise ValueError(
            f"only {len(bins)} usable histogram bin(s) after pooling "
            f"(expected-count floor {min_expected}); increase "
            "trials_per_variant for enough test power")
    stat = 0.0
    for c1, c2 in bins:
        tot = c1 + c2
        e1 = n1 * tot / (n1 + n2)
        e2 = n2 * tot / (n1 + n2)
        stat += (c1 - e1) ** 2 / e1 + (c2 - e2) ** 2 / e2
    dof = len(bins) - 1
    p_value = float(_chi2_dist.sf(stat, dof))
    ok = p_value > p_threshold
    label = (f"{bspec.kind.value},n={bspec.n},{algorithm},"
             f"m={offspring_steps},offset={slot_count_offset}")
    cell = CellOutcome(label, int(ok), 1, 1.0,
                       detail=f"chi2={stat:.2f}, dof={dof}, p={p_value:.5g}")
    return HypothesisReport(
        hypothesis="equivalence_modified_original", threshold=p_threshold,
        cells=(cell,), verdict=_verdict([cell]), master_seed=master_seed,
        notes=f"{trials_per_variant} trials per variant, "
              f"{len(bins)} pooled bins")


def check_scaling_exponent(results: Sequence[TrialResult],
                           config: ExperimentConfig, *,
                           model: str = "pure_poly",
                           window: Optional[tuple[float, float]] = None,
                           metric: str = "evals",
                           bootstrap_seed: int = 0
                           ) -> tuple[HypothesisReport, ScalingFit]:
    """Fit the runtime growth and gate the fitted exponent.

    With the default pure-power model, n^2 log n data lands a little above
    exponent 2 and n^(k+1) data near k+1; the accepted windows come from
    the calibration defaults unless given explicitly.
    """
    _single_series(results)
    benchmark = results[0].benchmark
    if window is None:
        window = cal.EXPONENT_WINDOW[benchmark]
    fit = fit_scaling(results, model, metric=metric,
                      bootstrap_seed=bootstrap_seed)
    lo, hi = window
    ok = lo <= fit.exponent <= hi
    cell = CellOutcome(
        f"{benchmark},exponent:{model}", int(ok), 1, 1.0,
        detail=f"exponent {fit.exponent:.3f} "
               f"(CI [{fit.exponent_ci[0]:.3f}, {fit.exponent_ci[1]:.3f}]), "
               f"window [{lo}, {hi}]")
    report = HypothesisReport(
        hypothesis="scaling_exponent", threshold=1.0, cells=(cell,),
        verdict=_verdict([cell]), master_seed=config.master_seed,
        config_hash=config_hash(config),
        notes=f"model={model}, metric={metric}")
    return report, fit


# ---------------------------------------------------------------------------
# CSV pipeline

TRIALS_COLUMNS = ("benchmark", "n", "k", "algorithm", "variant", "seed",
                  "runtime_evals", "runtime_iters", "censored")
TRAJECTORY_COLUMNS = ("trial_id", "t", "pop_size", "max_g1", "z_count",
                      "d_pf", "front_covered")
REPORT_COLUMNS = ("suite", "cell", "passes", "trials", "frequency",
                  "required", "verdict", "detail")


def trial_id(result: TrialResult) -> str:
    k = f"-k{result.k}" if result.k is not None else ""
    return (f"{result.benchmark}-n{result.n}{k}-{result.algorithm}"
            f"-{result.variant}-s{result.seed}")


def write_trials_csv(results: Sequence[TrialResult], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRIALS_COLUMNS)
        for r in results:
            writer.writerow([r.benchmark, r.n,
                             "" if r.k is None else r.k,
                             r.algorithm, r.variant, r.seed,
                             r.runtime_evals, r.runtime_iters,
                             int(r.censored)])


def write_trajectories_csv(results: Sequence[TrialResult], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRAJECTORY_COLUMNS)
        for r in results:
            tid = trial_id(r)
            for rec in r.trajectory:
                writer.writerow([
                    tid, rec.t, rec.pop_size,
                    "" if rec.max_g1 is None else rec.max_g1,
                    "" if rec.z_count is None else rec.z_count,
                    rec.d_pf, repr(rec.front_covered)])


def load_results(trials_path, trajectories_path=None) -> list[TrialResult]:
    """Rebuild TrialResult objects from the CSV pipeline.

    The trials file is authoritative for runtimes; trajectory rows are
    joined back by trial id. The interior-initialization flag is not part
    of the file schema and is restored as None (unknown).
    """
    results: list[TrialResult] = []
    with open(trials_path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != TRIALS_COLUMNS:
            raise ValueError(
                f"{trials_path}: expected header {','.join(TRIALS_COLUMNS)}")
        for row in reader:
            k = int(row["k"]) if row["k"] != "" else None
            results.append(TrialResult(
                benchmark=row["benchmark"], n=int(row["n"]), k=k,
                algorithm=row["algorithm"], variant=row["variant"],
                seed=int(row["seed"]),
                runtime_evals=int(row["runtime_evals"]),
                runtime_iters=int(row["runtime_iters"]),
                censored=bool(int(row["censored"])),
                final_pop_size=-1, final_covered=-1,
                final_front_covered=float("nan"),
                interior_init=None, trajectory=()))
    if not results:
        raise ValueError(f"{trials_path}: no data rows")
    if trajectories_path is None:
        return results
    by_tid: dict[str, list[TrajectoryRecord]] = {}
    by_id = {trial_id(r): r for r in results}
    with open(trajectories_path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != TRAJECTORY_COLUMNS:
            raise ValueError(f"{trajectories_path}: expected header "
                             f"{','.join(TRAJECTORY_COLUMNS)}")
        for row in reader:
            tid = row["trial_id"]
            ref = by_id.get(tid)
            if ref is None:
                raise ValueError(
                    f"{trajectories_path}: unknown trial id {tid!r}")
            front_size = BenchmarkSpec(Kind(ref.benchmark), ref.n,
                                       ref.k).front_size
            frac = float(row["front_covered"])
            by_tid.setdefault(tid, []).append(TrajectoryRecord(
                t=int(row["t"]), pop_size=int(row["pop_size"]),
                max_g1=int(row["max_g1"]) if row["max_g1"] != "" else None,
                z_count=int(row["z_count"]) if row["z_count"] != "" else None,
                d_pf=int(row["d_pf"]), covered=round(frac * front_size),
                front_covered=frac))
    return [replace(r, trajectory=tuple(
        sorted(by_tid.get(trial_id(r), []), key=lambda rec: rec.t)))
        for r in results]


def write_report_csv(reports: Sequence[HypothesisReport],
                     fits: Sequence[ScalingFit], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(REPORT_COLUMNS)
        for rep in reports:
            for cell in rep.cells:
                writer.writerow([rep.hypothesis, cell.cell, cell.passes,
                                 cell.trials, f"{cell.frequency:.4f}",
                                 cell.required,
                                 "pass" if cell.ok else "fail", cell.detail])
            writer.writerow([rep.hypothesis, "<verdict>", "", "", "", "",
                             rep.verdict,
                             f"seed={rep.master_seed} config={rep.config_hash}"])
        for fit in fits:
            lo, hi = fit.exponent_ci
            writer.writerow([
                f"fit_scaling:{fit.model}", "exponent", "", "",
                f"{fit.exponent:.4f}", "", "",
                f"ci=[{lo:.4f},{hi:.4f}] constant={fit.constant:.6g} "
                f"metric={fit.metric}"])


def summarize(reports: Sequence[HypothesisReport],
              fits: Sequence[ScalingFit] = ()) -> str:
    lines = []
    for rep in reports:
        lines.append(f"[{rep.verdict}] {rep.hypothesis} "
                     f"(threshold {rep.threshold}, seed {rep.master_seed}, "
                     f"config {rep.config_hash})")
        for cell in rep.cells:
            mark = "ok " if cell.ok else "FAIL"
            lines.append(f"    {mark} {cell.cell}: {cell.passes}/{cell.trials}"
                         f" (need {cell.required}) {cell.detail}")
        if rep.notes:
            lines.append(f"    note: {rep.notes}")
    for fit in fits:
        lo, hi = fit.exponent_ci
        lines.append(f"[FIT ] {fit.model} on {fit.metric}: exponent "
                     f"{fit.exponent:.4f} (CI [{lo:.4f}, {hi:.4f}]), "
                     f"constant {fit.constant:.6g}")
        for n in fit.n_grid:
            q1, q3 = fit.per_n_iqr[n]
            lines.append(f"    n={n}: median {fit.per_n_median[n]:.0f} "
                         f"IQR [{q1:.0f}, {q3:.0f}]")
    return "\n".join(lines) + "\n"
