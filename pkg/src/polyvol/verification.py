"""Independent checks: rejection-sampling oracle, repeated-trial
statistics, hyperplane split checking, and the walk benchmark."""

import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .errors import PolyvolError, ValidationError
from .estimator import (
    EstimationConfig,
    config_with_seed,
    derive_seed,
    estimate_volume,
)
from .polytope import Polytope
from .rounding import round_polytope

ORACLE_DIM_CAP = 8  # rejection sampling collapses beyond this
_CI_SIGMA = 1.96  # 95% normal quantile, fixed for reported intervals


@dataclass
class OracleEstimate:
    """Brute-force volume estimate from uniform bounding-box samples."""

    volume: float
    standard_error: float
    samples: int
    box_volume: float

    def to_dict(self):
        return {
            "volume": self.volume,
            "standard_error": self.standard_error,
            "samples": int(self.samples),
            "box_volume": self.box_volume,
        }


def oracle_volume(polytope, samples, seed, batch=2_000_000):
    """Rejection sampling in the coordinate bounding box.

    volume = box_volume * hit fraction, with the binomial standard
    error box_volume * sqrt(p (1 - p) / samples). Only usable at low
    dimension (n <= 8): the hit rate decays exponentially.
    """
    if polytope.n > ORACLE_DIM_CAP:
        raise ValueError(
            f"rejection oracle limited to n <= {ORACLE_DIM_CAP}, got {polytope.n}"
        )
    if samples < 1:
        raise ValueError("need at least one sample")
    lb, ub, _ = polytope.coordinate_bounds()
    box_volume = float(np.prod(ub - lb))
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    hits = 0
    done = 0
    while done < samples:
        k = min(batch, samples - done)
        pts = rng.uniform(lb, ub, size=(k, polytope.n))
        inside = np.all(pts @ polytope.A.T <= polytope.b, axis=1)
        hits += int(inside.sum())
        done += k
    p = hits / samples
    return OracleEstimate(
        volume=box_volume * p,
        standard_error=box_volume * float(np.sqrt(p * (1.0 - p) / samples)),
        samples=samples,
        box_volume=box_volume,
    )


@dataclass
class TrialStatistics:
    """Aggregate over repeated estimation runs.

    The interval is mean +/- 1.96 * std_dev (the spread of single runs,
    not of the mean); coverage_count is how many individual outcomes
    fell inside it.
    """

    trials: int
    mean: float
    std_dev: float
    ci_low: float
    ci_high: float
    coverage_count: int
    epsilon_observed: float
    values: np.ndarray = field(repr=False)
    reports: list = field(default=None, repr=False)

    def to_dict(self):
        return {
            "trials": int(self.trials),
            "mean": self.mean,
            "std_dev": self.std_dev,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "coverage_count": int(self.coverage_count),
            "epsilon_observed": self.epsilon_observed,
        }


def run_trials(polytope, config=None, trials=100, estimator=estimate_volume, jobs=1):
    """Estimate ``trials`` times with per-trial derived seeds.

    The polytope is rounded once up front (rounding is deterministic)
    and shared by every trial. ``estimator`` is injectable for testing.
    With ``jobs > 1`` trials run in a process pool; the statistics are
    computed from the collected vector, so the result is identical to a
    sequential run.
    """
    if trials < 2:
        raise ValueError("need at least 2 trials")
    if config is None:
        config = EstimationConfig()

    target = polytope
    if isinstance(polytope, Polytope) and estimator is estimate_volume:
        r = config.r if config.r is not None else 2.0 * polytope.n
        target = round_polytope(polytope, beta=1.0 / r)

    configs = [
        config_with_seed(config, derive_seed(config.seed, i)) for i in range(trials)
    ]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(estimator, target, cfg) for cfg in configs]
            reports = []
            for i, fut in enumerate(futures):
                try:
                    reports.append(fut.result())
                except PolyvolError as exc:
                    raise PolyvolError(f"trial {i} failed: {exc}") from exc
    else:
        reports = []
        for i, cfg in enumerate(configs):
            try:
                reports.append(estimator(target, cfg))
            except PolyvolError as exc:
                raise PolyvolError(f"trial {i} failed: {exc}") from exc
    values = np.array([rep.volume for rep in reports])
    return trial_statistics(values, reports)


def trial_statistics(values, reports=None):
    """Mean, sample deviation, 95% interval, and coverage for a result vector."""
    values = np.asarray(values, dtype=float)
    trials = values.size
    mean = float(values.mean())
    std = float(values.std(ddof=1))
    ci_low = mean - _CI_SIGMA * std
    ci_high = mean + _CI_SIGMA * std
    coverage = int(np.count_nonzero((values >= ci_low) & (values <= ci_high)))
    return TrialStatistics(
        trials=trials,
        mean=mean,
        std_dev=std,
        ci_low=ci_low,
        ci_high=ci_high,
        coverage_count=coverage,
        epsilon_observed=(ci_high - ci_low) / mean if mean else float("inf"),
        values=values,
        reports=reports,
    )


@dataclass
class SplitCheck:
    """Outcome of one random-hyperplane additivity check."""

    whole: float
    part1: float
    part2: float
    sum: float
    error: float
    in_interval: bool
    normal: np.ndarray = field(repr=False, default=None)
    offset: float = 0.0

    def to_dict(self):
        return {
            "whole": self.whole,
            "part1": self.part1,
            "part2": self.part2,
            "sum": self.sum,
            "error": self.error,
            "in_interval": bool(self.in_interval),
        }


def split_check(
    polytope,
    config=None,
    seed=0,
    part_trials=5,
    whole_stats=None,
    whole_trials=50,
    hyperplane=None,
):
    """Cut the polytope by a random hyperplane and test volume additivity.

    The cut passes through the rounding center (a deep interior point),
    with a direction drawn uniformly on the sphere. Both parts are
    estimated ``part_trials`` times and their mean volumes summed; the
    whole volume comes from ``whole_stats`` (or a fresh ``whole_trials``
    trials run). ``hyperplane=(c, d)`` overrides the random cut.
    """
    if config is None:
        config = EstimationConfig()
    rng = np.random.Generator(np.random.PCG64(int(seed)))

    if whole_stats is None:
        whole_stats = run_trials(
            polytope, config_with_seed(config, derive_seed(seed, 1)), whole_trials
        )

    if hyperplane is not None:
        c = np.asarray(hyperplane[0], dtype=float)
        d = float(hyperplane[1])
        parts = _try_split(polytope, c, d)
        if parts is None:
            raise ValidationError("supplied hyperplane does not split the polytope")
    else:
        center = round_polytope(polytope).center
        parts = None
        for _ in range(100):
            g = rng.standard_normal(polytope.n)
            c = g / np.linalg.norm(g)
            d = float(c @ center)
            parts = _try_split(polytope, c, d)
            if parts is not None:
                break
        if parts is None:
            raise PolyvolError("no valid splitting hyperplane in 100 attempts")

    part_volumes = []
    for j, part in enumerate(parts):
        vols = [
            estimate_volume(
                part, config_with_seed(config, derive_seed(seed, 100 + 2 * i + j))
            ).volume
            for i in range(part_trials)
        ]
        part_volumes.append(float(np.mean(vols)))

    total = part_volumes[0] + part_volumes[1]
    return SplitCheck(
        whole=whole_stats.mean,
        part1=part_volumes[0],
        part2=part_volumes[1],
        sum=total,
        error=abs(total - whole_stats.mean) / whole_stats.mean,
        in_interval=bool(whole_stats.ci_low <= total <= whole_stats.ci_high),
        normal=c,
        offset=d,
    )


def _try_split(polytope, c, d):
    """Both halves of the cut, or None if either fails validation."""
    try:
        p1 = polytope.with_constraint(c, d)
        p2 = polytope.with_constraint(-c, -d)
    except ValidationError:
        return None
    return (p1, p2)


@dataclass
class WalkBenchmark:
    """Wall-clock comparison of the two walkers over identical steps."""

    steps: int
    coordinate_time: float
    hypersphere_time: float
    ratio: float | None  # hypersphere / coordinate; None when undefined

    def to_dict(self):
        out = {
            "steps": int(self.steps),
            "coordinate_time": self.coordinate_time,
            "hypersphere_time": self.hypersphere_time,
        }
        if self.ratio is not None:
            out["ratio"] = self.ratio
        return out


def walk_benchmark(polytope, steps, seed=0):
    """Time both walkers for ``steps`` steps in the outermost phase body.

    The polytope is rounded first and both chains run in K_l (radius
    2^(l/n)) from the origin; RNG cost is part of each method's real
    cost and is included.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    rounded = round_polytope(polytope)
    P = rounded.polytope
    n = P.n
    l = int(np.ceil(n * np.log2(1.0 / rounded.beta)))
    radius = 2.0 ** (l / n)

    timings = {}
    for name, kernel in (
        ("coordinate", _kernels.bench_coordinate),
        ("hypersphere", _kernels.bench_hypersphere),
    ):
        rng = np.random.Generator(np.random.PCG64(int(seed)))
        x = np.zeros(n)
        kernel(P.A, P.b, x, radius, 16, rng)  # warm the compiled kernel
        x = np.zeros(n)
        rng = np.random.Generator(np.random.PCG64(int(seed)))
        t0 = time.perf_counter()
        if steps > 0:
            kernel(P.A, P.b, x, radius, steps, rng)
        timings[name] = time.perf_counter() - t0

    coord = timings["coordinate"]
    hyper = timings["hypersphere"]
    ratio = hyper / coord if steps > 0 and coord > 0.0 else None
    return WalkBenchmark(
        steps=steps,
        coordinate_time=coord,
        hypersphere_time=hyper,
        ratio=ratio,
    )


def accuracy_comparison(
    instances, config=None, trials=100, walks=("coordinate", "hypersphere")
):
    """Side-by-side trial statistics per walker.

    ``instances`` is an iterable of (name, polytope, exact_volume);
    returns one row per instance with mean, relative error, and sample
    deviation for each entry of ``walks`` (in order). Both columns use
    the same derived seed sequence, so running the same walker on both
    sides yields identical columns.
    """
    if config is None:
        config = EstimationConfig()
    rows = []
    for name, polytope, exact in instances:
        row = {"instance": name, "exact": exact, "columns": []}
        for walk in walks:
            stats = run_trials(polytope, replace(config, walk=walk), trials)
            row["columns"].append(
                {
                    "walk": walk,
                    "mean": stats.mean,
                    "relative_error": abs(stats.mean - exact) / exact,
                    "std_dev": stats.std_dev,
                }
            )
        rows.append(row)
    return rows


def comparison_table(rows, delimiter="\t"):
    """Render accuracy_comparison rows as delimiter-separated text."""
    if not rows:
        return "\n"
    header = ["instance", "exact"]
    for col in rows[0]["columns"]:
        header += [f"{col['walk']}_mean", f"{col['walk']}_err", f"{col['walk']}_std"]
    lines = [delimiter.join(header)]
    for row in rows:
        cells = [str(row["instance"]), f"{row['exact']:.6g}"]
        for col in row["columns"]:
            cells += [
                f"{col['mean']:.6g}",
                f"{col['relative_error']:.4%}",
                f"{col['std_dev']:.6g}",
            ]
        lines.append(delimiter.join(cells))
    return "\n".join(lines) + "\n"
