"""Multiphase Monte-Carlo volume estimation with sample-point reuse.

The rounded polytope P (inscribed unit ball, circumscribed ball of
radius r) is subdivided by concentric balls B_i of radius 2^(i/n) into
nested bodies K_i = B_i . P. The volume telescopes into the unit-ball
volume times the product of consecutive ratios alpha_i, each of which
lies in [1, 2]. Ratios are estimated from the outermost body inward, so
every walk point that lands in an inner ball is re-counted as a sample
for all later phases; only the shortfall of each phase is generated
fresh.
"""

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .errors import EstimationError
from .rounding import RoundedPolytope, round_polytope

DEFAULT_SEED = 42  # fixed so unseeded runs are reproducible

_MASK64 = (1 << 64) - 1


def derive_seed(seed, index):
    """Per-trial seed stream: (seed + index) pushed through splitmix64."""
    z = (int(seed) + int(index)) & _MASK64
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


@dataclass(frozen=True)
class EstimationConfig:
    """Tunables for one estimation run.

    ``step_size`` defaults to 1600 per phase (1600 * l total target per
    phase) and ``r`` to twice the dimension; both defaults are resolved
    at run time once l and n are known.
    """

    step_size: int | None = None  # points per phase; None -> 1600 * l
    r: float | None = None  # sandwiching ratio; None -> 2 * n
    epsilon: float = 0.2  # target CI width ratio (for required_step_size)
    sigma: float = 1.96  # normal quantile for 95% confidence
    seed: int = DEFAULT_SEED
    walk: str = "coordinate"  # or "hypersphere"
    reuse: bool = True

    def __post_init__(self):
        if self.step_size is not None and self.step_size < 1:
            raise ValueError("step_size must be at least 1")
        if self.r is not None and not self.r > 1.0:
            raise ValueError("sandwiching ratio r must exceed 1")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.sigma <= 0.0:
            raise ValueError("sigma must be positive")
        if self.walk not in ("coordinate", "hypersphere"):
            raise ValueError(f"unknown walk variant {self.walk!r}")


@dataclass
class PhaseLedger:
    """Per-phase accounting of the reuse loop.

    ``t[i]`` counts recorded points with ball index i (in K_i but not
    K_{i-1}); ``count`` is the final reusable total; ``alpha`` the
    estimated ratios; ``fresh_points`` the number of freshly generated
    walk steps over all phases.
    """

    t: np.ndarray
    count: int
    alpha: np.ndarray
    fresh_points: int


@dataclass
class EstimateReport:
    """Result of one estimation run; volume = gamma * unit_ball * prod(alpha)."""

    volume: float
    gamma: float
    n: int
    l: int
    alphas: np.ndarray
    fresh_points: int
    reused_fraction: float
    step_size: int
    elapsed: float
    seed: int
    walk: str
    ledger: PhaseLedger = field(default=None, repr=False)

    def to_dict(self):
        return {
            "volume": self.volume,
            "gamma": self.gamma,
            "n": self.n,
            "l": self.l,
            "alphas": [float(a) for a in self.alphas],
            "fresh_points": int(self.fresh_points),
            "reused_fraction": self.reused_fraction,
            "step_size": int(self.step_size),
            "seed": int(self.seed),
            "walk": self.walk,
            "elapsed_ms": self.elapsed * 1000.0,
        }


def unit_ball_volume(n):
    """Volume of the n-dimensional Euclidean unit ball."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def ball_index(x, n, l):
    """Index i with x in K_i \\ K_{i-1}: ceil(n log2 |x|) clamped to [0, l].

    Evaluated on the squared norm (saves the square root); a 1e-12 guard
    keeps points on a ball boundary, up to float rounding, in the closed
    inner ball.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise ValueError(f"point has dimension {x.size}, expected {n}")
    norm2 = float(x @ x)
    if norm2 <= 1.0:
        return 0
    idx = int(np.ceil(0.5 * n * np.log2(norm2) - 1e-12))
    return min(max(idx, 0), l)


def required_step_size(epsilon, sigma, l):
    """Points per phase needed for a CI of relative width epsilon.

    Treating the per-phase hit counts as having at most twice the
    binomial standard deviation, the product of counts stays within the
    target interval when the inflation factor beta satisfies

        e^2 s^2 b^2 - (2 e^2 (1 + s^2) + 4) b + e^2 (1/s + s)^2 + 4 >= 0,

    which holds below the smaller root b1; the bound follows from
    (1 + 4/step_size)^l <= b1.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    if l < 1:
        raise ValueError("l must be at least 1")
    e2 = epsilon * epsilon
    s2 = sigma * sigma
    qa = e2 * s2
    qb = -(2.0 * e2 * (1.0 + s2) + 4.0)
    qc = e2 * (1.0 / sigma + sigma) ** 2 + 4.0
    disc = qb * qb - 4.0 * qa * qc
    if disc <= 0.0:
        raise ValueError("no real root: epsilon/sigma demand is infeasible")
    beta1 = (-qb - math.sqrt(disc)) / (2.0 * qa)
    if beta1 <= 1.0:
        raise ValueError("root does not exceed 1: parameters infeasible")
    return math.ceil(4.0 / (beta1 ** (1.0 / l) - 1.0))


def expected_reuse_savings(alphas, step_size):
    """Expected number of reused (not regenerated) points for given ratios."""
    alphas = np.asarray(alphas, dtype=float)
    if np.any(alphas < 1.0) or np.any(alphas > 2.0):
        raise ValueError("volume ratios must lie in [1, 2]")
    if step_size < 1:
        raise ValueError("step_size must be at least 1")
    return int(round(float(np.sum(step_size / alphas[1:]))))


def estimate_volume(polytope, config=None):
    """Estimate the volume of a validated H-polytope.

    Accepts either a raw ``Polytope`` (rounded internally with
    beta = 1/r) or an already-rounded ``RoundedPolytope`` (the rounding
    step is deterministic, so callers running many trials can round
    once and share the result).
    """
    if config is None:
        config = EstimationConfig()
    start = time.perf_counter()

    if isinstance(polytope, RoundedPolytope):
        rounded = polytope
        r = 1.0 / rounded.beta
    else:
        r = config.r if config.r is not None else 2.0 * polytope.n
        rounded = round_polytope(polytope, beta=1.0 / r)

    P = rounded.polytope
    n = P.n
    l = math.ceil(n * math.log2(r))
    step_size = config.step_size if config.step_size is not None else 1600 * l

    kernel = (
        _kernels.phase_coordinate
        if config.walk == "coordinate"
        else _kernels.phase_hypersphere
    )
    rng = np.random.Generator(np.random.PCG64(int(config.seed)))

    x = np.zeros(n)
    res = np.empty(P.m)
    t_hist = np.zeros(l + 1, dtype=np.int64)
    alphas = np.zeros(l)
    shrink = 2.0 ** (-1.0 / n)
    count = 0
    fresh_total = 0

    for k in range(l - 1, -1, -1):
        radius = 2.0 ** ((k + 1) / n)
        fresh = step_size - count
        if fresh > 0:
            kernel(P.A, P.b, x, res, radius, fresh, t_hist, l, rng)
            fresh_total += fresh
        count = int(t_hist[: k + 1].sum())
        if count == 0:
            raise EstimationError(
                f"phase {k}: none of the {step_size} samples reached ball {k}; "
                "increase step_size"
            )
        alphas[k] = step_size / count
        if not config.reuse:
            t_hist[:] = 0
            count = 0
        x *= shrink
        if k > 0 and not P.contains(x):
            raise EstimationError(f"phase {k}: rescaled start left the polytope")

    volume = rounded.gamma * unit_ball_volume(n) * float(np.prod(alphas))
    total = step_size * l
    report = EstimateReport(
        volume=volume,
        gamma=rounded.gamma,
        n=n,
        l=l,
        alphas=alphas,
        fresh_points=fresh_total,
        reused_fraction=(total - fresh_total) / total,
        step_size=step_size,
        elapsed=time.perf_counter() - start,
        seed=int(config.seed),
        walk=config.walk,
        ledger=PhaseLedger(
            t=t_hist, count=count, alpha=alphas, fresh_points=fresh_total
        ),
    )
    return report


def config_with_seed(config, seed):
    """Copy of ``config`` with a different seed (frozen dataclass helper)."""
    return replace(config, seed=int(seed))
