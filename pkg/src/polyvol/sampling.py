"""Hit-and-run steps over the intersection of a polytope and a ball.

Both walk variants move to a uniform point on the feasible chord
through the current point:

* coordinate directions: the chord runs along a uniformly chosen
  signed axis, so only one coordinate changes per step;
* hypersphere directions: the chord direction is uniform on the unit
  sphere (normalized standard normal vector).

The functions here are the plain-numpy reference implementations; the
compiled loops in ``_kernels`` perform the same arithmetic and are used
wherever millions of steps are needed.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .polytope import Polytope


@dataclass
class WalkContext:
    """Walk state shared by consecutive steps of one chain.

    ``radius`` is the bounding-ball radius of the current phase; the
    chain is confined to {x in P : |x| <= radius}. Contexts are not
    thread-safe (the RNG advances); use one per chain.
    """

    polytope: Polytope
    radius: float
    rng: np.random.Generator

    def __post_init__(self):
        if not self.radius > 0.0:
            raise ValueError("walk radius must be positive")


class Chord(NamedTuple):
    """Feasible parameter interval [t_min, t_max] along a direction."""

    t_min: float
    t_max: float

    @property
    def width(self):
        return self.t_max - self.t_min


def chord_coordinate(ctx, x, d):
    """Exact chord {t : x + t e_d in P and |x + t e_d| <= radius}."""
    P = ctx.polytope
    x = np.asarray(x, dtype=float)
    if not 0 <= d < P.n:
        raise ValueError(f"coordinate index {d} out of range for dimension {P.n}")
    res = P.b - P.A @ x
    col = P.A[:, d]
    tlo, thi = -np.inf, np.inf
    pos = col > 0.0
    neg = col < 0.0
    if pos.any():
        thi = float(np.min(res[pos] / col[pos]))
    if neg.any():
        tlo = float(np.max(res[neg] / col[neg]))
    norm2 = float(x @ x)
    xd = float(x[d])
    disc = ctx.radius * ctx.radius - norm2 + xd * xd
    if disc < 0.0:
        disc = 0.0
    root = np.sqrt(disc)
    tlo = max(tlo, -xd - root)
    thi = min(thi, -xd + root)
    if thi < tlo - 1e-12 * (abs(tlo) + abs(thi) + 1.0):
        raise RuntimeError("hit-and-run chord is empty: inconsistent walk state")
    return Chord(tlo, thi)


def chord_direction(ctx, x, u):
    """Chord along an arbitrary unit direction ``u`` (used by the
    hypersphere walker). Rows with |a_i . u| < 1e-14 impose no bound."""
    P = ctx.polytope
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    res = P.b - P.A @ x
    Au = P.A @ u
    tlo, thi = -np.inf, np.inf
    pos = Au > 1e-14
    neg = Au < -1e-14
    if pos.any():
        thi = float(np.min(res[pos] / Au[pos]))
    if neg.any():
        tlo = float(np.max(res[neg] / Au[neg]))
    norm2 = float(x @ x)
    xu = float(x @ u)
    disc = ctx.radius * ctx.radius - norm2 + xu * xu
    if disc < 0.0:
        disc = 0.0
    root = np.sqrt(disc)
    tlo = max(tlo, -xu - root)
    thi = min(thi, -xu + root)
    if thi < tlo - 1e-12 * (abs(tlo) + abs(thi) + 1.0):
        raise RuntimeError("hit-and-run chord is empty: inconsistent walk state")
    return Chord(tlo, thi)


def step_coordinate(ctx, x):
    """One coordinate-direction step; returns the new point."""
    x = np.array(x, dtype=float)
    n = ctx.polytope.n
    d = int(ctx.rng.random() * n)
    chord = chord_coordinate(ctx, x, d)
    u = ctx.rng.random()
    if chord.width >= _kernels.DEGENERATE_CHORD:
        x[d] += chord.t_min + u * chord.width
    return x


def step_hypersphere(ctx, x):
    """One hypersphere-direction step; returns the new point."""
    x = np.array(x, dtype=float)
    n = ctx.polytope.n
    while True:
        g = ctx.rng.standard_normal(n)
        nrm = float(np.sqrt(g @ g))
        if nrm > 1e-300:
            break
    u = g * (1.0 / nrm)
    chord = chord_direction(ctx, x, u)
    t = ctx.rng.random()
    if chord.width >= _kernels.DEGENERATE_CHORD:
        x = x + (chord.t_min + t * chord.width) * u
    return x


def walk(ctx, x, steps, kind="coordinate"):
    """Run ``steps`` compiled steps from ``x``; returns every iterate
    as a (steps, n) array. The context RNG advances."""
    P = ctx.polytope
    x = np.array(x, dtype=float)
    if kind == "coordinate":
        return _kernels.walk_coordinate(P.A, P.b, x, ctx.radius, steps, ctx.rng)
    if kind == "hypersphere":
        return _kernels.walk_hypersphere(P.A, P.b, x, ctx.radius, steps, ctx.rng)
    raise ValueError(f"unknown walk kind {kind!r}")
