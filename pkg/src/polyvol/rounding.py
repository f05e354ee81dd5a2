"""Ellipsoid rounding: sandwich a polytope between balls.

A shallow-cut ellipsoid iteration shrinks an enclosing ellipsoid
E(T, o) around the polytope until the concentric ellipsoid E(beta^2 T, o)
fits inside it. The affine map defined by the Cholesky factor of the
final T then takes the polytope to a body P'' with

    B(0, 1)  contained in  P''  contained in  B(0, 1/beta)

and the volume scale factor gamma = det(L) * beta^n recovers the
original volume as vol(P) = gamma * vol(P'').
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotPositiveDefiniteError, RoundingError
from .polytope import Polytope

# Require this much relative slack in the termination test so that the
# inscribed-ball certificate survives the independent rounding of the
# Cholesky-based row norms.
_SHALLOW_SLACK = 1e-12

MAX_ITERATIONS_PER_DIM = 10_000


@dataclass
class Ellipsoid:
    """E = {x : (x - o)^T T^{-1} (x - o) <= 1} with T symmetric PD."""

    T: np.ndarray
    o: np.ndarray

    def contains(self, x, slack=0.0):
        d = np.asarray(x, dtype=float) - self.o
        return float(d @ np.linalg.solve(self.T, d)) <= 1.0 + slack


@dataclass
class RoundedPolytope:
    """Transformed polytope plus everything needed to undo the map."""

    polytope: Polytope  # P'' = {A'' x <= b''}
    gamma: float  # vol(original) / vol(polytope)
    L: np.ndarray  # upper-triangular Cholesky factor, T = L^T L
    center: np.ndarray  # final ellipsoid center in original coordinates
    beta: float
    iterations: int = 0
    inscribed_radius: float = 0.0  # certified min b''_i / |a''_i|
    trace: list = field(default=None, repr=False)

    def to_original(self, y):
        """Map a point of the rounded body back to original coordinates."""
        return self.L.T @ (self.beta * np.asarray(y, dtype=float)) + self.center

    def to_rounded(self, x):
        """Map an original-space point into the rounded body's coordinates."""
        z = np.asarray(x, dtype=float) - self.center
        return np.linalg.solve(self.L.T, z) / self.beta


def cholesky(T):
    """Upper-triangular L with T = L^T L and strictly positive diagonal."""
    T = np.asarray(T, dtype=float)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ValueError("matrix must be square")
    scale = np.max(np.abs(T))
    if scale > 0.0 and np.max(np.abs(T - T.T)) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")
    try:
        lower = np.linalg.cholesky(T)
    except np.linalg.LinAlgError:
        raise NotPositiveDefiniteError("matrix is not positive definite")
    return lower.T.copy()


def init_ellipsoid(polytope):
    """Enclosing ball from the 2n coordinate LPs.

    Center is the average of the 2n optimal vertices; the radius is the
    Euclidean length of the per-coordinate widths, which bounds the
    distance from any feasible point to that center. The LPs are solved
    in coordinates centered on the bounding-box midpoint so that the
    vertex selection (and hence the center) is translation-equivariant.
    """
    from .polytope import _coordinate_bounds

    lb, ub, _ = polytope.coordinate_bounds()
    r0 = float(np.linalg.norm(ub - lb))
    if r0 <= 0.0:
        raise RoundingError("polytope appears lower-dimensional (zero width)")
    mid = 0.5 * (lb + ub)
    _, _, vertices = _coordinate_bounds(polytope.A, polytope.b - polytope.A @ mid)
    o = vertices.mean(axis=0) + mid
    T = (r0 * r0) * np.eye(polytope.n)
    return Ellipsoid(T=T, o=o)


def round_polytope(polytope, beta=None, trace=False):
    """Run the shallow-cut iteration and build the sandwiched body.

    ``beta`` is the cut depth, in (0, 1/n); default 1/(2n), which makes
    the sandwiching ratio 1/beta equal to twice the dimension. With
    ``trace=True`` the returned object keeps every ellipsoid iterate
    (memory scales with iterations * n^2; meant for diagnostics).
    """
    n = polytope.n
    if beta is None:
        beta = 1.0 / (2 * n)
    if not 0.0 < beta < 1.0 / n:
        raise ValueError(f"beta must lie in (0, 1/{n}), got {beta}")

    if n == 1:
        return _round_interval(polytope, beta)

    A, b = polytope.A, polytope.b
    ell = init_ellipsoid(polytope)
    T, o = ell.T, ell.o
    iterates = [Ellipsoid(T.copy(), o.copy())] if trace else None

    step_coef = (1.0 - n * beta) / (n + 1.0)
    scale = (1.0 + (1.0 - n * beta) ** 2 / (2.0 * n * n)) * (
        n * n * (1.0 - beta * beta) / (n * n - 1.0)
    )
    rank_coef = 2.0 * (1.0 - n * beta) / ((n + 1.0) * (1.0 - beta))

    cap = MAX_ITERATIONS_PER_DIM * n
    iterations = 0
    while True:
        res = b - A @ o
        violated = np.nonzero(res < 0.0)[0]
        if violated.size:
            i = int(violated[0])
        else:
            # Shallow containment: beta * sqrt(a_i T a_i^T) <= b_i - a_i.o
            # for every i; cut with the first row that fails.
            depth = beta * np.sqrt(np.einsum("ij,jk,ik->i", A, T, A))
            failing = np.nonzero(depth > res * (1.0 - _SHALLOW_SLACK))[0]
            if failing.size == 0:
                break
            i = int(failing[0])

        if iterations >= cap:
            raise RoundingError(
                f"no sandwich after {iterations} iterations (cap {cap}); "
                "the instance may be numerically degenerate"
            )
        a = A[i]
        Ta = T @ a
        q = float(a @ Ta)
        if q <= 0.0:
            raise RoundingError(
                f"ellipsoid matrix lost positive definiteness at iteration "
                f"{iterations} (constraint {i})"
            )
        c = Ta / math.sqrt(q)
        o = o - step_coef * c
        T = scale * (T - rank_coef * np.outer(c, c))
        T = 0.5 * (T + T.T)  # stop asymmetry drift from the rank-one update
        iterations += 1
        if trace:
            iterates.append(Ellipsoid(T.copy(), o.copy()))

    return _build_rounded(polytope, T, o, beta, iterations, iterates)


def _build_rounded(polytope, T, o, beta, iterations, iterates):
    n = polytope.n
    try:
        L = cholesky(T)
    except NotPositiveDefiniteError:
        raise RoundingError(
            f"final ellipsoid matrix is not positive definite "
            f"after {iterations} iterations"
        )
    b2 = (polytope.b - polytope.A @ o) / beta
    A2 = polytope.A @ L.T
    gamma = math.exp(float(np.sum(np.log(np.diag(L)))) + n * math.log(beta))

    inner = Polytope(A2, b2, validate=False)
    inscribed = float(np.min(b2 / np.linalg.norm(A2, axis=1)))
    if inscribed < 1.0:
        raise RoundingError(
            f"inscribed-ball certificate failed: min b''_i/|a''_i| = {inscribed}"
        )
    return RoundedPolytope(
        polytope=inner,
        gamma=gamma,
        L=L,
        center=o,
        beta=beta,
        iterations=iterations,
        inscribed_radius=inscribed,
        trace=iterates,
    )


def _round_interval(polytope, beta):
    """Dimension 1: the sandwich is analytic, no iteration needed."""
    lb, ub, _ = polytope.coordinate_bounds()
    lo, hi = float(lb[0]), float(ub[0])
    if hi <= lo:
        raise RoundingError("interval has zero length")
    o = np.array([0.5 * (lo + hi)])
    half = 0.5 * (hi - lo)
    # Shrink by the same slack the n >= 2 termination test uses so the
    # inscribed-ball certificate cannot be lost to rounding.
    root_T = half / beta * (1.0 - _SHALLOW_SLACK)
    T = np.array([[root_T * root_T]])
    return _build_rounded(polytope, T, o, beta, 0, None)
