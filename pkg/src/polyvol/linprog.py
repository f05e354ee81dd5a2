"""Dense two-phase simplex solver for the small LPs used across the package.

Solves  maximize c.x  subject to  A x <= b  with x unrestricted in sign.
Bland's smallest-index rule is used for both the entering and leaving
choice, so the iteration cannot cycle on degenerate vertices.
"""

from dataclasses import dataclass

import numpy as np

from .errors import PolyvolError

# Residual tolerance: a point is accepted as feasible when every
# constraint is violated by at most this much (after row scaling).
FEASIBILITY_TOL = 1e-9

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LpOutcome:
    """Result of one LP solve.

    ``value`` and ``vertex`` are only meaningful when ``status`` is
    ``"optimal"``; the vertex is an optimal basic solution.
    """

    status: str
    value: float | None = None
    vertex: np.ndarray | None = None


def lp_maximize(polytope, c):
    """Maximize ``c.x`` over a validated polytope ``{Ax <= b}``."""
    c = np.asarray(c, dtype=float)
    if c.shape != (polytope.n,):
        raise ValueError(f"objective has length {c.size}, expected {polytope.n}")
    return lp_maximize_dense(polytope.A, polytope.b, c)


def lp_maximize_dense(A, b, c):
    """Simplex on raw (A, b, c) arrays; x is free (split into x+ - x-)."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape

    # Row equilibration keeps pivots well scaled for instances with
    # large coefficients; it does not change the feasible set.
    scale = np.max(np.abs(A), axis=1)
    scale[scale == 0.0] = 1.0
    A = A / scale[:, None]
    b = b / scale

    # Rows with negative offsets are negated so every right-hand side is
    # nonnegative; those rows need an artificial variable in phase 1.
    sign = np.where(b < 0.0, -1.0, 1.0)
    A = A * sign[:, None]
    rhs = b * sign
    art_rows = np.nonzero(sign < 0.0)[0]
    n_art = art_rows.size

    n_struct = 2 * n + m  # u, v, slacks
    ncols = n_struct + n_art

    # Tableau: constraint coefficients with the right-hand side glued on
    # as the final column so a pivot updates everything at once.
    tab = np.zeros((m, ncols + 1))
    tab[:, :n] = A
    tab[:, n : 2 * n] = -A
    tab[np.arange(m), 2 * n + np.arange(m)] = sign
    for j, i in enumerate(art_rows):
        tab[i, n_struct + j] = 1.0
    tab[:, -1] = rhs

    basis = np.array(
        [2 * n + i if sign[i] > 0.0 else 0 for i in range(m)], dtype=np.int64
    )
    for j, i in enumerate(art_rows):
        basis[i] = n_struct + j

    # Phase 1: drive the artificial variables to zero.
    if n_art:
        cost1 = np.zeros(ncols + 1)
        cost1[n_struct:ncols] = 1.0
        zrow = _price_out(tab, basis, cost1)
        status = _iterate(tab, basis, zrow, ncols)
        if status != OPTIMAL:
            raise PolyvolError("phase-1 simplex reported unbounded")
        if -zrow[-1] > FEASIBILITY_TOL * max(1.0, np.max(np.abs(rhs), initial=0.0)):
            return LpOutcome(INFEASIBLE)
        tab, basis = _drop_artificials(tab, basis, n_struct)
        m = tab.shape[0]

    # Phase 2: the real objective, maximize c.x == minimize -c.(u - v).
    cost2 = np.zeros(n_struct + 1)
    cost2[:n] = -c
    cost2[n : 2 * n] = c
    zrow = _price_out(tab, basis, cost2)
    status = _iterate(tab, basis, zrow, n_struct)
    if status == UNBOUNDED:
        return LpOutcome(UNBOUNDED)

    x = np.zeros(n)
    for i, col in enumerate(basis):
        if col < n:
            x[col] += tab[i, -1]
        elif col < 2 * n:
            x[col - n] -= tab[i, -1]
    return LpOutcome(OPTIMAL, value=float(c @ x), vertex=x)


def _price_out(tab, basis, cost):
    """Reduced-cost row for the given cost vector and current basis."""
    zrow = cost.copy()
    for i, col in enumerate(basis):
        cb = cost[col]
        if cb != 0.0:
            zrow -= cb * tab[i]
    return zrow


def _iterate(tab, basis, zrow, width):
    """Run simplex pivots until optimal or unbounded (Bland's rule)."""
    m = tab.shape[0]
    max_pivots = 50 * (m + width) + 10_000
    for _ in range(max_pivots):
        entering = -1
        for j in range(width):
            if zrow[j] < -FEASIBILITY_TOL:
                entering = j
                break
        if entering < 0:
            return OPTIMAL

        leaving = -1
        best_ratio = np.inf
        for i in range(m):
            a = tab[i, entering]
            if a > FEASIBILITY_TOL:
                ratio = tab[i, -1] / a
                if ratio < best_ratio - 1e-12 or (
                    ratio < best_ratio + 1e-12
                    and (leaving < 0 or basis[i] < basis[leaving])
                ):
                    best_ratio = ratio
                    leaving = i
        if leaving < 0:
            return UNBOUNDED

        _pivot(tab, basis, zrow, leaving, entering)
    raise PolyvolError("simplex failed to converge (pivot budget exhausted)")


def _pivot(tab, basis, zrow, row, col):
    piv = tab[row] / tab[row, col]
    factors = tab[:, col].copy()
    tab -= np.outer(factors, piv)
    tab[row] = piv
    zrow -= zrow[col] * piv
    basis[row] = col
    # Degenerate pivots can leave tiny negative residues on the RHS.
    rhs = tab[:, -1]
    rhs[(rhs < 0.0) & (rhs > -FEASIBILITY_TOL)] = 0.0


def _drop_artificials(tab, basis, n_struct):
    """Remove artificial columns, pivoting basic ones out first."""
    m = tab.shape[0]
    keep_rows = np.ones(m, dtype=bool)
    for i in range(m):
        if basis[i] >= n_struct:
            pivot_col = -1
            for j in range(n_struct):
                if abs(tab[i, j]) > FEASIBILITY_TOL:
                    pivot_col = j
                    break
            if pivot_col >= 0:
                zdummy = np.zeros(tab.shape[1])
                _pivot(tab, basis, zdummy, i, pivot_col)
            else:
                keep_rows[i] = False  # redundant constraint row
    tab = np.hstack([tab[keep_rows, :n_struct], tab[keep_rows, -1:]])
    basis = basis[keep_rows]
    return tab, basis
