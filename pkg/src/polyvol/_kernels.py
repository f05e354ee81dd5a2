"""Compiled hit-and-run stepping loops.

These kernels mirror the reference implementations in ``sampling``;
the step arithmetic is kept expression-for-expression identical so the
two can be cross-checked. Residuals ``res = b - A x`` and the squared
norm of ``x`` are carried incrementally (a coordinate step then costs
one column scan instead of a matrix-vector product) and re-derived from
scratch every 1024 steps to stop floating-point drift.
"""

import numpy as np
from numba import njit

DEGENERATE_CHORD = 1e-14  # below this width the walker stays in place
_REFRESH = 1023  # bitmask: full state recompute cadence


@njit(cache=True, inline="always")
def _coord_bounds(A, res, xd, d, radius2, norm2):
    tlo = -np.inf
    thi = np.inf
    for i in range(A.shape[0]):
        a = A[i, d]
        if a > 0.0:
            t = res[i] / a
            if t < thi:
                thi = t
        elif a < 0.0:
            t = res[i] / a
            if t > tlo:
                tlo = t
    disc = radius2 - norm2 + xd * xd
    if disc < 0.0:
        disc = 0.0
    root = np.sqrt(disc)
    lo = -xd - root
    hi = -xd + root
    if lo > tlo:
        tlo = lo
    if hi < thi:
        thi = hi
    return tlo, thi


@njit(cache=True, inline="always")
def _check_chord(tlo, thi):
    if thi < tlo - 1e-12 * (abs(tlo) + abs(thi) + 1.0):
        raise RuntimeError("hit-and-run chord is empty: inconsistent walk state")


@njit(cache=True, inline="always")
def _coord_step(A, res, x, norm2, radius2, rng):
    n = x.shape[0]
    d = int(rng.random() * n)
    tlo, thi = _coord_bounds(A, res, x[d], d, radius2, norm2)
    _check_chord(tlo, thi)
    u = rng.random()
    width = thi - tlo
    if width >= DEGENERATE_CHORD:
        t = tlo + u * width
        xd_new = x[d] + t
        norm2 = norm2 - x[d] * x[d] + xd_new * xd_new
        x[d] = xd_new
        for i in range(A.shape[0]):
            res[i] -= t * A[i, d]
    return norm2


@njit(cache=True, inline="always")
def _sphere_step(A, res, x, u, Au, norm2, radius2, rng):
    n = x.shape[0]
    m = A.shape[0]
    while True:
        g2 = 0.0
        for j in range(n):
            g = rng.standard_normal()
            u[j] = g
            g2 += g * g
        nrm = np.sqrt(g2)
        if nrm > 1e-300:
            break
    inv = 1.0 / nrm
    for j in range(n):
        u[j] *= inv

    xu = 0.0
    for j in range(n):
        xu += x[j] * u[j]
    tlo = -np.inf
    thi = np.inf
    for i in range(m):
        au = 0.0
        for j in range(n):
            au += A[i, j] * u[j]
        Au[i] = au
        if au > 1e-14:
            t = res[i] / au
            if t < thi:
                thi = t
        elif au < -1e-14:
            t = res[i] / au
            if t > tlo:
                tlo = t
    disc = radius2 - norm2 + xu * xu
    if disc < 0.0:
        disc = 0.0
    root = np.sqrt(disc)
    lo = -xu - root
    hi = -xu + root
    if lo > tlo:
        tlo = lo
    if hi < thi:
        thi = hi
    _check_chord(tlo, thi)

    uu = rng.random()
    width = thi - tlo
    if width >= DEGENERATE_CHORD:
        t = tlo + uu * width
        norm2 = norm2 + 2.0 * t * xu + t * t
        for j in range(n):
            x[j] += t * u[j]
        for i in range(m):
            res[i] -= t * Au[i]
    return norm2


@njit(cache=True, inline="always")
def _refresh_state(A, b, x, res):
    norm2 = 0.0
    for j in range(x.shape[0]):
        norm2 += x[j] * x[j]
    for i in range(A.shape[0]):
        acc = b[i]
        for j in range(x.shape[0]):
            acc -= A[i, j] * x[j]
        res[i] = acc
    return norm2


@njit(cache=True, inline="always")
def _classify(norm2, half_n, l):
    # Ball index: ceil(n * log2 |x|) on the squared norm; the 1e-12 guard
    # keeps points that sit on a ball boundary (up to rounding) in the
    # closed inner ball.
    if norm2 <= 1.0:
        return 0
    idx = int(np.ceil(half_n * np.log2(norm2) - 1e-12))
    if idx < 0:
        return 0
    if idx > l:
        return l
    return idx


@njit(cache=True)
def phase_coordinate(A, b, x, res, radius, nsteps, t_hist, l, rng):
    """Run fresh coordinate-direction steps, tallying ball indices."""
    radius2 = radius * radius
    half_n = 0.5 * x.shape[0]
    norm2 = _refresh_state(A, b, x, res)
    for s in range(nsteps):
        norm2 = _coord_step(A, res, x, norm2, radius2, rng)
        t_hist[_classify(norm2, half_n, l)] += 1
        if (s & _REFRESH) == _REFRESH:
            norm2 = _refresh_state(A, b, x, res)


@njit(cache=True)
def phase_hypersphere(A, b, x, res, radius, nsteps, t_hist, l, rng):
    """Run fresh hypersphere-direction steps, tallying ball indices."""
    radius2 = radius * radius
    half_n = 0.5 * x.shape[0]
    u = np.empty(x.shape[0])
    Au = np.empty(A.shape[0])
    norm2 = _refresh_state(A, b, x, res)
    for s in range(nsteps):
        norm2 = _sphere_step(A, res, x, u, Au, norm2, radius2, rng)
        t_hist[_classify(norm2, half_n, l)] += 1
        if (s & _REFRESH) == _REFRESH:
            norm2 = _refresh_state(A, b, x, res)


@njit(cache=True)
def walk_coordinate(A, b, x, radius, nsteps, rng):
    """Coordinate walk recording every iterate; returns (nsteps, n) array."""
    radius2 = radius * radius
    res = np.empty(A.shape[0])
    norm2 = _refresh_state(A, b, x, res)
    out = np.empty((nsteps, x.shape[0]))
    for s in range(nsteps):
        norm2 = _coord_step(A, res, x, norm2, radius2, rng)
        out[s] = x
        if (s & _REFRESH) == _REFRESH:
            norm2 = _refresh_state(A, b, x, res)
    return out


@njit(cache=True)
def walk_hypersphere(A, b, x, radius, nsteps, rng):
    """Hypersphere walk recording every iterate; returns (nsteps, n) array."""
    radius2 = radius * radius
    u = np.empty(x.shape[0])
    Au = np.empty(A.shape[0])
    res = np.empty(A.shape[0])
    norm2 = _refresh_state(A, b, x, res)
    out = np.empty((nsteps, x.shape[0]))
    for s in range(nsteps):
        norm2 = _sphere_step(A, res, x, u, Au, norm2, radius2, rng)
        out[s] = x
        if (s & _REFRESH) == _REFRESH:
            norm2 = _refresh_state(A, b, x, res)
    return out


@njit(cache=True)
def bench_coordinate(A, b, x, radius, nsteps, rng):
    """Pure stepping loop for timing; no recording, no tallies."""
    radius2 = radius * radius
    res = np.empty(A.shape[0])
    norm2 = _refresh_state(A, b, x, res)
    for s in range(nsteps):
        norm2 = _coord_step(A, res, x, norm2, radius2, rng)
        if (s & _REFRESH) == _REFRESH:
            norm2 = _refresh_state(A, b, x, res)
    return norm2


@njit(cache=True)
def bench_hypersphere(A, b, x, radius, nsteps, rng):
    """Pure stepping loop for timing; no recording, no tallies."""
    radius2 = radius * radius
    u = np.empty(x.shape[0])
    Au = np.empty(A.shape[0])
    res = np.empty(A.shape[0])
    norm2 = _refresh_state(A, b, x, res)
    for s in range(nsteps):
        norm2 = _sphere_step(A, res, x, u, Au, norm2, radius2, rng)
        if (s & _REFRESH) == _REFRESH:
            norm2 = _refresh_state(A, b, x, res)
    return norm2
