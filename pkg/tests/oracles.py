"""Independent reference computations used to freeze expected values.

Everything here deliberately avoids the code paths under test: chords
are found by bisection on the membership predicate, LP optima by
brute-force vertex enumeration, and ball-capped volumes by rejection
sampling with its own box construction.
"""

import itertools

import numpy as np


def bisect_chord(polytope, radius, x, u, tol=1e-12):
    """Chord of {y in P : |y| <= radius} through x along u, by bisection.

    Requires x strictly inside. Returns (t_min, t_max).
    """
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)

    def inside(t):
        y = x + t * u
        return bool(np.all(polytope.A @ y <= polytope.b)) and (
            float(y @ y) <= radius * radius
        )

    assert inside(0.0), "bisection oracle needs an interior point"

    out = []
    for sgn in (1.0, -1.0):
        hi = 1e-9
        while inside(sgn * hi):
            hi *= 2.0
            if hi > 1e18:
                raise AssertionError("chord appears unbounded")
        lo = 0.0
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if inside(sgn * mid):
                lo = mid
            else:
                hi = mid
        out.append(sgn * 0.5 * (lo + hi))
    return out[1], out[0]


def enumerate_vertices(A, b, feas_tol=1e-9):
    """All vertices of {Ax <= b} by solving every n-subset of rows."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    vertices = []
    for rows in itertools.combinations(range(m), n):
        sub = A[list(rows)]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        v = np.linalg.solve(sub, b[list(rows)])
        if np.all(A @ v <= b + feas_tol):
            vertices.append(v)
    return np.array(vertices)


def lp_by_enumeration(A, b, c):
    """Max of c.x over the polytope via vertex enumeration."""
    verts = enumerate_vertices(A, b)
    assert verts.size, "no vertices found"
    values = verts @ np.asarray(c, dtype=float)
    best = int(np.argmax(values))
    return float(values[best]), verts[best]


def ball_section_volume(polytope, radius, samples, seed):
    """Rejection estimate of vol(P intersect B(0, radius)).

    Samples the interval box of P clipped to [-radius, radius]^n.
    Returns (volume, standard_error).
    """
    lb, ub, _ = polytope.coordinate_bounds()
    lb = np.maximum(lb, -radius)
    ub = np.minimum(ub, radius)
    box = float(np.prod(ub - lb))
    rng = np.random.Generator(np.random.PCG64(seed))
    hits = 0
    done = 0
    batch = 1_000_000
    while done < samples:
        k = min(batch, samples - done)
        pts = rng.uniform(lb, ub, size=(k, polytope.n))
        ok = np.all(pts @ polytope.A.T <= polytope.b, axis=1)
        ok &= np.einsum("ij,ij->i", pts, pts) <= radius * radius
        hits += int(ok.sum())
        done += k
    p = hits / samples
    return box * p, box * float(np.sqrt(p * (1.0 - p) / samples))
