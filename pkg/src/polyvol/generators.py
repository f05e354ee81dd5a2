"""Benchmark instance families with seedable randomness.

Every generator returns a validated (bounded, non-empty) polytope, and
identical (family, parameters, seed) always produce the same instance.
"""

import itertools

import numpy as np

from .errors import GenerationError, UnboundedPolytopeError
from .polytope import Polytope

_MAX_REDRAWS = 100


def _rng(seed):
    return np.random.Generator(np.random.PCG64(int(seed)))


def gen_cube(n):
    """Axis-aligned hypercube [-1, 1]^n; exact volume 2^n."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    A = np.vstack([np.eye(n), -np.eye(n)])
    b = np.ones(2 * n)
    return Polytope(A, b)


def gen_cross(n):
    """Cross-polytope (L1 unit ball): all 2^n sign constraints s.x <= 1.

    Exact volume 2^n / n!. Refused above dimension 20, where the
    constraint count 2^n becomes unmanageable.
    """
    if n < 1:
        raise ValueError("dimension must be at least 1")
    if n > 20:
        raise ValueError(f"cross polytope in dimension {n} needs 2^{n} rows")
    A = np.array(list(itertools.product((1.0, -1.0), repeat=n)))
    b = np.ones(A.shape[0])
    return Polytope(A, b)


def gen_rh(n, m, seed, directions=None):
    """Random hyperplanes tangent to the unit sphere: u_i . x <= 1.

    Normals are uniform on the sphere; a draw whose region is unbounded
    is discarded and redrawn. ``directions`` overrides the random
    normals (useful for deterministic tests).
    """
    if m < 2 * n:
        raise ValueError(f"need m >= 2n hyperplanes, got m={m}, n={n}")
    if directions is not None:
        A = np.asarray(directions, dtype=float)
        return Polytope(A, np.ones(A.shape[0]))
    rng = _rng(seed)
    for _ in range(_MAX_REDRAWS):
        g = rng.standard_normal((m, n))
        norms = np.linalg.norm(g, axis=1)
        if np.any(norms < 1e-12):
            continue
        A = g / norms[:, None]
        try:
            return Polytope(A, np.ones(m))
        except UnboundedPolytopeError:
            continue
    raise GenerationError(
        f"no bounded rh_{n}_{m} instance in {_MAX_REDRAWS} draws"
    )


def gen_ran(n, m, seed):
    """Integer-coefficient random polytope: A in [-1000, 1000]^(m x n),
    offsets 1000, so the origin is strictly interior."""
    if m < n + 1:
        raise ValueError(f"need m >= n+1 rows, got m={m}, n={n}")
    rng = _rng(seed)
    for _ in range(_MAX_REDRAWS):
        A = rng.integers(-1000, 1001, size=(m, n)).astype(float)
        zero = ~A.any(axis=1)
        while zero.any():
            A[zero] = rng.integers(-1000, 1001, size=(int(zero.sum()), n))
            zero = ~A.any(axis=1)
        try:
            return Polytope(A, np.full(m, 1000.0))
        except UnboundedPolytopeError:
            continue
    raise GenerationError(
        f"no bounded ran_{n}_{m} instance in {_MAX_REDRAWS} draws"
    )


def gen_cuboid_sheared(n, seed):
    """Cube stretched by 100 along the first axis, then sheared once.

    A thin tilted 'stick'; exact volume 100 * 2^n (the shear preserves
    volume)."""
    cube = gen_cube(n)
    b = cube.b.copy()
    b[0] = 100.0  # rows 0 and n are +/- the first axis
    b[n] = 100.0
    stretched = Polytope(cube.A, b)
    return apply_shear(stretched, 1, seed)


class ShearSpec:
    """One volume-preserving shear: block matrix [[I, M], [0, I]] with
    rows and columns put in a random order by a permutation.

    The assembled map has determinant 1, so applying it to a polytope
    leaves the volume unchanged.
    """

    def __init__(self, block_split, M, permutations):
        self.block_split = block_split
        self.M = np.asarray(M, dtype=float)
        self.permutations = [np.asarray(p, dtype=np.int64) for p in permutations]
        if self.M.shape != tuple(block_split):
            raise ValueError(
                f"M has shape {self.M.shape}, block split says {tuple(block_split)}"
            )

    def _base(self, negate):
        p, q = self.block_split
        n = p + q
        Q = np.eye(n)
        if q > 0:
            Q[:p, p:] = -self.M if negate else self.M
        return Q

    def matrix(self):
        S = self._base(negate=False)
        for perm in self.permutations:
            S = S[np.ix_(perm, perm)]
        return S

    def inverse(self):
        # [[I, M], [0, I]]^-1 = [[I, -M], [0, I]]; permuting rows and
        # columns consistently commutes with inversion, so this is exact.
        S = self._base(negate=True)
        for perm in self.permutations:
            S = S[np.ix_(perm, perm)]
        return S


def random_shear(n, rng):
    """Draw one ShearSpec: entries of M uniform on [-1, 1], one random
    permutation; odd n uses blocks (ceil(n/2), floor(n/2))."""
    p = (n + 1) // 2
    q = n - p
    M = rng.uniform(-1.0, 1.0, size=(p, q)) if q > 0 else np.zeros((p, 0))
    perm = rng.permutation(n)
    return ShearSpec((p, q), M, [perm])


def apply_shear(polytope, times, seed):
    """Apply ``times`` independent volume-preserving shear maps.

    Points map forward by S, so constraints transform as A <- A S^-1
    with b unchanged; the inverse is exact (no numerical inversion).
    """
    if times < 0:
        raise ValueError("times must be nonnegative")
    rng = _rng(seed)
    A = polytope.A.copy()
    for _ in range(times):
        spec = random_shear(polytope.n, rng)
        A = A @ spec.inverse()
    return Polytope(A, polytope.b.copy())
