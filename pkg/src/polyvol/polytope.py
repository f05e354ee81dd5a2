"""H-representation polytopes: data model, membership, and file I/O.

A polytope is the set {x : A x <= b}. Row i of ``A`` is the outward
normal of constraint i, so constraint i reads ``a_i . x <= b_i``.
"""

import io

import numpy as np

from .errors import (
    EmptyPolytopeError,
    ParseError,
    UnboundedPolytopeError,
    ValidationError,
)
from .linprog import INFEASIBLE, UNBOUNDED, lp_maximize_dense

# Points are plain float vectors; no wrapper class.
Point = np.ndarray


class Polytope:
    """Bounded, non-empty convex polytope {x : A x <= b}.

    Validation checks the structural invariants (at least n+1 rows, no
    zero normals, finite entries) and then solves the 2n coordinate LPs
    max/min x_j to certify that the feasible region is non-empty and
    bounded. Instances are immutable after construction and safe to
    share across threads.
    """

    def __init__(self, A, b, validate=True):
        A = np.ascontiguousarray(A, dtype=float)
        b = np.ascontiguousarray(b, dtype=float)
        if A.ndim != 2:
            raise ValidationError("A must be a 2-D matrix")
        m, n = A.shape
        if b.shape != (m,):
            raise ValidationError(
                f"b has length {b.size}, expected one entry per row of A ({m})"
            )
        if n < 1:
            raise ValidationError("dimension must be at least 1")
        if not (np.isfinite(A).all() and np.isfinite(b).all()):
            raise ValidationError("A and b must be finite")
        if m < n + 1:
            raise ValidationError(
                f"{m} half-spaces cannot bound a full-dimensional polytope "
                f"in dimension {n} (need at least {n + 1})"
            )
        row_norms = np.linalg.norm(A, axis=1)
        zero_rows = np.nonzero(row_norms == 0.0)[0]
        if zero_rows.size:
            raise ValidationError(f"row {zero_rows[0] + 1} of A is the zero vector")

        self.A = A
        self.b = b
        self._bounds = None
        if validate:
            self._bounds = _coordinate_bounds(A, b)

        A.flags.writeable = False
        b.flags.writeable = False

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def n(self):
        return self.A.shape[1]

    def contains(self, x):
        """Exact membership test: a_i . x <= b_i for every i (no slack)."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"point has dimension {x.size}, expected {self.n}")
        return bool(np.all(self.A @ x <= self.b))

    def coordinate_bounds(self):
        """Per-coordinate bounds and optimal vertices from the 2n LPs.

        Returns (lb, ub, vertices) where vertices stacks the 2n optimal
        basic solutions in the order max x_0, min x_0, max x_1, ...
        """
        if self._bounds is None:
            self._bounds = _coordinate_bounds(self.A, self.b)
        return self._bounds

    def with_constraint(self, a, beta):
        """New polytope with one extra half-space ``a . x <= beta``."""
        a = np.asarray(a, dtype=float)
        A = np.vstack([self.A, a[None, :]])
        b = np.append(self.b, float(beta))
        return Polytope(A, b)

    def __repr__(self):
        return f"Polytope(m={self.m}, n={self.n})"


def _coordinate_bounds(A, b):
    """Solve the 2n coordinate LPs; reject empty or unbounded regions."""
    m, n = A.shape
    lb = np.empty(n)
    ub = np.empty(n)
    vertices = np.empty((2 * n, n))
    c = np.zeros(n)
    for j in range(n):
        for sgn, slot in ((1.0, 2 * j), (-1.0, 2 * j + 1)):
            c[j] = sgn
            out = lp_maximize_dense(A, b, c)
            c[j] = 0.0
            if out.status == INFEASIBLE:
                raise EmptyPolytopeError("feasible region is empty")
            if out.status == UNBOUNDED:
                direction = "+" if sgn > 0 else "-"
                raise UnboundedPolytopeError(
                    f"feasible region is unbounded along {direction}x_{j}"
                )
            if sgn > 0:
                ub[j] = out.value
            else:
                lb[j] = -out.value
            vertices[slot] = out.vertex
    return lb, ub, vertices


def parse_polytope(text, validate=True):
    """Parse the instance file format.

    Format: optional ``#`` comment lines, a header ``m n``, then m rows
    of n+1 whitespace-separated decimals ``a_i1 ... a_in b_i``.
    """
    if isinstance(text, (io.TextIOBase, io.BufferedIOBase)):
        text = text.read()
    if isinstance(text, bytes):
        text = text.decode()

    rows = []
    header = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) != 2:
                raise ParseError(
                    f"header must be 'm n', got {len(tokens)} token(s)", lineno
                )
            try:
                header = (int(tokens[0]), int(tokens[1]))
            except ValueError:
                raise ParseError(f"non-integer header token in {tokens!r}", lineno)
            if header[0] < 1 or header[1] < 1:
                raise ParseError("header counts must be positive", lineno)
            continue
        if len(tokens) != header[1] + 1:
            raise ParseError(
                f"expected {header[1] + 1} values per row, got {len(tokens)}", lineno
            )
        try:
            values = [float(t) for t in tokens]
        except ValueError:
            bad = next(t for t in tokens if not _is_number(t))
            raise ParseError(f"non-numeric token {bad!r}", lineno)
        rows.append((lineno, values))

    if header is None:
        raise ParseError("missing header line", 1)
    m, n = header
    if len(rows) != m:
        raise ParseError(f"header promised {m} rows, file has {len(rows)}", 1)

    A = np.array([r[1][:n] for r in rows])
    b = np.array([r[1][n] for r in rows])
    for (lineno, _), row in zip(rows, A):
        if not np.any(row):
            raise ParseError("constraint normal is the zero vector", lineno)
    return Polytope(A, b, validate=validate)


def emit_polytope(polytope, comment=None):
    """Render a polytope in the instance file format (17 significant digits)."""
    out = []
    if comment:
        for line in comment.splitlines():
            out.append(f"# {line}")
    out.append(f"{polytope.m} {polytope.n}")
    for a_row, b_i in zip(polytope.A, polytope.b):
        parts = [f"{v:.17g}" for v in a_row]
        parts.append(f"{b_i:.17g}")
        out.append(" ".join(parts))
    return "\n".join(out) + "\n"


def load_polytope(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_polytope(fh.read())


def save_polytope(polytope, path, comment=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit_polytope(polytope, comment=comment))


def _is_number(token):
    try:
        float(token)
        return True
    except ValueError:
        return False
