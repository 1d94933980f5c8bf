"""Dense linear algebra over rationals, prime fields and complex floats.

Pivoting is deterministic: exact kinds take the first nonzero entry at or below
the current row; the float path delegates to numpy's SVD.  Prime-field
elimination runs vectorised on ``int64`` arrays (moduli below 2**31 keep every
product inside 63 bits).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Sequence

import numpy as np

from .scalars import COMPLEX_FLOAT, RATIONAL, Kind, KindMismatchError, Mod, common_kind

DEFAULT_FLOAT_TOL = 1e-9


@dataclass(frozen=True)
class DenseMatrix:
    """Row-major matrix of scalars of a single kind."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> DenseMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int, one=Fraction(1)) -> DenseMatrix:
        zero = one - one
        return cls(n, n, tuple(one if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int, zero=Fraction(0)) -> DenseMatrix:
        return cls(rows, cols, (zero,) * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def kind(self) -> Kind:
        return common_kind(self.entries)

    def apply(self, v: Sequence) -> list:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return [sum((a * b for a, b in zip(self.row(i), v)), 0 * v[0] if v else 0)
                for i in range(self.rows)]


def _as_matrix(m) -> DenseMatrix:
    if isinstance(m, DenseMatrix):
        return m
    if isinstance(m, np.ndarray):
        return DenseMatrix.from_rows(m.tolist(), m.shape[1] if m.ndim == 2 else None)
    return DenseMatrix.from_rows(m)


# --------------------------------------------------------------------------
# prime fields, vectorised

def rref_mod_p(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of an integer array modulo ``p``.

    Returns the nonzero rows of the RREF and the list of pivot columns.
    """
    if p >= 2**31:
        raise ValueError("vectorised elimination needs p < 2**31")
    m = np.array(a, dtype=np.int64) % p
    if m.ndim != 2:
        raise ValueError("expected a 2-d array")
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r, c:] = m[r, c:] * inv % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            m[hit, c:] = (m[hit, c:] - col[hit, None] * m[r, c:] % p) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def kernel_from_rref(rref: np.ndarray, pivots: list[int], cols: int, p: int) -> np.ndarray:
    """Kernel basis (as rows) determined by an RREF modulo ``p``.

    Row ``k`` is the basis vector for the ``k``-th free column: 1 there, 0 at
    the other free columns.
    """
    pivset = set(pivots)
    free = [c for c in range(cols) if c not in pivset]
    out = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        if pivots:
            out[k, pivots] = (-rref[:, f]) % p
    return out


def kernel_mod_p(a, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    rref, piv = rref_mod_p(a, p)
    return kernel_from_rref(rref, piv, a.shape[1], p)


def rank_mod_p(a, p: int) -> int:
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return 0
    return len(rref_mod_p(a, p)[1])


# --------------------------------------------------------------------------
# rationals, fraction free

def _integer_row(row: Sequence) -> list[int]:
    row = [Fraction(x) for x in row]
    den = reduce(lcm, (x.denominator for x in row), 1)
    ints = [int(x * den) for x in row]
    g = reduce(gcd, ints, 0)
    return [v // g for v in ints] if g > 1 else ints


def rref_rational(rows: Sequence[Sequence], cols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Integer-preserving Gauss-Jordan elimination over the rationals.

    Rows are cleared of denominators and kept primitive (content 1) while
    eliminating; the pivot rows are divided through only at the end.
    """
    m = [_integer_row(r) for r in rows]
    m = [r for r in m if any(r)]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        pv = prow[c]
        for i in range(len(m)):
            if i == r or not m[i][c]:
                continue
            f = m[i][c]
            new = [pv * x - f * y for x, y in zip(m[i], prow)]
            g = reduce(gcd, new, 0)
            m[i] = [v // g for v in new] if g > 1 else new
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    out = []
    for i, c in enumerate(pivots):
        pv = m[i][c]
        out.append([Fraction(x, pv) for x in m[i]])
    return out, pivots


# --------------------------------------------------------------------------
# public surface

def rref_kernel(m) -> list[list]:
    """Basis of the right null space of an exact matrix.

    Each basis vector has a 1 at its free column and 0 at every other free
    column; vectors are ordered by free column, so the output is unique.

    Raises:
        KindMismatchError: for mixed kinds or the complex-float kind.
    """
    mat = _as_matrix(m)
    kind = mat.kind
    if kind == COMPLEX_FLOAT:
        raise KindMismatchError("rref_kernel needs an exact kind; use numeric_rank for floats")
    if mat.cols == 0:
        return []
    if kind.name == "prime_field":
        p = kind.modulus
        a = np.array([int(x) for x in mat.entries], dtype=np.int64).reshape(mat.rows, mat.cols) \
            if mat.rows else np.zeros((0, mat.cols), dtype=np.int64)
        basis = kernel_mod_p(a, p)
        return [[Mod(int(x), p) for x in v] for v in basis]
    rref, piv = rref_rational(mat.to_rows(), mat.cols)
    pivset = set(piv)
    basis = []
    for f in (c for c in range(mat.cols) if c not in pivset):
        v = [Fraction(0)] * mat.cols
        v[f] = Fraction(1)
        for row, c in zip(rref, piv):
            v[c] = -row[f]
        basis.append(v)
    return basis


def numeric_rank(m, tol: float = DEFAULT_FLOAT_TOL) -> int:
    """Rank of ``m``: exact pivot count for exact kinds, SVD count for floats.

    For floats a singular value counts when it exceeds ``tol`` times the
    largest singular value.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    mat = _as_matrix(m)
    if mat.rows == 0 or mat.cols == 0:
        return 0
    kind = mat.kind
    if kind == COMPLEX_FLOAT:
        a = np.array(mat.entries, dtype=complex).reshape(mat.rows, mat.cols)
        s = np.linalg.svd(a, compute_uv=False)
        if s.size == 0 or s[0] == 0:
            return 0
        return int(np.sum(s > tol * s[0]))
    if kind.name == "prime_field":
        a = np.array([int(x) for x in mat.entries], dtype=np.int64).reshape(mat.rows, mat.cols)
        return rank_mod_p(a, kind.modulus)
    # rank of the smaller orientation is cheaper
    rows = mat.to_rows()
    if mat.rows > mat.cols:
        rows = [list(col) for col in zip(*rows)]
    return len(rref_rational(rows, len(rows[0]))[1])


def exact_rank(m) -> int:
    mat = _as_matrix(m)
    if mat.kind == COMPLEX_FLOAT:
        raise KindMismatchError("exact_rank needs an exact kind")
    return numeric_rank(mat)


class SingularMatrixError(ValueError):
    """Raised when inverting a singular matrix."""


def mat_inverse(m):
    """Inverse of a small square matrix of field scalars (Gauss-Jordan)."""
    n = len(m)
    one = m[0][0] ** 0 if n else 1
    zero = one - one
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = one / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def mat_inverse_2x2(m):
    """Inverse of a 2x2 matrix given as nested sequences, generic over scalars."""
    (a, b), (c, d) = m
    det = a * d - b * c
    if det == 0:
        raise SingularMatrixError("singular 2x2 matrix")
    return [[d / det, -b / det], [-c / det, a / det]]


__all__ = [
    "DenseMatrix",
    "DEFAULT_FLOAT_TOL",
    "RATIONAL",
    "exact_rank",
    "kernel_from_rref",
    "kernel_mod_p",
    "SingularMatrixError",
    "mat_inverse",
    "mat_inverse_2x2",
    "numeric_rank",
    "rank_mod_p",
    "rref_kernel",
    "rref_mod_p",
    "rref_rational",
]
