"""Matrix-product parametrizations and the group actions on their parameters.

Matrices are tuples of row tuples so that any scalar supporting ``+`` and ``*``
(rationals, residues, complex floats, quadratic extensions, polynomials, dual
numbers) flows through unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..exactnum import SingularMatrixError, common_kind, is_scalar, mat_inverse
from ..states import PureState, _check_size, necklace_class_index, necklaces

Matrix = tuple[tuple, ...]


def _scalar(x):
    if isinstance(x, np.generic):
        return x.item()
    return x


def as_matrix(m) -> Matrix:
    rows = m.tolist() if isinstance(m, np.ndarray) else m
    return tuple(tuple(_scalar(x) for x in row) for row in rows)


def mat_mul(X: Matrix, Y: Matrix) -> Matrix:
    n, k, m = len(X), len(Y), len(Y[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = X[i][0] * Y[0][j]
            for t in range(1, k):
                acc = acc + X[i][t] * Y[t][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_trace(X: Matrix):
    acc = X[0][0]
    for i in range(1, len(X)):
        acc = acc + X[i][i]
    return acc


def mat_scale(c, X: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in X)


def mat_add(X: Matrix, Y: Matrix) -> Matrix:
    return tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(X, Y))


def vec_mat(v: Sequence, X: Matrix) -> tuple:
    k = len(v)
    out = []
    for j in range(len(X[0])):
        acc = v[0] * X[0][j]
        for t in range(1, k):
            acc = acc + v[t] * X[t][j]
        out.append(acc)
    return tuple(out)


def dot(u: Sequence, v: Sequence):
    acc = u[0] * v[0]
    for a, b in zip(u[1:], v[1:]):
        acc = acc + a * b
    return acc


@dataclass(frozen=True)
class MatrixTuple:
    """The d matrices A_0, ..., A_{d-1}, each D x D."""

    mats: tuple[Matrix, ...]

    def __init__(self, mats):
        mats = tuple(as_matrix(m) for m in mats)
        if not mats:
            raise ValueError("need at least one matrix")
        D = len(mats[0])
        for m in mats:
            if len(m) != D or any(len(r) != D for r in m):
                raise ValueError("all matrices must be square of the same size")
        entries = [x for m in mats for r in m for x in r]
        if all(is_scalar(x) for x in entries):
            common_kind(entries)
        object.__setattr__(self, "mats", mats)

    @property
    def D(self) -> int:
        return len(self.mats[0])

    @property
    def d(self) -> int:
        return len(self.mats)

    def __getitem__(self, i: int) -> Matrix:
        return self.mats[i]

    def __iter__(self):
        return iter(self.mats)

    @classmethod
    def from_params(cls, values: Sequence, D: int, d: int) -> MatrixTuple:
        """Row-major entries of A_0, then A_1, ..."""
        values = list(values)
        if len(values) != D * D * d:
            raise ValueError(f"expected {D * D * d} parameters")
        return cls([[values[i * D * D + r * D: i * D * D + (r + 1) * D] for r in range(D)]
                    for i in range(d)])

    def params(self) -> list:
        return [x for m in self.mats for r in m for x in r]

    def map(self, f) -> MatrixTuple:
        return MatrixTuple([[[f(x) for x in r] for r in m] for m in self.mats])


@dataclass(frozen=True)
class BoundaryPair:
    """Boundary vectors b0, b1 of an open-boundary matrix product."""

    b0: tuple
    b1: tuple

    def __init__(self, b0, b1):
        b0 = tuple(_scalar(x) for x in b0)
        b1 = tuple(_scalar(x) for x in b1)
        if len(b0) != len(b1):
            raise ValueError("boundary vectors must have equal length")
        object.__setattr__(self, "b0", b0)
        object.__setattr__(self, "b1", b1)

    @property
    def D(self) -> int:
        return len(self.b0)

    @classmethod
    def corner(cls, D: int) -> BoundaryPair:
        """b0 = b1 = e_1, i.e. the boundary matrix E_11."""
        e = tuple(1 if i == 0 else 0 for i in range(D))
        return cls(e, e)


def pb_necklace_values(A: MatrixTuple, N: int) -> list:
    """tr(A_J) for each necklace J (in the order of :func:`necklaces`).

    Consecutive representatives share prefixes, so prefix products are kept
    on a stack and reused.
    """
    reps = [n.representative for n in necklaces(A.d, N)]
    out = []
    stack: list[Matrix] = []
    prev: tuple = ()
    for w in reps:
        common = 0
        while common < len(prev) and prev[common] == w[common]:
            common += 1
        del stack[common:]
        for k in range(common, N):
            stack.append(A[w[k]] if k == 0 else mat_mul(stack[-1], A[w[k]]))
        out.append(mat_trace(stack[-1]))
        prev = w
    return out


def psi_pb(A: MatrixTuple, N: int) -> PureState:
    """Periodic-boundary state psi_J = tr(A_{j1} ... A_{jN})."""
    if N < 1:
        raise ValueError("N must be >= 1")
    _check_size(A.d, N)
    vals = pb_necklace_values(A, N)
    cls = necklace_class_index(A.d, N)
    return PureState(A.d, N, tuple(vals[c] for c in cls))


def ob_values(A: MatrixTuple, bd: BoundaryPair, N: int) -> list:
    """b0^T A_J b1 for all strings J in index order."""
    if bd.D != A.D:
        raise ValueError(f"boundary vectors have length {bd.D}, matrices are {A.D}x{A.D}")
    out: list = []

    def walk(depth: int, v: tuple) -> None:
        if depth == N:
            out.append(dot(v, bd.b1))
            return
        for m in A.mats:
            walk(depth + 1, vec_mat(v, m))

    walk(0, bd.b0)
    return out


def psi_ob(A: MatrixTuple, bd: BoundaryPair, N: int) -> PureState:
    """Open-boundary state psi_J = b0^T A_{j1} ... A_{jN} b1."""
    if N < 1:
        raise ValueError("N must be >= 1")
    _check_size(A.d, N)
    return PureState(A.d, N, tuple(ob_values(A, bd, N)))


def gauge_conjugate(A: MatrixTuple, P) -> MatrixTuple:
    """A_i -> P A_i P^{-1}.

    Raises:
        SingularMatrixError: if P is singular.
    """
    P = as_matrix(P)
    if len(P) != A.D:
        raise ValueError("gauge matrix has the wrong size")
    P = tuple(tuple(Fraction(x) if isinstance(x, int) else x for x in r) for r in P)
    Pinv = as_matrix(mat_inverse([list(r) for r in P]))
    return MatrixTuple([mat_mul(mat_mul(P, m), Pinv) for m in A.mats])


def gl_action_params(g, A: MatrixTuple) -> MatrixTuple:
    """A_i -> sum_j g_ij A_j."""
    g = as_matrix(g)
    if len(g) != A.d or any(len(r) != A.d for r in g):
        raise ValueError("g must be d x d")
    out = []
    for i in range(A.d):
        acc = mat_scale(g[i][0], A[0])
        for j in range(1, A.d):
            acc = mat_add(acc, mat_scale(g[i][j], A[j]))
        out.append(acc)
    return MatrixTuple(out)


def gl_action_state(g, s: PureState) -> PureState:
    """(g.psi)_{i1..iN} = sum g_{i1 p1} ... g_{iN pN} psi_{p1..pN}."""
    g = np.array(as_matrix(g), dtype=object)
    if g.shape != (s.d, s.d):
        raise ValueError("g must be d x d")
    arr = np.empty(len(s.amplitudes), dtype=object)
    arr[:] = list(s.amplitudes)
    arr = arr.reshape((s.d,) * s.N)
    for axis in range(s.N):
        arr = np.moveaxis(np.tensordot(g, arr, axes=([1], [axis])), 0, axis)
    return PureState(s.d, s.N, tuple(arr.reshape(-1).tolist()))


__all__ = [
    "BoundaryPair",
    "MatrixTuple",
    "SingularMatrixError",
    "as_matrix",
    "gauge_conjugate",
    "gl_action_params",
    "gl_action_state",
    "mat_mul",
    "mat_trace",
    "ob_values",
    "pb_necklace_values",
    "psi_ob",
    "psi_pb",
]
