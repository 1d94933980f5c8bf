"""Trace coordinates of 2x2 matrix tuples.

For D = 2 the ring of conjugation invariants of d matrices is generated by
tr(A_i), tr(A_i^2), tr(A_i A_j) (i < j) and tr(A_i A_j A_k) (i < j < k).  Every
trace word reduces to a polynomial in these via Cayley-Hamilton and its
polarized form

    XY + YX = tr(X) Y + tr(Y) X + (tr(XY) - tr(X) tr(Y)) I.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from ..exactnum import COMPLEX_FLOAT, adjoin_sqrt, common_kind
from ..polynomial import SparsePolynomial
from ..states import PureState, from_necklace_coords, min_rotation, necklaces, rotate, word_label
from .maps import MatrixTuple, mat_mul, mat_trace

MAX_REDUCE_LENGTH = 16
HALF = Fraction(1, 2)


class RealizationError(ValueError):
    """Trace coordinates that the realization procedure cannot invert."""


def trace_label(w: Sequence[int]) -> str:
    return "t" + word_label(w)


def trace_generator_words(d: int) -> list[tuple[int, ...]]:
    """Generator words in label order: singles, squares, pairs, triples."""
    if d < 1:
        raise ValueError("d must be positive")
    return ([(i,) for i in range(d)] + [(i, i) for i in range(d)]
            + list(combinations(range(d), 2)) + list(combinations(range(d), 3)))


def trace_labels(d: int) -> list[str]:
    return [trace_label(w) for w in trace_generator_words(d)]


def generator_count(d: int) -> int:
    return len(trace_generator_words(d))


@dataclass(frozen=True)
class TraceCoordinates:
    labels: tuple[str, ...]
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.labels) != len(self.values):
            raise ValueError("labels and values differ in length")
        if list(self.labels) != trace_labels(self.d):
            raise ValueError("labels are not the generator list for any d")

    @property
    def d(self) -> int:
        return sum(1 for l in self.labels if len(l) == 2)

    @classmethod
    def from_values(cls, d: int, values: Sequence) -> TraceCoordinates:
        return cls(tuple(trace_labels(d)), tuple(values))

    def as_dict(self) -> dict[str, object]:
        return dict(zip(self.labels, self.values))

    def __getitem__(self, label: str):
        return self.values[self.labels.index(label)]


def word_trace(A: MatrixTuple, w: Sequence[int]):
    prod = A[w[0]]
    for i in w[1:]:
        prod = mat_mul(prod, A[i])
    return mat_trace(prod)


def trace_coords(A: MatrixTuple) -> TraceCoordinates:
    """Values of the generators at A (D must be 2)."""
    if A.D != 2:
        raise NotImplementedError("trace coordinates are implemented for D = 2 only")
    words = trace_generator_words(A.d)
    return TraceCoordinates(tuple(trace_label(w) for w in words),
                            tuple(word_trace(A, w) for w in words))


# --------------------------------------------------------------------------
# reduction of trace words

class _Reducer:
    def __init__(self, d: int):
        self.d = d
        self.coords = tuple(trace_labels(d))
        self.two = SparsePolynomial.constant(self.coords, 2)
        self.memo: dict[tuple, SparsePolynomial] = {}

    def gen(self, w) -> SparsePolynomial:
        return SparsePolynomial.variable(self.coords, trace_label(w))

    def swap_terms(self, P, X, Y, Q) -> SparsePolynomial:
        """S with tr(P X Y Q) = -tr(P Y X Q) + S, for blocks X, Y."""
        r = self.reduce
        rx, ry = r(X), r(Y)
        return ry * r(P + X + Q) + rx * r(P + Y + Q) + (r(X + Y) - rx * ry) * r(P + Q)

    def reduce(self, w) -> SparsePolynomial:
        w = min_rotation(w)
        hit = self.memo.get(w)
        if hit is None:
            hit = self.memo[w] = self._reduce(w)
        return hit

    def _reduce(self, w) -> SparsePolynomial:
        n = len(w)
        if n == 0:
            return self.two
        if n == 1:
            return self.gen(w)
        if n == 2:
            return self.gen(tuple(sorted(w)))
        for k in range(n):
            if w[k] == w[(k + 1) % n]:
                # tr(XXR) = tr X tr(XR) - det X tr R
                v = rotate(w, k)
                x, rest = v[:1], v[2:]
                tx = self.reduce(x)
                det = (tx * tx - self.reduce(x + x)) * HALF
                return tx * self.reduce(x + rest) - det * self.reduce(rest)
        if len(set(w)) < n:
            return self._reduce_repeat(w)
        if n == 3:
            if w[1] < w[2]:
                return self.gen(w)
            i, k, j = w
            return -self.reduce((i, j, k)) + self.swap_terms((i,), (j,), (k,), ())
        X1, X2, X3, X4 = w[:1], w[1:2], w[2:3], w[3:]
        s1 = self.swap_terms((), X1, X2, X3 + X4)
        s2 = self.swap_terms(X2, X1, X3, X4)
        s3 = self.swap_terms(X2 + X3, X1, X4, ())
        return (s1 - s2 + s3) * HALF

    def _reduce_repeat(self, w) -> SparsePolynomial:
        # move two equal letters closer by one swap; the gap strictly shrinks
        n = len(w)
        best = None
        for a in range(n):
            for g in range(1, n):
                if w[(a + g) % n] == w[a]:
                    if best is None or g < best[1]:
                        best = (a, g)
                    break
        a, g = best
        v = rotate(w, a)
        x, y = v[:1], v[g - 1:g]
        P, Q = v[:g - 1], v[g + 1:]
        return -self.reduce(P + x + y + Q) + self.swap_terms(P, x, y, Q)


@lru_cache(maxsize=32)
def _reducer(d: int) -> _Reducer:
    return _Reducer(d)


def trace_word_reduce(word, d: int | None = None, D: int = 2) -> SparsePolynomial:
    """Polynomial q in the trace coordinates with tr(A_w) = q(trace_coords(A)).

    Raises:
        NotImplementedError: for D != 2.
        ValueError: for words longer than the length-16 guard.
    """
    if D != 2:
        raise NotImplementedError("trace-word reduction is implemented for D = 2 only")
    w = tuple(int(x) for x in word)
    if len(w) > MAX_REDUCE_LENGTH:
        raise ValueError(f"word length {len(w)} exceeds the guard {MAX_REDUCE_LENGTH}")
    if d is None:
        d = max(w, default=0) + 1
    if any(not 0 <= x < d for x in w):
        raise ValueError(f"letter out of range for d={d}")
    return _reducer(d).reduce(w)


# --------------------------------------------------------------------------
# realization and the trace parametrization

def _check_realizable(tc: TraceCoordinates) -> None:
    if tc.d != 2:
        raise NotImplementedError("realization is implemented for d = 2")
    t0, t00 = tc["t0"], tc["t00"]
    disc = 2 * t00 - t0 * t0
    if common_kind([disc]) == COMPLEX_FLOAT:
        scale = max(1.0, abs(t0) ** 2, abs(t00))
        bad = abs(disc) <= 1e-12 * scale
    else:
        bad = disc == 0
    if bad:
        raise RealizationError("tr(A_0^2) = tr(A_0)^2 / 2: A_0 has a repeated eigenvalue")


def realize_trace_coords(tc: TraceCoordinates) -> MatrixTuple:
    """A pair (A_0, A_1) whose trace coordinates are ``tc``.

    A_0 is the companion matrix of its characteristic polynomial; A_1 has its
    lower-left entry pinned to 1.  The remaining entries solve one quadratic,
    so exact input may yield entries in a quadratic extension.

    Raises:
        RealizationError: when A_0 would have a repeated eigenvalue.
    """
    _check_realizable(tc)
    t0, t1, t00, t11, t01 = (tc[l] for l in ("t0", "t1", "t00", "t11", "t01"))
    floaty = common_kind(tc.values) == COMPLEX_FLOAT
    if not floaty:
        t0, t1, t00, t11, t01 = (Fraction(x) for x in (t0, t1, t00, t11, t01))
    det0 = (t0 * t0 - t00) / 2
    # 2 e^2 - 2 (t0 + t1) e + (t1^2 + 2 t01 + 2 det0 - t11) = 0
    bq = t0 + t1
    cq = t1 * t1 + 2 * t01 + 2 * det0 - t11
    disc = bq * bq - 2 * cq
    root = cmath.sqrt(disc) if floaty else adjoin_sqrt(disc)
    e = (bq + root) / 2
    a = t1 - e
    b = t01 + det0 - t0 * e
    one = 1.0 if floaty else Fraction(1)
    zero = one - one
    return MatrixTuple([[[zero, -det0], [one, t0]], [[a, b], [one, e]]])


def phi_trace(tc: TraceCoordinates, N: int) -> PureState:
    """State whose necklace coordinates are the reduced trace words at ``tc``.

    Raises:
        RealizationError: for non-generic ``tc``.
    """
    _check_realizable(tc)
    vals = list(tc.values)
    return from_necklace_coords(
        tc.d, N, {n: trace_word_reduce(n.representative, tc.d)(vals) for n in necklaces(tc.d, N)})


__all__ = [
    "MAX_REDUCE_LENGTH",
    "RealizationError",
    "TraceCoordinates",
    "generator_count",
    "phi_trace",
    "realize_trace_coords",
    "trace_coords",
    "trace_generator_words",
    "trace_label",
    "trace_labels",
    "trace_word_reduce",
    "word_trace",
]
