"""Jacobians of the parametrizations, rank estimates and dimension predictions.

Derivatives are forward-mode dual numbers.  The generic route works over any
scalar kind (exact over rationals); :func:`jacobian_mod_p` is a vectorised
route for the matrix-product families that batches every coordinate word at
once, which is what makes N = 20 (52488 necklaces) cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactnum import DEFAULT_PRIME, DenseMatrix, Mod, numeric_rank, rank_mod_p
from .parametrize import (OBFamily, ParametrizedFamily, PBFamily, PhiFamily, RhoFamily,
                          make_family)
from .states import necklace_count

DRAW_RANGE = 10**3
DRAWS = 5


class Dual:
    """a + sum_k g_k eps_k with eps_j eps_k = 0."""

    __slots__ = ("val", "grad")

    def __init__(self, val, grad: Sequence):
        self.val = val
        self.grad = tuple(grad)

    def _lift(self, other):
        if isinstance(other, Dual):
            return other
        return Dual(other, (0 * g for g in self.grad))

    def __add__(self, other):
        o = self._lift(other)
        return Dual(self.val + o.val, (a + b for a, b in zip(self.grad, o.grad)))

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.val, (-g for g in self.grad))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Dual):
            return Dual(self.val * other, (g * other for g in self.grad))
        a, b = self.val, other.val
        return Dual(a * b, (a * gb + b * ga for ga, gb in zip(self.grad, other.grad)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            inv = 1 / other.val
            return Dual(self.val * inv, ((ga * other.val - self.val * gb) * inv * inv
                                         for ga, gb in zip(self.grad, other.grad)))
        return Dual(self.val / other, (g / other for g in self.grad))

    def __pow__(self, k: int):
        if k == 0:
            return Dual(self.val ** 0, (0 * g for g in self.grad))
        base = self.val ** (k - 1)
        return Dual(base * self.val, (k * base * g for g in self.grad))

    def __eq__(self, other):
        o = self._lift(other)
        return self.val == o.val and self.grad == o.grad

    __hash__ = None

    def __repr__(self):
        return f"Dual({self.val!r}, {self.grad!r})"


def seed_duals(point: Sequence) -> list[Dual]:
    n = len(point)
    out = []
    for i, x in enumerate(point):
        one = x ** 0 if not isinstance(x, int) else 1
        zero = one - one
        out.append(Dual(x, [one if j == i else zero for j in range(n)]))
    return out


def _exact(x):
    return Fraction(x) if isinstance(x, int) else x


def jacobian(family: ParametrizedFamily, point: Sequence) -> DenseMatrix:
    """Matrix of partial derivatives (coordinates x parameters) at ``point``.

    Integer points are promoted to rationals, so the result is exact.
    """
    point = [_exact(x) for x in point]
    if len(point) != family.nparams:
        raise ValueError(f"expected {family.nparams} parameters")
    vals = family.evaluate(seed_duals(point))
    rows = []
    for v in vals:
        if isinstance(v, Dual):
            rows.append(list(v.grad))
        else:
            rows.append([0 * point[0]] * family.nparams)
    return DenseMatrix.from_rows(rows, family.nparams)


def finite_difference_jacobian(family: ParametrizedFamily, point: Sequence[float],
                               h: float = 1e-6) -> np.ndarray:
    """Central differences; the float oracle for the dual-number route."""
    x = np.asarray(point, dtype=float)
    cols = []
    for j in range(x.size):
        step = h * max(1.0, abs(x[j]))
        xp, xm = x.copy(), x.copy()
        xp[j] += step
        xm[j] -= step
        fp = np.array(family.evaluate(list(xp)), dtype=complex)
        fm = np.array(family.evaluate(list(xm)), dtype=complex)
        cols.append((fp - fm) / (2 * step))
    return np.stack(cols, axis=1)


# --------------------------------------------------------------------------
# vectorised modular Jacobians

def _bmm(X: np.ndarray, Y: np.ndarray, p: int) -> np.ndarray:
    """Batched matmul mod p over the last two axes, reduced after each term."""
    out = np.zeros(X.shape[:-1] + (Y.shape[-1],), dtype=np.int64)
    for k in range(X.shape[-1]):
        out = (out + X[..., :, k, None] * Y[..., None, k, :]) % p
    return out


def _matrices_with_derivative(family: ParametrizedFamily, point: Sequence[int], p: int):
    """Values (d, D, D) and parameter derivatives (d, P, D, D) of the site matrices."""
    duals = seed_duals([Mod(int(x), p) for x in point])
    if isinstance(family, RhoFamily):
        A = family.matrices(duals)
        bd = None
    elif isinstance(family, PBFamily):
        A = family.matrices(duals)
        bd = None
    elif isinstance(family, OBFamily):
        A, bd = family.matrices(duals)
    else:
        raise TypeError(f"no vectorised Jacobian for {type(family).__name__}")
    d, D, P = family.d, family.D, family.nparams
    val = np.zeros((d, D, D), dtype=np.int64)
    der = np.zeros((d, P, D, D), dtype=np.int64)
    for i, m in enumerate(A.mats):
        for r in range(D):
            for c in range(D):
                x = m[r][c]
                if isinstance(x, Dual):
                    val[i, r, c] = int(x.val)
                    der[i, :, r, c] = [int(g) for g in x.grad]
                else:
                    val[i, r, c] = int(x) % p
    return val, der, bd


def jacobian_mod_p(family: ParametrizedFamily, point: Sequence[int], p: int = DEFAULT_PRIME) -> np.ndarray:
    """Jacobian modulo p at an integer point, shape (coordinates, parameters).

    All words are advanced together one letter at a time: with V the running
    product and dV its derivative, V <- V A_w and dV <- dV A_w + V dA_w.
    """
    if isinstance(family, PhiFamily) or not hasattr(family, "D"):
        J = jacobian(family, [Mod(int(x), p) for x in point])
        return np.array([[int(x) for x in J.row(i)] for i in range(J.rows)], dtype=np.int64)
    if isinstance(family, OBFamily) and family.free_boundary:
        J = jacobian(family, [Mod(int(x), p) for x in point])
        return np.array([[int(x) for x in J.row(i)] for i in range(J.rows)], dtype=np.int64)
    val, der, bd = _matrices_with_derivative(family, point, p)
    words = np.array(family.words, dtype=np.int64).reshape(len(family.words), family.N)
    W, D, P = words.shape[0], family.D, family.nparams
    if isinstance(family, OBFamily):
        V = np.zeros((W, 1, D), dtype=np.int64)
        V[:, 0, 0] = 1
        dV = np.zeros((W, P, 1, D), dtype=np.int64)
    else:
        V = np.broadcast_to(np.eye(D, dtype=np.int64), (W, D, D)).copy()
        dV = np.zeros((W, P, D, D), dtype=np.int64)
    for k in range(family.N):
        Ak = val[words[:, k]]
        dAk = der[words[:, k]]
        dV = (_bmm(dV, Ak[:, None], p) + _bmm(V[:, None], dAk, p)) % p
        V = _bmm(V, Ak, p)
    if isinstance(family, OBFamily):
        return dV[:, :, 0, 0] % p
    return np.trace(dV, axis1=2, axis2=3) % p


# --------------------------------------------------------------------------
# dimension predictions

@dataclass(frozen=True)
class ExpectedDimension:
    expected: int
    ambient: int
    hypersurface: bool
    whole_space: bool


def expected_dimension(D: int, d: int, N: int) -> ExpectedDimension:
    """min{D^2 (d-1) + 1, n_d(N)}; a hypersurface is expected when the
    parameter count D^2 (d-1) + 1 is exactly n_d(N) - 1."""
    params = D * D * (d - 1) + 1
    ambient = necklace_count(d, N)
    return ExpectedDimension(min(params, ambient), ambient, params == ambient - 1, params >= ambient)


def expected_hypersurface_cases(max_N: int = 15, count: str = "binary", max_D: int = 64,
                                max_d: int = 512) -> list[tuple[int, int, int]]:
    """All (D, d, N) with D >= 2, d >= 2, N <= max_N and D^2 (d-1) + 1 = n(N) - 1.

    ``count="binary"`` takes n(N) = n_2(N) for every d, the count under which
    the known list (2,2,4), (2,4,6), (3,3,7), (5,15,12), (3,71,13),
    (2,296,14) arises; ``count="d-ary"`` uses n_d(N), searching d <= max_d.
    """
    if count not in ("binary", "d-ary"):
        raise ValueError("count must be 'binary' or 'd-ary'")
    out = []
    for N in range(1, max_N + 1):
        for D in range(2, max_D + 1):
            if count == "binary":
                rest = necklace_count(2, N) - 2
                if rest > 0 and rest % (D * D) == 0:
                    out.append((D, rest // (D * D) + 1, N))
            else:
                for d in range(2, max_d + 1):
                    if D * D * (d - 1) + 2 == necklace_count(d, N):
                        out.append((D, d, N))
    return sorted(out, key=lambda t: (t[2], t[0], t[1]))


@dataclass(frozen=True)
class DimensionReport:
    model: str
    D: int
    d: int
    N: int
    nparams: int
    rank: int
    rank_field: str
    ranks: tuple[int, ...]
    expected: int
    ambient: int
    seed: int

    @property
    def certified(self) -> bool:
        """The lower bound meets the trivial upper bound min(params, ambient)."""
        return self.rank == min(self.nparams, self.ambient)

    def as_dict(self) -> dict:
        return {
            "model": self.model, "D": self.D, "d": self.d, "N": self.N,
            "parameters": self.nparams, "jacobian_rank": self.rank, "field": self.rank_field,
            "ranks": list(self.ranks), "expected_dimension": self.expected,
            "ambient": self.ambient, "certified": self.certified, "seed": self.seed,
        }


def dimension_report(model: str, D: int, d: int, N: int, seed: int = 0, draws: int = DRAWS,
                     field: str = "modp", p: int = DEFAULT_PRIME) -> DimensionReport:
    """Max Jacobian rank over ``draws`` integer points in [-10^3, 10^3].

    The rank mod p never exceeds the rational rank at the same point, and
    the max over points never exceeds the generic rank, so the result is a
    lower bound for the dimension of the image.  ``field="rational"`` uses
    exact rational elimination instead; ``field="float"`` takes the SVD rank
    of the float Jacobian at points in [-1, 1] (no bound claimed).
    """
    fam = make_family(model, D, d, N)
    rng = np.random.default_rng(seed)
    ranks = []
    for _ in range(draws):
        x = [int(v) for v in rng.integers(-DRAW_RANGE, DRAW_RANGE + 1, size=fam.nparams)]
        if field == "rational":
            ranks.append(numeric_rank(jacobian(fam, x)))
        elif field == "modp":
            ranks.append(rank_mod_p(jacobian_mod_p(fam, x, p), p))
        elif field == "float":
            # unit-scale points keep high-degree columns well conditioned
            xf = [float(v) for v in rng.uniform(-1, 1, size=fam.nparams)]
            J = np.array(jacobian(fam, xf).to_rows(), dtype=complex)
            ranks.append(numeric_rank(J))
        else:
            raise ValueError("field must be 'modp', 'rational' or 'float'")
    ambient = len(fam.words)
    if model == "ob":
        expected = min(D * D * d, ambient)
    else:
        expected = expected_dimension(D, d, N).expected
    return DimensionReport(model, D, d, N, fam.nparams, max(ranks),
                           field if field in ("rational", "float") else f"prime_field({p})",
                           tuple(ranks), expected, ambient, seed)


__all__ = [
    "DimensionReport",
    "Dual",
    "ExpectedDimension",
    "dimension_report",
    "expected_dimension",
    "expected_hypersurface_cases",
    "finite_difference_jacobian",
    "jacobian",
    "jacobian_mod_p",
    "seed_duals",
]
