"""The five-parameter family rho and its normal-form inverse.

With E = [[z-u+v0, u-v0], [z-u-v0, u+v0]] and
T = [[z+u-c0, z-b+c0], [z-b-c0, z+b+c0]] the family is A_0 = T and
A_1 = diag(E[0][1], E[1][1]) T.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

from ..exactnum import adjoin_sqrt
from ..states import PureState
from .maps import MatrixTuple, psi_pb
from .traces import trace_coords

FLOAT_MATCH_TOL = 1e-8


class NonGenericError(ValueError):
    """Input violates a genericity precondition."""


@dataclass(frozen=True)
class RhoParams:
    u: object
    v0: object
    b: object
    c0: object
    z: object

    def as_tuple(self) -> tuple:
        return (self.u, self.v0, self.b, self.c0, self.z)

    @classmethod
    def names(cls) -> tuple[str, ...]:
        return ("u", "v0", "b", "c0", "z")


def build_rho_matrices(p: RhoParams) -> MatrixTuple:
    u, v0, b, c0, z = p.as_tuple()
    e01, e11 = u - v0, u + v0
    T = [[z + u - c0, z - b + c0], [z - b - c0, z + b + c0]]
    A1 = [[e01 * T[0][0], e01 * T[0][1]], [e11 * T[1][0], e11 * T[1][1]]]
    return MatrixTuple([T, A1])


def rho(p: RhoParams, N: int) -> PureState:
    return psi_pb(build_rho_matrices(p), N)


def _max_abs(values) -> float:
    return max((abs(complex(x)) for x in values), default=0.0)


def pb_normal_form(A0, A1, mode: str = "float", verify_N: int | None = 4) -> RhoParams:
    """Parameters p with rho(p, N) = psi_pb((A0, A1), N).

    Both sides of that identity are polynomials in the five trace coordinates
    of the pair (D = d = 2), so it suffices to match those.  The diagonal
    factor diag(u - v0, u + v0) carries the eigenvalues of A1 A0^{-1}; the
    diagonal and the off-diagonal product of T then follow linearly, and the
    split of T into (z, b, c0) needs one more square root.

    ``mode="exact"`` keeps rationals and adjoins square roots as
    :class:`QuadExt`; ``mode="float"`` works in complex floats and accepts a
    relative mismatch of 1e-8.  With ``verify_N`` set the result is checked
    against psi_pb at that length.

    Raises:
        NonGenericError: A0 singular, or A1 A0^{-1} with a repeated eigenvalue.
    """
    if mode not in ("float", "exact"):
        raise ValueError("mode must be 'float' or 'exact'")
    A = MatrixTuple([A0, A1])
    if A.D != 2:
        raise ValueError("normal form needs 2x2 matrices")
    if mode == "exact":
        A = A.map(lambda x: Fraction(x))
        sqrt = adjoin_sqrt

        def is_zero(x, scale):
            return x == 0
    else:
        A = A.map(lambda x: complex(x))
        sqrt = cmath.sqrt

        def is_zero(x, scale):
            return abs(x) <= 1e-12 * max(1.0, scale)

    tc = trace_coords(A)
    t0, t1, t00, t11, t01 = (tc[l] for l in ("t0", "t1", "t00", "t11", "t01"))
    scale = _max_abs(tc.values) ** 2
    det0 = (t0 * t0 - t00) / 2
    det1 = (t1 * t1 - t11) / 2
    if is_zero(det0, scale):
        raise NonGenericError("A_0 is singular")
    # eigenvalues of M = A1 A0^{-1}; tr M uses adj(A0) = tr(A0) I - A0
    trM = (t0 * t1 - t01) / det0
    detM = det1 / det0
    disc = trM * trM - 4 * detM
    if is_zero(disc, abs(trM) ** 2 + abs(detM)):
        raise NonGenericError("A_1 A_0^{-1} has a repeated eigenvalue")
    root = sqrt(disc)
    e0, e1 = (trM - root) / 2, (trM + root) / 2
    # T has diagonal (alpha, beta) and off-diagonal product pi
    alpha = (e1 * t0 - t1) / (e1 - e0)
    beta = (t1 - e0 * t0) / (e1 - e0)
    pi = (t00 - alpha * alpha - beta * beta) / 2
    u = (e0 + e1) / 2
    v0 = (e1 - e0) / 2
    # z - c0 = alpha - u, z + b + c0 = beta, (z - b)^2 - c0^2 = pi
    s = alpha - u
    m = 2 * s - beta
    c0 = (-3 * m + sqrt(m * m + 8 * pi)) / 8
    z = s + c0
    b = beta - z - c0
    p = RhoParams(u, v0, b, c0, z)
    if verify_N:
        _verify(p, A, verify_N, mode)
    return p


def _verify(p: RhoParams, A: MatrixTuple, N: int, mode: str) -> None:
    got = rho(p, N).amplitudes
    want = psi_pb(A, N).amplitudes
    if mode == "exact":
        ok = all(x == y for x, y in zip(got, want))
    else:
        ref = max(1.0, _max_abs(want))
        ok = max(abs(complex(x) - complex(y)) for x, y in zip(got, want)) <= FLOAT_MATCH_TOL * ref
    if not ok:
        raise NonGenericError("recovered parameters do not reproduce the state")


__all__ = [
    "NonGenericError",
    "RhoParams",
    "build_rho_matrices",
    "pb_normal_form",
    "rho",
]
