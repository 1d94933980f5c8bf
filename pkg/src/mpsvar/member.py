"""Hypersurface certificates, their evaluation, and marginal/partial-trace maps.

``F_PB224`` cuts out the closure of periodic D=2, d=2, N=4 states in the six
necklace coordinates; ``F_OB223`` cuts out open-boundary D=2, d=2, N=3 states
in the eight amplitudes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .exactnum import COMPLEX_FLOAT
from .polynomial import SparsePolynomial
from .states import (PureState, SymmetryError, as_word, min_rotation, necklaces, to_necklace_coords,
                     word_label)

FLOAT_RESIDUAL_TOL = 1e-8
MAX_KEEP = 8

# Transcribed term by term; labels may be any rotation of a necklace).
_PB224_TEXT = """
psi1010^2*psi1100^4 - 2*psi1100^6 - 8*psi1000*psi1010*psi1100^3*psi1110
+ 12*psi1000*psi1100^4*psi1110 - 4*psi1000^2*psi1010^2*psi1110^2
+ 2*psi0000*psi1010^3*psi1110^2 + 16*psi1000^2*psi1010*psi1100*psi1110^2
- 4*psi0000*psi1010^2*psi1100*psi1110^2
- 16*psi1000^2*psi1100^2*psi1110^2 + 4*psi0000*psi1010*psi1100^2*psi1110^2
- 4*psi0000*psi1100^3*psi1110^2
- 4*psi0000*psi1000*psi1010*psi1110^3 + 8*psi0000*psi1000*psi1100*psi1110^3
- psi0000^2*psi1110^4 + 2*psi1000^2*psi1010^3*psi1111
- psi0000*psi1010^4*psi1111 - 4*psi1000^2*psi1010^2*psi1100*psi1111
+ 4*psi1000^2*psi1010*psi1100^2*psi1111
+ 2*psi0000*psi1010^2*psi1100^2*psi1111 - 4*psi1000^2*psi1100^3*psi1111
+ psi0000*psi1100^4*psi1111
- 4*psi1000^3*psi1010*psi1110*psi1111 + 4*psi0000*psi1000*psi1010^2*psi1110*psi1111
+ 8*psi1000^3*psi1100*psi1110*psi1111
- 8*psi0000*psi1000*psi1010*psi1100*psi1110*psi1111
- 2*psi0000*psi1000^2*psi1110^2*psi1111 + 2*psi0000^2*psi1010*psi1110^2*psi1111
- psi1000^4*psi1111^2
+ 2*psi0000*psi1000^2*psi1010*psi1111^2 - psi0000^2*psi1010^2*psi1111^2
"""

_OB223_TEXT = """
psi011^2*psi100^2 - psi001*psi011*psi100*psi101 - psi010*psi011*psi100*psi101
+ psi000*psi011*psi101^2 + psi001*psi010*psi011*psi110
- psi000*psi011^2*psi110 - psi010*psi011*psi100*psi110
+ psi001*psi010*psi101*psi110 + psi001*psi100*psi101*psi110
- psi000*psi101^2*psi110 - psi001^2*psi110^2
+ psi000*psi011*psi110^2 - psi001*psi010^2*psi111 + psi000*psi010*psi011*psi111
+ psi001^2*psi100*psi111
+ psi010^2*psi100*psi111 - psi000*psi011*psi100*psi111 - psi001*psi100^2*psi111
- psi000*psi001*psi101*psi111
+ psi000*psi100*psi101*psi111 + psi000*psi001*psi110*psi111
- psi000*psi010*psi110*psi111
"""

# necklace coordinates of the reference corner state
REFERENCE_CORNER_LABELS = ("0000", "1000", "1100", "1010", "1110", "1111")
REFERENCE_CORNER_VALUES = (Fraction(1, 4), Fraction(1, 4), Fraction(1, 4),
                       Fraction(-1, 4), Fraction(-1, 4), Fraction(1, 4))


@dataclass(frozen=True)
class MembershipPolynomial:
    name: str
    boundary: str  # "pb" (necklace coordinates) or "ob" (all strings)
    d: int
    N: int
    poly: SparsePolynomial

    @property
    def coords(self) -> tuple[str, ...]:
        return self.poly.coords

    @property
    def n_terms(self) -> int:
        return self.poly.n_terms

    @property
    def degree(self) -> int:
        return self.poly.degree()

    @cached_property
    def multidegree(self) -> tuple[int, ...]:
        degs = self.poly.weighted_degrees(_letter_counts(self.coords, self.d))
        if len(degs) != 1:
            raise ValueError(f"{self.name} is not multihomogeneous")
        return next(iter(degs))

    def to_string(self) -> str:
        return self.poly.to_string()


def _letter_counts(labels, d: int) -> list[list[int]]:
    out = []
    for l in labels:
        w = as_word(l, d)
        out.append([w.count(i) for i in range(d)])
    return out


def _pb224() -> MembershipPolynomial:
    listed = SparsePolynomial.parse(_PB224_TEXT)
    coords = tuple(n.label for n in necklaces(2, 4))
    poly = listed.relabel(lambda l: word_label(min_rotation(as_word(l))), coords)
    # the listed sign is nonpositive on every corner of {+-1/4}^6; the
    # opposite orientation gives the documented corner value +2^-5
    return MembershipPolynomial("pb224", "pb", 2, 4, -poly)


def _ob223() -> MembershipPolynomial:
    coords = tuple(word_label(w) for w in itertools.product(range(2), repeat=3))
    return MembershipPolynomial("ob223", "ob", 2, 3, SparsePolynomial.parse(_OB223_TEXT, coords))


F_PB224 = _pb224()
F_OB223 = _ob223()
CERTIFICATES = {"pb224": F_PB224, "ob223": F_OB223}


@dataclass(frozen=True)
class CertificateValue:
    value: object
    residual: float | None
    consistent: bool  # consistent with membership (never a membership claim)


def certificate_point(cert: MembershipPolynomial, s: PureState) -> list:
    """Coordinates of ``s`` in the certificate's coordinate order.

    Raises:
        ValueError: on a dimension mismatch.
        SymmetryError: for a non-cyclic state and a periodic certificate.
    """
    if (s.d, s.N) != (cert.d, cert.N):
        raise ValueError(f"{cert.name} needs d={cert.d}, N={cert.N}; got d={s.d}, N={s.N}")
    if cert.boundary == "pb":
        nc = to_necklace_coords(s)
        by_label = {n.label: v for n, v in nc.items()}
        return [by_label[c] for c in cert.coords]
    return [s[c] for c in cert.coords]


def eval_certificate(cert: MembershipPolynomial, s: PureState) -> CertificateValue:
    """Exact value of the certificate at ``s``; float states also get a residual
    |f| / (1 + max|psi|)^deg compared against 1e-8."""
    pt = certificate_point(cert, s)
    value = cert.poly(pt)
    if s.kind == COMPLEX_FLOAT:
        scale = (1.0 + max(abs(x) for x in s.amplitudes)) ** cert.degree
        residual = abs(value) / scale
        return CertificateValue(value, residual, residual <= FLOAT_RESIDUAL_TOL)
    return CertificateValue(value, None, value == 0)


def corner_state() -> PureState:
    """The reference sign pattern, as a four-qubit state."""
    from .states import from_necklace_coords
    return from_necklace_coords(2, 4, dict(zip(REFERENCE_CORNER_LABELS, REFERENCE_CORNER_VALUES)))


def corner_values(cert: MembershipPolynomial = F_PB224, half_side=Fraction(1, 4)):
    """Certificate value at every corner of {+-half_side}^n, keyed by sign tuple."""
    n = len(cert.coords)
    out = {}
    for signs in itertools.product((1, -1), repeat=n):
        out[signs] = cert.poly([sg * half_side for sg in signs])
    return out


def corner_max(cert: MembershipPolynomial = F_PB224, half_side=Fraction(1, 4)):
    """(max value, one maximizing corner as coordinate values) over the hypercube corners."""
    vals = corner_values(cert, half_side)
    best = max(vals.values())
    signs = next(k for k, v in vals.items() if v == best)
    return best, tuple(sg * half_side for sg in signs)


def _object_tensor(s: PureState) -> np.ndarray:
    arr = np.empty(len(s.amplitudes), dtype=object)
    arr[:] = list(s.amplitudes)
    return arr.reshape((s.d,) * s.N)


def improper_marginalize(s: PureState, window_start: int, width: int = 3) -> PureState:
    """Sum amplitudes over every index outside ``width`` consecutive sites.

    Raises:
        ValueError: if the window does not fit.
    """
    if not 0 <= window_start <= s.N - width:
        raise ValueError(f"window start {window_start} out of range for N={s.N}")
    t = _object_tensor(s)
    outside = tuple(i for i in range(s.N) if not window_start <= i < window_start + width)
    if outside:
        t = t.sum(axis=outside)
    return PureState(s.d, width, tuple(t.reshape(-1).tolist()))


def reduced_density(s: PureState, keep) -> np.ndarray:
    """rho[J, K] = sum_rest psi[J, rest] conj(psi[K, rest]) for consecutive ``keep``.

    Kept sites come first in the row/column index (big-endian).  Exact scalars
    give an object array, floats a complex array.
    """
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep != list(range(keep[0], keep[-1] + 1)):
        raise ValueError("keep must be a nonempty set of consecutive sites")
    if keep[0] < 0 or keep[-1] >= s.N:
        raise ValueError("keep sites out of range")
    if len(keep) > MAX_KEEP:
        raise ValueError(f"at most {MAX_KEEP} kept sites")
    rest = [i for i in range(s.N) if i not in keep]
    t = _object_tensor(s)
    if s.kind == COMPLEX_FLOAT:
        t = t.astype(complex)
    m = np.transpose(t, keep + rest).reshape(s.d ** len(keep), -1)
    return m @ np.conj(m).T


__all__ = [
    "CERTIFICATES",
    "CertificateValue",
    "F_OB223",
    "F_PB224",
    "MembershipPolynomial",
    "REFERENCE_CORNER_LABELS",
    "REFERENCE_CORNER_VALUES",
    "SymmetryError",
    "certificate_point",
    "corner_max",
    "corner_state",
    "corner_values",
    "eval_certificate",
    "improper_marginalize",
    "reduced_density",
]
