"""Sparse multivariate polynomials over named coordinates.

A polynomial maps exponent tuples (one entry per coordinate) to coefficients.
Coefficients may be any scalar kind from :mod:`mpsvar.exactnum`; zero
coefficients are never stored.  Coordinates are plain strings.  Labels made
only of digits are index strings of amplitudes and print as ``psi<label>``.
"""

from __future__ import annotations

import re
from collections import defaultdict
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

import numpy as np

from .exactnum import Mod

Exponent = tuple[int, ...]


def _is_zero(c) -> bool:
    return c == 0


class SparsePolynomial:
    __slots__ = ("coords", "terms")

    def __init__(self, coords: Sequence[str], terms: Mapping[Exponent, object] | None = None):
        coords = tuple(coords)
        n = len(coords)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != n:
                raise ValueError(f"exponent {e} has length {len(e)}, expected {n}")
            if not _is_zero(c):
                clean[e] = c
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("SparsePolynomial is immutable")

    # construction ---------------------------------------------------------

    @classmethod
    def constant(cls, coords: Sequence[str], c) -> SparsePolynomial:
        return cls(coords, {(0,) * len(tuple(coords)): c})

    @classmethod
    def variable(cls, coords: Sequence[str], which, coeff=1) -> SparsePolynomial:
        coords = tuple(coords)
        i = coords.index(which) if isinstance(which, str) else int(which)
        e = [0] * len(coords)
        e[i] = 1
        return cls(coords, {tuple(e): coeff})

    @classmethod
    def monomial(cls, coords: Sequence[str], exps: Exponent, coeff=1) -> SparsePolynomial:
        return cls(coords, {tuple(exps): coeff})

    # arithmetic -------------------------------------------------------------

    def _check(self, other: SparsePolynomial) -> None:
        if other.coords != self.coords:
            raise ValueError("polynomials live over different coordinate lists")

    def _lift(self, other):
        if isinstance(other, SparsePolynomial):
            self._check(other)
            return other
        return SparsePolynomial.constant(self.coords, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return SparsePolynomial(self.coords, out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePolynomial(self.coords, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, SparsePolynomial):
            return SparsePolynomial(self.coords, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        if len(self.terms) < len(other.terms):
            a, b = self.terms, other.terms
        else:
            a, b = other.terms, self.terms
        out: dict = defaultdict(int)
        b_items = list(b.items())
        for ea, ca in a.items():
            for eb, cb in b_items:
                out[tuple(x + y for x, y in zip(ea, eb))] += ca * cb
        return SparsePolynomial(self.coords, out)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, scalar):
        return SparsePolynomial(self.coords, {e: c / scalar for e, c in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = SparsePolynomial.constant(self.coords, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, SparsePolynomial):
            return self.coords == other.coords and self.terms == other.terms
        if not self.terms:
            return other == 0
        if len(self.terms) == 1 and (0,) * len(self.coords) in self.terms:
            return self.terms[(0,) * len(self.coords)] == other
        return False

    def __hash__(self):
        return hash((self.coords, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    # inspection -------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def weighted_degrees(self, weights: Sequence[Sequence[int]]) -> set[tuple[int, ...]]:
        """Set of multidegrees of the terms, coordinate ``i`` weighing ``weights[i]``."""
        w = np.asarray(weights, dtype=np.int64)
        return {tuple(int(x) for x in np.asarray(e) @ w) for e in self.terms}

    def sorted_terms(self) -> list[tuple[Exponent, object]]:
        """Terms in descending lexicographic order of exponent vectors."""
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def leading(self) -> tuple[Exponent, object]:
        return self.sorted_terms()[0]

    def variables_used(self) -> list[str]:
        used = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return [self.coords[i] for i in sorted(used)]

    # evaluation -------------------------------------------------------------

    def _values(self, values) -> list:
        if isinstance(values, Mapping):
            return [values[c] for c in self.coords]
        values = list(values)
        if len(values) != len(self.coords):
            raise ValueError(f"expected {len(self.coords)} values, got {len(values)}")
        return values

    def evaluate(self, values, zero=0):
        """Exact evaluation at a point (sequence in coordinate order, or mapping)."""
        vals = self._values(values)
        powers: dict[tuple[int, int], object] = {}
        total = zero
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = vals[i] ** k
                    term = term * powers[key]
            total = total + term
        return total

    __call__ = evaluate

    def compose(self, subs: Sequence) -> object:
        """Substitute polynomials (or scalars) for the coordinates and expand."""
        subs = list(subs)
        if len(subs) != len(self.coords):
            raise ValueError("one substitution per coordinate required")
        zero = 0 * subs[0] if subs else 0
        return self.evaluate(subs, zero=zero)

    def evaluate_mod_p(self, values: np.ndarray, p: int) -> np.ndarray:
        """Vectorised evaluation at many points modulo ``p``.

        ``values`` has shape (samples, len(coords)) with entries in [0, p).
        """
        values = np.asarray(values, dtype=np.int64) % p
        n_samples = values.shape[0]
        out = np.zeros(n_samples, dtype=np.int64)
        if not self.terms:
            return out
        exps = np.array(list(self.terms), dtype=np.int64)
        coeffs = np.array([_residue(c, p) for c in self.terms.values()], dtype=np.int64)
        terms = np.broadcast_to(coeffs, (n_samples, len(coeffs))).copy()
        terms = monomial_values_mod_p(values, exps, p, init=terms)
        return _sum_mod(terms, p)

    # transformation ---------------------------------------------------------

    def map_coefficients(self, f) -> SparsePolynomial:
        return SparsePolynomial(self.coords, {e: f(c) for e, c in self.terms.items()})

    def relabel(self, mapping, coords: Sequence[str] | None = None) -> SparsePolynomial:
        """Rename coordinates via ``mapping`` (a dict or callable), merging equal names.

        If ``coords`` is given the result lives over that list, otherwise over the
        sorted set of new names.
        """
        f = mapping if callable(mapping) else mapping.__getitem__
        new_names = [f(c) for c in self.coords]
        target = tuple(coords) if coords is not None else tuple(sorted(set(new_names)))
        pos = [target.index(n) for n in new_names]
        out: dict = {}
        for e, c in self.terms.items():
            ne = [0] * len(target)
            for i, k in enumerate(e):
                ne[pos[i]] += k
            ne = tuple(ne)
            out[ne] = out[ne] + c if ne in out else c
        return SparsePolynomial(target, out)

    def normalized(self) -> SparsePolynomial:
        """Canonical scaling of the polynomial.

        Rational coefficients become coprime integers with a positive leading
        coefficient; prime-field coefficients are scaled to a monic leading term.
        """
        if not self.terms:
            return self
        _, lead = self.leading()
        if isinstance(lead, Mod):
            inv = lead.inverse()
            return self.map_coefficients(lambda c: c * inv)
        fr = {e: Fraction(c) for e, c in self.terms.items()}
        den = reduce(lcm, (c.denominator for c in fr.values()), 1)
        ints = {e: int(c * den) for e, c in fr.items()}
        g = reduce(gcd, ints.values(), 0)
        sign = -1 if ints[self.leading()[0]] < 0 else 1
        return SparsePolynomial(self.coords, {e: Fraction(sign * v // g) for e, v in ints.items()})

    def coefficient_vector(self, monomials: Sequence[Exponent], p: int | None = None) -> list:
        """Coefficients listed against ``monomials``; raises if a term is missing."""
        index = {m: i for i, m in enumerate(monomials)}
        vec = [0] * len(index)
        for e, c in self.terms.items():
            if e not in index:
                raise KeyError(f"term {e} is not among the given monomials")
            vec[index[e]] = _residue(c, p) if p else c
        return vec

    # text -------------------------------------------------------------------

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for name, k in zip(self.coords, e):
                if k:
                    shown = f"psi{name}" if name.isdigit() else name
                    factors.append(shown if k == 1 else f"{shown}^{k}")
            cstr = str(c)
            negative = cstr.startswith("-")
            mag = cstr[1:] if negative else cstr
            if factors:
                body = "*".join(factors) if mag == "1" else f"{_wrap(mag)}*" + "*".join(factors)
            else:
                body = _wrap(mag)
            parts.append(("- " if negative else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    __str__ = to_string

    def __repr__(self):
        return f"SparsePolynomial({self.to_string()!r})"

    @classmethod
    def parse(cls, text: str, coords: Sequence[str] | None = None) -> SparsePolynomial:
        """Parse ``c*x^k*y - ...``.  Names ``psi<digits>`` become the digit labels."""
        compact = re.sub(r"\s+", "", text)
        if not compact:
            raise ValueError("empty polynomial text")
        raw_terms = re.findall(r"([+-]?)([^+-]+)", compact)
        if "".join(s + b for s, b in raw_terms) != compact:
            raise ValueError(f"cannot parse polynomial {text!r}")
        parsed = []
        names: list[str] = []
        for sign, body in raw_terms:
            coeff = Fraction(-1 if sign == "-" else 1)
            powers: dict[str, int] = {}
            for factor in body.split("*"):
                m = re.fullmatch(r"(\d+(?:/\d+)?)", factor)
                if m:
                    coeff *= Fraction(m.group(1))
                    continue
                m = re.fullmatch(r"([A-Za-z_][\w()]*?)(?:\^(\d+))?", factor)
                if not m:
                    raise ValueError(f"bad factor {factor!r}")
                name = m.group(1)
                if name.startswith("psi") and name[3:].isdigit():
                    name = name[3:]
                powers[name] = powers.get(name, 0) + int(m.group(2) or 1)
                if name not in names:
                    names.append(name)
            parsed.append((coeff, powers))
        coords = tuple(coords) if coords is not None else tuple(names)
        terms: dict = {}
        for coeff, powers in parsed:
            e = [0] * len(coords)
            for name, k in powers.items():
                e[coords.index(name)] += k
            e = tuple(e)
            terms[e] = terms.get(e, 0) + coeff
        return cls(coords, terms)

    def to_json(self) -> dict:
        return {
            "kind": "poly",
            "coords": list(self.coords),
            "terms": [{"c": str(c), "e": list(e)} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> SparsePolynomial:
        if obj.get("kind") != "poly":
            raise ValueError("not a polynomial document")
        return cls(obj["coords"], {tuple(t["e"]): Fraction(t["c"]) for t in obj["terms"]})


def _wrap(mag: str) -> str:
    return f"({mag})" if any(ch in mag for ch in "+ ") else mag


def _residue(c, p: int) -> int:
    if isinstance(c, Mod):
        if c.p != p:
            raise ValueError(f"coefficient lives mod {c.p}, not {p}")
        return c.value
    if isinstance(c, Fraction):
        return c.numerator * pow(c.denominator, -1, p) % p
    return int(c) % p


def _sum_mod(a: np.ndarray, p: int) -> np.ndarray:
    # row sums of residues < 2**31 without overflow: chunk so partial sums stay < 2**63
    chunk = 2**31
    out = np.zeros(a.shape[0], dtype=np.int64)
    for start in range(0, a.shape[1], chunk):
        out = (out + a[:, start:start + chunk].sum(axis=1) % p) % p
    return out


def monomial_values_mod_p(values: np.ndarray, exps: np.ndarray, p: int,
                          init: np.ndarray | None = None) -> np.ndarray:
    """Matrix of monomial values: entry (s, m) = prod_c values[s, c]**exps[m, c] mod p."""
    values = np.asarray(values, dtype=np.int64) % p
    exps = np.asarray(exps, dtype=np.int64)
    n_samples, n_coords = values.shape
    out = np.ones((n_samples, exps.shape[0]), dtype=np.int64) if init is None else init % p
    for c in range(n_coords):
        kmax = int(exps[:, c].max()) if exps.size else 0
        if kmax == 0:
            continue
        table = np.ones((n_samples, kmax + 1), dtype=np.int64)
        for k in range(1, kmax + 1):
            table[:, k] = table[:, k - 1] * values[:, c] % p
        out = out * table[:, exps[:, c]] % p
    return out


def polynomial_ring_gens(coords: Sequence[str], coeff=1) -> list[SparsePolynomial]:
    return [SparsePolynomial.variable(coords, i, coeff) for i in range(len(tuple(coords)))]


def sum_polys(polys: Iterable[SparsePolynomial], coords: Sequence[str]) -> SparsePolynomial:
    out: dict = {}
    for q in polys:
        for e, c in q.terms.items():
            out[e] = out[e] + c if e in out else c
    return SparsePolynomial(coords, out)
