"""Scalar kinds shared by every algorithm in the package.

Three kinds are supported:

* ``rational``: :class:`fractions.Fraction` (plain ``int`` is accepted and
  treated as rational).  Fractions are always in lowest terms with a positive
  denominator, which is exactly the documented behaviour of the stdlib class.
* ``prime_field``: :class:`Mod`, a residue modulo a fixed prime.
* ``complex_float``: Python ``complex`` (``float`` accepted).

:class:`QuadExt` adds exact elements ``a + b*sqrt(r)`` on top of the rational
kind; towers of such extensions are built by nesting.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from numbers import Rational

DEFAULT_PRIME = 2**31 - 1
SECOND_PRIME = 2**31 - 19


class KindMismatchError(TypeError):
    """Raised when scalars of different kinds are combined."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Kind:
    """Scalar kind tag.  ``modulus`` is set only for prime fields."""

    name: str
    modulus: int | None = None

    def __str__(self) -> str:
        if self.name == "prime_field":
            return f"prime_field({self.modulus})"
        return self.name

    @property
    def exact(self) -> bool:
        return self.name != "complex_float"


RATIONAL = Kind("rational")
COMPLEX_FLOAT = Kind("complex_float")


def prime_field(p: int = DEFAULT_PRIME) -> Kind:
    return Kind("prime_field", p)


class Mod:
    """Residue class modulo a prime ``p``.

    Binary operations accept ``int`` and ``Fraction`` operands, which are mapped
    into the field.  Combining residues with different moduli raises
    :class:`KindMismatchError`.
    """

    __slots__ = ("value", "p")

    def __init__(self, value, p: int = DEFAULT_PRIME):
        if isinstance(value, Mod):
            if value.p != p:
                raise KindMismatchError(f"modulus {value.p} != {p}")
            value = value.value
        elif isinstance(value, Fraction):
            value = value.numerator * pow(value.denominator, -1, p)
        elif not isinstance(value, int):
            raise KindMismatchError(f"cannot map {type(value).__name__} into GF({p})")
        object.__setattr__(self, "value", value % p)
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("Mod is immutable")

    def _coerce(self, other) -> int:
        if isinstance(other, Mod):
            if other.p != self.p:
                raise KindMismatchError(f"modulus {other.p} != {self.p}")
            return other.value
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p) % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.value * o, self.p)

    __rmul__ = __mul__

    def inverse(self) -> Mod:
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.p})")
        return Mod(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * Mod(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(o, self.p) * self.inverse()

    def __neg__(self):
        return Mod(-self.value, self.p)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return Mod(pow(self.value, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, (Mod, int, Fraction)):
            try:
                return self.value == self._coerce(other)
            except (KindMismatchError, ZeroDivisionError):
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Mod({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class QuadExt:
    """Element ``a + b*sqrt(r)`` of a quadratic extension of a base field.

    ``r`` must not be a square in the base field (use :func:`adjoin_sqrt`, which
    checks).  Elements whose radicand differs from ``self.r`` are treated as
    members of the base field, so towers ``Q(sqrt r1)(sqrt r2)`` work by nesting.
    """

    __slots__ = ("a", "b", "r")

    def __init__(self, a, b, r):
        object.__setattr__(self, "a", Fraction(a) if isinstance(a, int) else a)
        object.__setattr__(self, "b", Fraction(b) if isinstance(b, int) else b)
        object.__setattr__(self, "r", Fraction(r) if isinstance(r, int) else r)

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    def _split(self, other):
        if isinstance(other, QuadExt):
            depth, mine = _depth(other), _depth(self)
            if depth == mine:
                if other.r != self.r:
                    raise KindMismatchError("elements of different quadratic extensions")
                return other.a, other.b
            if depth > mine:
                return None
            return other, 0
        if isinstance(other, (int, Fraction)):
            return other, 0
        return None

    def _promoted(self, other):
        # same-type operands never reach reflected methods, so lift explicitly
        if isinstance(other, QuadExt):
            return QuadExt(self, 0, other.r)
        return None

    def __add__(self, other):
        s = self._split(other)
        if s is None:
            up = self._promoted(other)
            return NotImplemented if up is None else up + other
        return QuadExt(self.a + s[0], self.b + s[1], self.r)

    __radd__ = __add__

    def __sub__(self, other):
        s = self._split(other)
        if s is None:
            up = self._promoted(other)
            return NotImplemented if up is None else up - other
        return QuadExt(self.a - s[0], self.b - s[1], self.r)

    def __rsub__(self, other):
        s = self._split(other)
        if s is None:
            up = self._promoted(other)
            return NotImplemented if up is None else other - up
        return QuadExt(s[0] - self.a, s[1] - self.b, self.r)

    def __mul__(self, other):
        s = self._split(other)
        if s is None:
            up = self._promoted(other)
            return NotImplemented if up is None else up * other
        c, d = s
        return QuadExt(self.a * c + self.b * d * self.r, self.a * d + self.b * c, self.r)

    __rmul__ = __mul__

    def conjugate(self) -> QuadExt:
        return QuadExt(self.a, -self.b, self.r)

    def norm(self):
        return self.a * self.a - self.b * self.b * self.r

    def inverse(self) -> QuadExt:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in quadratic extension")
        return QuadExt(self.a / n, -self.b / n, self.r)

    def __truediv__(self, other):
        s = self._split(other)
        if s is None:
            up = self._promoted(other)
            return NotImplemented if up is None else up / other
        if s[1] == 0:
            return QuadExt(self.a / s[0], self.b / s[0], self.r)
        return self * QuadExt(s[0], s[1], self.r).inverse()

    def __rtruediv__(self, other):
        s = self._split(other)
        if s is None:
            up = self._promoted(other)
            return NotImplemented if up is None else other / up
        return QuadExt(s[0], s[1], self.r) * self.inverse()

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.r)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = QuadExt(1, 0, self.r), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        s = self._split(other)
        if s is None:
            up = self._promoted(other)
            return NotImplemented if up is None else up == other
        return self.a == s[0] and self.b == s[1]

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.r))

    def __bool__(self):
        return bool(self.a != 0 or self.b != 0)

    def __complex__(self):
        return complex(self.a) + complex(self.b) * complex(self.r) ** 0.5

    def __repr__(self):
        return f"QuadExt({self.a!r}, {self.b!r}, sqrt={self.r!r})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"({self.b})*sqrt({self.r})"
        return f"({self.a} + ({self.b})*sqrt({self.r}))"


def _depth(x) -> int:
    d = 0
    while isinstance(x, QuadExt):
        d += 1
        x = x.r
    return d


def _rational_sqrt(x: Fraction) -> Fraction | None:
    x = Fraction(x)
    if x < 0:
        return None
    n, d = isqrt(x.numerator), isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def exact_sqrt(x):
    """Square root of ``x`` inside the field ``x`` already lives in, or None."""
    if isinstance(x, (int, Fraction)):
        return _rational_sqrt(x)
    if not isinstance(x, QuadExt):
        raise KindMismatchError(f"exact_sqrt does not support {type(x).__name__}")
    a, b, r = x.a, x.b, x.r
    if b == 0:
        sa = exact_sqrt(a)
        if sa is not None:
            return QuadExt(sa, 0, r)
        t = exact_sqrt(a / r)
        if t is not None:
            return QuadExt(0, t, r)
        return None
    n = exact_sqrt(a * a - b * b * r)
    if n is None:
        return None
    for sign in (1, -1):
        c2 = (a + sign * n) / 2
        c = exact_sqrt(c2)
        if c is not None and c != 0:
            return QuadExt(c, b / (2 * c), r)
    return None


def adjoin_sqrt(x):
    """Return an exact square root of ``x``, extending the field if needed."""
    s = exact_sqrt(x)
    if s is not None:
        return s
    return QuadExt(0, 1, x)


def kind_of(x) -> Kind:
    if isinstance(x, bool):
        raise KindMismatchError("booleans are not scalars")
    if isinstance(x, (int, Fraction, QuadExt)) or isinstance(x, Rational):
        return RATIONAL
    if isinstance(x, Mod):
        return prime_field(x.p)
    if isinstance(x, (float, complex)):
        return COMPLEX_FLOAT
    raise KindMismatchError(f"unsupported scalar type {type(x).__name__}")


def is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, QuadExt, Rational, Mod, float, complex)) \
        and not isinstance(x, bool)


def common_kind(values) -> Kind:
    """The single kind shared by ``values``; raises on mixed kinds.

    Plain ``int`` entries are kind-neutral and adopt the kind of the others.
    """
    kinds = {kind_of(v) for v in values if not isinstance(v, int)}
    if not kinds:
        return RATIONAL
    if len(kinds) > 1:
        raise KindMismatchError(f"mixed scalar kinds: {sorted(map(str, kinds))}")
    return kinds.pop()


def to_kind(x, kind: Kind):
    """Map an integer/rational ``x`` into ``kind``."""
    if kind.name == "rational":
        return Fraction(x) if isinstance(x, int) else x
    if kind.name == "prime_field":
        return Mod(x, kind.modulus)
    return complex(x)


def rational_reconstruct(a: int, m: int) -> Fraction | None:
    """Wang's rational reconstruction: ``n/d == a (mod m)`` with |n|, d < sqrt(m/2)."""
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    frac = Fraction(r1, s1)
    if (frac.numerator - a * frac.denominator) % m:
        return None
    return frac


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    """Combine residues modulo coprime ``m1``, ``m2``."""
    t = (r2 - r1) * pow(m1, -1, m2) % m2
    return r1 + m1 * t, m1 * m2
