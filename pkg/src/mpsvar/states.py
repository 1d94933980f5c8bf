"""Pure-state amplitude tables and d-ary necklace combinatorics.

Index strings are big-endian base ``d``: the amplitude of ``i_1 ... i_N`` sits
at position ``sum(i_k * d**(N-k))``.  A necklace is represented by the
lexicographically smallest rotation of any of its strings; reflection is kept
separate (see :func:`reflect`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterator, Sequence

import numpy as np

from .exactnum import COMPLEX_FLOAT, common_kind

MAX_STATE_SIZE = 2**26
FLOAT_SYMMETRY_TOL = 1e-9

Word = tuple[int, ...]


class SizeGuardError(ValueError):
    """Raised when an enumeration would exceed the desk-scale size guard."""


class SymmetryError(ValueError):
    """A state lacks a symmetry it was required to have.

    ``witness`` holds the offending pair of index strings.
    """

    def __init__(self, message: str, witness: tuple[Word, Word]):
        super().__init__(message)
        self.witness = witness


def _check_size(d: int, N: int) -> None:
    if d ** N > MAX_STATE_SIZE:
        raise SizeGuardError(f"d^N = {d}^{N} exceeds the guard {MAX_STATE_SIZE}")


def as_word(J, d: int | None = None) -> Word:
    """Accept ``"0110"``, ``(0, 1, 1, 0)`` or a list; return a tuple of ints."""
    if isinstance(J, str):
        w = tuple(int(ch, 36) for ch in J)
    else:
        w = tuple(int(x) for x in J)
    if d is not None and any(not 0 <= x < d for x in w):
        raise ValueError(f"digit out of range for d={d}: {J!r}")
    return w


def word_label(w: Sequence[int]) -> str:
    """Compact string label; digits above 9 use letters (base 36)."""
    return "".join(np.base_repr(x, 36).lower() for x in w)


def word_index(w: Sequence[int], d: int) -> int:
    i = 0
    for x in w:
        i = i * d + x
    return i


def index_word(i: int, d: int, N: int) -> Word:
    out = []
    for _ in range(N):
        i, r = divmod(i, d)
        out.append(r)
    return tuple(reversed(out))


def rotate(w: Sequence[int], k: int = 1) -> Word:
    """Cyclic left rotation by ``k``."""
    w = tuple(w)
    if not w:
        return w
    k %= len(w)
    return w[k:] + w[:k]


def min_rotation(w: Sequence[int]) -> Word:
    w = tuple(w)
    return min((w[k:] + w[:k] for k in range(len(w))), default=w)


def reflect(w: Sequence[int]) -> Word:
    return tuple(reversed(tuple(w)))


@dataclass(frozen=True, order=True)
class Necklace:
    """Rotation class of length-N strings over ``range(d)``."""

    representative: Word
    d: int = 2

    def __post_init__(self):
        if min_rotation(self.representative) != self.representative:
            raise ValueError(f"{self.representative} is not a minimal rotation")

    @classmethod
    def of(cls, w, d: int = 2) -> Necklace:
        return cls(min_rotation(as_word(w, d)), d)

    @property
    def N(self) -> int:
        return len(self.representative)

    @property
    def label(self) -> str:
        return word_label(self.representative)

    def orbit(self) -> list[Word]:
        return sorted({rotate(self.representative, k) for k in range(self.N)})

    def reflected(self) -> Necklace:
        return Necklace.of(reflect(self.representative), self.d)

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class MultiDegree:
    """Per-symbol occurrence counts."""

    counts: tuple[int, ...]

    def __add__(self, other: MultiDegree) -> MultiDegree:
        return MultiDegree(tuple(a + b for a, b in zip(self.counts, other.counts)))

    @property
    def total(self) -> int:
        return sum(self.counts)

    def __iter__(self):
        return iter(self.counts)


def multidegree(J, d: int = 2) -> MultiDegree:
    w = as_word(J, d)
    counts = [0] * d
    for x in w:
        counts[x] += 1
    return MultiDegree(tuple(counts))


def _totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(n, k) == 1)


def necklace_count(d: int, N: int) -> int:
    """Number of d-ary necklaces of length N, by the totient sum over divisors."""
    if d < 1 or N < 1:
        raise ValueError("need d >= 1 and N >= 1")
    total = sum(_totient(l) * d ** (N // l) for l in range(1, N + 1) if N % l == 0)
    return total // N


@lru_cache(maxsize=64)
def _min_rotation_indices(d: int, N: int) -> np.ndarray:
    """For every string index, the index of its minimal rotation."""
    _check_size(d, N)
    size = d ** N
    x = np.arange(size, dtype=np.int64)
    best = x.copy()
    top = d ** (N - 1)
    y = x
    for _ in range(N - 1):
        # rotate left by one digit in big-endian base d
        y = (y % top) * d + y // top
        np.minimum(best, y, out=best)
    best.flags.writeable = False
    return best


@lru_cache(maxsize=64)
def _necklace_indices(d: int, N: int) -> np.ndarray:
    best = _min_rotation_indices(d, N)
    return np.flatnonzero(best == np.arange(best.size))


def necklace_class_index(d: int, N: int) -> np.ndarray:
    """Array mapping each string index to the position of its necklace in
    :func:`necklaces`."""
    return np.searchsorted(_necklace_indices(d, N), _min_rotation_indices(d, N))


def necklaces(d: int, N: int) -> list[Necklace]:
    """All necklaces sorted by representative.

    Raises:
        SizeGuardError: if d**N exceeds the 2**26 guard.
    """
    return [Necklace(index_word(int(i), d, N), d) for i in _necklace_indices(d, N)]


def bracelet_representative(n: Necklace) -> Necklace:
    return min(n, n.reflected())


def index_strings(d: int, N: int) -> Iterator[Word]:
    return itertools.product(range(d), repeat=N)


@dataclass(frozen=True)
class PureState:
    """Amplitude table psi indexed by length-N strings over ``range(d)``."""

    d: int
    N: int
    amplitudes: tuple

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be positive")
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if len(self.amplitudes) != self.d ** self.N:
            raise ValueError(f"expected {self.d ** self.N} amplitudes, got {len(self.amplitudes)}")
        common_kind(self.amplitudes)

    @classmethod
    def from_function(cls, d: int, N: int, f) -> PureState:
        _check_size(d, N)
        return cls(d, N, tuple(f(w) for w in index_strings(d, N)))

    @classmethod
    def from_mapping(cls, d: int, N: int, values: dict, zero=0) -> PureState:
        amps = [zero] * d ** N
        for J, v in values.items():
            amps[word_index(as_word(J, d), d)] = v
        return cls(d, N, tuple(amps))

    @property
    def kind(self):
        return common_kind(self.amplitudes)

    def __getitem__(self, J):
        w = as_word(J, self.d)
        if len(w) != self.N:
            raise ValueError(f"index string of length {len(w)} for N={self.N}")
        return self.amplitudes[word_index(w, self.d)]

    def items(self) -> Iterator[tuple[Word, object]]:
        return zip(index_strings(self.d, self.N), self.amplitudes)

    def map(self, f) -> PureState:
        return PureState(self.d, self.N, tuple(f(a) for a in self.amplitudes))


def _close(a, b, scale: float) -> bool:
    return abs(a - b) <= FLOAT_SYMMETRY_TOL * scale


def _comparator(s: PureState):
    if s.kind == COMPLEX_FLOAT:
        scale = max((abs(a) for a in s.amplitudes), default=0.0) or 1.0
        return lambda a, b: _close(a, b, scale)
    return lambda a, b: a == b


def cyclic_witness(s: PureState) -> tuple[Word, Word] | None:
    """First pair (J, rotate(J)) with different amplitudes, or None."""
    eq = _comparator(s)
    for w, a in s.items():
        r = rotate(w)
        if not eq(a, s[r]):
            return w, r
    return None


def to_necklace_coords(s: PureState) -> dict[Necklace, object]:
    """Restrict a cyclically invariant state to necklace coordinates.

    Raises:
        SymmetryError: if some amplitude differs from that of its rotation.
    """
    bad = cyclic_witness(s)
    if bad is not None:
        J, R = bad
        raise SymmetryError(
            f"state is not cyclically invariant: psi[{word_label(J)}] != psi[{word_label(R)}]", bad
        )
    return {n: s[n.representative] for n in necklaces(s.d, s.N)}


def from_necklace_coords(d: int, N: int, coords: dict) -> PureState:
    """Spread necklace values back over every rotation."""
    vals = {}
    for n, v in coords.items():
        if not isinstance(n, Necklace):
            n = Necklace.of(n, d)
        for w in n.orbit():
            vals[w] = v
    zero = next(iter(coords.values())) * 0 if coords else 0
    return PureState.from_mapping(d, N, vals, zero=zero)


def is_reflection_symmetric(s: PureState) -> tuple[bool, Word | None]:
    """Whether psi_J == psi_reverse(J) for all J; on failure also a witness J.

    The witness is the larger string of the first mismatching pair.
    """
    eq = _comparator(s)
    for w, a in s.items():
        r = reflect(w)
        if not eq(a, s[r]):
            return False, max(w, r)
    return True, None
