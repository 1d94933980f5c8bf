"""Implicitization by sampling: graded pieces of the ideal of a parametrized family.

For a (multi)graded piece with monomials m_1..m_M, the vanishing polynomials
of that piece are the right kernel of the matrix [m_j(psi(x_s))] over random
parameter draws x_s.  Elimination runs modulo word-size primes; the kernel is
lifted to the rationals by CRT and rational reconstruction, and every lifted
polynomial is checked to vanish exactly at fresh integer points.
"""

from __future__ import annotations

import logging
import math
import os
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Sequence

import numpy as np

from .exactnum import (DEFAULT_PRIME, SECOND_PRIME, Mod, crt_pair, is_prime, kernel_from_rref,
                       rank_mod_p, rational_reconstruct, rref_mod_p)
from .parametrize import ParametrizedFamily
from .polynomial import SparsePolynomial, _residue, monomial_values_mod_p
from .states import Necklace, as_word, bracelet_representative, necklaces

log = logging.getLogger(__name__)

MAX_MONOMIALS = 10**6
SAMPLE_FACTOR = 1.25
SAMPLE_MARGIN = 10
DRAW_RANGE = 10**4
CHECK_RANGE = 100
STABLE_DOUBLINGS = 2
MAX_DOUBLINGS = 8
MAX_PRIMES = 5
SYMBOLIC_MAX_PARAMS = 10
SYMBOLIC_MAX_DEGREE = 40
MODULAR_POINTS = 64


class SearchError(RuntimeError):
    """Kernel search could not produce a consistent answer."""


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("MPSVAR_THREADS", "1")))
    except ValueError:
        return 1


def extra_primes(count: int, start: int = SECOND_PRIME - 2) -> list[int]:
    """Primes below ``start``, descending, excluding the two defaults."""
    out, n = [], start
    while len(out) < count:
        if n % 2 and is_prime(n) and n not in (DEFAULT_PRIME, SECOND_PRIME):
            out.append(n)
        n -= 1
    return out


def prime_sequence(count: int) -> list[int]:
    base = [DEFAULT_PRIME, SECOND_PRIME]
    return (base + extra_primes(max(0, count - 2)))[:count]


# --------------------------------------------------------------------------
# monomials

def _coord_degrees(coords, d: int | None = None) -> np.ndarray:
    if isinstance(coords, ParametrizedFamily):
        return coords.coord_multidegrees()
    arr = np.asarray(coords)
    if arr.dtype.kind in "iu" and arr.ndim == 2:
        return arr.astype(np.int64)
    words = [as_word(c) for c in coords]
    if d is None:
        d = max((max(w) for w in words if w), default=0) + 1
    out = np.zeros((len(words), d), dtype=np.int64)
    for i, w in enumerate(words):
        for x in w:
            out[i, x] += 1
    return out


def graded_monomials(coords, degree: int, multidegree: Sequence[int] | None = None,
                     d: int | None = None, limit: int = MAX_MONOMIALS) -> np.ndarray:
    """Exponent vectors of total degree ``degree`` (optionally of one multidegree).

    ``coords`` is a family, a list of index-string labels, or an integer array of
    per-coordinate letter counts.  Rows come in descending lexicographic order.

    Raises:
        ValueError: if more than ``limit`` monomials would be produced.
    """
    degs = _coord_degrees(coords, d)
    C = degs.shape[0]
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if multidegree is None and math.comb(C + degree - 1, degree) > limit:
        raise ValueError(f"more than {limit} monomials of degree {degree} in {C} coordinates")
    target = None if multidegree is None else np.asarray(multidegree, dtype=np.int64)
    if target is not None and target.shape != (degs.shape[1],):
        raise ValueError("multidegree has the wrong length")
    out: list[tuple[int, ...]] = []
    e = [0] * C

    def rec(i: int, left: int, rem) -> None:
        if i == C - 1:
            if rem is not None and np.any(rem - left * degs[i]):
                return
            e[i] = left
            out.append(tuple(e))
            if len(out) > limit:
                raise ValueError(f"more than {limit} monomials")
            e[i] = 0
            return
        for k in range(left, -1, -1):
            if rem is not None:
                r = rem - k * degs[i]
                if np.any(r < 0):
                    continue
            else:
                r = None
            e[i] = k
            rec(i + 1, left - k, r)
        e[i] = 0

    if C == 0:
        return np.zeros((1 if degree == 0 else 0, 0), dtype=np.int64)
    rec(0, degree, target)
    return np.array(out, dtype=np.int64).reshape(len(out), C)


def split_by_multidegree(exps: np.ndarray, degs: np.ndarray) -> dict[tuple[int, ...], np.ndarray]:
    """Group monomial rows by multidegree, keeping the input order within groups."""
    mds = exps @ degs
    groups: dict[tuple[int, ...], list[int]] = defaultdict(list)
    for i, md in enumerate(mds):
        groups[tuple(int(x) for x in md)].append(i)
    return {md: exps[idx] for md, idx in sorted(groups.items())}


# --------------------------------------------------------------------------
# one graded piece over one prime

@dataclass
class PieceKernel:
    multidegree: tuple[int, ...] | None
    prime: int
    monomials: np.ndarray
    basis: np.ndarray  # (K, M) residues, RREF-normalized on free columns
    free: list[int]
    samples: int
    history: list[tuple[int, int]]  # (sample count, kernel dimension)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]


def _seed_for(seed: int, prime: int, md) -> np.random.SeedSequence:
    key = (int(prime),) + tuple(int(x) for x in (md or ()))
    return np.random.SeedSequence(entropy=int(seed), spawn_key=key)


def _sample_rows(family: ParametrizedFamily, exps: np.ndarray, p: int,
                 rng: np.random.Generator, count: int) -> np.ndarray:
    params = family.random_params(rng, count, -DRAW_RANGE, DRAW_RANGE)
    vals = family.evaluate_mod_p(params, p)
    return monomial_values_mod_p(vals, exps, p)


def piece_kernel(family: ParametrizedFamily, exps: np.ndarray, p: int, seed: int,
                 md=None, samples: int | None = None) -> PieceKernel:
    """Kernel of the sampled evaluation matrix of one piece modulo ``p``.

    Starts from ``1.25 M + 10`` samples and keeps doubling until the kernel
    survives two consecutive doublings unchanged.
    """
    M = exps.shape[0]
    rng = np.random.default_rng(_seed_for(seed, p, md))
    S = samples if samples is not None else math.ceil(SAMPLE_FACTOR * M) + SAMPLE_MARGIN
    if M == 0:
        return PieceKernel(md, p, exps, np.zeros((0, 0), dtype=np.int64), [], 0, [(0, 0)])
    rows = _sample_rows(family, exps, p, rng, S)
    rref, piv = rref_mod_p(rows, p)
    history = [(S, M - len(piv))]
    stable = 0
    for _ in range(MAX_DOUBLINGS):
        if stable >= STABLE_DOUBLINGS:
            break
        new = _sample_rows(family, exps, p, rng, rows.shape[0])
        rows = np.vstack([rows, new])
        basis = _basis(rref, piv, M, p)
        if basis.shape[0] and np.any(_matmul_mod(new, basis.T, p)):
            rref, piv = rref_mod_p(np.vstack([rref, new]), p)
            stable = 0
        else:
            stable += 1
        history.append((rows.shape[0], M - len(piv)))
    else:
        if stable < STABLE_DOUBLINGS:
            raise SearchError(f"kernel did not stabilize for multidegree {md}")
    pivset = set(piv)
    free = [c for c in range(M) if c not in pivset]
    return PieceKernel(md, p, exps, _basis(rref, piv, M, p), free, rows.shape[0], history)


def _basis(rref, piv, M, p):
    return kernel_from_rref(rref, piv, M, p)


def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """(a @ b) mod p for residues below 2**31, splitting b into 16-bit halves."""
    lo = b & 0xFFFF
    hi = b >> 16
    # each partial product stays below 2**47, sums below 2**63 for < 2**16 terms
    out_lo = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    out_hi = np.zeros_like(out_lo)
    step = 1 << 15
    for s in range(0, a.shape[1], step):
        out_lo = (out_lo + a[:, s:s + step] @ lo[s:s + step]) % p
        out_hi = (out_hi + a[:, s:s + step] @ hi[s:s + step]) % p
    return (out_lo + (out_hi * 65536) % p) % p


# --------------------------------------------------------------------------
# lifting to the rationals

def _lift(pieces: list[PieceKernel]) -> list[list[Fraction]] | None:
    """CRT the residue bases and reconstruct rationals; None if any entry fails."""
    r = pieces[0].basis.astype(object)
    m = pieces[0].prime
    for pk in pieces[1:]:
        r = np.vectorize(lambda a, b: crt_pair(int(a), m, int(b), pk.prime)[0], otypes=[object])(
            r, pk.basis.astype(object))
        m *= pk.prime
    out = []
    for row in r:
        vec = []
        for a in row:
            q = rational_reconstruct(int(a), m)
            if q is None:
                return None
            vec.append(q)
        out.append(vec)
    return out


def _integer_vector(vec: Sequence[Fraction]) -> list[int]:
    den = reduce(lcm, (x.denominator for x in vec), 1)
    ints = [int(x * den) for x in vec]
    g = reduce(math.gcd, ints, 0) or 1
    return [v // g for v in ints]


def exact_points(family: ParametrizedFamily, count: int, rng: np.random.Generator) -> list[list]:
    """Exact coordinate values at ``count`` random integer parameter points."""
    pts = rng.integers(-CHECK_RANGE, CHECK_RANGE + 1, size=(count, family.nparams))
    return [family.evaluate([int(v) for v in x]) for x in pts]


def exact_check(exps: np.ndarray, vectors: list[list[int]], points: list[list]) -> bool:
    """Do all integer coefficient vectors vanish exactly at every point?"""
    if not vectors:
        return True
    B = np.array(vectors, dtype=object)
    for vals in points:
        mono = np.array([_monomial_value(vals, e) for e in exps], dtype=object)
        if any(v != 0 for v in B.dot(mono)):
            return False
    return True


def _monomial_value(vals, e):
    out = 1
    for v, k in zip(vals, e):
        if k:
            out *= v ** int(k)
    return out


# --------------------------------------------------------------------------
# reports

@dataclass(frozen=True)
class InvariantReport:
    model: str
    D: int
    d: int
    N: int
    degree: int
    multidegree: tuple[int, ...] | None
    primes: tuple[int, ...]
    seed: int
    samples: int
    coords: tuple[str, ...]
    piece_dims: dict
    basis: tuple[SparsePolynomial, ...]
    verified: tuple[str, ...]
    exact: bool
    residue_bases: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return sum(self.piece_dims.values())

    def summary(self) -> dict:
        return {
            "model": self.model, "D": self.D, "d": self.d, "N": self.N,
            "degree": self.degree,
            "multidegree": list(self.multidegree) if self.multidegree else None,
            "primes": list(self.primes), "seed": self.seed, "samples": self.samples,
            "dimension": self.dim,
            "piece_dims": {",".join(map(str, k)): v for k, v in self.piece_dims.items()},
        }


def _family_meta(family: ParametrizedFamily) -> tuple[str, int, int, int]:
    return family.name, getattr(family, "D", 2), family.d, family.N


def kernel_search(family: ParametrizedFamily, degree: int, multidegree: Sequence[int] | None = None,
                  seed: int = 0, exact: bool = True, n_primes: int = 2,
                  verify: str | None = None, stratify: bool = True) -> InvariantReport:
    """All polynomials of the given degree (and multidegree) vanishing on the family.

    The graded piece is split by multidegree (the ideal is multihomogeneous);
    every piece is solved over ``n_primes`` primes, whose kernel dimensions must
    agree.  With ``exact`` the bases are lifted to normalized integer
    polynomials and checked to vanish at 3x fresh exact points.  ``verify``
    optionally runs :func:`verify_candidate` on every basis element.

    Raises:
        SearchError: if the primes disagree or lifting fails.
    """
    if n_primes < 2:
        raise ValueError("at least two primes are required")
    degs = family.coord_multidegrees()
    exps = graded_monomials(degs, degree, multidegree)
    groups = split_by_multidegree(exps, degs) if stratify else {None: exps}
    primes = prime_sequence(n_primes)

    def solve(item):
        md, ex = item
        return md, [piece_kernel(family, ex, p, seed, md) for p in primes]

    items = list(groups.items())
    if worker_count() > 1 and len(items) > 1:
        with ThreadPoolExecutor(worker_count()) as pool:
            solved = list(pool.map(solve, items))
    else:
        solved = [solve(it) for it in items]

    coords = tuple(family.coords)
    points = None
    if exact:
        biggest = max((ex.shape[0] for ex in groups.values()), default=0)
        count = 3 * (math.ceil(SAMPLE_FACTOR * biggest) + SAMPLE_MARGIN)
        points = exact_points(family, count, np.random.default_rng(_seed_for(seed + 1, 0, (degree,))))
    basis: list[SparsePolynomial] = []
    dims: dict = {}
    residue_bases: dict = {}
    total_samples = 0
    for md, pks in solved:
        ds = {pk.dim for pk in pks}
        if len(ds) != 1 or len({tuple(pk.free) for pk in pks}) != 1:
            raise SearchError(f"primes disagree on multidegree {md}: dims {[pk.dim for pk in pks]}")
        dims[md] = pks[0].dim
        residue_bases[md] = pks
        total_samples += pks[0].samples
        if exact and pks[0].dim:
            basis.extend(_lift_piece(family, pks, seed, md, points))
        elif pks[0].dim:
            p = pks[0].prime
            for row in pks[0].basis:
                basis.append(_poly_from_vector(coords, pks[0].monomials, [Mod(int(v), p) for v in row]))
    statuses = ["unverified"] * len(basis)
    if verify:
        statuses = [verify_candidate(q, family, verify, seed=seed).status for q in basis]
    name, D, d, N = _family_meta(family)
    return InvariantReport(name, D, d, N, degree,
                           tuple(multidegree) if multidegree is not None else None,
                           tuple(primes), seed, total_samples, coords, dims, tuple(basis),
                           tuple(statuses), exact, residue_bases)


def _poly_from_vector(coords, exps, vec) -> SparsePolynomial:
    return SparsePolynomial(coords, {tuple(int(x) for x in e): c for e, c in zip(exps, vec)})


def _lift_piece(family, pks: list[PieceKernel], seed: int, md, points) -> list[SparsePolynomial]:
    exps = pks[0].monomials
    coords = tuple(family.coords)
    extra = iter(extra_primes(MAX_PRIMES))
    used = list(pks)
    while True:
        lifted = _lift(used)
        if lifted is not None:
            vectors = [_integer_vector(v) for v in lifted]
            if exact_check(exps, vectors, points):
                return [_poly_from_vector(coords, exps, v).normalized() for v in vectors]
        if len(used) >= MAX_PRIMES:
            raise SearchError(f"rational lifting failed for multidegree {md}")
        p = next(extra)
        pk = piece_kernel(family, exps, p, seed, md)
        if tuple(pk.free) != tuple(pks[0].free):
            raise SearchError(f"prime {p} disagrees on multidegree {md}")
        used.append(pk)


# --------------------------------------------------------------------------
# minimal generators

@dataclass(frozen=True)
class GeneratorCounts:
    counts: dict[int, int]
    per_prime: dict[int, dict[int, int]]
    dims: dict[int, int]


def _piece_products(lower: dict, upper_exps: dict, degs: np.ndarray, p: int) -> dict:
    """Rows x_c * g for g in the lower-degree bases, grouped by target multidegree."""
    index = {md: {tuple(int(x) for x in e): j for j, e in enumerate(ex)}
             for md, ex in upper_exps.items()}
    rows: dict = defaultdict(list)
    C = degs.shape[0]
    for md, pk in lower.items():
        for g in pk.basis:
            nz = np.flatnonzero(g)
            for c in range(C):
                tmd = tuple(int(a + b) for a, b in zip(md, degs[c]))
                if tmd not in index:
                    continue
                cols = index[tmd]
                row = np.zeros(len(cols), dtype=np.int64)
                for j in nz:
                    e = list(pk.monomials[j])
                    e[c] += 1
                    row[cols[tuple(e)]] = g[j]
                rows[tmd].append(row)
    return rows


def new_generator_count(reports: Sequence[InvariantReport]) -> GeneratorCounts:
    """Number of new minimal generators in each degree.

    count_k = dim V_k - dim span{x_c * g : g in V_{k-1}}, where V_j is the
    degree-j piece of the ideal; products of V_{k-1} with single coordinates
    already span everything generated in lower degrees.  Computed per
    multidegree and per prime; the primes must agree.

    Raises:
        ValueError: for reports over different families or non-consecutive degrees.
    """
    reports = sorted(reports, key=lambda r: r.degree)
    if not reports:
        return GeneratorCounts({}, {}, {})
    first = reports[0]
    for r in reports:
        if (r.model, r.D, r.d, r.N, r.coords, r.primes) != \
                (first.model, first.D, first.d, first.N, first.coords, first.primes):
            raise ValueError("reports do not share a model and coordinate system")
        if r.multidegree is not None:
            raise ValueError("generator counts need full (all-multidegree) reports")
    degrees = [r.degree for r in reports]
    if degrees != list(range(degrees[0], degrees[0] + len(degrees))):
        raise ValueError("reports must cover consecutive degrees")
    degs = _coord_degrees(list(first.coords), first.d)
    per_prime: dict[int, dict[int, int]] = {}
    for pi, p in enumerate(first.primes):
        counts = {}
        for k, rep in enumerate(reports):
            pieces = {md: pks[pi] for md, pks in rep.residue_bases.items()}
            if k == 0:
                if rep.degree > 1 and rep.dim:
                    raise ValueError("the lowest report must start below the first invariant")
                counts[rep.degree] = rep.dim
                continue
            lower = {md: pks[pi] for md, pks in reports[k - 1].residue_bases.items()}
            upper_exps = {md: pk.monomials for md, pk in pieces.items()}
            prods = _piece_products(lower, upper_exps, degs, p)
            total = 0
            for md, pk in pieces.items():
                rows = prods.get(md, [])
                r = rank_mod_p(np.array(rows), p) if rows else 0
                if rows and pk.dim and rank_mod_p(np.vstack([np.array(rows), pk.basis]), p) != pk.dim:
                    raise SearchError(f"products leave the sampled kernel at multidegree {md}")
                total += pk.dim - r
            counts[rep.degree] = total
        per_prime[p] = counts
    values = list(per_prime.values())
    if any(v != values[0] for v in values):
        raise SearchError(f"primes disagree on generator counts: {per_prime}")
    return GeneratorCounts(values[0], per_prime, {r.degree: r.dim for r in reports})


def generator_profile(family: ParametrizedFamily, max_degree: int, seed: int = 0,
                      n_primes: int = 2) -> GeneratorCounts:
    reports = [kernel_search(family, k, seed=seed, exact=False, n_primes=n_primes)
               for k in range(1, max_degree + 1)]
    return new_generator_count(reports)


# --------------------------------------------------------------------------
# linear invariants and reflection

@dataclass(frozen=True)
class LinearInvariants:
    N: int
    kernel_dim: int
    reflection_dim: int
    nontrivial: int
    basis: tuple[SparsePolynomial, ...]            # necklace coordinates
    quotient_basis: tuple[SparsePolynomial, ...]   # bracelet coordinates


def bracelet_projection(q: SparsePolynomial, d: int = 2,
                        coords: Sequence[str] | None = None) -> SparsePolynomial:
    """Image of a linear form modulo the reflection differences.

    The quotient identifies each necklace with its reflection, so coefficients
    are summed per bracelet; coordinates are the bracelet representatives.
    """
    return q.relabel(lambda l: bracelet_representative(Necklace.of(l, d)).label, coords)


def linear_invariants(N: int, D: int = 2, d: int = 2, seed: int = 0) -> LinearInvariants:
    """Degree-1 kernel of the periodic family and its part beyond reflection.

    "Non-trivial" counts the kernel modulo the span of psi_n - psi_reverse(n);
    the reflection differences are checked to lie in the kernel.
    """
    from .exactnum import rref_rational
    from .parametrize import PBFamily
    fam = PBFamily(D, d, N)
    rep = kernel_search(fam, 1, seed=seed, exact=True)
    neck = necklaces(d, N)
    labels = [n.label for n in neck]
    bra = sorted({bracelet_representative(n).label for n in neck})
    refl_dim = len(labels) - len(bra)
    kernel_vectors = []
    for q in rep.basis:
        v = [0] * len(labels)
        for e, c in q.terms.items():
            v[e.index(1)] = c
        kernel_vectors.append(v)
    # reflection differences must already vanish on the family
    diffs = []
    for j, n in enumerate(neck):
        r = labels.index(n.reflected().label)
        if r > j:
            v = [0] * len(labels)
            v[j], v[r] = 1, -1
            diffs.append(v)
    p = rep.primes[0]
    mod = lambda rows: np.array([[_residue(x, p) for x in r] for r in rows], dtype=np.int64)
    if diffs and kernel_vectors and \
            rank_mod_p(np.vstack([mod(kernel_vectors), mod(diffs)]), p) != len(kernel_vectors):
        raise SearchError("a reflection difference is missing from the sampled kernel")
    # the quotient by reflection differences sums coefficients per bracelet
    bpos = {b: i for i, b in enumerate(bra)}
    bmap = [bpos[bracelet_representative(n).label] for n in neck]
    rows = []
    for v in kernel_vectors:
        r = [Fraction(0)] * len(bra)
        for j, c in enumerate(v):
            if c:
                r[bmap[j]] += c
        rows.append(r)
    rref, _ = rref_rational(rows, len(bra)) if rows else ([], [])
    unit = lambda j: tuple(int(i == j) for i in range(len(bra)))
    quotient = tuple(
        SparsePolynomial(tuple(bra), {unit(j): c for j, c in enumerate(r) if c}).normalized()
        for r in rref)
    return LinearInvariants(N, rep.dim, refl_dim, len(quotient), rep.basis, quotient)


# --------------------------------------------------------------------------
# candidate verification

@dataclass(frozen=True)
class Verification:
    status: str          # "symbolic", "modular" or "failed"
    ok: bool
    witness: dict | None = None
    note: str = ""


def _align(q: SparsePolynomial, family: ParametrizedFamily) -> SparsePolynomial:
    coords = tuple(family.coords)
    if q.coords == coords:
        return q
    if not set(q.coords) <= set(coords):
        raise ValueError("polynomial coordinates are not coordinates of the family")
    return q.relabel(lambda c: c, coords)


def composed_degree(q: SparsePolynomial, coord_degrees: Sequence[int]) -> int:
    return max((sum(k * dg for k, dg in zip(e, coord_degrees)) for e in q.terms), default=0)


def _packed(poly: SparsePolynomial, base: int) -> dict[int, object]:
    out = {}
    for e, c in poly.terms.items():
        v = 0
        for x in e:
            v = v * base + x
        c = Fraction(c)
        out[v] = c.numerator if c.denominator == 1 else c
    return out


def _pmul(a: dict, b: dict) -> dict:
    if len(a) > len(b):
        a, b = b, a
    out: dict = defaultdict(int)
    bi = list(b.items())
    for ea, ca in a.items():
        for eb, cb in bi:
            out[ea + eb] += ca * cb
    return {k: v for k, v in out.items() if v}


def symbolic_compose_is_zero(q: SparsePolynomial, sym: Sequence[SparsePolynomial],
                             bound: int) -> bool:
    """Expand q(sym) exactly (exponents packed into integers) and test for zero."""
    base = bound + 1
    packed = [_packed(s, base) for s in sym]
    # integer coefficients keep the accumulation in machine-friendly ints
    den = reduce(lcm, (Fraction(c).denominator for c in q.terms.values()), 1)
    # shared prefixes, extended one factor at a time (small x large products)
    prefix: dict = {(): {0: 1}}
    total: dict = defaultdict(int)
    for e, c in sorted(q.terms.items()):
        key: tuple = ()
        acc = prefix[()]
        for i, k in enumerate(e):
            for _ in range(k):
                key = key + (i,)
                if key not in prefix:
                    prefix[key] = _pmul(acc, packed[i])
                acc = prefix[key]
        c = int(Fraction(c) * den)
        for m, v in acc.items():
            total[m] += c * v
    return not any(total.values())


def verify_candidate(q: SparsePolynomial, family: ParametrizedFamily, mode: str = "symbolic",
                     seed: int = 0, points: int = MODULAR_POINTS, n_primes: int = 2) -> Verification:
    """Check that q vanishes on the family.

    ``symbolic`` expands q o psi in the parameters (guard: at most 10 parameters
    and composed degree at most 40; otherwise falls back to ``modular``).
    ``modular`` evaluates at ``points`` random parameters over ``n_primes``
    primes.  A nonzero value yields a witness (parameter point and prime).
    """
    if mode not in ("symbolic", "modular"):
        raise ValueError("mode must be 'symbolic' or 'modular'")
    q = _align(q, family)
    note = ""
    if mode == "symbolic":
        if family.nparams > SYMBOLIC_MAX_PARAMS:
            note = f"{family.nparams} parameters exceed the symbolic guard; checked modularly"
        else:
            sym = [_align_sym(s, family) for s in family.symbolic()]
            cdeg = composed_degree(q, [s.degree() for s in sym])
            if cdeg > SYMBOLIC_MAX_DEGREE:
                note = f"composed degree {cdeg} exceeds the symbolic guard; checked modularly"
            elif symbolic_compose_is_zero(q, sym, cdeg):
                return Verification("symbolic", True, None, f"composed degree {cdeg}")
            else:
                w = _modular_witness(q, family, seed, max(points, 256), n_primes)
                return Verification("failed", False, w, "symbolic expansion is nonzero")
    if points < MODULAR_POINTS or n_primes < 2:
        raise ValueError("modular checks need at least 64 points over 2 primes")
    w = _modular_witness(q, family, seed, points, n_primes)
    if w is not None:
        return Verification("failed", False, w, note)
    return Verification("modular", True, None, note)


def _align_sym(s: SparsePolynomial, family: ParametrizedFamily) -> SparsePolynomial:
    if isinstance(s, SparsePolynomial):
        return s
    return SparsePolynomial.constant(family.param_names, s)


def _modular_witness(q, family, seed, points, n_primes) -> dict | None:
    for p in prime_sequence(n_primes):
        rng = np.random.default_rng(_seed_for(seed, p, (points,)))
        params = family.random_params(rng, points, -DRAW_RANGE, DRAW_RANGE)
        vals = q.evaluate_mod_p(family.evaluate_mod_p(params, p), p)
        bad = np.flatnonzero(vals)
        if bad.size:
            i = int(bad[0])
            return {"prime": p, "params": [int(x) for x in params[i]], "value_mod_p": int(vals[i])}
    return None


__all__ = [
    "GeneratorCounts",
    "InvariantReport",
    "LinearInvariants",
    "SearchError",
    "Verification",
    "bracelet_projection",
    "composed_degree",
    "generator_profile",
    "graded_monomials",
    "kernel_search",
    "linear_invariants",
    "new_generator_count",
    "piece_kernel",
    "prime_sequence",
    "split_by_multidegree",
    "symbolic_compose_is_zero",
    "verify_candidate",
]
