"""Parametrized families as maps from parameter vectors to state coordinates.

A family fixes (d, N), a list of coordinate words and a parameter count.
``evaluate`` is generic over scalars; ``evaluate_mod_p`` is the vectorised
sampler used by kernel search.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..polynomial import SparsePolynomial
from ..states import Word, index_strings, necklaces, word_label
from .maps import BoundaryPair, MatrixTuple, ob_values, pb_necklace_values
from .rho import RhoParams, build_rho_matrices
from .traces import trace_labels, trace_word_reduce


def _bmm(X: np.ndarray, Y: np.ndarray, p: int) -> np.ndarray:
    """Batched (S, R, K) @ (S, K, C) modulo p, without int64 overflow."""
    out = np.zeros((X.shape[0], X.shape[1], Y.shape[2]), dtype=np.int64)
    for k in range(X.shape[2]):
        out = (out + X[:, :, k, None] * Y[:, None, k, :]) % p
    return out


def word_products_mod_p(mats: np.ndarray, words: Sequence[Word], start: np.ndarray,
                        p: int) -> list[np.ndarray]:
    """``start @ A_{w1} @ ... @ A_{wN}`` for every word, batched over samples.

    ``mats`` has shape (S, d, D, D) and ``start`` shape (S, R, D).  Words are
    processed in sorted order so that shared prefixes are multiplied once.
    """
    order = sorted(range(len(words)), key=lambda i: words[i])
    out: list = [None] * len(words)
    stack: list[np.ndarray] = []
    prev: tuple = ()
    for i in order:
        w = words[i]
        common = 0
        while common < min(len(prev), len(w)) and prev[common] == w[common]:
            common += 1
        del stack[common:]
        for k in range(common, len(w)):
            base = stack[-1] if stack else start
            stack.append(_bmm(base, mats[:, w[k]], p))
        out[i] = stack[-1] if w else start
        prev = w
    return out


class ParametrizedFamily:
    """Base class.  Subclasses set ``d``, ``N``, ``words``, ``param_names``."""

    name = "family"
    d: int
    N: int
    words: list[Word]
    param_names: list[str]

    @property
    def coords(self) -> list[str]:
        return [word_label(w) for w in self.words]

    @property
    def nparams(self) -> int:
        return len(self.param_names)

    def coord_multidegrees(self) -> np.ndarray:
        out = np.zeros((len(self.words), self.d), dtype=np.int64)
        for i, w in enumerate(self.words):
            for x in w:
                out[i, x] += 1
        return out

    def evaluate(self, params: Sequence) -> list:
        raise NotImplementedError

    def evaluate_mod_p(self, params: np.ndarray, p: int) -> np.ndarray:
        raise NotImplementedError

    def symbolic(self) -> list[SparsePolynomial]:
        """Coordinates as integer polynomials in the parameters."""
        gens = [SparsePolynomial.variable(self.param_names, i) for i in range(self.nparams)]
        return self.evaluate(gens)

    def random_params(self, rng: np.random.Generator, count: int, low: int = -10**4,
                      high: int = 10**4) -> np.ndarray:
        return rng.integers(low, high + 1, size=(count, self.nparams), dtype=np.int64)

    def __repr__(self):
        return f"{type(self).__name__}(d={self.d}, N={self.N}, params={self.nparams})"


class _MatrixFamily(ParametrizedFamily):
    D: int

    def _mats_mod_p(self, params: np.ndarray, p: int) -> np.ndarray:
        S = params.shape[0]
        return (params[:, :self.D * self.D * self.d] % p).reshape(S, self.d, self.D, self.D)


class PBFamily(_MatrixFamily):
    """Periodic boundary: entries of A_0, ..., A_{d-1} to necklace traces."""

    name = "pb"

    def __init__(self, D: int, d: int, N: int):
        self.D, self.d, self.N = D, d, N
        self.words = [n.representative for n in necklaces(d, N)]
        self.param_names = [f"a{i}_{r}{c}" for i in range(d) for r in range(D) for c in range(D)]

    def matrices(self, params) -> MatrixTuple:
        return MatrixTuple.from_params(params, self.D, self.d)

    def evaluate(self, params):
        return pb_necklace_values(self.matrices(params), self.N)

    def evaluate_mod_p(self, params, p):
        params = np.asarray(params, dtype=np.int64)
        mats = self._mats_mod_p(params, p)
        S = params.shape[0]
        start = np.broadcast_to(np.eye(self.D, dtype=np.int64), (S, self.D, self.D))
        prods = word_products_mod_p(mats, self.words, start, p)
        return np.stack([np.trace(P, axis1=1, axis2=2) % p for P in prods], axis=1)


class OBFamily(_MatrixFamily):
    """Open boundary, every string a coordinate.

    By default the boundary is fixed to b0 = b1 = e_1; with
    ``free_boundary=True`` the 2D boundary entries are parameters as well.
    """

    name = "ob"

    def __init__(self, D: int, d: int, N: int, free_boundary: bool = False):
        self.D, self.d, self.N = D, d, N
        self.free_boundary = free_boundary
        self.words = list(index_strings(d, N))
        self.param_names = [f"a{i}_{r}{c}" for i in range(d) for r in range(D) for c in range(D)]
        if free_boundary:
            self.param_names += [f"b0_{r}" for r in range(D)] + [f"b1_{r}" for r in range(D)]

    def matrices(self, params) -> tuple[MatrixTuple, BoundaryPair]:
        params = list(params)
        k = self.D * self.D * self.d
        A = MatrixTuple.from_params(params[:k], self.D, self.d)
        if self.free_boundary:
            bd = BoundaryPair(params[k:k + self.D], params[k + self.D:])
        else:
            one = params[0] ** 0
            zero = one - one
            e = [one] + [zero] * (self.D - 1)
            bd = BoundaryPair(e, e)
        return A, bd

    def evaluate(self, params):
        A, bd = self.matrices(params)
        return ob_values(A, bd, self.N)

    def evaluate_mod_p(self, params, p):
        params = np.asarray(params, dtype=np.int64)
        S = params.shape[0]
        mats = self._mats_mod_p(params, p)
        k = self.D * self.D * self.d
        if self.free_boundary:
            b0 = params[:, k:k + self.D] % p
            b1 = params[:, k + self.D:] % p
        else:
            b0 = np.zeros((S, self.D), dtype=np.int64)
            b0[:, 0] = 1
            b1 = b0
        prods = word_products_mod_p(mats, self.words, b0[:, None, :], p)
        cols = []
        for P in prods:
            acc = np.zeros(S, dtype=np.int64)
            for r in range(self.D):
                acc = (acc + P[:, 0, r] * b1[:, r]) % p
            cols.append(acc)
        return np.stack(cols, axis=1)


class RhoFamily(ParametrizedFamily):
    """The five-parameter family (u, v0, b, c0, z) to necklace traces."""

    name = "rho"

    def __init__(self, N: int):
        self.d, self.D, self.N = 2, 2, N
        self.words = [n.representative for n in necklaces(2, N)]
        self.param_names = list(RhoParams.names())

    def matrices(self, params) -> MatrixTuple:
        return build_rho_matrices(RhoParams(*params))

    def evaluate(self, params):
        return pb_necklace_values(self.matrices(params), self.N)

    def evaluate_mod_p(self, params, p):
        params = np.asarray(params, dtype=np.int64) % p
        u, v0, b, c0, z = params.T
        S = params.shape[0]
        T = np.empty((S, 2, 2), dtype=np.int64)
        T[:, 0, 0] = (z + u - c0) % p
        T[:, 0, 1] = (z - b + c0) % p
        T[:, 1, 0] = (z - b - c0) % p
        T[:, 1, 1] = (z + b + c0) % p
        e = np.stack([(u - v0) % p, (u + v0) % p], axis=1)
        A1 = T * e[:, :, None] % p
        mats = np.stack([T, A1], axis=1)
        start = np.broadcast_to(np.eye(2, dtype=np.int64), (S, 2, 2))
        prods = word_products_mod_p(mats, self.words, start, p)
        return np.stack([np.trace(P, axis1=1, axis2=2) % p for P in prods], axis=1)


class PhiFamily(ParametrizedFamily):
    """Trace coordinates (t0, t1, t00, t11, t01) to necklace traces."""

    name = "phi"

    def __init__(self, N: int):
        self.d, self.D, self.N = 2, 2, N
        self.words = [n.representative for n in necklaces(2, N)]
        self.param_names = trace_labels(2)
        self.polys = [trace_word_reduce(w, 2) for w in self.words]

    def evaluate(self, params):
        params = list(params)
        return [q(params, zero=0 * params[0]) for q in self.polys]

    def evaluate_mod_p(self, params, p):
        params = np.asarray(params, dtype=np.int64) % p
        return np.stack([q.evaluate_mod_p(params, p) for q in self.polys], axis=1)

    def symbolic(self):
        return list(self.polys)


def make_family(kind: str, D: int, d: int, N: int) -> ParametrizedFamily:
    if kind == "pb":
        return PBFamily(D, d, N)
    if kind == "ob":
        return OBFamily(D, d, N)
    if kind in ("rho", "phi"):
        if (D, d) != (2, 2):
            raise ValueError(f"the {kind} family needs D = d = 2")
        return RhoFamily(N) if kind == "rho" else PhiFamily(N)
    raise ValueError(f"unknown family {kind!r}")


__all__ = [
    "OBFamily",
    "PBFamily",
    "ParametrizedFamily",
    "PhiFamily",
    "RhoFamily",
    "make_family",
    "word_products_mod_p",
]
