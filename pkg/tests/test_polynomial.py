from fractions import Fraction

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from mpsvar.polynomial import SparsePolynomial

COORDS = ("x", "y", "z")

polys = st.dictionaries(
    st.tuples(*[st.integers(0, 3)] * 3),
    st.fractions(min_value=-10, max_value=10, max_denominator=6),
    max_size=6,
).map(lambda t: SparsePolynomial(COORDS, t))
points = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=3, max_size=3)


def test_parse_and_print():
    q = SparsePolynomial.parse("psi0011^2 - 2*psi0001*psi0111 + 1/2")
    assert q.degree() == 2
    point = {"0001": 1, "0011": 3, "0111": 2}
    assert q([point[c] for c in q.coords]) == q(point) == Fraction(11, 2)
    assert SparsePolynomial.parse(q.to_string(), q.coords).terms == q.terms
    assert "psi0011^2" in q.to_string()


@given(polys, polys, points)
def test_ring_operations_commute_with_evaluation(p, q, x):
    assert (p + q)(x) == p(x) + q(x)
    assert (p * q)(x) == p(x) * q(x)
    assert (p - q)(x) == p(x) - q(x)


@given(polys)
def test_json_round_trip(p):
    assert SparsePolynomial.from_json(p.to_json()).terms == p.terms


@given(polys)
def test_text_round_trip(p):
    assert SparsePolynomial.parse(p.to_string(), COORDS).terms == p.terms


@given(polys)
def test_normalized_is_canonical(p):
    n = p.normalized()
    assert (3 * p).normalized().terms == n.terms
    assert (-p).normalized().terms == n.terms
    if n.terms:
        assert all(c.denominator == 1 for c in n.terms.values())
        assert n.leading()[1] > 0


@given(polys, st.lists(st.integers(-50, 50), min_size=3, max_size=3))
def test_mod_p_evaluation_matches_exact(p, x):
    P = 1_000_003
    got = p.evaluate_mod_p(np.array([x], dtype=np.int64), P)[0]
    exact = p([Fraction(v) for v in x])
    assert got == exact.numerator * pow(exact.denominator, -1, P) % P


def test_relabel_merges_terms():
    q = SparsePolynomial.parse("psi01 - psi10 + psi00")
    canon = q.relabel(lambda l: "".join(sorted(l)))
    assert canon.coords == ("00", "01")
    assert canon.terms == {(1, 0): 1}


def test_compose():
    q = SparsePolynomial.parse("x*y + 1")
    t = SparsePolynomial.variable(["t"], 0)
    r = q.compose([t, t + 1])
    assert r.terms == (t * t + t + 1).terms
