from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mpsvar.exactnum import (COMPLEX_FLOAT, DEFAULT_PRIME, RATIONAL, SECOND_PRIME, DenseMatrix,
                             KindMismatchError, Mod, QuadExt, SingularMatrixError, adjoin_sqrt,
                             common_kind, crt_pair, exact_rank, exact_sqrt, is_prime, kind_of,
                             mat_inverse, numeric_rank, prime_field, rank_mod_p,
                             rational_reconstruct, rref_kernel, rref_mod_p)

matrices = st.integers(1, 5).flatmap(lambda r: st.integers(1, 6).flatmap(
    lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c),
                       min_size=r, max_size=r)))


def test_default_primes():
    assert DEFAULT_PRIME == 2**31 - 1 and is_prime(DEFAULT_PRIME)
    assert is_prime(SECOND_PRIME) and SECOND_PRIME != DEFAULT_PRIME
    assert not is_prime(2**31 - 3)


def test_mod_arithmetic():
    a, b = Mod(3, 7), Mod(5, 7)
    assert a + b == Mod(1, 7)
    assert a * b == 1
    assert a / b == Mod(2, 7)
    assert 1 - a == Mod(5, 7)
    assert a ** 6 == 1
    assert Mod(-1, 7) == 6


def test_kinds():
    assert kind_of(Fraction(1, 2)) == RATIONAL
    assert kind_of(1.5j) == COMPLEX_FLOAT
    assert kind_of(Mod(1, 5)) == prime_field(5)
    assert common_kind([1, Fraction(1, 2)]) == RATIONAL
    with pytest.raises(KindMismatchError):
        common_kind([Fraction(1), 1.0])


def test_exact_sqrt_and_tower():
    assert exact_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert exact_sqrt(Fraction(2)) is None
    r2 = adjoin_sqrt(Fraction(2))
    assert isinstance(r2, QuadExt) and r2 * r2 == 2
    # nested: sqrt(1 + sqrt 2)
    s = adjoin_sqrt(1 + r2)
    assert s * s == 1 + r2
    # mixing depths promotes the shallower element
    assert (s + r2) - s == r2
    assert abs(complex(s) - (1 + 2**0.5) ** 0.5) < 1e-12


def test_quadext_inverse():
    r3 = adjoin_sqrt(Fraction(3))
    x = 2 + 5 * r3
    assert x * (1 / x) == 1
    assert str(QuadExt(Fraction(1), Fraction(0), Fraction(3))) == "1"


def test_rational_reconstruction():
    m = DEFAULT_PRIME * SECOND_PRIME
    for q in (Fraction(-7, 3), Fraction(12345, 678), Fraction(0)):
        a = q.numerator * pow(q.denominator, -1, m) % m
        assert rational_reconstruct(a, m) == q


def test_crt_pair():
    r, m = crt_pair(2, 5, 3, 7)
    assert m == 35 and r % 5 == 2 and r % 7 == 3


def test_rref_kernel_example():
    # x + y + z = 0, y - z = 0
    ker = rref_kernel([[Fraction(1), 1, 1], [0, 1, -1]])
    assert ker == [[Fraction(-2), Fraction(1), Fraction(1)]]


@given(matrices)
def test_rank_nullity(rows):
    m = DenseMatrix.from_rows([[Fraction(x) for x in r] for r in rows])
    assert exact_rank(m) + len(rref_kernel(m)) == m.cols
    for v in rref_kernel(m):
        assert all(x == 0 for x in m.apply(v))


@given(matrices, st.randoms(use_true_random=False))
def test_rref_kernel_row_order_independent(rows, r):
    m = [[Fraction(x) for x in row] for row in rows]
    shuffled = list(m)
    r.shuffle(shuffled)
    ker = rref_kernel(m)
    assert rref_kernel(shuffled) == ker
    # redundant rows (sums of existing ones) leave the echelon basis unchanged
    extra = [[a + b for a, b in zip(m[0], m[-1])], [0] * len(m[0])]
    assert rref_kernel(m + extra) == ker


@given(matrices)
def test_mod_p_rank_at_most_rational(rows):
    a = np.array(rows, dtype=np.int64)
    assert rank_mod_p(a, 5) <= numeric_rank([[Fraction(x) for x in r] for r in rows])
    assert rank_mod_p(a, DEFAULT_PRIME) == numeric_rank([[Fraction(x) for x in r] for r in rows])


def test_rref_mod_p_pivots():
    rref, piv = rref_mod_p([[2, 4], [1, 2]], 7)
    assert piv == [0] and rref.tolist() == [[1, 2]]


def test_float_rank_svd():
    a = np.array([[1, 2], [2, 4.0 + 1e-13]], dtype=complex)
    assert numeric_rank(a) == 1
    assert numeric_rank(np.eye(3, dtype=complex)) == 3


def test_rref_kernel_rejects_floats():
    with pytest.raises(KindMismatchError):
        rref_kernel([[1.0 + 0j, 2.0 + 0j]])


def test_mat_inverse():
    m = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]]
    inv = mat_inverse(m)
    assert inv == [[1, -1], [-1, 2]]
    with pytest.raises(SingularMatrixError):
        mat_inverse([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]])
