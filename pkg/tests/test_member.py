import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import matrix_tuples, random_pair, random_rational, rationals
from mpsvar.member import (CERTIFICATES, F_OB223, F_PB224, REFERENCE_CORNER_VALUES,
                           certificate_point, corner_max, corner_state, corner_values,
                           eval_certificate, improper_marginalize, reduced_density)
from mpsvar.parametrize import (BoundaryPair, MatrixTuple, RhoParams, mat_mul, psi_ob, psi_pb,
                                rho)
from mpsvar.states import PureState, SymmetryError, as_word


def test_certificate_shapes():
    assert F_PB224.n_terms == 30 and F_PB224.degree == 6 and F_PB224.multidegree == (12, 12)
    assert F_OB223.n_terms == 22 and F_OB223.degree == 4 and F_OB223.multidegree == (6, 6)
    assert set(CERTIFICATES) == {"pb224", "ob223"}
    assert F_PB224.coords == ("0000", "0001", "0011", "0101", "0111", "1111")


def test_corner_value_and_max():
    assert eval_certificate(F_PB224, corner_state()).value == Fraction(1, 32)
    best, arg = corner_max()
    assert best == Fraction(1, 32)
    assert all(abs(x) == Fraction(1, 4) for x in arg)
    assert len(corner_values()) == 64
    assert sorted(set(REFERENCE_CORNER_VALUES)) == [Fraction(-1, 4), Fraction(1, 4)]


@given(matrix_tuples())
def test_pb224_vanishes_on_periodic_states(A):
    assert eval_certificate(F_PB224, psi_pb(A, 4)).value == 0


@given(st.lists(rationals, min_size=5, max_size=5))
def test_pb224_vanishes_on_rho(p):
    assert eval_certificate(F_PB224, rho(RhoParams(*p), 4)).consistent


@given(matrix_tuples(), st.lists(st.integers(-9, 9), min_size=2, max_size=2))
def test_ob223_vanishes_on_open_states(A, b0):
    s = psi_ob(A, BoundaryPair(b0, [1, 0]), 3)
    assert eval_certificate(F_OB223, s).value == 0


def test_ob223_is_nontrivial(rng):
    pt = [complex(*rng.normal(size=2)) for _ in range(8)]
    assert abs(F_OB223.poly(pt)) > 1e-6


@pytest.mark.parametrize("cert", [F_PB224, F_OB223], ids=lambda c: c.name)
@given(s=rationals.filter(bool), t=rationals.filter(bool),
       pt=st.lists(rationals, min_size=8, max_size=8))
def test_multihomogeneous(cert, s, t, pt):
    a, b = cert.multidegree
    pt = pt[:len(cert.coords)]
    scaled = [v * s ** as_word(c).count(0) * t ** as_word(c).count(1)
              for v, c in zip(pt, cert.coords)]
    assert cert.poly(scaled) == s ** a * t ** b * cert.poly(pt)


def test_float_residual(rng):
    A = MatrixTuple([[[complex(x) for x in r] for r in m] for m in rng.normal(size=(2, 2, 2))])
    r = eval_certificate(F_PB224, psi_pb(A, 4))
    assert r.residual is not None and r.residual <= 1e-8 and r.consistent


def test_certificate_rejects_wrong_shapes():
    with pytest.raises(ValueError):
        eval_certificate(F_PB224, psi_pb(MatrixTuple([[[1]], [[2]]]), 5))
    s = PureState.from_mapping(2, 4, {"0001": Fraction(1)}, zero=Fraction(0))
    with pytest.raises(SymmetryError):
        certificate_point(F_PB224, s)


# marginalization ---------------------------------------------------------------

def _sum_power(A, k):
    S = [[A[0][r][c] + A[1][r][c] for c in range(2)] for r in range(2)]
    out = [[1, 0], [0, 1]]
    for _ in range(k):
        out = mat_mul(out, S)
    return out


@given(matrix_tuples(), st.lists(st.integers(-5, 5), min_size=4, max_size=4),
       st.integers(5, 7), st.data())
def test_marginal_is_open_boundary_state(A, b, N, data):
    # summing outside sites multiplies the boundary vectors by (A_0 + A_1)^k
    k = data.draw(st.integers(0, N - 3))
    b0, b1 = b[:2], b[2:]
    m = improper_marginalize(psi_ob(A, BoundaryPair(b0, b1), N), k)
    L = _sum_power(A, k)
    R = _sum_power(A, N - 3 - k)
    nb0 = [sum(b0[i] * L[i][j] for i in range(2)) for j in range(2)]
    nb1 = [sum(R[i][j] * b1[j] for j in range(2)) for i in range(2)]
    assert m == psi_ob(A, BoundaryPair(nb0, nb1), 3)
    assert F_OB223.poly(certificate_point(F_OB223, m)) == 0


def test_marginalize_is_linear(rng):
    s = psi_pb(random_pair(rng), 5)
    t = psi_pb(random_pair(rng), 5)
    c = random_rational(rng)
    lin = PureState(2, 5, tuple(c * a + b for a, b in zip(s.amplitudes, t.amplitudes)))
    ms, mt = improper_marginalize(s, 1), improper_marginalize(t, 1)
    assert improper_marginalize(lin, 1).amplitudes == \
        tuple(c * a + b for a, b in zip(ms.amplitudes, mt.amplitudes))


def test_marginalize_window_guard():
    s = psi_pb(MatrixTuple([[[1, 0], [0, 1]]] * 2), 4)
    with pytest.raises(ValueError):
        improper_marginalize(s, 2)


# reduced density ---------------------------------------------------------------

def test_density_exact_properties(rng):
    s = psi_pb(random_pair(rng), 5)
    rho_m = reduced_density(s, [1, 2])
    assert rho_m.shape == (4, 4)
    assert (rho_m == rho_m.T).all()
    assert sum(rho_m[i, i] for i in range(4)) == sum(a * a for a in s.amplitudes)


def test_density_global_phase_invariant(rng):
    amps = tuple(complex(*z) for z in rng.normal(size=(16, 2)))
    s = PureState(2, 4, amps)
    phase = cmath.exp(0.7j)
    r1 = reduced_density(s, [0, 1])
    r2 = reduced_density(s.map(lambda a: a * phase), [0, 1])
    assert np.allclose(r1, r2, atol=1e-12)
    assert np.allclose(r1, r1.conj().T)
    assert np.all(np.linalg.eigvalsh(r1) > -1e-12)


def test_density_requires_consecutive_sites():
    s = PureState(2, 3, tuple(Fraction(i) for i in range(8)))
    with pytest.raises(ValueError):
        reduced_density(s, [0, 2])
