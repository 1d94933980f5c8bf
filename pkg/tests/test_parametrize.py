from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import matrix_tuples, random_pair, random_rational, rationals, small_ints
from mpsvar.exactnum import QuadExt
from mpsvar.parametrize import (BoundaryPair, MatrixTuple, NonGenericError, OBFamily, PBFamily,
                                PhiFamily, RealizationError, RhoFamily, RhoParams,
                                build_rho_matrices, gauge_conjugate, generator_count,
                                gl_action_params, gl_action_state, make_family, pb_normal_form,
                                phi_trace, psi_ob, psi_pb, realize_trace_coords, rho,
                                trace_coords, trace_word_reduce, word_trace)
from mpsvar.states import cyclic_witness, is_reflection_symmetric

invertible = st.lists(st.lists(small_ints, min_size=2, max_size=2), min_size=2, max_size=2) \
    .filter(lambda P: P[0][0] * P[1][1] != P[0][1] * P[1][0])


def test_identity_matrices_give_constant_state():
    s = psi_pb(MatrixTuple([[[1, 0], [0, 1]]] * 2), 3)
    assert set(s.amplitudes) == {2}


def test_diagonal_projectors():
    s = psi_pb(MatrixTuple([[[1, 0], [0, 0]], [[0, 0], [0, 1]]]), 4)
    assert s["0000"] == s["1111"] == 1
    assert all(s[w] == 0 for w in ("0001", "0101", "0111"))


def test_open_boundary_hand_example():
    A = MatrixTuple([[[1, 1], [0, 1]], [[1, 0], [0, 1]]])
    s = psi_ob(A, BoundaryPair.corner(2), 2)
    assert s.amplitudes == (1, 1, 1, 1)
    s = psi_ob(A, BoundaryPair([1, 0], [0, 1]), 2)
    assert s["00"] == 2 and s["01"] == s["10"] == 1 and s["11"] == 0


@given(matrix_tuples(), st.integers(1, 7))
def test_periodic_states_are_cyclic(A, N):
    assert cyclic_witness(psi_pb(A, N)) is None


@given(matrix_tuples(), invertible)
def test_gauge_invariance(A, P):
    assert psi_pb(gauge_conjugate(A, P), 5) == psi_pb(A, 5)


def test_gauge_invariance_fifty_trials(rng):
    for _ in range(50):
        A, P = random_pair(rng), random_pair(rng)[0]
        if P[0][0] * P[1][1] == P[0][1] * P[1][0]:
            continue
        assert psi_pb(gauge_conjugate(A, P), 5) == psi_pb(A, 5)


def test_gauge_conjugate_example():
    A = MatrixTuple([[[0, 1], [1, 0]]])
    B = gauge_conjugate(A, [[2, 0], [0, Fraction(1, 2)]])
    assert B[0] == ((0, 4), (Fraction(1, 4), 0))


@given(matrix_tuples(), st.lists(st.lists(small_ints, min_size=2, max_size=2), min_size=2, max_size=2))
def test_gl_equivariance(A, g):
    for N in (3, 4):
        assert gl_action_state(g, psi_pb(A, N)) == psi_pb(gl_action_params(g, A), N)


def test_gl_equivariance_three_letters(rng):
    A = MatrixTuple(rng.integers(-3, 4, size=(3, 2, 2)).tolist())
    g = rng.integers(-3, 4, size=(3, 3)).tolist()
    assert gl_action_state(g, psi_pb(A, 3)) == psi_pb(gl_action_params(g, A), 3)


@given(matrix_tuples(), st.integers(3, 8))
def test_reflection_symmetry_for_two_by_two(A, N):
    assert is_reflection_symmetric(psi_pb(A, N))[0]


def test_reflection_can_fail_for_larger_bond():
    rng = np.random.default_rng(5)
    A = MatrixTuple(rng.integers(-3, 4, size=(2, 3, 3)).tolist())
    assert not is_reflection_symmetric(psi_pb(A, 6))[0]


def test_hidden_markov_embedding():
    # A_j = T diag(E[:, j]); b0 = start distribution, b1 = ones
    T = [[Fraction(1, 3), Fraction(2, 3)], [Fraction(3, 4), Fraction(1, 4)]]
    E = [[Fraction(1, 5), Fraction(4, 5)], [Fraction(1, 2), Fraction(1, 2)]]
    A = MatrixTuple([[[T[r][c] * E[c][j] for c in range(2)] for r in range(2)] for j in range(2)])
    s = psi_ob(A, BoundaryPair([Fraction(2, 7), Fraction(5, 7)], [1, 1]), 5)
    assert all(a >= 0 for a in s.amplitudes)
    assert sum(s.amplitudes) == 1


# rho and the normal form -------------------------------------------------

def test_rho_degenerate_example():
    s = rho(RhoParams(0, 0, 0, 0, 1), 5)
    assert s["00000"] == 32
    assert sum(1 for a in s.amplitudes if a) == 1


def test_rho_is_psi_pb_of_its_matrices(rng):
    p = RhoParams(*(random_rational(rng) for _ in range(5)))
    assert rho(p, 6) == psi_pb(build_rho_matrices(p), 6)


def test_normal_form_example():
    p = pb_normal_form([[1, 0], [0, 1]], [[2, 0], [0, 3]], mode="exact")
    assert p.as_tuple() == (Fraction(5, 2), Fraction(1, 2), Fraction(-3, 2), Fraction(2), Fraction(1, 2))


def test_normal_form_round_trip(rng):
    done = 0
    while done < 20:
        A = random_pair(rng)
        try:
            pe = pb_normal_form(A[0], A[1], mode="exact", verify_N=None)
            pf = pb_normal_form(A[0], A[1], mode="float", verify_N=None)
        except NonGenericError:
            continue
        done += 1
        for N in (4, 6):
            want = psi_pb(A, N).amplitudes
            assert rho(pe, N).amplitudes == want
            got = rho(pf, N).amplitudes
            scale = max(1.0, max(abs(w) for w in want))
            assert max(abs(complex(g) - w) for g, w in zip(got, want)) <= 1e-8 * scale


@pytest.mark.parametrize("A0,A1", [
    ([[1, 0], [0, 0]], [[1, 2], [3, 4]]),      # singular A_0
    ([[1, 0], [0, 1]], [[2, 0], [0, 2]]),      # repeated eigenvalue
])
def test_normal_form_rejects_non_generic(A0, A1):
    with pytest.raises(NonGenericError):
        pb_normal_form(A0, A1, mode="exact")


# trace algebra ------------------------------------------------------------

def test_generator_counts():
    assert [generator_count(d) for d in range(1, 7)] == [2, 5, 10, 18, 30, 47]


@given(matrix_tuples(elements=rationals), st.lists(st.integers(0, 1), min_size=1, max_size=9))
def test_trace_word_reduce_matches_direct_trace(A, w):
    q = trace_word_reduce(tuple(w), 2)
    assert q(list(trace_coords(A).values)) == word_trace(A, w)


@given(matrix_tuples(d=3, elements=rationals), st.lists(st.integers(0, 2), min_size=1, max_size=6))
def test_trace_word_reduce_three_letters(A, w):
    q = trace_word_reduce(tuple(w), 3)
    assert q(list(trace_coords(A).values)) == word_trace(A, w)


def test_trace_reduce_length_guard():
    with pytest.raises(ValueError):
        trace_word_reduce((0, 1) * 9, 2)


@given(matrix_tuples())
def test_realization_reproduces_the_state(A):
    tc = trace_coords(A)
    try:
        B = realize_trace_coords(tc)
    except RealizationError:
        return
    assert trace_coords(B).values == tc.values
    assert phi_trace(tc, 5) == psi_pb(A, 5) == psi_pb(B, 5)


def test_realization_adjoins_square_root():
    A = MatrixTuple([[[1, 2], [3, 4]], [[0, 1], [1, 1]]])
    B = realize_trace_coords(trace_coords(A))
    assert any(isinstance(x, QuadExt) for m in B.mats for r in m for x in r)
    assert psi_pb(B, 4) == psi_pb(A, 4)


def test_realization_rejects_degenerate():
    A = MatrixTuple([[[1, 0], [0, 1]], [[0, 1], [1, 0]]])
    with pytest.raises(RealizationError):
        realize_trace_coords(trace_coords(A))


# families -----------------------------------------------------------------

FAMILIES = [PBFamily(2, 2, 5), PBFamily(2, 3, 3), OBFamily(2, 2, 4), OBFamily(2, 2, 3, free_boundary=True),
            RhoFamily(5), PhiFamily(5)]


@pytest.mark.parametrize("fam", FAMILIES, ids=repr)
def test_family_mod_p_matches_exact(fam):
    P = 2**31 - 1
    rng = np.random.default_rng(9)
    params = fam.random_params(rng, 3)
    got = fam.evaluate_mod_p(params, P)
    for row, x in zip(got, params):
        exact = fam.evaluate([Fraction(int(v)) for v in x])
        want = [int(Fraction(v).numerator * pow(Fraction(v).denominator, -1, P) % P) for v in exact]
        assert [int(v) for v in row] == want


@pytest.mark.parametrize("fam", [PBFamily(2, 2, 4), RhoFamily(4), OBFamily(2, 2, 3)], ids=repr)
def test_family_symbolic_matches_evaluate(fam):
    x = list(range(1, fam.nparams + 1))
    assert [q(x) for q in fam.symbolic()] == fam.evaluate(x)


def test_make_family():
    assert isinstance(make_family("rho", 2, 2, 4), RhoFamily)
    assert make_family("ob", 2, 2, 3).nparams == 8
    with pytest.raises(ValueError):
        make_family("nope", 2, 2, 3)
