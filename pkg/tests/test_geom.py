from fractions import Fraction

import numpy as np
import pytest

from mpsvar.exactnum import DEFAULT_PRIME, numeric_rank, rank_mod_p
from mpsvar.geom import (Dual, dimension_report, expected_dimension, expected_hypersurface_cases,
                         finite_difference_jacobian, jacobian, jacobian_mod_p, seed_duals)
from mpsvar.parametrize import OBFamily, PBFamily, PhiFamily, RhoFamily
from mpsvar.states import necklace_count


def test_dual_arithmetic():
    x, y = seed_duals([Fraction(3), Fraction(2)])
    f = x * x * y - x / y + 5
    assert f.val == 18 - Fraction(3, 2) + 5
    assert f.grad == (2 * 3 * 2 - Fraction(1, 2), 9 + Fraction(3, 4))
    assert (x ** 3).grad == (27, 0)
    assert isinstance(1 - x, Dual) and (1 - x).grad == (-1, 0)


FAMILIES = [PBFamily(2, 2, 4), PBFamily(3, 2, 3), OBFamily(2, 2, 3),
            OBFamily(2, 2, 3, free_boundary=True), RhoFamily(5), PhiFamily(4)]


@pytest.mark.parametrize("fam", FAMILIES, ids=repr)
def test_dual_jacobian_matches_finite_differences(fam):
    rng = np.random.default_rng(3)
    x = [float(v) for v in rng.uniform(-1.5, 1.5, size=fam.nparams)]
    J = np.array(jacobian(fam, x).to_rows(), dtype=complex)
    F = finite_difference_jacobian(fam, x)
    assert np.max(np.abs(J - F)) <= 1e-6 * max(1.0, np.max(np.abs(J)))


@pytest.mark.parametrize("fam", FAMILIES, ids=repr)
def test_mod_p_jacobian_matches_exact(fam):
    rng = np.random.default_rng(4)
    x = [int(v) for v in rng.integers(-50, 51, size=fam.nparams)]
    J = jacobian(fam, x)
    want = [[int(Fraction(v).numerator * pow(Fraction(v).denominator, -1, DEFAULT_PRIME) % DEFAULT_PRIME)
             for v in row] for row in J.to_rows()]
    assert jacobian_mod_p(fam, x).tolist() == want


def test_mod_p_rank_agrees_with_rational_rank():
    rng = np.random.default_rng(11)
    fam = OBFamily(2, 2, 3)
    for _ in range(20):
        x = [int(v) for v in rng.integers(-10**3, 10**3 + 1, size=fam.nparams)]
        rq = numeric_rank(jacobian(fam, x))
        rp = rank_mod_p(jacobian_mod_p(fam, x), DEFAULT_PRIME)
        assert rp <= rq and rp == rq


def test_open_boundary_rank_at_reference_point():
    assert numeric_rank(jacobian(OBFamily(2, 2, 3), list(range(1, 9)))) == 7


@pytest.mark.parametrize("N", [3, 4, 8, 14])
def test_rho_rank(N):
    rep = dimension_report("rho", 2, 2, N, seed=N)
    assert rep.rank == (4 if N == 3 else 5)
    assert rep.certified  # rank meets min(parameters, ambient)


def test_pb_rank_n3_is_full():
    rep = dimension_report("pb", 2, 2, 3, field="rational")
    assert rep.rank == 4 and rep.ambient == 4 and rep.certified


def test_float_field_rank():
    assert dimension_report("rho", 2, 2, 8, field="float").rank == 5


def test_expected_dimension():
    e = expected_dimension(2, 2, 4)
    assert (e.expected, e.ambient, e.hypersurface) == (5, 6, True)
    assert expected_dimension(2, 2, 3).whole_space
    for N in range(1, 16):
        assert expected_dimension(2, 2, N).ambient == necklace_count(2, N)


def test_hypersurface_cases_binary_count():
    assert expected_hypersurface_cases(15) == [(2, 2, 4), (2, 4, 6), (3, 3, 7), (5, 15, 12),
                                               (3, 71, 13), (2, 296, 14)]


def test_hypersurface_cases_d_ary_count():
    assert expected_hypersurface_cases(8, count="d-ary", max_D=16, max_d=64) == [(2, 2, 4), (8, 3, 6)]
