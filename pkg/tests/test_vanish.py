import math

import numpy as np
import pytest

from mpsvar.member import F_OB223, F_PB224
from mpsvar.parametrize import OBFamily, PBFamily, RhoFamily
from mpsvar.polynomial import SparsePolynomial
from mpsvar.vanish import (CHECK_RANGE, composed_degree, exact_points,
                           graded_monomials, kernel_search, linear_invariants,
                           new_generator_count, piece_kernel, prime_sequence,
                           split_by_multidegree, verify_candidate)


def same_up_to_sign(p, q):
    p = p.relabel(lambda c: c, q.coords).normalized()
    q = q.normalized()
    return p.terms == q.terms or p.terms == (-q).terms


@pytest.fixture(scope="module")
def pb224_report():
    return kernel_search(PBFamily(2, 2, 4), 6, multidegree=(12, 12), seed=0)


def test_graded_monomial_count():
    degs = PBFamily(2, 2, 4).coord_multidegrees()
    assert graded_monomials(degs, 6).shape == (math.comb(11, 6), 6)
    pieces = split_by_multidegree(graded_monomials(degs, 6), degs)
    assert sum(ex.shape[0] for ex in pieces.values()) == math.comb(11, 6)
    assert all(sum(md) == 24 for md in pieces)


def test_pb224_certificate_is_rediscovered(pb224_report):
    # double entry for the transcribed 30 terms
    assert pb224_report.dim == 1
    assert same_up_to_sign(pb224_report.basis[0], F_PB224.poly)


def test_ob223_certificate_is_rediscovered():
    rep = kernel_search(OBFamily(2, 2, 3), 4, seed=0)
    assert rep.dim == 1
    assert same_up_to_sign(rep.basis[0], F_OB223.poly)


def test_basis_vanishes_at_fresh_points(pb224_report):
    fam = PBFamily(2, 2, 4)
    q = pb224_report.basis[0]
    M = graded_monomials(fam.coord_multidegrees(), 6, (12, 12)).shape[0]
    count = 3 * (math.ceil(1.25 * M) + 10)
    pts = exact_points(fam, count, np.random.default_rng(2024))
    assert CHECK_RANGE == 100
    assert all(q(v) == 0 for v in pts)


def test_kernel_stabilizes_monotonically():
    fam = PBFamily(2, 2, 4)
    degs = fam.coord_multidegrees()
    ex = split_by_multidegree(graded_monomials(degs, 6), degs)[(12, 12)]
    for p in prime_sequence(2):
        pk = piece_kernel(fam, ex, p, seed=3, md=(12, 12))
        dims = [d for _, d in pk.history]
        assert all(b <= a for a, b in zip(dims, dims[1:]))
        assert dims[-1] == dims[-2] == dims[-3] == 1
        assert pk.history[0][0] == math.ceil(1.25 * ex.shape[0]) + 10


def test_undersampling_overestimates_kernel():
    fam = PBFamily(2, 2, 4)
    degs = fam.coord_multidegrees()
    ex = split_by_multidegree(graded_monomials(degs, 6), degs)[(12, 12)]
    pk = piece_kernel(fam, ex, prime_sequence(1)[0], seed=0, md=(12, 12), samples=5)
    assert pk.history[0][1] >= pk.dim


@pytest.mark.parametrize("fam,degree", [(PBFamily(2, 2, 4), 6), (PBFamily(2, 2, 5), 4),
                                        (OBFamily(2, 2, 3), 4)], ids=repr)
def test_stratification_is_exhaustive(fam, degree):
    strat = kernel_search(fam, degree, seed=1, exact=False)
    flat = kernel_search(fam, degree, seed=1, exact=False, stratify=False)
    assert strat.dim == flat.dim


def test_two_primes_agree(pb224_report):
    for pks in pb224_report.residue_bases.values():
        assert len({pk.prime for pk in pks}) == 2
        assert len({pk.dim for pk in pks}) == 1


def test_report_summary(pb224_report):
    s = pb224_report.summary()
    assert s["dimension"] == 1 and s["multidegree"] == [12, 12] and s["seed"] == 0


def test_kernel_search_needs_two_primes():
    with pytest.raises(ValueError):
        kernel_search(PBFamily(2, 2, 4), 1, n_primes=1)


@pytest.mark.parametrize("N,dim,refl,nontrivial", [(6, 1, 1, 0), (7, 2, 2, 0), (8, 7, 6, 1),
                                                    (9, 20, 14, 6)])
def test_linear_invariant_counts(N, dim, refl, nontrivial):
    li = linear_invariants(N)
    assert (li.kernel_dim, li.reflection_dim, li.nontrivial) == (dim, refl, nontrivial)


def test_linear_invariant_n6_is_a_reflection_difference():
    li = linear_invariants(6)
    q = li.basis[0]
    assert q.to_string() in ("psi001011 - psi001101", "-psi001011 + psi001101")


def test_generator_counts_pb224():
    reps = [kernel_search(PBFamily(2, 2, 4), k, seed=0, exact=False) for k in range(1, 7)]
    g = new_generator_count(reps)
    assert g.counts == {1: 0, 2: 0, 3: 0, 4: 0, 5: 0, 6: 1}
    with pytest.raises(ValueError):
        new_generator_count([reps[0], reps[2]])


def test_verify_candidate_symbolic_and_witness():
    fam = OBFamily(2, 2, 3)
    v = verify_candidate(F_OB223.poly, fam, mode="symbolic")
    assert v.ok and v.status == "symbolic"
    bad = SparsePolynomial.variable(F_OB223.coords, 0)
    w = verify_candidate(bad, fam, mode="symbolic")
    assert not w.ok and w.witness["value_mod_p"] != 0
    assert set(w.witness) == {"prime", "params", "value_mod_p"}


def test_verify_candidate_modular():
    v = verify_candidate(F_PB224.poly, PBFamily(2, 2, 4), mode="modular")
    assert v.ok and v.status == "modular"
    v = verify_candidate(F_PB224.poly, RhoFamily(4), mode="modular", seed=5)
    assert v.ok


def test_composed_degree():
    q = SparsePolynomial.parse("x^2*y + y^3", ["x", "y"])
    assert composed_degree(q, [4, 1]) == 9

