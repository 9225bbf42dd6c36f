import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from schubtan.exactlinalg import Field, Q, span
from schubtan.flags import (
    almost_transverse_perm,
    flags_with_sigma,
    inversions,
    longest,
    random_flags_with_sigma,
    standard_flag,
)
from schubtan.oracle import tangent_dim_oracle
from schubtan.schubert import (
    PreconditionError,
    SchubertIndex,
    coxeter_bound,
    expected_dim,
    grass_dim,
    in_both_circ,
    in_sigma,
    in_sigma_circ,
    induced_flag,
    intersection_nonempty,
    jump_witness,
    sample_intersection_point,
    sample_schubert_point,
    sample_sigma_circ_point,
    schubert_indices,
    tangent_dim_pair_formula,
    tangent_dim_single,
    vanishing_sequence,
)

from conftest import grassmannian_points

F = Field(1009)


def gaussian_binomial(n, k, q):
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


@st.composite
def pair_instances(draw, max_d=5, max_r=2, sigmas=None):
    d = draw(st.integers(2, max_d))
    r = draw(st.integers(0, min(max_r, d - 2)))
    a = draw(st.sampled_from(schubert_indices(d, r)))
    b = draw(st.sampled_from(schubert_indices(d, r)))
    sigma = draw(sigmas(d) if sigmas else st.permutations(list(range(1, d + 1))).map(tuple))
    seed = draw(st.integers(0, 2**32 - 1))
    return d, r, a, b, sigma, seed


# -- indices -------------------------------------------------------------------------


def test_schubert_index_basics():
    a = SchubertIndex(6, (0, 2, 3, 5))
    assert a.r == 3 and len(a) == 4
    assert a.active == (1, 3)
    assert a.codim == 0 + 1 + 1 + 2
    assert SchubertIndex(6, (1, 2)).active == (0,)
    assert SchubertIndex.minimal(5, 2).seq == (0, 1, 2)
    assert a.dominates(SchubertIndex(6, (0, 1, 3, 4)))
    assert not SchubertIndex(6, (0, 1, 3, 4)).dominates(a)


@pytest.mark.parametrize("seq", [(1, 1), (2, 1), (-1, 2), (0, 4)])
def test_schubert_index_rejects(seq):
    with pytest.raises(ValueError):
        SchubertIndex(4, seq)


def test_index_enumeration_and_dimensions():
    assert len(schubert_indices(5, 1)) == 10
    assert grass_dim(5, 1) == 6
    a, b = SchubertIndex(4, (0, 2)), SchubertIndex(4, (0, 2))
    assert expected_dim(a, b) == 4 - 1 - 1


# -- membership ----------------------------------------------------------------------


def test_vanishing_sequence_of_coordinate_subspace():
    p = standard_flag(F, 5)
    lam = span(F, [(1, 0, 0, 0, 0), (0, 0, 1, 0, 0), (0, 0, 0, 0, 1)], 5)
    assert vanishing_sequence(lam, p).seq == (0, 2, 4)
    lam = span(F, [(1, 0, 1, 0, 0), (0, 0, 1, 0, 0)], 5)
    assert vanishing_sequence(lam, p).seq == (0, 2)


@pytest.mark.parametrize("d,r", [(3, 0), (3, 1), (4, 1)])
def test_membership_against_definition(d, r):
    fld = Field(2)
    p = standard_flag(fld, d)
    pts = list(grassmannian_points(fld, d, r + 1))
    assert len(pts) == gaussian_binomial(d, r + 1, 2)
    for a in schubert_indices(d, r):
        for lam in pts:
            direct = all((lam & p[a[i]]).dim >= r + 1 - i for i in range(r + 1))
            assert in_sigma(lam, p, a) == direct
            assert in_sigma(lam, p, a, active_only=True) == direct
            if direct:
                circ = all((lam & p[a[i]]).dim == r + 1 - i for i in a.active if i > 0)
                assert in_sigma_circ(lam, p, a) == circ
                assert vanishing_sequence(lam, p).dominates(a)


def test_in_sigma_circ_requires_membership():
    p = standard_flag(F, 3)
    lam = span(F, [(1, 0, 0)], 3)
    with pytest.raises(PreconditionError):
        in_sigma_circ(lam, p, SchubertIndex(3, (1,)))


@pytest.mark.parametrize("d,r", [(3, 0), (3, 1), (4, 0), (4, 1), (4, 2)])
@pytest.mark.parametrize("q", [2, 3])
def test_intersection_nonempty_against_enumeration(d, r, q):
    fld = Field(q)
    pts = list(grassmannian_points(fld, d, r + 1))
    sigmas = [longest(d), tuple(range(1, d + 1)), almost_transverse_perm(d, 1), (2, 1) + tuple(range(3, d + 1))]
    for sigma in sigmas:
        p, qf = flags_with_sigma(fld, sigma)
        for a in schubert_indices(d, r):
            for b in schubert_indices(d, r):
                brute = any(in_sigma(l, p, a) and in_sigma(l, qf, b) for l in pts)
                assert intersection_nonempty(p, a, qf, b) == brute, (sigma, a, b)


# -- tangent spaces ------------------------------------------------------------------


def test_schubert_divisor_in_lines_of_p3():
    """Lines meeting a fixed line: singular only at that line."""
    p = standard_flag(F, 4)
    a = SchubertIndex(4, (0, 2))
    assert tangent_dim_single(p[2], p, a) == 4
    lam = span(F, [(1, 0, 0, 0), (0, 0, 1, 0)], 4)
    assert tangent_dim_single(lam, p, a) == 3
    assert tangent_dim_oracle(p[2], [(p, a)]) == 4
    assert tangent_dim_oracle(lam, [(p, a)]) == 3


@given(st.integers(2, 6), st.data())
def test_single_formula_matches_oracle(d, data):
    r = data.draw(st.integers(0, min(2, d - 2)))
    a = data.draw(st.sampled_from(schubert_indices(d, r)))
    seed = data.draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    p, _ = random_flags_with_sigma(F, longest(d), rng)
    lam = sample_schubert_point(p, a, rng)
    assert in_sigma(lam, p, a)
    formula = tangent_dim_single(lam, p, a)
    assert formula == tangent_dim_oracle(lam, [(p, a)])
    if in_sigma_circ(lam, p, a):
        assert formula == grass_dim(d, r) - a.codim
    else:
        assert formula > grass_dim(d, r) - a.codim


def test_single_formula_rejects_outside_point():
    p = standard_flag(F, 3)
    with pytest.raises(PreconditionError):
        tangent_dim_single(span(F, [(1, 0, 0)], 3), p, SchubertIndex(3, (1,)))


@given(pair_instances())
def test_pair_formula_matches_oracle(inst):
    d, r, a, b, sigma, seed = inst
    rng = random.Random(seed)
    p, q = random_flags_with_sigma(F, sigma, rng)
    lam = sample_sigma_circ_point(p, a, q, b, rng)
    if lam is None:
        return
    rep = tangent_dim_pair_formula(lam, p, a, q, b)
    assert rep.dim == tangent_dim_oracle(lam, [(p, a), (q, b)])
    assert rep.dim <= coxeter_bound(lam, p, a, q, b)
    assert rep.rho_minus_1 == expected_dim(a, b)
    assert rep.dim == rep.rho_minus_1 + sum(t.codim for t in rep.terms)


@given(pair_instances(sigmas=lambda d: st.just(longest(d))))
def test_transverse_pairs_have_expected_dimension(inst):
    d, r, a, b, sigma, seed = inst
    rng = random.Random(seed)
    p, q = random_flags_with_sigma(F, sigma, rng)
    lam = sample_sigma_circ_point(p, a, q, b, rng)
    if lam is None:
        return
    rep = tangent_dim_pair_formula(lam, p, a, q, b)
    assert rep.flag_class == "transverse"
    assert rep.dim == rep.rho_minus_1
    assert not rep.jump


@given(pair_instances(sigmas=lambda d: st.integers(1, d - 1).map(lambda t: almost_transverse_perm(d, t))))
def test_almost_transverse_jump_iff_conditions(inst):
    d, r, a, b, sigma, seed = inst
    rng = random.Random(seed)
    p, q = random_flags_with_sigma(F, sigma, rng)
    lam = sample_sigma_circ_point(p, a, q, b, rng)
    if lam is None:
        return
    rep = tangent_dim_pair_formula(lam, p, a, q, b)
    assert rep.dim in (rep.rho_minus_1, rep.rho_minus_1 + 1)
    assert rep.jump == (rep.dim == rep.rho_minus_1 + 1)


def test_jump_on_crossing_lines():
    """Lines through the crossing point of two lines in the plane they span."""
    p, q = flags_with_sigma(F, almost_transverse_perm(4, 2))
    a = b = SchubertIndex(4, (0, 2))
    x = (p[2] & q[2]).rows[0]
    line = span(F, [x], 4)
    u = next(v for v in p[2].rows if v not in line)
    w = next(v for v in q[2].rows if v not in line)
    lam = span(F, [x, [s + t for s, t in zip(u, w)]], 4)
    assert in_both_circ(lam, p, a, q, b)
    assert jump_witness(lam, p, a, q, b) == (1, 1, 2, 2)
    rep = tangent_dim_pair_formula(lam, p, a, q, b)
    assert (rep.dim, rep.rho_minus_1, rep.jump) == (3, 2, True)


def test_identical_flags_equality_witness():
    p = standard_flag(F, 2)
    a = SchubertIndex(2, (1,))
    lam = p[1]
    rep = tangent_dim_pair_formula(lam, p, a, p, a)
    assert rep.dim == 0 == coxeter_bound(lam, p, a, p, a)


def test_coxeter_bound_value():
    p, q = flags_with_sigma(F, (2, 1, 4, 3))
    a = b = SchubertIndex.minimal(4, 1)
    lam = span(F, [(1, 0, 0, 0), (0, 0, 1, 0)], 4)
    assert coxeter_bound(lam, p, a, q, b) == expected_dim(a, b) + inversions((3, 4, 1, 2))


def test_pair_formula_rejects_boundary_point():
    p = standard_flag(F, 4)
    q = standard_flag(F, 4)
    a = SchubertIndex(4, (0, 2))
    with pytest.raises(PreconditionError):
        tangent_dim_pair_formula(p[2], p, a, q, a)


def test_induced_flag_dimensions():
    p = standard_flag(F, 4)
    lam = span(F, [(1, 0, 0, 0), (0, 0, 1, 1)], 4)
    ind = induced_flag(lam, p)
    assert ind.d == 2
    assert [ind[i].dim for i in range(3)] == [2, 1, 0]


# -- sampling ------------------------------------------------------------------------


def test_sampler_is_deterministic():
    p, q = random_flags_with_sigma(F, almost_transverse_perm(5, 2), random.Random(1))
    a = b = SchubertIndex(5, (0, 2))
    assert sample_sigma_circ_point(p, a, q, b, 7) == sample_sigma_circ_point(p, a, q, b, 7)


def test_sampler_returns_none_on_empty_intersection():
    p, q = flags_with_sigma(F, longest(2))
    a = SchubertIndex(2, (1,))
    assert not intersection_nonempty(p, a, q, a)
    assert sample_intersection_point(p, a, q, a, 0) is None


@given(pair_instances(max_d=4), st.sampled_from([0.0, 0.5, 1.0]))
def test_sampled_points_lie_in_both_varieties(inst, sparse):
    d, r, a, b, sigma, seed = inst
    p, q = flags_with_sigma(Q, sigma)
    lam = sample_intersection_point(p, a, q, b, seed, sparse=sparse)
    if lam is None:
        assert not intersection_nonempty(p, a, q, b)
        return
    assert lam.dim == r + 1
    assert in_sigma(lam, p, a) and in_sigma(lam, q, b)
