import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from schubtan.exactlinalg import Field, Q, AmbientMismatch, contains_vector, full_space, random_invertible, span
from schubtan.flags import (
    Flag,
    adjacent_transposition,
    almost_transverse_index,
    almost_transverse_perm,
    classify,
    compose,
    dim_table,
    flag_from_basis,
    flag_from_chain,
    flags_with_sigma,
    general_perms,
    inverse,
    inversions,
    is_transverse,
    longest,
    opposite_flag,
    random_flags_with_sigma,
    relative_position,
    standard_flag,
)

F = Field(1009)


def perms(max_d=6):
    return st.integers(1, max_d).flatmap(lambda d: st.permutations(list(range(1, d + 1))).map(tuple))


def count_table(sigma):
    d = len(sigma)
    return [[sum(1 for l in range(i + 1, d + 1) if sigma[l - 1] > j) for j in range(d + 1)] for i in range(d + 1)]


# -- permutations ------------------------------------------------------------------


@given(perms())
def test_inversions_invariants(sigma):
    d = len(sigma)
    assert inversions(sigma) == inversions(inverse(sigma))
    assert inversions(compose(longest(d), sigma)) == d * (d - 1) // 2 - inversions(sigma)


@given(perms(), st.data())
def test_compose_associative_and_inverse(sigma, data):
    d = len(sigma)
    tau = data.draw(st.permutations(list(range(1, d + 1))).map(tuple))
    ident = tuple(range(1, d + 1))
    assert compose(sigma, inverse(sigma)) == ident
    assert compose(compose(sigma, tau), sigma) == compose(sigma, compose(tau, sigma))


def test_inversions_rejects_non_permutation():
    with pytest.raises(ValueError):
        inversions((1, 1, 2))


def test_almost_transverse_perm_is_one_below_longest():
    for d in range(2, 7):
        for t in range(1, d):
            s = almost_transverse_perm(d, t)
            assert inversions(s) == d * (d - 1) // 2 - 1
            assert s == compose(longest(d), adjacent_transposition(d, t))


def test_general_perms_excludes_special_classes():
    assert general_perms(2) == []
    g3 = general_perms(3)
    assert len(g3) == 6 - 1 - 1 - 2
    assert (2, 1, 3) in g3


# -- flags ------------------------------------------------------------------------------


def test_flag_steps_have_codimension_index():
    p = standard_flag(F, 4)
    assert [p[i].dim for i in range(5)] == [4, 3, 2, 1, 0]
    assert opposite_flag(F, 4)[3].rows == ((1, 0, 0, 0),)


def test_flag_from_basis_rejects_dependent_vectors():
    with pytest.raises(ValueError):
        flag_from_basis(F, [(1, 0), (2, 0)])


def test_flag_validation():
    p = standard_flag(F, 3)
    with pytest.raises(ValueError):
        Flag(F, 3, p.steps[:-1])
    with pytest.raises(ValueError):
        Flag(F, 3, (p[0], span(F, [(1, 0, 0), (0, 1, 0)], 3), p[2], p[3]))


def test_flag_from_chain_collapses_repeats():
    p = standard_flag(F, 3)
    q = flag_from_chain(F, 3, [p[0], p[1], p[1], p[2], p[3], p[3]])
    assert q == p


# -- relative position -----------------------------------------------------------------


@given(perms(5), st.integers(0, 2**32 - 1), st.sampled_from([Q, Field(2), Field(1009)]))
def test_relative_position_recovers_sigma(sigma, seed, fld):
    p, q = random_flags_with_sigma(fld, sigma, random.Random(seed))
    rel = relative_position(p, q)
    assert rel.sigma == sigma
    assert [list(r) for r in rel.table] == count_table(sigma)
    assert dim_table(p, q) == count_table(sigma)


@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_relative_position_of_random_pair(d, seed):
    """Two unrelated random flags: sigma must reproduce every intersection dimension."""
    rng = random.Random(seed)
    fld = Field(3)
    p = flag_from_basis(fld, random_invertible(fld, d, rng))
    q = flag_from_basis(fld, random_invertible(fld, d, rng))
    rel = relative_position(p, q)
    assert dim_table(p, q) == count_table(rel.sigma)
    for l, e in enumerate(rel.basis, start=1):
        s = rel.sigma[l - 1]
        assert contains_vector(p[l - 1], e) and not contains_vector(p[l], e)
        assert contains_vector(q[s - 1], e) and not contains_vector(q[s], e)
    assert span(fld, rel.basis, d) == full_space(fld, d)


def test_relative_position_identical_and_opposite():
    p = standard_flag(F, 4)
    assert relative_position(p, p).sigma == (1, 2, 3, 4)
    assert relative_position(p, opposite_flag(F, 4)).sigma == (4, 3, 2, 1)


def test_relative_position_rejects_mixed_spaces():
    with pytest.raises(AmbientMismatch):
        relative_position(standard_flag(F, 3), standard_flag(F, 4))


# -- classification -----------------------------------------------------------------


def test_classify_each_class():
    rng = random.Random(4)
    p, q = random_flags_with_sigma(F, longest(4), rng)
    assert classify(p, q).kind == "transverse" and is_transverse(p, q)
    p, q = random_flags_with_sigma(F, (1, 2, 3, 4), rng)
    assert classify(p, q).kind == "identical"
    for t in (1, 2, 3):
        p, q = random_flags_with_sigma(F, almost_transverse_perm(4, t), rng)
        c = classify(p, q)
        assert (c.kind, c.t, c.t_prime) == ("almost", t, 4 - t)
        assert str(c) == f"almost(t={t})"
    p, q = random_flags_with_sigma(F, (2, 1, 4, 3), rng)
    assert classify(p, q).kind == "general"


def test_classify_small_dimensions():
    p = standard_flag(F, 1)
    assert classify(p, p).kind == "transverse"
    p = standard_flag(F, 2)
    assert classify(p, p).kind == "identical"
    assert almost_transverse_index(p, p) == 1


@given(perms(6))
def test_classify_matches_permutation(sigma):
    d = len(sigma)
    p, q = flags_with_sigma(F, sigma)
    kind = classify(p, q).kind
    if sigma == longest(d):
        assert kind == "transverse"
    elif sigma == tuple(range(1, d + 1)):
        assert kind == "identical"
    elif inversions(sigma) == d * (d - 1) // 2 - 1:
        assert kind == "almost"
    else:
        assert kind == "general"
