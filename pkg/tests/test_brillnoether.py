from itertools import combinations, product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from schubtan.brillnoether import (
    BNData,
    FiberKind,
    GenusMismatch,
    UnsupportedGenus,
    all_bn_data,
    analyze_genus1_fiber,
    chain_dimension_check,
    enumerate_refined_chains,
    gcirc_membership,
    genus1_fiber_model,
    rho,
    rho_hat,
)
from schubtan.exactlinalg import Field
from schubtan.flags import almost_transverse_perm, classify, flags_with_sigma
from schubtan.schubert import SchubertIndex, in_sigma

from conftest import grassmannian_points


@st.composite
def bn_data(draw, max_g=3, max_r=2, max_d=6):
    g = draw(st.integers(0, max_g))
    r = draw(st.integers(0, max_r))
    d = draw(st.integers(r, max_d))
    seqs = list(combinations(range(d + 1), r + 1))
    return BNData(g, r, d, draw(st.sampled_from(seqs)), draw(st.sampled_from(seqs)))


# -- numerology ------------------------------------------------------------------------


@pytest.mark.parametrize(
    "data,value",
    [
        (BNData(1, 1, 4, (0, 2), (0, 2)), 3),
        (BNData(2, 1, 2, (0, 1), (0, 1)), 0),
        (BNData(0, 0, 0, (0,), (0,)), 0),
        (BNData(3, 1, 3, (0, 1), (1, 2)), 3 - 2 * 1 - 0 - 2),
    ],
)
def test_rho_values(data, value):
    assert rho(data) == value


@pytest.mark.parametrize(
    "data,value",
    [
        (BNData(1, 1, 4, (0, 2), (0, 2)), 1),
        (BNData(1, 0, 1, (1,), (1,)), -1),
        (BNData(2, 1, 2, (0, 1), (0, 1)), 0),
        (BNData(1, 0, 3, (0,), (2,)), 1),
    ],
)
def test_rho_hat_values(data, value):
    assert rho_hat(data) == value


@given(bn_data())
def test_rho_hat_is_at_most_g(data):
    assert rho_hat(data) <= data.g


@given(bn_data())
def test_rho_genus_degree_shift(data):
    """Raising g and d together by one raises rho by one."""
    shifted = BNData(data.g + 1, data.r, data.d + 1, data.a, data.b)
    assert rho(shifted) == rho(data) + 1


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(g=-1, r=0, d=1, a=(0,), b=(0,)),
        dict(g=1, r=1, d=3, a=(0,), b=(0, 1)),
        dict(g=1, r=1, d=3, a=(1, 1), b=(0, 1)),
        dict(g=1, r=0, d=2, a=(3,), b=(0,)),
    ],
)
def test_bn_data_validation(kwargs):
    with pytest.raises(ValueError):
        BNData(**kwargs)


def test_gcirc_membership():
    assert gcirc_membership((0, 2), (0, 2))
    assert not gcirc_membership((2, 3), (0, 2))
    assert gcirc_membership((1, 2), (0, 1))
    assert gcirc_membership((0, 3), (0, 2))
    assert gcirc_membership((1, 3, 4), (0, 2, 3))
    assert not gcirc_membership((2, 3, 4), (0, 2, 3))
    with pytest.raises(ValueError):
        gcirc_membership((0, 1), (0, 2))
    with pytest.raises(ValueError):
        gcirc_membership((0,), (0, 2))


# -- fiber models ----------------------------------------------------------------------


def test_fiber_kind_parse():
    assert FiberKind.parse("mixed:3") == FiberKind("mixed", 3)
    assert str(FiberKind.parse(" AllP ")) == "allp"
    with pytest.raises(ValueError):
        FiberKind.parse("sideways")
    with pytest.raises(ValueError):
        FiberKind("generic", 2)


def test_fiber_model_rejects_other_genera():
    with pytest.raises(UnsupportedGenus):
        genus1_fiber_model(BNData(2, 1, 4, (0, 2), (0, 2)), FiberKind("generic"))
    with pytest.raises(ValueError):
        genus1_fiber_model(BNData(1, 1, 4, (0, 2), (0, 2)), FiberKind("mixed", 4))


def test_crossing_lines_model():
    model = genus1_fiber_model(BNData(1, 1, 4, (0, 2), (0, 2)), FiberKind("mixed", 2))
    c = classify(model.p, model.q)
    assert (c.kind, c.t, c.t_prime) == ("almost", 2, 2)
    assert model.a.seq == (0, 2) and model.b.seq == (0, 2)
    assert not model.reindexed and not model.richardson
    assert model.expected == 2


def test_generic_fiber_is_transverse():
    model = genus1_fiber_model(BNData(1, 1, 4, (0, 2), (0, 2)), FiberKind("generic"))
    assert model.transverse and model.expected == 2


def test_top_vanishing_order():
    data = BNData(1, 0, 3, (3,), (0,))
    assert genus1_fiber_model(data, FiberKind("generic")).empty
    assert genus1_fiber_model(data, FiberKind("allq")).empty
    model = genus1_fiber_model(data, FiberKind("allp"))
    assert not model.empty and model.reindexed
    assert model.a.seq == (2,)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_richardson_reindexing_preserves_the_fiber(d):
    """Over F_3, the transverse re-indexed model cuts out the same points as the raw one."""
    fld = Field(3)
    seen = 0
    for r in range(d - 1):
        for data in all_bn_data(1, r, d):
            if max(data.a + data.b) >= d:
                continue
            for t in range(1, d):
                kind = FiberKind("mixed", t)
                model = genus1_fiber_model(data, kind, fld)
                if not model.richardson:
                    continue
                seen += 1
                assert model.transverse
                p, q = flags_with_sigma(fld, almost_transverse_perm(d, t))
                a, b = SchubertIndex(d, data.a), SchubertIndex(d, data.b)
                for lam in grassmannian_points(fld, d, r + 1):
                    raw = in_sigma(lam, p, a) and in_sigma(lam, q, b)
                    new = in_sigma(lam, model.p, model.a) and in_sigma(lam, model.q, model.b)
                    assert raw == new, (data, t, lam)
    assert seen > 0


@given(bn_data(max_g=1, max_r=2, max_d=5).filter(lambda x: x.g == 1 and x.d >= 1), st.data())
def test_fiber_analysis_passes(data, draw):
    kinds = ["generic", "allp", "allq"] + [f"mixed:{t}" for t in range(1, data.d)]
    kind = FiberKind.parse(draw.draw(st.sampled_from(kinds)))
    rep = analyze_genus1_fiber(data, kind, samples=4, seed=draw.draw(st.integers(0, 1000)))
    assert rep.ok, rep.violations


def test_crossing_lines_fiber_reaches_both_dimensions():
    rep = analyze_genus1_fiber(BNData(1, 1, 4, (0, 2), (0, 2)), FiberKind("mixed", 2), samples=40, seed=0)
    assert rep.ok
    out = rep.to_dict()
    assert out["expected_dims"] == [2, 3]
    assert out["observed_dims"] == [2, 3]
    assert out["jump_points"] > 0


# -- chains ------------------------------------------------------------------------------


def naive_chains(data, genera):
    """Every choice of node sequences, filtered afterwards."""
    r, d, n = data.r, data.d, len(genera)
    seqs = list(combinations(range(d + 1), r + 1))
    out = set()
    for mids in product(seqs, repeat=n - 1):
        bs = list(mids) + [data.b]
        as_ = [data.a] + [tuple(d - b[r - j] for j in range(r + 1)) for b in mids]
        comps = [BNData(g, r, d, a, b) for g, a, b in zip(genera, as_, bs)]
        if all(rho_hat(c) >= 0 for c in comps):
            out.add((tuple(as_), tuple(bs)))
    return out


@pytest.mark.parametrize("genera", [(1,), (1, 1), (1, 1, 1), (0, 1), (1, 0, 1)])
def test_enumeration_matches_naive(genera):
    g = sum(genera)
    for r in range(2):
        for d in range(r, 5):
            for data in all_bn_data(g, r, d):
                found = {(c.a_seqs, c.b_seqs) for c in enumerate_refined_chains(data, genera)}
                assert found == naive_chains(data, genera)


@given(bn_data())
def test_every_refined_assignment_sums_to_rho(data):
    genera = (1,) * data.g if data.g else (0,)
    for c in enumerate_refined_chains(data, genera):
        assert c.total == rho(data)
        for i in range(c.n - 1):
            assert all(c.b_seqs[i][j] + c.a_seqs[i + 1][data.r - j] == data.d for j in range(data.r + 1))


def test_two_elliptic_components():
    data = BNData(2, 1, 2, (0, 1), (0, 1))
    found = enumerate_refined_chains(data, (1, 1))
    assert len(found) == 1
    assert found[0].to_dict()["b"] == [[0, 2], [0, 1]]
    v = chain_dimension_check(data)
    assert v.ok and v.max_total == 0


def test_chain_errors():
    data = BNData(2, 1, 2, (0, 1), (0, 1))
    with pytest.raises(GenusMismatch):
        enumerate_refined_chains(data, (1,))
    with pytest.raises(ValueError):
        enumerate_refined_chains(data, (2,))
    with pytest.raises(ValueError):
        enumerate_refined_chains(data, ())


@given(bn_data())
def test_chain_verdict(data):
    v = chain_dimension_check(data)
    assert v.ok, v.to_dict()
