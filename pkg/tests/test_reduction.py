"""Quotient certificates, tight-pair structure, and factorization lemmas."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from critlab import (
    BilinearConditionError,
    ClassificationError,
    GroupSubset,
    Homomorphism,
    KernelMismatchError,
    NoMatchingAutomorphismError,
    NotAbelianError,
    PairTag,
    PreconditionError,
    SearchBudgetError,
    SelfInverseCharacterError,
    VosperPreconditionError,
    build_cyclic,
    build_dihedral,
    build_product,
    classify_pair,
    detect_sturmian_reduction,
    factorize_bilinear,
    image_subset,
    kemperman_reduce,
    kneser_reduce,
    match_pullbacks,
    preimage_subset,
    product_set,
    split_characters,
    validate_certificate,
    vosper_classify,
    witness_checks,
)
from critlab.reduction import _check_hom_table

from oracles import oracle_classify


def subset(g, indices):
    return GroupSubset.from_indices(g, indices)


# ---------------------------------------------------------------------------
# Stabilizer-quotient certificates


def test_kneser_z6_golden():
    z6 = build_cyclic(6)
    cert = kneser_reduce(subset(z6, [0, 1]), subset(z6, [0, 3]))
    assert sorted(iter_members(cert.kernel)) == [0, 3]
    assert cert.quotient.order == 3
    assert cert.projection.map == (0, 1, 2, 0, 1, 2)
    assert cert.image_i.indices == (0, 1)
    assert cert.image_j.indices == (0,)
    assert cert.overshoot_holds and cert.product_measure_match


def iter_members(subgroup):
    return list(subgroup)


def test_kneser_subgroup_pair_collapses_to_identity():
    z6 = build_cyclic(6)
    h = subset(z6, [0, 2, 4])
    cert = kneser_reduce(h, h)
    assert cert.quotient.order == 2
    assert cert.image_i.indices == (0,)
    assert cert.image_j.indices == (0,)


def test_kneser_z5_trivial_kernel_overshoot():
    z5 = build_cyclic(5)
    a = subset(z5, [0, 1])
    cert = kneser_reduce(a, a)
    assert list(cert.kernel) == [0]
    assert cert.quotient.order == 5
    # m(AB) = 3/5 = 2/5 + 2/5 - 1/5: the overshoot identity with a point mass.
    prod = product_set(a, a)
    assert prod.measure() == Fraction(3, 5)
    assert prod.measure() == a.measure() + a.measure() - Fraction(1, 5)
    assert cert.overshoot_holds


def test_kneser_rejects_nonabelian():
    d3 = build_dihedral(3)
    with pytest.raises(NotAbelianError):
        kneser_reduce(subset(d3, [0, 1]), subset(d3, [0, 2]))


def test_certificate_validation_keys_and_truth():
    z6 = build_cyclic(6)
    a, b = subset(z6, [0, 1]), subset(z6, [0, 3])
    cert = kneser_reduce(a, b)
    checks = validate_certificate(cert, a, b)
    assert set(checks) == {
        "containment_a",
        "containment_b",
        "kernel_is_normal",
        "overshoot_flag_correct",
        "product_measure_match",
    }
    assert all(checks.values())


def test_kemperman_trivial_pair():
    z4 = build_cyclic(4)
    e = subset(z4, [0])
    cert = kemperman_reduce(e, e)
    assert all(validate_certificate(cert, e, e).values())


def test_kemperman_rejects_wrong_class():
    z6 = build_cyclic(6)
    a, b = subset(z6, [0, 1]), subset(z6, [0, 3])  # CriticalSum, not SubCritical
    assert classify_pair(a, b).tag is PairTag.CRITICAL_SUM
    with pytest.raises(ClassificationError):
        kemperman_reduce(a, b)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=2, max_value=8), st.data())
def test_kemperman_matches_kneser_kernel_on_abelian(n, data):
    g = build_cyclic(n)
    abits = data.draw(st.integers(min_value=1, max_value=(1 << n) - 1))
    bbits = data.draw(st.integers(min_value=1, max_value=(1 << n) - 1))
    a, b = GroupSubset(g, abits), GroupSubset(g, bbits)
    if classify_pair(a, b).tag is not PairTag.SUB_CRITICAL:
        return
    k1 = kneser_reduce(a, b)
    k2 = kemperman_reduce(a, b)
    assert k1.kernel.members == k2.kernel.members
    assert all(validate_certificate(k2, a, b).values())


# ---------------------------------------------------------------------------
# Tight pairs at prime order


def test_vosper_z7_progressions():
    z7 = build_cyclic(7)
    s = vosper_classify(subset(z7, [0, 1, 2]), subset(z7, [0, 1]))
    assert s.difference == 1
    assert (s.start_a, s.start_b) == (0, 0)
    assert s.lengths == (3, 2)


def test_vosper_z11_common_difference_three():
    z11 = build_cyclic(11)
    s = vosper_classify(subset(z11, [0, 3, 6]), subset(z11, [0, 3]))
    assert s.difference == 3
    assert s.lengths == (3, 2)


def test_vosper_rejects_degenerate_and_nonprime():
    z5 = build_cyclic(5)
    with pytest.raises(VosperPreconditionError):
        # |A+B| = 4 = p - 1: the complement-type regime is out of scope.
        vosper_classify(subset(z5, [0, 1]), subset(z5, [0, 2]))
    z6 = build_cyclic(6)
    with pytest.raises(VosperPreconditionError):
        vosper_classify(subset(z6, [0, 1]), subset(z6, [0, 1]))
    z7 = build_cyclic(7)
    with pytest.raises(VosperPreconditionError):
        vosper_classify(subset(z7, [0]), subset(z7, [0, 1]))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([5, 7, 11]), st.data())
def test_vosper_structure_reconstructs_inputs(p, data):
    g = build_cyclic(p)
    d = data.draw(st.integers(min_value=1, max_value=p - 1))
    la = data.draw(st.integers(min_value=2, max_value=3))
    lb = data.draw(st.integers(min_value=2, max_value=3))
    if la + lb - 1 > p - 2:
        return
    sa = data.draw(st.integers(min_value=0, max_value=p - 1))
    sb = data.draw(st.integers(min_value=0, max_value=p - 1))
    a = subset(g, [(sa + i * d) % p for i in range(la)])
    b = subset(g, [(sb + i * d) % p for i in range(lb)])
    if product_set(a, b).size != la + lb - 1:
        return
    s = vosper_classify(a, b)
    assert s.lengths == (la, lb)
    rebuilt_a = {(s.start_a + i * s.difference) % p for i in range(la)}
    rebuilt_b = {(s.start_b + i * s.difference) % p for i in range(lb)}
    assert rebuilt_a == set(a.indices)
    assert rebuilt_b == set(b.indices)


# ---------------------------------------------------------------------------
# Bilinear factorization


def test_factorize_z4_to_z2():
    z4, z2 = build_cyclic(4), build_cyclic(2)
    alpha = [(1 + x) % 2 for x in range(4)]
    beta = [y % 2 for y in range(4)]
    f = factorize_bilinear(z4, z2, alpha, beta)
    assert (f.s, f.t) == (1, 0)
    assert f.pi.map == (0, 1, 0, 1)


def test_factorize_constant_identity_tables():
    z4, z2 = build_cyclic(4), build_cyclic(2)
    f = factorize_bilinear(z4, z2, [0] * 4, [0] * 4)
    assert (f.s, f.t) == (0, 0)
    assert f.pi.map == (0, 0, 0, 0)


def test_factorize_z6_to_z3_with_shifts():
    z6, z3 = build_cyclic(6), build_cyclic(3)
    alpha = [(2 + x) % 3 for x in range(6)]
    beta = [(y + 1) % 3 for y in range(6)]
    f = factorize_bilinear(z6, z3, alpha, beta)
    assert (f.s, f.t) == (2, 1)
    assert f.pi.map == (0, 1, 2, 0, 1, 2)
    # Factorization identities hold pointwise.
    for x in range(6):
        assert alpha[x] == z3.op(f.s, f.pi.map[x])
        assert beta[x] == z3.op(f.pi.map[x], f.t)


def test_factorize_rejects_tables_without_common_quotient():
    z4, z2 = build_cyclic(4), build_cyclic(2)
    with pytest.raises(BilinearConditionError):
        factorize_bilinear(z4, z2, [0, 0, 1, 0], [0] * 4)


def test_check_hom_table_rejects_broken_table():
    z4, z2 = build_cyclic(4), build_cyclic(2)
    with pytest.raises(BilinearConditionError):
        _check_hom_table(z4, z2, [0, 1, 1, 0])
    _check_hom_table(z4, z2, [0, 1, 0, 1])  # genuine reduction passes


# ---------------------------------------------------------------------------
# Pullback matching


def test_match_pullbacks_negation():
    z4 = build_cyclic(4)
    ident = Homomorphism(z4, z4, tuple(range(4)))
    neg = Homomorphism(z4, z4, tuple((-x) % 4 for x in range(4)))
    alpha = match_pullbacks(ident, neg, subset(z4, [0, 1]), subset(z4, [0, 3]))
    assert alpha.map == (0, 3, 2, 1)


def test_match_pullbacks_identity():
    z4 = build_cyclic(4)
    ident = Homomorphism(z4, z4, tuple(range(4)))
    i1 = subset(z4, [0, 1])
    alpha = match_pullbacks(ident, ident, i1, i1)
    assert alpha.map == (0, 1, 2, 3)


def test_match_pullbacks_z5_doubling():
    z5 = build_cyclic(5)
    pi1 = Homomorphism(z5, z5, tuple(range(5)))
    pi2 = Homomorphism(z5, z5, tuple((2 * x) % 5 for x in range(5)))
    i1 = subset(z5, [0, 1])
    i2 = subset(z5, [0, 2])
    alpha = match_pullbacks(pi1, pi2, i1, i2)
    assert alpha.map == tuple((3 * x) % 5 for x in range(5))


def test_match_pullbacks_kernel_mismatch():
    z2 = build_cyclic(2)
    g = build_product(z2, z2)
    first = Homomorphism(g, z2, tuple(i // 2 for i in range(4)))
    second = Homomorphism(g, z2, tuple(i % 2 for i in range(4)))
    i = subset(z2, [0])
    with pytest.raises(KernelMismatchError):
        match_pullbacks(first, second, i, i)


def test_match_pullbacks_no_automorphism():
    z4 = build_cyclic(4)
    ident = Homomorphism(z4, z4, tuple(range(4)))
    with pytest.raises(NoMatchingAutomorphismError):
        match_pullbacks(ident, ident, subset(z4, [0, 1]), subset(z4, [1, 2]))


def test_match_pullbacks_rejects_stabilized_interval():
    z4 = build_cyclic(4)
    ident = Homomorphism(z4, z4, tuple(range(4)))
    with pytest.raises(PreconditionError):
        match_pullbacks(ident, ident, subset(z4, [0, 2]), subset(z4, [0, 2]))


# ---------------------------------------------------------------------------
# Character splitting


def mult_char(g, k):
    return Homomorphism(g, g, tuple((k * x) % g.order for x in range(g.order)))


def test_split_characters_z5():
    z5 = build_cyclic(5)
    chars = [mult_char(z5, k) for k in (1, 2, 3, 4)]
    s_list, s_inv = split_characters(chars)
    assert [c.map[1] for c in s_list] == [1, 2]
    assert [c.map[1] for c in s_inv] == [4, 3]
    for c, cinv in zip(s_list, s_inv):
        assert cinv.map == tuple(z5.inverse[v] for v in c.map)


def test_split_characters_empty():
    assert split_characters([]) == ([], [])


def test_split_characters_self_inverse_rejected():
    z4 = build_cyclic(4)
    with pytest.raises(SelfInverseCharacterError):
        split_characters([mult_char(z4, 2)])


def test_split_characters_requires_inversion_closure():
    z5 = build_cyclic(5)
    with pytest.raises(PreconditionError):
        split_characters([mult_char(z5, 2)])


# ---------------------------------------------------------------------------
# Run-pullback detection


def test_detect_z6_critical_pair():
    z6 = build_cyclic(6)
    a, b = subset(z6, [0, 1]), subset(z6, [0, 3])
    w = detect_sturmian_reduction(a, b)
    assert w is not None
    assert w.projection.target.order == 3
    assert w.run_i.indices == (0, 1)
    assert w.run_j.indices == (0,)
    assert all(witness_checks(w, a, b).values())


def test_detect_rejects_wrong_class():
    z5 = build_cyclic(5)
    a = subset(z5, [0, 1])
    with pytest.raises(ClassificationError):
        detect_sturmian_reduction(a, a)  # SubCritical


def test_detect_budget_exhaustion():
    z6 = build_cyclic(6)
    a, b = subset(z6, [0, 1]), subset(z6, [0, 3])
    with pytest.raises(SearchBudgetError):
        detect_sturmian_reduction(a, b, budget=1)


def test_witness_check_keys():
    z6 = build_cyclic(6)
    a, b = subset(z6, [0, 1]), subset(z6, [0, 3])
    w = detect_sturmian_reduction(a, b)
    assert set(witness_checks(w, a, b)) == {
        "containment_a",
        "containment_b",
        "product_measure_match",
    }


# ---------------------------------------------------------------------------
# Image and preimage helpers


def test_image_and_preimage_along_projection():
    z6, z3 = build_cyclic(6), build_cyclic(3)
    pi = Homomorphism(z6, z3, tuple(x % 3 for x in range(6)))
    a = subset(z6, [0, 1, 3])
    img = image_subset(pi, a)
    assert img.indices == (0, 1)
    back = preimage_subset(pi, img)
    assert back.indices == (0, 1, 3, 4)
    assert set(a.indices) <= set(back.indices)
