"""Slice disintegration and criticality relative to a normal subgroup."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from critlab import (
    ChainError,
    ClassificationError,
    GroupSubset,
    NotNormalError,
    PairTag,
    PreconditionError,
    Subgroup,
    build_cyclic,
    build_dihedral,
    build_product,
    check_chain_criticality,
    classify_pair,
    detect_local_subcritical,
    disintegrate,
    is_balanced,
    is_critical_wrt,
    relativize,
    slice_subset,
    support,
)

from oracles import oracle_slices


def subset(g, indices):
    return GroupSubset.from_indices(g, indices)


@pytest.fixture(scope="module")
def z6():
    return build_cyclic(6)


@pytest.fixture(scope="module")
def g26():
    return build_product(build_cyclic(2), build_cyclic(6))


@pytest.fixture(scope="module")
def pair26(g26):
    a = subset(g26, [0, 1, 9, 10])
    b = subset(g26, [0, 3, 6, 9])
    n = Subgroup.from_members(g26, range(6))
    return a, b, n


# ---------------------------------------------------------------------------
# Slices and disintegration


def test_slice_subset_reindexes_into_subgroup(pair26):
    a, _b, n = pair26
    s = slice_subset(a, n, 6, side="left")
    assert s.indices == (3, 4)
    assert s.parent.order == 6


def test_disintegrate_partitions(pair26):
    a, _b, n = pair26
    view = disintegrate(a, n, side="left")
    assert view.coset_reps == (0, 6)
    assert {r: view.slices[r].size for r in view.coset_reps} == {0: 2, 6: 2}
    assert view.nonempty_reps() == (0, 6)
    assert sum(view.slices[r].size for r in view.coset_reps) == a.size


def test_slice_requires_normal_subgroup():
    d4 = build_dihedral(4)
    reflections = Subgroup.from_members(d4, [0, 1])
    assert not reflections.is_normal
    with pytest.raises(NotNormalError):
        slice_subset(subset(d4, [0, 1, 2]), reflections, 0)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([3, 4, 6, 8]), st.data())
def test_disintegration_matches_coset_oracle(n, data):
    g = build_cyclic(n)
    bits = data.draw(st.integers(min_value=1, max_value=(1 << n) - 1))
    a = GroupSubset(g, bits)
    for d in range(1, n + 1):
        if n % d:
            continue
        sub = Subgroup.from_members(g, range(0, n, d))
        view = disintegrate(a, sub)
        want = oracle_slices(g.cayley, set(a.indices), set(sub))
        got = {
            r: view.slices[r].size for r in view.coset_reps if view.slices[r].size
        }
        want_sizes = {r: len(v) for r, v in want.items() if v}
        assert sum(got.values()) == sum(want_sizes.values()) == a.size
        assert sorted(got.values()) == sorted(want_sizes.values())


# ---------------------------------------------------------------------------
# Balance and support


def test_balanced_fixtures(z6):
    u = Subgroup.from_members(z6, [0, 3])
    assert is_balanced(subset(z6, [0, 1]), u)
    assert not is_balanced(subset(z6, [1, 4]), u)
    assert is_balanced(subset(z6, [0, 3]), u)


def test_support_fixture(z6):
    u = Subgroup.from_members(z6, [0, 3])
    sup = support(subset(z6, [0, 1]), u)
    assert sup.quotient_group.order == 3
    assert sup.members.indices == (0, 1)
    assert sup.size == 2
    assert not sup.is_subgroup()


def test_support_of_subgroup_is_subgroup(z6):
    u = Subgroup.from_members(z6, [0, 2, 4])
    sup = support(subset(z6, [0, 1]), u)
    assert sup.quotient_group.order == 2
    assert sup.members.indices == (0, 1)
    assert sup.is_subgroup()
    sub_only = support(subset(z6, [0, 4]), u)
    assert sub_only.members.indices == (0,)
    assert sub_only.is_subgroup()


# ---------------------------------------------------------------------------
# Criticality relative to a normal subgroup


def test_is_critical_wrt_golden(pair26, g26):
    a, b, n = pair26
    w = is_critical_wrt(a, b, n)
    assert w.holds
    assert w.slice_measure_a == Fraction(1, 3)
    assert w.slice_measure_b == Fraction(1, 3)
    assert w.violating_pair is None


def test_is_critical_wrt_edges(pair26, g26):
    a, b, _n = pair26
    trivial = Subgroup.trivial(g26)
    w = is_critical_wrt(a, b, trivial)
    assert not w.holds
    assert w.violating_pair is not None
    full = Subgroup.full(g26)
    assert is_critical_wrt(a, b, full).holds


def test_detect_local_subcritical_fixtures(z6):
    z4 = build_cyclic(4)
    e4 = subset(z4, [0])
    hit = detect_local_subcritical(e4, e4)
    assert hit is not None
    u, x, y = hit
    assert sorted(u) == [0, 2] and (x, y) == (0, 0)

    z5 = build_cyclic(5)
    a5 = subset(z5, [0, 1])
    assert detect_local_subcritical(a5, a5) is None

    hit6 = detect_local_subcritical(subset(z6, [0, 1]), subset(z6, [0, 3]))
    u6, x6, y6 = hit6
    assert sorted(u6) == [0, 2, 4] and (x6, y6) == (0, 0)


# ---------------------------------------------------------------------------
# The relativization dichotomy


def test_relativize_deficient_branch(z6):
    u = Subgroup.from_members(z6, [0, 3])
    out = relativize(subset(z6, [0, 1]), subset(z6, [0, 3]), u)
    assert out.kind == "locally_subcritical"
    assert out.slice_pair == (0, 0)
    assert out.subgroup_l is None


def test_relativize_certificate_branch(pair26, g26):
    a, b, n = pair26
    out = relativize(a, b, n)
    assert out.kind == "critical_wrt_u_in_L"
    assert out.subgroup_l.size == 12  # L is the whole group here
    assert out.witness.holds
    assert out.constant_slice_measure_a == Fraction(1, 6)
    assert out.constant_slice_measure_b == Fraction(1, 6)


def test_relativize_same_pair_other_subgroup_is_deficient(pair26, g26):
    a, b, _n = pair26
    u2 = Subgroup.from_members(g26, [0, 3, 6, 9])
    out = relativize(a, b, u2)
    assert out.kind == "locally_subcritical"
    assert out.slice_pair == (0, 0)


def test_relativize_z8_certificate():
    z8 = build_cyclic(8)
    u = Subgroup.from_members(z8, [0, 2, 4, 6])
    a, b = subset(z8, [0, 2]), subset(z8, [0, 4])
    assert classify_pair(a, b).tag is PairTag.CRITICAL_SUM
    out = relativize(a, b, u)
    assert out.kind == "critical_wrt_u_in_L"
    assert sorted(out.subgroup_l) == [0, 2, 4, 6]


def test_relativize_preconditions(z6):
    u = Subgroup.from_members(z6, [0, 3])
    with pytest.raises(PreconditionError) as exc:
        relativize(subset(z6, [1, 4]), subset(z6, [0, 3]), u)
    assert exc.value.reason == "not-balanced"
    with pytest.raises(ClassificationError):
        relativize(subset(z6, [0, 1]), subset(z6, [0, 1]), u)  # SubCritical


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([4, 6, 8, 9]), st.data())
def test_relativize_deficient_witness_is_genuine(n, data):
    g = build_cyclic(n)
    abits = data.draw(st.integers(min_value=1, max_value=(1 << n) - 1))
    bbits = data.draw(st.integers(min_value=1, max_value=(1 << n) - 1))
    a, b = GroupSubset(g, abits), GroupSubset(g, bbits)
    if classify_pair(a, b).tag is not PairTag.CRITICAL_SUM:
        return
    for d in range(2, n):
        if n % d:
            continue
        u = Subgroup.from_members(g, range(0, n, n // d))
        if not (is_balanced(a, u) and is_balanced(b, u)):
            continue
        out = relativize(a, b, u)
        if out.kind == "locally_subcritical":
            x, y = out.slice_pair
            ax = slice_subset(a, u, x, "left")
            by = slice_subset(b, u, y, "right")
            prod = {by.parent.op(p, q) for p in ax.indices for q in by.indices}
            assert len(prod) < ax.size + by.size
        else:
            assert out.witness.holds


# ---------------------------------------------------------------------------
# Chains


def test_chain_conjunction(pair26, g26):
    a, b, n = pair26
    full = Subgroup.full(g26)
    trivial = Subgroup.trivial(g26)
    assert check_chain_criticality(a, b, [full])
    assert check_chain_criticality(a, b, [full, n])
    assert not check_chain_criticality(a, b, [full, n, trivial])


def test_chain_rejects_empty(pair26):
    a, b, _n = pair26
    with pytest.raises(ChainError):
        check_chain_criticality(a, b, [])
