"""Disintegration along a normal subgroup and criticality relative to it.

A subset decomposes into slices over the cosets of a normal subgroup; the
counting measure disintegrates accordingly.  A pair is critical with respect
to the subgroup when every slice carries the full global measure of its set
and every product slice is exactly additive.  The relativization step either
exhibits a measure-deficient slice pair (the pair is locally sub-critical) or
certifies that both supports coincide with a subgroup of the quotient, the
slice measures are constant, and the pair is critical relative to the
subgroup inside the sub-quotient it spans.

Finite-model conventions (documented divergences from the continuous
setting): conull sets are full sets under counting measure; "open subgroup"
means any subgroup; nonempty slices automatically have positive measure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ._bits import bits_from, iter_bits
from .errors import (
    ChainError,
    ClassificationError,
    EmptySubsetError,
    NotNormalError,
    PreconditionError,
    SoundnessError,
)
from .group_core import FiniteGroup, Subgroup, quotient, subgroups
from .subset_algebra import GroupSubset, PairTag, classify_pair

__all__ = [
    "SliceView",
    "CriticalityWitness",
    "SupportSet",
    "RelativizeOutcome",
    "slice_subset",
    "disintegrate",
    "is_critical_wrt",
    "support",
    "is_balanced",
    "almost_sub_critical_slice",
    "detect_local_subcritical",
    "relativize",
    "check_chain_criticality",
]


# ---------------------------------------------------------------------------
# Coset bookkeeping


def _coset_table(u: Subgroup):
    """Memoized (reps, coset bitsets, element → rep-position map).

    Representatives are the least element of each coset, ascending; for a
    normal subgroup left and right cosets coincide as a partition, so one
    table serves both sides.
    """
    g = u.parent
    key = ("coset_table", u.members)
    got = g._memo.get(key)
    if got is None:
        reps = u.coset_reps("left")
        cosets = tuple(g.translate_bits(u.members, r, "left") for r in reps)
        rep_pos = [0] * g.order
        for i, coset in enumerate(cosets):
            for e in iter_bits(coset):
                rep_pos[e] = i
        got = (reps, cosets, tuple(rep_pos))
        g._memo[key] = got
    return got


def _require_normal(n: Subgroup) -> None:
    if not n.is_normal:
        raise NotNormalError("operation requires a normal subgroup")


def _slice_bits(g: FiniteGroup, bits: int, u_members: int, x: int, side: str) -> int:
    """Raw bits of x⁻¹A ∩ U (left) or Ax⁻¹ ∩ U (right), as parent elements."""
    xi = g.inverse[x]
    if side == "left":
        return g.translate_bits(bits, xi, "left") & u_members
    if side == "right":
        return g.translate_bits(bits, xi, "right") & u_members
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def _compress(n: Subgroup, parent_bits: int) -> GroupSubset:
    """Re-index a subset of the subgroup as a subset of it qua group."""
    ngroup, emb = n.as_group()
    key = ("emb_back", n.members)
    back = n.parent._memo.get(key)
    if back is None:
        back = {p: i for i, p in enumerate(emb)}
        n.parent._memo[key] = back
    return GroupSubset(ngroup, bits_from(back[p] for p in iter_bits(parent_bits)))


# ---------------------------------------------------------------------------
# Slices and disintegration


@dataclass(frozen=True)
class SliceView:
    """Full slice table of a subset over the cosets of a normal subgroup.

    ``slices[rep]`` is the slice at that coset representative, re-indexed as
    a subset of the subgroup-as-group; left slices are x⁻¹A ∩ N, right
    slices are Ay⁻¹ ∩ N.
    """

    group: FiniteGroup
    normal: Subgroup
    side: str
    coset_reps: tuple[int, ...]
    slices: dict

    def nonempty_reps(self) -> tuple[int, ...]:
        return tuple(r for r in self.coset_reps if not self.slices[r].is_empty)


def slice_subset(
    a: GroupSubset, n: Subgroup, x: int, side: str = "left"
) -> GroupSubset:
    """The slice x⁻¹A ∩ N (side "left") or Ax⁻¹ ∩ N (side "right"), as a
    subset of the subgroup-as-group."""
    _require_normal(n)
    if n.parent is not a.parent:
        raise NotNormalError("subgroup belongs to a different group")
    return _compress(n, _slice_bits(a.parent, a.bits, n.members, x, side))


def disintegrate(a: GroupSubset, n: Subgroup, side: str = "left") -> SliceView:
    """Slice table over all cosets; verifies the exact disintegration
    identity m_G(A) = (1/[G:N]) Σ_x m_N(A_x)."""
    _require_normal(n)
    if n.parent is not a.parent:
        raise NotNormalError("subgroup belongs to a different group")
    g = a.parent
    reps, _cosets, _pos = _coset_table(n)
    table = {
        r: _compress(n, _slice_bits(g, a.bits, n.members, r, side)) for r in reps
    }
    total = sum(s.size for s in table.values())
    if total != a.size:
        raise SoundnessError("slices failed to partition the set")
    return SliceView(group=g, normal=n, side=side, coset_reps=reps, slices=table)


# ---------------------------------------------------------------------------
# Criticality with respect to a normal subgroup


@dataclass(frozen=True)
class CriticalityWitness:
    """Outcome of the slice-level criticality test.

    ``slice_measure_a``/``slice_measure_b`` are the required common slice
    measures (the global measures of the sets).  When the test fails,
    ``violating_pair`` holds coset representatives — (x, None) for a bad
    A-slice, (None, y) for a bad B-slice, (x, y) for a non-additive product
    slice — with the measured and expected values.
    """

    holds: bool
    slice_measure_a: Fraction
    slice_measure_b: Fraction
    violating_pair: Optional[tuple] = None
    measured: Optional[Fraction] = None
    expected: Optional[Fraction] = None

    def to_json_dict(self, group: Optional[FiniteGroup] = None) -> dict:
        def lab(v):
            if v is None:
                return None
            return group.labels[v] if group is not None else v

        out = {
            "holds": self.holds,
            "slice_measure_a": str(self.slice_measure_a),
            "slice_measure_b": str(self.slice_measure_b),
        }
        if self.violating_pair is not None:
            x, y = self.violating_pair
            out["violating_pair"] = [lab(x), lab(y)]
            out["measured"] = str(self.measured)
            out["expected"] = str(self.expected)
        return out


def is_critical_wrt(a: GroupSubset, b: GroupSubset, n: Subgroup) -> CriticalityWitness:
    """Exact slice-level criticality of (A, B) relative to a normal subgroup.

    Holds iff (i) every A-slice has measure m_G(A) inside N, (ii) every
    B-slice has measure m_G(B), and (iii) every product slice is exactly
    additive: m_N((AB)_{xy}) = m_N(A_x) + m_N(B_y) for ALL coset pairs (the
    finite model takes the conull index sets to be everything).
    """
    a._same_parent(b)
    _require_normal(n)
    if n.parent is not a.parent:
        raise NotNormalError("subgroup belongs to a different group")
    if a.is_empty or b.is_empty:
        raise EmptySubsetError("criticality needs nonempty subsets")
    g = a.parent
    reps, cosets, rep_pos = _coset_table(n)
    nsize = n.size
    ma = Fraction(a.size, g.order)
    mb = Fraction(b.size, g.order)
    count_a = [(a.bits & c).bit_count() for c in cosets]
    count_b = [(b.bits & c).bit_count() for c in cosets]
    prod_bits = g.product_bits(a.bits, b.bits)
    count_p = [(prod_bits & c).bit_count() for c in cosets]

    def frac(cnt: int) -> Fraction:
        return Fraction(cnt, nsize)

    # (i) every A-slice carries the full global measure of A.
    for i, r in enumerate(reps):
        if count_a[i] * g.order != a.size * nsize:
            return CriticalityWitness(
                False, ma, mb, (r, None), frac(count_a[i]), ma
            )
    # (ii) likewise for B.
    for i, r in enumerate(reps):
        if count_b[i] * g.order != b.size * nsize:
            return CriticalityWitness(
                False, ma, mb, (None, r), frac(count_b[i]), mb
            )
    # (iii) exact additivity of every product slice.
    for i, x in enumerate(reps):
        for j, y in enumerate(reps):
            k = rep_pos[g.op(x, y)]
            if count_p[k] != count_a[i] + count_b[j]:
                return CriticalityWitness(
                    False,
                    ma,
                    mb,
                    (x, y),
                    frac(count_p[k]),
                    frac(count_a[i] + count_b[j]),
                )
    return CriticalityWitness(True, ma, mb)


# ---------------------------------------------------------------------------
# Supports and balance


@dataclass(frozen=True)
class SupportSet:
    """The quotient elements over which a subset has a nonempty slice."""

    quotient_group: FiniteGroup
    members: GroupSubset  # subset of the quotient group

    @property
    def size(self) -> int:
        return self.members.size

    def element_labels(self) -> tuple[str, ...]:
        return self.members.element_labels()

    def is_subgroup(self) -> bool:
        return self.quotient_group.is_subgroup_bits(self.members.bits)


def support(a: GroupSubset, u: Subgroup) -> SupportSet:
    """A⁺ ⊆ G/U: the cosets the set meets."""
    _require_normal(u)
    if u.parent is not a.parent:
        raise NotNormalError("subgroup belongs to a different group")
    q, _proj = quotient(a.parent, u)
    _reps, cosets, _pos = _coset_table(u)
    bits = bits_from(i for i, c in enumerate(cosets) if a.bits & c)
    return SupportSet(quotient_group=q, members=GroupSubset(q, bits))


def is_balanced(a: GroupSubset, u: Subgroup) -> bool:
    """Whether the identity coset carries a nonempty slice (e ∈ A⁺); under
    counting measure nonempty slices automatically have positive measure."""
    _require_normal(u)
    if u.parent is not a.parent:
        raise NotNormalError("subgroup belongs to a different group")
    return bool(a.bits & u.members)


# ---------------------------------------------------------------------------
# Local sub-criticality


def almost_sub_critical_slice(
    a: GroupSubset, b: GroupSubset, u: Subgroup
) -> Optional[tuple[int, int]]:
    """First slice pair (x, y) over A⁺ × B⁺ whose product loses counting
    mass: |A_x · B_y| < |A_x| + |B_y|; None when every nonempty slice pair
    is at least additive.

    This is the sum-form deficiency the relativization dichotomy branches
    on; representatives ascend, so the witness is deterministic.
    """
    a._same_parent(b)
    _require_normal(u)
    if u.parent is not a.parent:
        raise NotNormalError("subgroup belongs to a different group")
    g = a.parent
    reps, _cosets, _pos = _coset_table(u)
    a_slices = []
    for x in reps:
        sbits = _slice_bits(g, a.bits, u.members, x, "left")
        if sbits:
            a_slices.append((x, sbits))
    b_slices = []
    for y in reps:
        sbits = _slice_bits(g, b.bits, u.members, y, "right")
        if sbits:
            b_slices.append((y, sbits))
    for x, abits in a_slices:
        for y, bbits in b_slices:
            prod = g.product_bits(abits, bbits)
            if prod.bit_count() < abits.bit_count() + bbits.bit_count():
                return (x, y)
    return None


def detect_local_subcritical(
    a: GroupSubset, b: GroupSubset, widen: bool = False
) -> Optional[tuple[Subgroup, int, int]]:
    """Search proper nontrivial subgroups U (normal ones unless ``widen``)
    and coset pairs for a slice pair that is SubCritical inside U.

    Subgroups are scanned largest first (ties by member bitset), coset
    representatives in ascending order; the first witness (U, x, y) is
    returned, or None.  The trivial subgroup is excluded by convention:
    singleton slices would make every pair a witness.
    """
    a._same_parent(b)
    g = a.parent
    candidates = [
        u
        for u in subgroups(g, normal_only=not widen)
        if 1 < u.size < g.order
    ]
    candidates.sort(key=lambda u: (-u.size, u.members))
    for u in candidates:
        reps, _cosets, _pos = _coset_table(u)
        usize = u.size
        a_slices = [
            (x, sb)
            for x in reps
            if (sb := _slice_bits(g, a.bits, u.members, x, "left"))
        ]
        b_slices = [
            (y, sb)
            for y in reps
            if (sb := _slice_bits(g, b.bits, u.members, y, "right"))
        ]
        for x, abits in a_slices:
            for y, bbits in b_slices:
                psize = g.product_bits(abits, bbits).bit_count()
                if psize < min(usize, abits.bit_count() + bbits.bit_count()):
                    return (u, x, y)
    return None


# ---------------------------------------------------------------------------
# Relativization


@dataclass(frozen=True)
class RelativizeOutcome:
    """Either a deficient slice pair (locally sub-critical) or a criticality
    certificate relative to U inside the subgroup L spanned by the common
    support."""

    kind: str  # "locally_subcritical" | "critical_wrt_u_in_L"
    slice_pair: Optional[tuple[int, int]] = None
    subgroup_l: Optional[Subgroup] = None
    witness: Optional[CriticalityWitness] = None
    constant_slice_measure_a: Optional[Fraction] = None
    constant_slice_measure_b: Optional[Fraction] = None


def relativize(a: GroupSubset, b: GroupSubset, u: Subgroup) -> RelativizeOutcome:
    """Dichotomy for a balanced exactly-additive pair relative to a normal
    subgroup U.

    Either some nonempty slice pair loses counting mass (outcome
    ``locally_subcritical`` with the first such pair), or the following are
    verified and certified: the two supports agree and form a subgroup of
    G/U, both slice-measure families are constant with value
    m_G(A)/|A⁺| (resp. m_G(B)/|B⁺|), and the pair is critical with respect
    to U inside L = A⁺U.  Any verification failure raises SoundnessError —
    it would falsify the underlying theorem.
    """
    a._same_parent(b)
    _require_normal(u)
    if u.parent is not a.parent:
        raise NotNormalError("subgroup belongs to a different group")
    if a.is_empty or b.is_empty:
        raise EmptySubsetError("relativization needs nonempty subsets")
    if not (is_balanced(a, u) and is_balanced(b, u)):
        raise PreconditionError(
            "not-balanced", "both sets must have a nonempty identity-coset slice"
        )
    tag = classify_pair(a, b).tag
    if tag is not PairTag.CRITICAL_SUM:
        raise ClassificationError(
            f"relativization needs a CriticalSum pair, got {tag.value}"
        )

    deficient = almost_sub_critical_slice(a, b, u)
    if deficient is not None:
        return RelativizeOutcome(kind="locally_subcritical", slice_pair=deficient)

    g = a.parent
    sup_a = support(a, u)
    sup_b = support(b, u)
    if sup_a.members.bits != sup_b.members.bits:
        raise SoundnessError("supports differ for a non-deficient pair")
    if not sup_a.is_subgroup():
        raise SoundnessError("common support is not a subgroup of the quotient")
    _reps, cosets, _pos = _coset_table(u)
    sup_idx = list(iter_bits(sup_a.members.bits))
    for bits, sup_count in ((a.bits, a.size), (b.bits, b.size)):
        for i in sup_idx:
            if (bits & cosets[i]).bit_count() * len(sup_idx) != sup_count:
                raise SoundnessError("slice measures are not constant")

    l_bits = 0
    for i in sup_idx:
        l_bits |= cosets[i]
    sub_l = Subgroup.from_members(g, l_bits)
    lgroup, emb = sub_l.as_group()
    back = {p: k for k, p in enumerate(emb)}
    a_l = GroupSubset(lgroup, bits_from(back[p] for p in iter_bits(a.bits)))
    b_l = GroupSubset(lgroup, bits_from(back[p] for p in iter_bits(b.bits)))
    u_l = Subgroup.from_members(lgroup, bits_from(back[p] for p in iter_bits(u.members)))
    witness = is_critical_wrt(a_l, b_l, u_l)
    if not witness.holds:
        raise SoundnessError("pair is not critical relative to U inside L")
    size_sup = len(sup_idx)
    return RelativizeOutcome(
        kind="critical_wrt_u_in_L",
        subgroup_l=sub_l,
        witness=witness,
        constant_slice_measure_a=Fraction(a.size, g.order) / size_sup,
        constant_slice_measure_b=Fraction(b.size, g.order) / size_sup,
    )


# ---------------------------------------------------------------------------
# Chains


def check_chain_criticality(a: GroupSubset, b: GroupSubset, chain) -> bool:
    """Conjunction of slice-criticality along a decreasing chain of normal
    subgroups; when every level holds, the intersection (the last, smallest
    level) is verified to hold as well — the finite instance of the
    limit-stability statement, where chains stabilize and the limit argument
    collapses to direct conjunction."""
    levels = list(chain)
    if not levels:
        raise ChainError("chain must contain at least one subgroup")
    for n in levels:
        if not isinstance(n, Subgroup) or n.parent is not a.parent:
            raise ChainError("chain entries must be subgroups of the pair's group")
        _require_normal(n)
    for prev, nxt in zip(levels, levels[1:]):
        if nxt.members & prev.members != nxt.members:
            raise ChainError("chain must be decreasing")
    outcomes = [is_critical_wrt(a, b, n).holds for n in levels]
    conjunction = all(outcomes)
    if conjunction:
        inter = levels[0].members
        for n in levels[1:]:
            inter &= n.members
        if inter != levels[-1].members:
            raise SoundnessError("decreasing chain failed to end at its intersection")
        if not is_critical_wrt(a, b, Subgroup.from_members(a.parent, inter)).holds:
            raise SoundnessError("criticality failed at the chain intersection")
    return conjunction
