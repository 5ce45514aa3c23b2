"""Subsets of a finite group: product sets, exact measure, stabilizers,
and the size classification of subset pairs.

Measures are exact rationals (normalized counting measure); the pair
classification is an equality test on measures, so no floating point is
allowed anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from ._bits import bits_from, iter_bits
from .errors import EmptySubsetError, ParentMismatchError
from .group_core import FiniteGroup, Subgroup

# Exact rational measure value in [0, 1].
HaarValue = Fraction


class GroupSubset:
    """An immutable subset of a finite group, stored as a bitset."""

    __slots__ = ("parent", "bits")

    def __init__(self, parent: FiniteGroup, bits: int):
        if bits < 0 or bits >> parent.order:
            raise ParentMismatchError("bitset has members outside the group")
        self.parent = parent
        self.bits = bits

    @classmethod
    def from_indices(cls, parent: FiniteGroup, indices) -> "GroupSubset":
        idx = list(indices)
        for i in idx:
            if not 0 <= i < parent.order:
                raise ParentMismatchError(f"element index {i} out of range")
        return cls(parent, bits_from(idx))

    @classmethod
    def from_labels(cls, parent: FiniteGroup, labels) -> "GroupSubset":
        return cls(parent, bits_from(parent.label_index(s) for s in labels))

    @classmethod
    def empty(cls, parent: FiniteGroup) -> "GroupSubset":
        return cls(parent, 0)

    @classmethod
    def full(cls, parent: FiniteGroup) -> "GroupSubset":
        return cls(parent, parent.full_bits)

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    @property
    def is_empty(self) -> bool:
        return self.bits == 0

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.bits))

    @property
    def element_labels(self) -> tuple[str, ...]:
        return tuple(self.parent.labels[i] for i in iter_bits(self.bits))

    def measure(self) -> HaarValue:
        return Fraction(self.size, self.parent.order)

    def __contains__(self, i: int) -> bool:
        return bool((self.bits >> i) & 1)

    def __iter__(self):
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return self.size

    def _same_parent(self, other: "GroupSubset") -> None:
        if other.parent is not self.parent:
            raise ParentMismatchError("subsets belong to different groups")

    def __or__(self, other: "GroupSubset") -> "GroupSubset":
        self._same_parent(other)
        return GroupSubset(self.parent, self.bits | other.bits)

    def __and__(self, other: "GroupSubset") -> "GroupSubset":
        self._same_parent(other)
        return GroupSubset(self.parent, self.bits & other.bits)

    def __sub__(self, other: "GroupSubset") -> "GroupSubset":
        self._same_parent(other)
        return GroupSubset(self.parent, self.bits & ~other.bits)

    def __le__(self, other: "GroupSubset") -> bool:
        self._same_parent(other)
        return self.bits & ~other.bits == 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupSubset)
            and other.parent is self.parent
            and other.bits == self.bits
        )

    def __hash__(self) -> int:
        return hash((id(self.parent), self.bits))

    def __repr__(self) -> str:
        shown = ",".join(self.element_labels[:8])
        more = "…" if self.size > 8 else ""
        return f"GroupSubset({{{shown}{more}}} ⊆ {self.parent.name})"

    def to_json(self) -> list[int]:
        return list(self.indices)


class PairTag(str, Enum):
    """Where m(AB) sits against min(1, m(A)+m(B))."""

    SUB_CRITICAL = "SubCritical"        # m(AB) < min(1, m(A)+m(B))
    CRITICAL_SUM = "CriticalSum"        # m(AB) = m(A)+m(B) < 1
    CRITICAL_FULL = "CriticalFull"      # m(AB) = 1 <= m(A)+m(B)
    SUPER_CRITICAL = "SuperCritical"    # m(AB) > m(A)+m(B)  (sum < 1)


@dataclass(frozen=True)
class PairClass:
    """Classification of a subset pair with its exact measures.

    ``deficit`` is m(A) + m(B) - m(AB); it is positive for SubCritical,
    zero for CriticalSum, and negative for SuperCritical pairs.
    """

    tag: PairTag
    deficit: Fraction
    measure_a: Fraction
    measure_b: Fraction
    measure_product: Fraction
    product: GroupSubset

    def to_json_dict(self) -> dict:
        return {
            "tag": self.tag.value,
            "deficit": str(self.deficit),
            "measure_a": str(self.measure_a),
            "measure_b": str(self.measure_b),
            "measure_product": str(self.measure_product),
            "product": self.product.to_json(),
        }


def product_set(a: GroupSubset, b: GroupSubset) -> GroupSubset:
    """The set of pairwise products {a*b}; empty if either factor is."""
    a._same_parent(b)
    return GroupSubset(a.parent, a.parent.product_bits(a.bits, b.bits))


def haar(a: GroupSubset) -> HaarValue:
    """Normalized counting measure |A| / |G|."""
    return a.measure()


def translate(a: GroupSubset, x: int, side: str = "left") -> GroupSubset:
    """xA (side ``left``) or Ax (side ``right``)."""
    return GroupSubset(a.parent, a.parent.translate_bits(a.bits, x, side))


def invert(a: GroupSubset) -> GroupSubset:
    """The set of inverses of the members."""
    return GroupSubset(a.parent, a.parent.invert_bits(a.bits))


def classify_pair(a: GroupSubset, b: GroupSubset) -> PairClass:
    """Classify (A, B) by comparing m(AB) with min(1, m(A)+m(B)), exactly."""
    a._same_parent(b)
    if a.is_empty or b.is_empty:
        raise EmptySubsetError("classification needs nonempty subsets")
    prod = product_set(a, b)
    ma, mb, mp = a.measure(), b.measure(), prod.measure()
    s = ma + mb
    if mp < min(Fraction(1), s):
        tag = PairTag.SUB_CRITICAL
    elif mp == s and s < 1:
        tag = PairTag.CRITICAL_SUM
    elif mp == 1 and s >= 1:
        tag = PairTag.CRITICAL_FULL
    else:
        tag = PairTag.SUPER_CRITICAL
    return PairClass(
        tag=tag,
        deficit=s - mp,
        measure_a=ma,
        measure_b=mb,
        measure_product=mp,
        product=prod,
    )


def left_stabilizer(a: GroupSubset) -> Subgroup:
    """{x : xA = A} as a subgroup of the parent."""
    if a.is_empty:
        # Every translate of the empty set is empty; stabilizer is everything.
        return Subgroup.full(a.parent)
    g = a.parent
    bits = bits_from(
        x for x in range(g.order) if g.translate_bits(a.bits, x, "left") == a.bits
    )
    return Subgroup(g, bits, _checked=True)


def right_stabilizer(a: GroupSubset) -> Subgroup:
    """{x : Ax = A} as a subgroup of the parent."""
    if a.is_empty:
        return Subgroup.full(a.parent)
    g = a.parent
    bits = bits_from(
        x for x in range(g.order) if g.translate_bits(a.bits, x, "right") == a.bits
    )
    return Subgroup(g, bits, _checked=True)


def stabilizer(a: GroupSubset) -> Subgroup:
    """The two-sided stabilizer {x : xA = A and Ax = A}.

    Under counting measure this coincides with the set of group elements
    whose translation changes A only by a null set (i.e. not at all), so no
    separate almost-everywhere notion is needed.  The one-sided stabilizers
    can differ from it (and from each other) on nonabelian groups.
    """
    g = a.parent
    if a.is_empty:
        return Subgroup.full(g)
    bits = bits_from(
        x
        for x in range(g.order)
        if g.translate_bits(a.bits, x, "left") == a.bits
        and g.translate_bits(a.bits, x, "right") == a.bits
    )
    return Subgroup(g, bits, _checked=True)
