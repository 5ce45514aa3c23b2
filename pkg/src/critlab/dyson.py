"""The pair transform A <- A ∪ Bx, B <- x^{-1}A ∩ B with full trace capture.

One step grows A and shrinks B while (in abelian groups) conserving
|A| + |B| and keeping the product set inside the original one.  The runner
applies a deterministic pivot rule until it yields no pivot, recording every
intermediate pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

from .errors import (
    EmptySubsetError,
    NotAbelianError,
    PivotError,
    SoundnessError,
)
from .group_core import FiniteGroup
from .subset_algebra import GroupSubset

# A pivot rule inspects (group, A bits, B bits) and returns the next pivot
# element index, or None to stop.
PivotRule = Callable[[FiniteGroup, int, int], Optional[int]]


class TerminationReason(str, Enum):
    NO_SHRINKING_PIVOT = "no_shrinking_pivot"
    B_IS_TRANSLATE_OF_SUBGROUP = "b_is_translate_of_subgroup"
    STEP_LIMIT = "step_limit"


@dataclass(frozen=True)
class DysonStep:
    pivot: int
    a: GroupSubset
    b: GroupSubset


@dataclass(frozen=True)
class DysonTrace:
    """Initial pair, every (pivot, A_n, B_n) in order, and why the run ended."""

    initial_a: GroupSubset
    initial_b: GroupSubset
    steps: tuple[DysonStep, ...]
    reason: TerminationReason

    @property
    def final_a(self) -> GroupSubset:
        return self.steps[-1].a if self.steps else self.initial_a

    @property
    def final_b(self) -> GroupSubset:
        return self.steps[-1].b if self.steps else self.initial_b

    def to_json_list(self) -> list[dict]:
        g = self.initial_a.parent

        def row(step: int, pivot: Optional[int], a: GroupSubset, b: GroupSubset):
            return {
                "step": step,
                "pivot": None if pivot is None else g.labels[pivot],
                "A": a.to_json(),
                "B": b.to_json(),
                "measures": {"A": str(a.measure()), "B": str(b.measure())},
            }

        out = [row(0, None, self.initial_a, self.initial_b)]
        for i, s in enumerate(self.steps, start=1):
            out.append(row(i, s.pivot, s.a, s.b))
        return out


def _step_bits(g: FiniteGroup, abits: int, bbits: int, x: int) -> tuple[int, int]:
    new_a = abits | g.translate_bits(bbits, x, "right")
    new_b = g.translate_bits(abits, g.inverse[x], "left") & bbits
    return new_a, new_b


def dyson_step(
    a: GroupSubset, b: GroupSubset, x: int
) -> tuple[GroupSubset, GroupSubset]:
    """One transform step (A ∪ Bx, x^{-1}A ∩ B) for a pivot x ∈ A.

    If e ∈ B then e stays in the new B (x ∈ A puts e into x^{-1}A).  On
    abelian parents |A| + |B| is conserved and the conservation is checked.
    """
    a._same_parent(b)
    g = a.parent
    if a.is_empty or b.is_empty:
        raise EmptySubsetError("transform needs nonempty subsets")
    if x not in a:
        raise PivotError(f"pivot {g.labels[x]} is not in A")
    new_a, new_b = _step_bits(g, a.bits, b.bits, x)
    if g.is_abelian:
        if new_a.bit_count() + new_b.bit_count() != a.size + b.size:
            raise SoundnessError("conservation |A|+|B| failed on abelian parent")
    return GroupSubset(g, new_a), GroupSubset(g, new_b)


def least_shrinking_pivot(g: FiniteGroup, abits: int, bbits: int) -> Optional[int]:
    """Default rule: least x ∈ A making B strictly smaller but nonempty."""
    bsize = bbits.bit_count()
    rest = abits
    while rest:
        x = (rest & -rest).bit_length() - 1
        rest &= rest - 1
        nb = g.translate_bits(abits, g.inverse[x], "left") & bbits
        if 0 < nb.bit_count() < bsize:
            return x
    return None


def _translate_of_subgroup(g: FiniteGroup, bbits: int) -> bool:
    b0 = (bbits & -bbits).bit_length() - 1
    left = g.translate_bits(bbits, g.inverse[b0], "left")
    if g.is_subgroup_bits(left):
        return True
    right = g.translate_bits(bbits, g.inverse[b0], "right")
    return g.is_subgroup_bits(right)


def _run_bits(
    g: FiniteGroup,
    a0: int,
    b0: int,
    rule: PivotRule,
    limit: int,
) -> tuple[list[tuple[int, int, int]], TerminationReason]:
    steps: list[tuple[int, int, int]] = []
    abits, bbits = a0, b0
    while True:
        x = rule(g, abits, bbits)
        if x is None:
            if _translate_of_subgroup(g, bbits):
                return steps, TerminationReason.B_IS_TRANSLATE_OF_SUBGROUP
            return steps, TerminationReason.NO_SHRINKING_PIVOT
        if len(steps) >= limit:
            return steps, TerminationReason.STEP_LIMIT
        if not (abits >> x) & 1:
            raise PivotError(f"rule chose pivot {g.labels[x]} outside A")
        abits, bbits = _step_bits(g, abits, bbits, x)
        if bbits == 0:
            raise PivotError(
                f"pivot {g.labels[x]} empties B; traces keep B nonempty"
            )
        steps.append((x, abits, bbits))


def dyson_run(
    a: GroupSubset,
    b: GroupSubset,
    rule: Optional[PivotRule] = None,
    step_limit: Optional[int] = None,
    unsafe_nonabelian: bool = False,
) -> DysonTrace:
    """Run the transform to termination under a deterministic pivot rule.

    The parent must be abelian (the monotonicity and conservation guarantees
    use commutativity); ``unsafe_nonabelian=True`` permits experimentation
    with no invariant guarantees.  Termination reasons: the rule yields no
    pivot and B is a translate of a subgroup; the rule yields no pivot
    otherwise; or the step limit (default |B| + |G|) was reached.
    """
    a._same_parent(b)
    g = a.parent
    if a.is_empty or b.is_empty:
        raise EmptySubsetError("transform needs nonempty subsets")
    if not g.is_abelian and not unsafe_nonabelian:
        raise NotAbelianError(
            "transform guarantees hold for abelian groups only "
            "(pass unsafe_nonabelian=True to experiment)"
        )
    if rule is None:
        rule = least_shrinking_pivot
    if step_limit is None:
        step_limit = b.size + g.order
    raw, reason = _run_bits(g, a.bits, b.bits, rule, step_limit)
    steps = tuple(
        DysonStep(pivot=x, a=GroupSubset(g, ab), b=GroupSubset(g, bb))
        for x, ab, bb in raw
    )
    return DysonTrace(initial_a=a, initial_b=b, steps=steps, reason=reason)
