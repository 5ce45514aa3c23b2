"""Discretized shifted-interval models inside finite groups.

The circle construction (symmetric closed intervals, optionally on the
twisted extension) discretizes at resolution 1/m: runs of odd length 2k+1
around 0 in Z_m, or their dihedral doubles.  Pulling the runs back through
the natural projection and thinning one set by a null-sized layer (one
element per fiber on a few fibers, keeping every fiber inhabited) produces
exactly-additive pairs whose product is the full pullback of the run
product; the reduction detector must then recover a projection witness with
the original interval measures.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._bits import bits_from
from .errors import PreconditionError, SoundnessError
from .group_core import (
    FiniteGroup,
    Subgroup,
    build_cyclic,
    build_dihedral,
    build_product,
)
from .subset_algebra import GroupSubset, PairTag, classify_pair

__all__ = ["SturmianModel", "discretized_plain_model", "discretized_twisted_model"]


@dataclass(frozen=True)
class SturmianModel:
    """A finite-group pair discretizing a shifted symmetric-interval pair.

    ``a`` is the thinned pullback (measure one fiber-layer short of the
    interval), ``b`` the full pullback; ``kernel`` is the projection kernel.
    ``expected_measure_i``/``j`` are the interval measures a detection
    witness must reproduce, and ``expected_product_measure`` the common
    value m(AB) = m(A) + m(B).
    """

    group: FiniteGroup
    a: GroupSubset
    b: GroupSubset
    kernel: Subgroup
    kind: str  # "plain" | "twisted"
    modulus: int
    half_width_i: int
    half_width_j: int
    expected_measure_i: Fraction
    expected_measure_j: Fraction
    expected_product_measure: Fraction


def _check_widths(m: int, k_i: int, k_j: int) -> None:
    if m < 2:
        raise PreconditionError("modulus", "resolution must be at least 2")
    if k_i < 1:
        raise PreconditionError(
            "half-width", "the thinned side needs half-width at least 1"
        )
    if k_j < 0:
        raise PreconditionError("half-width", "half-widths must be nonnegative")
    if 2 * k_i + 2 * k_j + 1 >= m:
        raise PreconditionError(
            "measure-sum", "interval measures must sum below full measure"
        )


def _verify(model: SturmianModel) -> SturmianModel:
    cls = classify_pair(model.a, model.b)
    if cls.tag is not PairTag.CRITICAL_SUM:
        raise SoundnessError(f"model pair classified {cls.tag.value}")
    if cls.measure_product != model.expected_product_measure:
        raise SoundnessError("model product measure drifted from the interval sum")
    return model


def discretized_plain_model(m: int, k_i: int, k_j: int) -> SturmianModel:
    """Pair in Z_2 × Z_m projecting onto runs I = [-k_i, k_i],
    J = [-k_j, k_j] in Z_m.

    B is the full pullback of J; A is the pullback of I minus one element in
    each of two distinct fibers (the run's endpoint fibers), which brings
    m(A) from (2k_i+1)/m down to 2k_i/m while leaving every fiber inhabited,
    so AB is still the full pullback of I+J and the pair is exactly
    additive: m(AB) = (2k_i + 2k_j + 1)/m = m(A) + m(B).
    """
    _check_widths(m, k_i, k_j)
    g = build_product(build_cyclic(2), build_cyclic(m))

    def idx(layer: int, pos: int) -> int:
        return layer * m + (pos % m)

    run_i = [(i % m) for i in range(-k_i, k_i + 1)]
    run_j = [(j % m) for j in range(-k_j, k_j + 1)]
    a_members = {idx(layer, i) for layer in (0, 1) for i in run_i}
    a_members -= {idx(1, -k_i), idx(1, k_i)}
    b_members = {idx(layer, j) for layer in (0, 1) for j in run_j}
    kernel = Subgroup.from_members(g, bits_from((idx(0, 0), idx(1, 0))))
    model = SturmianModel(
        group=g,
        a=GroupSubset(g, bits_from(a_members)),
        b=GroupSubset(g, bits_from(b_members)),
        kernel=kernel,
        kind="plain",
        modulus=m,
        half_width_i=k_i,
        half_width_j=k_j,
        expected_measure_i=Fraction(2 * k_i + 1, m),
        expected_measure_j=Fraction(2 * k_j + 1, m),
        expected_product_measure=Fraction(2 * (k_i + k_j) + 1, m),
    )
    return _verify(model)


def discretized_twisted_model(m: int, k_i: int, k_j: int) -> SturmianModel:
    """Pair in D_{2m} projecting onto twisted runs Ĩ = I ⋊ {±},
    J̃ = J ⋊ {±} in D_m.

    Elements of D_n are indexed (rotation, reflection) → 2·rot + ref; the
    projection D_{2m} → D_m reduces the rotation mod m, with central kernel
    {e, r^m}.  A is the pullback of Ĩ minus one element in each of the four
    endpoint fibers (both reflection layers at rotation ±k_i), dropping
    m(A) by the kernel layer 1/m; B is the full pullback of J̃.
    """
    _check_widths(m, k_i, k_j)
    if m < 3:
        raise PreconditionError("modulus", "dihedral target needs modulus ≥ 3")
    g = build_dihedral(2 * m)

    def idx(rot: int, ref: int) -> int:
        return 2 * (rot % (2 * m)) + ref

    lift_i = [(i % m) + shift for i in range(-k_i, k_i + 1) for shift in (0, m)]
    lift_j = [(j % m) + shift for j in range(-k_j, k_j + 1) for shift in (0, m)]
    a_members = {idx(r, ref) for r in lift_i for ref in (0, 1)}
    # Remove the upper-lift element of each endpoint fiber, both layers.
    a_members -= {
        idx((e % m) + m, ref) for e in (-k_i, k_i) for ref in (0, 1)
    }
    b_members = {idx(r, ref) for r in lift_j for ref in (0, 1)}
    kernel = Subgroup.from_members(g, bits_from((idx(0, 0), idx(m, 0))))
    model = SturmianModel(
        group=g,
        a=GroupSubset(g, bits_from(a_members)),
        b=GroupSubset(g, bits_from(b_members)),
        kernel=kernel,
        kind="twisted",
        modulus=m,
        half_width_i=k_i,
        half_width_j=k_j,
        expected_measure_i=Fraction(2 * k_i + 1, m),
        expected_measure_j=Fraction(2 * k_j + 1, m),
        expected_product_measure=Fraction(2 * (k_i + k_j) + 1, m),
    )
    return _verify(model)


def feasible_plain_instances(max_n: int) -> list[tuple[int, int, int]]:
    """All (m, k_i, k_j) with 2 ≤ m ≤ max_n admitting a plain model."""
    out = []
    for m in range(2, max_n + 1):
        for k_i in range(1, m):
            for k_j in range(0, m):
                if 2 * k_i + 2 * k_j + 1 < m:
                    out.append((m, k_i, k_j))
    return out


def feasible_twisted_instances(max_group_rotations: int) -> list[tuple[int, int, int]]:
    """All (m, k_i, k_j) with D_{2m} of rotation order 2m ≤ the given bound."""
    out = []
    for m in range(3, max_group_rotations // 2 + 1):
        for k_i in range(1, m):
            for k_j in range(0, m):
                if 2 * k_i + 2 * k_j + 1 < m:
                    out.append((m, k_i, k_j))
    return out
