"""Quotient reduction certificates and structure classification for
small-product subset pairs.

Contents: coarsest-quotient certificates for pairs whose product set is
small (the abelian stabilizer-quotient construction and its general-group
analogue), prime-order progression classification, factorization of
product-respecting table pairs through a homomorphism, matching of interval
pullbacks across two projections, canonical splitting of character lists,
and detection of run-pullback ("sturmian") structure behind critical pairs.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ._bits import bits_from, iter_bits
from .errors import (
    BilinearConditionError,
    ClassificationError,
    KernelMismatchError,
    NoMatchingAutomorphismError,
    NotAbelianError,
    PreconditionError,
    SearchBudgetError,
    SelfInverseCharacterError,
    SoundnessError,
    VosperPreconditionError,
)
from .group_core import (
    FiniteGroup,
    Homomorphism,
    Subgroup,
    build_dihedral,
    homomorphisms,
    is_prime,
    quotient,
    subgroups,
)
from .subset_algebra import (
    GroupSubset,
    PairTag,
    classify_pair,
    product_set,
    stabilizer,
)


# ---------------------------------------------------------------------------
# Reduction certificates


@dataclass(frozen=True)
class ReductionCertificate:
    """A quotient model of a pair: A ⊆ projection⁻¹(image_i), likewise B,
    with the product measure carried exactly to the quotient.

    ``overshoot_holds`` records whether m(IJ) = m(I) + m(J) - m({e}) in the
    quotient; the abelian construction guarantees it for strictly small
    products, the general construction only reports it.
    """

    kernel: Subgroup
    quotient: FiniteGroup
    projection: Homomorphism
    image_i: GroupSubset
    image_j: GroupSubset
    product_measure_match: bool
    overshoot_holds: bool

    def to_json_dict(self) -> dict:
        payload = {
            "kernel": sorted(iter_bits(self.kernel.members)),
            "quotient": self.quotient.to_json_dict(),
            "projection": list(self.projection.map),
            "image_i": self.image_i.to_json(),
            "image_j": self.image_j.to_json(),
            "product_measure_match": self.product_measure_match,
            "overshoot_holds": self.overshoot_holds,
        }
        digest = hashlib.sha256(
            json.dumps(payload, sort_keys=True).encode()
        ).hexdigest()
        payload["digest"] = digest
        return payload


def image_subset(h: Homomorphism, a: GroupSubset) -> GroupSubset:
    return GroupSubset(h.target, h.image_bits(a.bits))


def preimage_subset(h: Homomorphism, i: GroupSubset) -> GroupSubset:
    return GroupSubset(h.source, h.preimage_bits(i.bits))


def validate_certificate(
    cert: ReductionCertificate, a: GroupSubset, b: GroupSubset
) -> dict[str, bool]:
    """Recompute every certificate claim from scratch."""
    p = cert.projection
    prod = product_set(a, b)
    image_product = product_set(cert.image_i, cert.image_j)
    contain_a = a <= preimage_subset(p, cert.image_i)
    contain_b = b <= preimage_subset(p, cert.image_j)
    match = image_product.measure() == prod.measure()
    unit = Fraction(1, cert.quotient.order)
    overshoot = image_product.measure() == (
        cert.image_i.measure() + cert.image_j.measure() - unit
    )
    return {
        "containment_a": contain_a,
        "containment_b": contain_b,
        "product_measure_match": match == cert.product_measure_match and match,
        "overshoot_flag_correct": overshoot == cert.overshoot_holds,
        "kernel_is_normal": cert.kernel.is_normal,
    }


def kneser_reduce(a: GroupSubset, b: GroupSubset) -> ReductionCertificate:
    """Certificate through the quotient by the product set's stabilizer.

    Requires an abelian parent and a pair whose product is strictly small
    (deficit > 0) or exactly additive below full measure.  For strictly
    small products the overshoot identity in the quotient is a theorem, so
    its failure raises SoundnessError rather than being reported.
    """
    g = a.parent
    if not g.is_abelian:
        raise NotAbelianError("stabilizer-quotient certificate needs an abelian group")
    cls = classify_pair(a, b)
    if cls.tag not in (PairTag.SUB_CRITICAL, PairTag.CRITICAL_SUM):
        raise ClassificationError(
            f"pair is {cls.tag.value}; certificate covers SubCritical/CriticalSum"
        )
    prod = cls.product
    h = stabilizer(prod)
    m, proj = quotient(g, h)
    image_i = image_subset(proj, a)
    image_j = image_subset(proj, b)
    image_product = product_set(image_i, image_j)
    match = image_product.measure() == prod.measure()
    if not match:
        raise SoundnessError("quotient product measure diverged from m(AB)")
    overshoot = image_product.measure() == (
        image_i.measure() + image_j.measure() - Fraction(1, m.order)
    )
    if cls.tag is PairTag.SUB_CRITICAL and not overshoot:
        raise SoundnessError("overshoot identity failed on a SubCritical pair")
    return ReductionCertificate(
        kernel=h,
        quotient=m,
        projection=proj,
        image_i=image_i,
        image_j=image_j,
        product_measure_match=match,
        overshoot_holds=overshoot,
    )


def kemperman_reduce(a: GroupSubset, b: GroupSubset) -> ReductionCertificate:
    """Coarsest-quotient certificate valid in any finite group.

    Scans normal subgroups largest-first and keeps the first H with
    (AH)(BH) = AB; the quotient by that H carries the product measure
    exactly, while the overshoot identity is only reported (it can fail
    off the abelian case).  H = {e} always qualifies, so a certificate
    always exists.
    """
    g = a.parent
    cls = classify_pair(a, b)
    if cls.tag is not PairTag.SUB_CRITICAL:
        raise ClassificationError(
            f"pair is {cls.tag.value}; this certificate covers SubCritical only"
        )
    prod = cls.product
    chosen: Optional[Subgroup] = None
    for h in sorted(
        subgroups(g, normal_only=True), key=lambda s: (-s.size, s.members)
    ):
        ah = g.product_bits(a.bits, h.members)
        bh = g.product_bits(b.bits, h.members)
        # (AH)(BH) = AB forces AB·H = AB as well, since (AH)(BH)H = (AH)(BH).
        if g.product_bits(ah, bh) == prod.bits:
            chosen = h
            break
    if chosen is None:
        raise SoundnessError("trivial subgroup failed the reduction conditions")
    m, proj = quotient(g, chosen)
    image_i = image_subset(proj, a)
    image_j = image_subset(proj, b)
    image_product = product_set(image_i, image_j)
    match = image_product.measure() == prod.measure()
    if not match:
        raise SoundnessError("quotient product measure diverged from m(AB)")
    overshoot = image_product.measure() == (
        image_i.measure() + image_j.measure() - Fraction(1, m.order)
    )
    return ReductionCertificate(
        kernel=chosen,
        quotient=m,
        projection=proj,
        image_i=image_i,
        image_j=image_j,
        product_measure_match=match,
        overshoot_holds=overshoot,
    )


# ---------------------------------------------------------------------------
# Prime-order progression structure


@dataclass(frozen=True)
class VosperStructure:
    """Common-difference progression structure of a tight prime-order pair."""

    difference: int
    start_a: int
    start_b: int
    lengths: tuple[int, int]
    exceptional: bool

    def to_json_dict(self) -> dict:
        return {
            "difference": self.difference,
            "start_a": self.start_a,
            "start_b": self.start_b,
            "lengths": list(self.lengths),
            "exceptional": self.exceptional,
        }


def _require_standard_cyclic(g: FiniteGroup) -> None:
    n = g.order
    for i in range(n):
        row = g.cayley[i]
        for j in range(n):
            if row[j] != (i + j) % n:
                raise VosperPreconditionError(
                    "group must be the integers mod p with standard indexing"
                )


def _progression_start(g: FiniteGroup, sbits: int, d: int) -> Optional[int]:
    """Start of S as a difference-d progression, or None if it is not one."""
    n = g.order
    shifted = g.translate_bits(sbits, d, "left")
    if (sbits & shifted).bit_count() != sbits.bit_count() - 1:
        return None
    head = sbits & ~shifted
    return (head & -head).bit_length() - 1


def vosper_classify(a: GroupSubset, b: GroupSubset) -> VosperStructure:
    """Classify a tight pair in prime order as same-difference progressions.

    Preconditions: |A|, |B| ≥ 2 and |A+B| = |A| + |B| - 1 ≤ p - 2.  The
    degenerate regimes (singletons, |A+B| ≥ p - 1, complement-type pairs)
    are rejected with an error, never guessed at.
    """
    g = a.parent
    a._same_parent(b)
    if not is_prime(g.order):
        raise VosperPreconditionError("group order must be prime")
    _require_standard_cyclic(g)
    p = g.order
    if a.size < 2 or b.size < 2:
        raise VosperPreconditionError("both sets need at least 2 elements")
    prod = product_set(a, b)
    if prod.size != a.size + b.size - 1:
        raise VosperPreconditionError(
            f"|A+B| = {prod.size} differs from |A|+|B|-1 = {a.size + b.size - 1}"
        )
    if prod.size > p - 2:
        raise VosperPreconditionError(
            f"|A+B| = {prod.size} exceeds p-2 = {p - 2}; degenerate regime"
        )
    for d in range(1, p):
        sa = _progression_start(g, a.bits, d)
        if sa is None:
            continue
        sb = _progression_start(g, b.bits, d)
        if sb is None:
            continue
        return VosperStructure(
            difference=d,
            start_a=sa,
            start_b=sb,
            lengths=(a.size, b.size),
            exceptional=False,
        )
    raise SoundnessError("tight prime-order pair without progression structure")


# ---------------------------------------------------------------------------
# Factorization of product-respecting table pairs


@dataclass(frozen=True)
class BilinearFactorization:
    """Tables α, β with α(x)β(y) a function of xy factor as α = s·π,
    β = π·t for a homomorphism π."""

    s: int
    t: int
    pi: Homomorphism

    def to_json_dict(self) -> dict:
        return {"s": self.s, "t": self.t, "pi": list(self.pi.map)}


def _check_hom_table(
    domain: FiniteGroup, target: FiniteGroup, table: list[int]
) -> None:
    for x in range(domain.order):
        for y in range(domain.order):
            if table[domain.cayley[x][y]] != target.cayley[table[x]][table[y]]:
                raise BilinearConditionError(
                    f"induced map is not a homomorphism at pair ({x}, {y})"
                )


def factorize_bilinear(
    domain: FiniteGroup,
    target: FiniteGroup,
    alpha,
    beta,
) -> BilinearFactorization:
    """Factor α, β through a homomorphism when α(x)β(y) depends only on xy.

    Construction: s = α(e), t = β(e), π(x) = s⁻¹·α(x); the factorization
    identities are then verified exhaustively.
    """
    alpha = [int(v) for v in alpha]
    beta = [int(v) for v in beta]
    n = domain.order
    if len(alpha) != n or len(beta) != n:
        raise BilinearConditionError("tables must cover the whole domain")
    for tab in (alpha, beta):
        for v in tab:
            if not 0 <= v < target.order:
                raise BilinearConditionError("table value outside the target")
    # α(x)β(y) must be constant on each fiber {(x,y) : xy = z}.
    by_product: dict[int, tuple[int, int, int]] = {}
    for x in range(n):
        row = domain.cayley[x]
        for y in range(n):
            val = target.cayley[alpha[x]][beta[y]]
            z = row[y]
            seen = by_product.get(z)
            if seen is None:
                by_product[z] = (val, x, y)
            elif seen[0] != val:
                raise BilinearConditionError(
                    f"α(x)β(y) differs across xy = {z}: "
                    f"pairs ({seen[1]},{seen[2]}) and ({x},{y})"
                )
    e = domain.identity
    s = alpha[e]
    t = beta[e]
    s_inv = target.inverse[s]
    pi_table = [target.cayley[s_inv][alpha[x]] for x in range(n)]
    _check_hom_table(domain, target, pi_table)
    pi = Homomorphism(domain, target, pi_table, validate=False)
    for x in range(n):
        if target.cayley[s][pi_table[x]] != alpha[x]:
            raise SoundnessError(f"α(x) = s·π(x) failed at x = {x}")
    for y in range(n):
        if target.cayley[pi_table[y]][t] != beta[y]:
            raise SoundnessError(f"β(y) = π(y)·t failed at y = {y}")
    return BilinearFactorization(s=s, t=t, pi=pi)


# ---------------------------------------------------------------------------
# Matching interval pullbacks across two projections


def match_pullbacks(
    pi1: Homomorphism,
    pi2: Homomorphism,
    i1: GroupSubset,
    i2: GroupSubset,
) -> Homomorphism:
    """The target automorphism α with π₁ = α∘π₂ and I₁ = α(I₂).

    Since π₁ and π₂ are surjective with equal kernels, α is forced:
    α(π₂(x)) = π₁(x).  The interval identity is then a genuine check.
    """
    if pi1.source is not pi2.source or pi1.target is not pi2.target:
        raise PreconditionError("projections", "projections must share source and target")
    if not (pi1.surjective and pi2.surjective):
        raise PreconditionError("projections", "both projections must be surjective")
    tgt = pi1.target
    if i1.parent is not tgt or i2.parent is not tgt:
        raise PreconditionError("intervals", "interval sets must live in the target")
    if stabilizer(i1).size != 1 or stabilizer(i2).size != 1:
        raise PreconditionError(
            "stabilizer", "interval sets must have trivial stabilizer"
        )
    if pi1.kernel().members != pi2.kernel().members:
        raise KernelMismatchError("projections have different kernels")
    alpha_table = [-1] * tgt.order
    for x in range(pi1.source.order):
        m2, m1 = pi2.map[x], pi1.map[x]
        if alpha_table[m2] < 0:
            alpha_table[m2] = m1
        elif alpha_table[m2] != m1:
            raise KernelMismatchError(
                "projections disagree on a common kernel coset"
            )
    alpha = Homomorphism(tgt, tgt, alpha_table)
    if not alpha.is_bijective:
        raise NoMatchingAutomorphismError("induced map is not a bijection")
    if alpha.image_bits(i2.bits) != i1.bits:
        raise NoMatchingAutomorphismError(
            "no target automorphism carries the second interval to the first"
        )
    return alpha


# ---------------------------------------------------------------------------
# Canonical character splitting


def split_characters(
    chars: list[Homomorphism],
) -> tuple[list[Homomorphism], list[Homomorphism]]:
    """Split characters into (S, Š) with Š the pointwise inverses of S.

    The input must be closed under pointwise inversion and contain no
    self-inverse character (those make the two halves collide).  Š is
    returned aligned with S: Š[i] is the inverse of S[i].
    """
    if not chars:
        return [], []
    tgt = chars[0].target
    # Cyclic target: some element generates everything.
    if not any(tgt.element_order(x) == tgt.order for x in range(tgt.order)):
        raise PreconditionError("cyclic-target", "characters must map into a cyclic group")
    tables = {c.map for c in chars}
    if len(tables) != len(chars):
        raise PreconditionError("distinct", "duplicate characters in input")
    inv_of: dict[tuple[int, ...], tuple[int, ...]] = {}
    for c in chars:
        if c.target is not tgt:
            raise PreconditionError("common-target", "characters must share one target")
        inv_table = tuple(tgt.inverse[v] for v in c.map)
        if inv_table == c.map:
            raise SelfInverseCharacterError(
                "a character equals its own inverse; no proper split exists"
            )
        if inv_table not in tables:
            raise PreconditionError(
                "inversion-closed",
                "input must contain the inverse of every character",
            )
        inv_of[c.map] = inv_table
    by_table = {c.map: c for c in chars}
    small = sorted(t for t in tables if t < inv_of[t])
    s_list = [by_table[t] for t in small]
    s_check = [by_table[inv_of[t]] for t in small]
    return s_list, s_check


# ---------------------------------------------------------------------------
# Run-pullback detection


@dataclass(frozen=True)
class SturmianWitness:
    """A projection and shifted runs modeling a critical pair exactly.

    Contract: A ⊆ π⁻¹(s′·run_i), B ⊆ π⁻¹(run_j·t′), and the product of the
    shifted runs in the quotient has the same measure as AB in the source.
    """

    projection: Homomorphism
    shift_s: int
    shift_t: int
    run_i: GroupSubset
    run_j: GroupSubset

    def to_json_dict(self) -> dict:
        return {
            "target": self.projection.target.to_json_dict(),
            "projection": list(self.projection.map),
            "shift_s": self.shift_s,
            "shift_t": self.shift_t,
            "run_i": self.run_i.to_json(),
            "run_j": self.run_j.to_json(),
        }


def witness_checks(
    w: SturmianWitness, a: GroupSubset, b: GroupSubset
) -> dict[str, bool]:
    """Independent re-validation of a witness's three claims."""
    m = w.projection.target
    shifted_i = m.translate_bits(w.run_i.bits, w.shift_s, "left")
    shifted_j = m.translate_bits(w.run_j.bits, w.shift_t, "right")
    pull_a = w.projection.preimage_bits(shifted_i)
    pull_b = w.projection.preimage_bits(shifted_j)
    prod_g = product_set(a, b)
    prod_m = m.product_bits(shifted_i, shifted_j)
    return {
        "containment_a": a.bits & ~pull_a == 0,
        "containment_b": b.bits & ~pull_b == 0,
        "product_measure_match": Fraction(prod_m.bit_count(), m.order)
        == prod_g.measure(),
    }


def _minimal_run(m: int, values: int) -> tuple[int, int]:
    """Minimal contiguous run (start, length) in Z_m covering a value bitset.

    Deterministic tie-break: among largest circular gaps, the run starting
    at the least element wins.  A full image gets the whole group.
    """
    elems = list(iter_bits(values))
    k = len(elems)
    if k == m:
        return 0, m
    best_gap = -1
    best_start = 0
    for i, v in enumerate(elems):
        nxt = elems[(i + 1) % k]
        gap = (nxt - v - 1) % m if k > 1 else m - 1
        start = (v + gap + 1) % m  # element after this gap
        if gap > best_gap or (gap == best_gap and start < best_start):
            best_gap = gap
            best_start = start
    return best_start, m - best_gap


def _cyclic_candidates(m_ord: int, image_a: int, image_b: int):
    """Shifted-run shapes for a cyclic target: runs start at 0, shifts carry
    them onto the minimal covering runs of the two images."""
    sa, la = _minimal_run(m_ord, image_a)
    sb, lb = _minimal_run(m_ord, image_b)
    run_i = bits_from(range(la))
    run_j = bits_from(range(lb))
    yield sa, sb, run_i, run_j


def _odd_run_cover(m: int, values: int) -> Optional[tuple[int, int]]:
    """Minimal odd-length run covering the values: (center, half_width)."""
    if values == 0:
        return None
    start, length = _minimal_run(m, values)
    if length % 2 == 0:
        length += 1
        if length > m:
            return None
    return (start + length // 2) % m, length // 2


def _dihedral_candidates(m: int, image_bits_a: int, image_bits_b: int):
    """Shifted symmetric-run shapes for a dihedral target D_m.

    Elements of D_m are indexed (i, ρ) → 2i + ρ.  The left shape is
    (c,+)·(R ⋊ {±}) with R a symmetric run around 0; the right shape is
    (R ⋊ {±})·(d, υ), whose υ-fiber is R+d and whose −υ-fiber is −(R+d).
    """
    def fibers(bits: int) -> tuple[int, int]:
        plus = 0
        minus = 0
        for idx in iter_bits(bits):
            i, rho = idx >> 1, idx & 1
            if rho == 0:
                plus |= 1 << i
            else:
                minus |= 1 << i
        return plus, minus

    def neg_bits(v: int) -> int:
        return bits_from((-i) % m for i in iter_bits(v))

    def sym_run_bits(half: int) -> int:
        return bits_from((d % m) for d in range(-half, half + 1))

    def twist(run: int) -> int:
        out = 0
        for i in iter_bits(run):
            out |= 1 << (2 * i)
            out |= 1 << (2 * i + 1)
        return out

    pa, ma = fibers(image_bits_a)
    covered_a = _odd_run_cover(m, pa | ma)
    if covered_a is None:
        return
    ca, half_a = covered_a
    if 2 * half_a + 1 > m:
        return
    run_i = twist(sym_run_bits(half_a))
    shift_s = 2 * ca  # element (ca, +)

    pb, mb = fibers(image_bits_b)
    for upsilon in (0, 1):
        want = (pb | neg_bits(mb)) if upsilon == 0 else (mb | neg_bits(pb))
        covered_b = _odd_run_cover(m, want)
        if covered_b is None:
            continue
        cb, half_b = covered_b
        if 2 * half_b + 1 > m:
            continue
        run_j = twist(sym_run_bits(half_b))
        shift_t = 2 * cb + upsilon  # element (cb, υ)
        yield shift_s, shift_t, run_i, run_j


def detect_sturmian_reduction(
    a: GroupSubset, b: GroupSubset, budget: int = 10**6
) -> Optional[SturmianWitness]:
    """Search for a projection + shifted-run model of an exactly-additive pair.

    Targets are cyclic groups Z_d for divisors d of |G| (largest first) and
    dihedral groups of matching order; for each surjective projection the
    minimal covering runs of the two images are the only shapes that can
    match the product measure (any covering run at least as long strictly
    grows the run product, which must stay equal to m(AB) < 1), so checking
    them is a complete search at each projection.  Returns the first witness
    in deterministic order, None if every candidate fails, and raises the
    budget error if the candidate count would exceed ``budget``.
    """
    g = a.parent
    cls = classify_pair(a, b)
    if cls.tag is not PairTag.CRITICAL_SUM:
        raise ClassificationError(
            f"pair is {cls.tag.value}; detection applies to CriticalSum pairs"
        )
    target_measure = cls.measure_product
    examined = 0
    divisors = [d for d in range(g.order, 1, -1) if g.order % d == 0]
    for d in divisors:
        targets: list[tuple[FiniteGroup, bool]] = [(_cyclic_target(d), False)]
        if d % 2 == 0 and d // 2 >= 3:
            targets.append((_dihedral_target(d // 2), True))
        for tgt, twisted in targets:
            homs = homomorphisms(g, tgt, surjective_only=True, budget=budget)
            for proj in homs:
                image_a = proj.image_bits(a.bits)
                image_b = proj.image_bits(b.bits)
                if twisted:
                    candidates = _dihedral_candidates(
                        tgt.order // 2, image_a, image_b
                    )
                else:
                    candidates = _cyclic_candidates(tgt.order, image_a, image_b)
                for shift_s, shift_t, run_i, run_j in candidates:
                    examined += 1
                    if examined > budget:
                        raise SearchBudgetError(
                            f"candidate count exceeded budget {budget}"
                        )
                    shifted_i = tgt.translate_bits(run_i, shift_s, "left")
                    shifted_j = tgt.translate_bits(run_j, shift_t, "right")
                    if image_a & ~shifted_i or image_b & ~shifted_j:
                        continue
                    prod = tgt.product_bits(shifted_i, shifted_j)
                    if Fraction(prod.bit_count(), tgt.order) == target_measure:
                        return SturmianWitness(
                            projection=proj,
                            shift_s=shift_s,
                            shift_t=shift_t,
                            run_i=GroupSubset(tgt, run_i),
                            run_j=GroupSubset(tgt, run_j),
                        )
    return None


_TARGET_CACHE: dict[tuple[str, int], FiniteGroup] = {}


def _cyclic_target(n: int) -> FiniteGroup:
    got = _TARGET_CACHE.get(("Z", n))
    if got is None:
        from .group_core import build_cyclic

        got = build_cyclic(n)
        _TARGET_CACHE[("Z", n)] = got
    return got


def _dihedral_target(m: int) -> FiniteGroup:
    got = _TARGET_CACHE.get(("D", m))
    if got is None:
        got = build_dihedral(m)
        _TARGET_CACHE[("D", m)] = got
    return got
