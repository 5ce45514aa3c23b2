"""Exact rational arithmetic for closed arcs on the circle ℚ/ℤ and on its
twisted extension by the negation flip.

Sets are finite unions of closed rational arcs plus finite added/removed
point sets modeling measure-zero corrections.  All predicates are exact:
sumsets, measures, stability, regularity, the symmetric-interval pair
construction, and the rigidity argument that upgrades measure-level equality
to genuine set containment.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from .errors import (
    PointCorrectionError,
    PreconditionError,
    RigidityPreconditionError,
    SoundnessError,
)

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" into an exact rational."""
    return Fraction(text.strip())


def format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)


def _mod1(x: Fraction) -> Fraction:
    return x - (x // 1)


# ---------------------------------------------------------------------------
# Arcs and canonical arc sets


@dataclass(frozen=True, order=True)
class Arc:
    """A closed arc [start, start+length] on the circle; length 0 is a point,
    length 1 the full circle."""

    start: Fraction
    length: Fraction

    def __post_init__(self):
        if not (ZERO <= self.start < ONE):
            raise PreconditionError("arc", f"start {self.start} outside [0,1)")
        if not (ZERO <= self.length <= ONE):
            raise PreconditionError("arc", f"length {self.length} outside [0,1]")

    @property
    def end(self) -> Fraction:
        return _mod1(self.start + self.length)

    def to_json_dict(self) -> dict:
        return {"start": format_rational(self.start), "length": format_rational(self.length)}


def arc(start, length) -> Arc:
    """Arc with the start normalized into [0, 1)."""
    return Arc(_mod1(Fraction(start)), Fraction(length))


Segment = tuple[Fraction, Fraction]  # lo <= hi, both within [0, 1]


def _segments(arcs: Iterable[Arc]) -> list[Segment]:
    """Unroll circle arcs into line segments in [0,1], splitting at the wrap."""
    out: list[Segment] = []
    for a in arcs:
        hi = a.start + a.length
        if hi <= ONE:
            out.append((a.start, hi))
        else:
            out.append((a.start, ONE))
            out.append((ZERO, hi - ONE))
    out.sort()
    return out


def _merge_segments(segs: list[Segment]) -> list[Segment]:
    segs = sorted(segs)
    merged: list[Segment] = []
    for lo, hi in segs:
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return merged


def _arcs_from_segments(segs: list[Segment]) -> tuple[Arc, ...]:
    """Rejoin line segments into canonical circle arcs (wrap-aware)."""
    merged = _merge_segments(segs)
    if not merged:
        return ()
    total = sum(hi - lo for lo, hi in merged)
    if total >= ONE:
        return (Arc(ZERO, ONE),)
    if len(merged) >= 2 and merged[0][0] == ZERO and merged[-1][1] == ONE:
        first = merged.pop(0)
        lo, _ = merged.pop()
        merged_arc = Arc(lo, (ONE - lo) + first[1])
        arcs = [Arc(lo_, hi_ - lo_) for lo_, hi_ in merged]
        arcs.append(merged_arc)
        return tuple(sorted(arcs))
    return tuple(sorted(Arc(lo, hi - lo) for lo, hi in merged))


class ArcSet:
    """Canonical finite union of closed arcs with point corrections.

    The represented set is (arcs ∪ added_points) \\ removed_points.  The
    canonical form keeps arcs disjoint and non-touching (touching closed arcs
    merge), added points strictly outside the arcs, and removed points
    strictly inside them; measure ignores the point sets.
    """

    __slots__ = ("arcs", "added_points", "removed_points")

    def __init__(self, arcs: tuple[Arc, ...], added: frozenset, removed: frozenset):
        # Internal constructor: inputs are already canonical (use .make()).
        self.arcs = arcs
        self.added_points = added
        self.removed_points = removed

    @classmethod
    def make(cls, arcs: Iterable[Arc] = (), added=(), removed=()) -> "ArcSet":
        arcs = list(arcs)
        positive = [a for a in arcs if a.length > 0]
        zero_points = [a.start for a in arcs if a.length == 0]
        canon = _arcs_from_segments(_segments(positive))
        covered = lambda p: _point_in_arcs(canon, p)  # noqa: E731
        added_n = {_mod1(Fraction(p)) for p in added}
        removed_n = {_mod1(Fraction(p)) for p in removed}
        # A point both added and removed is simply absent.
        both = added_n & removed_n
        added_n -= both
        removed_n -= both
        # Zero-length arcs are honest members: keep them as isolated points
        # unless a positive arc absorbs them or a removal cancels them.
        zero_keep: set[Fraction] = set()
        for p in zero_points:
            if covered(p):
                continue  # inside a positive arc; a removal there survives
            if p in removed_n:
                removed_n.discard(p)  # cancels the isolated point entirely
                continue
            zero_keep.add(p)
        added_final = frozenset(
            p for p in added_n if not covered(p) and p not in zero_keep
        )
        removed_final = frozenset(p for p in removed_n if covered(p))
        zero_final = tuple(Arc(p, ZERO) for p in sorted(zero_keep))
        all_arcs = tuple(sorted(canon + zero_final))
        return cls(all_arcs, added_final, removed_final)

    @classmethod
    def from_intervals(cls, *pairs) -> "ArcSet":
        return cls.make([arc(s, l) for s, l in pairs])

    @classmethod
    def empty(cls) -> "ArcSet":
        return cls.make([])

    @classmethod
    def full(cls) -> "ArcSet":
        return cls.make([Arc(ZERO, ONE)])

    # -- basic queries ------------------------------------------------------

    @property
    def has_corrections(self) -> bool:
        return bool(self.added_points or self.removed_points)

    @property
    def positive_arcs(self) -> tuple[Arc, ...]:
        return tuple(a for a in self.arcs if a.length > 0)

    @property
    def zero_arcs(self) -> tuple[Arc, ...]:
        return tuple(a for a in self.arcs if a.length == 0)

    @property
    def is_empty(self) -> bool:
        return not self.arcs and not self.added_points

    def measure(self) -> Fraction:
        return sum((a.length for a in self.arcs), ZERO)

    def contains(self, point) -> bool:
        p = _mod1(Fraction(point))
        if _point_in_arcs(self.arcs, p):
            return p not in self.removed_points
        return p in self.added_points

    def skeleton(self) -> "ArcSet":
        """The arcs alone, corrections dropped."""
        if not self.has_corrections:
            return self
        return ArcSet(self.arcs, frozenset(), frozenset())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ArcSet)
            and self.arcs == other.arcs
            and self.added_points == other.added_points
            and self.removed_points == other.removed_points
        )

    def __hash__(self) -> int:
        return hash((self.arcs, self.added_points, self.removed_points))

    def __repr__(self) -> str:
        parts = [f"[{format_rational(a.start)}+{format_rational(a.length)}]" for a in self.arcs]
        extra = ""
        if self.added_points:
            extra += " +" + "{" + ",".join(sorted(map(format_rational, self.added_points))) + "}"
        if self.removed_points:
            extra += " -" + "{" + ",".join(sorted(map(format_rational, self.removed_points))) + "}"
        return f"ArcSet({' '.join(parts)}{extra})"

    def to_json_dict(self) -> dict:
        return {
            "arcs": [a.to_json_dict() for a in self.arcs],
            "added": sorted(map(format_rational, self.added_points)),
            "removed": sorted(map(format_rational, self.removed_points)),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ArcSet":
        arcs = [
            arc(parse_rational(d["start"]), parse_rational(d["length"]))
            for d in data.get("arcs", [])
        ]
        return cls.make(
            arcs,
            [parse_rational(p) for p in data.get("added", [])],
            [parse_rational(p) for p in data.get("removed", [])],
        )


def _point_in_arcs(arcs: Iterable[Arc], p: Fraction) -> bool:
    for a in arcs:
        hi = a.start + a.length
        if a.start <= p <= hi:
            return True
        # Closed arcs reaching the seam contain the wrapped residue: an arc
        # ending exactly at 1 contains 0, and a wrapping arc covers [0, hi-1].
        if hi >= ONE and p <= hi - ONE:
            return True
    return False


def _require_plain(a: ArcSet, what: str) -> None:
    if a.has_corrections:
        raise PointCorrectionError(f"{what} rejects sets with point corrections")


def translate_arcset(a: ArcSet, c) -> ArcSet:
    c = Fraction(c)
    return ArcSet.make(
        [arc(x.start + c, x.length) for x in a.arcs],
        [_mod1(p + c) for p in a.added_points],
        [_mod1(p + c) for p in a.removed_points],
    )


def negate_arcset(a: ArcSet) -> ArcSet:
    return ArcSet.make(
        [arc(-x.start - x.length, x.length) for x in a.arcs],
        [_mod1(-p) for p in a.added_points],
        [_mod1(-p) for p in a.removed_points],
    )


def union_arcsets(a: ArcSet, b: ArcSet) -> ArcSet:
    """Exact union; corrections are resolved by true membership."""
    arcs = list(a.arcs) + list(b.arcs)
    candidates = (
        set(a.added_points) | set(a.removed_points)
        | set(b.added_points) | set(b.removed_points)
    )
    base = ArcSet.make(arcs)
    added, removed = [], []
    for p in candidates:
        member = a.contains(p) or b.contains(p)
        inside = _point_in_arcs(base.arcs, p)
        if member and not inside:
            added.append(p)
        elif not member and inside:
            removed.append(p)
    return ArcSet.make(arcs, added, removed)


def intersect_arcsets(a: ArcSet, b: ArcSet) -> ArcSet:
    """Exact intersection of correction-free arc sets."""
    _require_plain(a, "intersection")
    _require_plain(b, "intersection")
    segs_a = _segments(a.arcs)
    segs_b = _segments(b.arcs)
    out: list[Segment] = []
    for lo1, hi1 in segs_a:
        for lo2, hi2 in segs_b:
            lo, hi = max(lo1, lo2), min(hi1, hi2)
            if lo <= hi:
                out.append((lo, hi))
    # The seam point 0 has two unrolled names (0 and 1), so segments meeting
    # it from opposite sides never overlap on the line; decide it directly.
    if _point_in_arcs(a.arcs, ZERO) and _point_in_arcs(b.arcs, ZERO):
        out.append((ZERO, ZERO))
    # Points at the wrap seam (0 vs 1) name the same circle point; the
    # ArcSet factory re-canonicalizes, absorbing covered points and
    # rejoining pieces across the wrap.
    normalized = [
        ((lo, hi) if not (lo == hi == ONE) else (ZERO, ZERO)) for lo, hi in out
    ]
    return ArcSet.make([Arc(lo, hi - lo) for lo, hi in normalized])


def arcset_contains(outer: ArcSet, inner: ArcSet) -> bool:
    """Is every point of ``inner`` in ``outer``?  Correction-free sets only."""
    _require_plain(outer, "containment")
    _require_plain(inner, "containment")
    if outer.measure() == ONE:
        return True
    outer_segs = _merge_segments(_segments(outer.arcs))
    for lo, hi in _segments(inner.arcs):
        if lo == hi:
            # A single point: decide by seam-aware membership, since the
            # point 0 also answers to the unrolled name 1.
            if not _point_in_arcs(outer.arcs, lo):
                return False
            continue
        # Canonical outer arcs are separated, so a connected piece must fit
        # inside a single unrolled segment.
        ok = any(slo <= lo and hi <= shi for slo, shi in outer_segs)
        if not ok:
            return False
    return True


def _difference_measure(x: ArcSet, y: ArcSet) -> Fraction:
    """Measure of X \\ Y for correction-free arc sets."""
    segs_y = _merge_segments(_segments(y.arcs))
    total = ZERO
    for lo, hi in _segments(x.arcs):
        cur = lo
        for slo, shi in segs_y:
            if shi <= cur:
                continue
            if slo >= hi:
                break
            if slo > cur:
                total += min(slo, hi) - cur
            cur = max(cur, min(shi, hi))
            if cur >= hi:
                break
        if cur < hi:
            total += hi - cur
    return total


# ---------------------------------------------------------------------------
# Sumsets


def arc_sumset(a: ArcSet, b: ArcSet) -> ArcSet:
    """Exact Minkowski sum of two correction-free arc sets.

    Per arc pair: [s, s+l] + [u, u+l'] = [s+u, s+u+l+l'], capped at the full
    circle.  Point corrections are rejected (products of almost-everywhere
    classes have no canonical definition here).
    """
    _require_plain(a, "sumset")
    _require_plain(b, "sumset")
    if a.is_empty or b.is_empty:
        return ArcSet.empty()
    arcs = []
    for x in a.arcs:
        for y in b.arcs:
            length = x.length + y.length
            arcs.append(arc(x.start + y.start, min(ONE, length)))
    return ArcSet.make(arcs)


def arcset_measure(a: ArcSet) -> Fraction:
    """Total arc length; point corrections are null and ignored."""
    return a.measure()


# ---------------------------------------------------------------------------
# Twisted torus


@dataclass(frozen=True)
class TwistedSet:
    """A subset of the circle extended by the flip: a plus and a minus fiber."""

    plus: ArcSet
    minus: ArcSet

    @property
    def has_corrections(self) -> bool:
        return self.plus.has_corrections or self.minus.has_corrections

    @property
    def is_empty(self) -> bool:
        return self.plus.is_empty and self.minus.is_empty

    def measure(self) -> Fraction:
        return (self.plus.measure() + self.minus.measure()) / 2

    def to_json_dict(self) -> dict:
        return {"plus": self.plus.to_json_dict(), "minus": self.minus.to_json_dict()}

    @classmethod
    def from_json_dict(cls, data: dict) -> "TwistedSet":
        return cls(
            ArcSet.from_json_dict(data["plus"]),
            ArcSet.from_json_dict(data["minus"]),
        )


def twisted_product(a: TwistedSet, b: TwistedSet) -> TwistedSet:
    """Product under (x, ε)(y, δ) = (x + εy, εδ), fiber by fiber."""
    for comp in (a.plus, a.minus, b.plus, b.minus):
        _require_plain(comp, "twisted product")
    plus = union_arcsets(
        arc_sumset(a.plus, b.plus), arc_sumset(a.minus, negate_arcset(b.minus))
    )
    minus = union_arcsets(
        arc_sumset(a.plus, b.minus), arc_sumset(a.minus, negate_arcset(b.plus))
    )
    return TwistedSet(plus=plus, minus=minus)


def twisted_measure(a: TwistedSet) -> Fraction:
    """Haar measure on the twisted torus: half the sum of fiber measures."""
    return a.measure()


# ---------------------------------------------------------------------------
# Stability and regularity


def _endpoint_values(a: ArcSet) -> set[Fraction]:
    pts: set[Fraction] = set()
    for x in a.arcs:
        pts.add(x.start)
        pts.add(x.end)
    return pts


def _translate_into(k: ArcSet, j: ArcSet, sign: int) -> ArcSet:
    """The exact set {x : x + sign·J ⊆ K} for correction-free K, J.

    The indicator of the condition is piecewise constant with breakpoints
    only where a translated endpoint of J meets an endpoint of K, i.e. at
    x = e - sign·f.  Scanning those candidates and the midpoints between
    them determines the set exactly; it is closed, so each passing open
    region extends to its closed hull.
    """
    _require_plain(k, "stability scan")
    _require_plain(j, "stability scan")
    if j.is_empty:
        return ArcSet.full()
    if k.is_empty:
        return ArcSet.empty()
    if k.measure() == ONE:
        return ArcSet.full()

    j_arcs = j.arcs

    def holds(x: Fraction) -> bool:
        if sign > 0:
            moved = ArcSet.make([arc(x + t.start, t.length) for t in j_arcs])
        else:
            moved = ArcSet.make([arc(x - t.start - t.length, t.length) for t in j_arcs])
        return arcset_contains(k, moved)

    candidates = sorted(
        {_mod1(e - sign * f) for e in _endpoint_values(k) for f in _endpoint_values(j)}
    )
    n = len(candidates)
    segs: list[Segment] = []
    for i, c in enumerate(candidates):
        nxt = candidates[(i + 1) % n] + (ONE if i == n - 1 else ZERO)
        if holds(c):
            segs.append((c, c))
        mid = (c + nxt) / 2
        if nxt > c and holds(_mod1(mid)):
            segs.append((c, nxt))
    arcs = []
    for lo, hi in segs:
        if hi <= ONE:
            arcs.append(Arc(lo, hi - lo))
        else:
            arcs.append(Arc(lo, hi - lo) if hi - lo <= ONE else Arc(ZERO, ONE))
    return ArcSet.make(arcs)


def is_stable_pair(i: ArcSet, j: ArcSet) -> bool:
    """Whether x + J ⊆ I + J forces x ∈ I, i.e. the exact identity
    I = ⋂_{j ∈ J} (I+J) − j.

    This is the one-sided (left) notion; the containment-forcing argument
    additionally needs its mirror image and uses an internal two-sided
    check.  Pairs of single arcs always satisfy both."""
    _require_plain(i, "stability")
    _require_plain(j, "stability")
    if i.is_empty or j.is_empty:
        return False
    k = arc_sumset(i, j)
    return _translate_into(k, j, 1) == i


def _is_stable_full(i: ArcSet, j: ArcSet) -> bool:
    """Two-sided stability: the left identity and its mirror
    J = ⋂_{i ∈ I} (I+J) − i."""
    if not is_stable_pair(i, j):
        return False
    k = arc_sumset(i, j)
    return _translate_into(k, i, 1) == j


def _twisted_translate_sets(k: TwistedSet, j: TwistedSet):
    """Left and right stable hulls for a twisted pair product K = I·J."""
    s_plus = intersect_arcsets(
        _translate_into(k.plus, j.plus, 1), _translate_into(k.minus, j.minus, 1)
    )
    s_minus = intersect_arcsets(
        _translate_into(k.plus, j.minus, -1), _translate_into(k.minus, j.plus, -1)
    )
    return s_plus, s_minus


def _twisted_right_sets(k: TwistedSet, i: TwistedSet):
    t_plus = intersect_arcsets(
        _translate_into(k.plus, i.plus, 1),
        negate_arcset(_translate_into(k.minus, i.minus, 1)),
    )
    t_minus = intersect_arcsets(
        negate_arcset(_translate_into(k.plus, i.minus, 1)),
        _translate_into(k.minus, i.plus, 1),
    )
    return t_plus, t_minus


def _is_stable_twisted(i: TwistedSet, j: TwistedSet) -> bool:
    if i.is_empty or j.is_empty:
        return False
    k = twisted_product(i, j)
    s_plus, s_minus = _twisted_translate_sets(k, j)
    if (s_plus, s_minus) != (i.plus, i.minus):
        return False
    t_plus, t_minus = _twisted_right_sets(k, i)
    return (t_plus, t_minus) == (j.plus, j.minus)


def is_regular(a: ArcSet) -> bool:
    """True iff the set equals the closure of its interior: no point
    corrections and no zero-length arcs.  The empty set is regular."""
    if a.has_corrections:
        return False
    return all(x.length > 0 for x in a.arcs)


# ---------------------------------------------------------------------------
# Symmetric-interval pair construction


@dataclass(frozen=True)
class SturmianSpec:
    """Recipe for a shifted symmetric-interval pair on the circle or its
    twisted extension.

    ``shift_s``/``shift_t`` are circle elements for the plain target, or
    (circle element, sign) pairs for the twisted target.
    """

    target: str  # "plain" | "twisted"
    half_length_i: Fraction
    half_length_j: Fraction
    shift_s: Union[Fraction, tuple]
    shift_t: Union[Fraction, tuple]


def _symmetric_arcset(half: Fraction) -> ArcSet:
    return ArcSet.make([arc(-half, 2 * half)])


def make_sturmian(spec: SturmianSpec):
    """Build the shifted symmetric-interval pair described by the spec.

    Plain target: (s' + I, J + t').  Twisted target: (s'·Ĩ, J̃·t') with
    Ĩ = I ⋊ {±1}.  The returned pair is verified to have an exactly
    additive product measure below full measure.
    """
    hi_, hj_ = Fraction(spec.half_length_i), Fraction(spec.half_length_j)
    if hi_ <= 0 or hj_ <= 0:
        raise PreconditionError("half-length", "half-lengths must be positive")
    if 2 * hi_ + 2 * hj_ >= 1:
        raise PreconditionError(
            "measure-sum", "interval measures must sum below full measure"
        )
    i_set = _symmetric_arcset(hi_)
    j_set = _symmetric_arcset(hj_)
    if spec.target == "plain":
        s = Fraction(spec.shift_s)
        t = Fraction(spec.shift_t)
        a = translate_arcset(i_set, s)
        b = translate_arcset(j_set, t)
        prod = arc_sumset(a, b)
        if prod.measure() != a.measure() + b.measure():
            raise SoundnessError("interval pair lost exact additivity")
        return a, b
    if spec.target == "twisted":
        c, _eps = _twisted_shift(spec.shift_s)
        d, upsilon = _twisted_shift(spec.shift_t)
        a = TwistedSet(
            plus=translate_arcset(i_set, c), minus=translate_arcset(i_set, c)
        )
        if upsilon > 0:
            b = TwistedSet(
                plus=translate_arcset(j_set, d), minus=translate_arcset(j_set, -d)
            )
        else:
            b = TwistedSet(
                plus=translate_arcset(j_set, -d), minus=translate_arcset(j_set, d)
            )
        prod = twisted_product(a, b)
        if prod.measure() != a.measure() + b.measure():
            raise SoundnessError("twisted interval pair lost exact additivity")
        return a, b
    raise PreconditionError("target", f"unknown target {spec.target!r}")


def _twisted_shift(value) -> tuple[Fraction, int]:
    if isinstance(value, tuple):
        c, eps = value
        eps = int(eps)
        if eps not in (1, -1):
            raise PreconditionError("shift", "twisted shift sign must be ±1")
        return Fraction(c), eps
    return Fraction(value), 1


# ---------------------------------------------------------------------------
# Exact products of corrected sets (rigidity support)


def _exact_product(a: ArcSet, b: ArcSet) -> ArcSet:
    """Exact sumset of two point-corrected arc sets.

    Decomposition: with U the positive arcs, P the isolated member points
    (zero-length arcs and added points), Q the removed points, the set is
    (U \\ Q) ∪ P, and the sum splits into four parts.  The arc skeleton of
    the result is (U_a+U_b) ∪ (U_a+P_b) ∪ (P_a+U_b); genuine membership can
    deviate from it only at finitely many candidate points — endpoint sums
    (where the representation interval degenerates to points) and sums
    involving a removed or isolated point — each of which is decided by
    exact representation analysis.
    """
    ua = ArcSet.make(a.positive_arcs)
    ub = ArcSet.make(b.positive_arcs)
    pa = {z.start for z in a.zero_arcs} | set(a.added_points)
    pb = {z.start for z in b.zero_arcs} | set(b.added_points)
    qa = set(a.removed_points)
    qb = set(b.removed_points)

    core: list[Arc] = []
    for x in ua.arcs:
        for y in ub.arcs:
            core.append(arc(x.start + y.start, min(ONE, x.length + y.length)))
    for q in pb:
        for x in ua.arcs:
            core.append(arc(x.start + q, x.length))
    for p in pa:
        for y in ub.arcs:
            core.append(arc(p + y.start, y.length))
    skeleton = ArcSet.make(core)

    ends_a = _endpoint_values(ua)
    ends_b = _endpoint_values(ub)
    candidates: set[Fraction] = set()
    candidates.update(_mod1(e + f) for e in ends_a for f in ends_b)
    candidates.update(_mod1(r + q) for r in qa for q in pb)
    candidates.update(_mod1(p + r) for p in pa for r in qb)
    candidates.update(_mod1(p + q) for p in pa for q in pb)

    def in_s1(z: Fraction) -> bool:
        if ua.is_empty or ub.is_empty:
            return False
        # Representations a ∈ U_a with z - a ∈ U_b: an arc-set intersection.
        shifted = translate_arcset(negate_arcset(ub), z)
        reps = intersect_arcsets(ua, shifted)
        for r in reps.arcs:
            if r.length > 0:
                return True  # a positive interval survives finite removals
        for r in reps.arcs:
            av = r.start
            if av not in qa and _mod1(z - av) not in qb:
                return True
        return False

    def member(z: Fraction) -> bool:
        if in_s1(z):
            return True
        for q in pb:
            w = _mod1(z - q)
            if ua.contains(w) and w not in qa:
                return True
        for p in pa:
            w = _mod1(z - p)
            if ub.contains(w) and w not in qb:
                return True
        return any(_mod1(z - p) in pb for p in pa)

    added, removed = [], []
    for z in candidates:
        inside = _point_in_arcs(skeleton.arcs, z)
        truth = member(z)
        if truth and not inside:
            added.append(z)
        elif not truth and inside:
            removed.append(z)
    return ArcSet.make(skeleton.arcs, added, removed)


def _exact_twisted_product(a: TwistedSet, b: TwistedSet) -> TwistedSet:
    plus = union_arcsets(
        _exact_product(a.plus, b.plus),
        _exact_product(a.minus, negate_arcset(b.minus)),
    )
    minus = union_arcsets(
        _exact_product(a.plus, b.minus),
        _exact_product(a.minus, negate_arcset(b.plus)),
    )
    return TwistedSet(plus=plus, minus=minus)


# ---------------------------------------------------------------------------
# Rigidity


@dataclass(frozen=True)
class RigidityOutcome:
    """Result of the containment-forcing argument.  When ``holds`` is false,
    ``witness_point`` escaped the second set and ``escaped_measure`` is the
    positive measure of (witness + B₂) \\ A₂B₂ proving the first pair was
    not exactly additive after all."""

    holds: bool
    witness_point: Optional[object] = None
    escaped_measure: Optional[Fraction] = None


def _almost_equal(x: ArcSet, y: ArcSet) -> bool:
    return x.positive_arcs == y.positive_arcs


def rigidity_force_containment(a1, b1, a2, b2) -> RigidityOutcome:
    """From measure data alone, force genuine set containment A₁ ⊆ A₂,
    B₁ ⊆ B₂ for a corrected pair against its regular model.

    Preconditions (each failure raises a named error): the pairs agree up to
    point corrections; (A₂,B₂) is regular, stable, and exactly additive; and
    (A₁,B₁) is exactly additive with its product computed exactly, point
    corrections included.  Under those, a member of A₁ outside A₂ would
    inflate the exact product measure (stability + regularity give the
    escaping translate positive measure), contradicting additivity — so the
    containment check below is forced to pass; its failure branch reports
    the witness instead of asserting.
    """
    if isinstance(a1, TwistedSet):
        return _rigidity_twisted(a1, b1, a2, b2)
    for name, val in (("a1", a1), ("b1", b1), ("a2", a2), ("b2", b2)):
        if not isinstance(val, ArcSet):
            raise RigidityPreconditionError(f"{name} must be an ArcSet")
    if not (_almost_equal(a1, a2) and _almost_equal(b1, b2)):
        raise RigidityPreconditionError(
            "not-almost-equal", "pairs differ beyond point corrections"
        )
    if not (is_regular(a2) and is_regular(b2)):
        raise RigidityPreconditionError("not-regular", "model pair must be regular")
    if not _is_stable_full(a2, b2):
        raise RigidityPreconditionError(
            "not-stable", "model pair must be stable on both sides"
        )
    prod2 = arc_sumset(a2, b2)
    if not (
        prod2.measure() == a2.measure() + b2.measure() and prod2.measure() < ONE
    ):
        raise RigidityPreconditionError(
            "not-critical", "model pair is not exactly additive"
        )
    prod1 = _exact_product(a1, b1)
    if not (
        prod1.measure() == a1.measure() + b1.measure() and prod1.measure() < ONE
    ):
        raise RigidityPreconditionError(
            "not-critical", "corrected pair is not exactly additive"
        )
    return _containment_outcome(a1, b1, a2, b2, prod2)


def _escaping_point(small: ArcSet, big: ArcSet) -> Optional[Fraction]:
    """Least-effort exact search for a point of ``small`` outside ``big``.

    Membership in ``big`` is constant between its boundary points, so
    checking segment endpoints, interior boundary crossings, and the
    midpoints between them decides containment exactly."""
    for p in sorted(small.added_points):
        if not big.contains(p):
            return p
    bounds = sorted(_endpoint_values(big))
    for lo, hi in _segments(small.skeleton().arcs):
        pts = {lo, hi} | {b for b in bounds if lo < b < hi}
        ordered = sorted(pts)
        probes = list(ordered)
        probes.extend((x + y) / 2 for x, y in zip(ordered, ordered[1:]))
        for z in probes:
            zz = _mod1(z)
            if small.contains(zz) and not big.contains(zz):
                return zz
    return None


def _containment_outcome(
    a1: ArcSet, b1: ArcSet, a2: ArcSet, b2: ArcSet, prod2: ArcSet
) -> RigidityOutcome:
    """Verify A₁ ⊆ A₂ and B₁ ⊆ B₂ point-set exactly; on failure report the
    escaping point and the measure its translate drags out of the product."""
    for small, big, partner in ((a1, a2, b2), (b1, b2, a2)):
        witness = _escaping_point(small, big)
        if witness is not None:
            escaped = _difference_measure(
                translate_arcset(partner, witness), prod2
            )
            return RigidityOutcome(
                holds=False, witness_point=witness, escaped_measure=escaped
            )
    return RigidityOutcome(holds=True)


def _rigidity_twisted(
    a1: TwistedSet, b1: TwistedSet, a2: TwistedSet, b2: TwistedSet
) -> RigidityOutcome:
    for name, val in (("b1", b1), ("a2", a2), ("b2", b2)):
        if not isinstance(val, TwistedSet):
            raise RigidityPreconditionError(
                "not-almost-equal", f"{name} must be a TwistedSet"
            )
    if not (
        _almost_equal(a1.plus, a2.plus)
        and _almost_equal(a1.minus, a2.minus)
        and _almost_equal(b1.plus, b2.plus)
        and _almost_equal(b1.minus, b2.minus)
    ):
        raise RigidityPreconditionError(
            "not-almost-equal", "pairs differ beyond point corrections"
        )
    if not all(is_regular(c) for c in (a2.plus, a2.minus, b2.plus, b2.minus)):
        raise RigidityPreconditionError("not-regular", "model pair must be regular")
    if not _is_stable_twisted(a2, b2):
        raise RigidityPreconditionError("not-stable", "model pair must be stable")
    prod2 = twisted_product(a2, b2)
    if not (
        prod2.measure() == a2.measure() + b2.measure() and prod2.measure() < ONE
    ):
        raise RigidityPreconditionError(
            "not-critical", "model pair is not exactly additive"
        )
    prod1 = _exact_twisted_product(a1, b1)
    if not (
        prod1.measure() == a1.measure() + b1.measure() and prod1.measure() < ONE
    ):
        raise RigidityPreconditionError(
            "not-critical", "corrected pair is not exactly additive"
        )
    for fiber, eps in (("plus", 1), ("minus", -1)):
        wa = _escaping_point(getattr(a1, fiber), getattr(a2, fiber))
        if wa is not None:
            w = (wa, eps)
            return RigidityOutcome(False, w, _twisted_escape_left(w, b2, prod2))
        wb = _escaping_point(getattr(b1, fiber), getattr(b2, fiber))
        if wb is not None:
            w = (wb, eps)
            return RigidityOutcome(False, w, _twisted_escape_right(w, a2, prod2))
    return RigidityOutcome(holds=True)


def _twisted_escape_left(witness, b2: TwistedSet, prod2: TwistedSet) -> Fraction:
    """Measure of (x̃ · B₂) \\ A₂B₂ for a left witness x̃ = (x, ε)."""
    x, eps = witness
    if eps > 0:
        moved = TwistedSet(
            plus=translate_arcset(b2.plus, x), minus=translate_arcset(b2.minus, x)
        )
    else:
        moved = TwistedSet(
            plus=translate_arcset(negate_arcset(b2.minus), x),
            minus=translate_arcset(negate_arcset(b2.plus), x),
        )
    return _twisted_difference_measure(moved, prod2)


def _twisted_escape_right(witness, a2: TwistedSet, prod2: TwistedSet) -> Fraction:
    """Measure of (A₂ · ỹ) \\ A₂B₂ for a right witness ỹ = (y, δ)."""
    y, delta = witness
    if delta > 0:
        moved = TwistedSet(
            plus=translate_arcset(a2.plus, y),
            minus=translate_arcset(a2.minus, -y),
        )
    else:
        moved = TwistedSet(
            plus=translate_arcset(a2.minus, -y),
            minus=translate_arcset(a2.plus, y),
        )
    return _twisted_difference_measure(moved, prod2)


def _twisted_difference_measure(x: TwistedSet, y: TwistedSet) -> Fraction:
    return (
        _difference_measure(x.plus, y.plus)
        + _difference_measure(x.minus, y.minus)
    ) / 2
