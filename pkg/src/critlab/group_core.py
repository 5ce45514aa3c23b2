"""Finite groups as dense Cayley tables.

Everything downstream (subset algebra, transforms, reductions, relative
criticality) consumes these values.  Groups are immutable after construction;
derived data (translation tables, subgroup lattices, quotients) is memoized on
the instance, so sharing a group across threads of work is safe and cheap.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from itertools import product as cartesian

import numpy as np

from ._bits import (
    apply_chunk_table,
    bits_from,
    build_chunk_table,
    iter_bits,
)
from .errors import (
    CritlabError,
    GroupOrderCapError,
    GroupTableError,
    NotNormalError,
    NotSubgroupError,
    SearchBudgetError,
)

DEFAULT_ORDER_CAP = 4096
_EXHAUSTIVE_ASSOC_MAX = 64
_ASSOC_SAMPLES = 10**6
HOM_SEARCH_BUDGET = 10**7

# Largest order for which per-element translation chunk tables are built;
# beyond it, set products fall back to per-bit loops.
_CHUNK_TABLE_MAX_ORDER = 256


def order_cap() -> int:
    """Configured maximum group order (env ``CRITLAB_CAP`` overrides)."""
    raw = os.environ.get("CRITLAB_CAP")
    if raw is None:
        return DEFAULT_ORDER_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise GroupOrderCapError(f"CRITLAB_CAP is not an integer: {raw!r}") from exc
    if cap < 1:
        raise GroupOrderCapError(f"CRITLAB_CAP must be positive, got {cap}")
    return cap


class FiniteGroup:
    """A finite group: element indices ``0..order-1`` with a Cayley table.

    ``cayley[x][y]`` is the index of the product ``x*y``; ``identity`` and the
    ``inverse`` table are derived during validation.  ``labels`` are display
    strings, one per element.
    """

    __slots__ = (
        "order",
        "cayley",
        "identity",
        "inverse",
        "labels",
        "name",
        "normal_part",
        "_memo",
    )

    def __init__(
        self,
        cayley,
        labels=None,
        name: str = "G",
        validate: bool = True,
    ):
        table = tuple(tuple(int(v) for v in row) for row in cayley)
        n = len(table)
        if n == 0:
            raise GroupTableError("a group needs at least one element")
        cap = order_cap()
        if n > cap:
            raise GroupOrderCapError(f"order {n} exceeds cap {cap}")
        self.order = n
        self.cayley = table
        if labels is None:
            labels = tuple(str(i) for i in range(n))
        else:
            labels = tuple(str(s) for s in labels)
        if len(labels) != n:
            raise GroupTableError("labels length must equal order")
        self.labels = labels
        self.name = name
        self.normal_part = None
        self._memo: dict = {}
        self.identity = self._find_identity()
        self.inverse = self._find_inverses()
        if validate:
            self._validate()

    # -- construction-time checks -------------------------------------------

    def _find_identity(self) -> int:
        n = self.order
        for e in range(n):
            row = self.cayley[e]
            if all(row[x] == x for x in range(n)) and all(
                self.cayley[x][e] == x for x in range(n)
            ):
                return e
        raise GroupTableError("no identity element")

    def _find_inverses(self) -> tuple[int, ...]:
        n, e = self.order, self.identity
        inv = [-1] * n
        for x in range(n):
            for y in range(n):
                if self.cayley[x][y] == e and self.cayley[y][x] == e:
                    inv[x] = y
                    break
            if inv[x] < 0:
                raise GroupTableError(f"element {x} has no inverse")
        return tuple(inv)

    def _validate(self) -> None:
        n = self.order
        t = self.np_table
        if t.shape != (n, n) or t.min() < 0 or t.max() >= n:
            raise GroupTableError("table entries out of range")
        ident = np.arange(n)
        if not (np.array_equal(np.sort(t, axis=1), np.tile(ident, (n, 1)))
                and np.array_equal(np.sort(t, axis=0), np.tile(ident[:, None], (1, n)))):
            raise GroupTableError("table rows/columns are not permutations")
        if not check_associativity(self, exhaustive_max=_EXHAUSTIVE_ASSOC_MAX,
                                   samples=_ASSOC_SAMPLES):
            raise GroupTableError("table is not associative")

    # -- basics --------------------------------------------------------------

    def op(self, x: int, y: int) -> int:
        """Group product of element indices."""
        return self.cayley[x][y]

    def inv(self, x: int) -> int:
        """Inverse of an element index."""
        return self.inverse[x]

    def power(self, x: int, k: int) -> int:
        """``x`` raised to an integer power (negative allowed)."""
        if k < 0:
            x, k = self.inverse[x], -k
        out = self.identity
        while k:
            if k & 1:
                out = self.cayley[out][x]
            x = self.cayley[x][x]
            k >>= 1
        return out

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != self.identity:
            y = self.cayley[y][x]
            k += 1
        return k

    @property
    def np_table(self) -> np.ndarray:
        tab = self._memo.get("np_table")
        if tab is None:
            tab = np.array(self.cayley, dtype=np.int16)
            tab.setflags(write=False)
            self._memo["np_table"] = tab
        return tab

    @property
    def is_abelian(self) -> bool:
        flag = self._memo.get("abelian")
        if flag is None:
            t = self.np_table
            flag = bool(np.array_equal(t, t.T))
            self._memo["abelian"] = flag
        return flag

    @property
    def full_bits(self) -> int:
        return (1 << self.order) - 1

    def label_index(self, label: str) -> int:
        lookup = self._memo.get("label_index")
        if lookup is None:
            lookup = {s: i for i, s in enumerate(self.labels)}
            self._memo["label_index"] = lookup
        try:
            return lookup[label]
        except KeyError as exc:
            raise CritlabError(f"unknown element label {label!r}") from exc

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    # -- bitset machinery ------------------------------------------------------

    def left_perm(self, x: int) -> tuple[int, ...]:
        """Bit permutation ``b -> x*b`` (translating a bitset on the left)."""
        return self.cayley[x]

    def right_perm(self, y: int) -> tuple[int, ...]:
        """Bit permutation ``a -> a*y``."""
        key = ("right_perm", y)
        perm = self._memo.get(key)
        if perm is None:
            perm = tuple(self.cayley[a][y] for a in range(self.order))
            self._memo[key] = perm
        return perm

    def _chunk(self, side: str, x: int):
        key = (side, x)
        tab = self._memo.get(key)
        if tab is None:
            perm = self.left_perm(x) if side == "L" else self.right_perm(x)
            tab = build_chunk_table(perm)
            self._memo[key] = tab
        return tab

    def translate_bits(self, bits: int, x: int, side: str = "left") -> int:
        """Image bitset of ``x*S`` (side ``left``) or ``S*x`` (side ``right``)."""
        if bits == 0:
            return 0
        if side == "left":
            if self.order <= _CHUNK_TABLE_MAX_ORDER:
                return apply_chunk_table(bits, self._chunk("L", x))
            row = self.cayley[x]
            return bits_from(row[b] for b in iter_bits(bits))
        if side == "right":
            if self.order <= _CHUNK_TABLE_MAX_ORDER:
                return apply_chunk_table(bits, self._chunk("R", x))
            return bits_from(self.cayley[a][x] for a in iter_bits(bits))
        raise CritlabError(f"side must be 'left' or 'right', got {side!r}")

    def product_bits(self, abits: int, bbits: int) -> int:
        """Bitset of the product set ``{a*b}``; empty if either side empty."""
        if abits == 0 or bbits == 0:
            return 0
        out = 0
        if abits.bit_count() <= bbits.bit_count():
            for a in iter_bits(abits):
                out |= self.translate_bits(bbits, a, "left")
        else:
            for b in iter_bits(bbits):
                out |= self.translate_bits(abits, b, "right")
        return out

    def invert_bits(self, bits: int) -> int:
        inv = self.inverse
        return bits_from(inv[b] for b in iter_bits(bits))

    def conjugate_bits(self, bits: int, x: int) -> int:
        """Bitset of ``x S x^{-1}``."""
        return self.translate_bits(
            self.translate_bits(bits, x, "left"), self.inverse[x], "right"
        )

    def closure_bits(self, bits: int) -> int:
        """Bitset of the subgroup generated by the given members."""
        bits |= 1 << self.identity
        while True:
            grown = bits
            for x in iter_bits(bits):
                grown |= self.translate_bits(bits, x, "left")
            grown |= self.invert_bits(grown)
            if grown == bits:
                return bits
            bits = grown

    def is_subgroup_bits(self, bits: int) -> bool:
        if bits == 0 or not (bits >> self.identity) & 1:
            return False
        for x in iter_bits(bits):
            if self.translate_bits(bits, x, "left") != bits:
                return False
        return True

    # -- serialization ---------------------------------------------------------

    def to_json_dict(self) -> dict:
        """Row-major JSON form: ``{order, cayley, labels}`` (+ display name)."""
        flat = [v for row in self.cayley for v in row]
        return {
            "order": self.order,
            "cayley": flat,
            "labels": list(self.labels),
            "name": self.name,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, data: dict) -> "FiniteGroup":
        n = int(data["order"])
        raw = data["cayley"]
        if raw and isinstance(raw[0], list):
            rows = raw
        else:
            if len(raw) != n * n:
                raise GroupTableError("row-major cayley length must be order^2")
            rows = [raw[i * n:(i + 1) * n] for i in range(n)]
        return cls(rows, labels=data.get("labels"), name=data.get("name", "G"))

    @classmethod
    def from_json(cls, text: str) -> "FiniteGroup":
        return cls.from_json_dict(json.loads(text))


def check_associativity(
    g: FiniteGroup,
    exhaustive_max: int = 256,
    samples: int = _ASSOC_SAMPLES,
    seed: int = 0,
) -> bool:
    """Exhaustive associativity scan up to ``exhaustive_max``, sampled above."""
    n = g.order
    t = g.np_table.astype(np.int32)
    if n <= exhaustive_max:
        for x in range(n):
            left = t[t[x]]          # (y,z) -> (x*y)*z
            right = t[x][t]         # (y,z) -> x*(y*z)
            if not np.array_equal(left, right):
                return False
        return True
    rng = np.random.default_rng(seed)
    xs = rng.integers(0, n, size=samples)
    ys = rng.integers(0, n, size=samples)
    zs = rng.integers(0, n, size=samples)
    return bool(np.array_equal(t[t[xs, ys], zs], t[xs, t[ys, zs]]))


class Subgroup:
    """A subgroup of a parent group, stored as a member bitset."""

    __slots__ = ("parent", "members", "is_normal")

    def __init__(self, parent: FiniteGroup, members: int, *, _checked: bool = False):
        if not _checked:
            if not parent.is_subgroup_bits(members):
                raise NotSubgroupError(
                    f"members {sorted(iter_bits(members))} do not form a subgroup"
                )
        self.parent = parent
        self.members = members
        self.is_normal = all(
            parent.conjugate_bits(members, x) == members
            for x in range(parent.order)
        )

    @classmethod
    def from_members(cls, parent: FiniteGroup, members) -> "Subgroup":
        bits = members if isinstance(members, int) else bits_from(members)
        return cls(parent, bits)

    @classmethod
    def trivial(cls, parent: FiniteGroup) -> "Subgroup":
        return cls(parent, 1 << parent.identity, _checked=True)

    @classmethod
    def full(cls, parent: FiniteGroup) -> "Subgroup":
        return cls(parent, parent.full_bits, _checked=True)

    @property
    def size(self) -> int:
        return self.members.bit_count()

    def __iter__(self):
        return iter_bits(self.members)

    def __contains__(self, x: int) -> bool:
        return bool((self.members >> x) & 1)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and other.parent is self.parent
            and other.members == self.members
        )

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    def __repr__(self) -> str:
        names = ",".join(self.parent.labels[i] for i in iter_bits(self.members))
        return f"Subgroup({{{names}}} < {self.parent.name})"

    def coset_reps(self, side: str = "left") -> tuple[int, ...]:
        """Least element index of each coset (``x*H`` for side ``left``),
        ascending."""
        g = self.parent
        seen = 0
        reps = []
        for x in range(g.order):
            if (seen >> x) & 1:
                continue
            coset = g.translate_bits(self.members, x, "left" if side == "left" else "right")
            seen |= coset
            reps.append(x)
        return tuple(reps)

    def as_group(self) -> tuple[FiniteGroup, tuple[int, ...]]:
        """The subgroup as a standalone group plus its element embedding.

        Returns ``(H, emb)`` where ``emb[i]`` is the parent index of H's
        element ``i``; memoized on the parent.
        """
        key = ("as_group", self.members)
        got = self.parent._memo.get(key)
        if got is None:
            emb = tuple(iter_bits(self.members))
            back = {p: i for i, p in enumerate(emb)}
            table = [
                [back[self.parent.cayley[a][b]] for b in emb] for a in emb
            ]
            sub = FiniteGroup(
                table,
                labels=[self.parent.labels[p] for p in emb],
                name=f"{self.parent.name}<{self.size}>",
                validate=False,
            )
            got = (sub, emb)
            self.parent._memo[key] = got
        return got


class Homomorphism:
    """A verified group homomorphism given by its full value table."""

    __slots__ = ("source", "target", "map", "surjective")

    def __init__(
        self,
        source: FiniteGroup,
        target: FiniteGroup,
        table,
        validate: bool = True,
    ):
        self.source = source
        self.target = target
        self.map = tuple(int(v) for v in table)
        if len(self.map) != source.order:
            raise CritlabError("homomorphism table length must equal source order")
        if validate:
            arr = np.array(self.map, dtype=np.int16)
            if arr.min() < 0 or arr.max() >= target.order:
                raise CritlabError("homomorphism table values out of range")
            lhs = arr[source.np_table.astype(np.intp)]
            rhs = target.np_table[arr[:, None].astype(np.intp), arr[None, :].astype(np.intp)]
            if not np.array_equal(lhs, rhs):
                raise CritlabError("table is not a homomorphism")
        self.surjective = len(set(self.map)) == target.order

    def __call__(self, x: int) -> int:
        return self.map[x]

    def image_bits(self, bits: int) -> int:
        return bits_from(self.map[b] for b in iter_bits(bits))

    def preimage_bits(self, bits: int) -> int:
        out = 0
        for x, v in enumerate(self.map):
            if (bits >> v) & 1:
                out |= 1 << x
        return out

    def kernel(self) -> Subgroup:
        e = self.target.identity
        bits = bits_from(x for x, v in enumerate(self.map) if v == e)
        return Subgroup(self.source, bits, _checked=True)

    @property
    def is_bijective(self) -> bool:
        return self.surjective and self.source.order == self.target.order

    def compose(self, inner: "Homomorphism") -> "Homomorphism":
        """``self after inner`` (source = inner.source)."""
        if inner.target is not self.source:
            raise CritlabError("composition sources/targets do not line up")
        return Homomorphism(
            inner.source, self.target,
            [self.map[v] for v in inner.map], validate=False,
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Homomorphism)
            and other.source is self.source
            and other.target is self.target
            and other.map == self.map
        )

    def __hash__(self) -> int:
        return hash((id(self.source), id(self.target), self.map))

    def __repr__(self) -> str:
        return (
            f"Homomorphism({self.source.name}->{self.target.name}, "
            f"{'onto' if self.surjective else 'into'})"
        )


@dataclass(frozen=True)
class SemidirectSpec:
    """Ingredients of a semidirect product: a normal part, an acting part,
    and one automorphism table of the normal part per acting element."""

    n_part: FiniteGroup
    k_part: FiniteGroup
    action: tuple[tuple[int, ...], ...]

    def validated(self) -> "SemidirectSpec":
        n, k = self.n_part, self.k_part
        if len(self.action) != k.order:
            raise CritlabError("need one action table per acting element")
        autos = []
        for tab in self.action:
            hom = Homomorphism(n, n, tab)
            if not hom.is_bijective:
                raise CritlabError("action entry is not an automorphism")
            autos.append(hom)
        ident = tuple(range(n.order))
        if self.action[k.identity] != ident:
            raise CritlabError("identity must act trivially")
        for p in range(k.order):
            for q in range(k.order):
                composed = tuple(
                    self.action[p][self.action[q][x]] for x in range(n.order)
                )
                if composed != self.action[k.op(p, q)]:
                    raise CritlabError("action is not a homomorphism into Aut(N)")
        return self


def build_cyclic(n: int) -> FiniteGroup:
    """The integers mod ``n`` under addition."""
    if n < 1:
        raise GroupOrderCapError(f"order must be positive, got {n}")
    if n > order_cap():
        raise GroupOrderCapError(f"order {n} exceeds cap {order_cap()}")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(table, name=f"Z{n}", validate=False)


def build_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """Direct product with lexicographic indexing ``(x, y) -> x*|h| + y``."""
    n = g.order * h.order
    if n > order_cap():
        raise GroupOrderCapError(f"order {n} exceeds cap {order_cap()}")
    hn = h.order
    table = [
        [g.cayley[x1][x2] * hn + h.cayley[y1][y2]
         for x2 in range(g.order) for y2 in range(hn)]
        for x1 in range(g.order) for y1 in range(hn)
    ]
    labels = [
        f"({g.labels[x]},{h.labels[y]})" for x in range(g.order) for y in range(hn)
    ]
    return FiniteGroup(table, labels=labels, name=f"{g.name}x{h.name}", validate=False)


def build_semidirect(spec: SemidirectSpec) -> FiniteGroup:
    """Pairs ``(m, p)`` with ``(m,p)(n,q) = (m * act_p(n), p q)``.

    The copy of the normal part ``{(m, e)}`` is recorded on the result as
    ``normal_part``.
    """
    spec = spec.validated()
    ng, kg = spec.n_part, spec.k_part
    order = ng.order * kg.order
    if order > order_cap():
        raise GroupOrderCapError(f"order {order} exceeds cap {order_cap()}")
    kn = kg.order

    def idx(m: int, p: int) -> int:
        return m * kn + p

    table = [[0] * order for _ in range(order)]
    for m in range(ng.order):
        for p in range(kn):
            row = table[idx(m, p)]
            act = spec.action[p]
            for n in range(ng.order):
                for q in range(kn):
                    row[idx(n, q)] = idx(ng.cayley[m][act[n]], kg.cayley[p][q])
    labels = [
        f"({ng.labels[m]},{kg.labels[p]})" for m in range(ng.order) for p in range(kn)
    ]
    out = FiniteGroup(
        table, labels=labels, name=f"{ng.name}:{kg.name}", validate=True
    )
    out.normal_part = Subgroup(
        out, bits_from(idx(m, kg.identity) for m in range(ng.order)), _checked=True
    )
    return out


def build_dihedral(n: int) -> FiniteGroup:
    """Symmetries of the regular ``n``-gon: rotations ``r0..`` and
    reflections ``r{i}s``, built as the cyclic group extended by negation."""
    if n < 1:
        raise GroupOrderCapError("dihedral parameter must be >= 1")
    zn = build_cyclic(n)
    z2 = build_cyclic(2)
    neg = tuple((-i) % n for i in range(n))
    spec = SemidirectSpec(zn, z2, (tuple(range(n)), neg))
    out = build_semidirect(spec)
    out.name = f"D{n}"
    out.labels = tuple(
        f"r{i}" if p == 0 else f"r{i}s" for i in range(n) for p in range(2)
    )
    out._memo.pop("label_index", None)
    return out


def _build_from_rule(order, rule, labels, name) -> FiniteGroup:
    table = [[rule(i, j) for j in range(order)] for i in range(order)]
    return FiniteGroup(table, labels=labels, name=name, validate=True)


def build_quaternion8() -> FiniteGroup:
    """The eight quaternion units ±1, ±i, ±j, ±k."""
    mul = {}
    for a in range(1, 4):
        mul[(0, a)] = (a, 0)
        mul[(a, 0)] = (a, 0)
        mul[(a, a)] = (0, 1)
    mul[(0, 0)] = (0, 0)
    mul[(1, 2)], mul[(2, 1)] = (3, 0), (3, 1)
    mul[(2, 3)], mul[(3, 2)] = (1, 0), (1, 1)
    mul[(3, 1)], mul[(1, 3)] = (2, 0), (2, 1)

    def rule(x: int, y: int) -> int:
        sx, ax = x & 1, x >> 1
        sy, ay = y & 1, y >> 1
        az, sz = mul[(ax, ay)]
        return (az << 1) | (sx ^ sy ^ sz)

    labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    return _build_from_rule(8, rule, labels, "Q8")


def build_dicyclic3() -> FiniteGroup:
    """The order-12 dicyclic group ⟨a, b | a^6 = e, b^2 = a^3, bab^-1 = a^-1⟩,
    elements ``a^i b^l`` indexed ``2i + l``."""

    def rule(x: int, y: int) -> int:
        i, l1 = x >> 1, x & 1
        k, l2 = y >> 1, y & 1
        if l1 == 0:
            return (((i + k) % 6) << 1) | l2
        if l2 == 0:
            return (((i - k) % 6) << 1) | 1
        return (((i - k + 3) % 6) << 1) | 0

    labels = [f"a{i}" if l == 0 else f"a{i}b" for i in range(6) for l in range(2)]
    return _build_from_rule(12, rule, labels, "Dic3")


def build_alternating4() -> FiniteGroup:
    """The order-12 group of even permutations of four points, realized as the
    Klein four-group extended by a three-cycle of its involutions."""
    v4 = build_product(build_cyclic(2), build_cyclic(2))
    z3 = build_cyclic(3)
    phi = (0, 3, 1, 2)          # (a,b) -> (b, a+b) on indices 2a+b
    phi2 = tuple(phi[phi[x]] for x in range(4))
    spec = SemidirectSpec(v4, z3, (tuple(range(4)), phi, phi2))
    out = build_semidirect(spec)
    out.name = "A4"
    return out


def subgroups(g: FiniteGroup, normal_only: bool = False) -> list[Subgroup]:
    """All subgroups (optionally only normal ones), sorted by size then by
    member bitset.

    Found by iterated closure extension: every subgroup is reachable from the
    trivial one by repeatedly adjoining a single outside element and closing.
    """
    cached = g._memo.get("subgroups")
    if cached is None:
        trivial = g.closure_bits(0)
        found = {trivial}
        frontier = [trivial]
        memo: dict[tuple[int, int], int] = {}
        while frontier:
            h = frontier.pop()
            for x in range(g.order):
                if (h >> x) & 1:
                    continue
                key = (h, x)
                k = memo.get(key)
                if k is None:
                    k = g.closure_bits(h | (1 << x))
                    memo[key] = k
                if k not in found:
                    found.add(k)
                    frontier.append(k)
        cached = [
            Subgroup(g, bits, _checked=True)
            for bits in sorted(found, key=lambda b: (b.bit_count(), b))
        ]
        g._memo["subgroups"] = cached
    if normal_only:
        return [h for h in cached if h.is_normal]
    return list(cached)


def quotient(g: FiniteGroup, n: Subgroup) -> tuple[FiniteGroup, Homomorphism]:
    """Quotient by a normal subgroup plus the canonical projection.

    Coset representatives are the least element index per coset; quotient
    elements are those representatives in ascending order.
    """
    if n.parent is not g:
        raise NotNormalError("subgroup belongs to a different group")
    if not n.is_normal:
        raise NotNormalError("quotient requires a normal subgroup")
    key = ("quotient", n.members)
    got = g._memo.get(key)
    if got is None:
        reps = n.coset_reps("left")
        rep_index = {r: i for i, r in enumerate(reps)}
        coset_of = [0] * g.order
        for i, r in enumerate(reps):
            for x in iter_bits(g.translate_bits(n.members, r, "left")):
                coset_of[x] = i
        table = [
            [coset_of[g.cayley[r1][r2]] for r2 in reps] for r1 in reps
        ]
        labels = [f"[{g.labels[r]}]" for r in reps]
        q = FiniteGroup(table, labels=labels, name=f"{g.name}/{n.size}", validate=False)
        proj = Homomorphism(g, q, coset_of, validate=False)
        got = (q, proj)
        g._memo[key] = got
    return got


def generating_set(g: FiniteGroup) -> tuple[int, ...]:
    """Deterministic small generating set: repeatedly adjoin the least
    element outside the closure so far."""
    gens: list[int] = []
    closed = g.closure_bits(0)
    while closed != g.full_bits:
        x = next(i for i in range(g.order) if not (closed >> i) & 1)
        gens.append(x)
        closed = g.closure_bits(closed | (1 << x))
    return tuple(gens)


def _word_plan(g: FiniteGroup, gens: tuple[int, ...]):
    """Breadth-first expressions: each non-identity element as
    (earlier element) * (generator).  Returns the visit order with recipes."""
    plan: list[tuple[int, int, int]] = []   # (element, parent, gen position)
    seen = 1 << g.identity
    frontier = [g.identity]
    while frontier:
        nxt: list[int] = []
        for x in frontier:
            for gi, s in enumerate(gens):
                y = g.cayley[x][s]
                if not (seen >> y) & 1:
                    seen |= 1 << y
                    plan.append((y, x, gi))
                    nxt.append(y)
        frontier = nxt
    return plan


def homomorphisms(
    g: FiniteGroup,
    m: FiniteGroup,
    surjective_only: bool = False,
    budget: int = HOM_SEARCH_BUDGET,
) -> list[Homomorphism]:
    """All homomorphisms ``g -> m`` by generator-image search.

    Candidate maps are images of a computed generating set; the search errors
    (never truncates silently) if ``|m| ** len(gens)`` exceeds the budget.
    Results are deduplicated and sorted by value table.
    """
    gens = generating_set(g)
    n_candidates = m.order ** len(gens)
    if n_candidates > budget:
        raise SearchBudgetError(
            f"{n_candidates} candidate maps exceed budget {budget}"
        )
    plan = _word_plan(g, gens)
    t_m = m.np_table.astype(np.intp)
    t_g = g.np_table.astype(np.intp)
    found: dict[tuple[int, ...], Homomorphism] = {}
    table = [0] * g.order
    for images in cartesian(range(m.order), repeat=len(gens)):
        # element orders must be compatible; quick reject
        ok = True
        for s, im in zip(gens, images):
            if g.element_order(s) % m.element_order(im) != 0:
                ok = False
                break
        if not ok:
            continue
        table[g.identity] = m.identity
        for y, parent, gi in plan:
            table[y] = m.cayley[table[parent]][images[gi]]
        arr = np.array(table, dtype=np.intp)
        if np.array_equal(arr[t_g], t_m[arr[:, None], arr[None, :]]):
            key = tuple(table)
            if key not in found:
                found[key] = Homomorphism(g, m, key, validate=False)
    homs = [found[k] for k in sorted(found)]
    if surjective_only:
        homs = [h for h in homs if h.surjective]
    return homs


def automorphisms(m: FiniteGroup) -> list[Homomorphism]:
    """All bijective self-homomorphisms, sorted by value table."""
    return [h for h in homomorphisms(m, m) if h.is_bijective]


def small_groups(max_order: int = 12) -> list[FiniteGroup]:
    """Every isomorphism class of order <= ``max_order`` (supported to 12),
    one representative each, in (order, name) order."""
    if max_order > 12:
        raise CritlabError("catalog covers orders up to 12")
    z = {n: build_cyclic(n) for n in range(1, max_order + 1)}
    out: list[FiniteGroup] = []
    for n in range(1, max_order + 1):
        row: list[FiniteGroup] = [z[n]]
        if n == 4:
            row.append(build_product(z[2], z[2]))
        if n == 6:
            row.append(build_dihedral(3))
        if n == 8:
            row.append(build_product(z[4], z[2]))
            p = build_product(build_product(z[2], z[2]), z[2])
            p.name = "Z2xZ2xZ2"
            row.append(p)
            row.append(build_dihedral(4))
            row.append(build_quaternion8())
        if n == 9:
            row.append(build_product(z[3], z[3]))
        if n == 10:
            row.append(build_dihedral(5))
        if n == 12:
            row.append(build_product(z[6], z[2]))
            row.append(build_dihedral(6))
            row.append(build_alternating4())
            row.append(build_dicyclic3())
        out.extend(sorted(row, key=lambda grp: (grp.order, grp.name)))
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True
