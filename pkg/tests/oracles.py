"""Independent brute-force oracles.

Everything here is written from first principles against raw data
(Cayley tables as list-of-lists, subsets as plain index sets, circle
sets as lists of Fraction segment endpoints).  None of it shares code
with the package's algorithms; tests compare the two routes.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from math import lcm

# ---------------------------------------------------------------------------
# Group-side oracles (inputs: cayley = list of rows, subsets = sets of ints)


def oracle_product(cayley, a, b):
    """{x*y : x in a, y in b} by double loop."""
    return {cayley[x][y] for x in a for y in b}


def oracle_identity(cayley):
    n = len(cayley)
    for e in range(n):
        if all(cayley[e][x] == x and cayley[x][e] == x for x in range(n)):
            return e
    raise AssertionError("no identity")


def oracle_inverse(cayley, x):
    e = oracle_identity(cayley)
    for y in range(len(cayley)):
        if cayley[x][y] == e and cayley[y][x] == e:
            return y
    raise AssertionError("no inverse")


def oracle_is_subgroup(cayley, members):
    if not members:
        return False
    e = oracle_identity(cayley)
    if e not in members:
        return False
    return all(
        cayley[x][oracle_inverse(cayley, y)] in members
        for x in members
        for y in members
    )


def oracle_subgroups(cayley):
    """All subgroups by generated-closure over every subset of generators
    is too slow; instead filter all subsets for small orders."""
    n = len(cayley)
    assert n <= 12, "oracle_subgroups is for desk-scale groups"
    found = []
    for mask in range(1, 1 << n):
        members = {i for i in range(n) if mask >> i & 1}
        if oracle_is_subgroup(cayley, members):
            found.append(frozenset(members))
    return found


def oracle_is_normal(cayley, members):
    n = len(cayley)
    inv = {x: oracle_inverse(cayley, x) for x in range(n)}
    return all(
        cayley[cayley[gx][h]][inv[gx]] in members for gx in range(n) for h in members
    )


def oracle_stabilizer(cayley, s):
    """Two-sided: {x : xS = S and Sx = S}."""
    n = len(cayley)
    out = set()
    for x in range(n):
        left = {cayley[x][y] for y in s}
        right = {cayley[y][x] for y in s}
        if left == s and right == s:
            out.add(x)
    return out


def oracle_left_stabilizer(cayley, s):
    return {x for x in range(len(cayley)) if {cayley[x][y] for y in s} == s}


def oracle_right_stabilizer(cayley, s):
    return {x for x in range(len(cayley)) if {cayley[y][x] for y in s} == s}


def oracle_classify(cayley, a, b):
    """Pair class from the measure comparison, Fractions throughout."""
    n = len(cayley)
    prod = oracle_product(cayley, a, b)
    ma, mb, mp = (Fraction(len(s), n) for s in (a, b, prod))
    s = ma + mb
    if mp < min(Fraction(1), s):
        return "SubCritical"
    if mp == s and s < 1:
        return "CriticalSum"
    if mp == 1 and s >= 1:
        return "CriticalFull"
    return "SuperCritical"


def oracle_slices(cayley, a, u_members, side="left"):
    """Map: coset representative (minimal index) -> slice of ``a`` in that
    coset.  Left side uses cosets xU, right side Ux."""
    n = len(cayley)
    seen = set()
    out = {}
    for x in range(n):
        if side == "left":
            coset = frozenset(cayley[x][u] for u in u_members)
        else:
            coset = frozenset(cayley[u][x] for u in u_members)
        if coset in seen:
            continue
        seen.add(coset)
        out[min(coset)] = set(coset) & set(a)
    return out


def oracle_homomorphisms(dom_cayley, tgt_cayley):
    """All maps f with f(xy) = f(x)f(y), by exhaustive search on generators
    is overkill at desk scale: filter all |M|^|G| maps for tiny domains."""
    n, m = len(dom_cayley), len(tgt_cayley)
    assert m**n <= 2_000_000, "oracle_homomorphisms needs a tiny instance"
    homs = []
    for values in iproduct(range(m), repeat=n):
        if all(
            values[dom_cayley[x][y]] == tgt_cayley[values[x]][values[y]]
            for x in range(n)
            for y in range(n)
        ):
            homs.append(values)
    return homs


def oracle_dyson_step(cayley, a, b, x):
    """One pivot-x transform: (A ∪ Bx, x⁻¹A ∩ B)."""
    xinv = oracle_inverse(cayley, x)
    bx = {cayley[y][x] for y in b}
    xinv_a = {cayley[xinv][y] for y in a}
    return (set(a) | bx, xinv_a & set(b))


# ---------------------------------------------------------------------------
# Circle-side oracles (inputs: lists of (lo, hi) Fraction pairs in [0, 1])


def seg_normalize(segs):
    """Sorted, merged closed segments (merging also at touching endpoints)."""
    segs = sorted((Fraction(lo), Fraction(hi)) for lo, hi in segs if hi >= lo)
    out = []
    for lo, hi in segs:
        if out and lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def segs_of_arcs(pairs):
    """(start, length) arcs on the circle -> closed segments in [0, 1],
    splitting anything that crosses the seam."""
    segs = []
    for start, length in pairs:
        start, length = Fraction(start), Fraction(length)
        start %= 1
        if start + length <= 1:
            segs.append((start, start + length))
        else:
            segs.append((start, Fraction(1)))
            segs.append((Fraction(0), start + length - 1))
    return seg_normalize(segs)


def seg_measure(segs):
    return sum((hi - lo for lo, hi in seg_normalize(segs)), Fraction(0))


def seg_member(segs, p):
    """Membership of circle point p, honoring the 0 ≡ 1 identification."""
    p = Fraction(p) % 1
    for lo, hi in segs:
        if lo <= p <= hi:
            return True
        if hi == 1 and p == 0:
            return True
    return False


def seg_sumset(x_segs, y_segs):
    """Pairwise Minkowski sums of closed segments, reduced mod 1."""
    out = []
    for (alo, ahi), (blo, bhi) in iproduct(x_segs, y_segs):
        lo, hi = alo + blo, ahi + bhi
        if hi - lo >= 1:
            return [(Fraction(0), Fraction(1))]
        lo_m = lo % 1
        out.extend(segs_of_arcs([(lo_m, hi - lo)]))
    return seg_normalize(out)


def grid(denom):
    return [Fraction(k, denom) for k in range(denom)]


def common_denominator(*seg_lists):
    d = 1
    for segs in seg_lists:
        for lo, hi in segs:
            d = lcm(d, lo.denominator, hi.denominator)
    return d
