"""Classify subset pairs by how small their product set is.

Every nonempty pair (A, B) in a finite group lands in exactly one of four
classes, by comparing m(AB) against m(A) + m(B) and full measure:

    SubCritical    m(AB) <  min(1, m(A) + m(B))   product strictly smaller
    CriticalSum    m(AB) =  m(A) + m(B) < 1       exactly additive
    CriticalFull   m(AB) =  1 <= m(A) + m(B)      product fills the group
    SuperCritical  otherwise                      product overshoots the sum

The exactly-additive pairs are the interesting ones: they carry all the
structure the rest of this library extracts.
"""

from critlab import (
    GroupSubset,
    build_cyclic,
    build_dihedral,
    classify_pair,
    stabilizer,
)


def show(g, a_idx, b_idx):
    a = GroupSubset.from_indices(g, a_idx)
    b = GroupSubset.from_indices(g, b_idx)
    cls = classify_pair(a, b)
    stab = stabilizer(cls.product)
    print(f"  A={list(a_idx)} B={list(b_idx)}  ->  {cls.tag.value}")
    print(
        f"    m(A)={cls.measure_a}  m(B)={cls.measure_b}  "
        f"m(AB)={cls.measure_product}  deficit={cls.deficit}"
    )
    print(f"    product={list(cls.product.indices)}  stabilizer={sorted(stab)}")


print("Z6: one pair from each class")
z6 = build_cyclic(6)
show(z6, [0, 1], [0, 1])        # SubCritical: {0,1,2} is short of 2/3
show(z6, [0, 1], [0, 3])        # CriticalSum: exactly additive, below full
show(z6, [0, 1, 2], [0, 3])     # CriticalFull: the product is everything
print()

print("Z8: a pair whose product overshoots the measure sum")
z8 = build_cyclic(8)
show(z8, [0, 1], [0, 2, 5])     # SuperCritical
print()

print("D4 (dihedral): classification is two-sided, order matters for AB")
d4 = build_dihedral(4)
show(d4, [0, 2], [0, 1])
print()

print("The stabilizer of an exactly-additive product is never trivial in Z6:")
a = GroupSubset.from_indices(z6, [0, 1])
b = GroupSubset.from_indices(z6, [0, 3])
cls = classify_pair(a, b)
print(f"  stabilizer(AB) = {sorted(stabilizer(cls.product))}  (a subgroup of order 2)")
