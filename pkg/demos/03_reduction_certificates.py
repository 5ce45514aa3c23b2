"""Reduce a small-product pair to a quotient model, with a checkable receipt.

For a sub-critical pair in an abelian group, the stabilizer H of the product
set is a nontrivial subgroup, and pushing everything to G/H produces images
(I, J) whose product overshoots: m(IJ) = m(I) + m(J) - m({e}).  The
certificate records the kernel, the quotient, the projection, and both
images; ``validate_certificate`` re-derives every claim from scratch.

The general-group construction (``kemperman_reduce``) agrees with the
stabilizer route on abelian inputs but is built from the transform instead.
"""

import json

from critlab import (
    GroupSubset,
    build_cyclic,
    kemperman_reduce,
    kneser_reduce,
    validate_certificate,
)

z6 = build_cyclic(6)
a = GroupSubset.from_indices(z6, [0, 1])
b = GroupSubset.from_indices(z6, [0, 3])

print("Stabilizer-quotient certificate for A={0,1}, B={0,3} in Z6:")
cert = kneser_reduce(a, b)
print(f"  kernel           {sorted(cert.kernel)}")
print(f"  quotient order   {cert.quotient.order}")
print(f"  projection       {list(cert.projection.map)}")
print(f"  image I          {list(cert.image_i.indices)}")
print(f"  image J          {list(cert.image_j.indices)}")
print(f"  overshoot holds  {cert.overshoot_holds}")
print()

print("Independent validation (each key is re-derived, not trusted):")
for name, ok in validate_certificate(cert, a, b).items():
    print(f"  {name:24s} {ok}")
print()

print("Certificates are content-addressed JSON documents:")
doc = cert.to_json_dict()
print(f"  digest {doc['digest'][:16]}…")
print(f"  {json.dumps({k: v for k, v in doc.items() if k in ('kernel', 'projection', 'overshoot_holds')})}")
print()

print("Transform-based route on the same input (sub-critical this time):")
a2 = GroupSubset.from_indices(z6, [0])
b2 = GroupSubset.from_indices(z6, [0, 3])
k1 = kneser_reduce(a2, b2)
k2 = kemperman_reduce(a2, b2)
print(f"  stabilizer route kernel: {sorted(k1.kernel)}")
print(f"  transform route  kernel: {sorted(k2.kernel)}")
assert k1.kernel.members == k2.kernel.members
print("  both routes agree — two constructions, one answer")
