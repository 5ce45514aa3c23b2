"""Run the measure-preserving pair transform and inspect its trace.

One step with pivot x in A replaces (A, B) by (A ∪ Bx, x⁻¹A ∩ B).  In an
abelian group this conserves |A| + |B| while growing A and shrinking B, and
the product set never gains elements.  Iterating with the least shrinking
pivot terminates either when B becomes a translate of a subgroup or when no
pivot shrinks B any further — the two structural endpoints the reduction
theory branches on.
"""

from critlab import (
    GroupSubset,
    TerminationReason,
    build_cyclic,
    classify_pair,
    dyson_run,
    dyson_step,
    product_set,
)

z5 = build_cyclic(5)
a = GroupSubset.from_indices(z5, [0, 2])
b = GroupSubset.from_indices(z5, [0, 1])

print("Single step in Z5 with pivot 2:")
a1, b1 = dyson_step(a, b, 2)
print(f"  (A, B) = ({list(a.indices)}, {list(b.indices)})")
print(f"  ->       ({list(a1.indices)}, {list(b1.indices)})")
print(f"  sizes {a.size}+{b.size} -> {a1.size}+{b1.size} (conserved)")
print()

print("Full run from the same pair:")
trace = dyson_run(a, b)
print(f"  start A={list(trace.initial_a.indices)} B={list(trace.initial_b.indices)}")
for i, step in enumerate(trace.steps, 1):
    print(f"  step {i}: pivot {step.pivot} -> A={list(step.a.indices)} B={list(step.b.indices)}")
print(f"  terminated: {trace.reason.value}")
print(f"  final B is a subgroup translate -> the pair has collapsed onto cosets")
print()

print("Trace invariants, checked against the initial product set:")
k0 = product_set(a, b)
tag0 = classify_pair(a, b).tag
for step in trace.steps:
    k = product_set(step.a, step.b)
    assert set(k.indices) <= set(k0.indices)
    assert step.a.size + step.b.size == a.size + b.size
print(f"  product stayed inside {list(k0.indices)}; class started as {tag0.value}")
print()

print("A pair that stalls instead (A already fills the group):")
full = GroupSubset.from_indices(z5, range(5))
stalled = dyson_run(full, b)
assert stalled.reason is TerminationReason.NO_SHRINKING_PIVOT
print(f"  A=Z5, B={list(b.indices)}: reason = {stalled.reason.value}")
print()

print("Traces serialize for downstream tools:")
print(f"  {dyson_run(a, b).to_json_list()}")
