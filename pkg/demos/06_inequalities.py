"""
Checking the two inequalities that drive the estimates
======================================================

Tartar's vector inequality gives strong monotonicity of the p-Laplacian;
Ghidaglia's inequality turns a differential inequality into an explicit decay
envelope.  Both are fuzzed here against independent computations.
"""
from plapflow.bounds import ghidaglia_fuzz, tartar_fuzz

violations, min_gap = tartar_fuzz(20_000, seed=0)
print(f"Tartar: {len(violations)} violations in 20000 samples, smallest gap {min_gap:.3e}")

# Doubling the constant breaks it immediately.
violations, _ = tartar_fuzz(20_000, seed=0, constant_exponent=3.0)
print(f"Tartar with the constant 2^(3-p): {len(violations)} violations")

violations, worst = ghidaglia_fuzz(20, seed=0)
print(f"Ghidaglia: {len(violations)} violations, worst relative excess {worst:.2e}")
