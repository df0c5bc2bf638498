"""
Letting p decrease to 2
=======================

Equilibria, finite-time orbits and sampled attractors of the p-problem are
compared against the linear problem as p -> 2+.
"""
import numpy as np

from plapflow import (Mesh1D, ProblemParams, SolverConfig, default_ic_net, laplacian_eigs,
                      sweep_equilibrium_continuity, upper_semicontinuity_experiment)
from plapflow.experiments import semigroup_continuity

mesh = Mesh1D(np.pi, 63)
basis = laplacian_eigs(mesh)
l1, l2 = basis.eigenvalues[:2]
p_list = [2.5, 2.25, 2.125, 2.0625]

print("equilibria, lambda = 0, g = phi_1")
for p, gap2, gapp, res, its in sweep_equilibrium_continuity(p_list, ProblemParams(2.5, 0.0, basis.phi(1))):
    print(f"  p = {p:<7} ||u_p - u_2||_V2 = {gap2:.4e}")

rng = np.random.default_rng(9)
prm = ProblemParams(2.5, 0.5 * l1, mesh.random(rng))
rows, slope = semigroup_continuity(p_list, prm, mesh.random(rng),
                                   SolverConfig(tau=1e-3, t_final=1.0, record_every=10), basis=basis)
print("orbits on [0, 1]:", ", ".join(f"{g:.3e}" for _, g in rows), f"slope {slope:.2f}")

# Above lambda_1 the p-equilibria grow like (lambda/lambda_1)^(1/(p-2)), so the
# sampled attractors drift away from the linear one instead of approaching it.
net = default_ic_net(mesh, seed=0, basis=basis)[:8]
rows = upper_semicontinuity_experiment([2.5, 2.25], ProblemParams(2.5, 0.5 * (l1 + l2), basis.phi(1)),
                                       net, 10.0, SolverConfig(tau=1e-2))
for p, d, _ in rows:
    print(f"  p = {p}  sup dist to A_2 = {d:.3e}")
