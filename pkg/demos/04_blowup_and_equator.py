"""
Unbounded orbits and the equator of the Poincare sphere
=======================================================

Past the first eigenvalue the linear flow is unbounded.  Compactifying the
state space shows the orbit reaching the equator at the direction of the
dominant unstable mode.
"""
import numpy as np

from plapflow import (Mesh1D, ProblemParams, detect_equator_limit, laplacian_eigs,
                      norm_l2, poincare_project, solve_p2_exact)

mesh = Mesh1D(np.pi, 63)
basis = laplacian_eigs(mesh)
l1, l2, l3 = basis.eigenvalues[:3]

lam = 0.5 * (l1 + l2)
traj = solve_p2_exact(mesh.zeros(), ProblemParams(2.0, lam, basis.phi(1)),
                      np.linspace(0, 40 / (lam - l1), 201), basis)
for t, u in traj.samples[::40]:
    print(f"t = {t:6.2f}  ||u|| = {norm_l2(u):.3e}  s = {poincare_project(u).s:.3e}")
print("limit:", detect_equator_limit(traj, basis))

# With no first-mode content and lambda above lambda_2, the second mode wins,
# as long as the horizon is short enough that rounding noise in mode 1 has not
# grown to take over.
u0 = basis.project_out(basis.phi(2), [1])
traj2 = solve_p2_exact(u0, ProblemParams(2.0, 0.5 * (l2 + l3), u0), np.linspace(0, 7, 141), basis)
print("limit without mode 1:", detect_equator_limit(traj2, basis))
