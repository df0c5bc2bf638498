"""
Spectrum of the discrete Dirichlet Laplacian and the exact linear flow
======================================================================

The discrete Laplacian on a uniform mesh has closed-form eigenpairs, so the
p = 2 problem can be solved exactly mode by mode.
"""
import numpy as np

from plapflow import Mesh1D, ProblemParams, laplacian_eigs, norm_l2, solve_p2_exact

mesh = Mesh1D(np.pi, 63)
basis = laplacian_eigs(mesh)

# On (0, pi) the continuum eigenvalues are j^2; the discrete ones sit just below.
for j in range(1, 6):
    print(f"lambda_{j} = {basis.eigenvalue(j):.6f}   (continuum {j * j})")

# Below lambda_1 every orbit settles; at lambda_1 with forcing phi_1 the first
# coefficient grows linearly in time.
ts = np.linspace(0.0, 5.0, 6)
for lam in (0.5 * basis.eigenvalue(1), basis.eigenvalue(1)):
    traj = solve_p2_exact(mesh.zeros(), ProblemParams(2.0, lam, basis.phi(1)), ts, basis)
    coeffs = [basis.analyze(u)[1] for u in traj.states]
    print(f"lambda = {lam:.4f}: u_1(t) =", np.round(coeffs, 6))

print("||u(5)|| at resonance:", norm_l2(traj.final))
