"""Run the independent validation battery on a solved state.

The checks quadrature the solved densities with a finer rule than the
assembly used: the squared Cauchy operator must act as the identity, the
original curvature-dependent boundary conditions must be satisfied by the
reconstructed displacement traces, the one-sided stress traces must match
their algebraic values, and the conserved integrals must vanish.
"""

import numpy as np

import crackst as cs

setup = cs.ProblemSetup(
    contour=cs.circular_contour(1.0, (0.0, np.pi)),
    matrix=cs.Material(40.0, 0.25),
    inclusion=cs.Material(60.0, 0.35),
    surface=cs.SurfaceTension(0.1, 0.1, 0.1),
    load=cs.RemoteLoad(1.0, 0.0, 0.0),
)
dset, report = cs.solve_problem(setup, 24)
print(f"solve: residual {report.max_residual:.2e}, condition {report.condition:.1e}\n")

vreport = cs.validate_solution(dset, setup)
for check in vreport.checks:
    status = "pass" if check.passed else "FAIL"
    print(f"{status}: {check.name:28s} value {check.value:.3e}  tolerance {check.tolerance:.3e}")
print(f"\nall passed: {vreport.all_passed}")
