"""
A complex square well with a prescribed eigenvalue
==================================================

We build a potential V0 on [-R, R] whose Schrodinger operator has the
eigenvalue (1 + i eps)^2, then compare two one-dimensional bounds on it.
"""

import numpy as np

from eigenbound import bounds, eigensolvers

# the solver fixes R from eps and finds the interior wavenumber by Newton's method
sol = eigensolvers.solve_square_well_1d(0.1)
print(f"R = {sol.R:.4f}, V0 = {sol.V0:.6f}, matching residual {sol.residual:.1e}")
print(f"roots of the matching function inside the contour: {sol.winding}")

# a finite-difference eigensolver should see the same eigenvalue
extrap, coarse, fine = eigensolvers.square_well_grid_eigenvalue(sol, h=0.05)
print(f"grid eigenvalue {extrap:.8f}  vs  exact {sol.E:.8f}")

# the exponentially weighted bound stays of order one as eps shrinks,
# the plain L^1 bound loses a factor |ln eps|
for eps in (0.1, 0.05, 0.02):
    s = eigensolvers.solve_square_well_1d(eps)
    dn = bounds.cert_davies_nath_1d(s.potential, s.E)
    aad = bounds.cert_aad_1d(s.potential, s.E)
    print(f"eps={eps:<5} weighted ratio {dn.ratio:.3f}   L^1 ratio {aad.ratio:.3f}   |ln eps| = {abs(np.log(eps)):.2f}")
