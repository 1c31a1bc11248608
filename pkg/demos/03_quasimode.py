"""
Gaussian quasimodes
===================

A wave packet travelling along x_1, stretched to length 1/eps and width
1/sqrt(eps), nearly solves -Laplace psi = (1 + i eps) psi.  A Gaussian
potential of size eps absorbs most of what is left over.
"""

import math

from eigenbound import quasimode
from eigenbound.sweep import fit_slope

d, q = 3, 4.0
eps_list = (0.4, 0.2, 0.1, 0.05)
rows = []
for eps in eps_list:
    qm = quasimode.gaussian_quasimode(eps, d)
    g2, Vq, Vpsi = quasimode.quasimode_norms(qm, q)
    rows.append((eps, g2, Vq, Vpsi, quasimode.check_proposition_condition(qm, q)))
    print(f"eps={eps:<5} ||g||={g2:.4f}  ||V||_q={Vq:.4f}  ||V^1/2 psi||={Vpsi:.4f}  condition={rows[-1][-1]:.3f}")

for name, col in (("residual", 1), ("potential", 2), ("weighted psi", 3), ("condition", 4)):
    print(f"slope of {name}: {fit_slope([(r[0], r[col]) for r in rows]).slope:.3f}")

# cancelling the residual on a ball of radius M in y leaves a Gaussian tail
for eps in (0.3, 0.2, 0.1):
    qm = quasimode.truncated_quasimode(eps, q, d)
    print(f"eps={eps:<4} M={qm.M:.3f}  ||g|| / (eps e^(-M^2/4)) = {qm.g_norm2 / (eps * math.exp(-qm.M**2 / 4)):.3f}")
