"""
Resolvent growth near the positive axis
=======================================

On a periodic box the free resolvent is a Fourier multiplier.  Wave
packets concentrated on a cap of the sphere |xi| = lam are amplified by
about eps^{-1/2} from L^2 to L^4 in three dimensions.
"""

import numpy as np

from eigenbound import fourier

lam = 1.0
grid = fourier.stein_tomas_grid(lam, d=3, n=64)
print(f"box half-width {grid.half_extent[0]:.2f}, Nyquist {fourier.nyquist(grid):.2f}")

rq = fourier.ResolventQuery(lam, 0.2)
packet = fourier.knapp_packet(grid, lam, 0.2)
noise = fourier.random_field(grid, np.random.default_rng(0))
print("packet ratio:", round(fourier.resolvent_ratio(packet, rq, 4), 3))
print("noise ratio: ", round(fourier.resolvent_ratio(noise, rq, 4), 3))

# the fitted slope over eps; n = 128 is used in the test suite, 64 keeps this quick
fit, records = fourier.measure_2pc_scaling(lam, (0.4, 0.2, 0.1), n=64)
for r in records:
    print(f"eps={r.eps:<4} best ratio {r.estimate:.3f}")
print(f"slope {fit.slope:.3f}")
