"""How the generator's spectrum announces a long-lived quasi-steady state.

Two atoms share a bath whose cross-coupling is controlled by f in [0, 1].
At f = 1 the generator has a second zero mode (a genuinely conserved
quantity); just below 1 that mode acquires a tiny decay rate ~ (1 - f),
opening a huge gap between "fast" relaxation and the final approach to
equilibrium.  That separation is the whole quasi-steady-state story.
"""

import numpy as np

from unruh_preth import build_lindbladian, rates_from_gammas, spectrum

rates = rates_from_gammas(0.8, 0.2, 1.0)

print("two atoms, gamma+ = 0.8, gamma- = 0.2")
print(f"{'f':>8s} {'zero modes':>11s} {'slowest rate':>13s} {'next rate':>10s}")
for f in (0.0, 0.9, 0.99, 0.9999, 1.0):
    rep = spectrum(build_lindbladian(rates.with_f_ab(f), 2))
    nxt = rep.adr + rep.gap_to_slow_cluster
    print(f"{f:8.4f} {rep.zero_count:11d} {rep.adr:13.3e} {nxt:10.3e}")

print()
print("the slowest nonzero rate scales like (1 - f):")
for f in (0.99, 0.999, 0.9999):
    rep = spectrum(build_lindbladian(rates.with_f_ab(f), 2))
    print(f"  f = {f:<7g} slowest/(1 - f) = {rep.adr / (1 - f):.4f}")
