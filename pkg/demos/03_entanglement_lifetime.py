"""Bath-generated entanglement as a clock for the quasi-steady state.

Start the pair in the separable |up down> state.  A nearly collective bath
builds up concurrence, holds it on a plateau, and finally destroys it as
the system thermalizes.  The plateau length grows like 1/(1 - f), so the
entanglement trace doubles as a lifetime measurement.
"""

import numpy as np

from unruh_preth import (
    build_lindbladian,
    concurrence_wootters,
    evolve_dense,
    rates_from_gammas,
    zeeman_product_state,
)

rates = rates_from_gammas(0.8, 0.2, 1.0)
rho0 = zeeman_product_state("ud").matrix
times = np.geomspace(1e-2, 1e6, 1200)

print(f"{'f':>8s} {'C_max':>7s} {'half-max window':>22s} {'duration':>10s}")
durations = {}
for f in (0.99, 0.9999):
    sop = build_lindbladian(rates.with_f_ab(f), 2)
    conc = np.array([concurrence_wootters(s) for s in evolve_dense(sop, rho0, times)])
    above = np.nonzero(conc >= 0.5 * conc.max())[0]
    t_on, t_off = times[above[0]], times[above[-1]]
    durations[f] = t_off - t_on
    print(f"{f:8.4f} {conc.max():7.4f} [{t_on:9.2f}, {t_off:10.2f}] {t_off - t_on:10.2f}")

print()
print(f"duration ratio: {durations[0.9999] / durations[0.99]:.1f} "
      f"(the collective window stretches like 1/(1 - f))")
