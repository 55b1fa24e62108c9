"""Where in parameter space would any of this be visible?

The effective bath temperature is proportional to the proper acceleration
(about 2.5e20 m/s^2 per kelvin).  The collective window requires the
inter-atom distance to sit well inside 1/alpha in natural units; in SI
units, micrometers to nanometers at accelerations reachable in storage
rings.  The fraction of the thermalization time spent in the quasi-steady
state equals the cross-coupling factor f itself.
"""

from unruh_preth import PhysicalConfig, compute_f_ab, unruh_temperature
from unruh_preth import fractional_prethermal_lifetime

print("acceleration -> effective temperature")
for alpha in (2.4e20, 2.9e23, 1e26):
    print(f"  alpha = {alpha:8.1e} m/s^2  ->  T = {unruh_temperature(alpha):10.3e} K")

print()
print("cross-coupling factor at omega0 = 1e15 Hz")
print(f"{'alpha (m/s^2)':>14s} {'L':>9s} {'f':>9s} {'lifetime fraction':>18s}")
for alpha, length in (
    (1e25, 1e-9),
    (1e25, 1e-7),
    (1e24, 1e-6),
    (1e23, 1e-4),
):
    cfg = PhysicalConfig(omega0=1e15, alpha=alpha, separation_L=length,
                         lambda_coupling=1.0, n_atoms=2, unit_mode="SI")
    f = compute_f_ab(cfg)
    frac = fractional_prethermal_lifetime(f) if 0.0 <= f < 1.0 else float("nan")
    print(f"{alpha:14.1e} {length:9.1e} {f:9.5f} {frac:18.5f}")
