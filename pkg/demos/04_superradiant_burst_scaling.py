"""Collective burst: peak intensity ~ N^2, decay time ~ 1/N.

A fully collective register started at the end of the ladder opposite its
attractor relaxes through the middle of the ladder, where <J+ J-> is of
order N^2/4: a short, intense burst.  Independent atoms instead relax
mono-exponentially with an N-independent time constant.
"""

from unruh_preth import rates_from_gammas, scaling_sweep, fit_power_law
from unruh_preth.dicke import independent_decay_time

rates = rates_from_gammas(0.8, 0.2, 1.0)
n_values = list(range(10, 101, 10))

rows = scaling_sweep(n_values, rates)
print(f"{'N':>4s} {'I_max':>9s} {'t_peak':>8s} {'T_R':>9s} {'T_R (f=0)':>10s}")
for (n, i_max, t_peak, t_r) in rows:
    print(f"{n:4d} {i_max:9.1f} {t_peak:8.4f} {t_r:9.5f} "
          f"{independent_decay_time(n, rates):10.5f}")

fit_i = fit_power_law(n_values, [r[1] for r in rows])
fit_t = fit_power_law(n_values, [r[3] for r in rows])
print()
print(f"log10 I_max = {fit_i.intercept:+.3f} {fit_i.slope:+.4f} log10 N   (r^2 = {fit_i.r_squared:.6f})")
print(f"log10 T_R   = {fit_t.intercept:+.3f} {fit_t.slope:+.4f} log10 N   (r^2 = {fit_t.r_squared:.6f})")
