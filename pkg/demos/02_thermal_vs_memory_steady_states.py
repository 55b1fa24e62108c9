"""Thermal equilibrium versus initial-state memory.

Below full collectivity (f < 1) both atoms forget everything: whatever the
initial state, the fixed point is the thermal product state with
magnetization M0.  At f = 1 the conserved quantity M_c + M_zz survives, and
the fixed point remembers where the system started.
"""

import numpy as np

from unruh_preth import (
    dipolar_basis_state,
    gge_from_initial,
    gibbs_steady,
    observables,
    rates_from_gammas,
)

rates = rates_from_gammas(0.8, 0.2, 1.0)

thermal = gibbs_steady(rates.with_f_ab(0.5)).state
print("f < 1: unique thermal fixed point")
print(f"  (M_z, M_zz, M_c) = ({thermal.m_z:.4f}, {thermal.m_zz:.4f}, {thermal.m_c:.4f})")
print()
print("f = 1: one fixed point per conserved sector")
print(f"{'initial state':>14s} {'M_c+M_zz':>9s} {'M_z^eq':>8s} {'M_zz^eq':>8s} {'M_c^eq':>8s} {'l1':>8s}")
for label in ("up_up", "down_down", "triplet0", "singlet"):
    obs0 = observables(dipolar_basis_state(label))
    res = gge_from_initial(obs0, rates)
    st = res.state
    print(f"{label:>14s} {obs0.m_c + obs0.m_zz:9.3f} "
          f"{st.m_z:8.4f} {st.m_zz:8.4f} {st.m_c:8.4f} {res.l1:8.3f}")

print()
print("note: up_up, down_down and triplet0 share one sector (same fixed")
print("point); the singlet sits alone in its own dark sector and never moves.")
