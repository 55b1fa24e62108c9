"""Reduced three-observable model for the symmetric two-atom sector.

For initial states diagonal in the dipolar basis (|uu>, |dd>, triplet-0,
singlet) the full 16-dimensional master equation closes on the three
observables (M_z, M_zz, M_c):

    d/dt [M_z ]   [ -s        0      2 f d ] [M_z ]   [ d ]
         [M_zz] = [ d/2     -2 s     f s   ] [M_zz] + [ 0 ]
         [M_c ]   [ -f d/2   2 f s   -s    ] [M_c ]   [ 0 ]

with s = gamma_plus + gamma_minus, d = gamma_plus - gamma_minus and f the
cross-dissipation factor.  Time is measured in units of the total
single-atom relaxation rate, i.e. the generator above is the exact
projection of the dense one built in ``liouvillian`` (the two engines are
cross-validated to 1e-8 in the test suite).

For f < 1 the unique fixed point is the thermal product state
(M0, M0^2/4, 0).  At f = 1 the sum M_zz + M_c is conserved and the fixed
point acquires initial-value memory: with S0 = M_c(0) + M_zz(0),

    M_z^eq  = M0 (3 + 4 S0) / (3 + M0^2)
    M_c^eq  = -(M0^2 - 4 S0) / (2 (3 + M0^2))
    M_zz^eq = S0 - M_c^eq

which is a generalized Gibbs state: thermal within the collective triplet
sector, with the conserved singlet weight 1/4 - S0 frozen in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .qcore import ID2, SIGMA_X, SIGMA_Y, SIGMA_Z, DensityMatrix, ObservableSet
from .rates import RateSet

__all__ = [
    "BlochState",
    "GGEParameters",
    "GibbsResult",
    "GGEResult",
    "drift_matrix",
    "bloch_rhs",
    "reconstruct_density",
    "gibbs_steady",
    "gge_steady",
    "gge_from_initial",
    "evolve_bloch",
    "plateau_departure_time",
    "BLOCH_CSV_HEADER",
    "bloch_csv_rows",
]

_SUM_MIN = -0.75  # pure singlet
_SUM_MAX = 0.25   # anything in the collective triplet sector


@dataclass(frozen=True)
class BlochState:
    """Point of the reduced model, with the time it belongs to."""

    m_z: float
    m_zz: float
    m_c: float
    tau: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.m_z, self.m_zz, self.m_c])

    def as_observables(self) -> ObservableSet:
        return ObservableSet(m_z=self.m_z, m_zz=self.m_zz, m_c=self.m_c)


@dataclass(frozen=True)
class GGEParameters:
    """Inputs of the initial-value-dependent steady state.

    m2 = M_c(0), m3 = M_zz(0), m0 = tanh(pi omega0 / alpha).  The memory
    parameter l1 is finite only strictly inside -3/4 < m2 + m3 < 1/4; the
    boundaries (pure singlet, pure triplet sector) are handled as limits.
    """

    m2: float
    m3: float
    m0: float

    def __post_init__(self):
        total = self.m2 + self.m3
        if not (_SUM_MIN - 1e-12 <= total <= _SUM_MAX + 1e-12):
            raise ValueError(
                f"m2 + m3 = {total} outside [{_SUM_MIN}, {_SUM_MAX}]: not reachable "
                "from a physical two-atom state in this parameterization"
            )
        if not (0.0 <= self.m0 < 1.0):
            raise ValueError(f"m0 must lie in [0, 1), got {self.m0}")

    @property
    def conserved_sum(self) -> float:
        return self.m2 + self.m3

    def l1(self) -> float:
        """Memory parameter of the exponential-family form; +-inf at the boundaries."""
        total = self.conserved_sum
        num = 1.0 - 4.0 * total
        den = 3.0 + 4.0 * total
        if num <= 0.0:
            return -math.inf
        if den <= 0.0:
            return math.inf
        cosh_x = 1.0 / math.sqrt(1.0 - self.m0**2)  # cosh(atanh(m0))
        return math.log(num / den * (1.0 + 2.0 * cosh_x))


def drift_matrix(rates: RateSet) -> tuple[np.ndarray, np.ndarray]:
    """(R, b) of the linear system d/dt x = R x + b."""
    s = rates.gamma_sum
    d = rates.gamma_diff
    f = rates.f_ab
    r = np.array(
        [
            [-s, 0.0, 2.0 * f * d],
            [d / 2.0, -2.0 * s, f * s],
            [-f * d / 2.0, 2.0 * f * s, -s],
        ]
    )
    return r, np.array([d, 0.0, 0.0])


def bloch_rhs(state: BlochState, rates: RateSet) -> tuple[float, float, float]:
    """Time derivatives (dM_z, dM_zz, dM_c) at the given point."""
    r, b = drift_matrix(rates)
    dot = r @ state.as_array() + b
    return (float(dot[0]), float(dot[1]), float(dot[2]))


def reconstruct_density(state: BlochState | ObservableSet) -> np.ndarray:
    """Two-atom density matrix from (M_z, M_zz, M_c).

    rho = I/4 + (M_z/2)(Iz1 + Iz2) + 4 M_zz Iz1 Iz2 + 2 M_c (Ix1 Ix2 + Iy1 Iy2)
    with I_i = sigma_i / 2.  Exact for every state in the symmetric sector
    reachable from the dipolar basis; the extraction in ``qcore.observables``
    inverts it, which the tests check as a round-trip identity.
    """
    m_z = state.m_z
    m_zz = state.m_zz
    m_c = state.m_c
    rho = np.eye(4, dtype=complex) / 4.0
    rho += (m_z / 4.0) * (np.kron(SIGMA_Z, ID2) + np.kron(ID2, SIGMA_Z))
    rho += m_zz * np.kron(SIGMA_Z, SIGMA_Z)
    rho += (m_c / 2.0) * (np.kron(SIGMA_X, SIGMA_X) + np.kron(SIGMA_Y, SIGMA_Y))
    return rho


@dataclass(frozen=True)
class GibbsResult:
    state: BlochState
    rho: DensityMatrix


@dataclass(frozen=True)
class GGEResult:
    state: BlochState
    rho: DensityMatrix
    l1: float


def gibbs_steady(rates: RateSet) -> GibbsResult:
    """Thermal fixed point (M0, M0^2/4, 0) for f_ab < 1, initial-value independent."""
    if rates.f_ab >= 1.0:
        raise ValueError("f_ab = 1 has a degenerate fixed-point manifold; use gge_steady")
    m0 = rates.m0
    state = BlochState(m_z=m0, m_zz=m0**2 / 4.0, m_c=0.0)
    return GibbsResult(state=state, rho=DensityMatrix.from_matrix(reconstruct_density(state)))


def gge_steady(params: GGEParameters) -> GGEResult:
    """Initial-value-dependent fixed point of the fully collective (f = 1) dynamics.

    The density matrix is always built from the observable reconstruction,
    which stays finite at the boundary values where l1 diverges.
    """
    m0 = params.m0
    total = params.conserved_sum
    denom = 3.0 + m0**2
    m_z = m0 * (3.0 + 4.0 * total) / denom
    m_c = -(m0**2 - 4.0 * total) / (2.0 * denom)
    m_zz = total - m_c
    state = BlochState(m_z=m_z, m_zz=m_zz, m_c=m_c)
    rho = DensityMatrix.from_matrix(reconstruct_density(state))
    return GGEResult(state=state, rho=rho, l1=params.l1())


def gge_from_initial(initial: BlochState | ObservableSet, rates: RateSet) -> GGEResult:
    """GGE fixed point selected by the conserved quantities of an initial point."""
    params = GGEParameters(m2=initial.m_c, m3=initial.m_zz, m0=rates.m0)
    return gge_steady(params)


def _particular_solution(r: np.ndarray, b: np.ndarray) -> np.ndarray:
    # lstsq handles the f = 1 singular drift, where b lies in range(R)
    x, _, _, _ = np.linalg.lstsq(r, -b, rcond=None)
    return x


def evolve_bloch(rates: RateSet, initial: BlochState, times) -> list[BlochState]:
    """Exact trajectory of the reduced model.

    Eigendecomposition of the 3x3 drift plus a particular solution; if the
    drift is defective (eigenbasis condition number > 1e8) the trajectory
    falls back to high-order adaptive stepping.
    """
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) < 0.0):
        raise ValueError("times must be ascending")
    r, b = drift_matrix(rates)
    x0 = initial.as_array()
    w, v = np.linalg.eig(r)
    if np.linalg.cond(v) > 1e8:
        sol = solve_ivp(
            lambda _t, y: r @ y + b,
            t_span=(0.0, float(times[-1])),
            y0=x0,
            t_eval=times,
            method="DOP853",
            rtol=1e-12,
            atol=1e-14,
        )
        if not sol.success:
            raise RuntimeError(f"reduced-model integration failed: {sol.message}")
        traj = sol.y.T
    else:
        xp = _particular_solution(r, b)
        coeff = np.linalg.solve(v, x0 - xp)
        traj = np.real((np.exp(np.outer(times, w)) * coeff) @ v.T) + xp
    return [
        BlochState(m_z=row[0], m_zz=row[1], m_c=row[2], tau=float(t))
        for t, row in zip(times, traj)
    ]


def evolve_bloch_expm(rates: RateSet, initial: BlochState, times) -> list[BlochState]:
    """Matrix-exponential stepping reference for ``evolve_bloch`` (test oracle)."""
    times = np.asarray(times, dtype=float)
    r, b = drift_matrix(rates)
    aug = np.zeros((4, 4))
    aug[:3, :3] = r
    aug[:3, 3] = b
    out = []
    y = np.concatenate([initial.as_array(), [1.0]])
    t_prev = 0.0
    for t in times:
        y = expm(aug * (t - t_prev)) @ y
        t_prev = t
        out.append(BlochState(m_z=y[0], m_zz=y[1], m_c=y[2], tau=float(t)))
    return out


def plateau_departure_time(rates: RateSet, initial: BlochState,
                           threshold: float = 0.1) -> float:
    """Time at which M_z leaves the quasi-steady plateau toward the thermal value.

    The trajectory is rescaled to s(t) = (M_z(t) - M_z^gge) / (M_z^gibbs -
    M_z^gge), which runs from the plateau (s ~ 0) to thermal equilibrium
    (s = 1); the departure time is the first crossing of ``threshold``.
    Requires 0 < f_ab < 1 and a plateau distinct from the thermal point.
    """
    if not (0.0 < rates.f_ab < 1.0):
        raise ValueError("departure time needs 0 < f_ab < 1")
    m_gge = gge_from_initial(initial, rates).state.m_z
    m_gibbs = rates.m0
    span = m_gibbs - m_gge
    if abs(span) < 1e-12:
        raise ValueError("plateau and thermal magnetization coincide for this initial state")

    grid = np.geomspace(1e-3 / rates.gamma_sum, 50.0 / (rates.gamma_sum * (1.0 - rates.f_ab)), 4000)
    traj = evolve_bloch(rates, initial, grid)
    s_vals = np.array([(st.m_z - m_gge) / span for st in traj])
    above = np.nonzero(s_vals >= threshold)[0]
    # skip any initial transient toward the plateau: take the last upward crossing
    crossing = None
    for idx in above:
        if idx > 0 and s_vals[idx - 1] < threshold:
            crossing = idx
    if crossing is None:
        raise RuntimeError("no plateau departure found on the sampled grid")

    def shifted(t):
        state = evolve_bloch(rates, initial, [t])[0]
        return (state.m_z - m_gge) / span - threshold

    return float(brentq(shifted, grid[crossing - 1], grid[crossing], xtol=1e-12, rtol=1e-12))


BLOCH_CSV_HEADER = "t,Mz,Mzz,Mc,purity,entropy,concurrence,model"


def bloch_csv_rows(states: list[BlochState], model: str = "bloch") -> list[str]:
    """Trajectory rows in the shared CSV schema, tagged with the model column.

    Purity, entropy and concurrence are evaluated on the reconstructed
    density matrix, which is exact for dipolar-basis initial conditions.
    """
    from . import qcore

    rows = []
    for st in states:
        rho = reconstruct_density(st)
        vals = (
            st.tau,
            st.m_z,
            st.m_zz,
            st.m_c,
            qcore.purity(rho),
            qcore.von_neumann_entropy(rho),
            qcore.concurrence_wootters(rho),
        )
        rows.append(",".join(f"{v:.17g}" for v in vals) + f",{model}")
    return rows
