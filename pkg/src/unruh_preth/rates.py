"""Dissipation rates for uniformly accelerated two-level atoms.

A two-level atom dragged along a hyperbolic trajectory through the inertial
vacuum of a massless scalar field relaxes as if it were coupled to a thermal
bath whose temperature is proportional to the proper acceleration.  This
module turns the physical parameters (Zeeman splitting, acceleration,
inter-atom distance, coupling) into the coefficients that drive every
dissipator in the package:

* ``gamma_plus`` / ``gamma_minus`` -- upward / downward transition rates,
* ``A``/``B`` local coefficients and their cross-atom counterparts,
* ``f_ab`` -- the dimensionless cross-dissipation factor (1 = fully
  collective bath, 0 = independent local baths),
* the equilibrium magnetization ``M0 = tanh(pi * omega0 / alpha)``.

Everything here is a pure function of immutable inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "PhysicalConfig",
    "RateSet",
    "compute_f_ab",
    "compute_rates",
    "rates_from_gammas",
    "unruh_temperature",
    "fractional_prethermal_lifetime",
    "rates_from_json",
]

# CODATA 2018
HBAR = 1.054571817e-34      # J s
C_LIGHT = 2.99792458e8      # m / s
K_BOLTZMANN = 1.380649e-23  # J / K

# beyond this argument tanh/coth are 1.0 to double precision and naive
# sinh/cosh evaluation overflows
_TANH_CLAMP = 700.0

_REL_TOL = 1e-12


@dataclass(frozen=True)
class PhysicalConfig:
    """Physical parameters of N identical accelerated atoms.

    In ``natural`` mode c = hbar = 1 is implied: ``omega0`` and ``alpha``
    are inverse lengths and ``separation_L`` a length in the same units.
    In ``SI`` mode the attributes carry 1/s, m/s^2 and m respectively.
    """

    omega0: float
    alpha: float
    separation_L: float = 0.0
    lambda_coupling: float = 1.0
    n_atoms: int = 2
    unit_mode: str = "natural"

    def __post_init__(self):
        if self.omega0 <= 0.0:
            raise ValueError(f"omega0 must be positive, got {self.omega0}")
        if self.alpha <= 0.0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.separation_L < 0.0:
            raise ValueError(f"separation_L must be >= 0, got {self.separation_L}")
        if self.n_atoms < 1:
            raise ValueError(f"n_atoms must be >= 1, got {self.n_atoms}")
        if self.unit_mode not in ("natural", "SI"):
            raise ValueError(f"unit_mode must be 'natural' or 'SI', got {self.unit_mode!r}")


@dataclass(frozen=True)
class RateSet:
    """Complete set of dissipator coefficients for one atom pair.

    Invariants (checked on construction):

    * ``gamma_plus + gamma_minus == b_local`` with both rates >= 0,
    * ``a_local >= b_local > 0`` (coth(x) >= 1 for x > 0),
    * ``a_cross = f_ab * a_local``, ``b_cross = f_ab * b_local`` with
      ``0 <= f_ab <= 1``,
    * ``m0 = (gamma_plus - gamma_minus) / (gamma_plus + gamma_minus)``.
    """

    gamma_plus: float
    gamma_minus: float
    a_local: float
    b_local: float
    a_cross: float
    b_cross: float
    f_ab: float
    m0: float

    def __post_init__(self):
        if self.gamma_plus < 0.0 or self.gamma_minus < 0.0:
            raise ValueError("transition rates must be non-negative")
        if self.b_local <= 0.0:
            raise ValueError("b_local must be positive")
        s = self.gamma_plus + self.gamma_minus
        if abs(s - self.b_local) > _REL_TOL * max(1.0, abs(self.b_local)):
            raise ValueError(
                f"rate normalization violated: gamma_plus + gamma_minus = {s} "
                f"but b_local = {self.b_local}"
            )
        if not (self.a_local >= self.b_local):
            raise ValueError(f"a_local = {self.a_local} < b_local = {self.b_local}")
        if not (0.0 <= self.f_ab <= 1.0 + _REL_TOL):
            raise ValueError(f"f_ab must lie in [0, 1], got {self.f_ab}")
        for name, cross, local in (
            ("a_cross", self.a_cross, self.a_local),
            ("b_cross", self.b_cross, self.b_local),
        ):
            expect = self.f_ab * local
            if math.isinf(local) and self.f_ab == 0.0:
                expect = 0.0
            if not math.isinf(expect) and abs(cross - expect) > _REL_TOL * max(1.0, abs(expect)):
                raise ValueError(f"{name} = {cross} inconsistent with f_ab * local = {expect}")
        m0 = (self.gamma_plus - self.gamma_minus) / s
        if abs(m0 - self.m0) > _REL_TOL:
            raise ValueError(f"m0 = {self.m0} inconsistent with rates ({m0})")

    @property
    def gamma_sum(self) -> float:
        return self.gamma_plus + self.gamma_minus

    @property
    def gamma_diff(self) -> float:
        return self.gamma_plus - self.gamma_minus

    def with_f_ab(self, f_ab: float) -> "RateSet":
        """Same local rates with a different cross-dissipation factor."""
        return RateSet(
            gamma_plus=self.gamma_plus,
            gamma_minus=self.gamma_minus,
            a_local=self.a_local,
            b_local=self.b_local,
            a_cross=f_ab * self.a_local,
            b_cross=f_ab * self.b_local,
            f_ab=f_ab,
            m0=self.m0,
        )


def compute_f_ab(config: PhysicalConfig) -> float:
    """Cross-atom dissipation factor for a pair of co-accelerated atoms.

    For two distinct atoms at proper distance L the vacuum response along
    the shared hyperbolic trajectory is filtered by

        f = sin(2 y asinh(x)) / (L omega0 sqrt(1 + x^2))        (natural)

    with x = alpha L / 2 and y = omega0 / alpha.  In SI units the unique
    dimensionless groups are x = alpha L / (2 c^2), y = omega0 c / alpha
    and the denominator carries L omega0 / c.  The L = 0 value is the
    analytic limit 1 (removable singularity); the same-atom factor is 1
    by definition.

    The result lies in (-1, 1]: |sin z| <= |z| and asinh(x) <= x bound the
    magnitude by 1, and the sine makes it oscillate in sign at large L.
    """
    length = config.separation_L
    if length == 0.0:
        return 1.0
    if config.unit_mode == "SI":
        x = config.alpha * length / (2.0 * C_LIGHT**2)
        y = config.omega0 * C_LIGHT / config.alpha
        denom = (length * config.omega0 / C_LIGHT) * math.sqrt(1.0 + x * x)
    else:
        x = config.alpha * length / 2.0
        y = config.omega0 / config.alpha
        denom = (length * config.omega0) * math.sqrt(1.0 + x * x)
    return math.sin(2.0 * y * math.asinh(x)) / denom


def _tanh_coth(x: float) -> tuple[float, float]:
    """(tanh x, coth x) for x >= 0 with overflow clamping."""
    if x >= _TANH_CLAMP:
        return 1.0, 1.0
    t = math.tanh(x)
    if t == 0.0:
        return 0.0, math.inf
    return t, 1.0 / t


def compute_rates(config: PhysicalConfig) -> RateSet:
    """Dissipator coefficients from physical parameters.

    b_local = lambda^2 omega0 / (8 pi), a_local = b_local * coth(pi omega0 / alpha),
    gamma_pm = b_local (1 +- tanh(pi omega0 / alpha)) / 2, and the cross-atom
    coefficients are the local ones scaled by ``compute_f_ab``.

    Raises ValueError when the geometric factor is negative (large-L
    oscillation lobes): the cross-coefficient bookkeeping in `RateSet`
    models the collective regime 0 <= f_ab <= 1 only.
    """
    if config.unit_mode == "SI":
        x = math.pi * config.omega0 * C_LIGHT / config.alpha
    else:
        x = math.pi * config.omega0 / config.alpha
    tanh_x, coth_x = _tanh_coth(x)
    b_local = config.lambda_coupling**2 * config.omega0 / (8.0 * math.pi)
    a_local = b_local * coth_x
    f_ab = compute_f_ab(config) if config.n_atoms > 1 else 0.0
    if f_ab < 0.0:
        raise ValueError(
            f"f_ab = {f_ab} < 0 at L = {config.separation_L}: outside the "
            "collective-dissipation regime handled by RateSet"
        )
    return RateSet(
        gamma_plus=b_local * (1.0 + tanh_x) / 2.0,
        gamma_minus=b_local * (1.0 - tanh_x) / 2.0,
        a_local=a_local,
        b_local=b_local,
        a_cross=f_ab * a_local,
        b_cross=f_ab * b_local,
        f_ab=f_ab,
        m0=tanh_x,
    )


def rates_from_gammas(gamma_plus: float, gamma_minus: float, f_ab: float = 1.0) -> RateSet:
    """RateSet directly from the two transition rates.

    Lets scenarios pin (gamma_plus, gamma_minus, f_ab) without choosing
    lambda, omega0 and alpha individually.  Requires
    gamma_plus > gamma_minus >= 0 (a positive effective temperature);
    gamma_plus == gamma_minus is rejected because a_local diverges there
    (the infinite-temperature limit is reachable through ``compute_rates``
    only).
    """
    if gamma_minus < 0.0 or gamma_plus <= gamma_minus:
        raise ValueError(
            f"need gamma_plus > gamma_minus >= 0, got ({gamma_plus}, {gamma_minus})"
        )
    if not (0.0 <= f_ab <= 1.0):
        raise ValueError(f"f_ab must lie in [0, 1], got {f_ab}")
    b_local = gamma_plus + gamma_minus
    m0 = (gamma_plus - gamma_minus) / b_local
    a_local = b_local / m0
    return RateSet(
        gamma_plus=gamma_plus,
        gamma_minus=gamma_minus,
        a_local=a_local,
        b_local=b_local,
        a_cross=f_ab * a_local,
        b_cross=f_ab * b_local,
        f_ab=f_ab,
        m0=m0,
    )


def unruh_temperature(alpha_si: float) -> float:
    """Effective bath temperature (kelvin) seen at proper acceleration alpha (m/s^2).

    T = hbar * alpha / (2 pi c k_B).
    """
    if alpha_si <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha_si}")
    return HBAR * alpha_si / (2.0 * math.pi * C_LIGHT * K_BOLTZMANN)


def fractional_prethermal_lifetime(f_ab: float, gamma_sum: float = 1.0) -> float:
    """Fraction of the thermalization time spent in the quasi-steady state.

    Thermalization takes T_th = 1 / (gamma_sum (1 - f_ab)) while the
    quasi-steady state is reached after T_pre = 1 / gamma_sum, so
    (T_th - T_pre) / T_th algebraically equals f_ab.  Computed from the
    two timescales and cross-checked against that identity.
    """
    if not (0.0 <= f_ab < 1.0):
        raise ValueError(f"f_ab must lie in [0, 1), got {f_ab}")
    if gamma_sum <= 0.0:
        raise ValueError(f"gamma_sum must be positive, got {gamma_sum}")
    t_th = 1.0 / (gamma_sum * (1.0 - f_ab))
    t_pre = 1.0 / gamma_sum
    frac = (t_th - t_pre) / t_th
    assert abs(frac - f_ab) <= 1e-12, f"timescale identity violated: {frac} vs {f_ab}"
    return frac


_PHYSICAL_KEYS = {"omega0", "alpha", "L", "lambda", "n_atoms", "unit_mode"}
_DIRECT_KEYS = {"gamma_plus", "gamma_minus", "f_ab", "n_atoms"}


def rates_from_json(obj: dict) -> tuple[RateSet, int]:
    """Parse a rate specification from its JSON object form.

    Two mutually exclusive key sets are accepted:

    * physical mode: {omega0, alpha, L, lambda, n_atoms, unit_mode}
    * direct-rate mode: {gamma_plus, gamma_minus, f_ab, n_atoms}

    Returns (RateSet, n_atoms).
    """
    keys = set(obj)
    is_physical = keys == _PHYSICAL_KEYS
    is_direct = keys == _DIRECT_KEYS
    if is_physical == is_direct:
        raise ValueError(
            f"rate spec keys {sorted(keys)} must be exactly "
            f"{sorted(_PHYSICAL_KEYS)} or {sorted(_DIRECT_KEYS)}"
        )
    n_atoms = int(obj["n_atoms"])
    if is_physical:
        config = PhysicalConfig(
            omega0=float(obj["omega0"]),
            alpha=float(obj["alpha"]),
            separation_L=float(obj["L"]),
            lambda_coupling=float(obj["lambda"]),
            n_atoms=n_atoms,
            unit_mode=str(obj["unit_mode"]),
        )
        return compute_rates(config), n_atoms
    rates = rates_from_gammas(
        float(obj["gamma_plus"]), float(obj["gamma_minus"]), float(obj["f_ab"])
    )
    return rates, n_atoms
