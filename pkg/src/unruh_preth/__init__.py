"""Open-system dynamics of uniformly accelerated two-level atoms.

The package is organized in five layers:

* ``rates``       -- physical parameters to dissipator coefficients,
* ``qcore``       -- dense states and state functionals (observables,
                     purity, entropy, concurrence),
* ``liouvillian`` -- the vectorized N-atom generator, its spectrum, null
                     space and exact propagation,
* ``bloch``       -- the reduced three-observable model with the thermal
                     and generalized-Gibbs fixed points in closed form,
* ``dicke``       -- the collective-spin block engine for large N,
                     superradiant burst metrics and scaling fits,

plus the ``cli`` scenario runner exposed as the ``unruh-preth`` command.
"""

from .rates import (
    PhysicalConfig,
    RateSet,
    compute_f_ab,
    compute_rates,
    rates_from_gammas,
    unruh_temperature,
    fractional_prethermal_lifetime,
)
from .qcore import (
    DensityMatrix,
    ObservableSet,
    observables,
    purity,
    von_neumann_entropy,
    concurrence_wootters,
    concurrence_observable,
    dipolar_basis_state,
    zeeman_product_state,
)
from .liouvillian import (
    Superoperator,
    SpectrumReport,
    build_lindbladian,
    spectrum,
    steady_states,
    evolve_dense,
)
from .bloch import (
    BlochState,
    GGEParameters,
    bloch_rhs,
    gibbs_steady,
    gge_steady,
    gge_from_initial,
    evolve_bloch,
    plateau_departure_time,
)
from .dicke import (
    DickeBlock,
    BurstMetrics,
    block_rate_matrix,
    block_steady_state,
    evolve_block,
    burst_metrics,
    entropy_vs_N,
    scaling_sweep,
    fit_power_law,
    cascade_trajectory,
)

__version__ = "0.1.0"
