"""Dense Lindblad generator for N accelerated atoms sharing a vacuum bath.

The master equation propagated here is

    d rho / d tau = sum_{a,b} gamma_plus^{ab} (s+_a rho s-_b - {s-_b s+_a, rho}/2)
                            + gamma_minus^{ab} (s-_a rho s+_b - {s+_b s-_a, rho}/2)

with gamma_pm^{ab} = gamma_pm for a = b and f_ab * gamma_pm for a != b.
The free Zeeman Hamiltonian and its bath-induced shift are omitted: the
dynamics is viewed in the frame co-rotating with the Zeeman precession,
where the dissipator above is the full generator and the N = 2 spectrum is
purely real.

Vectorization is column-stacking, so A rho B maps to (B^T kron A) acting on
the stacked state.  This convention is fixed here once and enforced by a
round-trip unit test.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .qcore import SIGMA_M, SIGMA_P, DensityMatrix, single_site, _as_matrix
from .rates import RateSet

__all__ = [
    "Superoperator",
    "SpectrumReport",
    "vectorize",
    "unvectorize",
    "sandwich_superop",
    "build_lindbladian",
    "spectrum",
    "steady_states",
    "evolve_dense",
    "expectation_trajectory",
    "collective_ladder",
    "intensity_operator",
    "dicke_state",
    "exchange_superoperator",
    "TRAJECTORY_CSV_HEADER",
    "trajectory_csv_rows",
]

MAX_DENSE_ATOMS = 6  # 4^N eigendecompositions past this exceed desk scale

_EIG_COND_LIMIT = 1e10


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvectorize(vec: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of ``vectorize``."""
    return np.asarray(vec, dtype=complex).reshape((dim, dim), order="F")


def sandwich_superop(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> A rho B under column-stacking."""
    return np.kron(b.T, a)


@dataclass
class Superoperator:
    """Vectorized Lindblad generator, immutable once built.

    The eigendecomposition is computed lazily and memoized; a duplicated
    computation under concurrent first access is benign.
    """

    matrix: np.ndarray
    rates: RateSet
    n_atoms: int
    hilbert_dim: int
    _eig: tuple | None = field(default=None, repr=False, compare=False)

    def eig(self) -> tuple[np.ndarray, np.ndarray, float]:
        """(eigenvalues, right eigenvectors, condition number of the eigenbasis)."""
        if self._eig is None:
            try:
                w, v = np.linalg.eig(self.matrix)
            except np.linalg.LinAlgError as exc:
                cond = float(np.linalg.cond(self.matrix))
                raise RuntimeError(
                    f"eigensolver failed on {self.matrix.shape[0]}-dim generator "
                    f"(condition number {cond:.3e})"
                ) from exc
            self._eig = (w, v, float(np.linalg.cond(v)))
        return self._eig

    def spectral_radius(self) -> float:
        w, _, _ = self.eig()
        return float(np.max(np.abs(w)))


def _pair_dissipator(jump_a: np.ndarray, jump_b: np.ndarray) -> np.ndarray:
    """Generator term A rho B^dag-style pair: A rho B - {B A, rho}/2 vectorized."""
    dim = jump_a.shape[0]
    eye = np.eye(dim, dtype=complex)
    ba = jump_b @ jump_a
    return (
        sandwich_superop(jump_a, jump_b)
        - 0.5 * sandwich_superop(ba, eye)
        - 0.5 * sandwich_superop(eye, ba)
    )


def build_lindbladian(rates: RateSet, n_atoms: int) -> Superoperator:
    """Assemble the dense 4^N x 4^N generator for N atoms.

    Cross-pair (a != b) terms carry the factor f_ab already folded into the
    RateSet cross coefficients.  Trace preservation is verified on the
    result: the vectorized identity is a left null vector.
    """
    if not 1 <= n_atoms <= MAX_DENSE_ATOMS:
        raise ValueError(f"n_atoms must lie in 1..{MAX_DENSE_ATOMS}, got {n_atoms}")
    dim = 2**n_atoms
    sp = [single_site(SIGMA_P, a, n_atoms) for a in range(n_atoms)]
    sm = [single_site(SIGMA_M, a, n_atoms) for a in range(n_atoms)]
    gen = np.zeros((dim * dim, dim * dim), dtype=complex)
    for a in range(n_atoms):
        for b in range(n_atoms):
            weight = 1.0 if a == b else rates.f_ab
            if weight == 0.0:
                continue
            gen += weight * rates.gamma_plus * _pair_dissipator(sp[a], sm[b])
            gen += weight * rates.gamma_minus * _pair_dissipator(sm[a], sp[b])
    sop = Superoperator(matrix=gen, rates=rates, n_atoms=n_atoms, hilbert_dim=dim)
    trace_row = vectorize(np.eye(dim, dtype=complex)).conj() @ gen
    defect = float(np.max(np.abs(trace_row)))
    scale = max(1.0, float(np.max(np.abs(gen))))
    if defect > 1e-10 * scale:
        raise RuntimeError(f"generator is not trace preserving: defect {defect:.3e}")
    return sop


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalues sorted by descending real part, zero-mode count and decay scales.

    ``adr`` is the magnitude of the real part of the slowest mode that is not
    a zero mode (the asymptotic decay rate); ``gap_to_slow_cluster`` is the
    distance from that mode to the next-slower distinct decay rate, which
    quantifies how isolated the slow cluster is.
    """

    eigenvalues: np.ndarray
    zero_count: int
    adr: float
    gap_to_slow_cluster: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues],
                "zero_count": self.zero_count,
                "adr": self.adr,
            }
        )


def spectrum(sop: Superoperator, zero_tol: float = 1e-10) -> SpectrumReport:
    """Full eigen-decomposition of the generator.

    ``zero_tol`` is relative to the spectral radius; eigenvalues below it in
    magnitude count as zero modes.  All eigenvalue real parts must be
    non-positive (up to the same tolerance) and, for the two-atom generator
    built here, the whole spectrum is real to 1e-9 -- both are asserted.
    """
    w, _, _ = sop.eig()
    order = np.lexsort((w.imag, -w.real))
    w = w[order]
    radius = float(np.max(np.abs(w)))
    tol_abs = zero_tol * radius
    if np.max(w.real) > tol_abs:
        raise RuntimeError(f"generator has eigenvalue with positive real part {np.max(w.real):.3e}")
    if sop.n_atoms == 2:
        max_imag = float(np.max(np.abs(w.imag)))
        if max_imag > 1e-9:
            raise RuntimeError(f"two-atom spectrum should be real, max |Im| = {max_imag:.3e}")
    zero_count = int(np.sum(np.abs(w) < tol_abs))
    if zero_count < 1:
        raise RuntimeError("trace-preserving generator must have a zero mode")
    nonzero = np.abs(w.real[np.abs(w.real) >= tol_abs])
    adr = float(np.min(nonzero))
    above = nonzero[nonzero > adr * (1.0 + 1e-12)]
    gap = float(np.min(above) - adr) if above.size else 0.0
    return SpectrumReport(eigenvalues=w, zero_count=zero_count, adr=adr, gap_to_slow_cluster=gap)


def steady_states(sop: Superoperator, zero_tol: float = 1e-10) -> list[np.ndarray]:
    """Basis of the stationary subspace, Hermitized and trace-normalized.

    The null space is computed by SVD; its dimension must agree with the
    spectral zero-mode count, otherwise the tolerance is misconfigured.
    When the fixed point is unique it is returned as a single validated
    state.  Otherwise an orthonormal Hermitian basis of the subspace is
    returned (elements with non-negligible trace are normalized to trace
    one; trace-free elements are Frobenius-normalized) and the physical
    fixed point for a given initial state is selected through the
    conserved-quantity matching in the reduced-model module.
    """
    report = spectrum(sop, zero_tol)
    radius = sop.spectral_radius()
    _, svals, vh = np.linalg.svd(sop.matrix)
    tol_abs = zero_tol * radius
    null_dim = int(np.sum(svals < tol_abs))
    if null_dim != report.zero_count:
        raise RuntimeError(
            f"null-space dimension {null_dim} != zero-mode count {report.zero_count}: "
            f"zero_tol = {zero_tol} is misconfigured for this generator"
        )
    dim = sop.hilbert_dim
    raw = [unvectorize(vh[-(k + 1)].conj(), dim) for k in range(null_dim)]
    if null_dim == 1:
        x = raw[0]
        x = (x + x.conj().T) / 2.0
        x = x / np.trace(x).real
        return [DensityMatrix.from_matrix(x, psd_tol=1e-8).matrix]
    # null space is closed under dagger, so Hermitian/anti-Hermitian parts
    # span it over the reals; orthonormalize in that real vector space
    candidates = []
    for x in raw:
        candidates.append((x + x.conj().T) / 2.0)
        candidates.append((x - x.conj().T) / 2.0j)
    stacked = np.array(
        [np.concatenate([vectorize(h).real, vectorize(h).imag]) for h in candidates]
    ).T
    u, s, _ = np.linalg.svd(stacked, full_matrices=False)
    keep = u[:, s > 1e-10 * s[0]][:, :null_dim]
    basis = []
    half = dim * dim
    for k in range(keep.shape[1]):
        h = unvectorize(keep[:half, k] + 1.0j * keep[half:, k], dim)
        h = (h + h.conj().T) / 2.0
        tr = float(np.trace(h).real)
        basis.append(h / tr if abs(tr) > 1e-6 else h / np.linalg.norm(h))
    return basis


def _propagate_spectral(sop: Superoperator, rho0: np.ndarray, times: np.ndarray) -> np.ndarray:
    w, v, cond = sop.eig()
    if cond > _EIG_COND_LIMIT:
        return _propagate_ivp(sop, rho0, times)
    coeff = np.linalg.solve(v, vectorize(rho0))
    phases = np.exp(np.outer(times, w))  # (nt, d^2)
    return (phases * coeff) @ v.T


def _propagate_ivp(sop: Superoperator, rho0: np.ndarray, times: np.ndarray) -> np.ndarray:
    gen = sop.matrix

    def rhs(_t, y):
        return gen @ y

    sol = solve_ivp(
        rhs,
        t_span=(0.0, float(times[-1])),
        y0=vectorize(rho0),
        t_eval=times,
        method="DOP853",
        rtol=1e-9,
        atol=1e-12,
    )
    if not sol.success:
        raise RuntimeError(f"adaptive integration failed: {sol.message}")
    return sol.y.T


def evolve_dense(sop: Superoperator, rho0, times) -> list[DensityMatrix]:
    """Propagate a state to each requested time.

    Exact propagation through the spectral decomposition of the generator,
    falling back to adaptive integration (rtol 1e-9) when the eigenbasis
    condition number exceeds 1e10.  Every returned state is checked against
    the density-matrix invariants (violations beyond 1e-8 abort with
    diagnostics) and then projected back onto the exactly Hermitian,
    unit-trace manifold.
    """
    times = np.asarray(times, dtype=float)
    if times.size == 0:
        return []
    if times[0] < 0.0 or np.any(np.diff(times) < 0.0):
        raise ValueError("times must be ascending and start at t >= 0")
    rho0 = _as_matrix(rho0)
    if rho0.shape != (sop.hilbert_dim, sop.hilbert_dim):
        raise ValueError(
            f"state shape {rho0.shape} does not match Hilbert dimension {sop.hilbert_dim}"
        )
    stacked = _propagate_spectral(sop, rho0, times)
    states = []
    for idx, t in enumerate(times):
        x = unvectorize(stacked[idx], sop.hilbert_dim)
        herm_dev = float(np.max(np.abs(x - x.conj().T)))
        trace_dev = abs(np.trace(x) - 1.0)
        if herm_dev > 1e-8 or trace_dev > 1e-8:
            raise RuntimeError(
                f"state invariants violated at t = {t}: hermiticity deviation "
                f"{herm_dev:.3e}, trace deviation {trace_dev:.3e}"
            )
        x = (x + x.conj().T) / 2.0
        x = x / np.trace(x).real
        min_eig = float(np.linalg.eigvalsh(x)[0])
        if min_eig < -1e-8:
            raise RuntimeError(f"state positivity violated at t = {t}: min eigenvalue {min_eig:.3e}")
        states.append(DensityMatrix(x))
    return states


def expectation_trajectory(sop: Superoperator, rho0, times, operator: np.ndarray,
                           derivative: bool = False):
    """Exact <O>(t) along the evolution, optionally with d<O>/dt.

    Uses the spectral form <O>(t) = sum_k Re(c_k e^(lambda_k t)), so both the
    trajectory and its time derivative come out discretization-free.
    """
    times = np.asarray(times, dtype=float)
    rho0 = _as_matrix(rho0)
    w, v, cond = sop.eig()
    if cond > _EIG_COND_LIMIT:
        stacked = _propagate_ivp(sop, rho0, times)
        vals = np.real(stacked @ vectorize(operator.conj().T).conj())
        if derivative:
            dvals = np.real((stacked @ sop.matrix.T) @ vectorize(operator.conj().T).conj())
            return vals, dvals
        return vals
    coeff = np.linalg.solve(v, vectorize(rho0))
    weights = (vectorize(operator.conj().T).conj() @ v) * coeff
    phases = np.exp(np.outer(times, w))
    vals = np.real(phases @ weights)
    if derivative:
        dvals = np.real(phases @ (weights * w))
        return vals, dvals
    return vals


def collective_ladder(n_atoms: int) -> tuple[np.ndarray, np.ndarray]:
    """Total raising and lowering operators J+ = sum_a s+_a, J- = sum_a s-_a."""
    jp = sum(single_site(SIGMA_P, a, n_atoms) for a in range(n_atoms))
    jm = sum(single_site(SIGMA_M, a, n_atoms) for a in range(n_atoms))
    return jp, jm


def intensity_operator(n_atoms: int) -> np.ndarray:
    """Radiative intensity J+ J-."""
    jp, jm = collective_ladder(n_atoms)
    return jp @ jm


def dicke_state(n_atoms: int, m: float) -> np.ndarray:
    """Symmetric |J = N/2, m> state vector in the 2^N Zeeman basis."""
    j = n_atoms / 2.0
    k = j - m  # number of down spins
    if abs(k - round(k)) > 1e-12 or not 0 <= round(k) <= n_atoms:
        raise ValueError(f"m = {m} invalid for J = {j}")
    k = int(round(k))
    dim = 2**n_atoms
    vec = np.zeros(dim, dtype=complex)
    for idx in range(dim):
        if bin(idx).count("1") == k:  # bit 1 = down in the lexicographic basis
            vec[idx] = 1.0
    return vec / np.linalg.norm(vec)


def exchange_superoperator(n_atoms: int, a: int, b: int) -> np.ndarray:
    """Superoperator swapping atoms a and b in both row and column indices."""
    dim = 2**n_atoms
    perm = np.zeros((dim, dim))
    for idx in range(dim):
        bits = [(idx >> (n_atoms - 1 - k)) & 1 for k in range(n_atoms)]
        bits[a], bits[b] = bits[b], bits[a]
        jdx = 0
        for bit in bits:
            jdx = (jdx << 1) | bit
        perm[jdx, idx] = 1.0
    return sandwich_superop(perm, perm.T)


TRAJECTORY_CSV_HEADER = "t,Mz,Mzz,Mc,purity,entropy,concurrence"


def trajectory_csv_rows(times, states) -> list[str]:
    """Two-atom trajectory rows in the fixed CSV schema (17 significant digits)."""
    from . import qcore

    rows = []
    for t, state in zip(times, states):
        obs = qcore.observables(state)
        vals = (
            float(t),
            obs.m_z,
            obs.m_zz,
            obs.m_c,
            qcore.purity(state),
            qcore.von_neumann_entropy(state),
            qcore.concurrence_wootters(state),
        )
        rows.append(",".join(f"{v:.17g}" for v in vals))
    return rows


def kron_sum_spectrum(single: np.ndarray) -> np.ndarray:
    """Pairwise sums of one-atom generator eigenvalues (decoupled two-atom spectrum)."""
    w = np.linalg.eigvals(single)
    return np.add.outer(w, w).ravel()
