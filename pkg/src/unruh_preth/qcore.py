"""Dense state representation and state functionals for small spin registers.

Basis convention, fixed once for the whole package: the 2^N tensor-product
Zeeman basis is ordered lexicographically with spin-up before spin-down per
atom, |up ... up> first.  All composite operators are built by explicit
Kronecker products in that order.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SIGMA_P",
    "SIGMA_M",
    "ID2",
    "DensityMatrix",
    "ObservableSet",
    "single_site",
    "observables",
    "observables_full",
    "purity",
    "von_neumann_entropy",
    "concurrence_wootters",
    "concurrence_observable",
    "dipolar_basis_state",
    "zeeman_product_state",
]

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
SIGMA_P = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |up><down|
SIGMA_M = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)  # |down><up|
ID2 = np.eye(2, dtype=complex)

# dense eigensolvers produce O(1e-14) negatives on rank-deficient states
_EIG_CLIP = 1e-12


def single_site(op: np.ndarray, site: int, n_atoms: int) -> np.ndarray:
    """Embed a single-atom operator at position `site` of an n-atom register."""
    if not 0 <= site < n_atoms:
        raise ValueError(f"site {site} out of range for {n_atoms} atoms")
    out = np.array([[1.0 + 0.0j]])
    for k in range(n_atoms):
        out = np.kron(out, op if k == site else ID2)
    return out


def _as_matrix(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    return np.asarray(rho, dtype=complex)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite state of dimension 2^N."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_atoms(self) -> int:
        n = int(round(np.log2(self.dim)))
        if 2**n != self.dim:
            raise ValueError(f"dimension {self.dim} is not a power of two")
        return n

    def validate(self, herm_tol: float = 1e-12, trace_tol: float = 1e-12,
                 psd_tol: float = 1e-10) -> "DensityMatrix":
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"state must be square, got shape {m.shape}")
        herm_dev = float(np.max(np.abs(m - m.conj().T)))
        if herm_dev > herm_tol:
            raise ValueError(f"state not Hermitian: max deviation {herm_dev:.3e}")
        trace_dev = abs(np.trace(m) - 1.0)
        if trace_dev > trace_tol:
            raise ValueError(f"state trace deviates from 1 by {trace_dev:.3e}")
        min_eig = float(np.linalg.eigvalsh((m + m.conj().T) / 2.0)[0])
        if min_eig < -psd_tol:
            raise ValueError(f"state not positive semidefinite: min eigenvalue {min_eig:.3e}")
        return self

    @classmethod
    def from_matrix(cls, matrix, **tol) -> "DensityMatrix":
        return cls(np.asarray(matrix, dtype=complex)).validate(**tol)

    @classmethod
    def from_vector(cls, psi) -> "DensityMatrix":
        """Pure state |psi><psi| from a (not necessarily normalized) vector."""
        v = np.asarray(psi, dtype=complex).ravel()
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    def to_json(self) -> str:
        entries = [[float(z.real), float(z.imag)] for z in self.matrix.ravel()]
        return json.dumps({"dim": self.dim, "entries": entries})

    @classmethod
    def from_json(cls, text: str) -> "DensityMatrix":
        obj = json.loads(text)
        dim = int(obj["dim"])
        flat = np.array([complex(re, im) for re, im in obj["entries"]])
        return cls.from_matrix(flat.reshape(dim, dim))

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.matrix
        return self.matrix.astype(dtype)


@dataclass(frozen=True)
class ObservableSet:
    """Symmetric two-atom observables (m_z, m_zz, m_c with m_c = m_xx + m_yy)."""

    m_z: float
    m_zz: float
    m_c: float

    def __post_init__(self):
        slack = 1e-9
        if abs(self.m_z) > 1.0 + slack:
            raise ValueError(f"|m_z| = {abs(self.m_z)} exceeds 1")
        if abs(self.m_zz) > 0.25 + slack:
            raise ValueError(f"|m_zz| = {abs(self.m_zz)} exceeds 1/4")
        if abs(self.m_c) > 0.5 + slack:
            raise ValueError(f"|m_c| = {abs(self.m_c)} exceeds 1/2")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.m_z, self.m_zz, self.m_c)


_PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


def _expect(op: np.ndarray, rho: np.ndarray) -> float:
    return float(np.real(np.trace(op @ rho)))


def observables(rho) -> ObservableSet:
    """Extract (m_z, m_zz, m_c) from a two-atom state.

    m_i  = 1/2 Tr[(sigma_i x I + I x sigma_i) rho]
    m_ii = 1/4 Tr[(sigma_i x sigma_i) rho]
    m_c  = m_xx + m_yy
    """
    m = _as_matrix(rho)
    if m.shape != (4, 4):
        raise ValueError(f"two-atom state expected, got shape {m.shape}")
    m_z = 0.5 * _expect(np.kron(SIGMA_Z, ID2) + np.kron(ID2, SIGMA_Z), m)
    m_zz = 0.25 * _expect(np.kron(SIGMA_Z, SIGMA_Z), m)
    m_xx = 0.25 * _expect(np.kron(SIGMA_X, SIGMA_X), m)
    m_yy = 0.25 * _expect(np.kron(SIGMA_Y, SIGMA_Y), m)
    return ObservableSet(m_z=m_z, m_zz=m_zz, m_c=m_xx + m_yy)


def observables_full(rho) -> dict:
    """All fifteen symmetric combinations {M_i, M_ii, M_ij} for a two-atom state."""
    m = _as_matrix(rho)
    if m.shape != (4, 4):
        raise ValueError(f"two-atom state expected, got shape {m.shape}")
    out = {}
    for i, si in _PAULI.items():
        out[f"M_{i}"] = 0.5 * _expect(np.kron(si, ID2) + np.kron(ID2, si), m)
        out[f"M_{i}{i}"] = 0.25 * _expect(np.kron(si, si), m)
    for i, j in (("x", "y"), ("x", "z"), ("y", "z")):
        si, sj = _PAULI[i], _PAULI[j]
        out[f"M_{i}{j}"] = 0.25 * _expect(np.kron(si, sj) + np.kron(sj, si), m)
    out["M_c"] = out["M_xx"] + out["M_yy"]
    return out


def purity(rho) -> float:
    """Tr(rho^2)."""
    m = _as_matrix(rho)
    return float(np.real(np.trace(m @ m)))


def von_neumann_entropy(rho) -> float:
    """-Tr(rho ln rho) in nats, with 0 ln 0 = 0."""
    m = _as_matrix(rho)
    eigs = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
    eigs = np.clip(eigs.real, 0.0, None)
    eigs = eigs[eigs > _EIG_CLIP]
    return float(-np.sum(eigs * np.log(eigs)))


def concurrence_wootters(rho) -> float:
    """Two-qubit concurrence, max{0, l1 - l2 - l3 - l4}.

    l_i are the decreasingly ordered square roots of the eigenvalues of
    rho rho' with rho' = (sigma_y x sigma_y) rho* (sigma_y x sigma_y),
    the state written in the Zeeman basis.  Tiny negative eigenvalues of
    the product are clipped before the square root.
    """
    m = _as_matrix(rho)
    if m.shape != (4, 4):
        raise ValueError(f"two-atom state expected, got shape {m.shape}")
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    m_tilde = yy @ m.conj() @ yy
    eigs = np.linalg.eigvals(m @ m_tilde)
    lams = np.sqrt(np.clip(np.sort(eigs.real)[::-1], 0.0, None))
    return float(max(0.0, lams[0] - lams[1] - lams[2] - lams[3]))


def concurrence_observable(obs: ObservableSet) -> float:
    """Concurrence from the symmetric observables alone.

    max{0, 2|m_c| - (1/2) sqrt((1 + 4 m_zz)^2 - 4 m_z^2)}.  Valid for the
    dynamical sector reachable from Zeeman-diagonal initial states; if the
    radicand comes out negative the state has left that sector -- the square
    root is treated as 0 and a RuntimeWarning is issued.
    """
    radicand = (1.0 + 4.0 * obs.m_zz) ** 2 - 4.0 * obs.m_z**2
    if radicand < 0.0:
        warnings.warn(
            f"observable-form concurrence: radicand {radicand:.3e} < 0, "
            "state outside the symmetric dynamical sector",
            RuntimeWarning,
            stacklevel=2,
        )
        root = 0.0
    else:
        root = np.sqrt(radicand)
    return float(max(0.0, 2.0 * abs(obs.m_c) - 0.5 * root))


_KET_UP = np.array([1.0, 0.0], dtype=complex)
_KET_DOWN = np.array([0.0, 1.0], dtype=complex)

_DIPOLAR = {
    "up_up": np.kron(_KET_UP, _KET_UP),
    "down_down": np.kron(_KET_DOWN, _KET_DOWN),
    "triplet0": (np.kron(_KET_UP, _KET_DOWN) + np.kron(_KET_DOWN, _KET_UP)) / np.sqrt(2.0),
    "singlet": (np.kron(_KET_UP, _KET_DOWN) - np.kron(_KET_DOWN, _KET_UP)) / np.sqrt(2.0),
}


def dipolar_basis_state(label: str) -> DensityMatrix:
    """One of the four two-atom dipolar basis states as a density matrix.

    Labels: ``up_up``, ``down_down``, ``triplet0``, ``singlet``.
    """
    try:
        ket = _DIPOLAR[label]
    except KeyError:
        raise ValueError(
            f"unknown dipolar label {label!r}; expected one of {sorted(_DIPOLAR)}"
        ) from None
    return DensityMatrix.from_vector(ket)


def zeeman_product_state(pattern: str) -> DensityMatrix:
    """Product state from a pattern like 'ud' (atom 1 up, atom 2 down) or 'uuuuu'."""
    kets = {"u": _KET_UP, "d": _KET_DOWN}
    if not pattern or any(c not in kets for c in pattern):
        raise ValueError(f"pattern must be a non-empty string over 'u'/'d', got {pattern!r}")
    vec = np.array([1.0 + 0.0j])
    for c in pattern:
        vec = np.kron(vec, kets[c])
    return DensityMatrix.from_vector(vec)
