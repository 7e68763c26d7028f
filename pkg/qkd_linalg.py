"""
qkd_linalg.py
──────────────
Small dense complex linear algebra for the attack engine.

Everything in this project lives in a 2-dimensional signal or Eve space,
or in the 4-dimensional product of two of them, so the types here are thin
immutable wrappers around numpy arrays with the invariants checked once at
construction time.

Usage:
    from qkd_linalg import StateVector, inner, binary_entropy
    plus = StateVector.from_amplitudes([1, 1], normalize=True)
    inner(plus, StateVector.basis(2, 0))   # → 0.7071...
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

logger = logging.getLogger(__name__)

# =============================================================================
# CONFIGURATION
# =============================================================================

SUPPORTED_DIMS  = (2, 4)       # signal/Eve qubit and two-qubit spaces
NORM_TOL        = 1e-12        # |‖v‖² − 1| allowed for normalized states
HERMITIAN_TOL   = 1e-12        # max |ρ − ρ†| entry
TRACE_TOL       = 1e-12        # |tr ρ − 1|
UNITARY_TOL     = 1e-12        # max |O†O − I| entry
EIGEN_FLOOR     = -1e-10       # smallest eigenvalue tolerated for ρ ≥ 0
PROB_SLACK      = 1e-12        # x + y ≤ 1 + PROB_SLACK in the two-argument entropy


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    if not np.all(np.isfinite(arr)):
        raise ValueError("amplitudes must be finite (no NaN/Inf)")
    arr.setflags(write=False)
    return arr


def _check_dim(dim: int):
    if dim not in SUPPORTED_DIMS:
        raise ValueError(f"dimension {dim} not supported (expected one of {SUPPORTED_DIMS})")


# =============================================================================
# TYPES
# =============================================================================

@dataclass(frozen=True, eq=False)
class StateVector:
    """
    Ket of dimension 2 or 4.

    Fields:
        amps:        complex128 amplitudes (read-only array)
        normalized:  True if the vector was checked to have unit norm
    """
    amps:       np.ndarray
    normalized: bool = False

    def __post_init__(self):
        amps = _frozen(self.amps)
        if amps.ndim != 1:
            raise ValueError("state amplitudes must be a flat sequence")
        _check_dim(amps.shape[0])
        object.__setattr__(self, 'amps', amps)
        if self.normalized:
            norm_sq = float(np.vdot(amps, amps).real)
            if abs(norm_sq - 1.0) > NORM_TOL:
                raise ValueError(f"state marked normalized has ‖v‖² = {norm_sq!r}")

    @property
    def dim(self) -> int:
        return int(self.amps.shape[0])

    @classmethod
    def from_amplitudes(cls, amps: Iterable[complex], normalize: bool = False) -> 'StateVector':
        """Build a state; with normalize=True rescale to unit norm first."""
        arr = np.array(list(amps), dtype=np.complex128)
        if normalize:
            norm = np.linalg.norm(arr)
            if norm == 0.0:
                raise ValueError("cannot normalize the zero vector")
            arr = arr / norm
            return cls(arr, normalized=True)
        return cls(arr)

    @classmethod
    def basis(cls, dim: int, index: int) -> 'StateVector':
        arr = np.zeros(dim, dtype=np.complex128)
        arr[index] = 1.0
        return cls(arr, normalized=True)

    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def projector(self) -> 'DensityOperator':
        """|v⟩⟨v| for a normalized v."""
        if not self.normalized:
            raise ValueError("projector requires a normalized state")
        return DensityOperator(np.outer(self.amps, self.amps.conj()))


@dataclass(frozen=True, eq=False)
class Operator:
    """
    Square matrix acting on a 2- or 4-dimensional space.

    With unitary=True the constructor enforces ‖O†O − I‖_max < UNITARY_TOL.
    """
    matrix:  np.ndarray
    unitary: bool = False

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got shape {m.shape}")
        _check_dim(m.shape[0])
        object.__setattr__(self, 'matrix', m)
        if self.unitary:
            err = unitarity_error(m)
            if err >= UNITARY_TOL:
                raise ValueError(f"operator flagged unitary but ‖O†O − I‖_max = {err:.3e}")

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def apply(self, state: StateVector) -> StateVector:
        if state.dim != self.dim:
            raise ValueError(f"dimension mismatch: operator {self.dim} vs state {state.dim}")
        out = self.matrix @ state.amps
        return StateVector(out, normalized=state.normalized and self.unitary)

    def conjugate(self, rho: 'DensityOperator') -> 'DensityOperator':
        """O ρ O† (only meaningful for unitary O)."""
        if rho.dim != self.dim:
            raise ValueError(f"dimension mismatch: operator {self.dim} vs density {rho.dim}")
        return DensityOperator(self.matrix @ rho.entries @ self.matrix.conj().T)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """
    Hermitian, unit-trace, positive semidefinite matrix (within tolerances).
    """
    entries: np.ndarray

    def __post_init__(self):
        m = _frozen(self.entries)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density operator must be square, got shape {m.shape}")
        _check_dim(m.shape[0])
        herm_err = float(np.max(np.abs(m - m.conj().T)))
        if herm_err > HERMITIAN_TOL:
            raise ValueError(f"density operator not Hermitian (max deviation {herm_err:.3e})")
        trace = complex(np.trace(m))
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValueError(f"density operator trace is {trace.real:.15g}, expected 1")
        object.__setattr__(self, 'entries', m)
        low = float(np.min(self.eigenvalues()))
        if low < EIGEN_FLOOR:
            raise ValueError(f"density operator has negative eigenvalue {low:.3e}")

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    @classmethod
    def diagonal(cls, probs: Sequence[float]) -> 'DensityOperator':
        return cls(np.diag(np.array(probs, dtype=np.complex128)))

    @classmethod
    def mixture(cls, weights: Sequence[float], states: Sequence[StateVector]) -> 'DensityOperator':
        """Σ w_i |v_i⟩⟨v_i| over normalized states."""
        if len(weights) != len(states):
            raise ValueError("weights and states must have equal length")
        dim = states[0].dim
        acc = np.zeros((dim, dim), dtype=np.complex128)
        for w, v in zip(weights, states):
            if v.dim != dim:
                raise ValueError("mixture states must share one dimension")
            acc += w * np.outer(v.amps, v.amps.conj())
        return cls(acc)

    def eigenvalues(self) -> np.ndarray:
        # ρ is Hermitian so eigvalsh is exact enough at these sizes
        return np.linalg.eigvalsh((self.entries + self.entries.conj().T) / 2)

    def expectation(self, op: np.ndarray) -> float:
        """tr(ρ O) for a Hermitian observable O (real part returned)."""
        op = np.asarray(op, dtype=np.complex128)
        if op.shape != self.entries.shape:
            raise ValueError(f"dimension mismatch: observable {op.shape} vs density {self.entries.shape}")
        return float(np.trace(self.entries @ op).real)

    def probability(self, state: StateVector) -> float:
        """⟨v|ρ|v⟩."""
        if state.dim != self.dim:
            raise ValueError(f"dimension mismatch: density {self.dim} vs state {state.dim}")
        return float(np.vdot(state.amps, self.entries @ state.amps).real)


# =============================================================================
# OPERATIONS
# =============================================================================

def inner(a: StateVector, b: StateVector) -> complex:
    """⟨a|b⟩, antilinear in the first argument."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch in inner product: {a.dim} vs {b.dim}")
    return complex(np.vdot(a.amps, b.amps))


def unitarity_error(matrix: np.ndarray) -> float:
    m = np.asarray(matrix, dtype=np.complex128)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def hadamard() -> Operator:
    """Single-qubit Hadamard; exchanges the Z and X bases."""
    return Operator(np.array([[1, 1], [1, -1]]) / np.sqrt(2), unitary=True)


def _xlog2x(x: float) -> float:
    # 0·log₂0 ≡ 0
    if x <= 0.0:
        return 0.0
    return float(x * np.log2(x))


def entropy_pair(x: float, y: float) -> float:
    """
    Two-argument entropy H(x, y) = −x log₂ x − y log₂ y.

    Accepts a sub-normalized pair (x + y ≤ 1); used on the normalized
    guessing probabilities of the USD matrix.
    """
    if x < 0.0 or y < 0.0:
        raise ValueError(f"entropy arguments must be non-negative, got ({x!r}, {y!r})")
    if x + y > 1.0 + PROB_SLACK:
        raise ValueError(f"entropy arguments sum to {x + y!r} > 1")
    return -_xlog2x(x) - _xlog2x(y)


def binary_entropy(p: float) -> float:
    """H(p) = −p log₂ p − (1−p) log₂ (1−p)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p!r}")
    return entropy_pair(p, 1.0 - p)


def von_neumann_entropy(rho: DensityOperator) -> float:
    """
    S(ρ) = −Σ λ log₂ λ over the eigenvalues of ρ.

    Eigenvalues within EIGEN_FLOOR of the [0, 1] interval are clamped.
    """
    if not isinstance(rho, DensityOperator):
        # raw arrays go through the same Hermitian / trace validation
        rho = DensityOperator(rho)
    lam = np.clip(rho.eigenvalues(), 0.0, 1.0)
    return float(-sum(_xlog2x(float(v)) for v in lam))
