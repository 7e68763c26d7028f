"""
entangled_attack.py
══════════════════════════════════════════════════════════════════════
Collective weak-measurement attack on an entangled (DI-style) protocol.

Alice and Bob share |Φ+⟩ = (|pp⟩ + |qq⟩)/√2 and Eve runs the same
channel T on both halves, so after the attack

    |Ψ⟩ = (|pp⟩|E_p E_p⟩ + |qq⟩|E_q E_q⟩)/√2

and Eve's two-qubit states play the role of |E_p⟩, |E_q⟩ with overlap
s = ⟨E_pE_p|E_qE_q⟩ = c²·e^{2iθ}.

Pipeline:
  1. Bell bookkeeping      Z/X labels of the four Bell states, with signs
  2. Joint attack          project |Ψ⟩ on every MUB outcome pair
  3. Equivalence           joint states vs the single-channel formulas
  4. Balanced attack       T then H⊗H on half the rounds, χ = 2p_e
  5. Nonlocality           S = 2√2(1 − 2p_e), closed form and operator form
══════════════════════════════════════════════════════════════════════
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from qkd_linalg import DensityOperator, Operator, StateVector, hadamard, inner
from usd_leakage import chi_basis, guess_from_states
from weak_attack import (
    BASIS_SYMBOLS, AttackParams, Pair, conditional_vectors, eve_frame,
    evolve, mub_states, normalize_conditional,
)

logger = logging.getLogger(__name__)

# =============================================================================
# CONFIGURATION
# =============================================================================

BELL_LABELS          = ('Phi+', 'Phi-', 'Psi+', 'Psi-')
BELL_BASES           = ('Z', 'X')
BELL_MATCH_TOL       = 1e-12   # |⟨target|state⟩| must be 1 within this
WEIGHT_SUM_TOL       = 1e-12   # joint weights per basis sum to 1
EQUIVALENCE_TOL      = 1e-10   # componentwise match against single-channel states
CHSH_CLASSICAL_BOUND = 2.0
CHSH_THRESHOLD_BER   = (2.0 - math.sqrt(2.0)) / 4.0   # S = 2 here

_SQRT_HALF = 1.0 / math.sqrt(2.0)
_PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
_PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)


# =============================================================================
# TYPES
# =============================================================================

@dataclass(frozen=True, eq=False)
class BellState:
    """
    A Bell state named in one basis.

    vector = phase · bell_vector(label, basis); the phase is ±1 and carries
    the sign picked up when a state is renamed in the other basis.
    """
    label:  str
    basis:  str
    vector: StateVector
    phase:  float = 1.0

    def __post_init__(self):
        if self.label not in BELL_LABELS:
            raise ValueError(f"unknown Bell label {self.label!r} (expected one of {BELL_LABELS})")
        if self.basis not in BELL_BASES:
            raise ValueError(f"Bell basis must be 'Z' or 'X', got {self.basis!r}")
        if self.vector.dim != 4 or not self.vector.normalized:
            raise ValueError("Bell state vector must be a normalized two-qubit state")

    @classmethod
    def of(cls, label: str, basis: str) -> 'BellState':
        return cls(label, basis, bell_vector(label, basis))


@dataclass(frozen=True)
class JointAttackOutcome:
    params:           AttackParams
    joint_eve_states: Dict[Pair, Optional[StateVector]]
    weights:          Dict[Pair, float]
    ber_z:            float
    ber_x:            float
    ber_total:        float

    def summary(self) -> str:
        p = self.params
        return (
            f"entangled α={p.alpha:.6f} c={p.overlap_c:.6f} θ={p.theta:.6f} | "
            f"BER z={self.ber_z:.6f} x={self.ber_x:.6f} total={self.ber_total:.6f}"
        )


@dataclass(frozen=True)
class ThreeBodyState:
    """Eve ⊗ (Alice, Bob) at α = 0 split onto |E_⊥⟩|Φ+⟩ and |E_∥⟩|Φ−⟩."""
    coeff_perp:     float
    coeff_parallel: float
    s:              float


@dataclass(frozen=True)
class EquivalenceReport:
    equivalent:           bool
    max_state_deviation:  float
    max_gram_deviation:   float
    max_weight_deviation: float


# =============================================================================
# BELL STATES
# =============================================================================

def _single_qubit_basis(basis: str) -> Tuple[np.ndarray, np.ndarray]:
    if basis == 'Z':
        return np.array([1.0, 0.0]), np.array([0.0, 1.0])
    if basis == 'X':
        return np.array([_SQRT_HALF, _SQRT_HALF]), np.array([_SQRT_HALF, -_SQRT_HALF])
    raise ValueError(f"Bell basis must be 'Z' or 'X', got {basis!r}")


def bell_vector(label: str, basis: str) -> StateVector:
    """Φ± = (|00⟩ ± |11⟩)/√2 and Ψ± = (|01⟩ ± |10⟩)/√2 with 0/1 read in `basis`."""
    k0, k1 = _single_qubit_basis(basis)
    if label == 'Phi+':
        amps = np.kron(k0, k0) + np.kron(k1, k1)
    elif label == 'Phi-':
        amps = np.kron(k0, k0) - np.kron(k1, k1)
    elif label == 'Psi+':
        amps = np.kron(k0, k1) + np.kron(k1, k0)
    elif label == 'Psi-':
        amps = np.kron(k0, k1) - np.kron(k1, k0)
    else:
        raise ValueError(f"unknown Bell label {label!r} (expected one of {BELL_LABELS})")
    return StateVector(_SQRT_HALF * amps, normalized=True)


def bell_transform(state: BellState, target_basis: str) -> BellState:
    """
    Rename a Bell state in target_basis by projecting its vector on the four
    target-basis Bell states.

        Φ+_Z = Φ+_X    Φ−_Z = Ψ+_X    Ψ+_Z = Φ−_X    Ψ−_Z = −Ψ−_X
    """
    if target_basis not in BELL_BASES:
        raise ValueError(f"Bell basis must be 'Z' or 'X', got {target_basis!r}")
    if target_basis == state.basis:
        return state

    overlaps = {lab: inner(bell_vector(lab, target_basis), state.vector) for lab in BELL_LABELS}
    label, amp = max(overlaps.items(), key=lambda kv: abs(kv[1]))
    if abs(abs(amp) - 1.0) > BELL_MATCH_TOL:
        raise ValueError(f"vector is not a {target_basis}-basis Bell state (best overlap {abs(amp):.6f})")
    return BellState(label, target_basis, state.vector, phase=float(np.sign(amp.real)))


# =============================================================================
# JOINT ATTACK
# =============================================================================

def _joint_eve_pair(params: AttackParams) -> Tuple[np.ndarray, np.ndarray]:
    e_p, e_q = eve_frame(params.overlap_c, params.theta)
    return np.kron(e_p.amps, e_p.amps), np.kron(e_q.amps, e_q.amps)


def _post_attack_tensor(params: AttackParams) -> np.ndarray:
    """ψ[i, j, :] = Eve amplitude with Alice in frame state i, Bob in j."""
    pp, qq = _joint_eve_pair(params)
    psi = np.zeros((2, 2, 4), dtype=np.complex128)
    psi[0, 0, :] = _SQRT_HALF * pp
    psi[1, 1, :] = _SQRT_HALF * qq
    return psi


def attack_on_bell(params: AttackParams) -> JointAttackOutcome:
    """Same (α, c, θ) on both halves of |Φ+⟩; Eve's states by direct projection."""
    psi = _post_attack_tensor(params)
    mub = mub_states(params.alpha)

    vectors, weights = {}, {}
    for basis in BELL_BASES:
        for x in BASIS_SYMBOLS[basis]:
            for y in BASIS_SYMBOLS[basis]:
                vec = np.einsum('i,j,ijk->k', mub[x].amps.conj(), mub[y].amps.conj(), psi)
                vectors[(x, y)] = vec
                weights[(x, y)] = float(np.vdot(vec, vec).real)

    for basis in BELL_BASES:
        total = sum(weights[(x, y)] for x in BASIS_SYMBOLS[basis] for y in BASIS_SYMBOLS[basis])
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            logger.warning(f"⚠️  joint {basis}-basis weights sum to {total:.15g}")

    # absence is judged on the conditional scale, p_{x,y} = 2·w_{x,y}
    states = normalize_conditional(vectors, {k: 2.0 * w for k, w in weights.items()})
    ber_z = weights[('0', '1')] + weights[('1', '0')]
    ber_x = weights[('+', '-')] + weights[('-', '+')]
    return JointAttackOutcome(params, states, weights, ber_z, ber_x, 0.5 * (ber_z + ber_x))


def equivalence_check(params: AttackParams) -> EquivalenceReport:
    """
    Joint Eve states against the single-channel ones.

    Two comparisons: componentwise against the single-channel formulas fed
    |E_pE_p⟩, |E_qE_q⟩, and pairwise overlaps against a single channel with
    effective overlap c²·e^{2iθ}. Weights are compared as 2·w vs p.
    """
    joint = attack_on_bell(params)
    pp, qq = _joint_eve_pair(params)
    substituted = normalize_conditional(
        conditional_vectors(params.a, params.b, pp, qq),
        {k: 2.0 * w for k, w in joint.weights.items()},
    )
    effective = evolve(AttackParams(params.alpha, params.overlap_c ** 2, 2.0 * params.theta))
    single_states = effective.eve_states.states
    single_weights = effective.probs.by_pair()

    state_dev = 0.0
    for pair, state in joint.joint_eve_states.items():
        other = substituted[pair]
        if (state is None) != (other is None):
            state_dev = math.inf
            continue
        if state is not None:
            state_dev = max(state_dev, float(np.max(np.abs(state.amps - other.amps))))

    present = [k for k, v in joint.joint_eve_states.items() if v is not None]
    gram_dev = 0.0
    for k1 in present:
        for k2 in present:
            if single_states[k1] is None or single_states[k2] is None:
                gram_dev = math.inf
                continue
            lhs = inner(joint.joint_eve_states[k1], joint.joint_eve_states[k2])
            rhs = inner(single_states[k1], single_states[k2])
            gram_dev = max(gram_dev, abs(lhs - rhs))

    weight_dev = max(abs(2.0 * joint.weights[k] - single_weights[k]) for k in joint.weights)
    equivalent = max(state_dev, gram_dev, weight_dev) <= EQUIVALENCE_TOL
    if not equivalent:
        logger.warning(
            f"⚠️  entangled/single-channel mismatch at α={params.alpha:.6f} c={params.overlap_c:.6f}: "
            f"state {state_dev:.3e}, overlap {gram_dev:.3e}, weight {weight_dev:.3e}"
        )
    return EquivalenceReport(equivalent, state_dev, gram_dev, weight_dev)


# =============================================================================
# α = 0 STRUCTURE
# =============================================================================

def _check_overlap(s: float):
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"joint overlap s must lie in [0, 1], got {s!r}")


def three_body_decomposition(s: float) -> ThreeBodyState:
    _check_overlap(s)
    return ThreeBodyState(math.sqrt((1.0 + s) / 2.0), math.sqrt((1.0 - s) / 2.0), s)


def three_body_residual(s: float) -> float:
    """
    Max componentwise gap between (|E_0⟩|00⟩ + |E_1⟩|11⟩)/√2 and its
    |E_⊥⟩|Φ+⟩ / |E_∥⟩|Φ−⟩ split, built in the 8-dim Eve ⊗ AB space.
    """
    split = three_body_decomposition(s)
    e0 = np.array([1.0, 0.0])
    e1 = np.array([s, math.sqrt(1.0 - s * s)])
    zz = np.array([1.0, 0.0, 0.0, 0.0])
    oo = np.array([0.0, 0.0, 0.0, 1.0])
    lhs = _SQRT_HALF * (np.kron(e0, zz) + np.kron(e1, oo))

    phi_plus = bell_vector('Phi+', 'Z').amps
    phi_minus = bell_vector('Phi-', 'Z').amps
    rhs = split.coeff_perp * np.kron((e0 + e1) / np.linalg.norm(e0 + e1), phi_plus)
    if split.coeff_parallel > 0.0:
        rhs = rhs + split.coeff_parallel * np.kron((e0 - e1) / np.linalg.norm(e0 - e1), phi_minus)
    return float(np.max(np.abs(lhs - rhs)))


def x_basis_mixed_state(s: float) -> DensityOperator:
    """((1+s)/2)|Φ+⟩⟨Φ+| + ((1−s)/2)|Ψ+⟩⟨Ψ+|, both X-basis labels."""
    _check_overlap(s)
    return DensityOperator.mixture(
        [(1.0 + s) / 2.0, (1.0 - s) / 2.0],
        [bell_vector('Phi+', 'X'), bell_vector('Psi+', 'X')],
    )


def _joint_chi(outcome: JointAttackOutcome, basis: str) -> float:
    conditional = {k: 2.0 * w for k, w in outcome.weights.items()}
    return chi_basis(guess_from_states(basis, conditional, outcome.joint_eve_states))


def balanced_entangled_attack(s: float) -> Tuple[float, float, float]:
    """
    (ber_z, ber_x, χ) when Eve applies T, then H⊗H on half the rounds.

    At α = 0 the Hadamard round is the α = π/4 channel, so both halves come
    from attack_on_bell with c = √s.
    """
    _check_overlap(s)
    c = math.sqrt(s)
    direct = attack_on_bell(AttackParams(0.0, c, 0.0))
    swapped = attack_on_bell(AttackParams(math.pi / 4, c, 0.0))
    ber_z = 0.5 * (direct.ber_z + swapped.ber_z)
    ber_x = 0.5 * (direct.ber_x + swapped.ber_x)
    chi_z = 0.5 * (_joint_chi(direct, 'Z') + _joint_chi(swapped, 'Z'))
    chi_x = 0.5 * (_joint_chi(direct, 'X') + _joint_chi(swapped, 'X'))
    return ber_z, ber_x, 0.5 * (chi_z + chi_x)


def balanced_bell_state(s: float) -> DensityOperator:
    """½[ρ_Z + (H⊗H)ρ_Z(H⊗H)], ρ_Z = ((1+s)/2)Φ+Φ+ + ((1−s)/2)Φ−Φ− in Z labels."""
    _check_overlap(s)
    rho_z = DensityOperator.mixture(
        [(1.0 + s) / 2.0, (1.0 - s) / 2.0],
        [bell_vector('Phi+', 'Z'), bell_vector('Phi-', 'Z')],
    )
    h = hadamard().matrix
    rotated = Operator(np.kron(h, h), unitary=True).conjugate(rho_z)
    return DensityOperator(0.5 * (rho_z.entries + rotated.entries))


# =============================================================================
# CHSH
# =============================================================================

def chsh_value(p_e: float) -> float:
    """S = 2√2(1 − 2p_e); S > 2 is needed for nonlocal correlations."""
    if not 0.0 <= p_e <= 0.5:
        raise ValueError(f"p_e must lie in [0, 0.5], got {p_e!r}")
    return 2.0 * math.sqrt(2.0) * (1.0 - 2.0 * p_e)


def chsh_expectation(rho: DensityOperator) -> float:
    """⟨A0B0⟩ + ⟨A0B1⟩ + ⟨A1B0⟩ − ⟨A1B1⟩ with A ∈ {σ_Z, σ_X}, B = (σ_Z ± σ_X)/√2."""
    if rho.dim != 4:
        raise ValueError(f"CHSH needs a two-qubit state, got dimension {rho.dim}")
    b0 = _SQRT_HALF * (_PAULI_Z + _PAULI_X)
    b1 = _SQRT_HALF * (_PAULI_Z - _PAULI_X)
    terms = (
        rho.expectation(np.kron(_PAULI_Z, b0)),
        rho.expectation(np.kron(_PAULI_Z, b1)),
        rho.expectation(np.kron(_PAULI_X, b0)),
        -rho.expectation(np.kron(_PAULI_X, b1)),
    )
    return float(sum(terms))
