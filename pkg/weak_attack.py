"""
weak_attack.py
══════════════════════════════════════════════════════════════════════
Eve's weak-measurement channel on non-entangled protocols (BB84, MDI).

Pipeline for one attack configuration (α, c, θ):
  1. MUB preparation     |0⟩,|1⟩,|+⟩,|−⟩ in the {|p⟩,|q⟩} frame
  2. Eve frame           |E_p⟩ = (1,0), |E_q⟩ = (c·e^{iθ}, √(1−c²))
  3. Conditional states  E_{x,y} for every (sent, received) pair
  4. Transition probs    p_{x,y} from the closed forms
  5. BER                 per basis and total, bounded below by (1 − c·cos θ)/4

The signal frame is fixed so that T|p⟩|E⟩ = |p⟩|E_p⟩ and
T|q⟩|E⟩ = |q⟩|E_q⟩; everything else follows by linearity.

Usage:
    from weak_attack import AttackParams, evolve
    outcome = evolve(AttackParams(alpha=math.pi / 4, overlap_c=0.8, theta=0.0))
    outcome.ber_total   # → 0.05
══════════════════════════════════════════════════════════════════════
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from qkd_linalg import DensityOperator, StateVector

logger = logging.getLogger(__name__)

# =============================================================================
# CONFIGURATION
# =============================================================================

ABSENT_WEIGHT_TOL = 1e-12      # conditional states with weight below this are absent
MAX_ATTACK_BER    = 0.25       # c = 1 − 4·p_e must stay in [0, 1]

Z_SYMBOLS = ('0', '1')
X_SYMBOLS = ('+', '-')
BASIS_SYMBOLS = {'Z': Z_SYMBOLS, 'X': X_SYMBOLS}
ALL_SYMBOLS = Z_SYMBOLS + X_SYMBOLS


# =============================================================================
# TYPES
# =============================================================================

@dataclass(frozen=True)
class AttackParams:
    """
    Eve's attack knobs.

    Fields:
        alpha:      basis angle, a = cos α and b = sin α
        overlap_c:  |⟨E_p|E_q⟩| in [0, 1]
        theta:      phase of ⟨E_p|E_q⟩
    """
    alpha:     float
    overlap_c: float
    theta:     float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.theta)):
            raise ValueError(f"alpha and theta must be finite, got ({self.alpha!r}, {self.theta!r})")
        if not 0.0 <= self.overlap_c <= 1.0:
            raise ValueError(f"overlap_c must lie in [0, 1], got {self.overlap_c!r}")

    @property
    def a(self) -> float:
        return math.cos(self.alpha)

    @property
    def b(self) -> float:
        return math.sin(self.alpha)

    @property
    def disturbance(self) -> float:
        """1 − c·cos θ, the factor every flip probability carries."""
        return 1.0 - self.overlap_c * math.cos(self.theta)


Pair = Tuple[str, str]


@dataclass(frozen=True)
class EveConditionalStates:
    """
    Normalized Eve states keyed by (sent, received) symbols.

    A value of None marks a zero-weight outcome; its formula is 0/0 and every
    downstream quantity weights it by zero.
    """
    states: Dict[Pair, Optional[StateVector]]

    def get(self, sent: str, received: str) -> Optional[StateVector]:
        return self.states[(sent, received)]

    def present(self) -> Dict[Pair, StateVector]:
        return {k: v for k, v in self.states.items() if v is not None}


@dataclass(frozen=True)
class TransitionProbabilities:
    p00: float
    p01: float
    p10: float
    p11: float
    ppp: float
    ppm: float
    pmp: float
    pmm: float

    def by_pair(self) -> Dict[Pair, float]:
        return {
            ('0', '0'): self.p00, ('0', '1'): self.p01,
            ('1', '0'): self.p10, ('1', '1'): self.p11,
            ('+', '+'): self.ppp, ('+', '-'): self.ppm,
            ('-', '+'): self.pmp, ('-', '-'): self.pmm,
        }


@dataclass(frozen=True)
class AttackOutcome:
    params:     AttackParams
    eve_states: EveConditionalStates
    probs:      TransitionProbabilities
    ber_z:      float
    ber_x:      float
    ber_total:  float

    def summary(self) -> str:
        p = self.params
        return (
            f"α={p.alpha:.6f} c={p.overlap_c:.6f} θ={p.theta:.6f} | "
            f"BER z={self.ber_z:.6f} x={self.ber_x:.6f} total={self.ber_total:.6f}"
        )


@dataclass(frozen=True)
class MdiLeakBound:
    """Two-channel bound r ≤ 2(p(e_A) + p(e_B)) with the small-BER total."""
    ber_a:      float
    ber_b:      float
    total_ber:  float
    leak_bound: float


@dataclass(frozen=True)
class MdiOutcome:
    channel_a:  AttackOutcome
    channel_b:  AttackOutcome
    bound:      MdiLeakBound
    balanced_a: Tuple[float, float]    # (ber_z, ber_x) with half the rounds H-conjugated
    balanced_b: Tuple[float, float]
    aligned:    bool = field(default=True)


# =============================================================================
# STATE PREPARATION
# =============================================================================

def mub_states(alpha: float) -> Dict[str, StateVector]:
    """
    |0⟩ = a|p⟩ + b|q⟩,  |1⟩ = b|p⟩ − a|q⟩,
    |+⟩ = [(a+b)|p⟩ − (a−b)|q⟩]/√2,  |−⟩ = [(a−b)|p⟩ + (a+b)|q⟩]/√2
    """
    if not math.isfinite(alpha):
        raise ValueError(f"alpha must be finite, got {alpha!r}")
    a, b = math.cos(alpha), math.sin(alpha)
    r = 1.0 / math.sqrt(2.0)
    return {
        '0': StateVector([a, b], normalized=True),
        '1': StateVector([b, -a], normalized=True),
        '+': StateVector([r * (a + b), -r * (a - b)], normalized=True),
        '-': StateVector([r * (a - b), r * (a + b)], normalized=True),
    }


def eve_frame(overlap_c: float, theta: float) -> Tuple[StateVector, StateVector]:
    """(|E_p⟩, |E_q⟩) with ⟨E_p|E_q⟩ = c·e^{iθ}."""
    if not 0.0 <= overlap_c <= 1.0:
        raise ValueError(f"overlap_c must lie in [0, 1], got {overlap_c!r}")
    e_p = StateVector([1.0, 0.0], normalized=True)
    e_q = StateVector(
        [overlap_c * complex(math.cos(theta), math.sin(theta)), math.sqrt(1.0 - overlap_c ** 2)],
        normalized=True,
    )
    return e_p, e_q


def conditional_vectors(a: float, b: float, e_p: np.ndarray, e_q: np.ndarray) -> Dict[Pair, np.ndarray]:
    """
    Unnormalized Eve vectors for every (sent, received) pair.

    Their squared norms are the transition probabilities. e_p / e_q may be
    any dimension, which lets the entangled attack substitute
    |E_p⟩_A|E_p⟩_B and |E_q⟩_A|E_q⟩_B.
    """
    e_p = np.asarray(e_p, dtype=np.complex128)
    e_q = np.asarray(e_q, dtype=np.complex128)
    diff = e_p - e_q
    # cross terms share one direction; |E_{+,-}⟩ taken along E_p − E_q
    flip_z = a * b * diff
    flip_x = 0.5 * (a * a - b * b) * diff
    return {
        ('0', '0'): a * a * e_p + b * b * e_q,
        ('0', '1'): flip_z,
        ('1', '0'): flip_z,
        ('1', '1'): b * b * e_p + a * a * e_q,
        ('+', '+'): 0.5 * ((a + b) ** 2 * e_p + (a - b) ** 2 * e_q),
        ('+', '-'): flip_x,
        ('-', '+'): flip_x,
        ('-', '-'): 0.5 * ((a - b) ** 2 * e_p + (a + b) ** 2 * e_q),
    }


def normalize_conditional(vectors: Dict[Pair, np.ndarray],
                          weights: Dict[Pair, float]) -> Dict[Pair, Optional[StateVector]]:
    """Unit-normalize each vector, or mark it absent when its weight vanishes."""
    states = {}
    for pair, vec in vectors.items():
        norm = float(np.linalg.norm(vec))
        if weights[pair] < ABSENT_WEIGHT_TOL or norm == 0.0:
            states[pair] = None
        else:
            states[pair] = StateVector(vec / norm, normalized=True)
    return states


# =============================================================================
# CHANNEL
# =============================================================================

def transition_probabilities(params: AttackParams) -> TransitionProbabilities:
    a2b2 = (params.a * params.b) ** 2
    d = params.disturbance
    flip_z = 2.0 * a2b2 * d
    flip_x = 0.5 * (1.0 - 4.0 * a2b2) * d
    return TransitionProbabilities(
        p00=1.0 - flip_z, p01=flip_z, p10=flip_z, p11=1.0 - flip_z,
        ppp=1.0 - flip_x, ppm=flip_x, pmp=flip_x, pmm=1.0 - flip_x,
    )


def evolve(params: AttackParams) -> AttackOutcome:
    """Apply T = RU to each MUB state and collect Eve's conditional states."""
    probs = transition_probabilities(params)
    e_p, e_q = eve_frame(params.overlap_c, params.theta)
    vectors = conditional_vectors(params.a, params.b, e_p.amps, e_q.amps)
    weights = probs.by_pair()

    for pair, vec in vectors.items():
        drift = abs(float(np.vdot(vec, vec).real) - weights[pair])
        if drift > 1e-12:
            logger.debug(f"‖E{pair}‖² differs from closed-form probability by {drift:.3e}")

    eve_states = EveConditionalStates(normalize_conditional(vectors, weights))
    ber_z = 0.5 * (probs.p01 + probs.p10)
    ber_x = 0.5 * (probs.ppm + probs.pmp)
    ber_total = 0.25 * (probs.p01 + probs.p10 + probs.pmp + probs.ppm)
    return AttackOutcome(params, eve_states, probs, ber_z, ber_x, ber_total)


def ber_lower_bound(overlap_c: float, theta: float) -> float:
    """(1 − c·cos θ)/4; independent of a and b."""
    return (1.0 - overlap_c * math.cos(theta)) / 4.0


def attack_params_from_ber(p_e: float, alpha: float = 0.0) -> AttackParams:
    """Target BER → (c, θ) with θ = 0, the phase that helps Eve most."""
    if not 0.0 <= p_e <= MAX_ATTACK_BER:
        raise ValueError(f"target BER must lie in [0, {MAX_ATTACK_BER}], got {p_e!r}")
    return AttackParams(alpha=alpha, overlap_c=1.0 - 4.0 * p_e, theta=0.0)


def received_state(params: AttackParams, symbol: str) -> DensityOperator:
    """
    Bob's state for one sent symbol, Tr_E of the post-attack joint state,
    written in the {|p⟩,|q⟩} frame.
    """
    if symbol not in ALL_SYMBOLS:
        raise ValueError(f"unknown MUB symbol {symbol!r}")
    outcome = evolve(params)
    mub = mub_states(params.alpha)
    basis = BASIS_SYMBOLS['Z'] if symbol in Z_SYMBOLS else BASIS_SYMBOLS['X']
    weights = outcome.probs.by_pair()

    rho = np.zeros((2, 2), dtype=np.complex128)
    for r1 in basis:
        for r2 in basis:
            e1 = outcome.eve_states.get(symbol, r1)
            e2 = outcome.eve_states.get(symbol, r2)
            if e1 is None or e2 is None:
                continue
            coherence = math.sqrt(weights[(symbol, r1)] * weights[(symbol, r2)]) * np.vdot(e2.amps, e1.amps)
            rho += coherence * np.outer(mub[r1].amps, mub[r2].amps.conj())
    return DensityOperator(rho)


def bob_state(params: AttackParams) -> DensityOperator:
    """
    ρ = ¼[(p00+p10)ρ_0 + (p01+p11)ρ_1 + (p++ + p−+)ρ_+ + (p+− + p−−)ρ_−]
    """
    probs = transition_probabilities(params)
    mub = mub_states(params.alpha)
    weights = [
        0.25 * (probs.p00 + probs.p10),
        0.25 * (probs.p01 + probs.p11),
        0.25 * (probs.ppp + probs.pmp),
        0.25 * (probs.ppm + probs.pmm),
    ]
    return DensityOperator.mixture(weights, [mub['0'], mub['1'], mub['+'], mub['-']])


def balanced_attack(params: AttackParams) -> Tuple[float, float]:
    """
    Half the rounds attacked with T, half with the Hadamard-conjugated T.

    Conjugating by H swaps the Z and X roles, which inside this attack
    family is the same channel at α' = π/4 − α (sin 2α' = cos 2α).
    """
    direct = evolve(params)
    swapped = evolve(AttackParams(math.pi / 4 - params.alpha, params.overlap_c, params.theta))
    ber_z = 0.5 * (direct.ber_z + swapped.ber_z)
    ber_x = 0.5 * (direct.ber_x + swapped.ber_x)
    return ber_z, ber_x


# =============================================================================
# MDI: two attacked channels
# =============================================================================

def mdi_leak_bound(ber_a: float, ber_b: float) -> MdiLeakBound:
    """r ≤ 2(p(e_A) + p(e_B)); total BER ≈ p(e_A) + p(e_B) for small BER."""
    for name, value in (('ber_a', ber_a), ('ber_b', ber_b)):
        if not 0.0 <= value <= 0.5:
            raise ValueError(f"{name} must lie in [0, 0.5], got {value!r}")
    total = ber_a + ber_b
    return MdiLeakBound(ber_a=ber_a, ber_b=ber_b, total_ber=total, leak_bound=2.0 * total)


def mdi_attack(params_a: AttackParams, params_b: AttackParams) -> MdiOutcome:
    """
    Independent collective attacks on Alice's and Bob's channels.

    Each channel also carries its balanced variant (T on half the rounds,
    H T H on the other half), whose per-basis BERs are equal.
    """
    aligned = math.isclose(params_a.alpha, params_b.alpha, abs_tol=1e-12)
    if not aligned:
        logger.warning(
            f"⚠️  MDI channels use different basis angles "
            f"(α_A={params_a.alpha:.6f}, α_B={params_b.alpha:.6f}); "
            f"Eve's information is no longer definite"
        )
    channel_a = evolve(params_a)
    channel_b = evolve(params_b)
    bound = mdi_leak_bound(channel_a.ber_total, channel_b.ber_total)
    return MdiOutcome(
        channel_a, channel_b, bound,
        balanced_a=balanced_attack(params_a),
        balanced_b=balanced_attack(params_b),
        aligned=aligned,
    )
