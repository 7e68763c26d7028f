"""
unitary_oracle.py
──────────────────────────────────────────────────────────────────────
Brute-force cross-check of the attack engine.

Builds the joint signal⊗Eve unitary explicitly (signal-major, Eve's probe
starting in |E⟩ = e0), pushes every MUB state through it and projects the
signal onto every MUB outcome. Nothing here uses the closed-form
probabilities or the conditional-vector formulas; only AttackParams, the
MUB table and the Eve frame are shared with weak_attack.

Usage:
    python run_analysis.py oracle-check
    python run_analysis.py oracle-check --alpha-steps 2 --c-steps 2 --theta-steps 2
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from qkd_linalg import Operator, StateVector, inner
from weak_attack import (
    ABSENT_WEIGHT_TOL, BASIS_SYMBOLS, Z_SYMBOLS, AttackOutcome, AttackParams,
    EveConditionalStates, TransitionProbabilities, ber_lower_bound, eve_frame,
    evolve, mub_states,
)

logger = logging.getLogger(__name__)

# =============================================================================
# CONFIGURATION
# =============================================================================

DEFAULT_ALPHA_STEPS = 9        # α over [0, π/2]
DEFAULT_C_STEPS     = 6        # c over [0, 1]
DEFAULT_THETA_STEPS = 3        # θ over [0, π/2]
ORACLE_PASS_TOL     = 1e-9     # both error measures must stay below this
COMPLETENESS_TOL    = 1e-12    # Σ_y p_{x,y} = 1
GRAM_SCHMIDT_FLOOR  = 1e-12    # residual norm below this → try the other seed
INJECTED_ERROR      = 1e-6     # forced mismatch for --inject-error, well above ORACLE_PASS_TOL


@dataclass(frozen=True, eq=False)
class JointUnitary:
    """T on signal ⊗ Eve with T|p⟩|E⟩ = |p⟩|E_p⟩ and T|q⟩|E⟩ = |q⟩|E_q⟩."""
    matrix:    Operator
    overlap_c: float
    theta:     float


@dataclass(frozen=True)
class OracleReport:
    max_prob_error:  float
    max_state_error: float
    grid_size:       int
    worst_point:     Optional[Tuple[float, float, float]] = None

    @property
    def passed(self) -> bool:
        return self.max_prob_error < ORACLE_PASS_TOL and self.max_state_error < ORACLE_PASS_TOL

    def summary(self) -> str:
        mark = "✅" if self.passed else "❌"
        return (
            f"{mark} oracle grid of {self.grid_size} points | "
            f"max prob error {self.max_prob_error:.3e}, max state error {self.max_state_error:.3e}"
        )


# =============================================================================
# CONSTRUCTION
# =============================================================================

def _complete_column(first: np.ndarray) -> np.ndarray:
    """Unit vector orthogonal to `first`, Gram–Schmidt from e1, else from e0."""
    for seed in (np.array([0.0, 1.0], dtype=np.complex128), np.array([1.0, 0.0], dtype=np.complex128)):
        residual = seed - np.vdot(first, seed) * first
        norm = np.linalg.norm(residual)
        if norm > GRAM_SCHMIDT_FLOOR:
            return residual / norm
    raise ValueError("could not complete the Eve rotation to a unitary")


def build_unitary(overlap_c: float, theta: float) -> JointUnitary:
    e_p, e_q = eve_frame(overlap_c, theta)
    blocks = []
    for target in (e_p.amps, e_q.amps):
        blocks.append(np.column_stack([target, _complete_column(target)]))

    matrix = np.zeros((4, 4), dtype=np.complex128)
    matrix[:2, :2] = blocks[0]
    matrix[2:, 2:] = blocks[1]
    # Operator(unitary=True) raises if the completion drifted
    return JointUnitary(Operator(matrix, unitary=True), overlap_c, theta)


# =============================================================================
# SIMULATION
# =============================================================================

def simulate(params: AttackParams) -> AttackOutcome:
    """Same contract as weak_attack.evolve, by explicit matrix arithmetic."""
    unitary = build_unitary(params.overlap_c, params.theta).matrix.matrix
    mub = mub_states(params.alpha)
    probe = np.array([1.0, 0.0], dtype=np.complex128)

    probs, states = {}, {}
    for sent in mub:
        basis = BASIS_SYMBOLS['Z'] if sent in Z_SYMBOLS else BASIS_SYMBOLS['X']
        joint = (unitary @ np.kron(mub[sent].amps, probe)).reshape(2, 2)
        total = 0.0
        for received in basis:
            eve = mub[received].amps.conj() @ joint
            weight = float(np.vdot(eve, eve).real)
            total += weight
            probs[(sent, received)] = weight
            if weight < ABSENT_WEIGHT_TOL:
                states[(sent, received)] = None
            else:
                states[(sent, received)] = StateVector(eve / math.sqrt(weight), normalized=True)
        if abs(total - 1.0) > COMPLETENESS_TOL:
            logger.warning(f"⚠️  oracle outcomes for |{sent}⟩ sum to {total:.15g}")

    tp = TransitionProbabilities(
        p00=probs[('0', '0')], p01=probs[('0', '1')], p10=probs[('1', '0')], p11=probs[('1', '1')],
        ppp=probs[('+', '+')], ppm=probs[('+', '-')], pmp=probs[('-', '+')], pmm=probs[('-', '-')],
    )
    ber_z = 0.5 * (tp.p01 + tp.p10)
    ber_x = 0.5 * (tp.ppm + tp.pmp)
    return AttackOutcome(params, EveConditionalStates(states), tp, ber_z, ber_x, 0.5 * (ber_z + ber_x))


def _point_errors(params: AttackParams, offset: float) -> Tuple[float, float]:
    closed = evolve(params)
    oracle = simulate(params)

    closed_probs = closed.probs.by_pair()
    oracle_probs = oracle.probs.by_pair()
    prob_err = max(abs(closed_probs[k] - (oracle_probs[k] + offset)) for k in closed_probs)
    prob_err = max(prob_err, abs(oracle.ber_total - ber_lower_bound(params.overlap_c, params.theta)))

    state_err = 0.0
    for pair, state in closed.eve_states.states.items():
        other = oracle.eve_states.get(*pair)
        if state is None or other is None:
            continue
        state_err = max(state_err, 1.0 - abs(inner(state, other)))
    return prob_err, max(0.0, state_err)


def verify_grid(alpha_steps: int = DEFAULT_ALPHA_STEPS,
                c_steps: int = DEFAULT_C_STEPS,
                theta_steps: int = DEFAULT_THETA_STEPS,
                inject_error: bool = False) -> OracleReport:
    """
    Closed forms vs the explicit unitary on the Cartesian (α, c, θ) grid.

    With inject_error, INJECTED_ERROR is added to every oracle probability
    and the report must fail.
    """
    for name, steps in (('alpha_steps', alpha_steps), ('c_steps', c_steps), ('theta_steps', theta_steps)):
        if steps < 2:
            raise ValueError(f"{name} must be ≥ 2, got {steps!r}")

    grid = itertools.product(
        np.linspace(0.0, math.pi / 2, alpha_steps),
        np.linspace(0.0, 1.0, c_steps),
        np.linspace(0.0, math.pi / 2, theta_steps),
    )
    offset = INJECTED_ERROR if inject_error else 0.0
    max_prob, max_state, worst, worst_err, count = 0.0, 0.0, None, -1.0, 0
    for alpha, c, theta in grid:
        point = (float(alpha), float(c), float(theta))
        prob_err, state_err = _point_errors(AttackParams(*point), offset)
        logger.debug(f"oracle α={point[0]:.6f} c={point[1]:.6f} θ={point[2]:.6f}: {prob_err:.3e} / {state_err:.3e}")
        max_prob = max(max_prob, prob_err)
        max_state = max(max_state, state_err)
        if max(prob_err, state_err) > worst_err:
            worst, worst_err = point, max(prob_err, state_err)
        count += 1

    report = OracleReport(max_prob, max_state, count, worst)
    if report.passed:
        logger.info(report.summary())
    else:
        logger.error(f"{report.summary()} (worst at α, c, θ = {worst})")
    return report
