"""
usd_leakage.py
══════════════════════════════════════════════════════════════════════
What Eve learns after basis announcement.

Eve holds one of two stored states per basis (E_{0,0} vs E_{1,1}, or
E_{+,+} vs E_{−,−}) plus the cross-term states. A quantum USD measurement
separates the pair with probability 1 − |⟨x|y⟩|; cross-term outcomes are
a coin flip. That gives a 2×2 guessing matrix per basis, scaled by A:

    p_right = p_{s,s}·(1 − |⟨E_{s,s}|E_{s̄,s̄}⟩|) + ½·p_{s,s̄}
    p_wrong = ½·p_{s,s̄}
    χ_basis = A·[1 − H(p_right/A, p_wrong/A)]
    χ       = ½(χ^z + χ^x)

The von Neumann Holevo quantity of the same ensemble is computed beside it
as a labeled diagnostic; χ above is the one key rates use.

Usage:
    from usd_leakage import chi_total, sweep_alpha
    report = chi_total(attack_params_from_ber(0.05, alpha=0.0))
    report.chi_total   # → 0.1
══════════════════════════════════════════════════════════════════════
"""

import logging
import math
from dataclasses import dataclass, asdict
from typing import List, Mapping, Optional

import numpy as np
import pandas as pd

from qkd_linalg import DensityOperator, StateVector, entropy_pair, inner, von_neumann_entropy
from weak_attack import (
    BASIS_SYMBOLS, MAX_ATTACK_BER, AttackOutcome, AttackParams, Pair,
    attack_params_from_ber, evolve,
)

logger = logging.getLogger(__name__)

# =============================================================================
# CONFIGURATION
# =============================================================================

USD_SCHEMES          = ('quantum', 'conventional')
ZERO_MATRIX_TOL      = 1e-14   # A below this → Eve learns nothing in that basis
SYMMETRY_WARN_TOL    = 1e-12   # |p_0^r − p_1^r| above this is logged
SWEEP_ENVELOPE_SLACK = 1e-9    # χ ≤ 2p_e + slack across a sweep

SWEEP_COLUMNS = ['alpha', 'chi_z', 'chi_x', 'chi_total']


# =============================================================================
# TYPES
# =============================================================================

@dataclass(frozen=True)
class GuessMatrix:
    """
    Eve's USD guessing masses in one basis.

    p_right / p_wrong belong to the first symbol of the basis (0 or +);
    p_right_alt / p_wrong_alt are the same masses for the second symbol,
    kept so the p_0^r = p_1^r symmetry is measured rather than assumed.
    """
    basis:       str
    p_right:     float
    p_wrong:     float
    norm_A:      float
    p_right_alt: float = 0.0
    p_wrong_alt: float = 0.0
    is_zero:     bool  = False


@dataclass(frozen=True)
class LeakageReport:
    chi_z:             float
    chi_x:             float
    chi_total:         float
    holevo_standard_z: float
    holevo_standard_x: float
    guess_z:           Optional[GuessMatrix] = None
    guess_x:           Optional[GuessMatrix] = None


@dataclass(frozen=True)
class SweepRow:
    alpha:     float
    chi_z:     float
    chi_x:     float
    chi_total: float


# =============================================================================
# USD
# =============================================================================

def usd_success(overlap_s: float, scheme: str = 'quantum') -> float:
    """
    Probability of a conclusive outcome for two states with overlap s.

    quantum      → 1 − s
    conventional → (1 − s²)/2
    """
    if not 0.0 <= overlap_s <= 1.0:
        raise ValueError(f"overlap must lie in [0, 1], got {overlap_s!r}")
    if scheme == 'quantum':
        return 1.0 - overlap_s
    if scheme == 'conventional':
        return (1.0 - overlap_s ** 2) / 2.0
    raise ValueError(f"unknown USD scheme {scheme!r} (expected one of {USD_SCHEMES})")


def _pair_overlap(states: Mapping[Pair, Optional[StateVector]], first: str, second: str) -> float:
    e1 = states[(first, first)]
    e2 = states[(second, second)]
    if e1 is None or e2 is None:
        return 1.0
    # magnitude is what USD sees; at θ = 0 it equals the real overlap
    return min(1.0, abs(inner(e1, e2)))


def guess_matrix(outcome: AttackOutcome, basis: str) -> GuessMatrix:
    return guess_from_states(basis, outcome.probs.by_pair(), outcome.eve_states.states)


def guess_from_states(basis: str,
                      weights: Mapping[Pair, float],
                      states: Mapping[Pair, Optional[StateVector]]) -> GuessMatrix:
    """
    Guessing matrix from conditional weights p_{x,y} (rows summing to 1 per
    sent symbol) and Eve's normalized states. Works for any Eve dimension,
    so the two-qubit states of the entangled attack go through here too.
    """
    if basis not in BASIS_SYMBOLS:
        raise ValueError(f"basis must be 'Z' or 'X', got {basis!r}")
    s0, s1 = BASIS_SYMBOLS[basis]
    conclusive = usd_success(_pair_overlap(states, s0, s1), 'quantum')

    p_right = weights[(s0, s0)] * conclusive + 0.5 * weights[(s0, s1)]
    p_wrong = 0.5 * weights[(s0, s1)]
    p_right_alt = weights[(s1, s1)] * conclusive + 0.5 * weights[(s1, s0)]
    p_wrong_alt = 0.5 * weights[(s1, s0)]
    norm_A = p_right + p_wrong

    asymmetry = abs(p_right - p_right_alt) + abs(p_wrong - p_wrong_alt)
    if asymmetry > SYMMETRY_WARN_TOL:
        logger.warning(f"⚠️  {basis}-basis guessing masses are asymmetric by {asymmetry:.3e}")

    if norm_A <= ZERO_MATRIX_TOL:
        return GuessMatrix(basis, 0.0, 0.0, 0.0, 0.0, 0.0, is_zero=True)
    return GuessMatrix(basis, p_right, p_wrong, norm_A, p_right_alt, p_wrong_alt)


def chi_basis(gm: GuessMatrix) -> float:
    """A·[1 − H(p_right/A, p_wrong/A)]; zero for the flagged empty matrix."""
    if gm.is_zero or gm.norm_A <= 0.0:
        return 0.0
    h = entropy_pair(gm.p_right / gm.norm_A, gm.p_wrong / gm.norm_A)
    return max(0.0, gm.norm_A * (1.0 - h))


# =============================================================================
# STANDARD HOLEVO DIAGNOSTIC
# =============================================================================

def _eve_state_given_sent(outcome: AttackOutcome, sent: str, basis: str) -> DensityOperator:
    weights = outcome.probs.by_pair()
    acc = np.zeros((2, 2), dtype=np.complex128)
    for received in BASIS_SYMBOLS[basis]:
        state = outcome.eve_states.get(sent, received)
        if state is None:
            continue
        acc += weights[(sent, received)] * np.outer(state.amps, state.amps.conj())
    # dropped zero-weight terms leave the trace short by < ABSENT_WEIGHT_TOL
    return DensityOperator(acc / np.trace(acc).real)


def holevo_standard(outcome: AttackOutcome, basis: str) -> float:
    """S(½ρ_0 + ½ρ_1) − ½S(ρ_0) − ½S(ρ_1) over Eve's states given Alice's symbol."""
    s0, s1 = BASIS_SYMBOLS[basis]
    rho0 = _eve_state_given_sent(outcome, s0, basis)
    rho1 = _eve_state_given_sent(outcome, s1, basis)
    mixed = DensityOperator(0.5 * (rho0.entries + rho1.entries))
    chi = von_neumann_entropy(mixed) - 0.5 * von_neumann_entropy(rho0) - 0.5 * von_neumann_entropy(rho1)
    return max(0.0, chi)


# =============================================================================
# TOTAL LEAKAGE
# =============================================================================

def leakage_from_outcome(outcome: AttackOutcome) -> LeakageReport:
    gz = guess_matrix(outcome, 'Z')
    gx = guess_matrix(outcome, 'X')
    chi_z = chi_basis(gz)
    chi_x = chi_basis(gx)
    return LeakageReport(
        chi_z=chi_z,
        chi_x=chi_x,
        chi_total=0.5 * (chi_z + chi_x),
        holevo_standard_z=holevo_standard(outcome, 'Z'),
        holevo_standard_x=holevo_standard(outcome, 'X'),
        guess_z=gz,
        guess_x=gx,
    )


def chi_total(params: AttackParams) -> LeakageReport:
    return leakage_from_outcome(evolve(params))


def sweep_alpha(p_e: float, n_samples: int) -> List[SweepRow]:
    """
    χ over n_samples evenly spaced α in [0, π/2], endpoints included.

    The envelope χ ≤ 2p_e is checked on the way and any breach is logged.
    """
    if not 0.0 < p_e < MAX_ATTACK_BER:
        raise ValueError(f"p_e must lie in (0, {MAX_ATTACK_BER}), got {p_e!r}")
    if isinstance(n_samples, bool) or not isinstance(n_samples, (int, np.integer)) or n_samples < 2:
        raise ValueError(f"n_samples must be an integer ≥ 2, got {n_samples!r}")

    rows = []
    for alpha in np.linspace(0.0, math.pi / 2, int(n_samples)):
        report = chi_total(attack_params_from_ber(p_e, float(alpha)))
        rows.append(SweepRow(float(alpha), report.chi_z, report.chi_x, report.chi_total))

    peak = max(rows, key=lambda r: r.chi_total)
    if peak.chi_total > 2.0 * p_e + SWEEP_ENVELOPE_SLACK:
        logger.warning(f"⚠️  χ={peak.chi_total:.12f} exceeds 2p_e={2 * p_e:.12f} at α={peak.alpha:.6f}")
    logger.info(
        f"✅ α-sweep done: {len(rows)} points, max χ={peak.chi_total:.6f} "
        f"at α={peak.alpha:.6f} (2p_e={2 * p_e:.6f})"
    )
    return rows


def sweep_frame(rows: List[SweepRow]) -> pd.DataFrame:
    return pd.DataFrame([asdict(r) for r in rows], columns=SWEEP_COLUMNS)
