"""
key_rate.py
──────────────────────────────────────────────────────────────────────
Asymptotic key rate r ≥ I(A;B) − χ(E;AB) under three security proofs,
and the tolerable BER where each one stops producing key.

    purification  χ = H(p_e)      threshold ≈ 11.0%
    collective    χ = 2p_e        threshold ≈ 17.1%
    chsh          χ = 2p_e, S > 2 threshold = (2 − √2)/4 ≈ 14.6%

Usage:
    from key_rate import ProofVariant, key_rate, threshold
    key_rate(0.05, ProofVariant.COLLECTIVE).rate    # → 0.6136
    threshold(ProofVariant.PURIFICATION)            # → 0.1100
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Sequence, Tuple

import pandas as pd
from scipy import optimize

from entangled_attack import CHSH_CLASSICAL_BOUND, CHSH_THRESHOLD_BER, chsh_value
from qkd_linalg import binary_entropy

logger = logging.getLogger(__name__)

# =============================================================================
# CONFIGURATION
# =============================================================================

BISECTION_TOL       = 1e-6
BISECTION_BRACKET   = (1e-9, 0.5 - 1e-9)   # keeps H(p) away from its endpoints
MAX_BISECTION_ITERS = 200
RATE_IDENTITY_TOL   = 1e-12

COMPARISON_COLUMNS = ['p_e', 'variant', 'mutual_info', 'leakage', 'rate', 'secure']


class ProofVariant(Enum):
    PURIFICATION = "purification"
    COLLECTIVE = "collective"
    CHSH = "chsh"


@dataclass(frozen=True)
class KeyRateReport:
    p_e:         float
    mutual_info: float
    leakage:     float
    rate:        float
    variant:     ProofVariant
    secure:      bool

    def summary(self) -> str:
        mark = "✅" if self.secure else "❌"
        return (
            f"{mark} {self.variant.value:<12} p_e={self.p_e:.6f} "
            f"I(A;B)={self.mutual_info:.6f} χ={self.leakage:.6f} r={self.rate:.6f}"
        )


def _check_ber(p_e: float):
    if not 0.0 <= p_e <= 0.5:
        raise ValueError(f"p_e must lie in [0, 0.5], got {p_e!r}")


def mutual_information(p_e: float) -> float:
    """I(A;B) = 1 − H(p_e) for a binary symmetric channel."""
    _check_ber(p_e)
    return 1.0 - binary_entropy(p_e)


def _leakage(p_e: float, variant: ProofVariant) -> float:
    if variant is ProofVariant.PURIFICATION:
        return binary_entropy(p_e)
    return 2.0 * p_e


def key_rate(p_e: float, variant: ProofVariant) -> KeyRateReport:
    _check_ber(p_e)
    variant = ProofVariant(variant)
    mutual = mutual_information(p_e)
    leak = _leakage(p_e, variant)
    rate = mutual - leak
    secure = rate > 0.0
    if variant is ProofVariant.CHSH:
        secure = secure and chsh_value(p_e) > CHSH_CLASSICAL_BOUND
    return KeyRateReport(p_e, mutual, leak, rate, variant, secure)


# =============================================================================
# THRESHOLDS
# =============================================================================

def bisect_root(fn: Callable[[float], float],
                bracket: Tuple[float, float] = BISECTION_BRACKET,
                tol: float = BISECTION_TOL) -> float:
    """Root of a function that is positive at bracket[0] and negative at bracket[1]."""
    lo, hi = bracket
    f_lo, f_hi = fn(lo), fn(hi)
    if not (f_lo > 0.0 > f_hi):
        raise ValueError(f"bracket [{lo}, {hi}] does not straddle a sign change ({f_lo:.3e}, {f_hi:.3e})")
    return float(optimize.bisect(fn, lo, hi, xtol=tol, maxiter=MAX_BISECTION_ITERS))


def threshold(variant: ProofVariant) -> float:
    """Largest p_e with positive key rate (chsh: with S > 2)."""
    variant = ProofVariant(variant)
    if variant is ProofVariant.CHSH:
        closed = CHSH_THRESHOLD_BER
        crossed = bisect_root(lambda p: chsh_value(p) - CHSH_CLASSICAL_BOUND)
        if abs(closed - crossed) > BISECTION_TOL:
            logger.warning(f"⚠️  CHSH threshold closed form {closed:.9f} vs bisection {crossed:.9f}")
        return closed
    return bisect_root(lambda p: key_rate(p, variant).rate)


# =============================================================================
# COMPARISON
# =============================================================================

def compare_variants(p_e_grid: Sequence[float]) -> List[KeyRateReport]:
    """
    All three variants at every grid point.

    Raises ValueError if the collective rate ever falls below the
    purification rate inside (0, 0.5).
    """
    reports = []
    for p_e in p_e_grid:
        row = {v: key_rate(float(p_e), v) for v in ProofVariant}
        coll, puri = row[ProofVariant.COLLECTIVE], row[ProofVariant.PURIFICATION]
        if 0.0 < p_e < 0.5 and coll.rate < puri.rate - RATE_IDENTITY_TOL:
            raise ValueError(
                f"collective rate {coll.rate:.12f} below purification rate {puri.rate:.12f} at p_e={p_e}"
            )
        reports.extend(row[v] for v in ProofVariant)
    logger.info(f"✅ compared {len(ProofVariant)} proof variants on {len(p_e_grid)} BER points")
    return reports


def comparison_frame(reports: Sequence[KeyRateReport]) -> pd.DataFrame:
    rows = [
        {
            'p_e': r.p_e,
            'variant': r.variant.value,
            'mutual_info': r.mutual_info,
            'leakage': r.leakage,
            'rate': r.rate,
            'secure': r.secure,
        }
        for r in reports
    ]
    return pd.DataFrame(rows, columns=COMPARISON_COLUMNS)
