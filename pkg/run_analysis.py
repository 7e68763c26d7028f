"""
run_analysis.py
══════════════════════════════════════════════════════════════════════
Command-line front end for the weak-measurement attack analysis.

Commands:
  sweep-alpha    χ^z, χ^x, χ over α ∈ [0, π/2] at fixed p_e
  threshold      tolerable BER for one security proof
  keyrate        key-rate reports at one p_e, or a variant comparison grid
  attack-report  everything known about one attack configuration
  oracle-check   closed forms vs the explicit joint unitary

Data goes to --out PATH or stdout (CSV with '\\n' endings, or a JSON array);
logs go to stderr. No environment variables are read.

Exit codes:
  0 success   1 verification failure   2 invalid arguments   3 I/O failure

Usage:
  python run_analysis.py sweep-alpha --pe 0.05 --samples 257 --format csv --out sweep.csv
  python run_analysis.py threshold --proof collective
  python run_analysis.py keyrate --samples 51 --format json
  python run_analysis.py attack-report --protocol di --pe 0.05
  python run_analysis.py oracle-check --alpha-steps 2 --c-steps 2 --theta-steps 2
══════════════════════════════════════════════════════════════════════
"""

import argparse
import logging
import math
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from data_exporter import EXPORT_FORMATS, DataExporter, humanize
from entangled_attack import (
    attack_on_bell, balanced_bell_state, balanced_entangled_attack,
    chsh_expectation, chsh_value, equivalence_check,
)
from key_rate import ProofVariant, compare_variants, comparison_frame, key_rate, threshold
from protocol_registry import ProtocolRegistry
from unitary_oracle import DEFAULT_ALPHA_STEPS, DEFAULT_C_STEPS, DEFAULT_THETA_STEPS, verify_grid
from usd_leakage import GuessMatrix, leakage_from_outcome, sweep_alpha, sweep_frame
from weak_attack import (
    MAX_ATTACK_BER, AttackParams, attack_params_from_ber, balanced_attack,
    ber_lower_bound, evolve, mdi_attack,
)

logger = logging.getLogger(__name__)

# =============================================================================
# CONFIGURATION
# =============================================================================

EXIT_OK         = 0
EXIT_VERIFY     = 1
EXIT_BAD_ARGS   = 2
EXIT_IO         = 3

DEFAULT_SWEEP_SAMPLES = 257
REPORT_COLUMNS        = ['section', 'quantity', 'value']
COMMANDS              = ('sweep-alpha', 'threshold', 'keyrate', 'attack-report', 'oracle-check')


@dataclass
class RunConfig:
    command:      str
    protocol:     str = 'bb84'
    p_e:          Optional[float] = None
    p_e_a:        Optional[float] = None
    p_e_b:        Optional[float] = None
    overlap_c:    Optional[float] = None
    theta:        Optional[float] = None
    alpha:        float = 0.0
    samples:      Optional[int] = None
    proof:        Optional[str] = None
    fmt:          str = 'csv'
    output_path:  Optional[str] = None
    alpha_steps:  int = DEFAULT_ALPHA_STEPS
    c_steps:      int = DEFAULT_C_STEPS
    theta_steps:  int = DEFAULT_THETA_STEPS
    inject_error: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> 'RunConfig':
        fields = {k: v for k, v in vars(args).items() if k in cls.__dataclass_fields__ and v is not None}
        config = cls(**fields)
        config.validate()
        return config

    def validate(self):
        """All run-parameter checks in one place; raises ValueError."""
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.fmt not in EXPORT_FORMATS:
            raise ValueError(f"--format must be one of {EXPORT_FORMATS}")
        if ProtocolRegistry.get_protocol(self.protocol) is None:
            raise ValueError(f"unknown protocol {self.protocol!r}")
        if self.proof is not None and ProtocolRegistry.get_proof(self.proof) is None:
            raise ValueError(f"unknown proof variant {self.proof!r}")

        if self.command == 'sweep-alpha':
            if self.p_e is None:
                raise ValueError("sweep-alpha needs --pe")
            if self.samples is None:
                self.samples = DEFAULT_SWEEP_SAMPLES
        if self.command in ('sweep-alpha', 'keyrate') and self.samples is not None and self.samples < 2:
            raise ValueError(f"--samples must be ≥ 2, got {self.samples}")
        if self.command == 'keyrate' and (self.p_e is None) == (self.samples is None):
            raise ValueError("keyrate needs exactly one of --pe or --samples")
        if self.command == 'attack-report':
            has_pe = self.p_e is not None or self.p_e_a is not None or self.p_e_b is not None
            if not has_pe and self.overlap_c is None:
                raise ValueError("attack-report needs --pe, --pe-a/--pe-b or --overlap")
            if (self.p_e_a is None) != (self.p_e_b is None):
                raise ValueError("--pe-a and --pe-b go together")
            if self.p_e_a is not None and self.protocol != 'mdi':
                raise ValueError("--pe-a/--pe-b only apply to --protocol mdi")
            if self.theta is not None and self.overlap_c is None:
                raise ValueError("--theta needs --overlap")


# =============================================================================
# ATTACK PARAMETERS
# =============================================================================

def resolve_params(config: RunConfig, p_e: Optional[float]) -> AttackParams:
    """Explicit (c, θ) wins over a target BER; a BER implies θ = 0, c = 1 − 4p_e."""
    if config.overlap_c is not None:
        if p_e is not None:
            logger.warning("⚠️  --overlap/--theta given together with a BER target; using (c, θ)")
        return AttackParams(config.alpha, config.overlap_c, config.theta or 0.0)
    return attack_params_from_ber(p_e, config.alpha)


def _rows_for_guess(section: str, gm: GuessMatrix) -> List[Tuple[str, str, float]]:
    return [
        (section, 'p_right', gm.p_right),
        (section, 'p_wrong', gm.p_wrong),
        (section, 'norm_A', gm.norm_A),
        (section, 'p_right_alt', gm.p_right_alt),
        (section, 'is_zero', float(gm.is_zero)),
    ]


def _rows_for_keyrate(protocol: str, p_e: float) -> List[Tuple[str, str, float]]:
    rows = []
    for variant in ProtocolRegistry.get_proofs_for(protocol):
        report = key_rate(p_e, variant)
        proof = ProtocolRegistry.PROOFS[variant]
        extra = f", {proof.condition}" if proof.condition else ""
        logger.info(f"{report.summary()} | χ = {proof.leakage}{extra}")
        section = f"keyrate_{variant.value}"
        rows += [
            (section, 'p_e', report.p_e),
            (section, 'mutual_info', report.mutual_info),
            (section, 'leakage', report.leakage),
            (section, 'rate', report.rate),
            (section, 'secure', float(report.secure)),
        ]
    return rows


def _single_channel_rows(params: AttackParams) -> List[Tuple[str, str, float]]:
    outcome = evolve(params)
    leak = leakage_from_outcome(outcome)
    logger.info(outcome.summary())
    rows = [
        ('params', 'alpha', params.alpha),
        ('params', 'overlap_c', params.overlap_c),
        ('params', 'theta', params.theta),
    ]
    rows += [('probabilities', f"p_{x}{y}", p) for (x, y), p in outcome.probs.by_pair().items()]
    rows += [
        ('ber', 'z', outcome.ber_z),
        ('ber', 'x', outcome.ber_x),
        ('ber', 'total', outcome.ber_total),
        ('ber', 'lower_bound', ber_lower_bound(params.overlap_c, params.theta)),
    ]
    rows += _rows_for_guess('guess_z', leak.guess_z)
    rows += _rows_for_guess('guess_x', leak.guess_x)
    rows += [
        ('leakage', 'chi_z', leak.chi_z),
        ('leakage', 'chi_x', leak.chi_x),
        ('leakage', 'chi_total', leak.chi_total),
        ('leakage', 'holevo_standard_z', leak.holevo_standard_z),
        ('leakage', 'holevo_standard_x', leak.holevo_standard_x),
    ]
    bal_z, bal_x = balanced_attack(params)
    rows += [('balanced', 'ber_z', bal_z), ('balanced', 'ber_x', bal_x)]
    logger.info(f"χ^z={humanize(leak.chi_z)} χ^x={humanize(leak.chi_x)} χ={humanize(leak.chi_total)}")
    rows += _rows_for_keyrate('bb84', outcome.ber_total)
    return rows


def _mdi_rows(config: RunConfig) -> List[Tuple[str, str, float]]:
    if config.p_e_a is not None:
        pa = resolve_params(config, config.p_e_a)
        pb = resolve_params(config, config.p_e_b)
    elif config.p_e is not None and config.overlap_c is None:
        # one overall BER target, split evenly over the two channels
        pa = pb = attack_params_from_ber(config.p_e / 2.0, config.alpha)
    else:
        pa = pb = resolve_params(config, config.p_e)

    outcome = mdi_attack(pa, pb)
    rows = []
    channels = (
        ('channel_a', outcome.channel_a, outcome.balanced_a),
        ('channel_b', outcome.channel_b, outcome.balanced_b),
    )
    for section, channel, (bal_z, bal_x) in channels:
        leak = leakage_from_outcome(channel)
        rows += [
            (section, 'alpha', channel.params.alpha),
            (section, 'overlap_c', channel.params.overlap_c),
            (section, 'ber_z', channel.ber_z),
            (section, 'ber_x', channel.ber_x),
            (section, 'ber_total', channel.ber_total),
            (section, 'balanced_ber_z', bal_z),
            (section, 'balanced_ber_x', bal_x),
            (section, 'chi_total', leak.chi_total),
        ]
    rows += [
        ('mdi', 'total_ber', outcome.bound.total_ber),
        ('mdi', 'leak_bound', outcome.bound.leak_bound),
        ('mdi', 'aligned', float(outcome.aligned)),
    ]
    logger.info(f"MDI total BER {humanize(outcome.bound.total_ber)}, leak bound {humanize(outcome.bound.leak_bound)}")
    rows += _rows_for_keyrate('mdi', outcome.bound.total_ber)
    return rows


def _di_rows(config: RunConfig) -> List[Tuple[str, str, float]]:
    if config.overlap_c is None:
        # BER target on the Bell pair: s = c² = 1 − 4p_e
        if not 0.0 <= config.p_e <= MAX_ATTACK_BER:
            raise ValueError(f"--pe must lie in [0, {MAX_ATTACK_BER}], got {config.p_e}")
        params = AttackParams(config.alpha, math.sqrt(1.0 - 4.0 * config.p_e), 0.0)
    else:
        params = resolve_params(config, config.p_e)
    # joint overlap of Eve's two-qubit states, real part
    s = params.overlap_c ** 2 * math.cos(2.0 * params.theta)
    if s < 0.0:
        raise ValueError(f"joint overlap c²·cos 2θ = {s:.6f} is negative; choose |θ| ≤ π/4")
    p_e = (1.0 - s) / 4.0

    joint = attack_on_bell(params)
    bal_z, bal_x, chi = balanced_entangled_attack(s)
    equivalence = equivalence_check(params)
    logger.info(joint.summary())
    rows = [
        ('params', 'alpha', params.alpha),
        ('params', 'overlap_c', params.overlap_c),
        ('params', 'theta', params.theta),
        ('params', 'joint_overlap', s),
        ('entangled', 'ber_z', joint.ber_z),
        ('entangled', 'ber_x', joint.ber_x),
        ('entangled', 'ber_total', joint.ber_total),
        ('entangled', 'equivalent', float(equivalence.equivalent)),
        ('balanced', 'ber_z', bal_z),
        ('balanced', 'ber_x', bal_x),
        ('balanced', 'chi', chi),
        ('chsh', 'p_e', p_e),
        ('chsh', 'S', chsh_value(p_e)),
        ('chsh', 'S_operator', chsh_expectation(balanced_bell_state(s))),
    ]
    logger.info(f"CHSH S={humanize(chsh_value(p_e))} at p_e={humanize(p_e)}")
    rows += _rows_for_keyrate('di', p_e)
    return rows


# =============================================================================
# COMMANDS
# =============================================================================

def cmd_sweep_alpha(config: RunConfig) -> int:
    rows = sweep_alpha(config.p_e, config.samples)
    DataExporter(config.fmt, config.output_path).export(sweep_frame(rows), 'sweep rows')
    return EXIT_OK


def cmd_threshold(config: RunConfig) -> int:
    variant = ProofVariant(config.proof)
    value = threshold(variant)
    logger.info(f"✅ {variant.value} threshold: p_e = {humanize(value)}")
    print(humanize(value))
    return EXIT_OK


def cmd_keyrate(config: RunConfig) -> int:
    if config.samples is not None:
        grid = np.linspace(0.0, 0.5, config.samples)
        reports = compare_variants([float(p) for p in grid])
        if config.proof is not None:
            reports = [r for r in reports if r.variant.value == config.proof]
    elif config.proof is not None:
        reports = [key_rate(config.p_e, ProofVariant(config.proof))]
    else:
        reports = [key_rate(config.p_e, v) for v in ProofVariant]
    if config.samples is None:
        for report in reports:
            logger.info(report.summary())
    DataExporter(config.fmt, config.output_path).export(comparison_frame(reports), 'key-rate rows')
    return EXIT_OK


def cmd_attack_report(config: RunConfig) -> int:
    info = ProtocolRegistry.get_protocol(config.protocol)
    logger.info(f"📊 {info.title}: {info.channels} attacked channel(s)")
    if config.protocol == 'mdi':
        rows = _mdi_rows(config)
    elif config.protocol == 'di':
        rows = _di_rows(config)
    else:
        if config.p_e is not None and not 0.0 <= config.p_e <= MAX_ATTACK_BER:
            raise ValueError(f"--pe must lie in [0, {MAX_ATTACK_BER}], got {config.p_e}")
        rows = _single_channel_rows(resolve_params(config, config.p_e))
    rows = [('protocol', 'channels', float(info.channels)), ('protocol', 'entangled', float(info.entangled))] + rows
    frame = pd.DataFrame(rows, columns=REPORT_COLUMNS)
    frame['value'] = frame['value'].astype(float)
    DataExporter(config.fmt, config.output_path).export(frame, 'report rows')
    return EXIT_OK


def cmd_oracle_check(config: RunConfig) -> int:
    report = verify_grid(config.alpha_steps, config.c_steps, config.theta_steps, config.inject_error)
    if report.passed:
        return EXIT_OK
    print(f"❌ oracle mismatch at (alpha, c, theta) = {report.worst_point}: "
          f"prob error {report.max_prob_error:.3e}, state error {report.max_state_error:.3e}",
          file=sys.stderr)
    return EXIT_VERIFY


HANDLERS = {
    'sweep-alpha': cmd_sweep_alpha,
    'threshold': cmd_threshold,
    'keyrate': cmd_keyrate,
    'attack-report': cmd_attack_report,
    'oracle-check': cmd_oracle_check,
}


# =============================================================================
# MAIN
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    logging_opts = argparse.ArgumentParser(add_help=False)
    noise = logging_opts.add_mutually_exclusive_group()
    noise.add_argument("--verbose", action="store_true", help="Debug-level logging")
    noise.add_argument("--quiet", action="store_true", help="Warnings and errors only")

    output_opts = argparse.ArgumentParser(add_help=False)
    output_opts.add_argument("--format", dest="fmt", choices=EXPORT_FORMATS, default="csv")
    output_opts.add_argument("--out", dest="output_path", default=None,
                             help="Output file (default: stdout)")

    parser = argparse.ArgumentParser(
        prog="run_analysis",
        description="Weak-measurement attack analysis: leakage, key rates and thresholds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sweep-alpha", parents=[logging_opts, output_opts],
                       help="χ over α ∈ [0, π/2] at fixed BER")
    s.add_argument("--pe", dest="p_e", type=float, required=True, help="Target BER in (0, 0.25)")
    s.add_argument("--samples", type=int, default=DEFAULT_SWEEP_SAMPLES,
                   help=f"Grid points including both endpoints (default: {DEFAULT_SWEEP_SAMPLES})")

    t = sub.add_parser("threshold", parents=[logging_opts], help="Tolerable BER for one proof")
    t.add_argument("--proof", required=True, choices=ProtocolRegistry.get_proof_names())

    k = sub.add_parser("keyrate", parents=[logging_opts, output_opts], help="Key-rate reports")
    k.add_argument("--pe", dest="p_e", type=float, default=None, help="Single BER in [0, 0.5]")
    k.add_argument("--proof", choices=ProtocolRegistry.get_proof_names(), default=None)
    k.add_argument("--samples", type=int, default=None,
                   help="Compare all proofs on this many BER points over [0, 0.5]")

    a = sub.add_parser("attack-report", parents=[logging_opts, output_opts],
                       help="Full report for one attack configuration")
    a.add_argument("--protocol", choices=ProtocolRegistry.get_protocol_names(), default="bb84")
    a.add_argument("--pe", dest="p_e", type=float, default=None)
    a.add_argument("--pe-a", dest="p_e_a", type=float, default=None)
    a.add_argument("--pe-b", dest="p_e_b", type=float, default=None)
    a.add_argument("--overlap", dest="overlap_c", type=float, default=None, help="c = |⟨E_p|E_q⟩|")
    a.add_argument("--theta", type=float, default=None, help="Phase of ⟨E_p|E_q⟩ (radians)")
    a.add_argument("--alpha", type=float, default=0.0, help="Basis angle (radians)")

    o = sub.add_parser("oracle-check", parents=[logging_opts], help="Verify closed forms on a grid")
    o.add_argument("--alpha-steps", type=int, default=DEFAULT_ALPHA_STEPS)
    o.add_argument("--c-steps", type=int, default=DEFAULT_C_STEPS)
    o.add_argument("--theta-steps", type=int, default=DEFAULT_THETA_STEPS)
    o.add_argument("--inject-error", action="store_true",
                   help="Offset every oracle probability by INJECTED_ERROR; the check must then fail")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad arguments and 0 on --help
        return int(e.code or 0)

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
        force=True,
    )

    try:
        config = RunConfig.from_args(args)
        return HANDLERS[config.command](config)
    except ValueError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_BAD_ARGS
    except OSError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_IO
    except Exception as e:
        logger.exception(f"❌ Unexpected error: {e}")
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
