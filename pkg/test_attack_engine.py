"""
test_attack_engine.py
═══════════════════════════════════════════════════════════════════
Checks for the single-channel attack stack: linear algebra, the
weak-measurement channel, USD leakage and the explicit-unitary oracle.

Run standalone (python test_attack_engine.py) or under pytest.

Coverage:
  Linear algebra
    L1  inner products of basis states and |+⟩
    L2  inner(a, b) = conj(inner(b, a)); unitaries preserve overlaps
    L3  binary_entropy endpoints and H(0.11)
    L4  von Neumann entropy of I/2, a pure state and diag(0.9, 0.1)
    L5  S(diag(p, 1−p)) = H(p) on a 0.01 grid
    L6  invalid states and density operators are rejected

  Attack channel
    A1  MUB states at α = 0 and π/4, mutual unbiasedness
    A2  Eve frame overlaps
    A3  evolve at (π/4, 0.8, 0): p01 = 0.1, ppm = 0, BER 0.05
    A4  evolve at (0, 0.6, 0): p01 = 0, ppm = 0.2, BER 0.1
    A5  c = 1 gives no disturbance
    A6  BER = (1 − c·cos θ)/4 and α-independent on the 9×6×3 grid
    A7  completeness, E_{0,1} = E_{1,0}, normalized present states
    A8  ber_lower_bound values
    A9  Bob's state is I/2 (⟨+|ρ|+⟩ = 0.5)
    A10 received_state diagonal equals (p_{x,x}, p_{x,x̄})
    A11 balanced attack values and equal BERs on the grid
    A12 MDI leak bound values, misaligned channels flagged, balanced channels
    A13 attack_params_from_ber mapping and range check

  USD leakage
    U1  usd_success quantum and conventional
    U2  guess matrices at α = 0 and π/4 for p_e = 0.05
    U3  chi_basis values and the zero matrix
    U4  chi_total at α = 0, π/4 and c = 1
    U5  normalization identities A_z and A_x on the grid
    U6  α-sweep envelope: max χ = 2p_e at 0, π/4, π/2 for p_e ∈ {0.01, 0.05, 0.10}
    U7  dip at α = π/8 and the two-point sweep
    U8  χ(α) = χ(π/2 − α) and χ^z(0) = χ^x(π/4)
    U9  standard Holevo diagnostic within [0, 1]
    U10 guessing masses stay symmetric for θ ≠ 0

  Oracle
    O1  c = 1 → I₄, c = 0 → CNOT structure, c = 0.8 unitary
    O2  simulate reproduces the evolve values
    O3  verify_grid on the default grid passes below 1e−10
    O4  minimal 2×2×2 grid passes
    O5  injected error makes the grid fail
    O6  unitary is block-diagonal in the signal basis for every grid (c, θ)
    O7  oracle outcome probabilities complete on the full grid
═══════════════════════════════════════════════════════════════════
"""

import math

import numpy as np

from check_harness import check, run_module
from qkd_linalg import (
    DensityOperator, StateVector, binary_entropy, entropy_pair, hadamard,
    inner, von_neumann_entropy,
)
from unitary_oracle import build_unitary, simulate, verify_grid
from usd_leakage import (
    GuessMatrix, chi_basis, chi_total, guess_matrix, holevo_standard,
    sweep_alpha, usd_success,
)
from weak_attack import (
    AttackParams, attack_params_from_ber, balanced_attack, ber_lower_bound,
    bob_state, eve_frame, evolve, mdi_attack, mdi_leak_bound, mub_states,
    received_state,
)

GRID_ALPHAS = np.linspace(0.0, math.pi / 2, 9)
GRID_CS = np.linspace(0.0, 1.0, 6)
GRID_THETAS = np.linspace(0.0, math.pi / 2, 3)


def _grid():
    for alpha in GRID_ALPHAS:
        for c in GRID_CS:
            for theta in GRID_THETAS:
                yield AttackParams(float(alpha), float(c), float(theta))


# ═══════════════════════════════════════════════════════
# LINEAR ALGEBRA
# ═══════════════════════════════════════════════════════

def test_inner_products():
    e0, e1 = StateVector.basis(2, 0), StateVector.basis(2, 1)
    plus = StateVector.from_amplitudes([1, 1], normalize=True)
    check("L1  ⟨e0|e0⟩ = 1", abs(inner(e0, e0) - 1) < 1e-15, 1, inner(e0, e0))
    check("L1  ⟨e0|e1⟩ = 0", abs(inner(e0, e1)) < 1e-15, 0, inner(e0, e1))
    check("L1  ⟨+|0⟩ = 1/√2", abs(inner(plus, e0) - 1 / math.sqrt(2)) < 1e-12,
          0.70711, inner(plus, e0))


def test_inner_symmetry_and_unitary():
    a = StateVector.from_amplitudes([0.6, 0.8j], normalize=True)
    b = StateVector.from_amplitudes([1 + 1j, 0.5], normalize=True)
    check("L2  ⟨a|b⟩ = conj⟨b|a⟩", abs(inner(a, b) - inner(b, a).conjugate()) < 1e-15,
          inner(b, a).conjugate(), inner(a, b))
    h = hadamard()
    check("L2  H preserves ⟨a|b⟩", abs(inner(h.apply(a), h.apply(b)) - inner(a, b)) < 1e-10,
          inner(a, b), inner(h.apply(a), h.apply(b)))


def test_binary_entropy():
    check("L3  H(0.5) = 1", abs(binary_entropy(0.5) - 1.0) < 1e-15, 1.0, binary_entropy(0.5))
    check("L3  H(0) = 0", binary_entropy(0.0) == 0.0, 0.0, binary_entropy(0.0))
    check("L3  H(0.11) ≈ 0.49992", abs(binary_entropy(0.11) - 0.49992) < 1e-4,
          0.49992, binary_entropy(0.11))
    check("L3  H(x, 1−x) = H(x)", abs(entropy_pair(0.3, 0.7) - binary_entropy(0.3)) < 1e-15)


def test_von_neumann_entropy():
    mixed = DensityOperator.diagonal([0.5, 0.5])
    pure = StateVector.from_amplitudes([1, 1j], normalize=True).projector()
    skewed = DensityOperator.diagonal([0.9, 0.1])
    check("L4  S(I/2) = 1", abs(von_neumann_entropy(mixed) - 1.0) < 1e-12, 1.0, von_neumann_entropy(mixed))
    check("L4  S(pure) = 0", abs(von_neumann_entropy(pure)) < 1e-10, 0.0, von_neumann_entropy(pure))
    check("L4  S(diag(0.9, 0.1)) ≈ 0.46900", abs(von_neumann_entropy(skewed) - 0.46900) < 1e-4,
          0.46900, von_neumann_entropy(skewed))


def test_von_neumann_matches_binary():
    worst = 0.0
    for p in np.linspace(0.0, 1.0, 101):
        p = float(p)
        worst = max(worst, abs(von_neumann_entropy(DensityOperator.diagonal([p, 1 - p])) - binary_entropy(p)))
    check("L5  S(diag(p, 1−p)) = H(p) on a 0.01 grid", worst < 1e-10, "< 1e-10", worst)


def test_rejects_invalid_objects():
    def raises(fn):
        try:
            fn()
        except ValueError:
            return True
        return False

    check("L6  dimension 3 rejected", raises(lambda: StateVector([1, 0, 0])))
    check("L6  non-unit 'normalized' state rejected", raises(lambda: StateVector([1, 1], normalized=True)))
    check("L6  non-Hermitian density rejected", raises(lambda: DensityOperator([[0.5, 0.3], [0.0, 0.5]])))
    check("L6  trace ≠ 1 rejected", raises(lambda: DensityOperator.diagonal([0.5, 0.6])))
    check("L6  negative eigenvalue rejected", raises(lambda: DensityOperator.diagonal([1.2, -0.2])))
    check("L6  dimension mismatch in inner", raises(lambda: inner(StateVector.basis(2, 0), StateVector.basis(4, 0))))
    check("L6  H(p) outside [0, 1] rejected", raises(lambda: binary_entropy(1.2)))


# ═══════════════════════════════════════════════════════
# ATTACK CHANNEL
# ═══════════════════════════════════════════════════════

def test_mub_states():
    at0 = mub_states(0.0)
    check("A1  α=0: |0⟩ = |p⟩", np.allclose(at0['0'].amps, [1, 0]), [1, 0], at0['0'].amps)
    check("A1  α=0: |1⟩ ∥ |q⟩", abs(abs(at0['1'].amps[1]) - 1) < 1e-15, 1, abs(at0['1'].amps[1]))
    at45 = mub_states(math.pi / 4)
    check("A1  α=π/4: |0⟩ = (|p⟩+|q⟩)/√2", np.allclose(at45['0'].amps, [1 / math.sqrt(2)] * 2))
    check("A1  α=π/4: |+⟩ = |p⟩", np.allclose(at45['+'].amps, [1, 0]), [1, 0], at45['+'].amps)
    for alpha in (0.0, 0.3, 1.1):
        m = mub_states(alpha)
        overlap = abs(inner(m['0'], m['+'])) ** 2
        check(f"A1  |⟨0|+⟩|² = ½ at α={alpha}", abs(overlap - 0.5) < 1e-12, 0.5, overlap)


def test_eve_frame():
    e_p, e_q = eve_frame(1.0, 0.0)
    check("A2  c=1: E_q = E_p", np.allclose(e_p.amps, e_q.amps))
    e_p, e_q = eve_frame(0.0, 0.0)
    check("A2  c=0: orthogonal", abs(inner(e_p, e_q)) < 1e-15, 0, inner(e_p, e_q))
    e_p, e_q = eve_frame(0.8, 0.0)
    check("A2  c=0.8: overlap 0.8", abs(inner(e_p, e_q) - 0.8) < 1e-15, 0.8, inner(e_p, e_q))
    e_p, e_q = eve_frame(0.8, 0.5)
    check("A2  phase carried on E_q", abs(inner(e_p, e_q) - 0.8 * np.exp(0.5j)) < 1e-15)


def test_evolve_quarter_pi():
    out = evolve(AttackParams(math.pi / 4, 0.8, 0.0))
    check("A3  p01 = 0.1", abs(out.probs.p01 - 0.1) < 1e-12, 0.1, out.probs.p01)
    check("A3  ppm = 0", abs(out.probs.ppm) < 1e-12, 0.0, out.probs.ppm)
    check("A3  ber_total = 0.05", abs(out.ber_total - 0.05) < 1e-12, 0.05, out.ber_total)


def test_evolve_zero_alpha():
    out = evolve(AttackParams(0.0, 0.6, 0.0))
    check("A4  p01 = 0", out.probs.p01 == 0.0, 0.0, out.probs.p01)
    check("A4  ppm = 0.2", abs(out.probs.ppm - 0.2) < 1e-12, 0.2, out.probs.ppm)
    check("A4  ber_total = 0.1", abs(out.ber_total - 0.1) < 1e-12, 0.1, out.ber_total)
    check("A4  E_{0,1} absent at α=0", out.eve_states.get('0', '1') is None)


def test_no_disturbance_at_unit_overlap():
    for alpha in (0.0, 0.4, math.pi / 4):
        out = evolve(AttackParams(alpha, 1.0, 0.0))
        flips = (out.probs.p01, out.probs.p10, out.probs.ppm, out.probs.pmp)
        check(f"A5  c=1, α={alpha:.3f}: no flips", max(flips) < 1e-15, 0.0, max(flips))
        check(f"A5  c=1, α={alpha:.3f}: BER 0", out.ber_total < 1e-15, 0.0, out.ber_total)


def test_ber_equality_and_alpha_independence():
    worst_eq, worst_alpha = 0.0, 0.0
    for c in GRID_CS:
        for theta in GRID_THETAS:
            bers = [evolve(AttackParams(float(a), float(c), float(theta))).ber_total for a in GRID_ALPHAS]
            bound = ber_lower_bound(float(c), float(theta))
            worst_eq = max(worst_eq, max(abs(b - bound) for b in bers))
            worst_alpha = max(worst_alpha, max(bers) - min(bers))
    check("A6  ber_total = (1 − c·cos θ)/4 on the grid", worst_eq < 1e-10, "< 1e-10", worst_eq)
    check("A6  ber_total independent of α", worst_alpha < 1e-12, "< 1e-12", worst_alpha)


def test_channel_completeness_and_states():
    worst_sum, worst_norm, worst_cross = 0.0, 0.0, 0.0
    for params in _grid():
        out = evolve(params)
        p = out.probs
        worst_sum = max(worst_sum, abs(p.p00 + p.p01 - 1), abs(p.ppp + p.ppm - 1))
        for state in out.eve_states.present().values():
            worst_norm = max(worst_norm, abs(state.norm_sq() - 1))
        e01, e10 = out.eve_states.get('0', '1'), out.eve_states.get('1', '0')
        if e01 is not None and e10 is not None:
            worst_cross = max(worst_cross, float(np.max(np.abs(e01.amps - e10.amps))))
    check("A7  p00 + p01 = ppp + ppm = 1", worst_sum < 1e-12, "< 1e-12", worst_sum)
    check("A7  present states normalized", worst_norm < 1e-12, "< 1e-12", worst_norm)
    check("A7  E_{0,1} = E_{1,0}", worst_cross < 1e-12, "< 1e-12", worst_cross)


def test_ber_lower_bound():
    check("A8  (1, 0) → 0", ber_lower_bound(1.0, 0.0) == 0.0)
    check("A8  (0.8, 0) → 0.05", abs(ber_lower_bound(0.8, 0.0) - 0.05) < 1e-15)
    check("A8  (0.8, π/2) → 0.25", abs(ber_lower_bound(0.8, math.pi / 2) - 0.25) < 1e-15)


def test_bob_state():
    undisturbed = bob_state(AttackParams(0.3, 1.0, 0.0))
    check("A9  c=1 → I/2", np.allclose(undisturbed.entries, np.eye(2) / 2, atol=1e-12))
    rho = bob_state(AttackParams(math.pi / 4, 0.8, 0.0))
    eig = rho.eigenvalues()
    check("A9  α=π/4: eigenvalues in [0, 1]", eig.min() > -1e-12 and eig.max() < 1 + 1e-12, "[0, 1]", eig)
    params = AttackParams(0.0, 0.6, 0.0)
    plus = mub_states(0.0)['+']
    value = bob_state(params).probability(plus)
    # the uniform four-state ensemble stays I/2 whatever the channel does
    check("A9  α=0, c=0.6: ⟨+|ρ|+⟩ = 0.5", abs(value - 0.5) < 1e-12, 0.5, value)


def test_received_state():
    params = AttackParams(0.3, 0.7, 0.0)
    out = evolve(params)
    mub = mub_states(params.alpha)
    rho0 = received_state(params, '0')
    rho_plus = received_state(params, '+')
    check("A10 ⟨0|ρ_0|0⟩ = p00", abs(rho0.probability(mub['0']) - out.probs.p00) < 1e-12,
          out.probs.p00, rho0.probability(mub['0']))
    check("A10 ⟨1|ρ_0|1⟩ = p01", abs(rho0.probability(mub['1']) - out.probs.p01) < 1e-12,
          out.probs.p01, rho0.probability(mub['1']))
    check("A10 ⟨−|ρ_+|−⟩ = ppm", abs(rho_plus.probability(mub['-']) - out.probs.ppm) < 1e-12,
          out.probs.ppm, rho_plus.probability(mub['-']))


def test_balanced_attack():
    z, x = balanced_attack(AttackParams(0.0, 0.6, 0.0))
    check("A11 α=0, c=0.6 → (0.1, 0.1)", abs(z - 0.1) < 1e-12 and abs(x - 0.1) < 1e-12, (0.1, 0.1), (z, x))
    z, x = balanced_attack(AttackParams(0.2, 1.0, 0.0))
    check("A11 c=1 → (0, 0)", z < 1e-15 and x < 1e-15, (0, 0), (z, x))
    z, x = balanced_attack(AttackParams(math.pi / 4, 0.8, 0.0))
    check("A11 α=π/4, c=0.8 → (0.05, 0.05)", abs(z - 0.05) < 1e-12 and abs(x - 0.05) < 1e-12, (0.05, 0.05), (z, x))
    worst = max(abs(a - b) for a, b in (balanced_attack(p) for p in _grid()))
    check("A11 balanced BERs equal on the grid", worst < 1e-12, "< 1e-12", worst)


def test_mdi():
    check("A12 bound(0, 0) = 0", mdi_leak_bound(0.0, 0.0).leak_bound == 0.0)
    bound = mdi_leak_bound(0.02, 0.02).leak_bound
    check("A12 bound(0.02, 0.02) = 0.08", bound == 0.08, 0.08, bound)
    bound = mdi_leak_bound(0.05, 0.03).leak_bound
    check("A12 bound(0.05, 0.03) = 0.16", abs(bound - 0.16) < 1e-15, 0.16, bound)
    outcome = mdi_attack(attack_params_from_ber(0.02, 0.0), attack_params_from_ber(0.02, 0.0))
    check("A12 two 2% channels → bound 0.08", abs(outcome.bound.leak_bound - 0.08) < 1e-12,
          0.08, outcome.bound.leak_bound)
    check("A12 aligned channels", outcome.aligned)
    skewed = mdi_attack(attack_params_from_ber(0.02, 0.0), attack_params_from_ber(0.02, 0.3))
    check("A12 different α flagged", not skewed.aligned)
    outcome = mdi_attack(AttackParams(0.0, 0.8, 0.0), AttackParams(0.0, 0.8, 0.0))
    raw = (outcome.channel_a.ber_z, outcome.channel_a.ber_x)
    check("A12 plain T on a channel: unequal BERs (0, 0.1)",
          abs(raw[0]) < 1e-15 and abs(raw[1] - 0.1) < 1e-12, (0.0, 0.1), raw)
    for name, pair in (('a', outcome.balanced_a), ('b', outcome.balanced_b)):
        check(f"A12 balanced channel {name}: (0.05, 0.05)",
              all(abs(v - 0.05) < 1e-12 for v in pair), (0.05, 0.05), pair)


def test_params_from_ber():
    params = attack_params_from_ber(0.05, 0.2)
    check("A13 c = 1 − 4p_e", abs(params.overlap_c - 0.8) < 1e-15, 0.8, params.overlap_c)
    check("A13 θ = 0", params.theta == 0.0)
    try:
        attack_params_from_ber(0.3)
        rejected = False
    except ValueError:
        rejected = True
    check("A13 p_e = 0.3 rejected", rejected)


# ═══════════════════════════════════════════════════════
# USD LEAKAGE
# ═══════════════════════════════════════════════════════

def test_usd_success():
    check("U1  (0, quantum) → 1", usd_success(0.0) == 1.0)
    check("U1  (1, quantum) → 0", usd_success(1.0) == 0.0)
    check("U1  (0.8, quantum) → 0.2", abs(usd_success(0.8) - 0.2) < 1e-15, 0.2, usd_success(0.8))
    value = usd_success(0.8, 'conventional')
    check("U1  (0.8, conventional) → 0.18", abs(value - 0.18) < 1e-15, 0.18, value)


def test_guess_matrices():
    gz = guess_matrix(evolve(attack_params_from_ber(0.05, 0.0)), 'Z')
    check("U2  α=0 Z: p_right = 0.2", abs(gz.p_right - 0.2) < 1e-12, 0.2, gz.p_right)
    check("U2  α=0 Z: p_wrong = 0", abs(gz.p_wrong) < 1e-15, 0.0, gz.p_wrong)
    check("U2  α=0 Z: A = 4p_e", abs(gz.norm_A - 0.2) < 1e-12, 0.2, gz.norm_A)
    gz = guess_matrix(evolve(attack_params_from_ber(0.05, math.pi / 4)), 'Z')
    check("U2  α=π/4 Z: p_right = 0.05", abs(gz.p_right - 0.05) < 1e-12, 0.05, gz.p_right)
    check("U2  α=π/4 Z: p_wrong = 0.05", abs(gz.p_wrong - 0.05) < 1e-12, 0.05, gz.p_wrong)
    check("U2  α=π/4 Z: A = 2p_e", abs(gz.norm_A - 0.1) < 1e-12, 0.1, gz.norm_A)
    gz = guess_matrix(evolve(AttackParams(0.3, 1.0, 0.0)), 'Z')
    check("U2  c=1 → zero matrix", gz.is_zero)


def test_chi_basis():
    check("U3  (0.2, 0, 0.2) → 0.2", abs(chi_basis(GuessMatrix('Z', 0.2, 0.0, 0.2)) - 0.2) < 1e-15)
    check("U3  (0.05, 0.05, 0.1) → 0", abs(chi_basis(GuessMatrix('Z', 0.05, 0.05, 0.1))) < 1e-15)
    check("U3  zero matrix → 0", chi_basis(GuessMatrix('X', 0.0, 0.0, 0.0, is_zero=True)) == 0.0)


def test_chi_total_values():
    r = chi_total(attack_params_from_ber(0.05, 0.0))
    check("U4  α=0: χ^z = 0.2", abs(r.chi_z - 0.2) < 1e-10, 0.2, r.chi_z)
    check("U4  α=0: χ^x = 0", abs(r.chi_x) < 1e-10, 0.0, r.chi_x)
    check("U4  α=0: χ = 2p_e", abs(r.chi_total - 0.1) < 1e-10, 0.1, r.chi_total)
    r = chi_total(attack_params_from_ber(0.05, math.pi / 4))
    check("U4  α=π/4: χ^z = 0", abs(r.chi_z) < 1e-10, 0.0, r.chi_z)
    check("U4  α=π/4: χ^x = 0.2", abs(r.chi_x - 0.2) < 1e-10, 0.2, r.chi_x)
    check("U4  α=π/4: χ = 2p_e", abs(r.chi_total - 0.1) < 1e-10, 0.1, r.chi_total)
    r = chi_total(attack_params_from_ber(0.0, 0.7))
    check("U4  c=1: χ = 0", r.chi_total == 0.0, 0.0, r.chi_total)


def test_normalization_identities():
    worst = 0.0
    for p_e in (0.01, 0.05, 0.1, 0.2):
        for alpha in np.linspace(0.0, math.pi / 2, 17):
            out = evolve(attack_params_from_ber(p_e, float(alpha)))
            k = math.sin(2 * alpha) ** 2
            gz, gx = guess_matrix(out, 'Z'), guess_matrix(out, 'X')
            worst = max(worst,
                        abs(gz.p_right + gz.p_wrong - (4 * p_e - 2 * p_e * k)),
                        abs(gx.p_right + gx.p_wrong - 2 * p_e * (1 + k)))
    check("U5  A_z = 4p_e − 2p_e sin²2α, A_x = 2p_e(1 + sin²2α)", worst < 1e-10, "< 1e-10", worst)


def test_sweep_envelope():
    extremal = {0, 128, 256}
    for p_e in (0.01, 0.05, 0.10):
        rows = sweep_alpha(p_e, 257)
        chis = [r.chi_total for r in rows]
        peak = max(chis)
        check(f"U6  p_e={p_e}: 257 rows", len(rows) == 257, 257, len(rows))
        check(f"U6  p_e={p_e}: max χ = 2p_e", abs(peak - 2 * p_e) < 1e-9, 2 * p_e, peak)
        check(f"U6  p_e={p_e}: max at 0, π/4, π/2", chis.index(peak) in extremal, extremal, chis.index(peak))
        tied = all(abs(chis[i] - peak) < 1e-9 for i in extremal)
        check(f"U6  p_e={p_e}: all three extremal points reach 2p_e", tied)
        check(f"U6  p_e={p_e}: χ ≤ 2p_e + 1e−9 everywhere", all(0 <= c <= 2 * p_e + 1e-9 for c in chis))


def test_sweep_dip_and_endpoints():
    rows = sweep_alpha(0.05, 257)
    dip = rows[64]
    check("U7  row 64 is α = π/8", abs(dip.alpha - math.pi / 8) < 1e-12, math.pi / 8, dip.alpha)
    check("U7  χ(π/8) < 0.1", dip.chi_total < 0.1 - 1e-6, "< 0.1", dip.chi_total)
    rows = sweep_alpha(0.05, 2)
    check("U7  two-point sweep hits 0 and π/2",
          rows[0].alpha == 0.0 and abs(rows[1].alpha - math.pi / 2) < 1e-15)
    check("U7  both endpoints χ = 0.1", all(abs(r.chi_total - 0.1) < 1e-9 for r in rows),
          0.1, [r.chi_total for r in rows])


def test_sweep_symmetry():
    rows = sweep_alpha(0.05, 65)
    worst = max(abs(rows[i].chi_total - rows[-1 - i].chi_total) for i in range(len(rows)))
    check("U8  χ(α) = χ(π/2 − α)", worst < 1e-10, "< 1e-10", worst)
    cz = chi_total(attack_params_from_ber(0.05, 0.0)).chi_z
    cx = chi_total(attack_params_from_ber(0.05, math.pi / 4)).chi_x
    check("U8  χ^z(0) = χ^x(π/4)", abs(cz - cx) < 1e-10, cz, cx)


def test_standard_holevo():
    values = []
    for alpha in (0.0, 0.3, math.pi / 4):
        out = evolve(attack_params_from_ber(0.05, alpha))
        values += [holevo_standard(out, 'Z'), holevo_standard(out, 'X')]
    check("U9  0 ≤ χ_vN ≤ 1", all(-1e-12 <= v <= 1 + 1e-12 for v in values), "[0, 1]", values)


def test_guess_symmetry_with_phase():
    out = evolve(AttackParams(0.3, 0.7, 0.7))
    gz, gx = guess_matrix(out, 'Z'), guess_matrix(out, 'X')
    gap = max(abs(gz.p_right - gz.p_right_alt), abs(gx.p_right - gx.p_right_alt))
    check("U10 p_0^r = p_1^r at θ = 0.7", gap < 1e-12, "< 1e-12", gap)


# ═══════════════════════════════════════════════════════
# ORACLE
# ═══════════════════════════════════════════════════════

def test_build_unitary():
    ident = build_unitary(1.0, 0.0).matrix.matrix
    check("O1  c=1 → I₄", np.allclose(ident, np.eye(4), atol=1e-15))
    cnot = build_unitary(0.0, 0.0).matrix.matrix
    expected = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    check("O1  c=0 → CNOT", np.allclose(cnot, expected, atol=1e-15), expected, cnot)
    u = build_unitary(0.8, 0.0).matrix.matrix
    err = float(np.max(np.abs(u.conj().T @ u - np.eye(4))))
    check("O1  c=0.8 unitary", err < 1e-12, "< 1e-12", err)


def test_unitary_block_structure():
    off_block, column_err = 0.0, 0.0
    for c in GRID_CS:
        for theta in GRID_THETAS:
            m = build_unitary(float(c), float(theta)).matrix.matrix
            off_block = max(off_block, float(np.max(np.abs(m[:2, 2:]))), float(np.max(np.abs(m[2:, :2]))))
            e_p, e_q = eve_frame(float(c), float(theta))
            column_err = max(column_err, float(np.max(np.abs(m[:2, 0] - e_p.amps))),
                             float(np.max(np.abs(m[2:, 2] - e_q.amps))))
    check("O6  off-diagonal signal blocks exactly zero on the (c, θ) grid", off_block == 0.0, 0.0, off_block)
    check("O6  |p⟩|e0⟩ → |p⟩|E_p⟩ and |q⟩|e0⟩ → |q⟩|E_q⟩", column_err < 1e-15, "< 1e-15", column_err)


def test_oracle_completeness():
    worst = 0.0
    for params in _grid():
        p = simulate(params).probs
        for total in (p.p00 + p.p01, p.p10 + p.p11, p.ppp + p.ppm, p.pmp + p.pmm):
            worst = max(worst, abs(total - 1.0))
    check("O7  oracle outcomes per sent state sum to 1 on the 9×6×3 grid", worst < 1e-12, "< 1e-12", worst)


def test_simulate_values():
    out = simulate(AttackParams(math.pi / 4, 0.8, 0.0))
    check("O2  α=π/4, c=0.8: p01 = 0.1", abs(out.probs.p01 - 0.1) < 1e-10, 0.1, out.probs.p01)
    out = simulate(AttackParams(0.0, 0.6, 0.0))
    check("O2  α=0, c=0.6: ppm = 0.2", abs(out.probs.ppm - 0.2) < 1e-10, 0.2, out.probs.ppm)
    check("O2  α=0, c=0.6: BER 0.1", abs(out.ber_total - 0.1) < 1e-10, 0.1, out.ber_total)
    out = simulate(AttackParams(0.5, 1.0, 0.0))
    states = list(out.eve_states.present().values())
    same = all(abs(abs(inner(states[0], s)) - 1) < 1e-12 for s in states)
    check("O2  c=1: no flips, Eve states all equal", out.ber_total < 1e-15 and same)


def test_verify_default_grid():
    report = verify_grid()
    check("O3  default grid size 162", report.grid_size == 162, 162, report.grid_size)
    check("O3  max_prob_error < 1e−10", report.max_prob_error < 1e-10, "< 1e-10", report.max_prob_error)
    check("O3  max_state_error < 1e−9", report.max_state_error < 1e-9, "< 1e-9", report.max_state_error)
    check("O3  report passes", report.passed)


def test_verify_minimal_grid():
    report = verify_grid(2, 2, 2)
    check("O4  2×2×2 grid passes", report.passed and report.grid_size == 8, "pass on 8 points", report.summary())


def test_verify_injected_error():
    report = verify_grid(2, 2, 2, inject_error=True)
    check("O5  injected error fails", not report.passed, "fail", report.summary())
    check("O5  worst point reported", report.worst_point is not None)


if __name__ == "__main__":
    run_module(globals(), "Attack engine checks")
