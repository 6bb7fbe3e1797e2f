"""Release gate: every guarantee the package advertises, checked end to end.

Each test prints exactly one pass/fail line so the whole gate can be read
off a single screen of output (run pytest with -rA or -s to see the lines
for passing tests).
"""

import time

import numpy as np

from bb84sdi import (
    CertifyOptions,
    CorrelationSummary,
    certified_rate,
    condition_check,
    convexity_probe,
    counterexample_attack,
    fidelity_chain_check,
    lambda_bisection_oracle,
    lemma_scan,
    noise_sweep,
    noise_threshold,
    phi,
    probabilities_from_model,
    sample_condition_model,
    sample_projective_alice_model,
    solve_lambda,
    soundness_scan,
    summarize,
    w_basis_correlator,
)
from bb84sdi.linalg import trace_norm, trace_norm_2x2

FIELDS = ("a_z", "a_x", "b_z", "b_x", "e_zz", "e_zx", "e_xz", "e_xx")


def report(number, ok, detail):
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {number}: {detail}"


def make_summary(**kwargs):
    base = dict.fromkeys(FIELDS, 0.0)
    base.update(kwargs)
    return CorrelationSummary(**base)


def test_criterion_1_soundness_scan():
    start = time.perf_counter()
    rep = soundness_scan(2000, seed=7, d_bobs=(2, 3, 4))
    elapsed = time.perf_counter() - start
    ok = rep.min_gap >= -1e-7 and not rep.failures and elapsed < 60.0
    report(1, ok, f"2000 random attacks, d_B in 2..4: min soundness gap "
                  f"{rep.min_gap:.3e}, {elapsed:.1f}s")


def test_criterion_2_white_noise_reduction():
    grid = np.round(np.arange(0.01, 1.0 + 1e-9, 0.01), 10)
    dev = max(
        abs(r.certificate.rate - max(0.0, 1.0 - 2.0 * phi(r.visibility)))
        for r in noise_sweep(grid)
    )
    _, delta_star = noise_threshold()
    ok = dev <= 1e-12 and abs(delta_star - 0.1100) <= 5e-4
    report(2, ok, f"white-noise sweep max deviation {dev:.3e}; "
                  f"threshold error rate {delta_star:.6f}")


def test_criterion_3_counterexample():
    sample = counterexample_attack()
    s = sample.summary
    ok = (
        (s.a_z, s.e_zz, s.e_xx, s.e_zx) == (1.0, 1.0, 1.0, 0.0)
        and sample.certificate.lam == 0.0
        and sample.certificate.rate == 0.0
    )
    report(3, ok, "perfect-looking correlators from a leak-everything model "
                  "certify exactly zero")


def test_criterion_4_lemma_suites():
    rep = lemma_scan(500, seed=3)
    ok = all(g >= -1e-9 for g in rep.worst.values()) and rep.skipped == 0
    detail = ", ".join(f"{k} {v:.2e}" for k, v in sorted(rep.worst.items()))
    report(4, ok, f"500 instances per inequality, worst gaps: {detail}")


def test_criterion_5_closed_forms():
    rng = np.random.default_rng(41)
    norm_dev = 0.0
    for _ in range(1000):
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        norm_dev = max(norm_dev, abs(trace_norm_2x2(m) - trace_norm(m)))
    probes = [convexity_probe(y) for y in np.arange(0.0, 1.0, 0.05)]
    mid = max(p.max_midpoint_violation for p in probes)
    off_center = max(abs(p.argmin_x) for p in probes)
    ok = norm_dev <= 1e-10 and all(p.passed for p in probes)
    report(5, ok, f"2x2 trace-norm closed form dev {norm_dev:.3e}; convexity "
                  f"midpoint excess {mid:.3e}, worst |argmin| {off_center:.3e}")


def test_criterion_6_lambda_solver():
    rng = np.random.default_rng(59)
    checked, worst = 0, 0.0
    while checked < 500:
        a_z, b_x, e_zx, e_xx = rng.uniform(-1.0, 1.0, size=4)
        s = make_summary(a_z=a_z, b_x=b_x, e_zx=e_zx, e_xx=e_xx)
        precondition, condition = condition_check(s)
        if not precondition or condition:
            continue
        worst = max(worst, abs(solve_lambda(s) - lambda_bisection_oracle(s)))
        checked += 1
    ok = worst <= 1e-8
    report(6, ok, f"piecewise solution vs bisection on 500 clipped summaries: "
                  f"max |difference| {worst:.3e}")


def test_criterion_7_variant_dominance():
    rng = np.random.default_rng(67)
    floor = 0.0
    for _ in range(1000):
        s = make_summary(**dict(zip(FIELDS, rng.uniform(-1.0, 1.0, size=8))))
        improved = certified_rate(s, CertifyOptions(variant="improved")).rate
        simplified = certified_rate(s, CertifyOptions(variant="simplified")).rate
        floor = min(floor, improved - simplified)
    ok = floor >= -1e-12
    report(7, ok, f"improved variant minus simplified on 1000 summaries: "
                  f"min difference {floor:.3e}")


def test_criterion_8_fidelity_chain():
    worst = float("inf")
    for seed in range(500):
        m = sample_condition_model(seed, d_bob=2 + seed % 2)
        worst = min(worst, fidelity_chain_check(m))
    ok = worst >= -1e-9
    report(8, ok, f"correlator-vs-fidelity slack on 500 admissible models: "
                  f"min {worst:.3e}")


def test_criterion_9_conjugate_basis_identity():
    worst = 0.0
    for seed in range(500):
        m = sample_projective_alice_model(seed, 2 + seed % 3)
        s = summarize(probabilities_from_model(m))
        angle, e_wx = w_basis_correlator(m)
        resid = abs(s.e_xx - (np.cos(angle) * s.e_zx + np.sin(angle) * e_wx))
        worst = max(worst, resid)
    ok = worst <= 1e-9
    report(9, ok, f"check-basis decomposition on 500 projective models: "
                  f"max residual {worst:.3e}")
