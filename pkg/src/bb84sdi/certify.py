"""Certified one-way key rates from two-basis correlators.

The certificate lower-bounds the key rate of any collective attack
compatible with the observed correlators, assuming only that the key-side
measurement device acts on a qubit.  When the correlators are too strong
for the plain bound to apply, Bob's check-basis correlators are scaled
down by the largest factor that restores its applicability; the scaling
factor is reported in the certificate.
"""

from dataclasses import dataclass

import numpy as np

from .entropy import binary_entropy, phi, shannon_conditional
from .linalg import ValidationError

CONDITION_TOL = 1e-12

VARIANTS = ("improved", "simplified")
HAB_MODES = ("phi_bound", "exact")


@dataclass(frozen=True)
class CertifyOptions:
    """``variant`` selects between the marginal-aware bound and the
    simpler one it dominates; ``hab_mode`` selects how the reconciliation
    term is charged (correlator bound or exact z,z table)."""

    variant: str = "improved"
    hab_mode: str = "phi_bound"
    zz_table: object = None


@dataclass(frozen=True)
class RateCertificate:
    raw_rate: float
    rate: float
    lam: float
    precondition_ok: bool
    condition_ok: bool
    variant: str
    hab_mode: str
    inputs: object


def shor_preskill(delta_x, delta_z):
    """Reference rate 1 - h(delta_x) - h(delta_z) for trusted qubit pairs."""
    return 1.0 - binary_entropy(delta_x) - binary_entropy(delta_z)


def projective_rate(s):
    """Rate for trusted rank-one projective measurements,
    1 - phi(sqrt(E_xx^2 - E_zx^2)) - phi(E_zz)."""
    if abs(s.e_xx) < abs(s.e_zx):
        raise ValidationError(
            f"|E_xx|={abs(s.e_xx)} must dominate |E_zx|={abs(s.e_zx)}"
        )
    return 1.0 - phi(np.sqrt(s.e_xx**2 - s.e_zx**2)) - phi(s.e_zz)


def condition_check(s):
    """(precondition, condition): the check correlator must strictly
    dominate Bob's marginal, and the correlators must be weak enough for
    the unscaled bound."""
    precondition = abs(s.e_xx) > abs(s.b_x)
    lhs = s.e_xx**2 + s.e_zx**2
    rhs = 1.0 - 2.0 * abs(s.a_z - s.e_zx * s.b_x) + s.a_z**2
    return precondition, bool(lhs <= rhs + CONDITION_TOL)


def _residual_pieces(s):
    # residual g(t) = 1 + a^2 - 2|a - t c| - t S, piecewise linear in
    # t = lambda^2 with a kink where the absolute value vanishes
    a = s.a_z
    c = s.e_zx * s.b_x
    big_s = s.e_xx**2 + s.e_zx**2
    bounds = [0.0, 1.0]
    if c != 0.0:
        kink = a / c
        if 0.0 < kink < 1.0:
            bounds = [0.0, kink, 1.0]
    pieces = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        sigma = 1.0 if a - 0.5 * (lo + hi) * c >= 0.0 else -1.0
        slope = 2.0 * sigma * c - big_s
        intercept = 1.0 + a**2 - 2.0 * sigma * a
        pieces.append((lo, hi, slope, intercept))
    return pieces


def solve_lambda(s):
    """Largest scaling factor in [0, 1] under which the scaled correlators
    satisfy the applicability condition.

    Returns 1 when no scaling is needed.  The equality for t = lambda^2 is
    piecewise linear with strictly negative slope, so the largest root is
    found exactly from the linear pieces.
    """
    precondition, condition = condition_check(s)
    if not precondition:
        raise ValidationError(
            f"|E_xx|={abs(s.e_xx)} does not dominate Bob's marginal |B_x|={abs(s.b_x)}"
        )
    if condition:
        return 1.0
    candidates = []
    for lo, hi, slope, intercept in _residual_pieces(s):
        if abs(slope) < 1e-15:
            if abs(intercept) <= CONDITION_TOL:
                candidates.append(hi)
            continue
        root = -intercept / slope
        if lo - 1e-12 <= root <= hi + 1e-12:
            candidates.append(min(max(root, 0.0), 1.0))
    if not candidates:
        raise RuntimeError("no scaling root found; residual should always have one")
    return float(np.sqrt(max(candidates)))


def certified_rate(s, opts=None):
    """Certificate for a correlation summary.

    A failed precondition yields a certificate with rate 0 rather than an
    error; the rate is clamped at 0 in every case.
    """
    if opts is None:
        opts = CertifyOptions()
    if opts.variant not in VARIANTS:
        raise ValidationError(f"unknown variant {opts.variant!r}")
    if opts.hab_mode not in HAB_MODES:
        raise ValidationError(f"unknown hab_mode {opts.hab_mode!r}")
    if opts.hab_mode == "exact":
        if opts.zz_table is None:
            raise ValidationError("hab_mode 'exact' requires the z,z joint table")
        h_ab = shannon_conditional(opts.zz_table)
    else:
        h_ab = phi(s.e_zz)

    precondition, condition = condition_check(s)
    if not precondition:
        return RateCertificate(
            raw_rate=0.0, rate=0.0, lam=0.0,
            precondition_ok=False, condition_ok=condition,
            variant=opts.variant, hab_mode=opts.hab_mode, inputs=s,
        )
    lam = solve_lambda(s)
    gain = max(lam**2 * (s.e_xx**2 - s.e_zx**2), 0.0)
    if opts.variant == "improved":
        raw = phi(s.a_z) - phi(np.sqrt(s.a_z**2 + gain)) - h_ab
    else:
        raw = 1.0 - phi(np.sqrt(gain)) - h_ab
    return RateCertificate(
        raw_rate=float(raw), rate=float(max(raw, 0.0)), lam=float(lam),
        precondition_ok=True, condition_ok=condition,
        variant=opts.variant, hab_mode=opts.hab_mode, inputs=s,
    )
