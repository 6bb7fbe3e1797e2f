"""Shannon and von Neumann entropies feeding the key-rate bounds.

All logarithms are base 2.  Spectral quantities accept subnormalized
operators and never rescale them; eigenvalues below 1e-12 contribute zero.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import ValidationError, psd_eigvals

SPECTRUM_CUTOFF = 1e-12


def _xlog2x(p, cutoff=0.0):
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    mask = p > cutoff
    out[mask] = p[mask] * np.log2(p[mask])
    return out


def binary_entropy(x):
    """Entropy of a bit with bias ``x``."""
    if x < -1e-12 or x > 1.0 + 1e-12:
        raise ValidationError(f"probability {x} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    return float(-_xlog2x(x) - _xlog2x(1.0 - x))


def phi(x):
    """Entropy drop of a bit with mean value ``x`` in [-1, 1]:
    1 - (1+x)/2 log2(1+x) - (1-x)/2 log2(1-x)."""
    if abs(x) > 1.0 + 1e-12:
        raise ValidationError(f"mean value {x} outside [-1, 1]")
    x = min(max(x, -1.0), 1.0)
    up, dn = 1.0 + x, 1.0 - x
    val = 1.0
    if up > 0.0:
        val -= 0.5 * up * np.log2(up)
    if dn > 0.0:
        val -= 0.5 * dn * np.log2(dn)
    return float(val)


def check_joint_table(table, name="table"):
    t = np.asarray(table, dtype=float)
    if t.shape != (2, 2):
        raise ValidationError(f"{name} must be 2x2, got shape {t.shape}")
    if np.min(t) < -1e-12:
        raise ValidationError(f"{name} has negative entry {np.min(t)}")
    total = float(np.sum(t))
    if abs(total - 1.0) > 1e-9:
        raise ValidationError(f"{name} sums to {total}, expected 1")
    return np.clip(t, 0.0, 1.0)


def shannon_conditional(table):
    """H(A|B) = H(AB) - H(B) of a 2x2 joint distribution (rows: A)."""
    t = check_joint_table(table)
    h_joint = float(-np.sum(_xlog2x(t)))
    h_b = float(-np.sum(_xlog2x(t.sum(axis=0))))
    return h_joint - h_b


def von_neumann(rho):
    """Spectral entropy -sum(lam log2 lam), evaluated literally on the
    (possibly subnormalized) operator."""
    w = psd_eigvals(rho, name="state")
    return float(-np.sum(_xlog2x(w, cutoff=SPECTRUM_CUTOFF)))


@dataclass(frozen=True)
class CqStatePair:
    """Unnormalized environment states conditioned on the two outcomes of
    the key measurement; their traces are the outcome probabilities."""

    rho0: np.ndarray
    rho1: np.ndarray


def check_cq_pair(pair):
    r0 = np.asarray(pair.rho0, dtype=np.complex128)
    r1 = np.asarray(pair.rho1, dtype=np.complex128)
    if r0.shape != r1.shape:
        raise ValidationError(f"branch shapes differ: {r0.shape} vs {r1.shape}")
    total = float(np.real(np.trace(r0) + np.trace(r1)))
    if abs(total - 1.0) > 1e-9:
        raise ValidationError(f"branch traces sum to {total}, expected 1")
    return r0, r1


def conditional_entropy(pair):
    """H(A|E) = S(rho0) + S(rho1) - S(rho0 + rho1) for a cq state with
    unnormalized branches."""
    r0, r1 = check_cq_pair(pair)
    return von_neumann(r0) + von_neumann(r1) - von_neumann(r0 + r1)


def devetak_winter(pair, zz_table):
    """One-way key rate H(A|E) - H(A|B); may be negative.

    The z,z joint table must reproduce the branch traces of ``pair`` as its
    row marginals (tolerance 1e-6).
    """
    r0, r1 = check_cq_pair(pair)
    t = check_joint_table(zz_table, name="z,z table")
    marg = t.sum(axis=1)
    tr0 = float(np.real(np.trace(r0)))
    tr1 = float(np.real(np.trace(r1)))
    if abs(marg[0] - tr0) > 1e-6 or abs(marg[1] - tr1) > 1e-6:
        raise ValidationError(
            f"table row marginals ({marg[0]:.8f}, {marg[1]:.8f}) do not match "
            f"branch traces ({tr0:.8f}, {tr1:.8f})"
        )
    return conditional_entropy(pair) - shannon_conditional(t)
