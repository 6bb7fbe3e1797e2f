"""Two-basis measurement models on a qubit x d_B state and the statistics
they induce.

Alice's side is a qubit with two-outcome measurements for settings ``z``
(key) and ``x`` (check); Bob's side has arbitrary dimension up to 8.  The
reductions defined here (joint tables, correlators, environment states)
are everything the certifier and the brute-force attacks consume.
"""

from dataclasses import dataclass

import numpy as np

from .entropy import CqStatePair
from .linalg import (
    EIG_FLOOR,
    ValidationError,
    check_hermitian,
    hermitian_eig,
    purify,
    tensor_product,
)

SETTINGS = ("z", "x")
MAX_BOB_DIM = 8


def _as_effects(povms, party):
    out = {}
    for u in SETTINGS:
        if u not in povms:
            raise ValidationError(f"{party} is missing setting {u!r}")
        pair = povms[u]
        if len(pair) != 2:
            raise ValidationError(f"{party} setting {u!r} must have two effects")
        out[u] = tuple(np.asarray(e, dtype=np.complex128) for e in pair)
    return out


@dataclass(frozen=True)
class MeasurementModel:
    rho: np.ndarray
    alice: dict
    bob: dict

    def __post_init__(self):
        object.__setattr__(self, "rho", np.asarray(self.rho, dtype=np.complex128))
        object.__setattr__(self, "alice", _as_effects(self.alice, "Alice"))
        object.__setattr__(self, "bob", _as_effects(self.bob, "Bob"))

    @property
    def d_bob(self):
        return self.rho.shape[0] // 2


def check_model(m):
    rho = check_hermitian(m.rho, name="state")
    dim = rho.shape[0]
    if dim < 2 or dim % 2 != 0:
        raise ValidationError(f"state dimension {dim} is not 2 x d_B")
    d_b = dim // 2
    if d_b > MAX_BOB_DIM:
        raise ValidationError(f"Bob dimension {d_b} exceeds the supported {MAX_BOB_DIM}")
    w, _ = hermitian_eig(rho, name="state")
    if w[-1] < EIG_FLOOR:
        raise ValidationError(f"state is not positive semidefinite (min eig {w[-1]:.3e})")
    tr = float(np.real(np.trace(rho)))
    if abs(tr - 1.0) > 1e-10:
        raise ValidationError(f"state trace {tr} differs from 1")
    for party, povms, d in (("Alice", m.alice, 2), ("Bob", m.bob, d_b)):
        for u in SETTINGS:
            total = np.zeros((d, d), dtype=np.complex128)
            for i, eff in enumerate(povms[u]):
                if eff.shape != (d, d):
                    raise ValidationError(
                        f"{party} effect {i} for setting {u!r} has shape "
                        f"{eff.shape}, expected {(d, d)}"
                    )
                ew, _ = hermitian_eig(eff, name=f"{party} effect {i} ({u!r})")
                if ew[-1] < EIG_FLOOR:
                    raise ValidationError(
                        f"{party} effect {i} for setting {u!r} is not PSD "
                        f"(min eig {ew[-1]:.3e})"
                    )
                total += eff
            if np.max(np.abs(total - np.eye(d))) > 1e-10:
                raise ValidationError(
                    f"{party} effects for setting {u!r} do not sum to the identity"
                )
    return m


@dataclass(frozen=True)
class ProbabilityTable:
    """Joint outcome tables, one 2x2 block per setting pair (rows: Alice).

    ``marginal_tol`` is the no-signaling slack the tables are trusted to;
    exact models get the default, ingested data gets a statistical one.
    """

    zz: np.ndarray
    zx: np.ndarray
    xz: np.ndarray
    xx: np.ndarray
    marginal_tol: float = 1e-6

    def table(self, u, v):
        return getattr(self, u + v)

    def items(self):
        for u in SETTINGS:
            for v in SETTINGS:
                yield (u, v), self.table(u, v)


@dataclass(frozen=True)
class CorrelationSummary:
    """The eight first- and second-order correlators of a two-basis model."""

    a_z: float
    a_x: float
    b_z: float
    b_x: float
    e_zz: float
    e_zx: float
    e_xz: float
    e_xx: float

    def __post_init__(self):
        for name, val in self.__dict__.items():
            if abs(val) > 1.0 + 1e-12:
                raise ValidationError(f"correlator {name}={val} outside [-1, 1]")


@dataclass(frozen=True)
class PovmDecomposition:
    """Convex split of a qubit effect over its eigenbasis projectors and
    the trivial effects: m1 P0 + m2 P1 + m3 I (+ m4 times nothing)."""

    basis: np.ndarray
    m1: float
    m2: float
    m3: float
    m4: float

    @property
    def weights(self):
        return (self.m1, self.m2, self.m3, self.m4)


@dataclass(frozen=True)
class EveDecomposition:
    """Purification of the model state and the environment branches
    selected by Alice's key measurement."""

    psi: np.ndarray
    rho0_e: np.ndarray
    rho1_e: np.ndarray

    @property
    def pair(self):
        return CqStatePair(self.rho0_e, self.rho1_e)


def _expectation(op_a, op_b, rho):
    k = tensor_product(op_a, op_b)
    return complex(np.sum(k * rho.T))


def probabilities_from_model(m):
    """Joint tables P(a, b | u, v) = Tr[(M_a x N_b) rho]."""
    check_model(m)
    blocks = {}
    for u in SETTINGS:
        for v in SETTINGS:
            t = np.empty((2, 2))
            for a in range(2):
                for b in range(2):
                    val = _expectation(m.alice[u][a], m.bob[v][b], m.rho)
                    if abs(val.imag) > 1e-8:
                        raise ValidationError(
                            f"probability for outcomes ({a},{b}) under ({u},{v}) "
                            f"has imaginary part {val.imag:.3e}"
                        )
                    t[a, b] = min(max(val.real, 0.0), 1.0)
            blocks[u + v] = t
    return ProbabilityTable(**blocks)


def _check_no_signaling(t, tol):
    for u in SETTINGS:
        pa = {v: t.table(u, v).sum(axis=1) for v in SETTINGS}
        dev = float(np.max(np.abs(pa["z"] - pa["x"])))
        if dev > tol:
            raise ValidationError(
                f"Alice marginal for setting {u!r} differs across Bob settings "
                f"by {dev:.3e} (tolerance {tol:.3e})"
            )
    for v in SETTINGS:
        pb = {u: t.table(u, v).sum(axis=0) for u in SETTINGS}
        dev = float(np.max(np.abs(pb["z"] - pb["x"])))
        if dev > tol:
            raise ValidationError(
                f"Bob marginal for setting {v!r} differs across Alice settings "
                f"by {dev:.3e} (tolerance {tol:.3e})"
            )


def summarize(t):
    """Correlators from joint tables, with one-sided marginals averaged
    over the other side's setting after a no-signaling check."""
    for (u, v), block in t.items():
        block = np.asarray(block, dtype=float)
        if np.min(block) < -1e-12:
            raise ValidationError(f"table {u},{v} has a negative entry")
        if abs(float(np.sum(block)) - 1.0) > 1e-9:
            raise ValidationError(f"table {u},{v} is not normalized")
    tol = max(t.marginal_tol, 1e-12)
    _check_no_signaling(t, tol)

    def corr(block):
        return float(block[0, 0] + block[1, 1] - block[0, 1] - block[1, 0])

    def bias(p):
        return float(p[0] - p[1])

    a = {u: float(np.mean([bias(t.table(u, v).sum(axis=1)) for v in SETTINGS])) for u in SETTINGS}
    b = {v: float(np.mean([bias(t.table(u, v).sum(axis=0)) for u in SETTINGS])) for v in SETTINGS}
    return CorrelationSummary(
        a_z=a["z"], a_x=a["x"], b_z=b["z"], b_x=b["x"],
        e_zz=corr(t.zz), e_zx=corr(t.zx), e_xz=corr(t.xz), e_xx=corr(t.xx),
    )


def ingest_counts(raw, kind="auto"):
    """Per-setting 2x2 counts or probabilities -> normalized tables.

    Counts are normalized per setting pair and checked for no-signaling at
    the statistical tolerance 3/sqrt(N); pre-normalized probabilities are
    validated at the default tolerance.
    """
    blocks = {}
    totals = {}
    for u in SETTINGS:
        for v in SETTINGS:
            key = u + v
            if key not in raw:
                raise ValidationError(f"missing table for setting pair {key!r}")
            block = np.asarray(raw[key], dtype=float)
            if block.shape != (2, 2):
                raise ValidationError(f"table {key!r} must be 2x2, got {block.shape}")
            if np.min(block) < 0.0:
                raise ValidationError(f"table {key!r} has a negative entry")
            total = float(np.sum(block))
            if total <= 0.0:
                raise ValidationError(f"table {key!r} has no mass")
            blocks[key] = block
            totals[key] = total
    if kind == "auto":
        kind = "probabilities" if all(abs(n - 1.0) < 1e-6 for n in totals.values()) else "counts"
    if kind == "probabilities":
        for key, n in totals.items():
            if abs(n - 1.0) > 1e-6:
                raise ValidationError(f"table {key!r} sums to {n}, expected 1")
        tol = 1e-6
    elif kind == "counts":
        tol = max(1e-6, 3.0 / np.sqrt(min(totals.values())))
    else:
        raise ValidationError(f"unknown input kind {kind!r}")
    table = ProbabilityTable(
        **{key: block / totals[key] for key, block in blocks.items()},
        marginal_tol=tol,
    )
    _check_no_signaling(table, tol)
    return table


def povm_decompose(effect):
    """Split a qubit effect into eigenbasis projectors plus trivial effects.

    With eigenvalues mu1 >= mu2 the weights are (mu1, mu2, 0, 1-mu1-mu2)
    when mu1 + mu2 <= 1 and (1-mu2, 1-mu1, mu1+mu2-1, 0) otherwise, so at
    most one trivial weight is nonzero and all four sum to one.
    """
    effect = np.asarray(effect, dtype=np.complex128)
    if effect.shape != (2, 2):
        raise ValidationError(f"expected a qubit effect, got shape {effect.shape}")
    w, v = hermitian_eig(effect, name="effect")
    if w[-1] < EIG_FLOOR or w[0] > 1.0 + 1e-10:
        raise ValidationError(f"eigenvalues {w} are not within [0, 1]")
    mu1, mu2 = float(min(max(w[0], 0.0), 1.0)), float(min(max(w[1], 0.0), 1.0))
    if mu1 + mu2 <= 1.0:
        m1, m2, m3, m4 = mu1, mu2, 0.0, 1.0 - mu1 - mu2
    else:
        m1, m2, m3, m4 = 1.0 - mu2, 1.0 - mu1, mu1 + mu2 - 1.0, 0.0
    return PovmDecomposition(basis=v, m1=m1, m2=m2, m3=m3, m4=m4)


def eve_states(m):
    """Purify the model state and condition the purifying system on
    Alice's key measurement.

    The purifying dimension equals 2 d_B; the branch traces are the key
    outcome probabilities.
    """
    check_model(m)
    d_b = m.d_bob
    d_e = 2 * d_b
    psi = purify(m.rho).reshape(2, d_b, d_e)
    branches = []
    for a in range(2):
        r = np.einsum("ij,jbe,ibf->ef", m.alice["z"][a], psi, psi.conj())
        branches.append(0.5 * (r + r.conj().T))
    return EveDecomposition(psi=psi, rho0_e=branches[0], rho1_e=branches[1])


def _rank_one_projective_basis(m0, m1, setting):
    for i, eff in enumerate((m0, m1)):
        ew, _ = hermitian_eig(eff, name=f"effect {i}")
        if abs(ew[0] - 1.0) > 1e-8 or abs(ew[1]) > 1e-8:
            raise ValidationError(
                f"Alice measurement for setting {setting!r} is not rank-one projective"
            )
    w, v = hermitian_eig(m0 - m1, name="observable")
    return v[:, 0].copy(), v[:, 1].copy()


def w_basis_correlator(m):
    """Angle between Alice's two observables and the correlator of the
    conjugate (third) observable with Bob's check observable.

    Requires both Alice measurements to be rank-one projective.  The
    returned angle lies in [0, pi] and satisfies
    E_xx = cos(angle) E_zx + sin(angle) E_wx.
    """
    check_model(m)
    z0, z1 = _rank_one_projective_basis(*m.alice["z"], "z")
    x0, _ = _rank_one_projective_basis(*m.alice["x"], "x")
    c00 = np.vdot(x0, z0)
    ch = min(max(abs(c00), 0.0), 1.0)
    angle = 2.0 * np.arccos(ch)
    if abs(c00) > 1e-12:
        z0 = z0 * (c00.conjugate() / abs(c00))
    c01 = np.vdot(x0, z1)
    if abs(c01) > 1e-12:
        z1 = z1 * (c01.conjugate() / abs(c01))
    a_w = np.outer(z0, z1.conj()) + np.outer(z1, z0.conj())
    b_x = m.bob["x"][0] - m.bob["x"][1]
    e_wx = _expectation(a_w, b_x, m.rho)
    return float(angle), float(e_wx.real)


def bell_state(d_b=2):
    """Maximally entangled qubit pair embedded in 2 x d_B (extra Bob
    dimensions unused).  Entries are exact so the ideal statistics carry
    no roundoff."""
    rho = np.zeros((2 * d_b, 2 * d_b), dtype=np.complex128)
    for i in (0, d_b + 1):
        for j in (0, d_b + 1):
            rho[i, j] = 0.5
    return rho


def _pauli_povms():
    p0 = np.diag([1.0, 0.0]).astype(np.complex128)
    p1 = np.diag([0.0, 1.0]).astype(np.complex128)
    plus = 0.5 * np.array([[1.0, 1.0], [1.0, 1.0]], dtype=np.complex128)
    minus = 0.5 * np.array([[1.0, -1.0], [-1.0, 1.0]], dtype=np.complex128)
    return {"z": (p0, p1), "x": (plus, minus)}


def ideal_bb84_model():
    """Maximally entangled pair measured in matching bases on both sides."""
    povms = _pauli_povms()
    return MeasurementModel(rho=bell_state(), alice=povms, bob=povms)


def isotropic_model(v):
    """Ideal model mixed with white noise at visibility ``v``."""
    if not 0.0 <= v <= 1.0:
        raise ValidationError(f"visibility {v} outside [0, 1]")
    rho = v * bell_state() + (1.0 - v) * np.eye(4) / 4.0
    povms = _pauli_povms()
    return MeasurementModel(rho=rho, alice=povms, bob=povms)
