"""Dense complex linear algebra for small multipartite systems.

Operators are plain complex ndarrays; validity (Hermiticity, positivity,
trace bounds) is checked by the operations that rely on it instead of being
carried by wrapper types.  Tensor factors are ordered with the first factor
most significant, matching ``numpy.kron``.  Eigenvalues in ``[-1e-10, 0)``
are treated as roundoff and clamped to zero; anything lower is rejected.
"""

import numpy as np

from . import _kernel

HERMITICITY_TOL = 1e-10
EIG_FLOOR = -1e-10


class ValidationError(ValueError):
    """An input violates a documented precondition."""


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def as_matrix(a, name="matrix"):
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValidationError(f"{name} must be 2-dimensional, got shape {m.shape}")
    return m


def check_hermitian(m, tol=HERMITICITY_TOL, name="matrix"):
    m = as_matrix(m, name)
    if m.shape[0] != m.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {m.shape}")
    dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if dev > tol:
        raise ValidationError(f"{name} is not Hermitian (deviation {dev:.3e})")
    return m


def hermitian_eig(m, name="matrix"):
    """Eigenvalues in descending order and a unitary of column eigenvectors."""
    m = check_hermitian(m, name=name)
    return _kernel.eigh(m)


def psd_eigvals(m, name="operator"):
    """Eigenvalues of a PSD operator, descending, with roundoff negatives
    clamped to zero.  Rejects eigenvalues below the clamp window."""
    w, _ = hermitian_eig(m, name=name)
    if w.size and w[-1] < EIG_FLOOR:
        raise ValidationError(f"{name} is not positive semidefinite (min eig {w[-1]:.3e})")
    return np.maximum(w, 0.0)


def _psd_clean(w, name):
    """Clamp roundoff negatives and zero eigenvalues that are pure noise
    relative to the largest one, so square roots do not amplify them."""
    if w.size and w[-1] < EIG_FLOOR:
        raise ValidationError(f"{name} is not positive semidefinite (min eig {w[-1]:.3e})")
    w = np.maximum(w, 0.0)
    if w.size and w[0] > 0.0:
        w[w < 1e-13 * w[0]] = 0.0
    return w


def psd_sqrt(rho):
    """Positive square root of a PSD operator."""
    rho = check_hermitian(rho, name="operator")
    w, v = _kernel.eigh(rho)
    s = np.sqrt(_psd_clean(w, "operator"))
    return (v * s) @ v.conj().T


def tensor_product(a, b):
    """Kronecker product with the first factor most significant."""
    return np.kron(as_matrix(a, "first factor"), as_matrix(b, "second factor"))


def partial_trace(m, dims, keep):
    """Trace out every tensor factor not listed in ``keep``.

    ``dims`` gives the factor dimensions in order; ``keep`` is a set of
    factor indices whose relative order is preserved in the result.
    """
    dims = tuple(int(d) for d in dims)
    if any(d <= 0 for d in dims):
        raise ValidationError(f"factor dimensions must be positive, got {dims}")
    total = int(np.prod(dims))
    m = as_matrix(m, "operator")
    if m.shape != (total, total):
        raise ValidationError(
            f"operator shape {m.shape} does not match factor dimensions {dims}"
        )
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise ValidationError(f"keep indices {keep} out of range for {n} factors")
    resh = m.reshape(dims + dims)
    rows = list(range(n))
    cols = [i if i not in keep else n + i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    traced = np.einsum(resh, rows + cols, out)
    d_keep = int(np.prod([dims[i] for i in keep])) if keep else 1
    return traced.reshape(d_keep, d_keep)


def trace_norm(m):
    """Sum of singular values, via the spectrum of the Gram matrix."""
    m = as_matrix(m, "matrix")
    gram = m.conj().T @ m
    gram = 0.5 * (gram + gram.conj().T)
    w, _ = _kernel.eigh(gram)
    w = np.maximum(w, 0.0)
    if w.size and w[0] > 0.0:
        # Exact-zero singular values reappear as Gram eigenvalue noise of
        # order machine epsilon times the top eigenvalue; square-rooting
        # would inflate them to ~1e-8 of the top singular value, so cut
        # safely above that noise floor.
        w[w < 1e-14 * w[0]] = 0.0
    return float(np.sum(np.sqrt(w)))


def trace_norm_2x2(m):
    """Closed-form trace norm of a 2x2 matrix.

    With s1, s2 the singular values, s1^2 + s2^2 is the squared Frobenius
    norm and s1*s2 = |det|, so (s1 + s2)^2 = ||m||_F^2 + 2|det|.
    """
    m = as_matrix(m, "matrix")
    if m.shape != (2, 2):
        raise ValidationError(f"expected a 2x2 matrix, got shape {m.shape}")
    t = float(np.sum(np.abs(m) ** 2))
    root_d = abs(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    return float(np.sqrt(t + 2.0 * root_d))


def fidelity(rho, sigma):
    """Trace norm of sqrt(rho) sqrt(sigma); defined for subnormalized
    operators without any rescaling."""
    rho = as_matrix(rho, "first operator")
    sigma = as_matrix(sigma, "second operator")
    if rho.shape != sigma.shape:
        raise ValidationError(f"operator shapes differ: {rho.shape} vs {sigma.shape}")
    return trace_norm(psd_sqrt(rho) @ psd_sqrt(sigma))


def purify(rho):
    """Vector on system x ancilla (ancilla of equal dimension, least
    significant) whose system marginal reproduces ``rho``."""
    rho = check_hermitian(rho, name="state")
    tr = float(np.real(np.trace(rho)))
    if tr > 1.0 + 1e-10:
        raise ValidationError(f"state trace {tr} exceeds 1")
    w, v = _kernel.eigh(rho)
    s = np.sqrt(_psd_clean(w, "state"))
    return (v * s).reshape(-1)


def sample_ginibre_state(seed, dim, rank=None):
    """Random density operator dim x dim of the given rank (default full)."""
    rng = _rng(seed)
    if rank is None:
        rank = dim
    if rank <= 0:
        raise ValidationError(f"rank must be positive, got {rank}")
    if rank > dim:
        raise ValidationError(f"rank {rank} exceeds dimension {dim}")
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.real(np.trace(rho))


def sample_haar_unitary(seed, dim):
    """Haar-distributed unitary via phase-fixed QR of a Ginibre matrix."""
    rng = _rng(seed)
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    d = np.where(np.abs(np.diagonal(r)) == 0.0, 1.0, np.diagonal(r))
    return q * (d / np.abs(d))


def sample_povm_pair(seed, dim):
    """Random two-outcome POVM: a rotated diagonal effect and its complement."""
    rng = _rng(seed)
    u = sample_haar_unitary(rng, dim)
    mu = rng.uniform(0.0, 1.0, size=dim)
    m0 = (u * mu) @ u.conj().T
    m0 = 0.5 * (m0 + m0.conj().T)
    return m0, np.eye(dim) - m0


def sample_qubit_povm(seed):
    return sample_povm_pair(seed, 2)


def sample_projective_qubit_povm(seed):
    """Random rank-one projective qubit measurement."""
    u = sample_haar_unitary(_rng(seed), 2)
    m0 = np.outer(u[:, 0], u[:, 0].conj())
    m1 = np.outer(u[:, 1], u[:, 1].conj())
    return m0, m1
