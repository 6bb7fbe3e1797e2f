"""Hermitian eigendecomposition backends.

Two interchangeable implementations of the one hot kernel in the package:

* ``compiled`` -- a Cython cyclic-Jacobi solver built at install time,
* ``python``   -- ``numpy.linalg.eigh``.

The compiled backend is preferred when present; set ``BB84SDI_KERNEL`` to
``python`` or ``compiled`` to force one.  Both return eigenvalues in
descending order together with a unitary matrix of column eigenvectors.
"""

import os

from . import _eigh_numpy

try:
    from . import _jacobi
except ImportError:
    _jacobi = None

_IMPLS = {"python": _eigh_numpy.eigh_cdouble}
if _jacobi is not None:
    _IMPLS["compiled"] = _jacobi.eigh_cdouble


def available_backends():
    return sorted(_IMPLS)


def use_backend(name):
    """Select the eigensolver backend by name. Intended for tests and
    benchmarks; normal code relies on the import-time default."""
    global _impl, _active
    if name not in _IMPLS:
        raise ValueError(f"unknown backend {name!r}, have {available_backends()}")
    _impl = _IMPLS[name]
    _active = name


def backend_name():
    return _active


def eigh(a):
    """Eigenvalues (descending) and eigenvectors of a Hermitian matrix."""
    return _impl(a)


_env = os.environ.get("BB84SDI_KERNEL", "").strip().lower()
if _env in ("", "auto"):
    use_backend("compiled" if "compiled" in _IMPLS else "python")
else:
    use_backend(_env)
