"""Parity and contract tests for the eigensolver backends."""

import numpy as np
import pytest

from bb84sdi import _kernel


def random_hermitian(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (g + g.conj().T)


@pytest.fixture(params=_kernel.available_backends())
def backend(request):
    previous = _kernel.backend_name()
    _kernel.use_backend(request.param)
    yield request.param
    _kernel.use_backend(previous)


def test_python_backend_always_registered():
    assert "python" in _kernel.available_backends()
    assert _kernel.backend_name() in _kernel.available_backends()


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        _kernel.use_backend("fpga")


def test_descending_eigenvalues_and_reconstruction(backend):
    rng = np.random.default_rng(3)
    for dim in (1, 2, 3, 5, 8, 16):
        h = random_hermitian(rng, dim)
        w, v = _kernel.eigh(h)
        assert np.all(np.diff(w) <= 1e-14)
        assert np.max(np.abs((v * w) @ v.conj().T - h)) < 1e-12
        assert np.max(np.abs(v.conj().T @ v - np.eye(dim))) < 1e-12


def test_diagonal_matrix_exact(backend):
    w, v = _kernel.eigh(np.diag([0.3, 0.7]).astype(np.complex128))
    assert w[0] == pytest.approx(0.7, abs=1e-15)
    assert w[1] == pytest.approx(0.3, abs=1e-15)
    assert abs(abs(v[1, 0]) - 1.0) < 1e-15
    assert abs(abs(v[0, 1]) - 1.0) < 1e-15


def test_backends_agree():
    if len(_kernel.available_backends()) < 2:
        pytest.skip("compiled backend unavailable")
    rng = np.random.default_rng(11)
    for dim in (2, 4, 7, 12, 16):
        h = random_hermitian(rng, dim)
        results = {}
        previous = _kernel.backend_name()
        for name in _kernel.available_backends():
            _kernel.use_backend(name)
            results[name] = _kernel.eigh(h)
        _kernel.use_backend(previous)
        w_py, _ = results["python"]
        w_c, v_c = results["compiled"]
        assert np.max(np.abs(w_py - w_c)) < 1e-12
        assert np.max(np.abs((v_c * w_c) @ v_c.conj().T - h)) < 1e-12


def test_eigh_input_not_mutated(backend):
    rng = np.random.default_rng(5)
    h = random_hermitian(rng, 6)
    h_copy = h.copy()
    _kernel.eigh(h)
    assert np.array_equal(h, h_copy)
