import numpy as np
import pytest

from anisoinv import linalg
from anisoinv.errors import ContractViolation
from anisoinv.linalg import (
    PAULI,
    SIGMA1,
    SIGMA2,
    SIGMA3,
    clamp_psd_eigenvalues,
    hermitian_eigensystem,
    hermitian_eigensystem_batch,
    is_unitary,
    psd_sqrt,
    real_symmetric3_eigenvalues,
    symmetric_eigenvalues_batch,
    tensor_product,
)


def random_hermitian(rng, d):
    x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (x + x.conj().T) / 2


def test_pauli_algebra():
    for s in PAULI[1:]:
        assert np.allclose(s @ s, np.eye(2))
    assert np.allclose(SIGMA1 @ SIGMA2, 1j * SIGMA3)
    assert not PAULI.flags.writeable


def test_tensor_product_ordering():
    a = np.diag([1.0, 2.0])
    b = np.diag([1.0, 3.0])
    assert np.allclose(np.diag(tensor_product(a, b)), [1, 3, 2, 6])
    assert tensor_product(a, b, a).shape == (8, 8)


def test_round_trip_random_hermitian(backend, rng):
    for i in range(1000):
        d = (2, 3, 4, 8)[i % 4]
        h = random_hermitian(rng, d)
        w, v = hermitian_eigensystem(h)
        assert np.all(np.diff(w) <= 0)
        assert np.allclose(v @ np.diag(w) @ v.conj().T, h, atol=1e-10)
        assert np.allclose(v.conj().T @ v, np.eye(d), atol=1e-10)
        assert abs(w.sum() - np.trace(h).real) < 1e-10


def test_matches_numpy_eigenvalues(backend, rng):
    hs = np.array([random_hermitian(rng, 8) for _ in range(200)])
    w, _ = hermitian_eigensystem_batch(hs)
    ref = np.sort(np.linalg.eigvalsh(hs), axis=1)[:, ::-1]
    assert np.abs(w - ref).max() < 1e-10


def test_sigma1_eigensystem(backend):
    w, v = hermitian_eigensystem(SIGMA1)
    assert np.allclose(w, [1, -1])
    assert np.allclose(SIGMA1 @ v, v * w)


def test_degenerate_and_diagonal(backend):
    w, v = hermitian_eigensystem(np.eye(4) * 0.25)
    assert np.allclose(w, 0.25)
    assert np.allclose(v.conj().T @ v, np.eye(4))
    w, _ = hermitian_eigensystem(np.diag([0.1, 3.0, -2.0]))
    assert np.allclose(w, [3.0, 0.1, -2.0])


def test_symmetric_batch(backend, rng):
    x = rng.normal(size=(500, 3, 3))
    s = x + np.swapaxes(x, 1, 2)
    w = symmetric_eigenvalues_batch(s)
    assert np.abs(w - np.sort(np.linalg.eigvalsh(s), axis=1)[:, ::-1]).max() < 1e-11


def test_real_symmetric3_clamps_tiny_negatives():
    s = np.diag([1.0, 0.5, -1e-12])
    assert real_symmetric3_eigenvalues(s) == (1.0, 0.5, 0.0)
    with pytest.raises(ContractViolation):
        real_symmetric3_eigenvalues(np.eye(2))


def test_rejects_non_hermitian_naming_entry():
    m = np.array([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(ContractViolation, match=r"\(0, 1\)|\(1, 0\)"):
        hermitian_eigensystem(m)


def test_rejects_bad_shapes():
    with pytest.raises(ContractViolation):
        hermitian_eigensystem(np.zeros((2, 3)))
    with pytest.raises(ContractViolation):
        hermitian_eigensystem(np.eye(9))


def test_clamp_and_sqrt():
    assert np.array_equal(clamp_psd_eigenvalues([1.0, -1e-12]), [1.0, 0.0])
    with pytest.raises(ContractViolation):
        clamp_psd_eigenvalues([1.0, -1e-6])
    rho = np.diag([0.7, 0.3, 0.0, 0.0]).astype(complex)
    r = psd_sqrt(rho)
    assert np.allclose(r @ r, rho)


def test_is_unitary():
    assert is_unitary(SIGMA2)
    assert not is_unitary(2 * SIGMA1)
    assert not is_unitary(np.ones((2, 3)))


def test_backend_switch_round_trip():
    previous = linalg.use_backend("python")
    try:
        assert linalg.BACKEND == "python"
    finally:
        linalg.use_backend(previous)
    with pytest.raises(ValueError):
        linalg.use_backend("fortran")
