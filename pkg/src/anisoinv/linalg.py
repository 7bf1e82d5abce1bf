"""Small dense matrix kernel: Pauli basis, Kronecker products, Jacobi eigensolvers.

The eigensolvers dispatch to the compiled Cython kernel when it was built,
and to the numpy implementation otherwise. Set ``ANISOINV_BACKEND=python``
to force the fallback.
"""
import os

import numpy as np

from .errors import ContractViolation

if os.environ.get("ANISOINV_BACKEND", "").lower() == "python":
    from . import _jacobi_py as _kernels
else:
    try:
        from . import _jacobi_ext as _kernels
    except ImportError:  # extension not built
        from . import _jacobi_py as _kernels

BACKEND = _kernels.NAME

HERMITIAN_TOL = 1e-12
JACOBI_TOL = 1e-13
CLAMP_TOL = 1e-9

SIGMA0 = np.eye(2, dtype=np.complex128)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=np.complex128)

#: ``PAULI[u]`` is sigma_u, with ``PAULI[0]`` the identity.
PAULI = np.stack([SIGMA0, SIGMA1, SIGMA2, SIGMA3])
for _m in (SIGMA0, SIGMA1, SIGMA2, SIGMA3, PAULI):
    _m.setflags(write=False)


def use_backend(name):
    """Switch the eigensolver kernel (``"cython"`` or ``"python"``); returns the previous name."""
    global _kernels, BACKEND
    previous = BACKEND
    if name == "python":
        from . import _jacobi_py as mod
    elif name == "cython":
        from . import _jacobi_ext as mod
    else:
        raise ValueError(f"unknown backend {name!r}")
    _kernels, BACKEND = mod, mod.NAME
    return previous


def tensor_product(*mats):
    """Kronecker product of one or more matrices, first factor most significant."""
    out = np.asarray(mats[0])
    for m in mats[1:]:
        out = np.kron(out, np.asarray(m))
    return out


def _check_square(m):
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ContractViolation(f"expected a square matrix, got shape {m.shape}")


def _check_hermitian(m, tol=HERMITIAN_TOL):
    dev = np.abs(m - m.conj().T)
    if dev.size and dev.max() > tol:
        i, j = np.unravel_index(np.argmax(dev), dev.shape)
        raise ContractViolation(
            f"matrix is not Hermitian: entry ({i}, {j}) = {m[i, j]!r} "
            f"vs conj of ({j}, {i}) = {m[j, i]!r}"
        )


def hermitian_eigensystem(m, tol=JACOBI_TOL):
    """Eigen-decompose a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, v)`` with eigenvalues ``w`` sorted descending and the
    orthonormal eigenvectors as the columns of ``v``.
    """
    m = np.asarray(m)
    _check_square(m)
    if m.shape[0] > 8:
        raise ContractViolation(f"dimension {m.shape[0]} exceeds the supported maximum of 8")
    _check_hermitian(m)
    w, v = _kernels.eigh_batch(m[None].astype(np.complex128), tol)
    order = np.argsort(-w[0], kind="stable")
    return w[0][order], v[0][:, order]


def hermitian_eigensystem_batch(ms, tol=JACOBI_TOL):
    """Stacked version of :func:`hermitian_eigensystem` for an ``(n, d, d)`` array.

    No Hermiticity check is made; callers pass matrices they constructed.
    """
    ms = np.asarray(ms, dtype=np.complex128)
    w, v = _kernels.eigh_batch(ms, tol)
    order = np.argsort(-w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    return w, v


def symmetric_eigenvalues_batch(ms, tol=JACOBI_TOL):
    """Descending eigenvalues of a stack of real symmetric matrices."""
    w = _kernels.symeig_batch(np.asarray(ms, dtype=np.float64), tol)
    return -np.sort(-w, axis=1)


def real_symmetric3_eigenvalues(s):
    """Eigenvalues ``(s1, s2, s3)`` of a real symmetric 3x3 matrix, descending.

    Negative values within ``1e-9`` of zero are clamped to zero.
    """
    s = np.asarray(s)
    if s.shape != (3, 3):
        raise ContractViolation(f"expected a 3x3 matrix, got shape {s.shape}")
    if np.iscomplexobj(s):
        if np.abs(s.imag).max() > HERMITIAN_TOL:
            raise ContractViolation("expected a real matrix")
        s = s.real
    _check_hermitian(s)
    w = symmetric_eigenvalues_batch(s[None])[0]
    w[(w < 0) & (w > -CLAMP_TOL)] = 0.0
    return tuple(float(x) for x in w)


def clamp_psd_eigenvalues(w, tol=CLAMP_TOL):
    """Zero out tiny negative eigenvalues of a PSD construct; raise on larger ones."""
    w = np.array(w, dtype=float, copy=True)
    if np.any(w < -tol):
        raise ContractViolation(f"eigenvalue {w.min():.3e} below -{tol:g} for a PSD construct")
    w[w < 0] = 0.0
    return w


def psd_sqrt(m):
    """Principal square root of a positive-semidefinite Hermitian matrix."""
    w, v = hermitian_eigensystem(m)
    w = clamp_psd_eigenvalues(w)
    return (v * np.sqrt(w)) @ v.conj().T


def is_unitary(u, tol=1e-10):
    u = np.asarray(u)
    return u.ndim == 2 and u.shape[0] == u.shape[1] and np.allclose(
        u @ u.conj().T, np.eye(u.shape[0]), atol=tol, rtol=0
    )
