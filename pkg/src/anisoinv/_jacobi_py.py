"""Pure-Python (numpy) cyclic Jacobi kernels.

Fallback for :mod:`anisoinv._jacobi_ext`. The rotation sequence is the same
cyclic (p, q) sweep as the compiled version, vectorized over the batch axis
so a stack of small matrices costs one Python loop, not one per matrix.

Both modules expose::

    eigh_batch(a, tol, max_sweeps) -> (w, v)      # complex Hermitian stack
    symeig_batch(a, tol, max_sweeps) -> w         # real symmetric stack

Eigenvalues come back unsorted (diagonal order); callers sort.
"""
import numpy as np

NAME = "python"


def _sweep_until_converged(a, v, tol, max_sweeps):
    n, d, _ = a.shape
    iu = np.triu_indices(d, 1)
    scale = np.maximum(1.0, np.sqrt(np.sum(np.abs(a) ** 2, axis=(1, 2))))
    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * np.sum(np.abs(a[:, iu[0], iu[1]]) ** 2, axis=1))
        if np.all(off < tol * scale):
            return
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[:, p, q]
                g = np.abs(apq)
                live = g > 1e-300
                if not np.any(live):
                    continue
                gs = np.where(live, g, 1.0)
                e = np.where(live, apq / gs, 1.0)
                theta = (a[:, q, q].real - a[:, p, p].real) / (2.0 * gs)
                sgn = np.where(theta >= 0.0, 1.0, -1.0)
                t = np.where(live, sgn / (np.abs(theta) + np.hypot(theta, 1.0)), 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                eb = np.conj(e)
                c_, s_ = c[:, None], s[:, None]

                ap = a[:, :, p].copy()
                aq = a[:, :, q].copy()
                a[:, :, p] = c_ * ap - (s * eb)[:, None] * aq
                a[:, :, q] = s_ * ap + (c * eb)[:, None] * aq
                rp = a[:, p, :].copy()
                rq = a[:, q, :].copy()
                a[:, p, :] = c_ * rp - (s * e)[:, None] * rq
                a[:, q, :] = s_ * rp + (c * e)[:, None] * rq
                a[live, p, q] = 0.0
                a[live, q, p] = 0.0

                if v is not None:
                    vp = v[:, :, p].copy()
                    vq = v[:, :, q].copy()
                    v[:, :, p] = c_ * vp - (s * eb)[:, None] * vq
                    v[:, :, q] = s_ * vp + (c * eb)[:, None] * vq
    raise ArithmeticError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


def eigh_batch(a, tol=1e-13, max_sweeps=60):
    a = np.array(a, dtype=np.complex128, copy=True)
    n, d, _ = a.shape
    v = np.broadcast_to(np.eye(d, dtype=np.complex128), (n, d, d)).copy()
    _sweep_until_converged(a, v, tol, max_sweeps)
    w = np.real(np.diagonal(a, axis1=1, axis2=2)).copy()
    return w, v


def symeig_batch(a, tol=1e-13, max_sweeps=60):
    a = np.array(a, dtype=np.float64, copy=True)
    _sweep_until_converged(a, None, tol, max_sweeps)
    return np.diagonal(a, axis1=1, axis2=2).copy()
