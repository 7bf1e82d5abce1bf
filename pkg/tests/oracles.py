"""Independent reference computations used only by the tests.

Everything here is built from numpy.linalg and explicit formulas, never from
the package's own kernels, so agreement is a genuine cross-check.
"""
import numpy as np

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)
PAULIS = (X, Y, Z)


def kron(*ms):
    out = np.array([[1.0 + 0j]])
    for m in ms:
        out = np.kron(out, m)
    return out


def pair_operator(pair, j, k):
    """sigma_j on the first party of ``pair`` and sigma_k on the second, identity elsewhere."""
    ops = [I2, I2, I2]
    first, second = {"AB": (0, 1), "AC": (0, 2), "BC": (1, 2)}[pair]
    ops[first] = PAULIS[j]
    ops[second] = PAULIS[k]
    return kron(*ops)


def correlation_matrix(psi, pair):
    """T_jk = <psi| sigma_j (x) sigma_k |psi> from full 8x8 operators."""
    psi = np.asarray(psi)
    return np.array(
        [[np.vdot(psi, pair_operator(pair, j, k) @ psi).real for k in range(3)] for j in range(3)]
    )


def bloch_vector(psi, party):
    idx = "ABC".index(party)
    out = []
    for s in PAULIS:
        ops = [I2, I2, I2]
        ops[idx] = s
        out.append(np.vdot(psi, kron(*ops) @ psi).real)
    return np.array(out)


def spin_spectrum(t):
    s = np.sort(np.linalg.eigvalsh(t @ t.T))[::-1]
    iso = s.mean()
    return s, iso, s - iso


def reduced_pair(psi, pair):
    """Partial trace by explicit index summation (no reshape tricks shared with the package)."""
    keep = {"AB": (0, 1), "AC": (0, 2), "BC": (1, 2)}[pair]
    traced = ({0, 1, 2} - set(keep)).pop()
    rho = np.zeros((4, 4), dtype=complex)
    for i in range(8):
        for j in range(8):
            bi = [(i >> (2 - q)) & 1 for q in range(3)]
            bj = [(j >> (2 - q)) & 1 for q in range(3)]
            if bi[traced] != bj[traced]:
                continue
            r = 2 * bi[keep[0]] + bi[keep[1]]
            c = 2 * bj[keep[0]] + bj[keep[1]]
            rho[r, c] += psi[i] * np.conj(psi[j])
    return rho


def concurrence(rho):
    """Wootters: sqrt of eigenvalues of rho (Y Y) rho* (Y Y), via numpy eigvals."""
    yy = np.kron(Y, Y)
    r = rho @ yy @ rho.conj() @ yy
    lam = np.sqrt(np.clip(np.sort(np.linalg.eigvals(r).real)[::-1], 0, None))
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def three_tangle_cayley(psi):
    """Coffman-Kundu-Wootters 3-tangle from Cayley's hyperdeterminant."""
    a = np.asarray(psi).reshape(2, 2, 2)
    d1 = (a[0, 0, 0] ** 2 * a[1, 1, 1] ** 2 + a[0, 0, 1] ** 2 * a[1, 1, 0] ** 2
          + a[0, 1, 0] ** 2 * a[1, 0, 1] ** 2 + a[1, 0, 0] ** 2 * a[0, 1, 1] ** 2)
    d2 = (a[0, 0, 0] * a[1, 1, 1] * a[0, 1, 1] * a[1, 0, 0]
          + a[0, 0, 0] * a[1, 1, 1] * a[1, 0, 1] * a[0, 1, 0]
          + a[0, 0, 0] * a[1, 1, 1] * a[1, 1, 0] * a[0, 0, 1]
          + a[0, 1, 1] * a[1, 0, 0] * a[1, 0, 1] * a[0, 1, 0]
          + a[0, 1, 1] * a[1, 0, 0] * a[1, 1, 0] * a[0, 0, 1]
          + a[1, 0, 1] * a[0, 1, 0] * a[1, 1, 0] * a[0, 0, 1])
    d3 = (a[0, 0, 0] * a[1, 1, 0] * a[1, 0, 1] * a[0, 1, 1]
          + a[1, 1, 1] * a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0])
    return 4.0 * abs(d1 - 2.0 * d2 + 4.0 * d3)


def _units(x):
    theta, phi = x[..., 0::2], x[..., 1::2]
    return np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1)


def _chsh(t, x):
    u = _units(x)
    a1, a2, b1, b2 = u[..., 0, :], u[..., 1, :], u[..., 2, :], u[..., 3, :]
    return np.einsum("...i,ij,...j->...", a1, t, b1 + b2) + np.einsum("...i,ij,...j->...", a2, t, b1 - b2)


def chsh_maximize(t, restarts=64, seed=0, max_rounds=200):
    """Gradient-free maximum of |<B>| over four unit vectors.

    Coordinate ascent on the eight spherical angles with a per-restart step
    that halves whenever a full pass brings no improvement; all restarts run
    side by side.
    """
    rng = np.random.default_rng(seed)
    x = np.empty((restarts, 8))
    x[:, 0::2] = np.arccos(rng.uniform(-1, 1, (restarts, 4)))
    x[:, 1::2] = rng.uniform(0, 2 * np.pi, (restarts, 4))
    val = np.abs(_chsh(t, x))
    step = np.full(restarts, 0.5)
    for _ in range(max_rounds):
        improved = np.zeros(restarts, dtype=bool)
        for i in range(8):
            for sign in (1.0, -1.0):
                y = x.copy()
                y[:, i] += sign * step
                v = np.abs(_chsh(t, y))
                better = v > val
                x[better], val[better] = y[better], v[better]
                improved |= better
        step = np.where(improved, step, step / 2)
        if np.all(step < 1e-10):
            break
    return float(val.max())
