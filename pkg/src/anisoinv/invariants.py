"""Isotropic/anisotropic spin spectra, concurrence, 3-tangle and the correlation ordering."""
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import ContractViolation, InternalConsistencyError, UsageError
from .linalg import (
    CLAMP_TOL,
    PAULI,
    SIGMA2,
    hermitian_eigensystem,
    hermitian_eigensystem_batch,
    symmetric_eigenvalues_batch,
    tensor_product,
)
from .states import PAIRS, Pair, bloch_vector, correlation_matrix, reduce_pair, reduce_single

_YY = tensor_product(SIGMA2, SIGMA2)


@dataclass(frozen=True)
class SpinSpectrum:
    s: tuple
    s_iso: float
    delta: tuple

    @property
    def horodecki(self):
        return self.s[0] + self.s[1]


@dataclass(frozen=True)
class InvarianceReport:
    iso_sum: float
    iso_terms: dict
    aniso_by_pair: dict
    max_aniso_deviation: float


@dataclass(frozen=True)
class OrderingQuadruple:
    conc_diff: float
    horodecki_half_diff: float
    iso_diff: float
    bloch_diff: float

    def as_tuple(self):
        return (self.conc_diff, self.horodecki_half_diff, self.iso_diff, self.bloch_diff)

    @property
    def spread(self):
        v = self.as_tuple()
        return max(v) - min(v)


def _spectrum_from_eigs(w):
    if w[-1] < -CLAMP_TOL:
        raise InternalConsistencyError(f"T T^T has negative eigenvalue {w[-1]:.3e}")
    s = tuple(float(max(x, 0.0)) for x in w)
    s_iso = sum(s) / 3.0
    return SpinSpectrum(s=s, s_iso=s_iso, delta=tuple(x - s_iso for x in s))


def spin_spectrum(t):
    """Eigenvalues of S = T T^T, descending, split into isotropic mean and anisotropies."""
    t = np.asarray(t, dtype=float)
    w = symmetric_eigenvalues_batch((t @ t.T)[None])[0]
    return _spectrum_from_eigs(w)


def spin_spectra(ts):
    """Spectra for a stack of correlation matrices, as an ``(n, 3)`` eigenvalue array."""
    ts = np.asarray(ts, dtype=float)
    return symmetric_eigenvalues_batch(ts @ np.swapaxes(ts, -1, -2))


def invariance_report(state):
    spectra = {p.name: spin_spectrum(correlation_matrix(state, p)) for p in PAIRS}
    iso_terms = {k: sp.s_iso for k, sp in spectra.items()}
    deltas = {k: sp.delta for k, sp in spectra.items()}
    dev = 0.0
    for x, y in combinations(deltas.values(), 2):
        dev = max(dev, max(abs(a - b) for a, b in zip(x, y)))
    return InvarianceReport(
        iso_sum=sum(iso_terms.values()),
        iso_terms=iso_terms,
        aniso_by_pair=deltas,
        max_aniso_deviation=dev,
    )


# Eigenvalues of rho below this are float noise on a rank-deficient matrix;
# keeping them would leak sqrt(eps) into the concurrence.
_RANK_TOL = 1e-13


def _wootters_dilations(rhos):
    w, v = hermitian_eigensystem_batch(rhos)
    if np.any(w < -CLAMP_TOL):
        raise InternalConsistencyError(f"density matrix has eigenvalue {w.min():.3e}")
    w = np.where(w < _RANK_TOL, 0.0, w)
    root = np.einsum("nij,nj,nkj->nik", v, np.sqrt(w), v.conj())
    root_tilde = _YY @ root.conj() @ _YY
    m = root @ root_tilde
    n = m.shape[0]
    h = np.zeros((n, 8, 8), dtype=np.complex128)
    h[:, :4, 4:] = m
    h[:, 4:, :4] = np.conj(np.swapaxes(m, 1, 2))
    return h


def concurrence_batch(rhos):
    """Concurrence for a stack of ``(n, 4, 4)`` density matrices."""
    rhos = np.asarray(rhos, dtype=np.complex128)
    sv, _ = hermitian_eigensystem_batch(_wootters_dilations(rhos))
    lam = np.clip(sv[:, :4], 0.0, None)
    return np.maximum(0.0, lam[:, 0] - lam[:, 1] - lam[:, 2] - lam[:, 3])


def concurrence(rho):
    """Wootters concurrence of a two-qubit density matrix.

    The lambdas (square roots of the eigenvalues of rho rho~, rho~ =
    (Y x Y) rho* (Y x Y)) are obtained as singular values of
    sqrt(rho) sqrt(rho~), read off the Hermitian dilation [[0, M], [M^+, 0]]
    so that rank-deficient inputs do not lose half their digits.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (4, 4):
        raise ContractViolation(f"expected a 4x4 density matrix, got shape {rho.shape}")
    hermitian_eigensystem(rho)  # Hermiticity check
    return float(concurrence_batch(rho[None])[0])


def three_tangle(state):
    """Residual tangle 4 det(rho_A) - C_AB^2 - C_AC^2."""
    rho_a = reduce_single(state, "A")
    one_vs_rest = 4.0 * float(np.linalg.det(rho_a).real)
    tau = one_vs_rest - concurrence(reduce_pair(state, Pair.AB)) ** 2 - concurrence(reduce_pair(state, Pair.AC)) ** 2
    if tau < -1e-6:
        raise InternalConsistencyError(f"3-tangle {tau:.3e} is negative (CKW inequality violated)")
    if tau < 0:
        tau = 0.0
    return tau


def _shared_and_unshared(first, second):
    shared = set(first.parties) & set(second.parties)
    (only_first,) = set(first.parties) - shared
    (only_second,) = set(second.parties) - shared
    return only_first, only_second


def ordering_quadruple(state, first, second):
    """The four pairwise-correlation differences that coincide for pure states.

    For ``first=AB, second=AC`` these are C_AB^2 - C_AC^2, (M_AB - M_AC)/2,
    s_iso^AB - s_iso^AC and |c|^2 - |b|^2.
    """
    first, second = Pair.coerce(first), Pair.coerce(second)
    if first == second:
        raise UsageError("ordering_quadruple needs two distinct pairs")
    only_first, only_second = _shared_and_unshared(first, second)
    sp1 = spin_spectrum(correlation_matrix(state, first))
    sp2 = spin_spectrum(correlation_matrix(state, second))
    c1 = concurrence(reduce_pair(state, first))
    c2 = concurrence(reduce_pair(state, second))
    b_first = bloch_vector(state, only_first)
    b_second = bloch_vector(state, only_second)
    return OrderingQuadruple(
        conc_diff=c1 ** 2 - c2 ** 2,
        horodecki_half_diff=(sp1.horodecki - sp2.horodecki) / 2.0,
        iso_diff=sp1.s_iso - sp2.s_iso,
        bloch_diff=float(b_second @ b_second - b_first @ b_first),
    )


def batch_quantities(amps):
    """Pairwise quantities for a stack of ``(n, 8)`` normalized state vectors.

    Returns a dict of arrays keyed ``t``, ``s``, ``iso``, ``delta``, ``M``,
    ``conc`` (each a dict by pair name) plus ``bloch`` and ``rho1_det`` (dicts
    by party name).
    """
    psi = np.asarray(amps, dtype=np.complex128).reshape(-1, 2, 2, 2)
    n = psi.shape[0]
    rho = {
        "AB": np.einsum("nabc,ndec->nabde", psi, psi.conj()).reshape(n, 4, 4),
        "AC": np.einsum("nabc,ndbf->nacdf", psi, psi.conj()).reshape(n, 4, 4),
        "BC": np.einsum("nabc,naef->nbcef", psi, psi.conj()).reshape(n, 4, 4),
    }
    single = {
        "A": np.einsum("nabc,ndbc->nad", psi, psi.conj()),
        "B": np.einsum("nabc,naec->nbe", psi, psi.conj()),
        "C": np.einsum("nabc,nabf->ncf", psi, psi.conj()),
    }
    pauli = PAULI[1:]
    out = {"t": {}, "s": {}, "iso": {}, "delta": {}, "M": {}, "conc": {}, "bloch": {}, "rho1_det": {}}
    for p, r in rho.items():
        t = np.einsum("nabcd,jca,kdb->njk", r.reshape(n, 2, 2, 2, 2), pauli, pauli).real
        s = np.clip(spin_spectra(t), 0.0, None)
        out["t"][p] = t
        out["s"][p] = s
        out["iso"][p] = s.mean(axis=1)
        out["delta"][p] = s - s.mean(axis=1, keepdims=True)
        out["M"][p] = s[:, 0] + s[:, 1]
        out["conc"][p] = concurrence_batch(r)
    for x, r in single.items():
        out["bloch"][x] = np.einsum("nab,jba->nj", r, pauli).real
        out["rho1_det"][x] = np.linalg.det(r).real
    return out
