"""Simulated photon-counting experiment: outcome statistics, estimators, bootstrap, tomography.

Count data live in two forms. The public one is a list of 27 :class:`CountRecord`
(one per Pauli setting). Internally the estimators work on a dense array of shape
``(..., 3, 3, 3, 2, 2, 2)`` indexed ``[j-1, k-1, l-1, a, b, c]`` where outcome
index 0 means +1 and 1 means -1; leading axes batch over bootstrap resamples.
"""
import csv
import io
import itertools
import math
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from .errors import IncompleteDataError, ParseError, UsageError
from .invariants import concurrence_batch, spin_spectra
from .linalg import PAULI, hermitian_eigensystem_batch
from .states import PAIRS

Setting = namedtuple("Setting", "j k l")

SETTINGS = tuple(Setting(*s) for s in itertools.product((1, 2, 3), repeat=3))
OUTCOMES = tuple(itertools.product((1, -1), repeat=3))
CSV_HEADER = ("j", "k", "l", "alpha", "beta", "gamma", "count")

DEFAULT_SHOTS = 5000

# rows are <e_+|, <e_-| for sigma_1, sigma_2, sigma_3
_R2 = 1.0 / math.sqrt(2.0)
_MEASURE = np.array(
    [
        [[_R2, _R2], [_R2, -_R2]],
        [[_R2, -1j * _R2], [_R2, 1j * _R2]],
        [[1, 0], [0, 1]],
    ],
    dtype=np.complex128,
)

# _POOL[u, j, a]: weight of (setting axis j, outcome a) in the Pauli-u expectation
# of one qubit. u = 0 is the identity slot, pooled evenly over the three axes.
_POOL = np.zeros((4, 3, 2))
_POOL[0] = 1.0 / 3.0
for _u in (1, 2, 3):
    _POOL[_u, _u - 1] = (1.0, -1.0)
_SIGN = np.array([1.0, -1.0])


@dataclass(frozen=True)
class OutcomeDistribution:
    setting: Setting
    probs: np.ndarray

    def prob(self, alpha, beta, gamma):
        return float(self.probs[OUTCOMES.index((alpha, beta, gamma))])


@dataclass(frozen=True)
class CountRecord:
    setting: Setting
    counts: np.ndarray  # 8 entries in OUTCOMES order

    @property
    def total(self):
        return float(np.sum(self.counts))


@dataclass(frozen=True)
class BootstrapResult:
    estimate: float
    std_error: float
    resamples: int


@dataclass(frozen=True)
class CorrelationEstimate:
    bloch: dict  # party name -> 3-vector
    t: dict  # pair name -> 3x3 matrix


# -- exact statistics and sampling --------------------------------------------


def outcome_probabilities(state):
    """All 27 x 8 joint outcome probabilities as a ``(3, 3, 3, 2, 2, 2)`` array."""
    amp = np.einsum("jxa,kyb,lzc,abc->jklxyz", _MEASURE, _MEASURE, _MEASURE, state.tensor)
    return np.abs(amp) ** 2


def outcome_distribution(state, setting):
    j, k, l = Setting(*setting)
    p = outcome_probabilities(state)[j - 1, k - 1, l - 1].reshape(8)
    return OutcomeDistribution(Setting(j, k, l), p / p.sum())


def records_from_array(arr):
    flat = np.asarray(arr).reshape(27, 8)
    return [CountRecord(s, flat[i].copy()) for i, s in enumerate(SETTINGS)]


def counts_array(records):
    """Dense ``(3, 3, 3, 2, 2, 2)`` array from records; every setting must be present and non-empty."""
    arr = np.full((27, 8), np.nan)
    for rec in records:
        s = Setting(*rec.setting)
        if s not in SETTINGS:
            raise ParseError(f"invalid setting {tuple(s)}")
        arr[SETTINGS.index(s)] = np.asarray(rec.counts, dtype=float)
    missing = [tuple(s) for i, s in enumerate(SETTINGS) if np.isnan(arr[i]).any()]
    if missing:
        raise IncompleteDataError(f"missing settings (j,k,l): {missing}", missing)
    empty = [tuple(s) for i, s in enumerate(SETTINGS) if arr[i].sum() <= 0]
    if empty:
        raise IncompleteDataError(f"settings with zero total count (j,k,l): {empty}", empty)
    return arr.reshape(3, 3, 3, 2, 2, 2)


def expected_counts(state, shots):
    """Noise-free records: ``shots * probability`` (real-valued)."""
    return records_from_array(shots * outcome_probabilities(state))


def simulate_counts(state, shots_per_setting=DEFAULT_SHOTS, seed=0):
    """Independent Poisson count per outcome bin with mean ``shots * probability``.

    Each setting draws from its own generator spawned from ``seed``.
    """
    if shots_per_setting < 1:
        raise UsageError("shots_per_setting must be >= 1")
    means = shots_per_setting * outcome_probabilities(state).reshape(27, 8)
    children = np.random.SeedSequence(seed).spawn(27)
    counts = np.empty((27, 8), dtype=np.int64)
    for i, child in enumerate(children):
        counts[i] = np.random.default_rng(child).poisson(means[i])
    return records_from_array(counts)


# -- estimators -----------------------------------------------------------------


def _frequencies(counts):
    counts = np.asarray(counts, dtype=float)
    totals = counts.sum(axis=(-3, -2, -1), keepdims=True)
    return counts / totals


def pauli_expectations(counts):
    """Estimated <sigma_u sigma_v sigma_w> for u, v, w in 0..3, shape ``(..., 4, 4, 4)``.

    Identity slots average over every setting of that qubit.
    """
    f = _frequencies(counts)
    return np.einsum("...jklabc,uja,vkb,wlc->...uvw", f, _POOL, _POOL, _POOL, optimize=True)


def _split_expectations(e):
    e = np.clip(e, -1.0, 1.0)
    bloch = {"A": e[..., 1:, 0, 0], "B": e[..., 0, 1:, 0], "C": e[..., 0, 0, 1:]}
    t = {"AB": e[..., 1:, 1:, 0], "AC": e[..., 1:, 0, 1:], "BC": e[..., 0, 1:, 1:]}
    return bloch, t


def estimate_correlations(records, slice_l=None):
    """Bloch vectors and pairwise correlation matrices from count records.

    By default every correlation pools all settings of the unmeasured qubit.
    ``slice_l`` (1..3) instead reads T^AB from the single C-setting ``l``;
    the other quantities stay pooled.
    """
    counts = counts_array(records)
    bloch, t = _split_expectations(pauli_expectations(counts))
    if slice_l is not None:
        f = _frequencies(counts)[:, :, slice_l - 1]
        t = dict(t, AB=np.clip(np.einsum("jkabc,a,b->jk", f, _SIGN, _SIGN), -1.0, 1.0))
    return CorrelationEstimate(bloch=bloch, t=t)


# -- tomography -------------------------------------------------------------------


def project_to_simplex(w):
    """Euclidean projection of each row of ``w`` onto the probability simplex."""
    w = np.atleast_2d(np.asarray(w, dtype=float))
    n, d = w.shape
    u = -np.sort(-w, axis=1)
    css = np.cumsum(u, axis=1) - 1.0
    idx = np.arange(1, d + 1)
    cond = u - css / idx > 0
    rho = d - 1 - np.argmax(cond[:, ::-1], axis=1)
    tau = css[np.arange(n), rho] / (rho + 1)
    return np.maximum(w - tau[:, None], 0.0)


def project_density(m):
    """Nearest (Frobenius) unit-trace PSD matrix to each Hermitian matrix in a stack."""
    m = np.asarray(m, dtype=np.complex128)
    single = m.ndim == 2
    if single:
        m = m[None]
    w, v = hermitian_eigensystem_batch((m + np.conj(np.swapaxes(m, 1, 2))) / 2)
    p = project_to_simplex(w)
    out = np.einsum("nij,nj,nkj->nik", v, p, v.conj())
    return out[0] if single else out


def linear_inversion(counts):
    """Unprojected linear-inversion estimate(s) from a counts array."""
    e = pauli_expectations(counts)
    rho = np.einsum("...uvw,uab,vcd,wef->...acebdf", e, PAULI, PAULI, PAULI, optimize=True)
    return rho.reshape(rho.shape[:-6] + (8, 8)) / 8.0


def tomography_reconstruct(records):
    """8x8 density matrix by linear inversion followed by projection onto physical states."""
    return project_density(linear_inversion(counts_array(records)))


def fidelity(rho, target):
    """Squared-overlap fidelity <psi|rho|psi>, clamped to [0, 1]."""
    psi = target.amplitudes
    return float(np.clip(np.real(psi.conj() @ np.asarray(rho) @ psi), 0.0, 1.0))


def _reduce_pairs_batch(rho8):
    r = rho8.reshape(rho8.shape[:-2] + (2, 2, 2, 2, 2, 2))
    return {
        "AB": np.einsum("...abcdec->...abde", r).reshape(r.shape[:-6] + (4, 4)),
        "AC": np.einsum("...abcdbf->...acdf", r).reshape(r.shape[:-6] + (4, 4)),
        "BC": np.einsum("...abcaef->...bcef", r).reshape(r.shape[:-6] + (4, 4)),
    }


# -- derived statistics -----------------------------------------------------------

PAIR_NAMES = tuple(p.name for p in PAIRS)
PAIRINGS = (("AB", "AC"), ("AB", "BC"), ("AC", "BC"))
_UNSHARED = {("AB", "AC"): ("B", "C"), ("AB", "BC"): ("A", "C"), ("AC", "BC"): ("A", "B")}


def statistic_names():
    names = ["iso_sum", "m_sum_AB_AC", "monogamy_bound"]
    for p in PAIR_NAMES:
        names += [f"iso_{p}", f"M_{p}", f"conc_{p}", f"chsh2_{p}"]
        names += [f"ds{j}_{p}" for j in (1, 2, 3)]
    for x in "ABC":
        names.append(f"bloch2_{x}")
    for p, q in PAIRINGS:
        names += [f"conc2_diff_{p}_{q}", f"m_half_diff_{p}_{q}", f"iso_diff_{p}_{q}", f"bloch2_diff_{p}_{q}"]
    names.append("fidelity")
    return tuple(names)


STATISTICS = statistic_names()


def _needs(names, prefix):
    return any(n.startswith(prefix) for n in names)


def compute_statistics(counts, names, dirs=None, target=None):
    """Evaluate named statistics on a (batched) counts array.

    Returns ``{name: array}`` with one value per leading batch index. ``dirs``
    maps pair names to :class:`MeasurementDirections` for ``chsh2_*``;
    ``target`` is the reference state for ``fidelity``.
    """
    unknown = [n for n in names if n not in STATISTICS]
    if unknown:
        raise UsageError(f"unknown statistic(s) {unknown}; choose from {list(STATISTICS)}")
    counts = np.asarray(counts, dtype=float)
    batch = counts.shape[:-6]
    counts = counts.reshape((-1,) + counts.shape[-6:])
    n = counts.shape[0]
    e = pauli_expectations(counts)
    bloch, t = _split_expectations(e)
    s = {p: v for p, v in zip(PAIR_NAMES, spin_spectra(np.concatenate([t[p] for p in PAIR_NAMES])).reshape(3, n, 3))}
    s = {p: np.clip(v, 0.0, None) for p, v in s.items()}
    iso = {p: s[p].mean(axis=1) for p in PAIR_NAMES}
    horo = {p: s[p][:, 0] + s[p][:, 1] for p in PAIR_NAMES}
    b2 = {x: np.sum(bloch[x] ** 2, axis=1) for x in "ABC"}

    conc = {}
    rho8 = None
    if _needs(names, "conc") or "fidelity" in names:
        rho8 = project_density(linear_inversion(counts))
        reduced = _reduce_pairs_batch(rho8)
        if _needs(names, "conc"):
            conc = {p: concurrence_batch(reduced[p]) for p in PAIR_NAMES}

    out = {}
    for name in names:
        if name == "iso_sum":
            v = iso["AB"] + iso["AC"] + iso["BC"]
        elif name == "m_sum_AB_AC":
            v = horo["AB"] + horo["AC"]
        elif name == "monogamy_bound":
            v = 2.0 * (1.0 - s["BC"][:, 2])
        elif name == "fidelity":
            if target is None:
                raise UsageError("statistic 'fidelity' needs a target state")
            psi = target.amplitudes
            v = np.clip(np.einsum("i,nij,j->n", psi.conj(), rho8, psi).real, 0.0, 1.0)
        elif name.startswith("bloch2_diff_"):
            p, q = name[len("bloch2_diff_"):].split("_")
            x, y = _UNSHARED[(p, q)]
            v = b2[y] - b2[x]
        elif name.startswith("bloch2_"):
            v = b2[name[-1]]
        elif name.startswith("conc2_diff_"):
            p, q = name[len("conc2_diff_"):].split("_")
            v = conc[p] ** 2 - conc[q] ** 2
        elif name.startswith("m_half_diff_"):
            p, q = name[len("m_half_diff_"):].split("_")
            v = (horo[p] - horo[q]) / 2.0
        elif name.startswith("iso_diff_"):
            p, q = name[len("iso_diff_"):].split("_")
            v = iso[p] - iso[q]
        elif name.startswith("iso_"):
            v = iso[name[-2:]]
        elif name.startswith("M_"):
            v = horo[name[-2:]]
        elif name.startswith("conc_"):
            v = conc[name[-2:]]
        elif name.startswith("chsh2_"):
            p = name[-2:]
            if dirs is None or p not in dirs:
                raise UsageError(f"statistic {name!r} needs measurement directions for pair {p}")
            d = dirs[p]
            tp = t[p]
            val = (
                np.einsum("i,nij,j->n", d.a1, tp, d.b1)
                + np.einsum("i,nij,j->n", d.a1, tp, d.b2)
                + np.einsum("i,nij,j->n", d.a2, tp, d.b1)
                - np.einsum("i,nij,j->n", d.a2, tp, d.b2)
            )
            v = val ** 2 / 4.0
        elif name.startswith("ds"):
            j, p = int(name[2]), name[-2:]
            v = s[p][:, j - 1] - iso[p]
        else:  # pragma: no cover - guarded by STATISTICS
            raise UsageError(name)
        out[name] = np.asarray(v, dtype=float).reshape(batch)
    return out


def poisson_resamples(counts, resamples, seed):
    """``resamples`` Poisson redraws of a counts array, one spawned generator per resample."""
    counts = np.asarray(counts, dtype=float)
    out = np.empty((resamples,) + counts.shape)
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(resamples)):
        out[i] = np.random.default_rng(child).poisson(counts)
    return out


def bootstrap_many(records, names, resamples=200, seed=0, dirs=None, target=None):
    """Poissonian bootstrap of several statistics sharing the same resamples."""
    if resamples < 100:
        raise UsageError("resamples must be >= 100")
    counts = counts_array(records)
    point = compute_statistics(counts, names, dirs=dirs, target=target)
    draws = poisson_resamples(counts, resamples, seed)
    empty = np.any(draws.sum(axis=(-3, -2, -1)) <= 0, axis=(1, 2, 3))
    if np.any(empty):
        draws = draws[~empty]
    boot = compute_statistics(draws, names, dirs=dirs, target=target)
    return {
        n: BootstrapResult(float(point[n]), float(np.std(boot[n], ddof=1)), int(draws.shape[0]))
        for n in names
    }


def bootstrap_errors(records, statistic, resamples=200, seed=0, dirs=None, target=None):
    """Point estimate and Poissonian-bootstrap standard error of one named statistic."""
    return bootstrap_many(records, [statistic], resamples, seed, dirs, target)[statistic]


# -- counts CSV -------------------------------------------------------------------


def format_counts_csv(records):
    """Counts CSV text: header plus 8 rows per setting, settings in (j, k, l) order."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rec in sorted(records, key=lambda r: SETTINGS.index(Setting(*r.setting))):
        for (a, b, c), n in zip(OUTCOMES, rec.counts):
            if float(n) != int(n):
                raise ValueError(f"count {n!r} for setting {tuple(rec.setting)} is not an integer")
            w.writerow((*rec.setting, a, b, c, int(n)))
    return buf.getvalue()


def write_counts_csv(path, records):
    text = format_counts_csv(records)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def read_counts_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        if tuple(h.strip() for h in header) != CSV_HEADER:
            raise ParseError(f"{path}: line 1: header must be {','.join(CSV_HEADER)}")
        table = {}
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 7:
                raise ParseError(f"{path}: line {lineno}: expected 7 fields, got {len(row)}")
            try:
                j, k, l, a, b, c, n = (int(x) for x in row)
            except ValueError:
                raise ParseError(f"{path}: line {lineno}: non-integer field in {row}") from None
            if not all(x in (1, 2, 3) for x in (j, k, l)):
                raise ParseError(f"{path}: line {lineno}: setting indices must be 1, 2 or 3")
            if not all(x in (1, -1) for x in (a, b, c)):
                raise ParseError(f"{path}: line {lineno}: outcomes must be +1 or -1")
            if n < 0:
                raise ParseError(f"{path}: line {lineno}: negative count {n}")
            key = (j, k, l, a, b, c)
            if key in table:
                raise ParseError(f"{path}: line {lineno}: duplicate row for {key}")
            table[key] = n
    records, missing = [], []
    for s in SETTINGS:
        vals = [table.get((*s, *o)) for o in OUTCOMES]
        if any(v is None for v in vals):
            missing.append(tuple(s))
            continue
        records.append(CountRecord(s, np.array(vals, dtype=np.int64)))
    if missing:
        raise IncompleteDataError(f"{path}: incomplete dataset, missing rows for settings {missing}", missing)
    return records
