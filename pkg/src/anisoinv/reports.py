"""Exact and simulated analysis reports, and regeneration of the published tables."""
import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .errors import UsageError
from .experiment import (
    DEFAULT_SHOTS,
    PAIRINGS,
    bootstrap_many,
    estimate_correlations,
    fidelity,
    simulate_counts,
    tomography_reconstruct,
)
from .invariants import concurrence, invariance_report, ordering_quadruple, spin_spectrum, three_tangle
from .nonlocality import chsh_value, monogamy_report, optimal_chsh_settings
from .reference import get_table
from .states import PAIRS, bloch_vector, correlation_matrix, ghz_class_state, reduce_pair, w_class_state

EXACT, SIMULATED = "exact", "simulated"
FORMATS = ("csv", "markdown", "json")


def optimal_directions(state):
    """Optimal CHSH directions for every pair of ``state``, keyed by pair name."""
    return {p.name: optimal_chsh_settings(correlation_matrix(state, p)).dirs for p in PAIRS}


def exact_statistics(state, names, dirs=None):
    """Named statistics (see ``experiment.STATISTICS``) evaluated on the exact state."""
    t = {p.name: correlation_matrix(state, p) for p in PAIRS}
    spec = {p: spin_spectrum(m) for p, m in t.items()}
    bloch = {x: bloch_vector(state, x) for x in "ABC"}
    b2 = {x: float(v @ v) for x, v in bloch.items()}
    conc_cache = {}

    def conc(p):
        if p not in conc_cache:
            conc_cache[p] = concurrence(reduce_pair(state, p))
        return conc_cache[p]

    unshared = {("AB", "AC"): ("B", "C"), ("AB", "BC"): ("A", "C"), ("AC", "BC"): ("A", "B")}
    out = {}
    for name in names:
        if name == "iso_sum":
            v = sum(sp.s_iso for sp in spec.values())
        elif name == "m_sum_AB_AC":
            v = spec["AB"].horodecki + spec["AC"].horodecki
        elif name == "monogamy_bound":
            v = 2.0 * (1.0 - spec["BC"].s[2])
        elif name == "fidelity":
            v = 1.0
        elif name.startswith("bloch2_diff_"):
            x, y = unshared[tuple(name[len("bloch2_diff_"):].split("_"))]
            v = b2[y] - b2[x]
        elif name.startswith("bloch2_"):
            v = b2[name[-1]]
        elif name.startswith("conc2_diff_"):
            p, q = name[len("conc2_diff_"):].split("_")
            v = conc(p) ** 2 - conc(q) ** 2
        elif name.startswith("m_half_diff_"):
            p, q = name[len("m_half_diff_"):].split("_")
            v = (spec[p].horodecki - spec[q].horodecki) / 2.0
        elif name.startswith("iso_diff_"):
            p, q = name[len("iso_diff_"):].split("_")
            v = spec[p].s_iso - spec[q].s_iso
        elif name.startswith("iso_"):
            v = spec[name[-2:]].s_iso
        elif name.startswith("M_"):
            v = spec[name[-2:]].horodecki
        elif name.startswith("conc_"):
            v = conc(name[-2:])
        elif name.startswith("chsh2_"):
            p = name[-2:]
            d = (dirs or {}).get(p) or optimal_chsh_settings(t[p]).dirs
            v = chsh_value(t[p], d) ** 2 / 4.0
        elif name.startswith("ds"):
            v = spec[name[-2:]].delta[int(name[2]) - 1]
        else:
            raise UsageError(f"unknown statistic {name!r}")
        out[name] = float(v)
    return out


# -- analyze / estimate ---------------------------------------------------------


def _settings_dict(t):
    st = optimal_chsh_settings(t)
    return {"value": st.value, "degenerate": st.degenerate, "directions": st.dirs.to_dict()}


def analyze_state(state):
    """Full exact report for one state, as a JSON-ready dict."""
    inv = invariance_report(state)
    t = {p.name: correlation_matrix(state, p) for p in PAIRS}
    spectra = {p: spin_spectrum(m) for p, m in t.items()}
    dirs = optimal_directions(state)
    mono = monogamy_report(state, dirs["AB"], dirs["AC"])
    return {
        "state": {"label": state.label, "amplitudes": [[a.real, a.imag] for a in state.amplitudes.tolist()]},
        "bloch": {x: bloch_vector(state, x).tolist() for x in "ABC"},
        "bloch_norms": {x: float(np.linalg.norm(bloch_vector(state, x))) for x in "ABC"},
        "correlation_matrices": {p: m.tolist() for p, m in t.items()},
        "spin_spectra": {p: asdict(sp) for p, sp in spectra.items()},
        "invariance": asdict(inv),
        "concurrence": {p.name: concurrence(reduce_pair(state, p)) for p in PAIRS},
        "three_tangle": three_tangle(state),
        "horodecki": {p: sp.horodecki for p, sp in spectra.items()},
        "optimal_chsh": {p: _settings_dict(m) for p, m in t.items()},
        "monogamy": dict(asdict(mono), slack=mono.slack),
        "ordering": {f"{a}_{b}": asdict(ordering_quadruple(state, a, b)) for a, b in PAIRINGS},
    }


HEADLINE = (
    ("iso_sum", "m_sum_AB_AC", "monogamy_bound")
    + tuple(f"{k}_{p}" for p in ("AB", "AC", "BC") for k in ("iso", "M", "conc", "ds1", "ds2", "ds3"))
    + tuple(f"{k}_{a}_{b}" for a, b in PAIRINGS for k in ("conc2_diff", "m_half_diff", "iso_diff", "bloch2_diff"))
    + tuple(f"bloch2_{x}" for x in "ABC")
)


def estimate_report(records, resamples=200, seed=0, target=None):
    """Report from count data: point estimates with Poissonian-bootstrap errors.

    Pairwise concurrences come from the tomographic reconstruction, like the
    measured values they are compared with.
    """
    est = estimate_correlations(records)
    rho = tomography_reconstruct(records)
    spectra = {p: spin_spectrum(m) for p, m in est.t.items()}
    dirs = {p: optimal_chsh_settings(m).dirs for p, m in est.t.items()}
    names = list(HEADLINE) + [f"chsh2_{p}" for p in ("AB", "AC", "BC")]
    if target is not None:
        names.append("fidelity")
    boot = bootstrap_many(records, names, resamples=resamples, seed=seed, dirs=dirs, target=target)
    rho_a = rho.reshape(2, 4, 2, 4).trace(axis1=1, axis2=3)
    report = {
        "bloch": {x: v.tolist() for x, v in est.bloch.items()},
        "bloch_norms": {x: float(np.linalg.norm(v)) for x, v in est.bloch.items()},
        "correlation_matrices": {p: m.tolist() for p, m in est.t.items()},
        "spin_spectra": {p: asdict(sp) for p, sp in spectra.items()},
        "invariance": {
            "iso_sum": sum(sp.s_iso for sp in spectra.values()),
            "max_aniso_deviation": max(
                abs(a - b)
                for p, q in PAIRINGS
                for a, b in zip(spectra[p].delta, spectra[q].delta)
            ),
        },
        "horodecki": {p: sp.horodecki for p, sp in spectra.items()},
        "optimal_chsh": {p: _settings_dict(m) for p, m in est.t.items()},
        "monogamy": {
            "m_ab": spectra["AB"].horodecki,
            "m_ac": spectra["AC"].horodecki,
            "bound": 2.0 * (1.0 - spectra["BC"].s[2]),
        },
        "residual_tangle": float(4.0 * np.linalg.det(rho_a).real)
        - boot["conc_AB"].estimate ** 2
        - boot["conc_AC"].estimate ** 2,
        "statistics": {n: asdict(b) for n, b in boot.items()},
        "resamples": resamples,
        "seed": seed,
    }
    if target is not None:
        f = fidelity(rho, target)
        report["fidelity"] = {"squared_overlap": f, "root": math.sqrt(f)}
    return report


# -- tables ---------------------------------------------------------------------


@dataclass
class Cell:
    column: str
    statistic: str
    value: float
    error: float | None
    paper: str
    paper_value: float
    paper_sigma: float
    tolerance: float
    status: str


@dataclass
class Row:
    label: str
    cells: list


@dataclass
class TableReport:
    table_id: str
    title: str
    columns: list
    rows: list
    metadata: dict = field(default_factory=dict)

    def cell(self, label, column):
        for row in self.rows:
            if row.label == label:
                for c in row.cells:
                    if c.column == column or c.statistic == column:
                        return c
        raise KeyError((label, column))


def classify(value, ref, error=None):
    """``consistent`` within 3 combined sigma, ``paper-systematic`` within the
    comparison tolerance max(5 sigma_paper, 0.05), else ``disagree``."""
    dev = abs(value - ref.value)
    sigma = math.hypot(ref.sigma, error or 0.0)
    if sigma > 0 and dev <= 3.0 * sigma:
        return "consistent"
    if dev <= ref.tolerance():
        return "paper-systematic"
    return "disagree"


def table_state(spec, angles):
    return w_class_state(*angles) if spec.family == "w" else ghz_class_state(*angles)


def build_table(table_id, mode=EXACT, shots=DEFAULT_SHOTS, seed=0, resamples=200):
    spec = get_table(table_id)
    if mode not in (EXACT, SIMULATED):
        raise UsageError(f"unknown mode {mode!r}")
    if mode == SIMULATED and resamples < 100:
        raise UsageError("resamples must be >= 100 in simulated mode")
    refs = spec.reference()
    names = [stat for _, stat in spec.columns]
    seeds = np.random.SeedSequence(seed).spawn(len(spec.rows))
    rows = []
    for (label, angles, _), row_seed in zip(spec.rows, seeds):
        state = table_state(spec, angles)
        dirs = optimal_directions(state)
        if mode == EXACT:
            vals = exact_statistics(state, names, dirs)
            errs = dict.fromkeys(names)
        else:
            sim_seed, boot_seed = (int(x) for x in row_seed.generate_state(2))
            records = simulate_counts(state, shots, sim_seed)
            boot = bootstrap_many(records, names, resamples, boot_seed, dirs=dirs)
            vals = {n: b.estimate for n, b in boot.items()}
            errs = {n: b.std_error for n, b in boot.items()}
        cells = []
        for hdr, stat in spec.columns:
            ref = refs[label][hdr]
            cells.append(
                Cell(hdr, stat, vals[stat], errs[stat], ref.text, ref.value, ref.sigma,
                     ref.tolerance(), classify(vals[stat], ref, errs[stat]))
            )
        rows.append(Row(label, cells))
    meta = {"mode": mode, "tool_version": __version__}
    if mode == SIMULATED:
        meta.update(seed=seed, shots_per_setting=shots, resamples=resamples)
    return TableReport(spec.table_id, spec.title, [h for h, _ in spec.columns], rows, meta)


def _fmt_value_error(value, error):
    if error is None:
        return f"{value:.4f}"
    if error <= 0:
        return f"{value:.3f}(0)"
    digits = max(0, -int(math.floor(math.log10(error))))
    scaled = int(round(error * 10 ** digits))
    return f"{value:.{digits}f}({scaled})"


def render(report, fmt):
    fmt = fmt.lower()
    if fmt == "json":
        return json.dumps(asdict(report), indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        for k, v in report.metadata.items():
            buf.write(f"# {k}={v}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["table", "state", "column", "statistic", "value", "error",
                    "paper", "paper_value", "paper_sigma", "tolerance", "status"])
        for row in report.rows:
            for c in row.cells:
                w.writerow([report.table_id, row.label, c.column, c.statistic, repr(c.value),
                            "" if c.error is None else repr(c.error), c.paper, c.paper_value,
                            c.paper_sigma, c.tolerance, c.status])
        return buf.getvalue()
    if fmt == "markdown":
        meta = ", ".join(f"{k}={v}" for k, v in report.metadata.items())
        lines = [f"### {report.table_id}: {report.title}", "", f"_{meta}_", "",
                 "Cells: this run / published.", ""]
        lines.append("| state | " + " | ".join(report.columns) + " |")
        lines.append("|---" * (len(report.columns) + 1) + "|")
        for row in report.rows:
            cells = []
            for c in row.cells:
                flag = "" if c.status == "consistent" else (" †" if c.status == "paper-systematic" else " ✗")
                cells.append(f"{_fmt_value_error(c.value, c.error)} / {c.paper}{flag}")
            lines.append(f"| {row.label} | " + " | ".join(cells) + " |")
        lines += ["", "† outside the published error but within max(5σ, 0.05); ✗ beyond that.", ""]
        return "\n".join(lines)
    raise UsageError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")
