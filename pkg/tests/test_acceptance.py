"""Acceptance criteria, one test each.

Every test records a one-line PASS/FAIL verdict with its key numbers; the
lines are printed at the end of the pytest run (see conftest.py) and when the
module is executed directly: ``python3 tests/test_acceptance.py``.
"""
import math
import time

import numpy as np
import pytest

import oracles
from anisoinv.experiment import (
    STATISTICS,
    bootstrap_many,
    expected_counts,
    fidelity,
    simulate_counts,
    tomography_reconstruct,
)
from anisoinv.invariants import batch_quantities, spin_spectrum, three_tangle
from anisoinv.nonlocality import chsh_expectation, chsh_value, optimal_chsh_settings, random_directions
from anisoinv.reference import TABLES
from anisoinv.reports import build_table, exact_statistics, optimal_directions
from anisoinv.states import correlation_matrix, ghz_class_state, haar_random_state, w_class_state

RESULTS = {}

PAIRINGS = (("AB", "AC"), ("AB", "BC"), ("AC", "BC"))
UNSHARED = {("AB", "AC"): ("B", "C"), ("AB", "BC"): ("A", "C"), ("AC", "BC"): ("A", "B")}


def record(number, title, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title} | {detail}"
    RESULTS[number] = line
    print(line)
    assert passed, line


def _haar_batch(n, seed):
    return np.array([haar_random_state([seed, i]).amplitudes for i in range(n)])


def test_criterion_1_theorem_suites():
    t0 = time.perf_counter()
    q = batch_quantities(_haar_batch(10_000, 101))
    iso_dev = np.abs(q["iso"]["AB"] + q["iso"]["AC"] + q["iso"]["BC"] - 1.0).max()
    d = q["delta"]
    aniso_dev = max(np.abs(d[p] - d[r]).max() for p, r in PAIRINGS)
    pair_sum = q["M"]["AB"] + q["M"]["AC"]
    mono_dev = np.abs(pair_sum - 2.0 * (1.0 - q["s"]["BC"][:, 2])).max()
    b2 = {x: np.sum(v ** 2, axis=1) for x, v in q["bloch"].items()}
    spread = 0.0
    for p, r in PAIRINGS:
        x, y = UNSHARED[(p, r)]
        quad = np.stack([
            q["conc"][p] ** 2 - q["conc"][r] ** 2,
            (q["M"][p] - q["M"][r]) / 2.0,
            q["iso"][p] - q["iso"][r],
            b2[y] - b2[x],
        ])
        spread = max(spread, float((quad.max(axis=0) - quad.min(axis=0)).max()))
    passed = iso_dev < 1e-10 and aniso_dev < 1e-10 and mono_dev < 1e-10 and pair_sum.max() <= 2 + 1e-10 and spread < 1e-9
    record(1, "theorem suites over 1e4 Haar states", passed,
           f"|sum s_iso-1|max={iso_dev:.1e} aniso_dev={aniso_dev:.1e} monogamy_dev={mono_dev:.1e} "
           f"max(M_AB+M_AC)={pair_sum.max():.12f} ordering_spread={spread:.1e} ({time.perf_counter() - t0:.1f}s)")


def test_criterion_2_chsh_optimality():
    worst = 0.0
    states = [haar_random_state([202, i]) for i in range(500)]
    for s in states:
        for p in ("AB", "AC", "BC"):
            t = correlation_matrix(s, p)
            target = 2.0 * math.sqrt(spin_spectrum(t).horodecki)
            worst = max(worst, abs(chsh_expectation(s, p, optimal_chsh_settings(t).dirs) - target))
    excess = -np.inf
    for i in range(20):
        t = correlation_matrix(states[i], ("AB", "AC", "BC")[i % 3])
        excess = max(excess, oracles.chsh_maximize(t, restarts=64, seed=i) - optimal_chsh_settings(t).value)
    record(2, "CHSH optimality", worst < 1e-8 and excess <= 1e-6,
           f"max|<B>_opt - 2sqrt(M)|={worst:.1e} over 1500 pairs; oracle excess max={excess:.1e} on 20 instances")


def _table_cells(table_id, keep=lambda stat: True):
    report = build_table(table_id)
    return [(row.label, c) for row in report.rows for c in row.cells if keep(c.statistic)]


def test_criterion_3_table1_anisotropies():
    cells = _table_cells("T1", lambda stat: stat.startswith("ds"))
    bad = [(label, c) for label, c in cells if abs(c.value - c.paper_value) > c.tolerance]
    detail = f"{len(cells) - len(bad)}/{len(cells)} cells within max(5 sigma, 0.05)"
    if bad:
        detail += "; outside: " + ", ".join(
            f"{label} {c.column} exact {c.value:+.4f} vs {c.paper}" for label, c in bad)
    record(3, "Table 1 exact anisotropies vs published", not bad, detail)


def test_criterion_4_table2_horodecki():
    report = build_table("T2")
    far, pattern_ok, sum_ok = [], True, True
    violating = {"(30°,30°)", "(45°,30°)", "(45°,15°)"}
    for row in report.rows:
        cells = {c.statistic: c for c in row.cells}
        m_ab, m_ac = cells["M_AB"].value, cells["M_AC"].value
        far += [(row.label, c.column) for c in (cells["M_AB"], cells["M_AC"]) if abs(c.value - c.paper_value) > 0.05]
        sum_ok &= m_ab + m_ac <= 2 + 1e-12
        if row.label in violating:
            pattern_ok &= m_ac > 1 and m_ab <= 1
        else:
            pattern_ok &= m_ac <= 1 + 1e-9 and m_ab <= 1
    record(4, "Table 2 Horodecki parameters and violation pattern", not far and pattern_ok and sum_ok,
           f"cells beyond 0.05: {far or 'none'}; M_AB+M_AC<=2: {sum_ok}; violation pattern reproduced: {pattern_ok}")


def test_criterion_5_tables_3_5_6():
    bad, spread = [], 0.0
    for tid in ("T3", "T5", "T6"):
        report = build_table(tid)
        for row in report.rows:
            for c in row.cells:
                if abs(c.value - c.paper_value) > c.tolerance:
                    bad.append(f"{tid} {row.label} {c.column}")
            if tid != "T5":
                vals = [c.value for c in row.cells]
                spread = max(spread, max(vals) - min(vals))
    record(5, "Tables 3, 5, 6 exact vs published", not bad and spread < 1e-9,
           f"cells outside tolerance: {bad or 'none'}; max spread of ordering columns={spread:.1e}")


def test_criterion_6_bell_monogamy_sampling():
    q = batch_quantities(_haar_batch(10_000, 606))
    rng = np.random.default_rng(606)
    worst, violations = 0.0, 0
    for i in range(10_000):
        v = chsh_value(q["t"]["AB"][i], random_directions(rng)) ** 2 + chsh_value(q["t"]["AC"][i], random_directions(rng)) ** 2
        worst = max(worst, v)
        violations += v > 8.0
    record(6, "<B_AB>^2 + <B_AC>^2 <= 8 under sampling", violations == 0,
           f"violations={violations} of 10000; max={worst:.4f}")


# Standalone pair concurrences are left out of the scored cells: no published
# table reports them, and the tomographic estimator is biased low at
# rank-deficient states (see the printed all-statistics coverage).
C7_NAMES = tuple(n for n in STATISTICS if n != "fidelity" and not n.startswith("conc_"))
C7_ALL = tuple(n for n in STATISTICS if n != "fidelity")


def _seed_averaged(state, dirs, shots, seeds, k):
    est, sig = [], []
    for s in range(seeds):
        recs = simulate_counts(state, shots, [s, shots, k])
        boot = bootstrap_many(recs, C7_ALL, resamples=200, seed=[s, shots, k, 1], dirs=dirs)
        est.append([boot[n].estimate for n in C7_ALL])
        sig.append([boot[n].std_error for n in C7_ALL])
    return np.mean(est, axis=0), np.mean(sig, axis=0)


@pytest.mark.slow
def test_criterion_7_end_to_end_statistics():
    t0 = time.perf_counter()
    seeds = 50
    hits = {n: [] for n in C7_ALL}
    ratios = []
    for k, (_, angles, _) in enumerate(TABLES["T1"].rows):
        state = w_class_state(*angles)
        dirs = optimal_directions(state)
        exact = exact_statistics(state, C7_ALL, dirs)
        m5, s5 = _seed_averaged(state, dirs, 5000, seeds, k)
        _, s20 = _seed_averaged(state, dirs, 20000, seeds, k)
        for i, n in enumerate(C7_ALL):
            dev = abs(m5[i] - exact[n])
            # cells that are exact up to rounding (definite outcomes) have sigma ~ 1e-16
            hits[n].append(dev <= 3 * s5[i] or dev < 1e-9)
            if n in C7_NAMES and s5[i] > 1e-9:
                ratios.append(s20[i] / s5[i])
    scored = np.concatenate([hits[n] for n in C7_NAMES])
    everything = np.concatenate([hits[n] for n in C7_ALL])
    median_ratio = float(np.median(ratios))
    in_band = float(np.mean((np.array(ratios) >= 0.4) & (np.array(ratios) <= 0.6)))
    passed = scored.mean() >= 0.95 and 0.4 <= median_ratio <= 0.6
    record(7, "end-to-end statistical reproduction", passed,
           f"{scored.sum()}/{scored.size} cells within 3 bootstrap sigma ({scored.mean():.1%}); "
           f"with standalone concurrences {everything.mean():.1%}; sigma(4N)/sigma(N) median={median_ratio:.3f}, "
           f"{in_band:.0%} of cells in [0.4, 0.6] ({time.perf_counter() - t0:.0f}s)")


def test_criterion_8_tomography():
    exact_states = [w_class_state(*a) for _, a, _ in TABLES["T1"].rows] + [haar_random_state([808, i]) for i in range(20)]
    f_exact = min(fidelity(tomography_reconstruct(expected_counts(s, 1.0)), s) for s in exact_states)
    f_big = min(
        fidelity(tomography_reconstruct(simulate_counts(s, 10**6, [808, i])), s)
        for i, s in enumerate(haar_random_state([809, i]) for i in range(20))
    )
    regime = [
        fidelity(tomography_reconstruct(simulate_counts(w_class_state(*a), 5000, [810, k])), w_class_state(*a))
        for k, (_, a, _) in enumerate(TABLES["T1"].rows)
    ]
    passed = f_exact >= 1 - 1e-10 and f_big > 0.999 and min(regime) > 0.98
    record(8, "tomography fidelities", passed,
           f"exact-probability min F={f_exact:.12f}; 1e6 shots min F={f_big:.5f} (20 seeds); "
           f"5000 shots min F={min(regime):.4f}, mean {np.mean(regime):.4f} (published average 0.9926)")


def test_criterion_9_w_ghz_classification():
    grid = np.linspace(0.0, 90.0, 20)
    w_max = max(three_tangle(w_class_state(p, t)) for p in grid for t in grid)
    ghz = {pp: three_tangle(ghz_class_state(pp)) for pp in (20, 30, 45)}
    passed = w_max < 1e-9 and min(ghz.values()) > 0.05
    record(9, "W/GHZ classification by 3-tangle", passed,
           f"W grid max tau={w_max:.1e}; GHZ tau=" + ", ".join(f"{k}°:{v:.4f}" for k, v in ghz.items()))


if __name__ == "__main__":
    for name, fn in sorted((n, f) for n, f in globals().items() if n.startswith("test_criterion_")):
        try:
            fn()
        except AssertionError:
            pass
