"""Property suites over Haar-random states, run from the ``verify`` command."""
from dataclasses import dataclass, field

import numpy as np

from .errors import UsageError
from .experiment import estimate_correlations, records_from_array, outcome_probabilities
from .invariants import batch_quantities, spin_spectrum
from .nonlocality import chsh_value, optimal_chsh_settings, random_directions
from .states import PAIRS, bloch_vector, correlation_matrix, haar_random_state

THEOREM_TOL = 1e-10
ORDERING_TOL = 1e-9
OPTIMALITY_TOL = 1e-8
ESTIMATOR_TOL = 1e-3
ESTIMATOR_SHOTS = 10**7


@dataclass
class SuiteResult:
    suite: str
    trials: int
    passed: bool
    metrics: dict = field(default_factory=dict)
    counterexample: object = None
    failure: str = ""


def _states(trials, seed):
    return [haar_random_state([seed, i]) for i in range(trials)]


def _first_bad(mask):
    idx = np.flatnonzero(mask)
    return int(idx[0]) if idx.size else None


def suite_invariance(states, seed):
    q = batch_quantities(np.array([s.amplitudes for s in states]))
    iso_dev = np.abs(q["iso"]["AB"] + q["iso"]["AC"] + q["iso"]["BC"] - 1.0)
    d = q["delta"]
    aniso_dev = np.max(
        np.stack([np.abs(d["AB"] - d["AC"]), np.abs(d["AB"] - d["BC"]), np.abs(d["AC"] - d["BC"])]),
        axis=(0, 2),
    )
    bad = (iso_dev >= THEOREM_TOL) | (aniso_dev >= THEOREM_TOL)
    return {"max_iso_sum_deviation": float(iso_dev.max()),
            "max_aniso_deviation": float(aniso_dev.max())}, _first_bad(bad)


def suite_monogamy(states, seed):
    q = batch_quantities(np.array([s.amplitudes for s in states]))
    pair_sum = q["M"]["AB"] + q["M"]["AC"]
    identity_dev = np.abs(pair_sum - 2.0 * (1.0 - q["s"]["BC"][:, 2]))
    rng = np.random.default_rng(seed)
    chsh_sum = np.empty(len(states))
    for i in range(len(states)):
        chsh_sum[i] = (chsh_value(q["t"]["AB"][i], random_directions(rng)) ** 2
                       + chsh_value(q["t"]["AC"][i], random_directions(rng)) ** 2)
    bad = (identity_dev >= THEOREM_TOL) | (pair_sum > 2.0 + THEOREM_TOL) | (chsh_sum > 8.0 + 1e-9)
    return {"max_pair_sum": float(pair_sum.max()),
            "max_identity_deviation": float(identity_dev.max()),
            "max_chsh_square_sum": float(chsh_sum.max())}, _first_bad(bad)


def suite_ordering(states, seed):
    q = batch_quantities(np.array([s.amplitudes for s in states]))
    b2 = {x: np.sum(v ** 2, axis=1) for x, v in q["bloch"].items()}
    unshared = {("AB", "AC"): ("B", "C"), ("AB", "BC"): ("A", "C"), ("AC", "BC"): ("A", "B")}
    spread = np.zeros(len(states))
    sign_mismatch = np.zeros(len(states), dtype=bool)
    for (p, r), (x, y) in unshared.items():
        quad = np.stack([
            q["conc"][p] ** 2 - q["conc"][r] ** 2,
            (q["M"][p] - q["M"][r]) / 2.0,
            q["iso"][p] - q["iso"][r],
            b2[y] - b2[x],
        ])
        spread = np.maximum(spread, quad.max(axis=0) - quad.min(axis=0))
        big = np.abs(quad[2]) > ORDERING_TOL
        sign_mismatch |= big & (np.sign(quad[0]) != np.sign(quad[2]))
    bad = (spread >= ORDERING_TOL) | sign_mismatch
    return {"max_spread": float(spread.max()),
            "sign_mismatches": int(sign_mismatch.sum())}, _first_bad(bad)


def suite_chsh_optimality(states, seed, random_sets=16):
    rng = np.random.default_rng(seed)
    worst_gap, worst_excess = 0.0, -np.inf
    for i, state in enumerate(states):
        for p in PAIRS:
            t = correlation_matrix(state, p)
            best = optimal_chsh_settings(t)
            target = 2.0 * np.sqrt(spin_spectrum(t).horodecki)
            reached = chsh_value(t, best.dirs)
            gap = abs(reached - target)
            excess = max(abs(chsh_value(t, random_directions(rng))) for _ in range(random_sets)) - reached
            worst_gap = max(worst_gap, gap)
            worst_excess = max(worst_excess, excess)
            if gap >= OPTIMALITY_TOL or excess > OPTIMALITY_TOL:
                return {"max_gap": worst_gap, "max_random_excess": worst_excess}, i
    return {"max_gap": worst_gap, "max_random_excess": float(worst_excess)}, None


def suite_estimator_consistency(states, seed):
    worst = 0.0
    for i, state in enumerate(states):
        counts = np.rint(ESTIMATOR_SHOTS * outcome_probabilities(state))
        est = estimate_correlations(records_from_array(counts))
        errs = []
        for p in PAIRS:
            t_exact = correlation_matrix(state, p)
            errs.append(np.abs(est.t[p.name] - t_exact).max())
            se, sx = spin_spectrum(est.t[p.name]), spin_spectrum(t_exact)
            errs.append(abs(se.s_iso - sx.s_iso))
            errs.append(max(abs(a - b) for a, b in zip(se.delta, sx.delta)))
            errs.append(abs(se.horodecki - sx.horodecki))
        for x in "ABC":
            errs.append(np.abs(est.bloch[x] - bloch_vector(state, x)).max())
        err = float(max(errs))
        worst = max(worst, err)
        if err >= ESTIMATOR_TOL:
            return {"max_error": worst}, i
    return {"max_error": worst}, None


SUITES = {
    "invariance": suite_invariance,
    "monogamy": suite_monogamy,
    "ordering": suite_ordering,
    "chsh-optimality": suite_chsh_optimality,
    "estimator-consistency": suite_estimator_consistency,
}


def run_suite(name, trials=1000, seed=0):
    if name not in SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if trials < 1:
        raise UsageError("trials must be >= 1")
    states = _states(trials, seed)
    metrics, bad = SUITES[name](states, seed)
    if bad is None:
        return SuiteResult(name, trials, True, metrics)
    return SuiteResult(name, trials, False, metrics, states[bad], f"trial {bad} failed")
