"""Two states with identical anisotropies but different 3-tangle.

W(22.5°, 0) and GHZ(45°) both have spin spectrum anisotropies
(1/3, -1/6, -1/6) on every pair, yet the first has no residual tangle
and the second has tau = 1/2.
"""
from anisoinv.invariants import invariance_report, three_tangle
from anisoinv.states import ghz_class_state, w_class_state


def main():
    for state in (w_class_state(22.5, 0.0), ghz_class_state(45.0)):
        rep = invariance_report(state)
        delta = ", ".join(f"{d:+.6f}" for d in rep.aniso_by_pair["AB"])
        print(f"{state.label:<12} delta=({delta})  tau={three_tangle(state):.6f}")


if __name__ == "__main__":
    main()
