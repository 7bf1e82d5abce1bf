"""Published measured values for the W-class and GHZ-class test states.

Uncertainties are written as last-digit standard errors, ``0.396(2)`` meaning
0.396 +- 0.002. Entries printed without one carry sigma = 0.
"""
import re
from dataclasses import dataclass

from .errors import UsageError

_CELL = re.compile(r"^\s*([-+]?\d*\.?\d+(?:[eE][-+]?\d+)?)(?:\((\d+)\))?\s*$")


@dataclass(frozen=True)
class RefValue:
    value: float
    sigma: float
    text: str

    def tolerance(self, floor=0.05, k=5.0):
        """Comparison tolerance max(k * sigma, floor)."""
        return max(k * self.sigma, floor)


def parse_cell(text):
    """``"0.396(2)"`` -> RefValue(0.396, 0.002)."""
    m = _CELL.match(text)
    if not m:
        raise ValueError(f"cannot parse reference cell {text!r}")
    number, err = m.group(1), m.group(2)
    value = float(number)
    if err is None:
        return RefValue(value, 0.0, text)
    mantissa = number.split("e")[0].split("E")[0]
    decimals = len(mantissa.split(".")[1]) if "." in mantissa else 0
    exponent = int(number.lower().split("e")[1]) if "e" in number.lower() else 0
    return RefValue(value, int(err) * 10.0 ** (exponent - decimals), text)


@dataclass(frozen=True)
class TableSpec:
    table_id: str
    title: str
    family: str  # "w" or "ghz"
    columns: tuple  # (header, statistic name)
    rows: tuple  # (label, angles, raw cells)

    def reference(self):
        return {
            label: {hdr: parse_cell(c) for (hdr, _), c in zip(self.columns, cells)}
            for label, _, cells in self.rows
        }


_SPECTRUM_COLUMNS = (
    ("s_iso^AB+s_iso^AC+s_iso^BC", "iso_sum"),
    ("ds_1^AB", "ds1_AB"), ("ds_1^AC", "ds1_AC"), ("ds_1^BC", "ds1_BC"),
    ("ds_2^AB", "ds2_AB"), ("ds_2^AC", "ds2_AC"), ("ds_2^BC", "ds2_BC"),
    ("ds_3^AB", "ds3_AB"), ("ds_3^AC", "ds3_AC"), ("ds_3^BC", "ds3_BC"),
)

_ORDERING_COLUMNS = (
    ("(C^AB)^2-(C^AC)^2", "conc2_diff_AB_AC"),
    ("(M^AB-M^AC)/2", "m_half_diff_AB_AC"),
    ("s_iso^AB-s_iso^AC", "iso_diff_AB_AC"),
    ("|c|^2-|b|^2", "bloch2_diff_AB_AC"),
)

TABLES = {
    "T1": TableSpec(
        "T1",
        "Isotropic strength sum and anisotropies, W-class states",
        "w",
        _SPECTRUM_COLUMNS,
        (
            ("(0,0)", (0, 0), ("1.006(2)", "0.665(9)", "0.667(4)", "0.667(3)", "-0.332(7)", "-0.333(4)", "-0.331(4)", "-0.332(7)", "-0.333(8)", "-0.335(5)")),
            ("(20°,0)", (20, 0), ("0.993(3)", "0.396(2)", "0.393(2)", "0.385(3)", "-0.197(4)", "-0.190(2)", "-0.192(5)", "-0.198(4)", "-0.202(2)", "-0.193(1)")),
            ("(30°,0)", (30, 0), ("1.007(6)", "0.175(3)", "0.168(4)", "0.165(3)", "-0.104(1)", "-0.107(5)", "-0.081(8)", "-0.093(3)", "-0.098(5)", "-0.087(2)")),
            ("(45°,0)", (45, 0), ("1.012(2)", "0.003(1)", "0.012(5)", "0.012(2)", "-0.037(3)", "-0.036(7)", "-0.029(7)", "-0.037(6)", "-0.032(5)", "-0.041(3)")),
            ("(30°,45°)", (30, 45), ("1.004(2)", "0.127(3)", "0.110(2)", "0.116(2)", "-0.056(5)", "-0.044(2)", "-0.056(3)", "-0.071(2)", "-0.066(2)", "-0.063(3)")),
            ("(45°,45°)", (45, 45), ("0.981(9)", "0.095(4)", "0.112(6)", "0.109(6)", "0.071(4)", "0.075(5)", "0.076(4)", "-0.166(3)", "-0.187(4)", "-0.175(5)")),
            ("(30°,30°)", (30, 30), ("1.010(9)", "0.139(4)", "0.136(5)", "0.131(5)", "-0.062(9)", "-0.059(1)", "-0.063(8)", "-0.075(8)", "-0.076(7)", "-0.067(1)")),
            ("(45°,30°)", (45, 30), ("1.007(7)", "0.074(2)", "0.065(4)", "0.066(6)", "-0.053(3)", "-0.052(3)", "-0.059(8)", "-0.128(3)", "-0.117(2)", "-0.126(4)")),
            ("(45°,15°)", (45, 15), ("1.002(7)", "0.024(1)", "0.033(1)", "0.025(7)", "0.021(5)", "0.015(7)", "0.013(7)", "-0.045(6)", "-0.048(8)", "-0.039(4)")),
        ),
    ),
    "T2": TableSpec(
        "T2",
        "Horodecki parameters and maximal CHSH values, W-class states",
        "w",
        (
            ("M^AB", "M_AB"),
            ("M^AC", "M_AC"),
            ("<B_AB>_max^2/4", "chsh2_AB"),
            ("<B_AC>_max^2/4", "chsh2_AC"),
        ),
        (
            ("(30°,45°)", (30, 45), ("0.323(3)", "0.931(2)", "0.257(3)", "0.925(3)")),
            ("(45°,45°)", (45, 45), ("0.499(2)", "1.014(6)", "0.493(9)", "0.988(4)")),
            ("(30°,30°)", (30, 30), ("0.310(9)", "1.334(4)", "0.257(6)", "1.300(2)")),
            ("(45°,30°)", (45, 30), ("0.384(4)", "1.500(3)", "0.367(2)", "1.485(6)")),
            ("(45°,15°)", (45, 15), ("0.136(7)", "1.864(6)", "0.119(4)", "1.857(2)")),
        ),
    ),
    "T3": TableSpec(
        "T3",
        "Ordering of pairwise correlations, W-class states",
        "w",
        _ORDERING_COLUMNS,
        (
            ("(0,0)", (0, 0), ("-2.783e-04", "8.000e-04", "-0.002(1)", "-7.960e-04")),
            ("(20°,0)", (20, 0), ("-0.412(4)", "-0.405(3)", "-0.403(3)", "-0.410(5)")),
            ("(30°,0)", (30, 0), ("-0.745(6)", "-0.735(4)", "-0.738(8)", "-0.746(8)")),
            ("(45°,0)", (45, 0), ("-0.985(3)", "-0.977(7)", "-0.980(2)", "-0.995(6)")),
            ("(30°,45°)", (30, 45), ("-0.309(7)", "-0.304(4)", "-0.306(2)", "-0.309(4)")),
            ("(45°,45°)", (45, 45), ("-0.237(7)", "-0.257(5)", "-0.247(5)", "-0.251(2)")),
            ("(30°,30°)", (30, 30), ("-0.502(5)", "-0.512(2)", "-0.512(2)", "-0.517(3)")),
            ("(45°,30°)", (45, 30), ("-0.543(6)", "-0.558(2)", "-0.563(5)", "-0.558(3)")),
            ("(45°,15°)", (45, 15), ("-0.861(2)", "-0.862(4)", "-0.870(5)", "-0.867(9)")),
        ),
    ),
    "T5": TableSpec(
        "T5",
        "Isotropic strength sum and anisotropies, GHZ-class states",
        "ghz",
        _SPECTRUM_COLUMNS,
        (
            ("20°", (20,), ("0.995(6)", "0.525(3)", "0.525(4)", "0.524(8)", "-0.262(5)", "-0.259(9)", "-0.262(2)", "-0.262(6)", "-0.264(5)", "-0.262(1)")),
            ("30°", (30,), ("0.992(6)", "0.413(4)", "0.413(3)", "0.415(4)", "-0.206(7)", "-0.201(9)", "-0.207(5)", "-0.206(7)", "-0.210(7)", "-0.207(5)")),
            ("45°", (45,), ("0.996(8)", "0.333(4)", "0.331(4)", "0.334(3)", "-0.202(5)", "-0.166(3)", "-0.156(6)", "-0.166(8)", "-0.166(9)", "-0.174(1)")),
        ),
    ),
    "T6": TableSpec(
        "T6",
        "Ordering of pairwise correlations, GHZ-class states",
        "ghz",
        _ORDERING_COLUMNS,
        (
            ("20°", (20,), ("-0.199(5)", "-0.209(8)", "-0.208(1)", "-0.199(6)")),
            ("30°", (30,), ("-0.372(1)", "-0.373(3)", "-0.371(7)", "-0.367(5)")),
            ("45°", (45,), ("-0.456(6)", "-0.499(7)", "-0.495(2)", "-0.480(3)")),
        ),
    ),
}

#: Tomographic fidelities of the nine W-class states (percent), and their average.
FIDELITIES = {
    "(0,0)": 99.34, "(20°,0)": 99.79, "(30°,0)": 98.76, "(45°,0)": 99.30, "(30°,45°)": 99.55,
    "(45°,45°)": 98.88, "(30°,30°)": 99.09, "(45°,30°)": 99.15, "(45°,15°)": 99.51,
}
AVERAGE_FIDELITY = RefValue(99.26, 0.3, "99.26%±0.3%")


def table_ids():
    return tuple(TABLES)


def get_table(table_id):
    key = str(table_id).upper()
    if not key.startswith("T"):
        key = "T" + key
    if key not in TABLES:
        raise UsageError(f"unknown table {table_id!r}; choose from {', '.join(TABLES)}")
    return TABLES[key]
