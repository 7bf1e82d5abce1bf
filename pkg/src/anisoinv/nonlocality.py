"""Horodecki parameter, CHSH values, optimal settings and Bell monogamy.

Direction convention: the CHSH correlator for directions ``a`` (first party
of the pair) and ``b`` (second party) is ``a @ T @ b``.
"""
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, ParseError
from .invariants import spin_spectrum
from .linalg import hermitian_eigensystem
from .states import Pair, correlation_matrix

UNIT_TOL = 1e-10


@dataclass(frozen=True)
class MeasurementDirections:
    a1: np.ndarray
    a2: np.ndarray
    b1: np.ndarray
    b2: np.ndarray

    def __post_init__(self):
        for name in ("a1", "a2", "b1", "b2"):
            vec = np.array(getattr(self, name), dtype=float).reshape(-1)
            if vec.shape != (3,):
                raise ContractViolation(f"direction {name} must have 3 components")
            norm = np.linalg.norm(vec)
            if abs(norm - 1.0) > UNIT_TOL:
                raise ContractViolation(f"direction {name} has norm {norm:.12f}, expected 1")
            vec.setflags(write=False)
            object.__setattr__(self, name, vec)

    def to_dict(self):
        return {k: getattr(self, k).tolist() for k in ("a1", "a2", "b1", "b2")}

    @classmethod
    def from_dict(cls, d):
        missing = [k for k in ("a1", "a2", "b1", "b2") if k not in d]
        if missing:
            raise ParseError(f"directions missing fields {missing}")
        return cls(*(d[k] for k in ("a1", "a2", "b1", "b2")))


@dataclass(frozen=True)
class ChshSettings:
    dirs: MeasurementDirections
    value: float
    degenerate: bool = False


@dataclass(frozen=True)
class MonogamyReport:
    m_ab: float
    m_ac: float
    bound: float
    chsh_ab_sq: float
    chsh_ac_sq: float

    @property
    def slack(self):
        return self.bound - self.m_ab - self.m_ac


def load_directions(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    return MeasurementDirections.from_dict(data)


def horodecki_parameter(t):
    """M = s1 + s2, the largest attainable <B>^2 / 4."""
    return spin_spectrum(t).horodecki


def chsh_value(t, dirs):
    t = np.asarray(t, dtype=float)
    return float(
        dirs.a1 @ t @ dirs.b1 + dirs.a1 @ t @ dirs.b2 + dirs.a2 @ t @ dirs.b1 - dirs.a2 @ t @ dirs.b2
    )


def chsh_expectation(state, pair, dirs):
    return chsh_value(correlation_matrix(state, Pair.coerce(pair)), dirs)


def _orthogonal_unit(v):
    trial = np.array([1.0, 0.0, 0.0]) if abs(v[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    w = trial - (trial @ v) * v
    return w / np.linalg.norm(w)


def optimal_chsh_settings(t):
    """Directions reaching the maximal CHSH value 2 sqrt(s1 + s2) for correlation matrix ``t``."""
    t = np.asarray(t, dtype=float)
    w, v = hermitian_eigensystem(t.T @ t)
    w, v = np.clip(w, 0.0, None), v.real
    s1, s2 = w[0], w[1]
    if s1 < 1e-12:
        ex, ey, ez = np.eye(3)
        return ChshSettings(MeasurementDirections(ex, ey, ex, ey), 0.0, degenerate=True)
    v1, v2 = v[:, 0], v[:, 1]
    chi = math.atan2(math.sqrt(s2), math.sqrt(s1))
    b1 = math.cos(chi) * v1 + math.sin(chi) * v2
    b2 = math.cos(chi) * v1 - math.sin(chi) * v2
    plus = t @ (b1 + b2)
    minus = t @ (b1 - b2)
    a1 = plus / np.linalg.norm(plus)
    nm = np.linalg.norm(minus)
    a2 = minus / nm if nm > 1e-12 else _orthogonal_unit(a1)
    dirs = MeasurementDirections(a1, a2, b1 / np.linalg.norm(b1), b2 / np.linalg.norm(b2))
    return ChshSettings(dirs, 2.0 * math.sqrt(s1 + s2))


def monogamy_report(state, dirs_ab, dirs_ac):
    """Horodecki pair sum against 2(1 - s3^BC), plus the CHSH squares at the given settings."""
    t_ab = correlation_matrix(state, Pair.AB)
    t_ac = correlation_matrix(state, Pair.AC)
    s3_bc = spin_spectrum(correlation_matrix(state, Pair.BC)).s[2]
    return MonogamyReport(
        m_ab=horodecki_parameter(t_ab),
        m_ac=horodecki_parameter(t_ac),
        bound=2.0 * (1.0 - s3_bc),
        chsh_ab_sq=chsh_value(t_ab, dirs_ab) ** 2,
        chsh_ac_sq=chsh_value(t_ac, dirs_ac) ** 2,
    )


def random_directions(rng):
    """Four independent uniformly random unit vectors."""
    z = rng.standard_normal((4, 3))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return MeasurementDirections(*z)
