"""Three-qubit pure states, reduced pairs, Bloch vectors and spin correlation matrices.

Basis ordering: the amplitude of ``|abc>`` sits at index ``4a + 2b + c``,
and ``|0>`` is the +1 eigenstate of sigma_3. All angles are in degrees.
"""
import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, InternalConsistencyError, ParseError, UsageError
from .linalg import PAULI, is_unitary, tensor_product

NORM_TOL = 1e-12
CUSTOM_NORM_TOL = 1e-6


class Party(enum.IntEnum):
    A = 0
    B = 1
    C = 2


class Pair(enum.Enum):
    AB = (Party.A, Party.B)
    AC = (Party.A, Party.C)
    BC = (Party.B, Party.C)

    @property
    def parties(self):
        return self.value

    @property
    def complement(self):
        (rest,) = set(Party) - set(self.value)
        return rest

    @classmethod
    def coerce(cls, pair):
        if isinstance(pair, cls):
            return pair
        try:
            return cls[str(pair).upper()]
        except KeyError:
            raise UsageError(f"unknown pair {pair!r}; expected AB, AC or BC") from None


PAIRS = (Pair.AB, Pair.AC, Pair.BC)


def _coerce_party(party):
    if isinstance(party, Party):
        return party
    try:
        return Party[str(party).upper()]
    except KeyError:
        raise UsageError(f"unknown party {party!r}; expected A, B or C") from None


@dataclass(frozen=True, eq=False)
class PureState3:
    """Normalized three-qubit state vector (8 complex amplitudes)."""

    amplitudes: np.ndarray
    label: str = ""

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape != (8,):
            raise ContractViolation(f"expected 8 amplitudes, got {amps.size}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ContractViolation(f"state norm {norm!r} differs from 1 by more than {NORM_TOL:g}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_unnormalized(cls, amps, label=""):
        amps = np.asarray(amps, dtype=np.complex128).reshape(-1)
        return cls(amps / np.linalg.norm(amps), label)

    @property
    def tensor(self):
        """Amplitudes reshaped to ``(2, 2, 2)`` with axes (A, B, C)."""
        return self.amplitudes.reshape(2, 2, 2)

    def density_matrix(self):
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def __repr__(self):
        tag = f" {self.label}" if self.label else ""
        return f"<PureState3{tag} {np.array2string(self.amplitudes, precision=4)}>"


def w_class_state(phi, theta):
    """cos(phi)|110> + sin(phi)cos(theta)|011> + sin(phi)sin(theta)|101>."""
    p, t = math.radians(phi), math.radians(theta)
    amps = np.zeros(8, dtype=np.complex128)
    amps[0b110] = math.cos(p)
    amps[0b011] = math.sin(p) * math.cos(t)
    amps[0b101] = math.sin(p) * math.sin(t)
    return PureState3.from_unnormalized(amps, label=f"w({phi:g},{theta:g})")


def ghz_class_state(phi_prime):
    """cos(phi')|110> + sin(phi')/sqrt2 (|011> + |001>).

    ``phi_prime`` relates to the pump angle by phi' = 90 - phi; it is taken
    as given here.
    """
    p = math.radians(phi_prime)
    amps = np.zeros(8, dtype=np.complex128)
    amps[0b110] = math.cos(p)
    amps[0b011] = math.sin(p) / math.sqrt(2)
    amps[0b001] = math.sin(p) / math.sqrt(2)
    return PureState3.from_unnormalized(amps, label=f"ghz({phi_prime:g})")


def custom_state(amplitudes):
    """State from raw amplitudes; renormalized only if already within 1e-6 of unit norm."""
    amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    if amps.shape != (8,):
        raise ContractViolation(f"expected 8 amplitudes, got {amps.size}")
    norm = np.linalg.norm(amps)
    if abs(norm - 1.0) > CUSTOM_NORM_TOL:
        raise ContractViolation(f"custom amplitudes have norm {norm:.9f}; must be 1 within {CUSTOM_NORM_TOL:g}")
    return PureState3(amps / norm, label="custom")


def haar_random_state(seed):
    """Uniformly (Haar) distributed pure state; deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    return PureState3.from_unnormalized(z, label=f"haar({seed})")


def random_local_unitary(seed):
    """Random 2x2 unitary from the QR decomposition of a complex Gaussian matrix.

    Columns are rephased so the first nonzero entry of each is real and
    non-negative. That phase choice is a local diagonal unitary, so every
    local-unitary invariant sees a Haar-distributed sample.
    """
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, _ = np.linalg.qr(z)
    for col in range(2):
        nz = np.flatnonzero(np.abs(q[:, col]) > 1e-15)
        lead = q[nz[0], col]
        q[:, col] *= np.conj(lead) / abs(lead)
    return q


def apply_local_unitaries(state, ua, ub, uc):
    for name, u in zip("ABC", (ua, ub, uc)):
        if not is_unitary(u):
            raise ContractViolation(f"local operator on {name} is not unitary within 1e-10")
    out = tensor_product(ua, ub, uc) @ state.amplitudes
    return PureState3.from_unnormalized(out, label=state.label)


def reduce_pair(state, pair):
    """Two-qubit reduced density matrix of ``pair``; the first party is the more significant qubit."""
    pair = Pair.coerce(pair)
    psi = np.moveaxis(state.tensor, int(pair.complement), 2).reshape(4, 2)
    return psi @ psi.conj().T


def reduce_single(state, party):
    party = _coerce_party(party)
    psi = np.moveaxis(state.tensor, int(party), 0).reshape(2, 4)
    return psi @ psi.conj().T


def bloch_vector(state, party):
    rho = reduce_single(state, party)
    return np.einsum("ab,jba->j", rho, PAULI[1:]).real


def correlation_matrix(state, pair):
    """T[j, k] = <sigma_j (x) sigma_k> on ``pair`` (first index on the first party)."""
    rho = reduce_pair(state, pair)
    return correlation_from_density(rho)


def correlation_from_density(rho):
    r = np.asarray(rho).reshape(2, 2, 2, 2)
    t = np.einsum("abcd,jca,kdb->jk", r, PAULI[1:], PAULI[1:])
    if np.abs(t.imag).max() > 1e-9:
        raise InternalConsistencyError(f"correlation matrix has imaginary part {np.abs(t.imag).max():.3e}")
    return t.real


def bloch_from_density(rho):
    """First- and second-party Bloch vectors of a 4x4 two-qubit density matrix."""
    r = np.asarray(rho).reshape(2, 2, 2, 2)
    first = np.einsum("abcb,jca->j", r, PAULI[1:]).real
    second = np.einsum("abad,kdb->k", r, PAULI[1:]).real
    return first, second


# -- state file ------------------------------------------------------------

_FAMILY_FIELDS = {
    "w": ("phi_deg", "theta_deg"),
    "ghz": ("phi_prime_deg",),
    "custom": ("amplitudes",),
}


def state_from_config(config):
    """Build a state from a state-file mapping (see :func:`load_state`)."""
    if not isinstance(config, dict):
        raise ParseError("state file must hold a JSON object")
    family = config.get("family")
    if family not in _FAMILY_FIELDS:
        raise ParseError(f"field 'family': expected one of {sorted(_FAMILY_FIELDS)}, got {family!r}")
    needed = _FAMILY_FIELDS[family]
    for name in needed:
        if name not in config:
            raise ParseError(f"field {name!r} is required for family {family!r}")
    extra = set(config) - set(needed) - {"family", "label"}
    extra = {k for k in extra if k in {f for fs in _FAMILY_FIELDS.values() for f in fs}}
    if extra:
        raise ParseError(f"fields {sorted(extra)} do not apply to family {family!r}")
    try:
        if family == "w":
            return w_class_state(float(config["phi_deg"]), float(config["theta_deg"]))
        if family == "ghz":
            return ghz_class_state(float(config["phi_prime_deg"]))
        amps = config["amplitudes"]
        if len(amps) != 8 or any(len(p) != 2 for p in amps):
            raise ParseError("field 'amplitudes': expected 8 [re, im] pairs")
        return custom_state([complex(float(re), float(im)) for re, im in amps])
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (ParseError, ContractViolation)):
            raise
        raise ParseError(f"bad numeric field: {exc}") from exc


def state_to_config(state, family="custom", **angles):
    if family == "w":
        return {"family": "w", "phi_deg": angles["phi"], "theta_deg": angles["theta"]}
    if family == "ghz":
        return {"family": "ghz", "phi_prime_deg": angles["phi_prime"]}
    return {
        "family": "custom",
        "amplitudes": [[float(a.real), float(a.imag)] for a in state.amplitudes],
    }


def load_state(path):
    try:
        with open(path) as fh:
            config = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return state_from_config(config)


def save_state(path, config):
    with open(path, "w") as fh:
        json.dump(config, fh, indent=2)
        fh.write("\n")


def jittered_angles(angles, rng, hwp_width=0.5):
    """Experimental: perturb preparation angles by half-wave-plate misalignment.

    Each angle is set by a half-wave plate at half that angle, so a plate
    error drawn uniformly from +-``hwp_width`` degrees moves the state angle
    by twice the draw.
    """
    return tuple(a + 2.0 * rng.uniform(-hwp_width, hwp_width) for a in angles)
