"""Schmidt states, dichotomic POVM families and their validation."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import numpy.typing as npt

from . import matcore
from .exceptions import ContractError, ShapeError
from .matcore import ComplexMatrix

NORM_ATOL = 1e-12
SPECTRUM_ATOL = 1e-10
COMPLETENESS_ATOL = 1e-12
IMAG_ATOL = 1e-10

# Shared by every high-dimensional Bob measurement for input 1.
I_D_NOTE = (
    "B_{0|1} pads with the identity on the first d-2 levels, so the effect "
    "is d x d for every d (a fixed 4 x 4 identity would only conform at d = 4)"
)

_PAULI = {
    1: np.array([[0, 1], [1, 0]], dtype=np.complex128),
    2: np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    3: np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


class Party(str, enum.Enum):
    ALICE = "alice"
    BOB = "bob"


def _frozen(m: npt.ArrayLike) -> ComplexMatrix:
    out = np.array(m, dtype=np.complex128)
    out.setflags(write=False)
    return out


def pauli(index: int) -> ComplexMatrix:
    """Return sigma_1, sigma_2 or sigma_3 as a fresh array."""
    try:
        return _PAULI[index].copy()
    except (KeyError, TypeError):
        raise ValueError(f"Pauli index must be 1, 2 or 3, got {index!r}") from None


@dataclass(frozen=True)
class SchmidtVector:
    """Schmidt coefficients ``c_i`` of ``sum_i c_i |i>|i>``.

    Coefficients must be non-negative, non-increasing and square-normalized.
    """

    coeffs: tuple[float, ...]

    def __post_init__(self) -> None:
        c = tuple(float(x) for x in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if not c:
            raise ContractError("Schmidt vector must have at least one coefficient")
        if any(not math.isfinite(x) or x < 0.0 or x > 1.0 + NORM_ATOL for x in c):
            raise ContractError(f"Schmidt coefficients must lie in [0, 1], got {c}")
        if any(b > a for a, b in zip(c, c[1:])):
            raise ContractError(f"Schmidt coefficients must be in descending order, got {c}")
        norm = math.fsum(x * x for x in c)
        if abs(norm - 1.0) > NORM_ATOL:
            raise ContractError(f"sum of squared Schmidt coefficients is {norm!r}, expected 1")

    @classmethod
    def from_weights(cls, weights: Sequence[float]) -> SchmidtVector:
        """Build from squared coefficients ``c_i**2``."""
        if any(w < 0 for w in weights):
            raise ContractError(f"Schmidt weights must be non-negative, got {list(weights)}")
        return cls(tuple(math.sqrt(w) for w in weights))

    @classmethod
    def uniform(cls, n: int) -> SchmidtVector:
        return cls((1.0 / math.sqrt(n),) * n)

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(x * x for x in self.coeffs)

    @property
    def is_entangled(self) -> bool:
        return sum(1 for x in self.coeffs if x > 0.0) >= 2

    def __len__(self) -> int:
        return len(self.coeffs)

    def padded(self, n: int) -> tuple[float, ...]:
        if len(self.coeffs) > n:
            raise ContractError(f"{len(self.coeffs)} Schmidt coefficients do not fit dimension {n}")
        return self.coeffs + (0.0,) * (n - len(self.coeffs))


@dataclass(frozen=True)
class BlochDirection:
    r: tuple[float, float, float]

    def __post_init__(self) -> None:
        r = tuple(float(x) for x in self.r)
        if len(r) != 3:
            raise ValueError(f"Bloch direction needs three components, got {len(r)}")
        if abs(math.sqrt(math.fsum(x * x for x in r)) - 1.0) > NORM_ATOL:
            raise ValueError(f"Bloch direction must have unit norm, got {r}")
        object.__setattr__(self, "r", r)

    def sigma(self) -> ComplexMatrix:
        return sum(x * _PAULI[i + 1] for i, x in enumerate(self.r))


@dataclass(frozen=True)
class Effect:
    """A single POVM element; the matrix is checked for Hermiticity only."""

    matrix: ComplexMatrix

    def __post_init__(self) -> None:
        m = matcore.require_hermitian(self.matrix, "effect")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class DichotomicPovm:
    """Binary measurement ``{e0, e1}`` for one input of one party."""

    e0: Effect
    e1: Effect
    label: int
    party: Party
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.e0.dim != self.e1.dim:
            raise ShapeError(f"effects act on different dimensions ({self.e0.dim} vs {self.e1.dim})")
        if self.label not in (0, 1):
            raise ValueError(f"input label must be 0 or 1, got {self.label!r}")
        object.__setattr__(self, "party", Party(self.party))

    @classmethod
    def from_effect(cls, e0: npt.ArrayLike, label: int, party: Party | str, notes: tuple[str, ...] = ()) -> DichotomicPovm:
        e0 = matcore.as_matrix(e0)
        return cls(Effect(e0), Effect(np.eye(e0.shape[0]) - e0), label, Party(party), notes)

    @property
    def dim(self) -> int:
        return self.e0.dim


def _check_unit_interval(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return value


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not 0.0 < theta <= math.pi / 4 + 1e-15:
        raise ValueError(f"theta must lie in (0, pi/4], got {theta!r}")
    return theta


def _input_sign(x: int) -> float:
    if x not in (0, 1):
        raise ValueError(f"input label must be 0 or 1, got {x!r}")
    return 1.0 if x == 0 else -1.0


def _check_highd(d: int) -> int:
    if int(d) != d or d < 3:
        raise ValueError(f"block measurements need d >= 3, got {d!r}")
    return int(d)


def _block_diag(top: npt.ArrayLike, bottom: npt.ArrayLike) -> ComplexMatrix:
    top, bottom = np.atleast_2d(top), np.atleast_2d(bottom)
    n, m = top.shape[0], bottom.shape[0]
    out = np.zeros((n + m, n + m), dtype=np.complex128)
    out[:n, :n] = top
    out[n:, n:] = bottom
    return out


def schmidt_pure_state(c: SchmidtVector, dim: int, dim_b: int | None = None) -> ComplexMatrix:
    """Density matrix of ``sum_i c_i |i>|i>`` on ``C^dim (x) C^dim_b``.

    ``dim_b`` defaults to ``dim``; missing coefficients count as zero.
    """
    if not isinstance(c, SchmidtVector):
        raise ContractError(f"expected a SchmidtVector, got {type(c).__name__}")
    dim_b = dim if dim_b is None else dim_b
    coeffs = c.padded(min(dim, dim_b))
    psi = np.zeros(dim * dim_b, dtype=np.complex128)
    for i, ci in enumerate(coeffs):
        psi[i * dim_b + i] = ci
    return np.outer(psi, psi.conj())


def unsharp_effect(gamma: float, r: BlochDirection) -> Effect:
    """``(I + gamma * sigma_r) / 2``."""
    gamma = _check_unit_interval("gamma", gamma)
    return Effect(0.5 * (np.eye(2) + gamma * r.sigma()))


def alice_qubit_povm(theta: float, x: int) -> DichotomicPovm:
    theta = _check_theta(theta)
    sign = _input_sign(x)
    r = BlochDirection((math.cos(theta), 0.0, sign * math.sin(theta)))
    return DichotomicPovm.from_effect(unsharp_effect(1.0, r).matrix, x, Party.ALICE)


def bob_qubit_povm(gamma1: float, y: int) -> DichotomicPovm:
    gamma1 = _check_unit_interval("gamma1", gamma1)
    if y == 0:
        e0 = unsharp_effect(1.0, BlochDirection((1.0, 0.0, 0.0)))
    elif y == 1:
        e0 = unsharp_effect(gamma1, BlochDirection((0.0, 0.0, 1.0)))
    else:
        raise ValueError(f"input label must be 0 or 1, got {y!r}")
    return DichotomicPovm.from_effect(e0.matrix, y, Party.BOB)


def alice_highd_povm(d: int, theta: float, x: int) -> DichotomicPovm:
    d, theta = _check_highd(d), _check_theta(theta)
    sign = _input_sign(x)
    tilted = math.cos(theta) * _PAULI[3] + sign * math.sin(theta) * _PAULI[1]
    obs = _block_diag(tilted, np.eye(d - 2))
    return DichotomicPovm.from_effect(0.5 * (np.eye(d) + obs), x, Party.ALICE)


def bob_highd_povm(d: int, gamma1: float, y: int) -> DichotomicPovm:
    d, gamma1 = _check_highd(d), _check_unit_interval("gamma1", gamma1)
    if y == 0:
        obs, notes = _block_diag(np.eye(d - 2), _PAULI[3]), ()
    elif y == 1:
        obs, notes = _block_diag(np.eye(d - 2), gamma1 * _PAULI[1]), (I_D_NOTE,)
    else:
        raise ValueError(f"input label must be 0 or 1, got {y!r}")
    return DichotomicPovm.from_effect(0.5 * (np.eye(d) + obs), y, Party.BOB, notes)


def expectation_operator(m: DichotomicPovm) -> ComplexMatrix:
    """Observable ``e0 - e1`` associated with a dichotomic measurement."""
    return m.e0.matrix - m.e1.matrix


@dataclass(frozen=True)
class PovmReport:
    valid: bool
    hermiticity_residual: float
    spectrum_violation: float
    completeness_residual: float
    violations: tuple[str, ...]
    notes: tuple[str, ...]


def validate_povm(m: DichotomicPovm) -> PovmReport:
    herm = max(matcore.hermiticity_residual(e.matrix) for e in (m.e0, m.e1))
    spec = 0.0
    for e in (m.e0, m.e1):
        lam = np.linalg.eigvalsh(e.matrix)
        spec = max(spec, float(-lam[0]), float(lam[-1] - 1.0))
    complete = float(np.max(np.abs(m.e0.matrix + m.e1.matrix - np.eye(m.dim))))

    violations = []
    if herm > matcore.HERMITIAN_ATOL:
        violations.append(f"hermiticity: residual {herm:.3e}")
    if spec > SPECTRUM_ATOL:
        violations.append(f"spectrum: outside [0, 1] by {spec:.3e}")
    if complete > COMPLETENESS_ATOL:
        violations.append(f"completeness: |e0 + e1 - I| = {complete:.3e}")
    return PovmReport(
        valid=not violations,
        hermiticity_residual=herm,
        spectrum_violation=max(spec, 0.0),
        completeness_residual=complete,
        violations=tuple(violations),
        notes=m.notes,
    )


def correlation(rho: npt.ArrayLike, oa: npt.ArrayLike, ob: npt.ArrayLike) -> float:
    """``Re Tr[rho (oa (x) ob)]`` for Hermitian local observables."""
    rho = matcore.as_matrix(rho)
    oa = matcore.require_hermitian(oa, "Alice observable")
    ob = matcore.require_hermitian(ob, "Bob observable")
    da, db = oa.shape[0], ob.shape[0]
    if rho.shape != (da * db, da * db):
        raise ShapeError(f"state of shape {rho.shape} does not match observables of dims {da} and {db}")
    # Tr[rho (A x B)] = sum rho[(a,b),(a',b')] A[a',a] B[b',b]
    value = np.einsum("ijkl,ki,lj->", rho.reshape(da, db, da, db), oa, ob)
    if abs(value.imag) > IMAG_ATOL:
        raise ContractError(f"correlation has imaginary part {value.imag:.3e}")
    return float(value.real)
