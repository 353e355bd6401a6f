"""CHSH operator, CHSH values and the two-qubit Horodecki maximum."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from . import matcore
from .exceptions import ContractError, ShapeError
from .matcore import ComplexMatrix
from .protocol import ProtocolParams
from .quantum import IMAG_ATOL, SPECTRUM_ATOL, expectation_operator, pauli


@dataclass(frozen=True)
class ChshSetting:
    """Two observables per side with spectra inside [-1, 1]."""

    a0: ComplexMatrix
    a1: ComplexMatrix
    b0: ComplexMatrix
    b1: ComplexMatrix

    def __post_init__(self) -> None:
        for name in ("a0", "a1", "b0", "b1"):
            m = matcore.require_hermitian(getattr(self, name), name)
            lam = np.linalg.eigvalsh(m)
            if lam[0] < -1 - SPECTRUM_ATOL or lam[-1] > 1 + SPECTRUM_ATOL:
                raise ContractError(f"{name} has eigenvalues outside [-1, 1]: {lam[0]:.6g}..{lam[-1]:.6g}")
            object.__setattr__(self, name, m)
        if self.a0.shape != self.a1.shape or self.b0.shape != self.b1.shape:
            raise ShapeError("observables on the same side must share a dimension")

    @property
    def dims(self) -> tuple[int, int]:
        return self.a0.shape[0], self.b0.shape[0]


def protocol_setting(p: ProtocolParams) -> ChshSetting:
    """Second-pair setting built from the first-round measurements' observables."""
    a0, a1 = (expectation_operator(m) for m in p.alice_povms())
    b0, b1 = (expectation_operator(m) for m in p.bob_povms())
    return ChshSetting(a0, a1, b0, b1)


def tsirelson_setting() -> ChshSetting:
    s1, s3 = pauli(1), pauli(3)
    return ChshSetting(s1, s3, (s1 + s3) / math.sqrt(2), (s1 - s3) / math.sqrt(2))


def chsh_operator(s: ChshSetting) -> ComplexMatrix:
    k = matcore.kron
    return k(s.a0, s.b0) + k(s.a0, s.b1) + k(s.a1, s.b0) - k(s.a1, s.b1)


def chsh_value(rho: npt.ArrayLike, s: ChshSetting) -> float:
    """Signed ``Tr[B rho]``; callers take the absolute value when testing ``<= 2``."""
    rho = matcore.as_matrix(rho)
    da, db = s.dims
    if rho.shape != (da * db, da * db):
        raise ShapeError(f"state of shape {rho.shape} does not match setting dims {da} x {db}")
    value = np.sum(chsh_operator(s) * rho.T)
    if abs(value.imag) > IMAG_ATOL:
        raise ContractError(f"CHSH value has imaginary part {value.imag:.3e}")
    return float(value.real)


def _require_two_qubit(rho: npt.ArrayLike) -> ComplexMatrix:
    rho = matcore.as_matrix(rho)
    if rho.shape != (4, 4):
        raise ShapeError(f"expected a two-qubit (4x4) state, got {rho.shape}")
    return rho


def correlation_tensor(rho: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """``T[i, j] = Tr[rho (sigma_i x sigma_j)]``."""
    rho = _require_two_qubit(rho)
    t = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            t[i, j] = np.trace(rho @ np.kron(pauli(i + 1), pauli(j + 1))).real
    return t


def horodecki_max(rho: npt.ArrayLike) -> float:
    """Largest CHSH value reachable on a two-qubit state.

    Equals ``2 sqrt(l1 + l2)`` for the two largest eigenvalues of ``T^T T``.
    """
    t = correlation_tensor(rho)
    lam, _ = matcore.hermitian_eigen(t.T @ t)
    top = max(lam[-1] + lam[-2], 0.0)
    return 2.0 * math.sqrt(top)
