"""Input-averaged Lüders channels and the bilateral two-round protocol.

The forward channel is applied factor-locally with ``tensordot`` on the
reshaped ``(d_a, d_b, d_a, d_b)`` tensor, which keeps ``d = 32`` cheap.
:func:`heisenberg_dual` deliberately takes a different route (explicit
Kronecker-embedded Kraus operators and full matrix products) so it can serve
as an independent check of the forward path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Literal

import numpy as np
import numpy.typing as npt

from . import matcore
from .exceptions import ContractError, ShapeError
from .matcore import ComplexMatrix
from .quantum import (
    DichotomicPovm,
    Party,
    SchmidtVector,
    alice_highd_povm,
    alice_qubit_povm,
    bob_highd_povm,
    bob_qubit_povm,
    pauli,
    schmidt_pure_state,
)

TRACE_ATOL = 1e-12

Order = Literal["bob_first", "alice_first"]


@dataclass(frozen=True)
class ProtocolParams:
    """Everything that fixes one bilateral scenario.

    ``d == 2`` selects the qubit measurements, ``d >= 3`` the block family.
    """

    d: int
    schmidt: SchmidtVector
    theta: float
    gamma1: float

    def __post_init__(self) -> None:
        if int(self.d) != self.d or self.d < 2:
            raise ValueError(f"d must be an integer >= 2, got {self.d!r}")
        object.__setattr__(self, "d", int(self.d))
        if not isinstance(self.schmidt, SchmidtVector):
            object.__setattr__(self, "schmidt", SchmidtVector(tuple(self.schmidt)))
        if len(self.schmidt) > self.d:
            raise ContractError(f"{len(self.schmidt)} Schmidt coefficients exceed d = {self.d}")
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "gamma1", float(self.gamma1))
        # constructing the rounds validates theta and gamma1
        self.alice_round()
        self.bob_round()

    def initial_state(self) -> ComplexMatrix:
        return schmidt_pure_state(self.schmidt, self.d)

    def alice_povms(self) -> tuple[DichotomicPovm, DichotomicPovm]:
        if self.d == 2:
            return alice_qubit_povm(self.theta, 0), alice_qubit_povm(self.theta, 1)
        return alice_highd_povm(self.d, self.theta, 0), alice_highd_povm(self.d, self.theta, 1)

    def bob_povms(self) -> tuple[DichotomicPovm, DichotomicPovm]:
        if self.d == 2:
            return bob_qubit_povm(self.gamma1, 0), bob_qubit_povm(self.gamma1, 1)
        return bob_highd_povm(self.d, self.gamma1, 0), bob_highd_povm(self.d, self.gamma1, 1)

    def alice_round(self) -> MeasurementRound:
        return MeasurementRound(Party.ALICE, self.alice_povms())

    def bob_round(self) -> MeasurementRound:
        return MeasurementRound(Party.BOB, self.bob_povms())


def _effect_root(e: npt.ArrayLike) -> ComplexMatrix:
    # projectors are their own square root; skip the eigensolver for them
    if matcore.is_projector(e):
        return np.array(e, dtype=np.complex128)
    return matcore.psd_sqrt(e)


@dataclass(frozen=True)
class MeasurementRound:
    """One party's randomly chosen measurement, inputs 0 and 1."""

    party: Party
    povms: tuple[DichotomicPovm, DichotomicPovm]

    def __post_init__(self) -> None:
        object.__setattr__(self, "party", Party(self.party))
        if len(self.povms) != 2:
            raise ValueError(f"a round needs exactly two measurements, got {len(self.povms)}")
        p0, p1 = self.povms
        if p0.dim != p1.dim:
            raise ShapeError(f"round measurements act on dims {p0.dim} and {p1.dim}")
        if p0.party != self.party or p1.party != self.party:
            raise ContractError(f"measurements do not belong to {self.party.value}")

    @property
    def dim(self) -> int:
        return self.povms[0].dim

    @cached_property
    def kraus(self) -> tuple[ComplexMatrix, ...]:
        """Local Lüders operators ``sqrt(E)``; each enters with weight 1/2."""
        return tuple(_effect_root(e.matrix) for m in self.povms for e in (m.e0, m.e1))


def _split_dims(n: int, local: int, party: Party) -> tuple[int, int]:
    if n % local:
        raise ShapeError(f"state dimension {n} is not divisible by local dimension {local}")
    other = n // local
    return (local, other) if party is Party.ALICE else (other, local)


def _sandwich_local(t: np.ndarray, k: ComplexMatrix, axis: int) -> np.ndarray:
    """``(K on factor axis) T (K on factor axis)^dagger`` for T shaped (a, b, a', b')."""
    left = np.moveaxis(np.tensordot(k, t, axes=(1, axis)), 0, axis)
    return np.tensordot(left, k.conj(), axes=(axis + 2, 1)).transpose(
        (0, 1, 3, 2) if axis == 0 else (0, 1, 2, 3)
    )


def luders_average(rho: npt.ArrayLike, rnd: MeasurementRound, *, check: bool = True) -> ComplexMatrix:
    """Unconditional post-measurement state averaged over inputs and outcomes.

    ``rho' = 1/2 sum_{x,a} K_{a|x} rho K_{a|x}`` with ``K = sqrt(E)`` acting on
    the round's side of the bipartition.
    """
    rho = matcore.as_matrix(rho)
    n = rho.shape[0]
    if rho.shape[1] != n:
        raise ShapeError(f"state must be square, got {rho.shape}")
    da, db = _split_dims(n, rnd.dim, rnd.party)
    axis = 0 if rnd.party is Party.ALICE else 1
    t = rho.reshape(da, db, da, db)
    out = np.zeros_like(t)
    for k in rnd.kraus:
        out += _sandwich_local(t, k, axis)
    out = 0.5 * out.reshape(n, n)
    if check:
        deviation = abs(np.trace(out) - np.trace(rho))
        if deviation > TRACE_ATOL:
            raise ContractError(f"Lüders channel changed the trace by {deviation:.3e}")
        matcore.require_hermitian(out, "post-measurement state")
    return out


def bilateral_state(p: ProtocolParams, order: Order = "bob_first") -> ComplexMatrix:
    """State shared by the second Alice and second Bob.

    ``order="alice_first"`` exists only to test that the two local channels commute.
    """
    rho = p.initial_state()
    if order == "bob_first":
        rounds = (p.bob_round(), p.alice_round())
    elif order == "alice_first":
        rounds = (p.alice_round(), p.bob_round())
    else:
        raise ValueError(f"unknown order {order!r}")
    for rnd in rounds:
        rho = luders_average(rho, rnd)
    return rho


def intermediate_state(p: ProtocolParams) -> ComplexMatrix:
    """State after Bob's first round only (first Alice, second Bob)."""
    return luders_average(p.initial_state(), p.bob_round())


def qubit_intermediate_closed_form(rho: npt.ArrayLike, gamma1: float) -> ComplexMatrix:
    """Three-term expansion of the qubit Bob round.

    ``(2+s)/4 rho + 1/4 (I x s1) rho (I x s1) + (1-s)/4 (I x s3) rho (I x s3)``
    with ``s = sqrt(1 - gamma1**2)``.
    """
    rho = matcore.as_matrix(rho)
    s = math.sqrt(1.0 - gamma1 * gamma1)
    x = matcore.kron(np.eye(2), pauli(1))
    z = matcore.kron(np.eye(2), pauli(3))
    return (2 + s) / 4 * rho + 0.25 * (x @ rho @ x) + (1 - s) / 4 * (z @ rho @ z)


def heisenberg_dual(observable: npt.ArrayLike, rnd: MeasurementRound, other_dim: int) -> ComplexMatrix:
    """Adjoint of :func:`luders_average` acting on a bipartite observable.

    ``other_dim`` is the dimension of the factor the round does not touch.
    Satisfies ``Tr[luders_average(rho) O] == Tr[rho heisenberg_dual(O)]``.
    """
    obs = matcore.require_hermitian(observable, "observable")
    ident = np.eye(other_dim)
    if obs.shape[0] != rnd.dim * other_dim:
        raise ShapeError(f"observable of shape {obs.shape} does not match dims {rnd.dim} x {other_dim}")
    out = np.zeros_like(obs)
    for k in rnd.kraus:
        full = matcore.kron(k, ident) if rnd.party is Party.ALICE else matcore.kron(ident, k)
        out += matcore.multiply(matcore.multiply(matcore.adjoint(full), obs), full)
    return 0.5 * out


def bilateral_dual(observable: npt.ArrayLike, p: ProtocolParams) -> ComplexMatrix:
    """Pull an observable on the final state back to the initial state."""
    after_alice = heisenberg_dual(observable, p.alice_round(), p.d)
    return heisenberg_dual(after_alice, p.bob_round(), p.d)


@dataclass(frozen=True)
class StateDiagnostics:
    trace_deviation: float
    hermiticity_residual: float
    min_eigenvalue: float

    def ok(self, trace_atol: float = TRACE_ATOL, herm_atol: float = matcore.HERMITIAN_ATOL,
           psd_atol: float = matcore.PSD_ATOL) -> bool:
        return (
            self.trace_deviation <= trace_atol
            and self.hermiticity_residual <= herm_atol
            and self.min_eigenvalue >= -psd_atol
        )


def diagnose_state(rho: npt.ArrayLike) -> StateDiagnostics:
    rho = matcore.as_matrix(rho)
    herm = matcore.hermiticity_residual(rho)
    lam = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    return StateDiagnostics(
        trace_deviation=abs(complex(np.trace(rho)) - 1.0),
        hermiticity_residual=herm,
        min_eigenvalue=float(lam[0]),
    )
