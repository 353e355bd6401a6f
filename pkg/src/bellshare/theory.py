"""Closed-form CHSH predictions for the bilateral protocol.

The exact channel simulation is the ground truth. The closed forms here are
comparands; where the block-family closed form for the first CHSH term
disagrees with the channel (``d = 3`` and the middle coefficients for ``d >= 5``) the
discrepancy is reported, never hidden.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
import numpy.typing as npt

from . import matcore
from .matcore import ComplexMatrix
from .protocol import ProtocolParams, bilateral_dual, bilateral_state
from .quantum import SchmidtVector, correlation, expectation_operator, pauli

_THETA_MAX = math.pi / 4 + 1e-15


def _check_theta(theta: float) -> float:
    if not 0.0 < theta <= _THETA_MAX:
        raise ValueError(f"theta must lie in (0, pi/4], got {theta!r}")
    return float(theta)


def _check_gamma(gamma1: float) -> float:
    if not 0.0 <= gamma1 <= 1.0:
        raise ValueError(f"gamma1 must lie in [0, 1], got {gamma1!r}")
    return float(gamma1)


def _check_corr(name: str, t: float) -> float:
    if not abs(t) <= 1.0 + 1e-12:
        raise ValueError(f"{name} must satisfy |{name}| <= 1, got {t!r}")
    return float(t)


def _retention(gamma1: float) -> float:
    return 1.0 + math.sqrt(1.0 - gamma1 * gamma1)


def final_xx_correlation(theta: float, gamma1: float, t11: float) -> float:
    """Final ``<s1 x s1>`` from the initial one, qubit case."""
    theta, gamma1, t11 = _check_theta(theta), _check_gamma(gamma1), _check_corr("t11", t11)
    return _retention(gamma1) / 2 * math.cos(theta) ** 2 * t11


def final_zz_correlation(theta: float, t33: float) -> float:
    """Final ``<s3 x s3>`` from the initial one, qubit case."""
    theta, t33 = _check_theta(theta), _check_corr("t33", t33)
    return 0.5 * math.sin(theta) ** 2 * t33


def qubit_chsh_prediction(theta: float, gamma1: float, t11: float, t33: float) -> float:
    theta, gamma1 = _check_theta(theta), _check_gamma(gamma1)
    t11, t33 = _check_corr("t11", t11), _check_corr("t33", t33)
    return math.cos(theta) ** 3 * _retention(gamma1) * t11 + gamma1 * math.sin(theta) ** 3 * t33


def qubit_chsh_bound(theta: float) -> float:
    """``2 cos^3 + sin^3``: decreasing on (0, pi/4], supremum 2 as theta -> 0."""
    theta = _check_theta(theta)
    return 2.0 * math.cos(theta) ** 3 + math.sin(theta) ** 3


def highd_first_term_prediction(d: int, theta: float, gamma1: float, c: SchmidtVector) -> float:
    """Block-family closed form for ``Tr[rho2 ((A0 + A1) x B0)]``, ``d >= 3``.

    The bracketed middle sum ``c_3^2 + ... + c_{d-1}^2`` is empty for ``d = 3``.
    """
    if d < 3:
        raise ValueError(f"d must be >= 3, got {d}")
    theta, gamma1 = _check_theta(theta), _check_gamma(gamma1)
    w = [x * x for x in c.padded(d)]
    cos3 = math.cos(theta) ** 3
    r = _retention(gamma1)
    middle = math.fsum(w[2 : d - 1])
    return 2 * cos3 * w[0] - 2 * cos3 * w[1] - r * w[d - 1] + r * middle


def _chsh_terms(p: ProtocolParams) -> tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix, ComplexMatrix]:
    a0, a1 = (expectation_operator(m) for m in p.alice_povms())
    b0, b1 = (expectation_operator(m) for m in p.bob_povms())
    return a0 + a1, a0 - a1, b0, b1


def highd_first_term(p: ProtocolParams, rho2: npt.ArrayLike | None = None) -> float:
    """Simulated ``Tr[rho2 ((A0 + A1) x B0)]``."""
    plus, _, b0, _ = _chsh_terms(p)
    rho2 = bilateral_state(p) if rho2 is None else rho2
    return correlation(rho2, plus, b0)


def highd_zero_term(p: ProtocolParams, rho2: npt.ArrayLike | None = None) -> float:
    """Simulated ``Tr[rho2 ((A0 - A1) x B1)]``, which should vanish for d >= 3."""
    if p.d < 3:
        raise ValueError(f"the zero-term identity concerns d >= 3, got d = {p.d}")
    _, minus, _, b1 = _chsh_terms(p)
    rho2 = bilateral_state(p) if rho2 is None else rho2
    return correlation(rho2, minus, b1)


def _embed_bob(d: int, block: ComplexMatrix) -> ComplexMatrix:
    out = np.eye(d, dtype=np.complex128)
    out[d - 2 :, d - 2 :] = block
    return out


def three_term_intermediate_state(p: ProtocolParams) -> ComplexMatrix:
    """Three-term expression for the post-Bob state, ``d >= 3``.

    It matches the exact channel only on block-diagonal Bob observables; the
    cross-block coherences differ.
    """
    if p.d < 3:
        raise ValueError("the block expression is defined for d >= 3")
    s = math.sqrt(1.0 - p.gamma1**2)
    rho = p.initial_state()
    ident = np.eye(p.d)
    z = matcore.kron(ident, _embed_bob(p.d, pauli(3)))
    x = matcore.kron(ident, _embed_bob(p.d, pauli(1)))
    return (2 + s) / 4 * rho + 0.25 * (z @ rho @ z) + (1 - s) / 4 * (x @ rho @ x)


@dataclass(frozen=True)
class PredictionReport:
    params: ProtocolParams
    simulated: float
    closed_form: float
    dual_oracle: float
    delta_sim_closed: float
    delta_sim_dual: float

    CSV_COLUMNS = (
        "d", "c_spec", "theta", "gamma1", "simulated", "closed_form",
        "dual_oracle", "delta_sim_closed", "delta_sim_dual",
    )

    def as_row(self) -> dict[str, object]:
        p = self.params
        row = {"d": p.d, "c_spec": list(p.schmidt.coeffs), "theta": p.theta, "gamma1": p.gamma1}
        row.update({k: v for k, v in asdict(self).items() if k != "params"})
        return row


def discrepancy_report(p: ProtocolParams) -> PredictionReport:
    """Compare the channel, its Heisenberg dual and the closed form.

    The two simulation paths must agree to ``1e-10``; the formula may not.
    """
    if p.d < 3:
        raise ValueError("the discrepancy report concerns d >= 3")
    plus, _, b0, _ = _chsh_terms(p)
    simulated = highd_first_term(p)
    pulled = bilateral_dual(matcore.kron(plus, b0), p)
    dual = complex(np.sum(pulled * p.initial_state().T)).real
    closed = highd_first_term_prediction(p.d, p.theta, p.gamma1, p.schmidt)
    return PredictionReport(
        params=p,
        simulated=simulated,
        closed_form=closed,
        dual_oracle=dual,
        delta_sim_closed=abs(simulated - closed),
        delta_sim_dual=abs(simulated - dual),
    )
