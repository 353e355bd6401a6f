"""Per-scenario comparison of the simulated protocol against the closed forms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matcore
from .chsh import chsh_operator, chsh_value, protocol_setting
from .matcore import PSD_ATOL
from .protocol import (
    TRACE_ATOL,
    ProtocolParams,
    bilateral_dual,
    bilateral_state,
    diagnose_state,
    intermediate_state,
    luders_average,
    qubit_intermediate_closed_form,
)
from .quantum import I_D_NOTE, correlation, expectation_operator, pauli
from .theory import (
    three_term_intermediate_state,
    discrepancy_report,
    highd_first_term,
    highd_zero_term,
    final_xx_correlation,
    final_zz_correlation,
    qubit_chsh_prediction,
    qubit_chsh_bound,
)

EQUALITY_ATOL = 1e-10
ENTRYWISE_ATOL = 1e-12
BOUND_ATOL = 1e-9
CLOSED_FORM_MISMATCH_NOTE = "closed-form mismatch (informational)"


@dataclass(frozen=True)
class Check:
    """``value`` is a deviation or an excess; the check passes when ``value <= tolerance``."""

    name: str
    value: float
    tolerance: float
    informational: bool = False

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.tolerance)

    def as_dict(self) -> dict[str, object]:
        return {
            "name": self.name,
            "value": float(self.value),
            "tolerance": self.tolerance,
            "passed": self.passed,
            "informational": self.informational,
        }


def _channel_checks(p: ProtocolParams) -> list[Check]:
    rho = p.initial_state()
    worst_trace = worst_herm = worst_neg = 0.0
    for rnd in (p.bob_round(), p.alice_round()):
        rho = luders_average(rho, rnd, check=False)
        diag = diagnose_state(rho)
        worst_trace = max(worst_trace, diag.trace_deviation)
        worst_herm = max(worst_herm, diag.hermiticity_residual)
        worst_neg = max(worst_neg, -diag.min_eigenvalue)
    return [
        Check("channel_trace", worst_trace, TRACE_ATOL),
        Check("channel_hermiticity", worst_herm, matcore.HERMITIAN_ATOL),
        Check("channel_negativity", max(worst_neg, 0.0), PSD_ATOL),
    ]


def _dual_chsh(p: ProtocolParams) -> float:
    pulled = bilateral_dual(chsh_operator(protocol_setting(p)), p)
    return float(np.sum(pulled * p.initial_state().T).real)


def qubit_checks(p: ProtocolParams) -> list[Check]:
    rho1 = p.initial_state()
    rho2 = bilateral_state(p)
    s1, s3 = pauli(1), pauli(3)
    t11, t33 = correlation(rho1, s1, s1), correlation(rho1, s3, s3)
    xx, zz = correlation(rho2, s1, s1), correlation(rho2, s3, s3)
    sim = chsh_value(rho2, protocol_setting(p))
    closed = qubit_intermediate_closed_form(rho1, p.gamma1)
    return [
        Check("final_xx_correlation", abs(xx - final_xx_correlation(p.theta, p.gamma1, t11)), EQUALITY_ATOL),
        Check("final_zz_correlation", abs(zz - final_zz_correlation(p.theta, t33)), EQUALITY_ATOL),
        Check("intermediate_closed_form", float(np.max(np.abs(intermediate_state(p) - closed))), ENTRYWISE_ATOL),
        Check("qubit_prediction", abs(sim - qubit_chsh_prediction(p.theta, p.gamma1, t11, t33)), EQUALITY_ATOL),
        Check("qubit_bound", max(sim - qubit_chsh_bound(p.theta), 0.0), EQUALITY_ATOL),
        Check("chsh_le_2", max(abs(sim) - 2.0, 0.0), BOUND_ATOL),
        Check("sim_vs_dual", abs(sim - _dual_chsh(p)), EQUALITY_ATOL),
        *_channel_checks(p),
    ]


def _three_term_trace_gap(p: ProtocolParams) -> float:
    exact = intermediate_state(p)
    three_term = three_term_intermediate_state(p)
    a = [expectation_operator(m) for m in p.alice_povms()]
    b = [expectation_operator(m) for m in p.bob_povms()]
    observables = [(a[0] + a[1], b[0]), (a[0] - a[1], b[1])]
    observables += [(ax, by) for ax in a for by in b]
    return max(abs(correlation(exact, oa, ob) - correlation(three_term, oa, ob)) for oa, ob in observables)


def highd_checks(p: ProtocolParams) -> list[Check]:
    rho2 = bilateral_state(p)
    report = discrepancy_report(p)
    first = highd_first_term(p, rho2)
    zero = highd_zero_term(p, rho2)
    return [
        Check("zero_term", abs(zero), EQUALITY_ATOL),
        Check("first_term_le_2", max(first - 2.0, 0.0), BOUND_ATOL),
        Check("chsh_le_2", max(abs(first + zero) - 2.0, 0.0), BOUND_ATOL),
        Check("sim_vs_dual", report.delta_sim_dual, EQUALITY_ATOL),
        Check("three_term_trace_agreement", _three_term_trace_gap(p), EQUALITY_ATOL),
        Check("highd_closed_form", report.delta_sim_closed, EQUALITY_ATOL, informational=p.d != 4),
        *_channel_checks(p),
    ]


def checks_for(p: ProtocolParams) -> list[Check]:
    return qubit_checks(p) if p.d == 2 else highd_checks(p)


def notes_for(d: int, checks: list[Check]) -> list[str]:
    notes = []
    if d >= 3:
        notes.append(I_D_NOTE)
    if any(c.informational and not c.passed for c in checks):
        notes.append(CLOSED_FORM_MISMATCH_NOTE)
    return notes
