"""Parameter sweeps and multistart maximization of the second-pair CHSH value."""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np
from scipy.optimize import minimize

from .chsh import chsh_value, horodecki_max, protocol_setting
from .exceptions import BellshareError
from .protocol import ProtocolParams, bilateral_state
from .quantum import SchmidtVector, correlation, pauli
from .theory import highd_first_term_prediction, highd_zero_term, qubit_chsh_bound, qubit_chsh_prediction

log = logging.getLogger(__name__)

THETA_MIN = 1e-6
THETA_MAX = math.pi / 4
LOCAL_BOUND = 2.0


def second_pair_chsh(p: ProtocolParams) -> float:
    """CHSH value of the final state under the first-round observables."""
    return chsh_value(bilateral_state(p), protocol_setting(p))


@dataclass(frozen=True)
class SweepGrid:
    d: int
    theta_values: tuple[float, ...]
    gamma1_values: tuple[float, ...]
    schmidt_specs: tuple[SchmidtVector, ...]

    def __post_init__(self) -> None:
        for name in ("theta_values", "gamma1_values", "schmidt_specs"):
            values = tuple(getattr(self, name))
            if not values:
                raise ValueError(f"{name} must not be empty")
            object.__setattr__(self, name, values)
        if any(not 0.0 < t <= THETA_MAX + 1e-15 for t in self.theta_values):
            raise ValueError(f"theta values must lie in (0, pi/4]: {self.theta_values}")
        if any(not 0.0 <= g <= 1.0 for g in self.gamma1_values):
            raise ValueError(f"gamma1 values must lie in [0, 1]: {self.gamma1_values}")
        if any(len(c) > self.d for c in self.schmidt_specs):
            raise ValueError(f"a Schmidt vector is longer than d = {self.d}")

    def points(self) -> list[tuple[SchmidtVector, float, float]]:
        """Grid points ordered by (Schmidt index, theta index, gamma1 index)."""
        return list(itertools.product(self.schmidt_specs, self.theta_values, self.gamma1_values))

    def __len__(self) -> int:
        return len(self.schmidt_specs) * len(self.theta_values) * len(self.gamma1_values)


@dataclass(frozen=True)
class SweepRecord:
    """One grid point.

    ``chsh_pred`` is the closed-form value (qubit prediction for ``d = 2``,
    block-family closed form otherwise) and ``bound_f`` is the bound that
    applies: ``f(theta)`` for qubits, 2 in higher dimension. ``zero_term`` is
    only defined for ``d >= 3``. Failed points carry ``error`` and ``nan``s.
    """

    d: int
    schmidt: SchmidtVector
    theta: float
    gamma1: float
    chsh_sim: float
    chsh_pred: float
    bound_f: float
    zero_term: float | None
    delta: float
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def evaluate_point(d: int, schmidt: SchmidtVector, theta: float, gamma1: float) -> SweepRecord:
    try:
        p = ProtocolParams(d, schmidt, theta, gamma1)
        rho2 = bilateral_state(p)
        sim = chsh_value(rho2, protocol_setting(p))
        if d == 2:
            rho1 = p.initial_state()
            t11 = correlation(rho1, pauli(1), pauli(1))
            t33 = correlation(rho1, pauli(3), pauli(3))
            pred = qubit_chsh_prediction(theta, gamma1, t11, t33)
            bound, zero = qubit_chsh_bound(theta), None
        else:
            pred = highd_first_term_prediction(d, theta, gamma1, schmidt)
            bound, zero = LOCAL_BOUND, highd_zero_term(p, rho2)
    except (BellshareError, ValueError) as exc:
        log.warning("sweep point d=%s theta=%r gamma1=%r failed: %s", d, theta, gamma1, exc)
        nan = float("nan")
        return SweepRecord(d, schmidt, theta, gamma1, nan, nan, nan, None, nan, error=str(exc))
    return SweepRecord(d, schmidt, theta, gamma1, sim, pred, bound, zero, abs(sim - pred))


def sweep(grid: SweepGrid, workers: int = 1) -> list[SweepRecord]:
    """Evaluate every grid point; output order never depends on ``workers``."""
    points = grid.points()
    if workers <= 1:
        return [evaluate_point(grid.d, *pt) for pt in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda pt: evaluate_point(grid.d, *pt), points))


@dataclass(frozen=True)
class OptimizeResult:
    best_params: ProtocolParams
    best_value: float
    evaluations: int
    seed: int
    status: Literal["converged", "budget"]
    trace: tuple[tuple[ProtocolParams, float], ...] = field(repr=False)

    @property
    def budget_exhausted(self) -> bool:
        return self.status == "budget"


class _BudgetExhausted(Exception):
    pass


def maximize_chsh(
    d: int,
    schmidt: SchmidtVector,
    restarts: int,
    budget: int,
    *,
    seed: int = 0,
    theta_min: float = THETA_MIN,
) -> OptimizeResult:
    """Multistart bounded Nelder-Mead over ``(theta, gamma1)``.

    ``budget`` caps distinct objective evaluations across all restarts. The
    reported optimum is always a point that was actually evaluated.
    """
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    if budget < 50:
        raise ValueError(f"budget must be >= 50, got {budget}")
    if not 0.0 < theta_min < THETA_MAX:
        raise ValueError(f"theta_min must lie in (0, pi/4), got {theta_min}")

    bounds = [(theta_min, THETA_MAX), (0.0, 1.0)]
    lo = np.array([b[0] for b in bounds])
    hi = np.array([b[1] for b in bounds])
    cache: dict[tuple[float, float], float] = {}
    trace: list[tuple[ProtocolParams, float]] = []
    best_value = -math.inf
    best_params: ProtocolParams | None = None

    def objective(x: np.ndarray) -> float:
        nonlocal best_value, best_params
        theta, gamma1 = (float(v) for v in np.clip(x, lo, hi))
        key = (round(theta, 12), round(gamma1, 12))
        if key in cache:
            return -cache[key]
        if len(cache) >= budget:
            raise _BudgetExhausted
        p = ProtocolParams(d, schmidt, theta, gamma1)
        value = second_pair_chsh(p)
        cache[key] = value
        if value > best_value:
            best_value, best_params = value, p
            trace.append((p, value))
        return -value

    rng = np.random.default_rng(seed)
    status: Literal["converged", "budget"] = "converged"
    for _ in range(restarts):
        x0 = rng.uniform(lo, hi)
        try:
            minimize(
                objective, x0, method="Nelder-Mead", bounds=bounds,
                options={"xatol": 1e-12, "fatol": 1e-15, "maxfev": 10 * budget},
            )
        except _BudgetExhausted:
            status = "budget"
            break

    assert best_params is not None
    return OptimizeResult(best_params, best_value, len(cache), seed, status, tuple(trace))


def optimal_second_round(p: ProtocolParams) -> float:
    """Best CHSH any second-pair setting could reach on the qubit final state."""
    if p.d != 2:
        raise ValueError(f"optimal second-round value is only available for d = 2, got d = {p.d}")
    return horodecki_max(bilateral_state(p))


def default_grid(d: int, schmidt_specs: Sequence[SchmidtVector], n_theta: int = 5, n_gamma: int = 5) -> SweepGrid:
    thetas = tuple(THETA_MAX * (i + 1) / n_theta for i in range(n_theta))
    gammas = tuple(i / (n_gamma - 1) for i in range(n_gamma)) if n_gamma > 1 else (1.0,)
    return SweepGrid(d, thetas, gammas, tuple(schmidt_specs))
