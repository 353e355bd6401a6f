"""Sequential CHSH-nonlocality sharing under bilateral Lüders measurements."""

from .chsh import (
    ChshSetting,
    chsh_operator,
    chsh_value,
    correlation_tensor,
    horodecki_max,
    protocol_setting,
    tsirelson_setting,
)
from .exceptions import BellshareError, ContractError, NotPSDError, ShapeError
from .protocol import (
    MeasurementRound,
    ProtocolParams,
    bilateral_state,
    heisenberg_dual,
    intermediate_state,
    luders_average,
)
from .quantum import (
    BlochDirection,
    DichotomicPovm,
    Effect,
    Party,
    SchmidtVector,
    correlation,
    expectation_operator,
    pauli,
    schmidt_pure_state,
    validate_povm,
)
from .search import (
    OptimizeResult,
    SweepGrid,
    SweepRecord,
    maximize_chsh,
    optimal_second_round,
    second_pair_chsh,
    sweep,
)
from .theory import (
    PredictionReport,
    discrepancy_report,
    highd_first_term_prediction,
    highd_zero_term,
    final_xx_correlation,
    final_zz_correlation,
    qubit_chsh_prediction,
    qubit_chsh_bound,
)

__version__ = "0.1.0"
