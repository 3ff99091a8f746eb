"""Reputation games for P2P resource sharing: equilibria and dynamics."""

from .dynamics import (
    EssCooperatorsPayment,
    EssReputersPayment,
    EvolveConfig,
    FixedPayment,
    Population,
    RoundRecord,
    Trajectory,
    evolve,
    init_population,
    payment_for_round,
    replicator_step,
    run_round,
)
from .equilibrium import (
    MixedEquilibrium,
    PureProfileResult,
    Regime,
    RegimeReport,
    ess_check,
    mixed_closed_form,
    mixed_oracle,
    pure_nash,
    regime,
)
from .errors import (
    ConstraintViolation,
    DegeneratePool,
    NoValidEquilibrium,
    ParseError,
    RepGameError,
    ValidationError,
)
from .game import (
    ExpectedPayoffs,
    GameParams,
    GameVariant,
    PopulationCounts,
    PopulationState,
    Strategy,
    expected_payoff_arrays,
    expected_payoffs,
    payoff_matrix,
    utility,
    validate_params,
)

__version__ = "0.1.0"
