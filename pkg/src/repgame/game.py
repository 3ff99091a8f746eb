"""Core definitions of the three reputation games.

Three symmetric 3-strategy games over the action set {R, C, D}:

* ``BASELINE`` -- plain reputation game, no fees.
* ``PAY_COOPERATORS`` -- every peer pays a round fee ``p``; the pool is
  redistributed equally among all cooperating peers (R and C).
* ``PAY_REPUTERS`` -- every peer pays ``p``; the pool goes to the
  reputation calculators (R) only.

Payoff matrices for the fee variants depend on the current population
counts, so the game is a population game rather than a fixed matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum

import numpy as np

from .errors import ConstraintViolation, DegeneratePool

SIMPLEX_TOL = 1e-12


class Strategy(IntEnum):
    """Peer strategy. R cooperates and also pays to check reputations."""

    R = 0
    C = 1
    D = 2

    @property
    def cooperation_level(self) -> float:
        return 0.0 if self is Strategy.D else 1.0

    @property
    def reputation_level(self) -> float:
        return 1.0 if self is Strategy.R else 0.0


STRATEGIES = (Strategy.R, Strategy.C, Strategy.D)


class GameVariant(Enum):
    BASELINE = 1
    PAY_COOPERATORS = 2
    PAY_REPUTERS = 3


@dataclass(frozen=True)
class GameParams:
    """Scalar parameters of the game.

    d     benefit of receiving the shared resource per transaction
    a     cost of sharing
    alpha cost of one reputation calculation
    beta  benefit of a reputation increment
    p     round-based initial payment (fee)
    n     population size
    """

    d: float
    a: float
    alpha: float
    beta: float
    p: float = 0.0
    n: int = 10000


def validate_params(raw: GameParams) -> GameParams:
    """Return ``raw`` unchanged iff every model inequality holds.

    Raises ConstraintViolation naming the violated inequality otherwise.
    """
    if not raw.d > raw.a:
        raise ConstraintViolation(f"d > a required, got d={raw.d}, a={raw.a}")
    if not raw.a > raw.alpha:
        raise ConstraintViolation(
            f"a > alpha required, got a={raw.a}, alpha={raw.alpha}"
        )
    if raw.alpha < 0:
        raise ConstraintViolation(f"alpha >= 0 required, got {raw.alpha}")
    if raw.beta < 0:
        raise ConstraintViolation(f"beta >= 0 required, got {raw.beta}")
    if raw.p < 0:
        raise ConstraintViolation(f"p >= 0 required, got {raw.p}")
    if raw.n < 2:
        raise ConstraintViolation(f"N >= 2 required, got {raw.n}")
    return raw


@dataclass(frozen=True)
class PopulationState:
    """Point on the 2-simplex of strategy fractions."""

    x_r: float
    x_c: float
    x_d: float

    def __post_init__(self):
        for name, x in (("x_r", self.x_r), ("x_c", self.x_c), ("x_d", self.x_d)):
            if not -SIMPLEX_TOL <= x <= 1.0 + SIMPLEX_TOL:
                raise ValueError(f"{name}={x} outside [0, 1]")
        if abs(self.x_r + self.x_c + self.x_d - 1.0) > SIMPLEX_TOL:
            raise ValueError(
                f"fractions must sum to 1, got {self.x_r + self.x_c + self.x_d}"
            )

    def as_array(self) -> np.ndarray:
        return np.array([self.x_r, self.x_c, self.x_d])

    @classmethod
    def from_counts(cls, counts: "PopulationCounts", n: int) -> "PopulationState":
        return cls(counts.n_r / n, counts.n_c / n, counts.n_d / n)


@dataclass(frozen=True)
class PopulationCounts:
    """Per-strategy head counts.

    Integer-valued in the agent-based simulation; the mean-field bridge
    (``expected_payoffs``) uses real-valued counts ``N * x`` directly.
    """

    n_r: float
    n_c: float
    n_d: float

    def __post_init__(self):
        if min(self.n_r, self.n_c, self.n_d) < 0:
            raise ValueError(f"counts must be nonnegative: {self}")

    @property
    def total(self) -> float:
        return self.n_r + self.n_c + self.n_d

    @classmethod
    def from_state(cls, state: PopulationState, n: int) -> "PopulationCounts":
        """Mean-field counts: real-valued N*x, no rounding."""
        return cls(state.x_r * n, state.x_c * n, state.x_d * n)


@dataclass(frozen=True)
class ExpectedPayoffs:
    """Mean-field per-strategy expected payoffs and the population mean."""

    p_r: float
    p_c: float
    p_d: float
    p_bar: float

    def of(self, s: Strategy) -> float:
        return (self.p_r, self.p_c, self.p_d)[int(s)]

    def as_array(self) -> np.ndarray:
        return np.array([self.p_r, self.p_c, self.p_d])


def _redistribution(
    variant: GameVariant,
    params: GameParams,
    counts: PopulationCounts | None,
    cl_i: float,
    rl_i: float,
    empty_pool: str,
) -> float:
    """Net fee term (gross rebate minus the fee paid) for the row player."""
    if variant is GameVariant.BASELINE:
        return 0.0
    if counts is None:
        raise ValueError("counts required for fee-redistribution variants")
    if variant is GameVariant.PAY_COOPERATORS:
        pool = params.n - counts.n_d
        share = cl_i
    else:
        pool = counts.n_r
        share = rl_i * cl_i
    if pool <= 0:
        if empty_pool == "burn":
            return -params.p
        raise DegeneratePool(
            f"{variant.name}: empty recipient pool (counts={counts})"
        )
    return share * params.n * params.p / pool - params.p


def utility(
    variant: GameVariant,
    params: GameParams,
    counts: PopulationCounts | None,
    s_i: Strategy,
    s_j: Strategy,
    empty_pool: str = "raise",
) -> float:
    """Row player's payoff when playing ``s_i`` against ``s_j``.

    ``counts`` is ignored for the baseline game. ``empty_pool='burn'``
    makes a degenerate recipient pool cost every payer the flat fee
    instead of raising (used by the dynamics module).
    """
    cl_i, rl_i = s_i.cooperation_level, s_i.reputation_level
    cl_j, rl_j = s_j.cooperation_level, s_j.reputation_level
    base = (
        (cl_j * (1.0 - rl_j) + cl_i * rl_j * cl_j) * params.d
        - (cl_i * (1.0 - rl_i) + cl_j * rl_i) * params.a
        - rl_i * params.alpha
        + cl_i * rl_j * params.beta
    )
    return base + _redistribution(variant, params, counts, cl_i, rl_i, empty_pool)


def payoff_matrix(
    variant: GameVariant,
    params: GameParams,
    counts: PopulationCounts | None = None,
    empty_pool: str = "raise",
) -> np.ndarray:
    """3x3 array ``u[s][t]``, rows/columns ordered R, C, D."""
    u = np.empty((3, 3))
    for s in STRATEGIES:
        for t in STRATEGIES:
            u[int(s), int(t)] = utility(variant, params, counts, s, t, empty_pool)
    return u


def expected_payoffs(
    variant: GameVariant, params: GameParams, state: PopulationState
) -> ExpectedPayoffs:
    """Per-strategy expected payoffs at a population state.

    Counts for the fee variants are the mean-field values ``N * x``
    (real-valued, no rounding), so the result coincides with the
    state-weighted row averages of the payoff matrix.
    """
    counts = PopulationCounts.from_state(state, params.n)
    u = payoff_matrix(variant, params, counts)
    x = state.as_array()
    p = u @ x
    return ExpectedPayoffs(p[0], p[1], p[2], float(x @ p))


def expected_payoff_arrays(
    variant: GameVariant,
    params: GameParams,
    x_r: np.ndarray,
    x_c: np.ndarray,
    x_d: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized expected payoffs over arrays of simplex points.

    Independent closed-form route (used by the grid oracle); degenerate
    points come out as +/-inf or nan and must be masked by the caller.
    """
    d, a, alpha, beta, p = params.d, params.a, params.alpha, params.beta, params.p
    share = x_r + x_c
    p_r = d * share - a * share + beta * x_r - alpha
    p_c = d * share + beta * x_r - a
    p_d = d * x_c
    if variant is GameVariant.PAY_COOPERATORS:
        with np.errstate(divide="ignore", invalid="ignore"):
            rebate = p * x_d / (1.0 - x_d)
        p_r = p_r + rebate
        p_c = p_c + rebate
        p_d = p_d - p
    elif variant is GameVariant.PAY_REPUTERS:
        with np.errstate(divide="ignore", invalid="ignore"):
            rebate = p * (1.0 - x_r) / x_r
        p_r = p_r + rebate
        p_c = p_c - p
        p_d = p_d - p
    return p_r, p_c, p_d
