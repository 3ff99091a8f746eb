"""Agent-based evolutionary dynamics with round-based payment schedules.

Each round runs three phases over a well-mixed population of N agents:

1. selection -- a uniform random perfect matching pairs all agents;
2. transaction -- both partners simultaneously realize the game payoff at
   the round's payment level;
3. reproduction -- every agent independently samples one model agent
   uniformly at random and imitates its strategy t with probability
   ``max(0, P_t - P_s) / delta``, where P_t and P_s are the realized
   per-strategy mean payoffs of the model and the imitator and delta a
   static payoff-spread bound keeping probabilities valid.

An optional mutation step then re-draws a uniform random strategy for
each agent with the configured rate. The mean field of this pairwise
proportional-imitation rule is exactly the replicator map exposed as
``replicator_step``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DegeneratePool
from .game import (
    GameParams,
    GameVariant,
    ExpectedPayoffs,
    PopulationCounts,
    PopulationState,
    Strategy,
    expected_payoffs,
    payoff_matrix,
    validate_params,
)

CONVERGED = "Converged"
MAX_ROUNDS = "MaxRounds"
_VERTEX_STREAK = 50  # consecutive near-vertex rounds required to stop


@dataclass(frozen=True)
class FixedPayment:
    p: float

    def __post_init__(self):
        if self.p < 0:
            raise ValueError("payment must be nonnegative")


@dataclass(frozen=True)
class EssCooperatorsPayment:
    """Round fee tracking the cooperation-ESS bound: p = a*(1 - n_d/N) + eps."""

    epsilon: float = 0.01

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")


@dataclass(frozen=True)
class EssReputersPayment:
    """Round fee tracking the reputation-ESS bound: p = n_r*alpha/N + eps."""

    epsilon: float = 0.01

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")


PaymentPolicy = FixedPayment | EssCooperatorsPayment | EssReputersPayment


def payment_for_round(
    policy: PaymentPolicy, params: GameParams, counts: PopulationCounts
) -> float:
    """Round fee prescribed by the policy at the current counts."""
    if isinstance(policy, FixedPayment):
        p = policy.p
    elif isinstance(policy, EssCooperatorsPayment):
        p = params.a * (1.0 - counts.n_d / params.n) + policy.epsilon
    else:
        p = counts.n_r * params.alpha / params.n + policy.epsilon
    return max(0.0, p)


def max_payment(policy: PaymentPolicy, params: GameParams) -> float:
    """Largest fee the policy can ever prescribe (for the payoff bound)."""
    if isinstance(policy, FixedPayment):
        return policy.p
    if isinstance(policy, EssCooperatorsPayment):
        return params.a + policy.epsilon
    return params.alpha + policy.epsilon


def payoff_spread_bound(policy: PaymentPolicy, params: GameParams) -> float:
    """Static normalizer for imitation probabilities."""
    return params.d + params.beta + params.a + params.alpha + max_payment(policy, params)


@dataclass(frozen=True)
class EvolveConfig:
    variant: GameVariant
    params: GameParams
    policy: PaymentPolicy
    init: PopulationState
    rounds_max: int = 20000
    mutation_rate: float = 0.0
    convergence_tol: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        validate_params(self.params)
        if self.rounds_max < 1:
            raise ValueError("rounds_max must be >= 1")
        if not 0.0 <= self.mutation_rate < 1.0:
            raise ValueError("mutation_rate must be in [0, 1)")
        if self.convergence_tol <= 0:
            raise ValueError("convergence_tol must be positive")


@dataclass
class Population:
    """N agents with their last-round payoffs. Strategy codes follow Strategy."""

    strategies: np.ndarray
    round_payoffs: np.ndarray
    rng_seed: int

    @property
    def counts(self) -> PopulationCounts:
        c = np.bincount(self.strategies, minlength=3)
        return PopulationCounts(int(c[0]), int(c[1]), int(c[2]))

    @property
    def n(self) -> int:
        return self.strategies.size


@dataclass(frozen=True)
class RoundRecord:
    round: int
    state: PopulationState
    payment: float
    realized: ExpectedPayoffs
    pool_burned: bool


@dataclass(frozen=True)
class Trajectory:
    config: EvolveConfig
    records: tuple[RoundRecord, ...]
    terminal: str

    @property
    def final_state(self) -> PopulationState:
        return self.records[-1].state


def _largest_remainder_counts(init: PopulationState, n: int) -> np.ndarray:
    """Integer counts summing to n, closest to n * init (largest remainder)."""
    raw = init.as_array() * n
    base = np.floor(raw).astype(np.int64)
    short = n - int(base.sum())
    order = np.argsort(-(raw - base), kind="stable")
    base[order[:short]] += 1
    return base


def init_population(config: EvolveConfig, rng: np.random.Generator | None = None) -> Population:
    """Population with round(N * x_s) agents per strategy, seeded shuffle."""
    if rng is None:
        rng = np.random.default_rng(config.seed)
    counts = _largest_remainder_counts(config.init, config.params.n)
    codes = np.repeat(np.arange(3, dtype=np.int8), counts)
    rng.shuffle(codes)
    return Population(codes, np.zeros(config.params.n), config.seed)


def _burned_matrix(variant: GameVariant, params: GameParams) -> np.ndarray:
    """Payoff matrix when the recipient pool is empty: fees are burned."""
    return payoff_matrix(variant, params, PopulationCounts(0, 0, 0), empty_pool="burn")


def run_round(
    pop: Population,
    variant: GameVariant,
    params: GameParams,
    policy: PaymentPolicy,
    rng: np.random.Generator,
    mutation_rate: float = 0.0,
    round_index: int = 0,
) -> RoundRecord:
    """Advance the population by one selection/transaction/reproduction round.

    Mutates ``pop`` in place and returns the post-round record. With an
    empty recipient pool the collected fees are burned (payers net -p)
    and the record is flagged.
    """
    n = pop.n
    counts = pop.counts
    p_round = payment_for_round(policy, params, counts)
    params_round = replace(params, p=p_round)

    pool_burned = False
    try:
        u = payoff_matrix(variant, params_round, counts)
    except DegeneratePool:
        u = _burned_matrix(variant, params_round)
        pool_burned = True

    # Selection: a uniform permutation paired off two-by-two is a uniform
    # perfect matching; with odd N the last agent sits the round out.
    perm = rng.permutation(n)
    m = n - (n % 2)
    left, right = perm[0 : m : 2], perm[1 : m : 2]
    s_left, s_right = pop.strategies[left], pop.strategies[right]
    pop.round_payoffs[left] = u[s_left, s_right]
    pop.round_payoffs[right] = u[s_right, s_left]
    if m < n:
        # Odd N: the sitter still pays the fee under the fee variants.
        pop.round_payoffs[perm[-1]] = (
            0.0 if variant is GameVariant.BASELINE else -p_round
        )

    # Realized per-strategy means from the actual matching.
    totals = np.bincount(pop.strategies, weights=pop.round_payoffs, minlength=3)
    head = np.array([counts.n_r, counts.n_c, counts.n_d], dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        means = np.where(head > 0, totals / np.maximum(head, 1), np.nan)
    p_bar = float(totals.sum() / n)
    realized = ExpectedPayoffs(means[0], means[1], means[2], p_bar)

    # Reproduction: each agent looks at one uniformly drawn model agent
    # and adopts its strategy with probability proportional to the model's
    # payoff advantage, normalized by the static spread bound. Extinct
    # strategies have no models left (only mutation can revive them).
    delta = payoff_spread_bound(policy, params)
    x = head / n
    new_head = np.zeros(3, dtype=np.int64)
    for s in range(3):
        if head[s] == 0:
            continue
        advantage = np.where(head > 0, np.maximum(0.0, means - means[s]), 0.0)
        w = x * advantage / delta
        stay = max(0.0, 1.0 - w.sum())
        moved = rng.multinomial(int(head[s]), np.append(w, stay))
        new_head += moved[:3]
        new_head[s] += moved[3]

    if mutation_rate > 0.0:
        post = np.zeros(3, dtype=np.int64)
        for s in range(3):
            k = rng.binomial(int(new_head[s]), mutation_rate)
            post[s] += new_head[s] - k
            post += rng.multinomial(int(k), [1 / 3, 1 / 3, 1 / 3])
        new_head = post

    pop.strategies = np.repeat(np.arange(3, dtype=np.int8), new_head)
    state = PopulationState(new_head[0] / n, new_head[1] / n, new_head[2] / n)
    return RoundRecord(round_index, state, p_round, realized, pool_burned)


def evolve(config: EvolveConfig) -> Trajectory:
    """Iterate rounds until the state sticks to a simplex vertex or the cap.

    Convergence requires the state to stay within ``convergence_tol`` (L1)
    of some vertex for 50 consecutive rounds.
    """
    rng = np.random.default_rng(config.seed)
    pop = init_population(config, rng)
    vertices = np.eye(3)
    records = []
    streak = 0
    terminal = MAX_ROUNDS
    for rnd in range(config.rounds_max):
        rec = run_round(
            pop,
            config.variant,
            config.params,
            config.policy,
            rng,
            mutation_rate=config.mutation_rate,
            round_index=rnd,
        )
        records.append(rec)
        dist = np.abs(vertices - rec.state.as_array()).sum(axis=1).min()
        streak = streak + 1 if dist <= config.convergence_tol else 0
        if streak >= _VERTEX_STREAK:
            terminal = CONVERGED
            break
    return Trajectory(config, tuple(records), terminal)


def replicator_step(
    state: PopulationState,
    variant: GameVariant,
    params: GameParams,
    policy: PaymentPolicy,
    dt: float = 1.0,
) -> PopulationState:
    """Deterministic mean-field comparator for one stochastic round.

    x_s <- x_s + dt * x_s * (P_s - P_bar) / delta, then renormalized.
    Payment comes from the policy at the mean-field counts; an empty
    recipient pool is treated as a fee burn, matching ``run_round``.
    """
    if not 0.0 < dt <= 1.0:
        raise ValueError("dt must be in (0, 1]")
    counts = PopulationCounts.from_state(state, params.n)
    p_round = payment_for_round(policy, params, counts)
    params_round = replace(params, p=p_round)
    try:
        pay = expected_payoffs(variant, params_round, state)
        p_vec = pay.as_array()
    except DegeneratePool:
        u = _burned_matrix(variant, params_round)
        p_vec = u @ state.as_array()
    x = state.as_array()
    p_bar = float(x @ p_vec)
    delta = payoff_spread_bound(policy, params)
    x_new = x + dt * x * (p_vec - p_bar) / delta
    x_new = np.clip(x_new, 0.0, None)
    x_new /= x_new.sum()
    return PopulationState(x_new[0], x_new[1], x_new[2])
