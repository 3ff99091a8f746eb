"""Analytic equilibrium computation and a brute-force simplex oracle.

Closed-form candidates are derived by equating expected payoffs over the
candidate support; fee-variant formulas substitute the mean-field counts
(``n_d = x_d * N``, ``n_r = x_r * N``) so that population composition and
redistribution shares are self-consistent. Every candidate is returned
with a validity flag instead of being silently dropped, so parameter
sweeps can show exactly where a regime dies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegeneratePool, NoValidEquilibrium
from .game import (
    STRATEGIES,
    GameParams,
    GameVariant,
    PopulationCounts,
    PopulationState,
    Strategy,
    expected_payoff_arrays,
    expected_payoffs,
    payoff_matrix,
    validate_params,
)

INDIFFERENCE_TOL = 1e-9

_FULL = (Strategy.R, Strategy.C, Strategy.D)
_RD = (Strategy.R, Strategy.D)
_CD = (Strategy.C, Strategy.D)
_RC = (Strategy.R, Strategy.C)


@dataclass(frozen=True)
class PureProfileResult:
    """Nash/ESS classification of a symmetric pure profile (s, s)."""

    profile: tuple[Strategy, Strategy]
    is_nash: bool
    is_strict: bool
    is_ess: bool


@dataclass(frozen=True)
class MixedEquilibrium:
    state: PopulationState
    support: tuple[Strategy, ...]
    valid: bool
    validity_note: str


class Regime(Enum):
    C_ESS = "C_ESS"
    C_WEAK_NASH = "C_WEAK_NASH"
    D_NASH = "D_NASH"
    MIXED = "MIXED"
    R_ESS = "R_ESS"
    NONE = "NONE"


@dataclass(frozen=True)
class RegimeReport:
    variant: GameVariant
    params: GameParams
    regime: Regime
    triggered_condition: str
    mixed: tuple[MixedEquilibrium, ...] = ()
    drift_note: str = ""


def pure_nash(
    variant: GameVariant, params: GameParams, counts: PopulationCounts | None = None
) -> list[PureProfileResult]:
    """Classify all three symmetric pure profiles by direct cell comparison."""
    validate_params(params)
    u = payoff_matrix(variant, params, counts)
    results = []
    for s in STRATEGIES:
        others = [t for t in STRATEGIES if t is not s]
        is_nash = all(u[s, s] >= u[t, s] for t in others)
        is_strict = all(u[s, s] > u[t, s] for t in others)
        is_ess, _ = ess_check(variant, params, counts, s)
        results.append(PureProfileResult((s, s), is_nash, is_strict, is_ess))
    return results


def ess_check(
    variant: GameVariant,
    params: GameParams,
    counts: PopulationCounts | None,
    s: Strategy,
) -> tuple[bool, str]:
    """Standard symmetric-game ESS test for strategy ``s``.

    ``s`` is ESS iff for every mutant t != s either u(s,s) > u(t,s), or
    u(s,s) = u(t,s) and u(s,t) > u(t,t).
    """
    u = payoff_matrix(variant, params, counts)
    for t in STRATEGIES:
        if t is s:
            continue
        if u[s, s] > u[t, s]:
            continue
        if u[s, s] == u[t, s] and u[s, t] > u[t, t]:
            continue
        if u[s, s] < u[t, s]:
            return False, f"{t.name} invades: u({t.name},{s.name}) > u({s.name},{s.name})"
        return False, (
            f"{t.name} drifts in: u({t.name},{s.name}) = u({s.name},{s.name}) "
            f"and u({s.name},{t.name}) <= u({t.name},{t.name})"
        )
    return True, f"{s.name} resists all mutants"


def _candidate(
    variant: GameVariant,
    params: GameParams,
    x_r: float,
    x_c: float,
    x_d: float,
    label: str,
    intended_support: tuple[Strategy, ...],
) -> MixedEquilibrium:
    """Wrap a candidate point with an evaluated validity flag.

    Valid means: components in [0,1] with the intended support strictly
    positive, payoffs equal across the support, and no off-support
    strategy doing better than the common support payoff.
    """
    comps = (x_r, x_c, x_d)
    if min(comps) < -INDIFFERENCE_TOL or max(comps) > 1.0 + INDIFFERENCE_TOL:
        # Off-simplex; keep the raw components so sweeps can plot them.
        state = PopulationState.__new__(PopulationState)
        object.__setattr__(state, "x_r", x_r)
        object.__setattr__(state, "x_c", x_c)
        object.__setattr__(state, "x_d", x_d)
        return MixedEquilibrium(
            state, intended_support, False, f"{label}: component outside [0, 1]"
        )
    comps = tuple(min(max(x, 0.0), 1.0) for x in comps)
    state = PopulationState(*comps)
    support = tuple(s for s, x in zip(STRATEGIES, comps) if x > INDIFFERENCE_TOL)
    if support != intended_support:
        return MixedEquilibrium(state, support, False, f"{label}: support degenerates")
    try:
        pay = expected_payoffs(variant, params, state)
    except DegeneratePool:
        return MixedEquilibrium(state, support, False, f"{label}: degenerate pool")
    sup_pay = [pay.of(s) for s in support]
    common = sum(sup_pay) / len(sup_pay)
    if max(sup_pay) - min(sup_pay) > INDIFFERENCE_TOL:
        return MixedEquilibrium(state, support, False, f"{label}: support not indifferent")
    for s in STRATEGIES:
        if s not in support and pay.of(s) > common + INDIFFERENCE_TOL:
            return MixedEquilibrium(
                state, support, False, f"{label}: {s.name} would invade"
            )
    return MixedEquilibrium(state, support, True, label)


def _rd_mix_roots(params: GameParams) -> list[float]:
    """x_r roots of the R/D boundary mix under a round fee.

    Equating R and D expected payoffs on the x_c = 0 edge with the
    self-consistent counts gives (d-a+beta) x^2 - alpha x + p = 0 for both
    fee variants; p = 0 recovers the baseline point alpha/(d-a+beta).
    """
    k = params.d - params.a + params.beta
    disc = params.alpha**2 - 4.0 * k * params.p
    if disc < 0 or k <= 0:
        return []
    roots = [(params.alpha - math.sqrt(disc)) / (2 * k), (params.alpha + math.sqrt(disc)) / (2 * k)]
    return sorted(set(r for r in roots if r > 0))


def mixed_closed_form(
    variant: GameVariant, params: GameParams
) -> list[MixedEquilibrium]:
    """All closed-form mixed-equilibrium candidates for a variant.

    Returns both the interior (full-support) equilibrium and the boundary
    two-strategy mixes, each flagged valid/invalid. Raises
    NoValidEquilibrium when every candidate lies entirely outside [0, 1].
    """
    validate_params(params)
    d, a, alpha, beta, p = params.d, params.a, params.alpha, params.beta, params.p
    out: list[MixedEquilibrium] = []
    if variant is GameVariant.BASELINE:
        x_r = a / (d + beta)
        x_d = alpha / a
        out.append(_candidate(variant, params, x_r, 1 - x_r - x_d, x_d, "full support", _FULL))
        if d - a + beta > 0:
            x_r = alpha / (d - a + beta)
            out.append(
                _candidate(variant, params, x_r, 0.0, 1 - x_r, "R/D mix (zero payoff)", _RD)
            )
    elif variant is GameVariant.PAY_COOPERATORS:
        x_d = alpha / a
        x_r = (a - p * a / (a - alpha)) / (d + beta)
        out.append(_candidate(variant, params, x_r, 1 - x_r - x_d, x_d, "full support", _FULL))
        for root in _rd_mix_roots(params):
            out.append(
                _candidate(
                    variant,
                    params,
                    root,
                    0.0,
                    1 - root,
                    "R/D mix (negative payoff, not designer-useful)",
                    _RD,
                )
            )
        if p > 0:
            x_c = p / a
            out.append(
                _candidate(variant, params, 0.0, x_c, 1 - x_c, "C/D mix (drift boundary)", _CD)
            )
    else:  # PAY_REPUTERS
        x_r = a / (d + beta)
        x_d = (alpha - p * (d + beta) / a) / a
        out.append(_candidate(variant, params, x_r, 1 - x_r - x_d, x_d, "full support", _FULL))
        for root in _rd_mix_roots(params):
            out.append(
                _candidate(
                    variant,
                    params,
                    root,
                    0.0,
                    1 - root,
                    "R/D mix (negative payoff, not designer-useful)",
                    _RD,
                )
            )
        if p > 0 and alpha > 0:
            x_r = p / alpha
            out.append(
                _candidate(variant, params, x_r, 1 - x_r, 0.0, "R/C mix (drift boundary)", _RC)
            )
    in_simplex = [
        eq
        for eq in out
        if all(
            -INDIFFERENCE_TOL <= x <= 1 + INDIFFERENCE_TOL
            for x in (eq.state.x_r, eq.state.x_c, eq.state.x_d)
        )
    ]
    if not in_simplex:
        raise NoValidEquilibrium(
            f"{variant.name}: no candidate inside the simplex", out
        )
    return out


def mixed_oracle(
    variant: GameVariant, params: GameParams, grid: int = 600
) -> list[MixedEquilibrium]:
    """Brute-force scan of the simplex for approximate mixed equilibria.

    Checks every point with denominator ``grid``; a point is a hit when
    the payoff spread over its support is below 10/grid and no unused
    strategy beats the support payoff by more than 10/grid. Adjacent hits
    (L1 distance <= 2/grid) are clustered; the best point of each cluster
    (smallest support spread) is returned.
    """
    if grid < 50:
        raise ValueError("grid must be >= 50")
    validate_params(params)
    idx = np.arange(grid + 1)
    i, j = np.meshgrid(idx, idx, indexing="ij")
    keep = (i + j) <= grid
    i, j = i[keep], j[keep]
    x_r = i / grid
    x_c = j / grid
    x_d = 1.0 - x_r - x_c
    x_d[np.abs(x_d) < 1e-15] = 0.0

    ok = np.ones(x_r.shape, dtype=bool)
    if variant is GameVariant.PAY_COOPERATORS:
        ok &= x_d < 1.0
    elif variant is GameVariant.PAY_REPUTERS:
        ok &= x_r > 0.0
    p_all = np.full((3, x_r.size), np.nan)
    p_r, p_c, p_d = expected_payoff_arrays(
        variant, params, x_r[ok], x_c[ok], x_d[ok]
    )
    p_all[0, ok], p_all[1, ok], p_all[2, ok] = p_r, p_c, p_d

    x_all = np.vstack([x_r, x_c, x_d])
    present = x_all > 0
    tol = 10.0 / grid
    sup_max = np.where(present, p_all, -np.inf).max(axis=0)
    sup_min = np.where(present, p_all, np.inf).min(axis=0)
    off_max = np.where(~present, p_all, -np.inf).max(axis=0)
    spread = sup_max - sup_min
    hits = (
        ok
        & (present.sum(axis=0) >= 2)
        & (spread < tol)
        & (off_max <= (sup_max + sup_min) / 2 + tol)
    )

    hit_ij = list(zip(i[hits].tolist(), j[hits].tolist()))
    hit_spread = dict(zip(hit_ij, spread[hits].tolist()))
    clusters = _cluster_grid_points(hit_ij)

    out = []
    for cluster in clusters:
        # Support spread shrinks roughly linearly towards the true point,
        # so a spread-weighted centroid beats any single grid point.
        weights = np.array([tol - hit_spread[ij] for ij in cluster])
        pts = np.array(cluster, dtype=float) / grid
        cx_r, cx_c = (weights[:, None] * pts).sum(axis=0) / weights.sum()
        bi, bj = min(cluster, key=lambda ij: hit_spread[ij])
        state = PopulationState(cx_r, cx_c, 1.0 - cx_r - cx_c)
        support = tuple(
            s
            for s, x in zip(STRATEGIES, (bi / grid, bj / grid, 1.0 - (bi + bj) / grid))
            if x > 0
        )
        out.append(
            MixedEquilibrium(state, support, True, f"oracle cluster of {len(cluster)}")
        )
    out.sort(key=lambda eq: (eq.state.x_r, eq.state.x_c))
    return out


def _cluster_grid_points(points: list[tuple[int, int]]) -> list[list[tuple[int, int]]]:
    """Group grid points whose L1 simplex distance is <= 2/grid.

    One unit step in (i, j) moves two simplex components by 1/grid each,
    so adjacency is |di| + |dj| <= 1 plus the diagonal (di, dj) = (1, -1)
    family that keeps x_d fixed.
    """
    remaining = set(points)
    neighbours = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))
    clusters = []
    for seed in sorted(points):
        if seed not in remaining:
            continue
        stack, cluster = [seed], []
        remaining.discard(seed)
        while stack:
            cur = stack.pop()
            cluster.append(cur)
            for di, dj in neighbours:
                nxt = (cur[0] + di, cur[1] + dj)
                if nxt in remaining:
                    remaining.discard(nxt)
                    stack.append(nxt)
        clusters.append(cluster)
    return clusters


def regime(
    variant: GameVariant, params: GameParams, counts: PopulationCounts | None = None
) -> RegimeReport:
    """Classify the game regime at the supplied counts.

    For the fee variants this evaluates the payment thresholds against p;
    between thresholds the report is MIXED and carries the closed-form
    equilibria. The drift bounds for the boundary cases are attached as a
    note.
    """
    validate_params(params)
    if variant is GameVariant.BASELINE:
        mixed = tuple(mixed_closed_form(variant, params))
        return RegimeReport(
            variant,
            params,
            Regime.D_NASH,
            "(D,D) is a strict Nash equilibrium for every valid parameter set",
            mixed,
        )
    if counts is None:
        raise ValueError("counts required for fee-redistribution variants")

    if variant is GameVariant.PAY_COOPERATORS:
        thr_c = params.a * (1.0 - counts.n_d / params.n)
        thr_d = params.alpha * (1.0 - counts.n_d / params.n)
        drift = (
            f"R absent while x_d < alpha/a = {params.alpha / params.a:.6g} "
            "(defectors too few to make reputation pay)"
        )
        if params.p > thr_c:
            return RegimeReport(
                variant, params, Regime.C_ESS,
                f"p = {params.p:.6g} > a*(1 - n_d/N) = {thr_c:.6g}", (), drift,
            )
        if params.p == thr_c:
            return RegimeReport(
                variant, params, Regime.C_WEAK_NASH,
                f"p = {params.p:.6g} = a*(1 - n_d/N) = {thr_c:.6g}; C/D drift", (), drift,
            )
        if params.p < thr_d:
            return RegimeReport(
                variant, params, Regime.D_NASH,
                f"p = {params.p:.6g} < alpha*(1 - n_d/N) = {thr_d:.6g}", (), drift,
            )
        return RegimeReport(
            variant, params, Regime.MIXED,
            f"p = {params.p:.6g} between thresholds ({thr_d:.6g}, {thr_c:.6g})",
            tuple(mixed_closed_form(variant, params)), drift,
        )

    thr = counts.n_r * params.alpha / params.n
    drift = (
        f"D unprofitable while x_r > a/(d+beta) = "
        f"{params.a / (params.d + params.beta):.6g}"
    )
    if params.p > thr:
        return RegimeReport(
            variant, params, Regime.R_ESS,
            f"p = {params.p:.6g} > n_r*alpha/N = {thr:.6g}", (), drift,
        )
    if params.p < thr:
        return RegimeReport(
            variant, params, Regime.D_NASH,
            f"p = {params.p:.6g} < n_r*alpha/N = {thr:.6g}", (), drift,
        )
    return RegimeReport(
        variant, params, Regime.MIXED,
        f"p = {params.p:.6g} = n_r*alpha/N exactly; R/C drift boundary",
        tuple(mixed_closed_form(variant, params)), drift,
    )
