from __future__ import annotations

import numpy as np
import pytest

from repgame import (
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
from repgame.errors import ConstraintViolation, DegeneratePool

FIG5 = GameParams(d=8.0, a=3.0, alpha=2.0, beta=4.0, p=0.5, n=10000)


def test_strategy_levels():
    assert Strategy.R.cooperation_level == 1.0
    assert Strategy.R.reputation_level == 1.0
    assert Strategy.C.cooperation_level == 1.0
    assert Strategy.C.reputation_level == 0.0
    assert Strategy.D.cooperation_level == 0.0
    assert Strategy.D.reputation_level == 0.0


@pytest.mark.parametrize(
    "bad",
    [
        GameParams(d=3.0, a=3.0, alpha=2.0, beta=4.0),
        GameParams(d=8.0, a=3.0, alpha=3.0, beta=4.0),
        GameParams(d=8.0, a=3.0, alpha=-0.1, beta=4.0),
        GameParams(d=8.0, a=3.0, alpha=2.0, beta=-1.0),
        GameParams(d=8.0, a=3.0, alpha=2.0, beta=4.0, p=-0.5),
        GameParams(d=8.0, a=3.0, alpha=2.0, beta=4.0, n=1),
    ],
)
def test_validate_params_rejects(bad):
    with pytest.raises(ConstraintViolation):
        validate_params(bad)


def test_validate_params_accepts_boundaries():
    ok = GameParams(d=8.0, a=3.0, alpha=0.0, beta=0.0, p=0.0, n=2)
    assert validate_params(ok) is ok


def test_baseline_matrix_values():
    # d=8, a=3, alpha=2, beta=4: the nine cells by direct substitution.
    u = payoff_matrix(GameVariant.BASELINE, FIG5, None)
    expected = np.array(
        [
            [7.0, 3.0, -2.0],
            [9.0, 5.0, -3.0],
            [0.0, 8.0, 0.0],
        ]
    )
    assert np.allclose(u, expected)


def test_baseline_ignores_counts_and_p():
    no_fee = GameParams(d=8.0, a=3.0, alpha=2.0, beta=4.0, p=0.0)
    u1 = payoff_matrix(GameVariant.BASELINE, FIG5, None)
    u2 = payoff_matrix(GameVariant.BASELINE, no_fee, PopulationCounts(1, 1, 9998))
    assert np.allclose(u1, u2)


def test_pay_cooperators_fee_shift():
    counts = PopulationCounts(2000, 3000, 5000)
    base = payoff_matrix(GameVariant.BASELINE, FIG5, None)
    u = payoff_matrix(GameVariant.PAY_COOPERATORS, FIG5, counts)
    rebate = FIG5.n * FIG5.p / (FIG5.n - counts.n_d)
    # cooperative rows gain the pooled share net of the fee, D only pays
    assert np.allclose(u[0] - base[0], rebate - FIG5.p)
    assert np.allclose(u[1] - base[1], rebate - FIG5.p)
    assert np.allclose(u[2] - base[2], -FIG5.p)


def test_pay_reputers_fee_shift():
    counts = PopulationCounts(2500, 2500, 5000)
    base = payoff_matrix(GameVariant.BASELINE, FIG5, None)
    u = payoff_matrix(GameVariant.PAY_REPUTERS, FIG5, counts)
    rebate = FIG5.n * FIG5.p / counts.n_r
    assert np.allclose(u[0] - base[0], rebate - FIG5.p)
    assert np.allclose(u[1] - base[1], -FIG5.p)
    assert np.allclose(u[2] - base[2], -FIG5.p)


def test_empty_pool_raises_then_burns():
    counts = PopulationCounts(0, 5000, 5000)
    with pytest.raises(DegeneratePool):
        utility(GameVariant.PAY_REPUTERS, FIG5, counts, Strategy.C, Strategy.C)
    burned = utility(
        GameVariant.PAY_REPUTERS, FIG5, counts, Strategy.C, Strategy.C,
        empty_pool="burn",
    )
    base = utility(GameVariant.BASELINE, FIG5, None, Strategy.C, Strategy.C)
    assert burned == pytest.approx(base - FIG5.p)


def test_fee_is_budget_balanced():
    # total rebates == total fees whenever the pool is non-empty
    counts = PopulationCounts(1200, 2800, 6000)
    for variant in (GameVariant.PAY_COOPERATORS, GameVariant.PAY_REPUTERS):
        u = payoff_matrix(variant, FIG5, counts)
        base = payoff_matrix(GameVariant.BASELINE, FIG5, None)
        shift = u - base  # per-strategy net fee, independent of the column
        heads = np.array([counts.n_r, counts.n_c, counts.n_d])
        assert float(heads @ shift[:, 0]) == pytest.approx(0.0, abs=1e-9)


def test_expected_payoffs_match_matrix_mix():
    state = PopulationState(0.3, 0.3, 0.4)
    counts = PopulationCounts.from_state(state, FIG5.n)
    for variant in GameVariant:
        u = payoff_matrix(variant, FIG5, counts)
        pay = expected_payoffs(variant, FIG5, state)
        direct = u @ state.as_array()
        assert np.allclose(pay.as_array(), direct)
        assert pay.p_bar == pytest.approx(float(state.as_array() @ direct))


def test_expected_payoff_arrays_agree_with_scalar_route():
    rng = np.random.default_rng(0)
    pts = rng.dirichlet(np.ones(3), size=50)
    pts = pts[(pts[:, 2] < 1 - 1e-6) & (pts[:, 0] > 1e-6)]
    xr, xc, xd = pts[:, 0], pts[:, 1], pts[:, 2]
    for variant in GameVariant:
        pr, pc, pd = expected_payoff_arrays(variant, FIG5, xr, xc, xd)
        for k in range(len(xr)):
            pay = expected_payoffs(variant, FIG5, PopulationState(xr[k], xc[k], xd[k]))
            assert pr[k] == pytest.approx(pay.p_r, abs=1e-9)
            assert pc[k] == pytest.approx(pay.p_c, abs=1e-9)
            assert pd[k] == pytest.approx(pay.p_d, abs=1e-9)


def test_population_state_validation():
    with pytest.raises(ValueError):
        PopulationState(0.5, 0.5, 0.5)
    with pytest.raises(ValueError):
        PopulationState(-0.2, 0.6, 0.6)
    s = PopulationState(0.25, 1 / 12, 2 / 3)
    assert s.as_array().sum() == pytest.approx(1.0)


def test_counts_round_trip():
    s = PopulationState(0.25, 0.25, 0.5)
    c = PopulationCounts.from_state(s, 10000)
    assert (c.n_r, c.n_c, c.n_d) == (2500.0, 2500.0, 5000.0)
    assert PopulationState.from_counts(c, 10000) == s
