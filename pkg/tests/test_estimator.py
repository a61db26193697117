# Tests for Monte Carlo slope estimation

import numpy as np
import pytest

from mimo_dof.errors import EstimationError, RankDeficiencyError
from mimo_dof.estimator import RateCurve, estimate_dof, sweep_rates
from mimo_dof.network import AntennaConfig, snr_grid
from mimo_dof.schemes import RatePoint, get_scheme, rate_int_zf_network, rate_ptp


def linear_curve(slope: float, offset: float = 0.0, points=(40, 45, 50, 55, 60)) -> RateCurve:
    rate = lambda snr: slope * snr / 10.0 * np.log2(10.0) + offset
    return RateCurve(tuple(RatePoint(float(s), rate(s)) for s in points), trials=1, scheme_id="line")


def test_exact_linear_curve():
    """A noiseless line is recovered with zero standard error."""
    estimate = estimate_dof(linear_curve(3.0))
    assert estimate.dof_hat == pytest.approx(3.0, abs=1e-9)
    assert estimate.stderr == pytest.approx(0.0, abs=1e-9)
    assert estimate.window_db == (40.0, 60.0)


def test_intercept_is_absorbed():
    assert estimate_dof(linear_curve(2.0, offset=7.0)).dof_hat == pytest.approx(2.0, abs=1e-9)


def test_affine_invariance():
    """Shifting rates leaves the slope alone; scaling rates scales it."""
    base = linear_curve(1.0)
    noisy = RateCurve(
        tuple(RatePoint(p.snr_db, p.sum_rate + 0.3 * np.sin(i)) for i, p in enumerate(base.points)),
        trials=1, scheme_id="noisy",
    )
    shifted = RateCurve(tuple(RatePoint(p.snr_db, p.sum_rate + 5.0) for p in noisy.points), 1, "shifted")
    scaled = RateCurve(tuple(RatePoint(p.snr_db, 2.5 * p.sum_rate) for p in noisy.points), 1, "scaled")
    reference = estimate_dof(noisy).dof_hat
    assert estimate_dof(shifted).dof_hat == pytest.approx(reference)
    assert estimate_dof(scaled).dof_hat == pytest.approx(2.5 * reference)


def test_window_selection():
    curve = linear_curve(2.0, points=(0, 10, 20, 30, 40, 50, 60))
    estimate = estimate_dof(curve, window_db=(20, 60))
    assert estimate.dof_hat == pytest.approx(2.0)
    assert estimate.window_db == (20.0, 60.0)


def test_window_too_small():
    """At least three points are needed in the window."""
    with pytest.raises(EstimationError):
        estimate_dof(linear_curve(1.0), window_db=(40, 45))
    with pytest.raises(EstimationError):
        estimate_dof(linear_curve(1.0, points=(40, 60)))


def test_rate_curve_validation():
    with pytest.raises(EstimationError):
        RateCurve((RatePoint(50.0, 1.0), RatePoint(40.0, 2.0)), trials=1, scheme_id="bad")
    with pytest.raises(EstimationError):
        RateCurve((RatePoint(40.0, 1.0),), trials=0, scheme_id="bad")


def test_single_trial_scalar_channel():
    """With one draw of a unit-gain scalar link the curve is log2(1 + rho)."""
    unit_scalar = lambda ch, rho: rate_ptp(np.array([[1.0 + 0j]]), rho)
    grid = snr_grid(0, 20, 10)
    curve = sweep_rates(unit_scalar, AntennaConfig(1, 1, 1, 1), None, grid, trials=1, seed=0)
    assert curve.rates == pytest.approx(np.log2(1.0 + grid.rho))
    assert curve.spread == (0.0, 0.0, 0.0)


def test_sweep_is_deterministic():
    """Same seed, same curve; worker count does not matter."""
    grid = snr_grid(40, 60, 5)
    config = AntennaConfig(2, 3, 2, 3)
    first = sweep_rates(rate_int_zf_network, config, None, grid, 8, seed=42)
    second = sweep_rates(rate_int_zf_network, config, None, grid, 8, seed=42)
    threaded = sweep_rates(rate_int_zf_network, config, None, grid, 8, seed=42, workers=4)
    other = sweep_rates(rate_int_zf_network, config, None, grid, 8, seed=43)
    assert first.rates.tolist() == second.rates.tolist() == threaded.rates.tolist()
    assert first.rates.tolist() != other.rates.tolist()


def test_common_random_numbers():
    """Each trial reuses one realization, so every trial's curve is increasing."""
    grid = snr_grid(40, 60, 5)
    curve = sweep_rates(rate_int_zf_network, AntennaConfig(2, 3, 2, 3), None, grid, 20, seed=0)
    assert np.all(np.diff(curve.rates) > 0)


def test_spread_shrinks_with_more_trials():
    grid = snr_grid(40, 60, 5)
    config = AntennaConfig(2, 3, 2, 3)
    few = sweep_rates(rate_int_zf_network, config, None, grid, 10, seed=1)
    many = sweep_rates(rate_int_zf_network, config, None, grid, 160, seed=1)
    assert np.mean(many.spread) < np.mean(few.spread)
    assert len(many.spread) == len(grid)


def test_scheme_errors_are_tagged():
    """Failures carry the trial index and SNR point."""
    def failing(ch, rho):
        raise RankDeficiencyError("lost rank")

    grid = snr_grid(40, 60, 10)
    with pytest.raises(EstimationError, match=r"Trial 0 at 40 dB: lost rank"):
        sweep_rates(failing, AntennaConfig(1, 1, 1, 1), None, grid, 2, seed=0)


def test_non_finite_rate_is_an_estimation_error():
    """A scheme returning NaN surfaces as an EstimationError, not a bare ValueError."""
    grid = snr_grid(40, 60, 10)
    with pytest.raises(EstimationError, match="finite"):
        sweep_rates(lambda ch, rho: float("nan"), AntennaConfig(1, 1, 1, 1), None, grid, 2, seed=0)


def test_invalid_trials():
    with pytest.raises(EstimationError):
        sweep_rates(rate_int_zf_network, AntennaConfig(1, 1, 1, 1), None, snr_grid(0, 10, 5), 0, seed=0)


def test_table_row_estimate():
    """(2,3,1,3) reaches 3 over 40-60 dB with 20 trials."""
    grid = snr_grid(40, 60, 5)
    curve = sweep_rates(get_scheme("int-zf").rate, AntennaConfig(2, 3, 1, 3), None, grid, 20, seed=0)
    estimate = estimate_dof(curve)
    assert estimate.dof_hat == pytest.approx(3.0, abs=0.15)
    assert estimate.stderr >= 0


if __name__ == "__main__":
    pytest.main([__file__])
