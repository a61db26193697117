"""
Slope estimation

Monte Carlo averaging of a scheme's sum rate over random channel draws, and
the least-squares fit of rate against log2(SNR) that turns such a curve into
a DoF estimate with a standard error.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.stats import linregress

from .errors import DofError, EstimationError
from .network import AntennaConfig, LinkGains, SnrGrid, sample_channel
from .schemes import RateFunction, RatePoint

logger = logging.getLogger(__name__)

MIN_FIT_POINTS = 3


@dataclass(frozen=True)
class RateCurve:
    """Trial-averaged sum rates, ascending in SNR; spread is the standard error per point"""
    points: Tuple[RatePoint, ...]
    trials: int
    scheme_id: str
    spread: Tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "spread", tuple(self.spread))
        if self.trials < 1:
            raise EstimationError(f"A rate curve needs at least one trial, got {self.trials}")
        snrs = [p.snr_db for p in self.points]
        if any(b <= a for a, b in zip(snrs, snrs[1:])):
            raise EstimationError(f"Rate curve points must be strictly ascending in SNR: {snrs}")
        if self.spread and len(self.spread) != len(self.points):
            raise EstimationError("Spread must have one entry per curve point")

    @property
    def snr_db(self) -> np.ndarray:
        return np.array([p.snr_db for p in self.points])

    @property
    def rates(self) -> np.ndarray:
        return np.array([p.sum_rate for p in self.points])


@dataclass(frozen=True)
class SlopeEstimate:
    dof_hat: float
    stderr: float
    window_db: Tuple[float, float]


def _trial_rates(scheme: RateFunction, config: AntennaConfig, gains: LinkGains,
                 grid: SnrGrid, seed: np.random.SeedSequence, trial: int) -> np.ndarray:
    ch = sample_channel(config, gains, seed)
    rates = np.empty(len(grid))
    for j, (snr_db, rho) in enumerate(zip(grid.points, grid.rho)):
        try:
            rates[j] = scheme(ch, float(rho))
        except DofError as exc:
            raise EstimationError(f"Trial {trial} at {snr_db:g} dB: {exc}") from exc
    logger.debug("Trial %d done (%d draw(s))", trial, ch.attempts)
    return rates


def sweep_rates(scheme: RateFunction, config: AntennaConfig, gains: Optional[LinkGains],
                grid: SnrGrid, trials: int, seed: int, scheme_id: str = "scheme",
                workers: int = 1) -> RateCurve:
    """
    Average the scheme's sum rate over `trials` channel draws at every grid point.

    Each trial draws one realization and reuses it across the whole grid.
    Trial seeds are spawned from `seed`, so the curve does not depend on
    `workers`.
    """
    if trials < 1:
        raise EstimationError(f"Number of trials must be at least 1, got {trials}")
    if workers < 1:
        raise EstimationError(f"Number of workers must be at least 1, got {workers}")
    gains = gains or LinkGains()
    children = np.random.SeedSequence(seed).spawn(trials)

    def run(trial: int) -> np.ndarray:
        return _trial_rates(scheme, config, gains, grid, children[trial], trial)

    if workers == 1:
        rows = [run(t) for t in range(trials)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, range(trials)))

    rates = np.vstack(rows)
    mean = rates.mean(axis=0)
    if trials > 1:
        spread = rates.std(axis=0, ddof=1) / np.sqrt(trials)
    else:
        spread = np.zeros(len(grid))
    points = tuple(RatePoint(snr, float(r)) for snr, r in zip(grid.points, mean))
    logger.info("Swept %s on %s: %d trials, %d SNR points", scheme_id, config, trials, len(grid))
    return RateCurve(points=points, trials=trials, scheme_id=scheme_id, spread=tuple(spread.tolist()))


def estimate_dof(curve: RateCurve, window_db: Optional[Tuple[float, float]] = None) -> SlopeEstimate:
    """Least-squares slope of sum rate against log2(rho) over the window (whole curve by default)"""
    snr = curve.snr_db
    rates = curve.rates
    if window_db is None:
        if snr.size == 0:
            raise EstimationError(f"Curve '{curve.scheme_id}' has no points")
        window_db = (float(snr[0]), float(snr[-1]))
    lo, hi = window_db
    mask = (snr >= lo - 1e-9) & (snr <= hi + 1e-9)
    if mask.sum() < MIN_FIT_POINTS:
        raise EstimationError(
            f"Window [{lo:g}, {hi:g}] dB holds {int(mask.sum())} points of '{curve.scheme_id}', "
            f"need at least {MIN_FIT_POINTS}"
        )
    x = snr[mask] / 10.0 * np.log2(10.0)
    fit = linregress(x, rates[mask])
    stderr = float(fit.stderr) if np.isfinite(fit.stderr) else 0.0
    logger.info("Slope of %s over [%g, %g] dB: %.4f +/- %.4f", curve.scheme_id, lo, hi, fit.slope, stderr)
    return SlopeEstimate(dof_hat=float(fit.slope), stderr=stderr, window_db=(float(lo), float(hi)))
