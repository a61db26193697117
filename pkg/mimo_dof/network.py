"""
Network model - Two-link MIMO networks

Antenna configurations, random channel generation with distance-based gains
and SNR grids. Everything downstream (formulas, schemes, the estimator)
consumes the types defined here.
"""

import logging
import re
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

from .errors import ConfigError, RankDeficiencyError

logger = logging.getLogger(__name__)

RANK_TOLERANCE = 1e-9
MAX_DRAWS = 100

SeedLike = Union[int, np.random.SeedSequence]


@dataclass(frozen=True)
class AntennaConfig:
    """Antenna counts (M1, N1, M2, N2) of a two-link network"""
    m1: int
    n1: int
    m2: int
    n2: int

    def __post_init__(self):
        for name in ("m1", "n1", "m2", "n2"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
                raise ConfigError(f"Antenna count {name} must be a positive integer, got {value!r}")

    @classmethod
    def parse(cls, text: str) -> "AntennaConfig":
        """Parse 'm1,n1,m2,n2'"""
        counts = parse_counts(text, 4)
        return cls(*counts)

    @property
    def canonical(self) -> bool:
        """Link 1 carries the most antennas at one of its ends"""
        return max(self.m1, self.n1) >= max(self.m2, self.n2)

    def swapped(self) -> "AntennaConfig":
        return AntennaConfig(self.m2, self.n2, self.m1, self.n1)

    def reciprocal(self) -> "AntennaConfig":
        """Transmitters and receivers exchange roles"""
        return AntennaConfig(self.n1, self.m1, self.n2, self.m2)

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.m1, self.n1, self.m2, self.n2)

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.as_tuple())


def parse_counts(text: str, expected: Optional[int] = None) -> Tuple[int, ...]:
    """Parse a comma-separated list of positive antenna counts"""
    parts = [p for p in re.split(r"[,\s]+", text.strip().strip("()")) if p]
    if not parts:
        raise ConfigError(f"Malformed antenna tuple {text!r}")
    try:
        counts = tuple(int(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"Malformed antenna tuple {text!r}: counts must be integers") from exc
    if expected is not None and len(counts) != expected:
        raise ConfigError(f"Malformed antenna tuple {text!r}: expected {expected} counts, got {len(counts)}")
    if any(c < 1 for c in counts):
        raise ConfigError(f"Malformed antenna tuple {text!r}: counts must be >= 1")
    return counts


@dataclass(frozen=True)
class LinkGains:
    """Amplitude scale factors, one per channel matrix"""
    g_h1: float = 1.0
    g_h2: float = 1.0
    g_z1: float = 1.0
    g_z2: float = 1.0
    g_tt: float = 1.0

    def __post_init__(self):
        for name in ("g_h1", "g_h2", "g_z1", "g_z2", "g_tt"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ConfigError(f"Gain {name} must be a finite nonnegative number, got {value!r}")

    @classmethod
    def from_geometry(cls, d_tr: float, d_tt: float = 1.0, gamma: float = 2.0) -> "LinkGains":
        """Every transmitter sits at d_tr from every receiver and d_tt from the other transmitter"""
        g_tr = path_gain(d_tr, gamma)
        return cls(g_h1=g_tr, g_h2=g_tr, g_z1=g_tr, g_z2=g_tr, g_tt=path_gain(d_tt, gamma))


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """
    Channel gain matrices of one network draw.

    h1: n1 x m1 (T1 -> R1), h2: n2 x m2 (T2 -> R2), z1: n1 x m2 (T2 -> R1),
    z2: n2 x m1 (T1 -> R2), tt: m2 x m1 (T1 -> T2 sharing link).
    """
    h1: np.ndarray
    h2: np.ndarray
    z1: np.ndarray
    z2: np.ndarray
    tt: Optional[np.ndarray] = None
    attempts: int = field(default=1, compare=False)

    @property
    def config(self) -> AntennaConfig:
        n1, m1 = self.h1.shape
        n2, m2 = self.h2.shape
        return AntennaConfig(int(m1), int(n1), int(m2), int(n2))

    def swapped(self) -> "ChannelRealization":
        """Relabel the links so that link 2 becomes link 1"""
        tt = None if self.tt is None else self.tt.T
        return ChannelRealization(self.h2, self.h1, self.z2, self.z1, tt, self.attempts)

    def matrices(self) -> Tuple[np.ndarray, ...]:
        mats = (self.h1, self.h2, self.z1, self.z2)
        return mats if self.tt is None else mats + (self.tt,)

    def is_full_rank(self) -> bool:
        return all(is_full_rank(m) for m in self.matrices())


def is_full_rank(matrix: np.ndarray, tol: float = RANK_TOLERANCE) -> bool:
    """Smallest singular value above tol times the largest"""
    if matrix.size == 0:
        return True
    s = np.linalg.svd(matrix, compute_uv=False)
    return bool(s[0] > 0 and s[-1] > tol * s[0])


def sample_matrix(rows: int, cols: int, gain: float, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. CN(0, gain^2) entries"""
    real = rng.standard_normal((rows, cols))
    imag = rng.standard_normal((rows, cols))
    return gain * (real + 1j * imag) / np.sqrt(2)


def sample_channel(config: AntennaConfig, gains: Optional[LinkGains] = None, seed: SeedLike = 0) -> ChannelRealization:
    """
    Draw a full-rank realization of the network.

    Rank-deficient draws (a probability-zero event for positive gains) are
    redrawn; a gain of zero makes every draw deficient and is rejected after
    MAX_DRAWS attempts.
    """
    gains = gains or LinkGains()
    rng = np.random.default_rng(seed)
    for attempt in range(1, MAX_DRAWS + 1):
        h1 = sample_matrix(config.n1, config.m1, gains.g_h1, rng)
        h2 = sample_matrix(config.n2, config.m2, gains.g_h2, rng)
        z1 = sample_matrix(config.n1, config.m2, gains.g_z1, rng)
        z2 = sample_matrix(config.n2, config.m1, gains.g_z2, rng)
        tt = sample_matrix(config.m2, config.m1, gains.g_tt, rng)
        ch = ChannelRealization(h1, h2, z1, z2, tt, attempts=attempt)
        if ch.is_full_rank():
            return ch
        logger.debug("Rank-deficient draw %d for config %s, redrawing", attempt, config)
    raise RankDeficiencyError(
        f"{MAX_DRAWS} consecutive rank-deficient draws for config {config} with gains {gains}; "
        "check for a zero gain"
    )


def path_gain(distance: float, exponent: float = 2.0) -> float:
    """Amplitude scale so that received power falls off as distance**-exponent"""
    if not distance > 0:
        raise ConfigError(f"Distance must be positive, got {distance!r}")
    if exponent < 0:
        raise ConfigError(f"Path-loss exponent must be nonnegative, got {exponent!r}")
    return float(distance ** (-exponent / 2.0))


@dataclass(frozen=True)
class SnrGrid:
    """Strictly ascending SNR points in dB"""
    points: Tuple[float, ...]

    def __post_init__(self):
        points = tuple(float(p) for p in self.points)
        object.__setattr__(self, "points", points)
        if len(points) < 2:
            raise ConfigError(f"An SNR grid needs at least 2 points, got {len(points)}")
        if any(b <= a for a, b in zip(points, points[1:])):
            raise ConfigError(f"SNR grid must be strictly ascending: {points}")

    @property
    def rho(self) -> np.ndarray:
        """Linear SNR per point"""
        return 10.0 ** (np.asarray(self.points) / 10.0)

    @property
    def log2_rho(self) -> np.ndarray:
        return np.asarray(self.points) / 10.0 * np.log2(10.0)

    def __len__(self) -> int:
        return len(self.points)


def snr_grid(lo_db: float, hi_db: float, step_db: float) -> SnrGrid:
    """Inclusive arithmetic grid lo_db, lo_db + step_db, ..., <= hi_db"""
    if not step_db > 0:
        raise ConfigError(f"SNR step must be positive, got {step_db!r}")
    if not lo_db < hi_db:
        raise ConfigError(f"Degenerate SNR range [{lo_db}, {hi_db}]")
    count = int(np.floor((hi_db - lo_db) / step_db + 1e-9)) + 1
    points = np.round(lo_db + step_db * np.arange(count), 9)
    return SnrGrid(tuple(points.tolist()))
