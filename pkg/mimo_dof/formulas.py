"""
Closed-form degrees of freedom

Exact integer/rational DoF values for point-to-point, multiple access,
broadcast, interference, X, Z and relay channels, and the composite DoF of
the share-and-transmit cooperation scheme. No floating point is used here.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .errors import ConfigError
from .network import AntennaConfig


@dataclass(frozen=True)
class DofBounds:
    """Inner and outer bound on the DoF; exact when they meet"""
    inner: int
    outer: int

    def __post_init__(self):
        if self.inner < 0 or self.outer < 0:
            raise ConfigError(f"DoF bounds must be nonnegative, got {self.inner}, {self.outer}")
        if self.inner > self.outer:
            raise ConfigError(f"Inner bound {self.inner} exceeds outer bound {self.outer}")

    @property
    def exact(self) -> Optional[int]:
        return self.inner if self.inner == self.outer else None

    def describe(self) -> str:
        if self.exact is not None:
            return f"exact {self.exact}"
        return f"[{self.inner}, {self.outer}]"


@dataclass(frozen=True)
class RelayConfig:
    """Antennas at source, relay and destination"""
    ms: int
    mr: int
    md: int

    def __post_init__(self):
        for name in ("ms", "mr", "md"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(f"Antenna count {name} must be a positive integer, got {value!r}")


# (M1, N1, M2, N2) -> DoF, as tabulated for the two-user interference channel
TABLE_CONFIGS: Tuple[Tuple[AntennaConfig, int], ...] = (
    (AntennaConfig(1, 1, 1, 1), 1),
    (AntennaConfig(1, 2, 1, 2), 2),
    (AntennaConfig(2, 1, 2, 1), 2),
    (AntennaConfig(1, 2, 2, 1), 1),
    (AntennaConfig(3, 2, 2, 3), 2),
    (AntennaConfig(2, 3, 2, 3), 3),
    (AntennaConfig(2, 3, 1, 3), 3),
    (AntennaConfig(2, 2, 3, 2), 2),
)


def _pos(x: int) -> int:
    return max(0, x)


def dof_ptp(m: int, n: int) -> int:
    return min(m, n)


def dof_mac(m1: int, m2: int, n: int) -> int:
    return min(m1 + m2, n)


def dof_bc(m: int, n1: int, n2: int) -> int:
    return min(m, n1 + n2)


def canonicalize(config: AntennaConfig) -> Tuple[AntennaConfig, bool]:
    """Relabel links so link 1 has the most antennas at one end; ties keep the given order"""
    if max(config.m2, config.n2) > max(config.m1, config.n1):
        return config.swapped(), True
    return config, False


def dof_int_inner(config: AntennaConfig) -> int:
    """
    Achievable DoF of the interference channel.

    min(M1,N1) + min(M2-N1,N2)+ 1(M1>N1) + min(M2,N2-M1)+ 1(M1<N1), evaluated
    on the canonical labelling. When M1 == N1 only the first term remains.
    """
    c, _ = canonicalize(config)
    dof = min(c.m1, c.n1)
    if c.m1 > c.n1:
        dof += _pos(min(c.m2 - c.n1, c.n2))
    elif c.m1 < c.n1:
        dof += _pos(min(c.m2, c.n2 - c.m1))
    return dof


def genie_bounds(config: AntennaConfig) -> Dict[str, int]:
    """Every outer bound that applies to the configuration"""
    c = config
    bounds = {"trivial": min(c.m1 + c.m2, c.n1 + c.n2)}
    if c.n1 >= c.m2:
        bounds["genie-r1"] = min(c.m1 + c.m2, c.n1)
    if c.n2 >= c.m1:
        bounds["genie-r2"] = min(c.m1 + c.m2, c.n2)
    return bounds


def dof_int_outer(config: AntennaConfig) -> int:
    """Tightest of the trivial joint-processing bound and the applicable genie bounds"""
    return min(genie_bounds(config).values())


def dof_int_resolve(config: AntennaConfig) -> DofBounds:
    return DofBounds(inner=dof_int_inner(config), outer=dof_int_outer(config))


def dof_x_lower(config: AntennaConfig) -> int:
    """X channel: the most capable of the embedded MAC and BC channels"""
    c = config
    return max(
        min(max(c.m1, c.m2), c.n1 + c.n2),
        min(c.m1 + c.m2, max(c.n1, c.n2)),
    )


def dof_z(config: AntennaConfig) -> DofBounds:
    """
    Z channel (no T1 -> R2 path).

    The genie-aided channel of the interference bound is a Z channel, so the
    interference channel bounds carry over unchanged.
    """
    return dof_int_resolve(config)


def dof_relay_upper(relay: RelayConfig) -> int:
    """Cut-set bound of the relay channel; never beats the direct link"""
    cut_set = min(
        min(relay.ms, relay.mr + relay.md),
        min(relay.ms + relay.mr, relay.md),
    )
    direct = min(relay.ms, relay.md)
    assert cut_set == direct, (relay, cut_set, direct)
    return cut_set


def dof_share_transmit(m: int, n: int) -> Fraction:
    """
    Symmetric share-and-transmit DoF: 2 / (1/DoF_share + 2/DoF_transmit).

    Sharing is an m x m point-to-point link; transmission is a 2m-antenna
    broadcast to two n-antenna receivers.
    """
    dof_sharing = dof_ptp(m, m)
    dof_transmit = dof_bc(2 * m, n, n)
    return Fraction(2) / (Fraction(1, dof_sharing) + Fraction(2, dof_transmit))


def dof_share_transmit_general(m1: int, m2: int, n1: int, n2: int) -> Fraction:
    """Share-and-transmit DoF with unequal antenna counts"""
    dof_sharing = dof_ptp(m1, m2)
    dof_transmit = dof_bc(m1 + m2, n1, n2)
    return Fraction(2) / (Fraction(1, dof_sharing) + Fraction(2, dof_transmit))


def dof_cooperative_bc(config: AntennaConfig) -> int:
    """DoF if the two transmitters could cooperate for free"""
    return dof_bc(config.m1 + config.m2, config.n1, config.n2)
