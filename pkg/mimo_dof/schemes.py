"""
Transmission schemes

Each scheme turns a channel realization and a transmit power into a sum rate
in bits per channel use: SVD signalling on a point-to-point link, zero
forcing on the multiple access and broadcast channels, the zero-forcing
construction for the two-user interference channel, the genie-aided MAC
outer bound and the share-and-transmit cooperation scheme.

Noise is unit-variance circularly-symmetric complex Gaussian per receive
antenna; `total_power` is the transmit power of one transmitter.
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import eigh, eigvalsh

from .errors import ConfigError, ConstructionError, EstimationError, HypothesisError, RankDeficiencyError
from .formulas import (
    DofBounds,
    dof_bc,
    dof_int_inner,
    dof_int_resolve,
    dof_mac,
    dof_ptp,
    dof_z,
)
from .network import AntennaConfig, ChannelRealization, is_full_rank

logger = logging.getLogger(__name__)

LEAKAGE_THRESHOLD = 1e-6
GENIE_EPS = 1e-12

RateFunction = Callable[[ChannelRealization, float], float]


@dataclass(frozen=True)
class RatePoint:
    """Sum rate (bits per channel use) at one SNR point"""
    snr_db: float
    sum_rate: float

    def __post_init__(self):
        if not np.isfinite(self.sum_rate) or self.sum_rate < 0:
            raise EstimationError(f"Sum rate must be finite and nonnegative, got {self.sum_rate!r} at {self.snr_db} dB")


def _check_power(total_power: float) -> None:
    if not np.isfinite(total_power) or total_power <= 0:
        raise ConfigError(f"Transmit power must be positive and finite, got {total_power!r}")


@dataclass(frozen=True, eq=False)
class ParallelChannels:
    """Independent scalar streams with noise variances lambda_i (relative to unit noise)"""
    noise_scales: np.ndarray

    def __post_init__(self):
        scales = np.asarray(self.noise_scales, dtype=float).reshape(-1)
        if np.any(~np.isfinite(scales)) or np.any(scales <= 0):
            raise RankDeficiencyError(f"Stream noise variances must be positive and finite: {scales}")
        object.__setattr__(self, "noise_scales", scales)

    @property
    def stream_count(self) -> int:
        return int(self.noise_scales.size)

    def water_filling(self, total_power: float) -> np.ndarray:
        """Power per stream maximising the sum rate under a total power budget"""
        lam = self.noise_scales
        order = np.argsort(lam)
        ranked = lam[order]
        powers = np.zeros_like(lam)
        for active in range(ranked.size, 0, -1):
            level = (total_power + ranked[:active].sum()) / active
            if level > ranked[active - 1]:
                powers[order[:active]] = level - ranked[:active]
                break
        return powers

    def sum_rate(self, total_power: float, water_filling: bool = False) -> float:
        if self.stream_count == 0:
            return 0.0
        if water_filling:
            powers = self.water_filling(total_power)
        else:
            powers = np.full(self.stream_count, total_power / self.stream_count)
        return float(np.sum(np.log2(1.0 + powers / self.noise_scales)))


def zero_forcing_noise(gain: np.ndarray) -> np.ndarray:
    """Per-stream noise variance after a pseudo-inverse receiver: diag((G^H G)^-1)"""
    rows, streams = gain.shape
    if streams == 0:
        return np.zeros(0)
    if rows < streams or not is_full_rank(gain):
        raise RankDeficiencyError(f"Zero forcing needs full column rank, got a {rows}x{streams} matrix that is not")
    gram = gain.conj().T @ gain
    return np.real(np.diag(np.linalg.inv(gram)))


def rate_ptp(h: np.ndarray, total_power: float, water_filling: bool = False) -> float:
    """SVD signalling over the min(M, N) eigenmodes, equal power unless water_filling"""
    _check_power(total_power)
    if not is_full_rank(h):
        raise RankDeficiencyError(f"Point-to-point channel of shape {h.shape} is rank deficient")
    s = np.linalg.svd(h, compute_uv=False)
    return ParallelChannels(1.0 / s ** 2).sum_rate(total_power, water_filling=water_filling)


def rate_mac_zf(h_list: Sequence[np.ndarray], total_power: float) -> float:
    """
    Zero forcing at a joint receiver.

    Each user first rotates onto its own right singular vectors (a lossless
    change of input coordinates that drops zero-gain directions). The stacked
    rotated channel is inverted with the pseudo-inverse; at most N streams are
    kept, in user order, and every stream is decoded separately.
    """
    _check_power(total_power)
    if not h_list:
        raise ConfigError("The multiple access channel needs at least one user")
    n = h_list[0].shape[0]
    columns: List[np.ndarray] = []
    for index, h in enumerate(h_list):
        if h.shape[0] != n:
            raise ConfigError(f"User {index + 1} has {h.shape[0]} receive rows, expected {n}")
        if not is_full_rank(h):
            raise RankDeficiencyError(f"Channel of user {index + 1} is rank deficient")
        _, _, vh = np.linalg.svd(h, full_matrices=False)
        columns.append(h @ vh.conj().T)
    stacked = np.hstack(columns)[:, :n]
    return ParallelChannels(zero_forcing_noise(stacked)).sum_rate(total_power)


def rate_bc_zf(h_users: Sequence[np.ndarray], total_power: float) -> float:
    """
    Zero-forcing precoding from a common transmitter.

    Each receiver first rotates onto its own left singular vectors; the
    transmitter precodes with the pseudo-inverse of the stacked rows (at most
    M streams). A precoder column norm of w_i turns power P/S into an
    effective SNR (P/S) / ||w_i||^2.
    """
    _check_power(total_power)
    if not h_users:
        raise ConfigError("The broadcast channel needs at least one user")
    m = h_users[0].shape[1]
    rows: List[np.ndarray] = []
    for index, h in enumerate(h_users):
        if h.shape[1] != m:
            raise ConfigError(f"User {index + 1} sees {h.shape[1]} transmit antennas, expected {m}")
        if not is_full_rank(h):
            raise RankDeficiencyError(f"Channel of user {index + 1} is rank deficient")
        u, _, _ = np.linalg.svd(h, full_matrices=False)
        rows.append(u.conj().T @ h)
    stacked = np.vstack(rows)[:m, :]
    if not is_full_rank(stacked):
        raise RankDeficiencyError("Stacked broadcast channel lost rank")
    precoder = np.linalg.pinv(stacked)
    column_norms = np.sum(np.abs(precoder) ** 2, axis=0)
    return ParallelChannels(column_norms).sum_rate(total_power)


class ConstructionCase(Enum):
    """Which end of link 1 holds the largest antenna array"""
    TRANSMIT_DOMINANT = "m1-dominant"
    RECEIVE_DOMINANT = "n1-dominant"


@dataclass(frozen=True, eq=False)
class EffectiveLinks:
    """
    Interference-free signalling subspaces.

    t1_dirs (M1 x d1) and t2_dirs (M2 x d2) are orthonormal transmit
    directions; r1_basis and r2_basis are orthonormal bases of the effective
    outputs each receiver keeps.
    """
    t1_dirs: np.ndarray
    t2_dirs: np.ndarray
    r1_basis: np.ndarray
    r2_basis: np.ndarray
    case_tag: ConstructionCase

    @property
    def r1_streams(self) -> int:
        return int(self.t1_dirs.shape[1])

    @property
    def r2_streams(self) -> int:
        return int(self.t2_dirs.shape[1])

    @property
    def total_streams(self) -> int:
        return self.r1_streams + self.r2_streams


def _weak_first(rank: int) -> List[int]:
    return list(range(rank - 1, -1, -1))


def _steer_inputs(h: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Rotate an orthonormal input basis so its leading columns carry the most of h."""
    if basis.shape[1] == 0:
        return basis
    _, _, vh = np.linalg.svd(h @ basis)
    return basis @ vh.conj().T


def _steer_outputs(h: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Rotate an orthonormal output basis so its leading columns see the most of h."""
    if basis.shape[1] == 0:
        return basis
    u, _, _ = np.linalg.svd(basis.conj().T @ h)
    return basis @ u


def _transmit_dominant(ch: ChannelRealization, config: AntennaConfig) -> EffectiveLinks:
    # T1 picks N1 inputs, invisible ones (null space of Z2) first
    u2, s2, vh2 = np.linalg.svd(ch.z2)
    v2 = vh2.conj().T.copy()
    rank2 = s2.size
    # link 1 aligns its invisible inputs with H1
    v2[:, rank2:] = _steer_inputs(ch.h1, v2[:, rank2:])
    candidates = list(range(rank2, config.m1)) + _weak_first(rank2)
    chosen = candidates[:config.n1]
    seen_by_r2 = {j for j in chosen if j < rank2}
    r2_free = [j for j in range(config.n2) if j not in seen_by_r2]

    # T2 may only use inputs that R1 cannot see
    _, s1, vh1 = np.linalg.svd(ch.z1)
    v1 = vh1.conj().T
    t2_free = list(range(s1.size, config.m2))
    d2 = min(len(t2_free), len(r2_free))

    return EffectiveLinks(
        t1_dirs=v2[:, chosen],
        t2_dirs=v1[:, t2_free[:d2]],
        r1_basis=np.eye(config.n1, dtype=complex),
        r2_basis=u2[:, r2_free],
        case_tag=ConstructionCase.TRANSMIT_DOMINANT,
    )


def _receive_dominant(ch: ChannelRealization, config: AntennaConfig) -> EffectiveLinks:
    # R1 keeps M1 outputs, those T2 cannot reach first
    u1, s1, vh1 = np.linalg.svd(ch.z1)
    v1 = vh1.conj().T
    rank1 = s1.size
    # link 1 aligns its unreached outputs with H1
    u1 = u1.copy()
    u1[:, rank1:] = _steer_outputs(ch.h1, u1[:, rank1:])
    candidates = list(range(rank1, config.n1)) + _weak_first(rank1)
    chosen = candidates[:config.m1]
    reached_by_t2 = {j for j in chosen if j < rank1}
    t2_free = [j for j in range(config.m2) if j not in reached_by_t2]

    # R2 keeps the outputs T1 cannot reach
    u2, s2, vh2 = np.linalg.svd(ch.z2)
    r2_free = list(range(s2.size, config.n2))
    d2 = min(len(t2_free), len(r2_free))

    return EffectiveLinks(
        t1_dirs=vh2.conj().T,
        t2_dirs=v1[:, t2_free[:d2]],
        r1_basis=u1[:, chosen],
        r2_basis=u2[:, r2_free],
        case_tag=ConstructionCase.RECEIVE_DOMINANT,
    )


def build_int_scheme(ch: ChannelRealization, config: Optional[AntennaConfig] = None) -> EffectiveLinks:
    """
    Zero-forcing construction for the two-user interference channel.

    Link 1 uses min(M1, N1) streams. Link 2 is confined to inputs that R1
    cannot see (or that land on outputs R1 ignores) and to outputs of R2
    that link 1 does not reach. The stream counts reproduce both terms of
    the inner bound.
    """
    config = config or ch.config
    if ch.config != config:
        raise ConfigError(f"Realization shapes {ch.config} do not match config {config}")
    if not config.canonical:
        raise HypothesisError(f"Config {config} is not canonical: link 1 must carry the most antennas")
    if not ch.is_full_rank():
        raise RankDeficiencyError(f"Realization for config {config} is rank deficient")

    if config.m1 >= config.n1:
        links = _transmit_dominant(ch, config)
    else:
        links = _receive_dominant(ch, config)

    expected = dof_int_inner(config)
    if links.total_streams != expected:
        raise ConstructionError(
            f"Construction for {config} produced {links.r1_streams}+{links.r2_streams} streams, expected {expected}"
        )
    logger.debug("Built %s construction for %s: %d + %d streams",
                 links.case_tag.value, config, links.r1_streams, links.r2_streams)
    return links


def _effective_gains(ch: ChannelRealization, links: EffectiveLinks) -> Tuple[np.ndarray, np.ndarray]:
    g1 = links.r1_basis.conj().T @ ch.h1 @ links.t1_dirs
    g2 = links.r2_basis.conj().T @ ch.h2 @ links.t2_dirs
    return g1, g2


def interference_leakage(ch: ChannelRealization, links: EffectiveLinks) -> np.ndarray:
    """
    Residual cross-link interference power over signal power, per stream.

    Each transmitter spreads equal power over its own streams, so the ratio
    does not depend on the transmit power.
    """
    g1, g2 = _effective_gains(ch, links)
    cross1 = links.r1_basis.conj().T @ ch.z1 @ links.t2_dirs
    cross2 = links.r2_basis.conj().T @ ch.z2 @ links.t1_dirs
    ratios = []
    for gain, cross in ((g1, cross1), (g2, cross2)):
        own, other = gain.shape[1], cross.shape[1]
        if own == 0:
            continue
        if other == 0:
            ratios.append(np.zeros(own))
            continue
        residual = np.linalg.pinv(gain) @ cross
        ratios.append((own / other) * np.sum(np.abs(residual) ** 2, axis=1))
    return np.concatenate(ratios) if ratios else np.zeros(0)


def rate_int_zf(ch: ChannelRealization, links: EffectiveLinks, total_power_per_tx: float) -> float:
    """Sum rate of the construction with per-receiver zero forcing"""
    _check_power(total_power_per_tx)
    leakage = interference_leakage(ch, links)
    if leakage.size and leakage.max() > LEAKAGE_THRESHOLD:
        raise ConstructionError(
            f"Residual interference {leakage.max():.3e} of signal power exceeds {LEAKAGE_THRESHOLD:g}"
        )
    rate = 0.0
    for gain in _effective_gains(ch, links):
        rate += ParallelChannels(zero_forcing_noise(gain)).sum_rate(total_power_per_tx)
    return rate


def rate_int_zf_network(ch: ChannelRealization, total_power_per_tx: float) -> float:
    """Relabel the links if needed, build the construction and evaluate it"""
    if not ch.config.canonical:
        ch = ch.swapped()
    return rate_int_zf(ch, build_int_scheme(ch), total_power_per_tx)


def rate_z_zf(ch: ChannelRealization, total_power_per_tx: float) -> float:
    """The interference construction evaluated with the T1 -> R2 path removed"""
    z_channel = replace(ch, z2=np.zeros_like(ch.z2))
    if not ch.config.canonical:
        ch, z_channel = ch.swapped(), z_channel.swapped()
    return rate_int_zf(z_channel, build_int_scheme(ch), total_power_per_tx)


@dataclass(frozen=True, eq=False)
class GenieNoise:
    """
    Degraded noise covariance for the genie-aided bound.

    The receiver noise I splits into independent parts with covariances
    cov_a = I - P_Z, cov_b = P_Z - alpha Z Z^H and cov_c = alpha Z Z^H, where
    P_Z projects onto the column space of Z1; kprime = cov_a + cov_c.
    """
    alpha: float
    kprime: np.ndarray
    cov_a: np.ndarray
    cov_b: np.ndarray
    cov_c: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return eigvalsh(self.kprime)


def _hermitian(a: np.ndarray) -> np.ndarray:
    return (a + a.conj().T) / 2.0


def genie_noise(z1: np.ndarray, h2: np.ndarray) -> GenieNoise:
    """alpha = min(1/smax(Z1)^2, 1/smax(H2)^2); K' = I - Z1 (Z1^H Z1)^-1 Z1^H + alpha Z1 Z1^H"""
    n1, m2 = z1.shape
    if n1 < m2:
        raise HypothesisError(f"Genie bound needs N1 >= M2, got N1={n1}, M2={m2}")
    if not is_full_rank(z1):
        raise RankDeficiencyError("Z1^H Z1 is singular")
    # Z1 (Z1^H Z1)^-1 Z1^H through an orthonormal basis of the column space
    q, _ = np.linalg.qr(z1)
    projector = _hermitian(q @ q.conj().T)
    smax_z = np.linalg.svd(z1, compute_uv=False)[0]
    smax_h = np.linalg.svd(h2, compute_uv=False)[0]
    alpha = float(min(1.0 / smax_z ** 2, 1.0 / smax_h ** 2))
    outer = _hermitian(alpha * (z1 @ z1.conj().T))
    identity = np.eye(n1, dtype=complex)
    cov_a = identity - projector
    cov_b = projector - outer
    return GenieNoise(alpha=alpha, kprime=_hermitian(cov_a + outer), cov_a=cov_a, cov_b=cov_b, cov_c=outer)


def genie_receiver(config: AntennaConfig) -> int:
    """
    Receiver at which the genie bound is applied: 1 needs N1 >= M2, 2 needs
    N2 >= M1. When both hold the receiver with more antennas is used, R1 on
    ties.
    """
    options = []
    if config.n1 >= config.m2:
        options.append((-config.n1, 1))
    if config.n2 >= config.m1:
        options.append((-config.n2, 2))
    if not options:
        raise HypothesisError(
            f"Genie outer bound needs N1 >= M2 or N2 >= M1; config {config} has "
            f"N1={config.n1} < M2={config.m2} and N2={config.n2} < M1={config.m1}"
        )
    return min(options)[1]


def rate_int_genie_outer(ch: ChannelRealization, total_power_per_tx: float, receiver: Optional[int] = None) -> float:
    """
    Sum rate of the genie-aided MAC: log2 det(I + K'^-1 S) with equal-power
    inputs S = (P/M1) H1 H1^H + (P/M2) Z1 Z1^H.

    K' is whitened on its eigenvalues above GENIE_EPS; directions below are
    dropped (K' is nonsingular whenever Z1 has full column rank). `receiver`
    forces the bound to R1 or R2; by default genie_receiver decides.
    """
    _check_power(total_power_per_tx)
    if receiver is None:
        receiver = genie_receiver(ch.config)
    elif receiver not in (1, 2):
        raise ConfigError(f"Genie receiver must be 1 or 2, got {receiver!r}")
    if receiver == 2:
        ch = ch.swapped()
    genie = genie_noise(ch.z1, ch.h2)
    m1, m2 = ch.h1.shape[1], ch.z1.shape[1]
    signal = (total_power_per_tx / m1) * ch.h1 @ ch.h1.conj().T
    signal = signal + (total_power_per_tx / m2) * ch.z1 @ ch.z1.conj().T
    w, q = eigh(genie.kprime)
    keep = w > GENIE_EPS
    whiten = (q[:, keep] / np.sqrt(w[keep])).conj().T
    effective = _hermitian(whiten @ signal @ whiten.conj().T)
    _, logdet = np.linalg.slogdet(np.eye(effective.shape[0]) + effective)
    return float(logdet / np.log(2.0))


def share_transmit_throughput(c_s: float, c_t: float) -> float:
    """Delivered data over elapsed time when 2R bits cost R/C_s sharing and 2R/C_t broadcasting"""
    if c_s <= 0 or c_t <= 0:
        return 0.0
    return 2.0 / (1.0 / c_s + 2.0 / c_t)


def rate_share_and_transmit(ch: ChannelRealization, tt_channel: np.ndarray, total_power_per_tx: float) -> float:
    """
    Share-and-transmit on a symmetric (m, n, m, n) network.

    The transmitters first exchange messages in full duplex over the m x m
    link tt_channel at power P each, then act as one 2m-antenna broadcast
    transmitter with power 2P.
    """
    _check_power(total_power_per_tx)
    c = ch.config
    if c.m1 != c.m2 or c.n1 != c.n2:
        raise HypothesisError(f"Share-and-transmit needs a symmetric (m,n,m,n) network, got {c}")
    if tt_channel is None or tt_channel.shape != (c.m1, c.m1):
        shape = None if tt_channel is None else tt_channel.shape
        raise ConfigError(f"Sharing link must be {c.m1}x{c.m1}, got {shape}")
    c_s = rate_ptp(tt_channel, total_power_per_tx)
    receivers = [np.hstack([ch.h1, ch.z1]), np.hstack([ch.z2, ch.h2])]
    c_t = rate_bc_zf(receivers, 2.0 * total_power_per_tx)
    return share_transmit_throughput(c_s, c_t)


@dataclass(frozen=True)
class SchemeSpec:
    """A named scheme: how antenna counts map to a network and how to rate it"""
    label: str
    description: str
    arities: Tuple[int, ...]
    network: Callable[[Tuple[int, ...]], AntennaConfig]
    rate: RateFunction
    bounds: Callable[[AntennaConfig], DofBounds]
    check: Callable[[AntennaConfig], object] = lambda config: None

    def resolve(self, counts: Sequence[int]) -> AntennaConfig:
        """Network for these counts, or HypothesisError naming the violated condition"""
        counts = tuple(counts)
        if len(counts) not in self.arities:
            forms = " or ".join(str(a) for a in self.arities)
            raise HypothesisError(f"Scheme '{self.label}' takes {forms} antenna counts, got {len(counts)}")
        config = self.network(counts)
        self.check(config)
        return config


def _exact(value: int) -> DofBounds:
    return DofBounds(value, value)


def _check_symmetric(config: AntennaConfig) -> None:
    if config.m1 != config.m2 or config.n1 != config.n2:
        raise HypothesisError(f"Share-and-transmit needs a symmetric (m,n,m,n) network, got {config}")


SCHEMES: Dict[str, SchemeSpec] = {
    spec.label: spec
    for spec in (
        SchemeSpec(
            label="ptp",
            description="point-to-point SVD signalling, counts (m,n)",
            arities=(2,),
            network=lambda c: AntennaConfig(c[0], c[1], 1, 1),
            rate=lambda ch, p: rate_ptp(ch.h1, p),
            bounds=lambda cfg: _exact(dof_ptp(cfg.m1, cfg.n1)),
        ),
        SchemeSpec(
            label="mac-zf",
            description="multiple access zero forcing at R1, counts (m1,m2,n)",
            arities=(3,),
            network=lambda c: AntennaConfig(c[0], c[2], c[1], c[2]),
            rate=lambda ch, p: rate_mac_zf([ch.h1, ch.z1], p),
            bounds=lambda cfg: _exact(dof_mac(cfg.m1, cfg.m2, cfg.n1)),
        ),
        SchemeSpec(
            label="bc-zf",
            description="broadcast zero forcing from T1, counts (m,n1,n2)",
            arities=(3,),
            network=lambda c: AntennaConfig(c[0], c[1], 1, c[2]),
            rate=lambda ch, p: rate_bc_zf([ch.h1, ch.z2], p),
            bounds=lambda cfg: _exact(dof_bc(cfg.m1, cfg.n1, cfg.n2)),
        ),
        SchemeSpec(
            label="int-zf",
            description="interference channel zero-forcing construction, counts (m1,n1,m2,n2)",
            arities=(4,),
            network=lambda c: AntennaConfig(*c),
            rate=rate_int_zf_network,
            bounds=dof_int_resolve,
        ),
        SchemeSpec(
            label="int-genie",
            description="genie-aided MAC outer bound, counts (m1,n1,m2,n2)",
            arities=(4,),
            network=lambda c: AntennaConfig(*c),
            rate=rate_int_genie_outer,
            bounds=dof_int_resolve,
            check=genie_receiver,
        ),
        SchemeSpec(
            label="z-zf",
            description="Z channel (no T1->R2 path) with the interference construction, counts (m1,n1,m2,n2)",
            arities=(4,),
            network=lambda c: AntennaConfig(*c),
            rate=rate_z_zf,
            bounds=dof_z,
        ),
        SchemeSpec(
            label="share-transmit",
            description="share-and-transmit cooperation, counts (m,n) or (m,n,m,n)",
            arities=(2, 4),
            network=lambda c: AntennaConfig(c[0], c[1], c[0], c[1]) if len(c) == 2 else AntennaConfig(*c),
            rate=lambda ch, p: rate_share_and_transmit(ch, ch.tt, p),
            bounds=dof_int_resolve,
            check=_check_symmetric,
        ),
    )
}


def get_scheme(label: str) -> SchemeSpec:
    try:
        return SCHEMES[label]
    except KeyError:
        raise HypothesisError(f"Unknown scheme '{label}'; choose from {', '.join(SCHEMES)}") from None
