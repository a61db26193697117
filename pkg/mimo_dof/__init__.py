"""
mimo-dof: degrees of freedom of multiuser MIMO channels

Closed-form DoF bounds, the zero-forcing and SVD schemes that achieve them,
the genie-aided outer bound, the share-and-transmit cooperation scheme and
Monte Carlo slope estimation that checks all of them numerically.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    ConstructionError,
    DofError,
    EstimationError,
    HypothesisError,
    RankDeficiencyError,
)
from .network import AntennaConfig, ChannelRealization, LinkGains, SnrGrid, sample_channel, snr_grid
from .formulas import (
    DofBounds,
    RelayConfig,
    TABLE_CONFIGS,
    dof_bc,
    dof_int_inner,
    dof_int_outer,
    dof_int_resolve,
    dof_mac,
    dof_ptp,
    dof_relay_upper,
    dof_share_transmit,
    dof_x_lower,
    dof_z,
)
from .schemes import (
    SCHEMES,
    build_int_scheme,
    genie_noise,
    rate_bc_zf,
    rate_int_genie_outer,
    rate_int_zf,
    rate_mac_zf,
    rate_ptp,
    rate_share_and_transmit,
)
from .estimator import RateCurve, SlopeEstimate, estimate_dof, sweep_rates
