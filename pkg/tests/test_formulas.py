# Tests for the closed-form DoF formulas

from fractions import Fraction
from itertools import product

import pytest

from mimo_dof.errors import ConfigError
from mimo_dof.formulas import (
    TABLE_CONFIGS,
    DofBounds,
    RelayConfig,
    canonicalize,
    dof_bc,
    dof_cooperative_bc,
    dof_int_inner,
    dof_int_outer,
    dof_int_resolve,
    dof_mac,
    dof_ptp,
    dof_relay_upper,
    dof_share_transmit,
    dof_share_transmit_general,
    dof_x_lower,
    dof_z,
    genie_bounds,
)
from mimo_dof.network import AntennaConfig

ALL_CONFIGS = [AntennaConfig(*counts) for counts in product(range(1, 7), repeat=4)]


def test_point_to_point_mac_and_bc():
    """Single-hop channels reduce to min() expressions."""
    assert dof_ptp(3, 3) == 3
    assert dof_ptp(4, 1) == 1
    assert dof_ptp(2, 5) == 2
    assert dof_mac(1, 1, 2) == 2
    assert dof_mac(2, 2, 3) == 3
    assert dof_mac(4, 4, 2) == 2
    assert dof_bc(5, 1, 4) == 5
    assert dof_bc(2, 1, 1) == 2
    assert dof_bc(8, 2, 2) == 4


def test_canonicalize():
    """Link 1 gets the largest array; ties keep the given order."""
    assert canonicalize(AntennaConfig(2, 2, 3, 2)) == (AntennaConfig(3, 2, 2, 2), True)
    assert canonicalize(AntennaConfig(3, 2, 2, 3)) == (AntennaConfig(3, 2, 2, 3), False)
    assert canonicalize(AntennaConfig(1, 1, 1, 1)) == (AntennaConfig(1, 1, 1, 1), False)


@pytest.mark.parametrize("config, expected", [
    (AntennaConfig(1, 1, 1, 1), 1),
    (AntennaConfig(3, 2, 2, 3), 2),
    (AntennaConfig(2, 3, 1, 3), 3),
    (AntennaConfig(1, 2, 2, 1), 1),
    (AntennaConfig(5, 1, 5, 1), 2),
])
def test_inner_bound_examples(config, expected):
    assert dof_int_inner(config) == expected


def test_outer_bound_examples():
    """The tightest applicable bound wins."""
    assert dof_int_outer(AntennaConfig(1, 2, 2, 1)) == 1
    assert dof_int_outer(AntennaConfig(2, 1, 2, 1)) == 2
    assert dof_int_outer(AntennaConfig(2, 3, 2, 3)) == 3
    assert genie_bounds(AntennaConfig(2, 1, 2, 1)) == {"trivial": 2}
    assert genie_bounds(AntennaConfig(2, 3, 2, 3)) == {"trivial": 4, "genie-r1": 3, "genie-r2": 3}


@pytest.mark.parametrize("config, exact", TABLE_CONFIGS)
def test_table_values_are_exact(config, exact):
    """Every tabulated configuration has matching bounds."""
    bounds = dof_int_resolve(config)
    assert bounds.inner == bounds.outer == exact
    assert bounds.exact == exact


def test_resolve_examples():
    assert dof_int_resolve(AntennaConfig(3, 1, 3, 1)) == DofBounds(2, 2)
    assert dof_int_resolve(AntennaConfig(2, 2, 3, 2)).exact == 2
    assert dof_int_resolve(AntennaConfig(5, 1, 5, 1)).describe() == "exact 2"


def test_open_gap_is_reported_as_interval():
    """When the bounds differ no exact value is claimed."""
    gaps = [c for c in ALL_CONFIGS if dof_int_resolve(c).exact is None]
    assert gaps
    bounds = dof_int_resolve(gaps[0])
    assert bounds.describe() == f"[{bounds.inner}, {bounds.outer}]"


def test_dof_bounds_validation():
    """Inconsistent bounds are configuration errors the command line can report."""
    with pytest.raises(ConfigError):
        DofBounds(3, 2)
    with pytest.raises(ConfigError):
        DofBounds(-1, 2)
    assert DofBounds(1, 2).exact is None


def test_inner_never_exceeds_outer():
    """Exhaustive over all dimensions 1..6."""
    for config in ALL_CONFIGS:
        assert dof_int_inner(config) <= dof_int_outer(config), config


def test_link_swap_symmetry():
    for config in ALL_CONFIGS:
        assert dof_int_resolve(config) == dof_int_resolve(config.swapped()), config


def test_inner_bound_reciprocity():
    """Exchanging transmit and receive ends leaves the inner bound unchanged."""
    for config in ALL_CONFIGS:
        assert dof_int_inner(config) == dof_int_inner(config.reciprocal()), config


def test_degenerate_dominance():
    """With one side large enough, both bounds meet the joint-processing value."""
    for c in ALL_CONFIGS:
        if min(c.m1, c.m2) >= c.n1 + c.n2 or min(c.n1, c.n2) >= c.m1 + c.m2:
            expected = min(c.m1 + c.m2, c.n1 + c.n2)
            assert dof_int_resolve(c) == DofBounds(expected, expected), c


def test_x_channel_lower_bound():
    assert dof_x_lower(AntennaConfig(1, 1, 1, 1)) == 1
    assert dof_x_lower(AntennaConfig(2, 1, 2, 1)) == 2
    assert dof_x_lower(AntennaConfig(1, 2, 1, 2)) == 2


def test_z_channel_bounds():
    for config, exact in [(AntennaConfig(1, 1, 1, 1), 1), (AntennaConfig(1, 2, 1, 2), 2), (AntennaConfig(2, 3, 2, 3), 3)]:
        assert dof_z(config).exact == exact


@pytest.mark.parametrize("relay, expected", [
    (RelayConfig(2, 3, 2), 2),
    (RelayConfig(1, 5, 4), 1),
    (RelayConfig(4, 1, 4), 4),
])
def test_relay_bound(relay, expected):
    assert dof_relay_upper(relay) == expected


def test_relay_bound_matches_direct_link():
    """The cut-set bound never beats the direct link."""
    for ms, mr, md in product(range(1, 7), repeat=3):
        assert dof_relay_upper(RelayConfig(ms, mr, md)) == min(ms, md)


def test_relay_config_validation():
    with pytest.raises(ConfigError):
        RelayConfig(0, 1, 1)


def test_share_transmit_examples():
    assert dof_share_transmit(2, 2) == 2
    assert dof_share_transmit(1, 1) == 1
    assert dof_share_transmit(4, 1) == Fraction(8, 5)
    assert dof_share_transmit(4, 1) < dof_int_inner(AntennaConfig(4, 1, 4, 1))


def test_share_transmit_never_beats_transmit_only():
    """Cooperation through the sharing link costs DoF."""
    for m, n in product(range(1, 7), repeat=2):
        share = dof_share_transmit(m, n)
        assert share <= dof_int_inner(AntennaConfig(m, n, m, n)), (m, n)
        assert share == Fraction(2 * m * min(m, n), m + min(m, n))
        if m <= n:
            assert share == m
        assert dof_share_transmit_general(m, m, n, n) == share


def test_cooperative_broadcast():
    """Free cooperation turns (n,1,1,n) into an (n+1, 1, n) broadcast channel."""
    assert dof_cooperative_bc(AntennaConfig(4, 1, 1, 4)) == 5
    assert dof_int_resolve(AntennaConfig(4, 1, 1, 4)).exact == 1


if __name__ == "__main__":
    pytest.main([__file__])
