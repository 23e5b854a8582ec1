import numpy as np
import pytest

from rectevac import (
    ConfigurationError,
    InitConfig,
    Orientation,
    Params,
    PlacementError,
    ScenarioKind,
    place_evacuees,
)
from rectevac.scenario import place_evacuees as place


def _config(**overrides):
    defaults = dict(
        scenario=ScenarioKind.TURN,
        params=Params(r=0.5, v=0.33),
        side=50,
        rho=0.5,
        seed=0,
    )
    defaults.update(overrides)
    return InitConfig(**defaults)


def test_paper_scale_count():
    assert _config().evacuee_count == 625


@pytest.mark.parametrize("rho,side,expected", [(0.0, 50, 0), (0.1, 50, 125), (0.8, 10, 40)])
def test_count_arithmetic(rho, side, expected):
    assert _config(rho=rho, side=side).evacuee_count == expected


def test_zero_density_places_nobody():
    state = place_evacuees(_config(rho=0.0), np.random.default_rng(0))
    assert state.n == 0
    assert state.initial_count == 0


def test_density_quantization_bound():
    config = _config(side=20, rho=0.43)
    state = place_evacuees(config, np.random.default_rng(1))
    occupied_fraction = 2 * state.n / config.side**2
    assert abs(occupied_fraction - config.rho) < 2 / config.side**2


@pytest.mark.parametrize(
    "scenario,orientation",
    [
        (ScenarioKind.FORWARD, Orientation.HORIZONTAL),
        (ScenarioKind.TURN, Orientation.HORIZONTAL),
        (ScenarioKind.SIDEWAYS, Orientation.VERTICAL),
    ],
)
def test_initial_orientation_per_scenario(scenario, orientation):
    state = place_evacuees(_config(scenario=scenario, side=20, rho=0.3), np.random.default_rng(2))
    assert all(e.placement.orientation is orientation for e in state.evacuees)


def test_dense_placement_is_valid_and_interior():
    config = _config(rho=0.8, side=30)
    state = place_evacuees(config, np.random.default_rng(3))
    assert state.n == config.evacuee_count
    state.check_consistency()
    for evacuee in state.evacuees:
        for cell in evacuee.placement.cells():
            assert 0 <= cell.col < config.side
            assert 0 <= cell.row < config.side


def test_identical_seed_reproduces_initial_state():
    config = _config(side=24, rho=0.5)
    a = place_evacuees(config, np.random.default_rng(9))
    b = place_evacuees(config, np.random.default_rng(9))
    assert a.snapshot() == b.snapshot()


def test_control_scenarios_force_no_turning():
    for scenario in (ScenarioKind.FORWARD, ScenarioKind.SIDEWAYS):
        assert _config(scenario=scenario).effective_params.r == 0.0
    assert _config(scenario=ScenarioKind.TURN).effective_params.r == 0.5


@pytest.mark.parametrize("rho", [-0.1, 0.81, 0.95])
def test_out_of_range_density_rejected(rho):
    with pytest.raises(ConfigurationError):
        _config(rho=rho)


class _StuckRng:
    """Accepts the first anchor, then repeats it forever."""

    def integers(self, low, high):
        return 0

    def random(self):
        return 0.5


def test_placement_bails_out_after_consecutive_rejections():
    config = _config(side=6, rho=0.5)  # needs 9 bodies
    with pytest.raises(PlacementError):
        place(config, _StuckRng(), max_rejections=500)
