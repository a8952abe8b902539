import numpy as np
import pytest

from chamber import decay, interferometer, wavepacket
from chamber.branching import prepare, unitary_evolve
from chamber.constants import BOHR_RADIUS, HOUR
from chamber.decay import Sample


@pytest.fixture
def optics():
    return interferometer.OpticalConfig()


@pytest.fixture
def screen():
    return interferometer.screen_offsets()


@pytest.fixture
def calibrated_sample():
    return Sample(1000, decay.calibrate_mean_life(1000, HOUR))


@pytest.fixture
def mirror(optics):
    return wavepacket.GaussianPacket(
        mass=1.0,
        dk=wavepacket.momentum_spread_for_width(BOHR_RADIUS),
        center=optics.m2,
    )


@pytest.fixture
def lift_trajectory(optics):
    return wavepacket.Trajectory(optics.m2, optics.m2 + np.array([0.0, 0.0, 1.0]), 0.1)


@pytest.fixture
def hour_state(calibrated_sample, mirror, lift_trajectory):
    return unitary_evolve(prepare(calibrated_sample, mirror, lift_trajectory), HOUR)
