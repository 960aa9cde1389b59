import math

import numpy as np
import pytest

from cvdense.channels import (
    amplifier_channel,
    attenuator_channel,
    environmental_channel,
    identity_channel,
)
from cvdense.protocol import NoiseScenario


def random_channel(rng, allow_amplifier=True):
    kinds = ["amplifier", "pureloss", "env", "identity"]
    if not allow_amplifier:
        kinds = ["pureloss", "env", "identity"]
    kind = kinds[rng.integers(0, len(kinds))]
    if kind == "amplifier":
        return amplifier_channel(rng.uniform(0.0, 0.5), rng.uniform(1.0, 2.0))
    if kind == "pureloss":
        return attenuator_channel(rng.uniform(0.0, math.pi), rng.uniform(1.0, 2.0))
    if kind == "env":
        return environmental_channel(rng.uniform(0.05, 0.4), rng.uniform(0.0, 3.0),
                                     rng.uniform(0.5, 2.0))
    return identity_channel()


def random_scenario(rng, allow_amplifier=True, tau_range=(0.6, 1.0)):
    return NoiseScenario.from_channels(
        random_channel(rng, allow_amplifier),
        random_channel(rng, allow_amplifier),
        random_channel(rng, allow_amplifier),
        rng.uniform(*tau_range),
    )


def random_physical_cov(rng, pure=False):
    """Random two-mode covariance: symplectic conjugation of vacuum or a thermal state."""
    from cvdense.families import random_pure

    cov = random_pure(rng.uniform(2.0, 40.0), int(rng.integers(0, 2**31))).cov.copy()
    if not pure:
        cov += np.diag(rng.uniform(0.0, 2.0, size=4))
    return cov


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
