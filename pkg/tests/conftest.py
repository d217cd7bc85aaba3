import numpy as np
import pytest

from spinflip import ParticleConfig, WaveConfig, build_model


@pytest.fixture
def resonance_model():
    """Circular polarization, average rest frame, on resonance (g=2, eta=2)."""
    return build_model(WaveConfig(eta=2.0, epsilon_sq=0.5), ParticleConfig(g=2.0))


@pytest.fixture
def linear_model():
    """Linear polarization eta=1 in the average rest frame (0 < mu^2 < 1)."""
    return build_model(WaveConfig(eta=1.0, epsilon_sq=0.0), ParticleConfig(g=2.0))


@pytest.fixture
def elliptical_model():
    """epsilon > 1/sqrt(2): negative squared modulus branch."""
    return build_model(WaveConfig(eta=1.0, epsilon_sq=0.81), ParticleConfig(g=2.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
