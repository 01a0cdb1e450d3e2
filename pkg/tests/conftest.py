"""Shared fixtures: Fock-space generator images at the cutoffs the tests use.

Building the generator images is the only expensive setup step, so the
fixtures are session scoped and shared across test modules.  All of them
use natural scales (every lambda equal to one) and alpha_hbar = 1, which
makes hbar = 1 and the vacuum covariance equal to eye(8) / 2.
"""

import pytest

from quaplectic.fock import FockSpace, GeneratorImages
from quaplectic.units import natural_scales


@pytest.fixture(scope="session")
def images4():
    """Cutoff-4 images, the cheapest box the full sp8 scan fits in."""
    space = FockSpace(4)
    return GeneratorImages(space, natural_scales(), alpha_hbar=1)


@pytest.fixture(scope="session")
def images6():
    """Cutoff-6 images, the default verification box."""
    space = FockSpace(6)
    return GeneratorImages(space, natural_scales(), alpha_hbar=1)


@pytest.fixture(scope="session")
def images8():
    """Cutoff-8 images for the squeezed-state and sweep checks."""
    space = FockSpace(8)
    return GeneratorImages(space, natural_scales(), alpha_hbar=1)
