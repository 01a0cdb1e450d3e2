"""Determinant invariance sweeps, trace singlets, and the interior spectrum.

The frozen vacuum expectation values of the nine trace singlets are exact
rationals; they are checked at two cutoffs to confirm the interior values
do not depend on the box size.  The spectrum test recounts every level
degeneracy by direct enumeration of interior occupation tuples, which is
independent of the matrix pipeline being verified.
"""

import numpy as np
import pytest

from quaplectic.errors import DomainError, TruncationOverflowError
from quaplectic.fock import FockSpace, GeneratorImages, basis_state, max_abs, vacuum
from quaplectic.invariants import (
    SweepConfig,
    born_green_spectrum,
    general_invariants,
    invariance_sweep,
    reciprocity_map,
    singlet_matrices,
    singlet_sweep,
)
from quaplectic.states import StateVector, covariance_matrix
from quaplectic.units import natural_scales

SINGLET_NAMES = (
    "trE",
    "trE2",
    "(trE)2",
    "trZZbar",
    "trE3",
    "trE*trE2",
    "(trE)3",
    "trE*trZZbar",
    "trEZZbar",
)

# exact vacuum expectation values of the nine singlets, alpha = 1
VACUUM_SINGLETS = {
    "trE": -1.0,
    "trE2": -2.0,
    "(trE)2": 1.0,
    "trZZbar": -1.0,
    "trE3": 11.0 / 4.0,
    "trE*trE2": 2.0,
    "(trE)3": -1.0,
    "trE*trZZbar": 5.0 / 3.0,
    "trEZZbar": 2.0 / 3.0,
}


@pytest.fixture(scope="module")
def vac6(images6):
    return StateVector(vacuum(images6.space), images6.space)


def test_sweep_config_gates():
    SweepConfig(group="u31")
    with pytest.raises(DomainError):
        SweepConfig(group="so3")
    with pytest.raises(DomainError):
        SweepConfig(group="u31", samples=0)
    with pytest.raises(DomainError):
        SweepConfig(group="u31", parameter_scale=0.7)
    with pytest.raises(DomainError):
        SweepConfig(group="u31", tolerance=0.0)


def test_sweep_rejects_mismatched_cutoff(images6, vac6):
    cfg = SweepConfig(group="u31", cutoff=8)
    with pytest.raises(DomainError):
        invariance_sweep(images6, vac6, cfg)


def test_unitary_sweep_preserves_the_determinant(images6, vac6):
    cfg = SweepConfig(group="u31", samples=15, seed=3, parameter_scale=0.2, cutoff=6)
    rep = invariance_sweep(images6, vac6, cfg)
    assert rep.passed
    assert rep.excluded == 0
    assert rep.samples_used == 15
    assert rep.max_rel_deviation < 1e-9
    assert rep.base_det == pytest.approx(0.5 ** 8, rel=1e-10)
    # the covariance itself moves; only its determinant is pinned
    assert rep.sigma_max_dev > 1e-3


def test_displacement_sweep_preserves_the_whole_covariance(images6, vac6):
    cfg = SweepConfig(group="weyl_heisenberg", samples=15, seed=3, cutoff=6)
    rep = invariance_sweep(images6, vac6, cfg)
    assert rep.passed
    assert rep.max_rel_deviation < 1e-9
    assert rep.sigma_max_dev < 1e-9


def test_symplectic_sweep_preserves_the_determinant(images6, vac6):
    cfg = SweepConfig(group="sp8", samples=12, seed=3, parameter_scale=0.1, cutoff=6)
    rep = invariance_sweep(images6, vac6, cfg)
    assert rep.passed
    assert rep.max_rel_deviation < 1e-7
    assert rep.sigma_max_dev > 1e-3


def test_reciprocity_sweep_is_exact(images6, vac6):
    cfg = SweepConfig(group="reciprocity", samples=8, seed=0, cutoff=6)
    rep = invariance_sweep(images6, vac6, cfg)
    assert rep.passed
    assert rep.max_rel_deviation == 0.0
    assert rep.sigma_max_dev == 0.0


def test_reciprocity_map_rotates_and_cycles(images6):
    rng = np.random.default_rng(6)
    from quaplectic.states import random_interior_state

    state = random_interior_state(images6.space, rng)
    data = covariance_matrix(images6, state)
    once = reciprocity_map(data)
    assert np.linalg.det(once.sigma) == pytest.approx(np.linalg.det(data.sigma), rel=1e-12)
    cycled = once
    for _ in range(3):
        cycled = reciprocity_map(cycled)
    np.testing.assert_array_equal(cycled.sigma, data.sigma)
    np.testing.assert_array_equal(cycled.means, data.means)


def test_singlet_matrices_are_hermitian(images6):
    mats = singlet_matrices(images6)
    assert set(mats) == set(SINGLET_NAMES)
    for name, mat in mats.items():
        assert max_abs(mat - mat.conj().T) == 0.0, name


def test_vacuum_singlet_values_are_frozen_rationals(images6, vac6):
    values = general_invariants(images6, vac6)
    assert set(values) == set(SINGLET_NAMES)
    for name, expect in VACUUM_SINGLETS.items():
        assert values[name] == pytest.approx(expect, rel=1e-12), name


def test_singlet_values_do_not_depend_on_the_cutoff():
    space = FockSpace(5)
    images = GeneratorImages(space, natural_scales(), alpha_hbar=1)
    state = StateVector(vacuum(space), space)
    values = general_invariants(images, state)
    for name, expect in VACUUM_SINGLETS.items():
        assert values[name] == pytest.approx(expect, rel=1e-12), name


def test_general_invariants_gates():
    space = FockSpace(4)
    images = GeneratorImages(space, natural_scales(), alpha_hbar=1)
    state = StateVector(vacuum(space), space)
    with pytest.raises(DomainError):
        general_invariants(images, state)


def test_general_invariants_refuse_boundary_weight(images6):
    space = images6.space
    edge = StateVector(basis_state(space, (space.cutoff, 0, 0, 0)), space)
    with pytest.raises(TruncationOverflowError):
        general_invariants(images6, edge)


def test_singlet_sweep_finds_the_unitary_invariants(images6, vac6):
    report = singlet_sweep(images6, vac6, samples=8, seed=1)
    assert sorted(report["u31_invariant"]) == sorted(SINGLET_NAMES)
    # displacements shift every singlet: the invariant subset is empty
    assert report["displacement_invariant"] == []
    assert report["excluded"] == 0
    for name, expect in VACUUM_SINGLETS.items():
        assert report["base"][name] == pytest.approx(expect, rel=1e-12), name


def test_interior_spectrum_structure(images6):
    report = born_green_spectrum(images6)
    assert report["diagonality"] == 0.0
    assert report["spacing"] == pytest.approx(2.0)
    assert report["spacing_max_err"] < 1e-12
    assert report["affine_max_err"] < 1e-12
    assert report["degeneracy_match"] is True
    assert report["interior_dim"] == 625
    eigs = np.asarray(report["eigenvalues"])
    mults = np.asarray(report["multiplicities"])
    assert mults.sum() == 625
    np.testing.assert_allclose(np.diff(eigs), 2.0, atol=1e-12)

    # independent recount: enumerate interior occupation tuples directly
    top = images6.space.cutoff - 2
    histogram = {}
    for n0 in range(top + 1):
        for n1 in range(top + 1):
            for n2 in range(top + 1):
                for n3 in range(top + 1):
                    level = 2.0 * (n0 - n1 - n2 - n3 - 1)
                    histogram[level] = histogram.get(level, 0) + 1
    expected = sorted(histogram.items())
    np.testing.assert_allclose(eigs, [lvl for lvl, _ in expected], atol=1e-12)
    assert list(mults) == [count for _, count in expected]


def test_spectrum_margin_controls_the_interior(images6):
    report = born_green_spectrum(images6, margin=3)
    assert report["interior_dim"] == 4 ** 4
    assert report["degeneracy_match"] is True
