"""State preparation, covariance extraction, and the uncertainty checks.

The squeezed-state tests compare two fully independent pipelines: matrix
exponentials acting on truncated Fock vectors on one side, and the closed
8x8 symplectic form of the same transformation on the other.
"""

import numpy as np
import pytest

from quaplectic.algebra import E, Z, Zbar, element
from quaplectic.errors import DomainError, TruncationOverflowError
from quaplectic.fock import FockSpace, GeneratorImages, basis_state, max_abs, vacuum
from quaplectic.gaussian import sr_determinant_check, vacuum_covariance
from quaplectic.states import (
    CovarianceData,
    SqueezeParameters,
    StateVector,
    apply_group_element,
    covariance_matrix,
    displacement_generator,
    evolve,
    predicted_gaussian,
    quadratic_from_bilinear_phases,
    quadratic_generator,
    random_interior_state,
    semiclassical_tensors,
    sr_check,
    squeezed_state,
    uncorrelated_bound,
)
from quaplectic.units import natural_scales


@pytest.fixture(scope="module")
def vac6(images6):
    return StateVector(vacuum(images6.space), images6.space)


def test_state_vector_norm_bookkeeping(images6):
    space = images6.space
    vec = 3.0 * vacuum(space)
    state = StateVector(vec, space)
    assert state.norm() == pytest.approx(3.0)
    unit = state.normalized()
    assert unit.norm() == pytest.approx(1.0)
    assert unit.renormalization == pytest.approx(1.0 / 3.0)
    other = StateVector(basis_state(space, (1, 0, 0, 0)), space)
    assert abs(unit.inner(other)) == 0.0


def test_expectation_rejects_foreign_operators(images6, images4, vac6):
    foreign = images4.x_op(0)
    with pytest.raises(DomainError):
        vac6.expectation(foreign)


def test_squeeze_parameter_gates():
    good = np.zeros((8, 8))
    good[0, 0] = 0.1
    SqueezeParameters(quadratic=good)
    asym = np.zeros((8, 8))
    asym[0, 1] = 0.1
    with pytest.raises(DomainError):
        SqueezeParameters(quadratic=asym)
    with pytest.raises(DomainError):
        SqueezeParameters(quadratic=np.eye(8) * 0.9)  # Frobenius norm above 1
    with pytest.raises(DomainError):
        SqueezeParameters(quadratic=np.zeros((8, 8)), displacement=np.zeros(3))


def test_generators_are_anti_hermitian(images6):
    rng = np.random.default_rng(0)
    A = rng.standard_normal((8, 8))
    A = 0.05 * (A + A.T)
    G = quadratic_generator(images6, A)
    assert max_abs(G.matrix + G.dag().matrix) < 1e-12
    D = displacement_generator(images6, np.array([0.1 + 0.05j, 0.0, -0.02j, 0.03]))
    assert max_abs(D.matrix + D.dag().matrix) < 1e-12


def test_evolution_preserves_norm_and_records_renormalization(images6, vac6):
    D = displacement_generator(images6, np.array([0.1, 0.05j, 0.0, 0.0]))
    out = evolve(vac6, D)
    assert out.norm() == pytest.approx(1.0, abs=1e-12)
    assert out.renormalization == pytest.approx(1.0, abs=1e-6)


def test_evolution_raises_when_the_box_overflows():
    space = FockSpace(4)
    images = GeneratorImages(space, natural_scales(), alpha_hbar=1)
    state = StateVector(vacuum(space), space)
    hot = displacement_generator(images, np.array([2.0, 0.0, 0.0, 0.0]))
    with pytest.raises(TruncationOverflowError):
        evolve(state, hot)


def test_squeezed_state_with_zero_parameters_is_the_vacuum(images6, vac6):
    params = SqueezeParameters(quadratic=np.zeros((8, 8)))
    out = squeezed_state(images6, params)
    assert abs(out.inner(vac6)) == pytest.approx(1.0, abs=1e-14)


def test_vacuum_covariance_data(images6, vac6):
    data = covariance_matrix(images6, vac6)
    assert isinstance(data, CovarianceData)
    np.testing.assert_allclose(data.sigma, vacuum_covariance(), atol=1e-14)
    np.testing.assert_allclose(data.mean_x, np.zeros(4), atol=1e-14)
    np.testing.assert_allclose(data.mean_p, np.zeros(4), atol=1e-14)
    np.testing.assert_allclose(data.means, np.zeros(8), atol=1e-14)
    assert data.hbar == pytest.approx(1.0)
    assert data.commutation_defect() < 1e-12
    assert data.physicality_min_eigenvalue() > -1e-10


def test_squeezed_state_covariance_matches_the_closed_form(images8):
    rng = np.random.default_rng(31)
    from quaplectic.gaussian import random_quadratic

    for _ in range(5):
        A = random_quadratic(rng, norm=0.2)
        zeta = 0.06 * (rng.standard_normal(4) + 1j * rng.standard_normal(4))
        params = SqueezeParameters(quadratic=A, displacement=zeta)
        state = squeezed_state(images8, params)
        data = covariance_matrix(images8, state)
        S, sigma, means = predicted_gaussian(images8, params)
        assert np.max(np.abs(data.sigma - sigma)) < 1e-6
        assert np.max(np.abs(data.means - means)) < 1e-6
        report = sr_check(data)
        assert report["ok"]
        assert report["saturated"]


def test_sr_check_keys_and_vacuum_saturation(images6, vac6):
    report = sr_check(covariance_matrix(images6, vac6))
    assert set(report) >= {"det_sigma", "det_C", "bound", "margin", "ok",
                           "saturated", "commutation_defect"}
    assert report["ok"] and report["saturated"]
    assert report["det_sigma"] == pytest.approx(0.5 ** 8, rel=1e-12)
    assert report["bound"] == pytest.approx(0.5 ** 8, rel=1e-12)
    assert report["det_C"] == pytest.approx(0.5 ** 8, rel=1e-10)


def test_uncorrelated_bound_on_the_vacuum(images6, vac6):
    report = uncorrelated_bound(covariance_matrix(images6, vac6))
    assert report["ok"]
    assert report["product"] == pytest.approx(0.5 ** 4, rel=1e-12)


def test_number_state_determinant(images6):
    state = StateVector(basis_state(images6.space, (1, 0, 0, 0)), images6.space)
    data = covariance_matrix(images6, state)
    # one quantum in the time mode scales both its variances by three
    report = sr_determinant_check(data.sigma)
    assert report["det"] == pytest.approx(9.0 * 0.5 ** 8, rel=1e-10)


def test_quadratic_from_bilinear_phases_matches_the_operator(images6):
    from quaplectic.algebra import ZKL

    rng = np.random.default_rng(17)
    phi = rng.standard_normal((8, 8))
    phi = 0.05 * (phi + phi.T)
    A = quadratic_from_bilinear_phases(phi, images6)
    G_direct = quadratic_generator(images6, A).matrix
    # rebuild the same generator straight from the packed bilinears
    O = None
    for K in range(8):
        for L in range(8):
            term = images6.image(ZKL(K, L)).matrix * (0.5 * phi[K, L])
            O = term if O is None else O + term
    G_raw = 0.5 * (O - O.conj().T)
    assert max_abs(G_direct - G_raw) < 1e-12


def test_apply_group_element_accepts_rotations_and_rejects_raw_ladders(images6, vac6):
    rotation = element(E(1, 2)) - element(E(2, 1))
    out = apply_group_element(images6, vac6, rotation, parameter=0.4)
    assert abs(out.inner(vac6)) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(DomainError):
        apply_group_element(images6, vac6, element(E(1, 2)), parameter=0.4)
    lowering = element(Z(1)) - element(Zbar(1))
    shifted = apply_group_element(images6, vac6, lowering, parameter=0.05)
    assert shifted.norm() == pytest.approx(1.0, abs=1e-10)


def test_semiclassical_tensors_identities(images8):
    rng = np.random.default_rng(41)
    from quaplectic.gaussian import random_quadratic

    A = random_quadratic(rng, norm=0.15)
    zeta = 0.05 * (rng.standard_normal(4) + 1j * rng.standard_normal(4))
    state = squeezed_state(images8, SqueezeParameters(quadratic=A, displacement=zeta))
    tensors = semiclassical_tensors(images8, state)
    assert tensors["M_identity_max"] < 1e-12
    assert tensors["L_identity_max"] < 1e-12
    np.testing.assert_allclose(tensors["Q"], tensors["Q"].T, atol=1e-13)
    np.testing.assert_allclose(tensors["T"], tensors["T"].T, atol=1e-13)
    np.testing.assert_allclose(tensors["R"], tensors["R"].T, atol=1e-13)
    np.testing.assert_allclose(
        tensors["R"], tensors["R_ordered"] + tensors["R_ordered"].T, atol=1e-12
    )
    np.testing.assert_allclose(tensors["M"], tensors["M"].T, atol=1e-12)
    np.testing.assert_allclose(tensors["L"], -tensors["L"].T, atol=1e-12)


def test_random_interior_state_stays_off_the_boundary(images6):
    rng = np.random.default_rng(8)
    for _ in range(10):
        state = random_interior_state(images6.space, rng)
        assert state.norm() == pytest.approx(1.0, abs=1e-12)
        assert state.boundary_weight(margin=2) == 0.0
