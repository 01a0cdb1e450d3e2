"""Truncated Fock images: frozen operator forms, commutators, Casimirs.

The frozen comparisons rebuild every expected operator from the raw mode
ladder matrices, so they are independent of the generator construction
they check.  Operators built from packed symmetric bilinears differ from
their normal-ordered forms on the outermost occupation shell; those
comparisons are restricted to the margin-1 interior where both agree.
"""

import math

import numpy as np
import pytest

from quaplectic.algebra import E, Z, ZK, ZKL, Zbar, element, eta, spin
from quaplectic.errors import DomainError
from quaplectic.fock import (
    FockOperator,
    FockSpace,
    GeneratorImages,
    InteriorProjector,
    anticommutator,
    basis_state,
    build_mode_ops,
    casimir_report,
    commutator_matrix,
    max_abs,
    vacuum,
    verify_rep,
)
from quaplectic.units import natural_scales


@pytest.fixture(scope="module")
def mode_ops(images4):
    return build_mode_ops(images4.space)


def _dense(op):
    return op.matrix.toarray()


def test_space_indexing_round_trip():
    space = FockSpace(3)
    assert space.dim == 4 ** 4
    for idx in range(space.dim):
        occs = space.occupation_of(idx)
        assert space.index(occs) == idx
        assert all(0 <= n <= 3 for n in occs)
    assert space.index((1, 0, 2, 0)) == space.index([1, 0, 2, 0])


def test_space_rejects_tiny_cutoffs():
    with pytest.raises(DomainError):
        FockSpace(1)


def test_vacuum_and_basis_states(images4):
    space = images4.space
    v = vacuum(space)
    assert v[space.index((0, 0, 0, 0))] == 1.0
    assert np.count_nonzero(v) == 1
    b = basis_state(space, (1, 0, 2, 0))
    assert b[space.index((1, 0, 2, 0))] == 1.0
    assert np.linalg.norm(b) == 1.0


def test_mode_ops_satisfy_ccr_on_interior(images4, mode_ops):
    proj = InteriorProjector(images4.space, 1)
    identity = np.eye(images4.space.dim)
    for i in range(4):
        for j in range(4):
            ai, aj = _dense(mode_ops[i]), _dense(mode_ops[j])
            comm = ai @ aj.conj().T - aj.conj().T @ ai
            expect = identity if i == j else 0.0 * identity
            assert max_abs(proj.restrict(comm - expect)) < 1e-14


def test_frozen_generator_images_against_raw_ladders(images4, mode_ops):
    a = [_dense(op) for op in mode_ops]
    ad = [m.conj().T for m in a]
    identity = np.eye(images4.space.dim)
    proj = InteriorProjector(images4.space, 1)

    def same(op, expected, exact=True):
        diff = op.matrix - expected
        if exact:
            assert max_abs(diff) == 0.0
        else:
            assert max_abs(proj.restrict(diff)) < 1e-13

    # translation images: time mode is the creator, space modes annihilate
    same(images4.image(Z(0)), ad[0])
    same(images4.image(Z(2)), a[2])
    same(images4.image(Zbar(0)), a[0])
    same(images4.image(Zbar(1)), ad[1])
    # hull vector slots: plain ladders, conjugates shifted by four
    same(images4.image(ZK(0)), ad[0])
    same(images4.image(ZK(4)), a[0])
    same(images4.image(ZK(1)), a[1])
    same(images4.image(ZK(5)), ad[1])
    # bilinears: off-shell products are exact, packed diagonals interior-only
    same(images4.image(E(0, 1)), a[1] @ a[0])
    same(images4.image(E(1, 0)), -ad[0] @ ad[1])
    same(images4.image(E(1, 2)), -ad[1] @ a[2])
    same(images4.image(ZKL(0, 0)), ad[0] @ ad[0])
    same(images4.image(E(0, 0)), ad[0] @ a[0] + 0.5 * identity, exact=False)
    same(images4.image(E(1, 1)), -(ad[1] @ a[1] + 0.5 * identity), exact=False)
    same(images4.image(ZKL(0, 4)), ad[0] @ a[0] + 0.5 * identity, exact=False)
    # the spin copy is represented by zero
    assert images4.image(spin(0, 1)).matrix.nnz == 0
    # signed mode-number combination
    n_ops = [adk @ ak for adk, ak in zip(ad, a)]
    expected = n_ops[0] - n_ops[1] - n_ops[2] - n_ops[3] - identity
    same(images4.number_image(), expected, exact=False)


def test_quadratures_frozen_forms(images4, mode_ops):
    a = [_dense(op) for op in mode_ops]
    ad = [m.conj().T for m in a]
    s2 = math.sqrt(2.0)
    assert max_abs(images4.x_op(0).matrix - (a[0] + ad[0]) / s2) == 0.0
    assert max_abs(images4.x_op(1).matrix + (a[1] + ad[1]) / s2) == 0.0
    assert max_abs(images4.p_op(0).matrix - 1j * (ad[0] - a[0]) / s2) == 0.0
    assert max_abs(images4.p_op(1).matrix - 1j * (ad[1] - a[1]) / s2) == 0.0
    quads = images4.quadratures()
    assert len(quads) == 8
    assert max_abs(quads[3].matrix - images4.x_op(3).matrix) == 0.0
    assert max_abs(quads[4].matrix - images4.p_op(0).matrix) == 0.0


def test_quadrature_commutators_reproduce_the_form(images4):
    quads = images4.quadratures()
    proj = InteriorProjector(images4.space, 2)
    identity = np.eye(images4.space.dim)
    J = np.zeros((8, 8))
    for mu in range(4):
        J[mu, mu + 4] = eta(mu)
        J[mu + 4, mu] = -eta(mu)
    for aa in range(8):
        for bb in range(8):
            comm = commutator_matrix(quads[aa], quads[bb])
            expect = 1j * J[aa, bb] * identity
            assert max_abs(proj.restrict(comm.matrix - expect)) < 1e-14, (aa, bb)


def test_image_of_element_is_linear(images4):
    elem = element(E(1, 1)) * 3 + element(Z(0)) * (-2)
    got = images4.image_of_element(elem).matrix
    expect = 3 * images4.image(E(1, 1)).matrix - 2 * images4.image(Z(0)).matrix
    assert max_abs(got - expect) == 0.0


def test_signed_bilinear_trace_identity(images4):
    # sum_m eta(m) (Z_m Zbar_m + Zbar_m Z_m) / 2 equals alpha times the
    # signed number combination, as operators, everywhere in the box
    total = None
    for m in range(4):
        zm = images4.image(Z(m))
        zbm = images4.image(Zbar(m))
        term = anticommutator(zm, zbm).matrix * (0.5 * eta(m))
        total = term if total is None else total + term
    assert max_abs(total - images4.number_image().matrix) < 1e-13


def test_verify_rep_reports_exact_structure(images4):
    report = verify_rep(images4)
    assert report["max_residual"] < 1e-12
    assert report["hermiticity_max"] == 0.0
    assert report["sp8_max_residual"] < 1e-12
    assert report["quaplectic_pairs"] == 625
    assert report["sp8_pairs"] == 2025
    assert report["margin"] == 2
    assert report["sp8_margin"] == 4
    assert report["interior_dim"] == 81


def test_verify_rep_rejects_margins_larger_than_the_box():
    space = FockSpace(3)
    images = GeneratorImages(space, natural_scales(), alpha_hbar=1)
    with pytest.raises(DomainError):
        verify_rep(images)  # sp8 margin 4 cannot fit in a cutoff-3 box
    report = verify_rep(images, include_sp8=False)
    assert report["max_residual"] < 1e-12


def test_casimir_combinations_vanish(images4):
    report = casimir_report(images4)
    for name, value in report["casimir_norms"].items():
        assert value < 1e-10, name
    assert report["spin_part_max"] == 0.0
    assert abs(report["kappa_fitted"]) < 1e-10
    assert report["kappa_residual"] < 1e-10
    assert report["kappa_reference"] == pytest.approx(4.0)


def test_generator_images_require_exact_alpha(images4):
    with pytest.raises(TypeError):
        GeneratorImages(images4.space, natural_scales(), alpha_hbar=0.5)


def test_interior_projector_gates_and_weights(images4):
    space = images4.space
    with pytest.raises(DomainError):
        InteriorProjector(space, space.cutoff + 1)
    proj = InteriorProjector(space, 1)
    assert proj.boundary_weight(vacuum(space)) == 0.0
    edge = basis_state(space, (space.cutoff, 0, 0, 0))
    assert proj.boundary_weight(edge) == pytest.approx(1.0)


def test_dagger_matches_conjugation_pattern(images4):
    op = images4.image(E(0, 1))
    expect = images4.image(E(1, 0)).matrix * (eta(0) * eta(1))
    assert max_abs(op.dag().matrix - expect) == 0.0
    z = images4.image(Z(3))
    assert max_abs(z.dag().matrix - images4.image(Zbar(3)).matrix) == 0.0
