"""State construction and measurement on the truncated oscillator space.

Squeezed states are built by exponentiating anti-Hermitian generators with
``expm_multiply`` directly on the state vector; every evolution passes a
truncation gate that measures how much probability has drifted into the
outer shell of the occupation box, so a silently corrupted state cannot
leave this module.

Covariances come from eight matvecs: with ``v_a = R_a |psi>``, the real part
of ``<v_a, v_b>`` carries the second moments and the imaginary part must
reproduce the commutation matrix ``(hbar / 2) J``, which is returned as part
of the covariance data and checked for physicality.

Index conventions: quadrature covariances are reported for the upper-index
operators ``(X^0..X^3, P^0..P^3)``; the semiclassical tensors use
metric-lowered operators, with the lowering applied in exactly one place.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from . import algebra, gaussian
from .errors import DomainError, TruncationOverflowError
from .fock import FockOperator, FockSpace, GeneratorImages, InteriorProjector, vacuum

__all__ = [
    "StateVector",
    "SqueezeParameters",
    "quadratic_generator",
    "displacement_generator",
    "quadratic_from_bilinear_phases",
    "evolve",
    "apply_group_element",
    "squeezed_state",
    "predicted_gaussian",
    "CovarianceData",
    "covariance_matrix",
    "sr_check",
    "uncorrelated_bound",
    "semiclassical_tensors",
    "random_interior_state",
]


@dataclass
class StateVector:
    """Vector on a truncated occupation space.

    ``renormalization`` records the factor most recently applied by
    :meth:`normalized`, so post-truncation rescaling is visible rather than
    silent.
    """

    amplitudes: np.ndarray
    space: FockSpace
    renormalization: float = 1.0

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (self.space.dim,):
            raise DomainError(
                f"amplitude vector has shape {self.amplitudes.shape}, expected ({self.space.dim},)"
            )

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n == 0:
            raise DomainError("cannot normalize the zero vector")
        return StateVector(self.amplitudes / n, self.space, renormalization=1.0 / n)

    def inner(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def expectation(self, op: FockOperator) -> complex:
        if op.space.dim != self.space.dim:
            raise DomainError(
                f"operator dimension {op.space.dim} does not match state dimension {self.space.dim}"
            )
        return complex(np.vdot(self.amplitudes, op.matrix @ self.amplitudes))

    def boundary_weight(self, margin: int = 2) -> float:
        return InteriorProjector(self.space, margin).boundary_weight(self.amplitudes)


@dataclass
class SqueezeParameters:
    """Quadratic-plus-linear exponent data for a squeezed coherent state.

    ``quadratic`` is the real symmetric 8x8 coefficient matrix of the
    quadrature Hamiltonian; ``displacement`` holds four complex ladder
    amplitudes.  The Frobenius norm of the quadratic part is capped at 1:
    beyond that the truncated box cannot hold the state at the cutoffs this
    package runs at, and the leakage gate would reject it anyway.
    """

    quadratic: np.ndarray
    displacement: np.ndarray = field(default_factory=lambda: np.zeros(4, dtype=complex))

    def __post_init__(self):
        self.quadratic = np.asarray(self.quadratic, dtype=float)
        self.displacement = np.asarray(self.displacement, dtype=complex)
        if self.quadratic.shape != (8, 8):
            raise DomainError(f"quadratic form must be 8x8, got {self.quadratic.shape}")
        if np.max(np.abs(self.quadratic - self.quadratic.T)) > 1e-12 * (1 + np.max(np.abs(self.quadratic))):
            raise DomainError("quadratic form must be symmetric")
        if np.linalg.norm(self.quadratic) > 1.0 + 1e-12:
            raise DomainError("quadratic form norm exceeds 1, outside the supported squeezing range")
        if self.displacement.shape != (4,):
            raise DomainError(f"displacement must have four components, got {self.displacement.shape}")


def quadratic_generator(images: GeneratorImages, A: np.ndarray) -> FockOperator:
    """Anti-Hermitian matrix ``-(i / hbar) (1 / 2) sum A_ab R_a R_b``."""
    A = 0.5 * (np.asarray(A, dtype=float) + np.asarray(A, dtype=float).T)
    quads = images.quadratures()
    total = None
    for a in range(8):
        for b in range(8):
            if A[a, b] == 0.0:
                continue
            term = (quads[a] @ quads[b]) * (A[a, b] * (-0.5j / images.hbar))
            total = term if total is None else total + term
    if total is None:
        zero = sp.csr_matrix((images.space.dim, images.space.dim), dtype=complex)
        return FockOperator(zero, 2, images.space)
    return total


def displacement_generator(images: GeneratorImages, w: np.ndarray) -> FockOperator:
    """Anti-Hermitian ladder shift ``sum_mu w_mu Z_mu - conj(w_mu) Zbar_mu``."""
    w = np.asarray(w, dtype=complex)
    if w.shape != (4,):
        raise DomainError(f"displacement must have four components, got {w.shape}")
    total = None
    for mu in range(4):
        term = images.image(algebra.Z(mu)) * w[mu] + images.image(algebra.Zbar(mu)) * (-np.conj(w[mu]))
        total = term if total is None else total + term
    return total


def quadratic_from_bilinear_phases(phi: np.ndarray, images: GeneratorImages) -> np.ndarray:
    """Quadrature form equivalent to a packed-bilinear exponent.

    The anti-Hermitian projection of ``(1 / 2) sum phi_KL {Z_K, Z_L} / 2 alpha``
    equals ``-(i / hbar) (1 / 2) sum A_ab R_a R_b`` with
    ``A = -(hbar / alpha) Im(sym(G^T phi G))``, where ``G`` expands the packed
    ladder vector over the quadratures.  Feeding the result to
    :func:`quadratic_generator` or :func:`gaussian.gaussian_covariance` yields
    the same state and covariance as the bilinear exponent itself.
    """
    phi = np.asarray(phi, dtype=complex)
    if phi.shape != (8, 8):
        raise DomainError(f"bilinear phase matrix must be 8x8, got {phi.shape}")
    lx, lp = images.scales.lambda_x, images.scales.lambda_p
    G = np.zeros((8, 8), dtype=complex)
    for mu in range(4):
        e = algebra.eta(mu) / math.sqrt(2.0)
        G[mu, mu] = e / lx
        G[mu, 4 + mu] = -1j * e / lp
        G[mu + 4, mu] = e / lx
        G[mu + 4, 4 + mu] = 1j * e / lp
    W = G.T @ phi @ G
    W = 0.5 * (W + W.T)
    return -(images.hbar / images.alpha) * np.imag(W)


def evolve(state: StateVector, generator: FockOperator, leakage_tol: float = 1e-6,
           margin: int = 2) -> StateVector:
    """Apply ``expm(generator)`` to a state, gated on truncation leakage.

    Raises
    ------
    TruncationOverflowError
        If the evolved state puts more than ``leakage_tol`` probability into
        the outer ``margin`` shell of the occupation box, where images are
        no longer faithful.  Remedies: larger cutoff or smaller parameters.
    """
    psi = expm_multiply(generator.matrix, state.amplitudes)
    out = StateVector(psi, state.space)
    leak = out.boundary_weight(margin)
    norm = out.norm()
    if leak > leakage_tol * norm ** 2 or abs(norm - 1.0) > max(1e-6, 10 * leakage_tol):
        raise TruncationOverflowError(
            f"evolution pushed weight {leak:.3e} into the boundary shell "
            f"(norm drift {abs(norm - 1.0):.3e}, tolerance {leakage_tol:.1e}); "
            "increase the cutoff or reduce the generator strength"
        )
    return out.normalized()


def apply_group_element(images: GeneratorImages, state: StateVector, generator,
                        parameter: float = 1.0, leakage_tol: float = 1e-6,
                        margin: int = 2) -> StateVector:
    """Apply a one-parameter group element ``exp(parameter * K)`` to a state.

    ``generator`` may be an :class:`algebra.AlgebraElement` (including packed
    bilinear combinations) or a prebuilt :class:`FockOperator`; either way
    the resulting matrix exponent must be anti-Hermitian so the action is
    unitary up to truncation.

    Raises
    ------
    DomainError
        If the exponent is not anti-Hermitian.
    TruncationOverflowError
        If the transformed state leaks past the interior gate.
    """
    if isinstance(generator, FockOperator):
        op = generator
    else:
        op = images.image_of_element(generator)
    K = op * parameter
    scale = max(1.0, float(np.max(np.abs(K.matrix.data))) if K.matrix.nnz else 0.0)
    defect = (K.matrix + K.matrix.getH()).tocsr()
    worst = float(np.max(np.abs(defect.data))) if defect.nnz else 0.0
    if worst > 1e-10 * scale:
        raise DomainError(
            f"group exponent is not anti-Hermitian (defect {worst:.3e}); "
            "project the coefficients before exponentiating"
        )
    return evolve(state, K, leakage_tol, margin)


def squeezed_state(images: GeneratorImages, params: SqueezeParameters,
                   leakage_tol: float = 1e-6, margin: int = 2) -> StateVector:
    """Squeezed coherent state: quadratic exponential after a displacement.

    Builds ``exp(K_A) exp(K_w) |0>`` with the generators of
    :func:`quadratic_generator` and :func:`displacement_generator`.  The
    matching covariance prediction is :func:`predicted_gaussian`.
    """
    state = StateVector(vacuum(images.space), images.space)
    if np.any(params.displacement != 0):
        state = evolve(state, displacement_generator(images, params.displacement), leakage_tol, margin)
    if np.any(params.quadratic != 0):
        state = evolve(state, quadratic_generator(images, params.quadratic), leakage_tol, margin)
    return state


def predicted_gaussian(images: GeneratorImages, params: SqueezeParameters):
    """Closed-form ``(S, sigma, means)`` for the state of :func:`squeezed_state`."""
    form = gaussian.SymplecticForm(hbar=images.hbar)
    return gaussian.gaussian_covariance(params.quadratic, form, images.scales,
                                        images.alpha, params.displacement)


@dataclass
class CovarianceData:
    """Measured first and second quadrature moments of a state.

    ``sigma`` holds the symmetrized central second moments, ``C`` the
    antisymmetric (commutator) part of the raw moments, which must equal
    ``(hbar / 2) J`` on interior-supported states.
    """

    mean_x: np.ndarray
    mean_p: np.ndarray
    sigma: np.ndarray
    C: np.ndarray
    hbar: float

    @property
    def means(self) -> np.ndarray:
        """All eight quadrature means, position block first."""
        return np.concatenate([self.mean_x, self.mean_p])

    def commutation_defect(self) -> float:
        """Largest deviation of C from its constant canonical form."""
        form = gaussian.SymplecticForm(hbar=self.hbar)
        return float(np.max(np.abs(self.C - form.commutation_matrix())))

    def physicality_min_eigenvalue(self) -> float:
        """Smallest eigenvalue of sigma + iC; physical states keep it >= 0."""
        H = self.sigma + 1j * self.C
        return float(np.linalg.eigvalsh(0.5 * (H + H.conj().T))[0])


def covariance_matrix(images: GeneratorImages, state: StateVector,
                      leakage_tol: float = 1e-6, margin: int = 2) -> CovarianceData:
    """Covariance of the eight quadratures in a given state.

    Raises
    ------
    TruncationOverflowError
        If the state carries more than ``leakage_tol`` weight on the
        boundary shell, where the measured moments would be unreliable.
    """
    leak = state.boundary_weight(margin)
    if leak > leakage_tol:
        raise TruncationOverflowError(
            f"state has boundary-shell weight {leak:.3e} (tolerance {leakage_tol:.1e}); "
            "covariances near the cutoff are unreliable, use a larger cutoff"
        )
    quads = images.quadratures()
    vecs = [op.matrix @ state.amplitudes for op in quads]
    psi = state.amplitudes
    means = np.array([np.vdot(psi, v).real for v in vecs])
    gram = np.zeros((8, 8), dtype=complex)
    for a in range(8):
        for b in range(a, 8):
            gram[a, b] = np.vdot(vecs[a], vecs[b])
            gram[b, a] = np.conj(gram[a, b])
    sigma = np.real(gram) - np.outer(means, means)
    sigma = 0.5 * (sigma + sigma.T)
    C = np.imag(gram)
    C = 0.5 * (C - C.T)
    return CovarianceData(mean_x=means[:4], mean_p=means[4:], sigma=sigma, C=C,
                          hbar=images.hbar)


def sr_check(data: CovarianceData, tol: float = 1e-9) -> dict:
    """Determinant uncertainty check for measured covariance data.

    Returns ``det_sigma``, ``det_C`` (determinant of the measured commutator
    matrix), the closed-form ``bound``, the ``margin`` above it, an ``ok``
    flag at tolerance ``tol``, and ``saturated`` marking minimal-uncertainty
    states.
    """
    form = gaussian.SymplecticForm(hbar=data.hbar)
    base = gaussian.sr_determinant_check(data.sigma, form, tol)
    bound = base["bound"]
    return {
        "det_sigma": base["det"],
        "det_C": float(np.linalg.det(data.C)),
        "bound": bound,
        "margin": base["margin"],
        "ok": base["ok"],
        "saturated": bool(abs(base["margin"]) < 1e-8 * bound),
        "commutation_defect": data.commutation_defect(),
    }


def uncorrelated_bound(data: CovarianceData, corr_tol: float = 1e-8) -> dict:
    """Per-mode uncertainty product for correlation-free covariance data."""
    form = gaussian.SymplecticForm(hbar=data.hbar)
    return gaussian.uncorrelated_product(data.sigma, form, corr_tol)


def semiclassical_tensors(images: GeneratorImages, state: StateVector,
                          leakage_tol: float = 1e-6) -> dict:
    """Second-moment tensors and their homogeneous-expectation identities.

    All tensors carry lowered indices (metric applied to the quadrature
    operators once, here).  Returned entries:

    - ``Q``, ``T``: symmetrized ``<X_m X_n>`` and ``<P_m P_n>``;
    - ``R``: the symmetric combination ``<X_m P_n + X_n P_m>`` with each
      product symmetrized in operator order;
    - ``R_ordered``: the half-anticommutator table ``<{X_m, P_n}> / 2``,
      whose antisymmetric part feeds the rotation-generator identity;
    - ``M``, ``L``: expectation tables of the tensor-form generators;
    - identity residuals for ``M = (Q / lx^2 + T / lp^2) / alpha`` and
      ``L_mn = (R_ordered_mn - R_ordered_nm) / hbar``.
    """
    leak = state.boundary_weight(3)
    if leak > leakage_tol:
        raise TruncationOverflowError(
            f"state has boundary-shell weight {leak:.3e} at margin 3; "
            "tensor expectations would be unreliable, use a larger cutoff"
        )
    psi = state.amplitudes
    xs = [(images.x_op(mu) * algebra.eta(mu)).matrix @ psi for mu in range(4)]
    ps = [(images.p_op(mu) * algebra.eta(mu)).matrix @ psi for mu in range(4)]

    def sym_moment(u, v):
        return 0.5 * (np.vdot(u, v) + np.vdot(v, u)).real

    Q = np.array([[sym_moment(xs[m], xs[n]) for n in range(4)] for m in range(4)])
    T = np.array([[sym_moment(ps[m], ps[n]) for n in range(4)] for m in range(4)])
    R_ordered = np.array([[0.5 * (np.vdot(xs[m], ps[n]) + np.vdot(ps[n], xs[m])).real
                           for n in range(4)] for m in range(4)])
    R = R_ordered + R_ordered.T

    M_exp = np.zeros((4, 4))
    L_exp = np.zeros((4, 4))
    for m in range(4):
        for n in range(4):
            M_exp[m, n] = state.expectation(images.image_of_element(algebra.tensor_form("M", m, n))).real
            L_exp[m, n] = state.expectation(images.image_of_element(algebra.tensor_form("L", m, n))).real

    lx, lp = images.scales.lambda_x, images.scales.lambda_p
    M_pred = (Q / lx ** 2 + T / lp ** 2) / images.alpha
    L_pred = (R_ordered - R_ordered.T) / images.hbar
    return {
        "Q": Q,
        "T": T,
        "R": R,
        "R_ordered": R_ordered,
        "M": M_exp,
        "L": L_exp,
        "M_identity_max": float(np.max(np.abs(M_exp - M_pred))),
        "L_identity_max": float(np.max(np.abs(L_exp - L_pred))),
    }


def random_interior_state(space: FockSpace, rng: np.random.Generator, margin: int = 2,
                          decay: float = None) -> StateVector:
    """Random normalized state supported strictly inside the occupation box.

    Amplitudes are complex Gaussian with an exponential occupation envelope
    ``exp(-decay * total_occupation)``; the envelope rate is drawn from
    ``[0.3, 1.2]`` when not given.  Interior support makes every quadratic
    measurement on the state exact despite truncation.
    """
    proj = InteriorProjector(space, margin)
    if decay is None:
        decay = 0.3 + 0.9 * rng.random()
    total_occ = space.occupations.sum(axis=0)
    amps = np.zeros(space.dim, dtype=complex)
    k = proj.indices
    amps[k] = (rng.standard_normal(k.size) + 1j * rng.standard_normal(k.size)) * np.exp(-decay * total_occ[k])
    return StateVector(amps, space).normalized()
