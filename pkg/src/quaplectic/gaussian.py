"""Phase-space machinery on the eight Lorentz-ordered quadratures.

The quadrature vector is ``R = (X^0..X^3, P^0..P^3)`` with upper indices, so
the commutation matrix is ``i hbar J`` with ``J = [[0, eta], [-eta, 0]]``
built on the Lorentz metric.  The spatial (X, P) pairs therefore carry the
opposite symplectic orientation from the time pair; a fixed permutation that
swaps the roles of spatial X and P conjugates J to the standard block form,
which is where the Williamson reduction is computed before mapping back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from . import algebra
from .errors import DegeneracyError, DomainError
from .units import UnitScales, natural_scales

__all__ = [
    "STANDARD_PERMUTATION",
    "SymplecticForm",
    "symplectic_defect",
    "WilliamsonResult",
    "williamson",
    "symplectic_eigenvalues",
    "vacuum_covariance",
    "symplectic_from_quadratic",
    "displacement_means",
    "gaussian_covariance",
    "reciprocity_matrix",
    "random_quadratic",
    "random_symplectic",
    "random_covariance",
    "sr_determinant_check",
    "uncorrelated_product",
]

# Maps Lorentz-ordered quadrature slots onto (X^0, P^1, P^2, P^3, P^0, X^1, X^2, X^3),
# which carries the standard [[0, I], [-I, 0]] form.
STANDARD_PERMUTATION = (0, 5, 6, 7, 4, 1, 2, 3)


@dataclass(frozen=True)
class SymplecticForm:
    """The symplectic structure shared by every phase-space computation here.

    ``det J = 1`` exactly (J is a signed permutation), so the commutation
    matrix ``C = (hbar / 2) J`` has determinant ``(hbar / 2) ** 8``; that
    value is returned closed-form rather than recomputed.
    """

    hbar: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.hbar) and self.hbar > 0):
            raise DomainError(f"hbar must be positive and finite, got {self.hbar}")

    def matrix(self) -> np.ndarray:
        return algebra.symplectic_form_matrix()

    def permutation_matrix(self) -> np.ndarray:
        P = np.zeros((8, 8))
        for a, b in enumerate(STANDARD_PERMUTATION):
            P[a, b] = 1.0
        return P

    def standard_form(self) -> np.ndarray:
        P = self.permutation_matrix()
        return P @ self.matrix() @ P.T

    def commutation_matrix(self) -> np.ndarray:
        """Imaginary part of the quadrature second moments, ``(hbar / 2) J``."""
        return 0.5 * self.hbar * self.matrix()

    def commutation_determinant(self) -> float:
        return (0.5 * self.hbar) ** 8


def symplectic_defect(S: np.ndarray, form: SymplecticForm = None) -> float:
    """Largest entry of ``S J S^T - J``; zero for an exact symplectic matrix."""
    J = (form or SymplecticForm()).matrix()
    return float(np.max(np.abs(S @ J @ S.T - J)))


def _validate_covariance(sigma: np.ndarray) -> np.ndarray:
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (8, 8):
        raise DomainError(f"covariance must be 8x8, got {sigma.shape}")
    scale = 1.0 + float(np.max(np.abs(sigma)))
    if np.max(np.abs(sigma - sigma.T)) > 1e-8 * scale:
        raise DomainError("covariance matrix is not symmetric")
    w = np.linalg.eigvalsh(0.5 * (sigma + sigma.T))
    if w[0] <= 0:
        raise DomainError(f"covariance matrix is not positive definite (min eigenvalue {w[0]:.3e})")
    return 0.5 * (sigma + sigma.T)


@dataclass
class WilliamsonResult:
    """Symplectic normal form ``S sigma S^T = D`` with ``S J S^T = J``.

    ``nu`` holds the four symplectic eigenvalues in descending order;
    ``diagonal`` is the full ``D``, whose entries pair each ``X^mu`` slot
    with its ``P^mu`` partner at the same ``nu``.
    """

    nu: np.ndarray
    S: np.ndarray
    diagonal: np.ndarray


def williamson(sigma: np.ndarray, form: SymplecticForm = None) -> WilliamsonResult:
    """Williamson reduction of a positive-definite 8x8 covariance matrix.

    The matrix is conjugated to the standard-form frame, where the skew
    kernel ``sigma^{-1/2} J sigma^{-1/2}`` is brought to 2x2 rotation blocks
    by a real Schur step; block orientation and ordering fix the transform
    uniquely up to degenerate ``nu`` values.
    """
    form = form or SymplecticForm()
    sigma = _validate_covariance(sigma)
    P = form.permutation_matrix()
    sigma_std = P @ sigma @ P.T
    J_std = form.standard_form()

    w, V = np.linalg.eigh(sigma_std)
    isqrt = V @ np.diag(w ** -0.5) @ V.T
    B = isqrt @ J_std @ isqrt
    T, O = sla.schur(B, output="real")

    # orient each 2x2 block positive and sort by descending nu = 1 / b
    bvals = []
    O = O.copy()
    for k in range(4):
        i = 2 * k
        b = T[i, i + 1]
        if b < 0:
            O[:, [i, i + 1]] = O[:, [i + 1, i]]
            b = -b
        bvals.append(b)
    order = np.argsort(bvals)  # ascending b = descending nu
    cols = []
    for k in order:
        cols.extend([2 * k, 2 * k + 1])
    O = O[:, cols]
    nu = 1.0 / np.asarray(bvals, dtype=float)[order]

    d_half = np.repeat(np.sqrt(nu), 2)
    S0 = (d_half[:, None] * O.T) @ isqrt  # block frame in, interleaved frame out

    Pi = np.zeros((8, 8))
    for k in range(4):
        Pi[2 * k, k] = 1.0
        Pi[2 * k + 1, 4 + k] = 1.0
    S_std = Pi.T @ S0
    S = P.T @ S_std @ P
    return WilliamsonResult(nu=nu, S=S, diagonal=S @ sigma @ S.T)


def symplectic_eigenvalues(sigma: np.ndarray, form: SymplecticForm = None, pair_tol: float = 1e-8) -> np.ndarray:
    """Symplectic spectrum straight from ``|eig(J sigma)|``, descending.

    Independent of :func:`williamson`: the moduli of the (purely imaginary)
    eigenvalues of ``J sigma`` come in four coincident pairs.  A pair whose
    members disagree beyond ``pair_tol`` (relative) raises
    :class:`DegeneracyError`, since matching has then broken down.
    """
    form = form or SymplecticForm()
    sigma = _validate_covariance(sigma)
    ev = np.linalg.eigvals(form.matrix() @ sigma)
    mags = np.sort(np.abs(ev))[::-1]
    nu = []
    for k in range(4):
        a, b = mags[2 * k], mags[2 * k + 1]
        if abs(a - b) > pair_tol * max(1.0, a):
            raise DegeneracyError(
                f"symplectic eigenvalue pairing failed: |{a}| vs |{b}| beyond tolerance {pair_tol}"
            )
        nu.append(0.5 * (a + b))
    return np.asarray(nu)


def vacuum_covariance(scales: UnitScales = None, alpha_hbar: float = 1.0) -> np.ndarray:
    """Ground-state covariance: ``alpha lambda^2 / 2`` per quadrature.

    Equals ``(hbar / 2) I`` in natural scales; in general the X block
    carries ``(hbar / 2)(lambda_x / lambda_p)`` and the P block its inverse,
    with determinant ``(hbar / 2) ** 8`` either way.
    """
    scales = scales or natural_scales()
    var_x = 0.5 * alpha_hbar * scales.lambda_x ** 2
    var_p = 0.5 * alpha_hbar * scales.lambda_p ** 2
    return np.diag([var_x] * 4 + [var_p] * 4)


def symplectic_from_quadratic(A: np.ndarray, form: SymplecticForm = None) -> np.ndarray:
    """Symplectic matrix generated by a quadratic Hamiltonian form.

    For the state ``exp(-(i / hbar) H)|psi>`` with
    ``H = (1 / 2) sum A_ab R_a R_b``, the Heisenberg action on the
    quadrature vector is ``R -> S R`` with ``S = expm(J A_sym)``; only the
    symmetric part of ``A`` matters.
    """
    form = form or SymplecticForm()
    A = np.asarray(A, dtype=float)
    if A.shape != (8, 8):
        raise DomainError(f"quadratic form must be 8x8, got {A.shape}")
    A_sym = 0.5 * (A + A.T)
    return sla.expm(form.matrix() @ A_sym)


def displacement_means(zeta: np.ndarray, scales: UnitScales = None, alpha_hbar: float = 1.0) -> np.ndarray:
    """Quadrature means produced by a ladder displacement with amplitudes zeta.

    The anti-Hermitian shift ``sum_mu zeta_mu Z_mu - conj(zeta_mu) Zbar_mu``
    moves the quadrature means to
    ``(sqrt(2) alpha lambda_x Re zeta, sqrt(2) alpha lambda_p Im zeta)``;
    the mode-0 role reversal and the metric signs cancel, so the formula is
    signature-free.
    """
    scales = scales or natural_scales()
    zeta = np.asarray(zeta, dtype=complex)
    if zeta.shape != (4,):
        raise DomainError(f"displacement must have four components, got {zeta.shape}")
    s2a = math.sqrt(2.0) * alpha_hbar
    return np.concatenate([
        s2a * scales.lambda_x * np.real(zeta),
        s2a * scales.lambda_p * np.imag(zeta),
    ])


def gaussian_covariance(A: np.ndarray, form: SymplecticForm = None, scales: UnitScales = None,
                        alpha_hbar: float = 1.0, zeta: np.ndarray = None):
    """Predicted symplectic matrix, covariance and means of a squeezed state.

    Returns ``(S, sigma, means)`` with ``S = expm(J A_sym)``,
    ``sigma = S sigma_vac S^T``, and ``means = S d`` where ``d`` are the
    displacement means of ``zeta`` (zero when ``zeta`` is omitted).  This is
    the closed-form prediction for a state displaced first and then acted on
    by the quadratic exponential.
    """
    form = form or SymplecticForm()
    S = symplectic_from_quadratic(A, form)
    sigma = S @ vacuum_covariance(scales, alpha_hbar) @ S.T
    if zeta is None:
        means = np.zeros(8)
    else:
        means = S @ displacement_means(zeta, scales, alpha_hbar)
    return S, 0.5 * (sigma + sigma.T), means


def reciprocity_matrix(scales: UnitScales = None) -> np.ndarray:
    """The order-four symplectic rotation exchanging position and momentum.

    Maps ``X^mu -> (lambda_x / lambda_p) P^mu`` and
    ``P^mu -> -(lambda_p / lambda_x) X^mu``; squares to ``-I`` and preserves
    both J and the ground-state covariance.
    """
    scales = scales or natural_scales()
    r = scales.lambda_x / scales.lambda_p
    M = np.zeros((8, 8))
    M[:4, 4:] = r * np.eye(4)
    M[4:, :4] = -np.eye(4) / r
    return M


def random_quadratic(rng: np.random.Generator, scale: float = 0.2, norm: float = None) -> np.ndarray:
    """Random real symmetric 8x8 form, optionally at an exact Frobenius norm."""
    A = rng.standard_normal((8, 8))
    A = 0.5 * (A + A.T)
    if norm is not None:
        return A * (norm / np.linalg.norm(A))
    return scale * A


def random_symplectic(rng: np.random.Generator, scale: float = 0.2, form: SymplecticForm = None) -> np.ndarray:
    """Random group element near the identity, via a random quadratic form."""
    return symplectic_from_quadratic(random_quadratic(rng, scale), form)


def random_covariance(rng: np.random.Generator, scale: float = 0.3, nu: np.ndarray = None,
                      form: SymplecticForm = None) -> np.ndarray:
    """Random admissible covariance ``S D S^T`` with prescribed or sampled nu.

    Sampled ``nu`` values sit in ``[hbar / 2, 3 hbar / 2]``, so the result
    is a valid (generally mixed) state covariance.
    """
    form = form or SymplecticForm()
    if nu is None:
        nu = 0.5 * form.hbar * (1.0 + 2.0 * rng.random(4))
    nu = np.asarray(nu, dtype=float)
    if nu.shape != (4,) or np.any(nu < 0.5 * form.hbar - 1e-12):
        raise DomainError(f"nu must be four values at or above hbar / 2, got {nu}")
    D = np.diag(np.concatenate([nu, nu]))
    S = random_symplectic(rng, scale, form)
    sigma = S @ D @ S.T
    return 0.5 * (sigma + sigma.T)


def sr_determinant_check(sigma: np.ndarray, form: SymplecticForm = None, tol: float = 1e-9) -> dict:
    """Determinant form of the multimode uncertainty inequality.

    ``det sigma >= (hbar / 2) ** 8``, with equality exactly on pure Gaussian
    states.  The bound side uses the closed-form commutation determinant.
    """
    form = form or SymplecticForm()
    sigma = _validate_covariance(sigma)
    det = float(np.linalg.det(sigma))
    bound = form.commutation_determinant()
    return {
        "det": det,
        "bound": bound,
        "margin": det - bound,
        "ok": bool(det >= bound - tol),
    }


def uncorrelated_product(sigma: np.ndarray, form: SymplecticForm = None, corr_tol: float = 1e-8) -> dict:
    """Mode-by-mode uncertainty product for a correlation-free covariance.

    Requires every off-diagonal entry to vanish (relative to the largest
    variance); otherwise the product of per-mode spreads is not a faithful
    bound and :class:`CorrelatedStateError` is raised.  For admissible
    states the product is at least ``(hbar / 2) ** 4``, saturated by the
    ground state.
    """
    from .errors import CorrelatedStateError

    form = form or SymplecticForm()
    sigma = _validate_covariance(sigma)
    diag = np.diag(sigma)
    off = sigma - np.diag(diag)
    worst = float(np.max(np.abs(off)))
    if worst > corr_tol * float(np.max(diag)):
        a, b = np.unravel_index(int(np.argmax(np.abs(off))), off.shape)
        raise CorrelatedStateError(
            f"covariance entry ({a}, {b}) carries a correlation of {worst:.3e}; "
            "the per-mode product bound only applies to uncorrelated states"
        )
    product = float(np.prod(np.sqrt(diag[:4] * diag[4:])))
    bound = (0.5 * form.hbar) ** 4
    return {"product": product, "bound": bound, "margin": product - bound, "ok": bool(product >= bound - 1e-9)}
