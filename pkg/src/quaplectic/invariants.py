"""Invariance checks for the covariance determinant and the algebra singlets.

The sweeps in this module exercise the package's central claim: the
determinant of the 8x8 quadrature covariance is unchanged by every
transformation generated by the oscillator algebra, splitting into

- ``u31``: exponentials of anti-Hermitian combinations of the bilinear
  generators E;
- ``weyl_heisenberg``: ladder displacements, which leave the whole
  covariance entry-wise fixed, not just its determinant;
- ``sp8``: exponentials of general quadrature quadratics, the full
  symplectic envelope of the previous two;
- ``reciprocity``: the order-four phase-space rotation exchanging scaled
  position and momentum, applied at the matrix level.

Every sample is deterministic from ``(seed, index)``, leakage past the
truncation gate is counted and excluded rather than silently measured, and
each report carries the leakage statistics next to the deviations so a
truncation artifact can never masquerade as a broken invariance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import algebra, gaussian, states
from .errors import DomainError, TruncationOverflowError
from .fock import GeneratorImages, InteriorProjector
from .states import CovarianceData, StateVector
from .units import natural_scales

__all__ = [
    "SweepConfig",
    "InvariantReport",
    "invariance_sweep",
    "reciprocity_map",
    "singlet_matrices",
    "general_invariants",
    "singlet_sweep",
    "born_green_spectrum",
]

_GROUPS = ("u31", "weyl_heisenberg", "sp8", "reciprocity")


@dataclass
class SweepConfig:
    """Parameters of a determinant-invariance sweep.

    ``parameter_scale`` is the norm given to each sampled transformation
    parameter (Frobenius norm for matrices, Euclidean for displacement
    vectors); it is capped at 0.5 because stronger transformations push
    states into the truncation boundary at the cutoffs this package targets.
    """

    group: str
    samples: int = 100
    seed: int = 0
    parameter_scale: float = 0.2
    cutoff: int = 8
    tolerance: float = 1e-7

    def __post_init__(self):
        if self.group not in _GROUPS:
            raise DomainError(f"unknown group {self.group!r}, expected one of {_GROUPS}")
        if self.samples < 1:
            raise DomainError("samples must be at least 1")
        if not 0 < self.parameter_scale <= 0.5:
            raise DomainError("parameter_scale must lie in (0, 0.5] to control truncation leakage")
        if self.tolerance <= 0:
            raise DomainError("tolerance must be positive")


@dataclass
class InvariantReport:
    """Outcome of a determinant-invariance sweep.

    ``max_rel_deviation`` compares each sample's det Sigma against the
    untransformed state's; ``sigma_max_dev`` tracks the worst entry-wise
    change of Sigma itself (expected to vanish only for the
    weyl_heisenberg and reciprocity groups).  Samples rejected by the
    truncation gate are counted in ``excluded`` and do not contribute.
    """

    group: str
    base_det: float
    sample_dets: np.ndarray
    max_rel_deviation: float
    sigma_max_dev: float
    leakage_max: float
    excluded: int
    samples_used: int
    tolerance: float
    passed: bool


def _u31_exponent(images: GeneratorImages, rng: np.random.Generator, scale: float):
    """Anti-Hermitian combination of the bilinear generators at a given norm.

    A complex coefficient matrix is projected onto the anti-Hermitian
    subalgebra via ``c -> (c_mn - eta_m eta_n conj(c_nm)) / 2`` and rescaled
    to Frobenius norm ``scale`` before contraction with the generator
    images.
    """
    c = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    proj = np.empty((4, 4), dtype=complex)
    for m in range(4):
        for n in range(4):
            proj[m, n] = 0.5 * (c[m, n] - algebra.eta(m) * algebra.eta(n) * np.conj(c[n, m]))
    nrm = np.linalg.norm(proj)
    if nrm == 0.0:
        raise DomainError("degenerate coefficient draw")
    proj *= scale / nrm
    total = None
    for m in range(4):
        for n in range(4):
            term = images.image(algebra.E(m, n)) * proj[m, n]
            total = term if total is None else total + term
    return total


def _sample_exponent(images: GeneratorImages, group: str, rng: np.random.Generator, scale: float):
    if group == "u31":
        return _u31_exponent(images, rng, scale)
    if group == "weyl_heisenberg":
        w = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        w *= scale / np.linalg.norm(w)
        return states.displacement_generator(images, w)
    A = gaussian.random_quadratic(rng, norm=scale)
    return states.quadratic_generator(images, A)


def invariance_sweep(images: GeneratorImages, state: StateVector, cfg: SweepConfig) -> InvariantReport:
    """Measure det Sigma across random group transformations of a state.

    Each sample draws an anti-Hermitian exponent from the configured group
    (deterministically from ``(cfg.seed, index)``), transforms the state,
    remeasures the covariance and compares determinants.  The reciprocity
    group instead conjugates the measured covariance by the phase-space
    rotation, cycling through its four powers and requiring the fourth to
    return every entry exactly.
    """
    if images.space.cutoff != cfg.cutoff:
        raise DomainError(
            f"images are built at cutoff {images.space.cutoff} but the config says {cfg.cutoff}"
        )
    base = states.covariance_matrix(images, state)
    base_det = float(np.linalg.det(base.sigma))
    dets = []
    sigma_dev = 0.0
    leak_max = state.boundary_weight(2)
    excluded = 0

    if cfg.group == "reciprocity":
        M = gaussian.reciprocity_matrix(images.scales)
        sigma_k, means_k = base.sigma, base.means
        for k in range(cfg.samples):
            sigma_k = M @ sigma_k @ M.T
            means_k = M @ means_k
            dets.append(float(np.linalg.det(sigma_k)))
            if (k + 1) % 4 == 0:
                sigma_dev = max(sigma_dev,
                                float(np.max(np.abs(sigma_k - base.sigma))),
                                float(np.max(np.abs(means_k - base.means))))
    else:
        for k in range(cfg.samples):
            rng = np.random.default_rng([cfg.seed, k])
            exponent = _sample_exponent(images, cfg.group, rng, cfg.parameter_scale)
            try:
                moved = states.evolve(state, exponent)
            except TruncationOverflowError:
                excluded += 1
                continue
            leak_max = max(leak_max, moved.boundary_weight(2))
            cov = states.covariance_matrix(images, moved)
            dets.append(float(np.linalg.det(cov.sigma)))
            sigma_dev = max(sigma_dev, float(np.max(np.abs(cov.sigma - base.sigma))))

    dets = np.array(dets)
    rel = float(np.max(np.abs(dets - base_det))) / abs(base_det) if dets.size else math.inf
    return InvariantReport(
        group=cfg.group,
        base_det=base_det,
        sample_dets=dets,
        max_rel_deviation=rel,
        sigma_max_dev=sigma_dev,
        leakage_max=leak_max,
        excluded=excluded,
        samples_used=int(dets.size),
        tolerance=cfg.tolerance,
        passed=bool(dets.size and rel < cfg.tolerance),
    )


def reciprocity_map(cov: CovarianceData, scales=None) -> CovarianceData:
    """Exchange scaled position and momentum in measured covariance data.

    Conjugates the covariance and rotates the means by the order-four map
    ``X / lx -> P / lp, P / lp -> -X / lx``.  The commutation block is
    conjugated as well, which leaves its canonical value fixed because the
    map is symplectic.  Applying the map four times returns the data
    exactly; two applications negate the means while fixing the covariance.
    """
    scales = scales or natural_scales()
    M = gaussian.reciprocity_matrix(scales)
    means = M @ cov.means
    return CovarianceData(
        mean_x=means[:4],
        mean_p=means[4:],
        sigma=M @ cov.sigma @ M.T,
        C=M @ cov.C @ M.T,
        hbar=cov.hbar,
    )


_SINGLET_NAMES = (
    "trE", "trE2", "(trE)2", "trZZbar",
    "trE3", "trE*trE2", "(trE)3", "trE*trZZbar", "trEZZbar",
)


def _weyl2(a, b):
    return (a @ b + b @ a) * 0.5


def _weyl3(a, b, c):
    return (a @ b @ c + a @ c @ b + b @ a @ c + b @ c @ a + c @ a @ b + c @ b @ a) / 6.0


def singlet_matrices(images: GeneratorImages) -> dict:
    """Matrices of the nine trace singlets at degrees one to three.

    Every monomial is Weyl ordered (averaged over the orderings of its
    elementary generator factors), which fixes the operator-ordering
    ambiguity of the classical trace expressions.  Index contractions carry
    one metric factor per ladder pair, chosen so that each singlet commutes
    with the full set of bilinear generators; all nine matrices are
    Hermitian.

    Keys follow the trace expressions: ``trE``, ``trE2``, ``(trE)2``,
    ``trZZbar``, ``trE3``, ``trE*trE2``, ``(trE)3``, ``trE*trZZbar``,
    ``trEZZbar``.
    """
    E = [[images.image(algebra.E(m, n)).matrix.tocsr() for n in range(4)] for m in range(4)]
    Zs = [images.image(algebra.Z(m)).matrix.tocsr() for m in range(4)]
    Zb = [images.image(algebra.Zbar(m)).matrix.tocsr() for m in range(4)]

    trE = E[0][0] + E[1][1] + E[2][2] + E[3][3]

    trE2 = None
    for m in range(4):
        for n in range(4):
            term = _weyl2(E[m][n], E[n][m])
            trE2 = term if trE2 is None else trE2 + term

    trZZbar = None
    for m in range(4):
        term = _weyl2(Zs[m], Zb[m]) * algebra.eta(m)
        trZZbar = term if trZZbar is None else trZZbar + term

    trE3 = None
    for m in range(4):
        for n in range(4):
            for r in range(4):
                term = _weyl3(E[m][n], E[n][r], E[r][m])
                trE3 = term if trE3 is None else trE3 + term

    trE_trE2 = None
    for n in range(4):
        for r in range(4):
            term = _weyl3(trE, E[n][r], E[r][n])
            trE_trE2 = term if trE_trE2 is None else trE_trE2 + term

    trE_trZZbar = None
    for m in range(4):
        term = _weyl3(trE, Zs[m], Zb[m]) * algebra.eta(m)
        trE_trZZbar = term if trE_trZZbar is None else trE_trZZbar + term

    trEZZbar = None
    for m in range(4):
        for n in range(4):
            term = _weyl3(E[m][n], Zs[m], Zb[n]) * algebra.eta(n)
            trEZZbar = term if trEZZbar is None else trEZZbar + term

    return {
        "trE": trE,
        "trE2": trE2,
        "(trE)2": trE @ trE,
        "trZZbar": trZZbar,
        "trE3": trE3,
        "trE*trE2": trE_trE2,
        "(trE)3": trE @ trE @ trE,
        "trE*trZZbar": trE_trZZbar,
        "trEZZbar": trEZZbar,
    }


def general_invariants(images: GeneratorImages, state: StateVector,
                       matrices: dict = None, leakage_tol: float = 1e-6) -> dict:
    """Expectation values of the nine trace singlets in a given state.

    The singlets reach degree three in the bilinears, climbing any single
    mode by at most three levels, so the state must be supported three
    levels below the cutoff for the expectations to be truncation-exact.

    Raises
    ------
    DomainError
        If the cutoff is below 5, leaving no room for a margin-3 interior.
    TruncationOverflowError
        If the state leaks past the margin-3 shell.
    """
    if images.space.cutoff < 5:
        raise DomainError(
            "general invariants need margin 3 below the cutoff; "
            "use cutoff 5 or larger"
        )
    leak = state.boundary_weight(3)
    if leak > leakage_tol:
        raise TruncationOverflowError(
            f"state has boundary-shell weight {leak:.3e} at margin 3; "
            "singlet expectations would be unreliable, use a larger cutoff"
        )
    if matrices is None:
        matrices = singlet_matrices(images)
    psi = state.amplitudes
    return {name: complex(np.vdot(psi, mat @ psi)).real for name, mat in matrices.items()}


def singlet_sweep(images: GeneratorImages, state: StateVector, samples: int = 20,
                  seed: int = 0, parameter_scale: float = 0.1, tolerance: float = 1e-7) -> dict:
    """Stability of the nine singlets under bilinear and displacement sweeps.

    Returns the per-singlet maximum absolute shift under random ``u31``
    exponentials (all nine must be stable) and under random displacements,
    together with the empirically displacement-invariant subset.  Which
    singlets survive displacement is determined by measurement here, not
    asserted in advance.
    """
    matrices = singlet_matrices(images)
    base = general_invariants(images, state, matrices)
    shifts = {g: {name: 0.0 for name in _SINGLET_NAMES} for g in ("u31", "weyl_heisenberg")}
    excluded = 0
    for group in ("u31", "weyl_heisenberg"):
        for k in range(samples):
            rng = np.random.default_rng([seed, k])
            exponent = _sample_exponent(images, group, rng, parameter_scale)
            try:
                moved = states.evolve(state, exponent, margin=3)
            except TruncationOverflowError:
                excluded += 1
                continue
            values = general_invariants(images, moved, matrices)
            for name in _SINGLET_NAMES:
                shifts[group][name] = max(shifts[group][name], abs(values[name] - base[name]))
    normalize = {name: 1.0 + abs(base[name]) for name in _SINGLET_NAMES}
    invariant_u31 = [n for n in _SINGLET_NAMES if shifts["u31"][n] < tolerance * normalize[n]]
    invariant_wh = [n for n in _SINGLET_NAMES if shifts["weyl_heisenberg"][n] < tolerance * normalize[n]]
    return {
        "base": base,
        "max_shift": shifts,
        "u31_invariant": invariant_u31,
        "displacement_invariant": invariant_wh,
        "excluded": excluded,
        "samples": samples,
        "tolerance": tolerance,
    }


def born_green_spectrum(images: GeneratorImages, margin: int = 2) -> dict:
    """Spectrum of the Lorentz-contracted oscillator quadratic form.

    Assembles ``B = X^mu X_mu / lx^2 + P^mu P_mu / lp^2`` (metric applied,
    so spatial modes enter negatively), restricts it to the interior box and
    reads off its spectrum.  B is diagonal in the occupation basis with
    eigenvalues affine in the occupations,

        ``s = 2 alpha (n0 - n1 - n2 - n3 - 1)``,

    equally spaced by ``2 alpha`` and unbounded in both directions within
    the truncation.  The degeneracy of each eigenvalue is cross-checked
    against an independent combinatorial count (polynomial expansion of the
    occupation-difference generating function).
    """
    space = images.space
    proj = InteriorProjector(space, margin)
    lx, lp = images.scales.lambda_x, images.scales.lambda_p
    B = None
    for mu in range(4):
        x, p = images.x_op(mu), images.p_op(mu)
        term = (x @ x) * (algebra.eta(mu) / lx ** 2) + (p @ p) * (algebra.eta(mu) / lp ** 2)
        B = term if B is None else B + term
    block = proj.restrict(B.matrix).toarray()
    diagonal = np.real(np.diag(block))
    off = block - np.diag(np.diag(block))
    diagonality = float(np.max(np.abs(off)))

    occs = space.occupations[:, proj.indices]
    two_alpha = 2.0 * images.alpha
    predicted = two_alpha * (occs[0] - occs[1] - occs[2] - occs[3] - 1)
    affine_max_err = float(np.max(np.abs(diagonal - predicted)))

    levels = space.cutoff - margin + 1
    diffs = occs[0] - occs[1] - occs[2] - occs[3]
    values, counts = np.unique(diffs, return_counts=True)

    # Independent count: coefficients of (1 + x + ... + x^(levels-1))^3 give the
    # number of spatial triples at each total; fold against the time mode.
    poly = np.ones(levels)
    c3 = np.convolve(np.convolve(poly, poly), poly)
    combinatorial = {}
    for d in range(-(3 * (levels - 1)), levels):
        total = 0
        for n0 in range(levels):
            s = n0 - d
            if 0 <= s < c3.size:
                total += int(round(c3[s]))
        if total:
            combinatorial[d] = total
    measured = {int(v): int(c) for v, c in zip(values, counts)}
    degeneracy_match = measured == combinatorial

    order = np.argsort(values)
    eigenvalues = two_alpha * (values[order] - 1.0)
    multiplicities = counts[order]
    spacing = np.diff(eigenvalues)
    spacing_max_err = float(np.max(np.abs(spacing - two_alpha))) if spacing.size else 0.0

    return {
        "eigenvalues": eigenvalues,
        "multiplicities": multiplicities.astype(int),
        "diagonality": diagonality,
        "affine_max_err": affine_max_err,
        "spacing": two_alpha,
        "spacing_max_err": spacing_max_err,
        "degeneracy_match": bool(degeneracy_match),
        "interior_dim": proj.dim,
        "margin": margin,
    }
