"""Truncated four-mode oscillator realization of the quaplectic generators.

The time mode carries the ladder assignment ``Z_0 -> sqrt(alpha) a0+`` and
``Zbar_0 -> sqrt(alpha) a0``, the three space modes the opposite one, so the
vacuum is annihilated by all four ``Zbar``.  Every quadratic generator image
is built from one shared set of packed ladder matrices through the
symmetrised bilinears ``{Z_K, Z_L} / 2 alpha``; the homogeneous images are
eta-twists of the mixed bilinears.  That single construction path makes the
spin part of the homogeneous block vanish identically.

Truncation policy: a matrix identity between degree ``d`` operators is exact
on basis states whose occupations all stay ``d`` below the cutoff, so checks
restrict to interior columns with ``margin = 2`` for the quadratic sector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from . import algebra
from ._exact import CF
from .errors import DomainError
from .units import UnitScales, natural_scales

__all__ = [
    "FockSpace",
    "FockOperator",
    "InteriorProjector",
    "build_mode_ops",
    "GeneratorImages",
    "build_generators",
    "vacuum",
    "basis_state",
    "max_abs",
    "verify_rep",
    "casimir_matrices",
    "casimir_report",
    "anticommutator",
    "commutator_matrix",
]


class FockSpace:
    """Four bosonic modes truncated at a common occupation cutoff.

    Basis states are occupation tuples ``(n0, n1, n2, n3)`` with each entry
    in ``0..cutoff``, flattened row-major with the last mode fastest.
    """

    N_MODES = 4

    def __init__(self, cutoff: int):
        if not isinstance(cutoff, (int, np.integer)) or cutoff < 2:
            raise DomainError(f"cutoff must be an integer >= 2, got {cutoff!r}")
        self.cutoff = int(cutoff)
        self.levels = self.cutoff + 1
        self.dim = self.levels ** self.N_MODES
        self.strides = tuple(self.levels ** (self.N_MODES - 1 - m) for m in range(self.N_MODES))
        # occupation of each mode for every flattened index
        idx = np.arange(self.dim)
        self.occupations = np.stack(
            [(idx // self.strides[m]) % self.levels for m in range(self.N_MODES)], axis=0
        )

    def index(self, occs) -> int:
        if len(occs) != self.N_MODES:
            raise DomainError(f"need {self.N_MODES} occupation numbers, got {len(occs)}")
        flat = 0
        for n, stride in zip(occs, self.strides):
            if not 0 <= n <= self.cutoff:
                raise DomainError(f"occupation {n} outside 0..{self.cutoff}")
            flat += int(n) * stride
        return flat

    def occupation_of(self, index: int):
        return tuple(int(self.occupations[m, index]) for m in range(self.N_MODES))

    def __repr__(self):
        return f"FockSpace(cutoff={self.cutoff}, dim={self.dim})"


@dataclass
class FockOperator:
    """Sparse operator tagged with its polynomial degree in the ladder ops.

    The degree tracks how far the operator can move an occupation number,
    which is what decides the interior margin a check needs.
    """

    matrix: sp.csr_matrix
    degree: int
    space: FockSpace

    def dag(self) -> "FockOperator":
        return FockOperator(self.matrix.conj().T.tocsr(), self.degree, self.space)

    def __add__(self, other: "FockOperator") -> "FockOperator":
        return FockOperator((self.matrix + other.matrix).tocsr(), max(self.degree, other.degree), self.space)

    def __sub__(self, other: "FockOperator") -> "FockOperator":
        return FockOperator((self.matrix - other.matrix).tocsr(), max(self.degree, other.degree), self.space)

    def __neg__(self) -> "FockOperator":
        return FockOperator(-self.matrix, self.degree, self.space)

    def __mul__(self, scalar) -> "FockOperator":
        return FockOperator(self.matrix * complex(scalar), self.degree, self.space)

    __rmul__ = __mul__

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        return FockOperator((self.matrix @ other.matrix).tocsr(), self.degree + other.degree, self.space)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.matrix @ vec


def max_abs(matrix) -> float:
    """Largest entry magnitude of a sparse matrix (0 for an empty one)."""
    m = sp.csr_matrix(matrix)
    if m.nnz == 0:
        return 0.0
    return float(np.max(np.abs(m.data)))


def anticommutator(a: FockOperator, b: FockOperator) -> FockOperator:
    return a @ b + b @ a


def commutator_matrix(a: FockOperator, b: FockOperator) -> FockOperator:
    return a @ b - b @ a


@dataclass
class InteriorProjector:
    """Selects basis states at least ``margin`` below the cutoff in every mode."""

    space: FockSpace
    margin: int
    indices: np.ndarray = field(init=False)
    mask: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.margin < 0 or self.margin > self.space.cutoff:
            raise DomainError(f"margin {self.margin} incompatible with cutoff {self.space.cutoff}")
        occ = self.space.occupations
        self.mask = np.all(occ <= self.space.cutoff - self.margin, axis=0)
        self.indices = np.nonzero(self.mask)[0]

    @property
    def dim(self) -> int:
        return int(self.indices.size)

    def restrict_columns(self, matrix) -> sp.csr_matrix:
        return sp.csr_matrix(matrix)[:, self.indices]

    def restrict(self, matrix) -> sp.csr_matrix:
        return sp.csr_matrix(matrix)[self.indices][:, self.indices]

    def boundary_weight(self, vec: np.ndarray) -> float:
        """Probability weight a state carries outside the interior."""
        v = np.asarray(vec)
        return float(np.sum(np.abs(v[~self.mask]) ** 2))


def build_mode_ops(space: FockSpace) -> list:
    """Truncated annihilation matrices, one per mode."""
    ops = []
    idx = np.arange(space.dim)
    for m in range(space.N_MODES):
        n = space.occupations[m]
        src = idx[n > 0]
        dst = src - space.strides[m]
        data = np.sqrt(n[n > 0].astype(float))
        mat = sp.csr_matrix((data, (dst, src)), shape=(space.dim, space.dim), dtype=complex)
        ops.append(FockOperator(mat, 1, space))
    return ops


class GeneratorImages:
    """All generator images on one truncated space, from one ladder assignment.

    Parameters
    ----------
    space : FockSpace
    scales : UnitScales, optional
        Quadrature scale factors; defaults to the natural set.
    alpha_hbar : int or Fraction, optional
        Exact central normalisation.  The float image uses ``sqrt(alpha)``
        ladder scaling; the exact value feeds the abstract brackets that the
        fidelity checks compare against.
    hbar : float, optional
        If given, must equal ``alpha_hbar * lambda_x * lambda_p``.
    """

    def __init__(self, space: FockSpace, scales: UnitScales = None, alpha_hbar=1, hbar: float = None):
        self.space = space
        self.scales = scales if scales is not None else natural_scales()
        self.alpha_exact = Fraction(alpha_hbar) if not isinstance(alpha_hbar, float) else None
        if self.alpha_exact is None:
            raise TypeError("alpha_hbar must be exact (int or Fraction): the float image is derived from it")
        if self.alpha_exact <= 0:
            raise DomainError(f"alpha_hbar must be positive, got {self.alpha_exact}")
        self.alpha = float(self.alpha_exact)
        expected_hbar = self.alpha * self.scales.lambda_x * self.scales.lambda_p
        if hbar is not None and not math.isclose(hbar, expected_hbar, rel_tol=1e-12):
            raise DomainError(
                f"hbar {hbar} inconsistent with alpha * lambda_x * lambda_p = {expected_hbar}"
            )
        self.hbar = expected_hbar

        modes = build_mode_ops(space)
        sqrt_a = math.sqrt(self.alpha)
        # packed ladder images: time mode raises, space modes lower
        self._zk = [None] * 8
        self._zk[0] = modes[0].dag() * sqrt_a
        self._zk[4] = modes[0] * sqrt_a
        for i in (1, 2, 3):
            self._zk[i] = modes[i] * sqrt_a
            self._zk[i + 4] = modes[i].dag() * sqrt_a
        self._zkl = {}
        self._images = {}

    def _zkl_image(self, K: int, L: int) -> FockOperator:
        if K > L:
            K, L = L, K
        op = self._zkl.get((K, L))
        if op is None:
            op = anticommutator(self._zk[K], self._zk[L]) * (1.0 / (2.0 * self.alpha))
            self._zkl[(K, L)] = op
        return op

    def image(self, label: algebra.GeneratorLabel) -> FockOperator:
        """Image matrix of one basis label."""
        op = self._images.get(label)
        if op is not None:
            return op
        k = label.kind
        if k == "I":
            op = FockOperator(sp.identity(self.space.dim, dtype=complex, format="csr"), 0, self.space)
        elif k == "Z":
            op = self._zk[label.mu]
        elif k == "Zbar":
            op = self._zk[label.mu + 4]
        elif k == "ZK":
            op = self._zk[label.mu]
        elif k == "ZKL":
            op = self._zkl_image(label.mu, label.nu)
        elif k == "E":
            # E^m_n = eta(m) {Zbar_m, Z_n} / 2 alpha, i.e. an eta-twist of
            # the mixed packed bilinear
            op = self._zkl_image(label.nu, label.mu + 4) * float(algebra.eta(label.mu))
        elif k == "e":
            zero = sp.csr_matrix((self.space.dim, self.space.dim), dtype=complex)
            op = FockOperator(zero, 2, self.space)
        else:
            raise DomainError(f"no image defined for label {label!r}")
        self._images[label] = op
        return op

    def image_of_element(self, elem: algebra.AlgebraElement) -> FockOperator:
        """Image of an exact element, as a complex linear combination."""
        total = None
        for label, c in elem.terms.items():
            term = self.image(label) * complex(c)
            total = term if total is None else total + term
        if total is None:
            zero = sp.csr_matrix((self.space.dim, self.space.dim), dtype=complex)
            return FockOperator(zero, 0, self.space)
        return total

    def x_op(self, mu: int) -> FockOperator:
        """Position quadrature ``X^mu`` (upper index)."""
        s = algebra.eta(mu) * self.scales.lambda_x / math.sqrt(2.0)
        return (self._zk[mu] + self._zk[mu + 4]) * s

    def p_op(self, mu: int) -> FockOperator:
        """Momentum quadrature ``P^mu`` (upper index)."""
        s = algebra.eta(mu) * self.scales.lambda_p / math.sqrt(2.0)
        return (self._zk[mu] - self._zk[mu + 4]) * (1j * s)

    def quadratures(self) -> list:
        """The vector ``(X^0..X^3, P^0..P^3)`` of quadrature images."""
        return [self.x_op(mu) for mu in range(4)] + [self.p_op(mu) for mu in range(4)]

    def number_image(self) -> FockOperator:
        """Image of the homogeneous trace ``sum_mu E^mu_mu``."""
        return self.image_of_element(algebra.number_element())


def build_generators(space: FockSpace, scales: UnitScales = None, alpha_hbar=1, hbar: float = None) -> GeneratorImages:
    """Construct all generator images on a truncated space."""
    return GeneratorImages(space, scales, alpha_hbar, hbar)


def vacuum(space: FockSpace) -> np.ndarray:
    """The all-modes-empty basis vector."""
    vec = np.zeros(space.dim, dtype=complex)
    vec[0] = 1.0
    return vec


def basis_state(space: FockSpace, occs) -> np.ndarray:
    """Basis vector with the given occupation tuple."""
    vec = np.zeros(space.dim, dtype=complex)
    vec[space.index(occs)] = 1.0
    return vec


def verify_rep(images: GeneratorImages, margin: int = 2, include_sp8: bool = True, sp8_margin: int = 4) -> dict:
    """Check that the images reproduce every structure constant.

    For all ordered pairs of basis labels, the matrix commutator of the
    images is compared against the image of the exact bracket, restricted to
    interior columns.  The hermiticity pairing of the images is checked on
    the full space, where it holds exactly.

    Margins follow how far a product can climb one mode: every quaplectic
    generator moves a single mode by at most one level, so commutators are
    exact at ``margin = 2``; the packed bilinears can move one mode by two
    levels each, which needs ``sp8_margin = 4``.

    Returns
    -------
    dict
        Maximal residuals and the worst offending pair per family.
    """
    proj = InteriorProjector(images.space, margin)
    alpha = images.alpha_exact

    def scan(basis, projector):
        worst = 0.0
        worst_pair = None
        ops = {lab: images.image(lab) for lab in basis}
        for la in basis:
            for lb in basis:
                expected = images.image_of_element(
                    algebra.commutator(algebra.element(la), algebra.element(lb), alpha)
                )
                resid = commutator_matrix(ops[la], ops[lb]) - expected
                r = max_abs(projector.restrict_columns(resid.matrix))
                if r > worst:
                    worst, worst_pair = r, (la, lb)
        return worst, worst_pair

    q_basis = algebra.quaplectic_basis()
    q_worst, q_pair = scan(q_basis, proj)

    herm_worst = 0.0
    for la in q_basis + (algebra.sp8_basis() if include_sp8 else []):
        img = images.image(la)
        expected = images.image_of_element(algebra.conjugate(algebra.element(la)))
        herm_worst = max(herm_worst, max_abs(img.dag().matrix - expected.matrix))

    report = {
        "cutoff": images.space.cutoff,
        "margin": margin,
        "interior_dim": proj.dim,
        "quaplectic_pairs": len(q_basis) ** 2,
        "max_residual": q_worst,
        "worst_pair": q_pair,
        "hermiticity_max": herm_worst,
    }
    if include_sp8:
        s_basis = algebra.sp8_basis()
        s_worst, s_pair = scan(s_basis, InteriorProjector(images.space, sp8_margin))
        report["sp8_margin"] = sp8_margin
        report["sp8_pairs"] = len(s_basis) ** 2
        report["sp8_max_residual"] = s_worst
        report["sp8_worst_pair"] = s_pair
    return report


def casimir_matrices(images: GeneratorImages, margin: int = 2) -> dict:
    """Casimir operators of the spin part, plus the affine trace identity.

    Builds the spin part ``e^m_n = E^m_n - eta(m) {Zbar_m, Z_n} / 2 alpha``
    from freshly assembled anticommutators (it cancels exactly in this
    realization), forms the three trace invariants ``C_n = tr(e^(n))`` as
    operators, and evaluates the affine identity relating the Lorentz
    quadratic form to the homogeneous trace: the difference
    ``(X X / lx^2 + P P / lp^2) / 2 - alpha N`` restricted to the interior
    is a constant ``kappa``, fitted rather than assumed.  The fit comes out
    zero here; a commonly quoted reference value ``4 alpha**2`` is reported
    alongside for comparison, never silently substituted.

    Returns a dict with FockOperators ``C1``, ``C2``, ``C3``, the interior
    residual matrix ``affine_difference`` (identity minus fitted constant),
    and scalars ``spin_part_max``, ``kappa_fitted``, ``kappa_reference``,
    ``kappa_residual``, ``interior_dim``.
    """
    space = images.space
    proj = InteriorProjector(space, margin)
    inv_2a = 1.0 / (2.0 * images.alpha)

    e_ops = {}
    spin_max = 0.0
    for m in range(4):
        for n in range(4):
            fresh = anticommutator(images.image(algebra.Zbar(m)), images.image(algebra.Z(n)))
            e_mn = images.image(algebra.E(m, n)) - fresh * (algebra.eta(m) * inv_2a)
            e_ops[(m, n)] = e_mn
            spin_max = max(spin_max, max_abs(e_mn.matrix))

    c1 = c2 = c3 = None
    for m in range(4):
        c1 = e_ops[(m, m)] if c1 is None else c1 + e_ops[(m, m)]
        for n in range(4):
            term = e_ops[(m, n)] @ e_ops[(n, m)]
            c2 = term if c2 is None else c2 + term
            for r in range(4):
                term = e_ops[(m, n)] @ e_ops[(n, r)] @ e_ops[(r, m)]
                c3 = term if c3 is None else c3 + term

    lx, lp = images.scales.lambda_x, images.scales.lambda_p
    quad = None
    for mu in range(4):
        x, p = images.x_op(mu), images.p_op(mu)
        term = (x @ x) * (algebra.eta(mu) / lx ** 2) + (p @ p) * (algebra.eta(mu) / lp ** 2)
        quad = term if quad is None else quad + term
    affine = quad * 0.5 - images.number_image() * images.alpha
    block = proj.restrict(affine.matrix).toarray()
    kappa_fitted = float(np.mean(np.real(np.diag(block))))
    residual_block = block - kappa_fitted * np.eye(proj.dim)

    return {
        "C1": c1,
        "C2": c2,
        "C3": c3,
        "affine_difference": residual_block,
        "spin_part_max": spin_max,
        "kappa_fitted": kappa_fitted,
        "kappa_reference": 4.0 * images.alpha ** 2,
        "kappa_residual": float(np.max(np.abs(residual_block))),
        "interior_dim": proj.dim,
        "margin": margin,
    }


def casimir_report(images: GeneratorImages, margin: int = 2) -> dict:
    """Scalar summary of :func:`casimir_matrices`: norms and the kappa fit.

    ``casimir_norms`` holds the interior-restricted max norms of the three
    trace invariants, all of which vanish because the spin part cancels
    exactly in this realization.
    """
    data = casimir_matrices(images, margin)
    proj = InteriorProjector(images.space, margin)
    norms = {f"C{p}": max_abs(proj.restrict_columns(data[f"C{p}"].matrix)) for p in (1, 2, 3)}
    return {
        "spin_part_max": data["spin_part_max"],
        "casimir_norms": norms,
        "kappa_fitted": data["kappa_fitted"],
        "kappa_reference": data["kappa_reference"],
        "kappa_residual": data["kappa_residual"],
        "interior_dim": data["interior_dim"],
    }
