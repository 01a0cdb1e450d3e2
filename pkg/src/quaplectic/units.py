"""Reciprocity-invariant unit scales.

A maximal force constant ``b`` paired with the speed of light ``c`` and
``hbar`` fixes one scale per dimension: time, length, momentum, energy and
acceleration.  ``alpha_hbar`` rescales the quadrature normalisation so that
``hbar == alpha_hbar * lambda_x * lambda_p`` always holds; with
``alpha_hbar = 1`` the scales reduce to the familiar square-root
combinations of ``hbar``, ``b`` and ``c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class ConstantSet:
    """Fundamental inputs. All strictly positive."""

    b: float = 1.0
    c: float = 1.0
    hbar: float = 1.0
    alpha_hbar: float = 1.0
    alpha_g: float = 1.0

    def __post_init__(self):
        for name in ("b", "c", "hbar", "alpha_hbar", "alpha_g"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"constant {name} must be positive and finite, got {value}")


@dataclass(frozen=True)
class UnitScales:
    """Derived scales for time, length, momentum, energy, acceleration."""

    lambda_t: float
    lambda_x: float
    lambda_p: float
    lambda_e: float
    lambda_a: float

    def as_dict(self) -> dict:
        return {
            "lambda_t": self.lambda_t,
            "lambda_x": self.lambda_x,
            "lambda_p": self.lambda_p,
            "lambda_e": self.lambda_e,
            "lambda_a": self.lambda_a,
        }


def derive_scales(constants: ConstantSet) -> UnitScales:
    """Derive the five unit scales from ``(b, c, hbar, alpha_hbar)``.

    Parameters
    ----------
    constants : ConstantSet
        Fundamental constants; every entry must be positive.

    Returns
    -------
    UnitScales
        Scales satisfying ``lambda_x == c * lambda_t``,
        ``lambda_e == lambda_p * c`` and
        ``alpha_hbar * lambda_x * lambda_p == hbar`` exactly (up to float
        rounding).

    Notes
    -----
    Scaling ``b -> 4 b`` at fixed ``c`` and ``hbar`` halves ``lambda_x``
    and doubles ``lambda_p``: position and momentum granularity trade off
    against each other at fixed ``hbar``.
    """
    b, c, hbar, alpha = constants.b, constants.c, constants.hbar, constants.alpha_hbar
    lambda_t = math.sqrt(hbar / (alpha * b * c))
    lambda_x = c * lambda_t
    lambda_p = hbar / (alpha * lambda_x)
    lambda_e = lambda_p * c
    lambda_a = c / lambda_t
    return UnitScales(lambda_t, lambda_x, lambda_p, lambda_e, lambda_a)


def natural_scales() -> UnitScales:
    """Scales in natural units ``b = c = hbar = alpha_hbar = 1`` (all 1)."""
    return derive_scales(ConstantSet())


def hbar_of(scales: UnitScales, alpha_hbar: float) -> float:
    """Planck constant implied by the quadrature scales."""
    return alpha_hbar * scales.lambda_x * scales.lambda_p


def newton_constant(constants: ConstantSet) -> float:
    """Newton constant implied by the force scale: ``alpha_g * c**4 / b``."""
    return constants.alpha_g * constants.c**4 / constants.b
