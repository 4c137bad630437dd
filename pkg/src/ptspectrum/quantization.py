"""Spectral function whose zeros in the complex energy plane are the
eigenvalues of H = -d^2/dx^2 + V(x), V = i x^2 (x <= 0), -i x^2 (x >= 0).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .complexfn import recip_gamma

__all__ = [
    "SpectralConstants",
    "CONSTANTS",
    "spectral_terms",
    "spectral_fn",
    "spectral_fn_deriv",
    "relative_residual",
]


@dataclass(frozen=True)
class SpectralConstants:
    phase_eighth: complex = cmath.exp(1j * math.pi / 8)
    phase_quarter: complex = cmath.exp(1j * math.pi / 4)
    conj_phase_quarter: complex = cmath.exp(1j * math.pi / 4).conjugate()


CONSTANTS = SpectralConstants()


def spectral_terms(E: complex) -> tuple[complex, complex]:
    """The two products whose sum is the spectral function.

    The second term at ``conj(E)`` is the conjugate of the first at ``E``; the
    arithmetic is arranged so this holds bit for bit.
    """
    E = complex(E)
    w = CONSTANTS.phase_quarter
    wc = CONSTANTS.conj_phase_quarter
    p8 = CONSTANTS.phase_eighth
    first = p8.conjugate() * recip_gamma((1 - w * E) / 4) * recip_gamma((3 - wc * E) / 4)
    second = p8 * recip_gamma((1 - wc * E) / 4) * recip_gamma((3 - w * E) / 4)
    return first, second


def spectral_fn(E: complex) -> complex:
    """F(E); entire, since only reciprocal Gamma factors appear."""
    first, second = spectral_terms(E)
    return first + second


def spectral_fn_deriv(E: complex, fn=spectral_fn) -> complex:
    """Central difference of ``fn`` with real step 1e-7 * max(1, |E|)."""
    E = complex(E)
    h = 1e-7 * max(1.0, abs(E))
    return (fn(E + h) - fn(E - h)) / (2 * h)


def relative_residual(E: complex) -> float:
    """|F(E)| scaled by the size of its two terms.

    F grows like exp(c|E|), so an absolute residual stops being meaningful in
    double precision beyond the first few eigenvalues; this ratio lies in
    [0, 1] and sits at rounding level at a root.
    """
    first, second = spectral_terms(E)
    scale = abs(first) + abs(second)
    if scale == 0:
        return 0.0
    return abs(first + second) / scale
