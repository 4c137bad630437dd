"""Complex special functions: log Gamma, 1/Gamma, Kummer 1F1 and the
asymptotic 2F0 series.

Everything here is scalar and built on :mod:`cmath`, so the functions are
pure and safe to call from any thread.
"""

from __future__ import annotations

import cmath
import math

from .errors import BParameterPole, NonConvergence, PoleError

__all__ = [
    "POLE_TOL",
    "log_gamma",
    "recip_gamma",
    "kummer_1f1",
    "asymptotic_2f0",
    "asymptotic_2f0_with_error",
]

POLE_TOL = 1e-12

# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_P = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)

_SERIES_RTOL = 1e-16
_SERIES_CAP = 500
# Above this ratio of largest term to |sum| the double-precision 1F1 sum has
# lost too many digits and is redone in fixed point.
_CANCELLATION_LIMIT = 64.0
_FIXED_BITS = 320


def _near_nonpositive_integer(z: complex) -> bool:
    if z.real > 0.5:
        return False
    n = round(z.real)
    return n <= 0 and abs(z - n) <= POLE_TOL


def _sinpi(z: complex) -> complex:
    # reduce the real part first so sin(pi z) keeps relative accuracy near integers
    n = round(z.real)
    s = cmath.sin(math.pi * complex(z.real - n, z.imag))
    return -s if n % 2 else s


def _lanczos_log_gamma(z: complex) -> complex:
    z = z - 1.0
    x = _LANCZOS_P[0]
    for i in range(1, len(_LANCZOS_P)):
        x += _LANCZOS_P[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def log_gamma(z: complex) -> complex:
    """Principal branch of ln Gamma(z).

    The branch cut lies along the negative real axis; the imaginary part is
    continuous everywhere else, which is *not* the same as ``log(gamma(z))``.
    Raises :class:`PoleError` within ``POLE_TOL`` of a non-positive integer.
    """
    z = complex(z)
    if _near_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {z}")
    if z.real >= 0.5:
        return _lanczos_log_gamma(z)
    # reflection, with the 2*pi*k correction that restores the principal branch
    k = math.floor(0.5 * z.real + 0.25)
    correction = complex(_LOG_PI, math.copysign(2.0 * math.pi, z.imag) * k)
    return correction - cmath.log(_sinpi(z)) - _lanczos_log_gamma(1.0 - z)


def recip_gamma(z: complex) -> complex:
    """Entire function 1/Gamma(z); exactly zero at the non-positive integers."""
    z = complex(z)
    if _near_nonpositive_integer(z):
        return 0j
    if z.imag == 0:
        # keep real arguments real: on the negative axis the branch term of
        # log_gamma depends on the sign of a zero imaginary part
        try:
            g = math.gamma(z.real)
        except OverflowError:
            g = math.inf
        if g != 0 and math.isfinite(g):
            return complex(1.0 / g, 0.0)
        return complex(cmath.exp(-log_gamma(z)).real, 0.0)
    return cmath.exp(-log_gamma(z))


def _to_fixed(z: complex) -> tuple[int, int]:
    return int(math.ldexp(z.real, _FIXED_BITS)), int(math.ldexp(z.imag, _FIXED_BITS))


def _kummer_fixed(a: complex, b: complex, z: complex) -> complex:
    """Same Maclaurin sum as the double loop, carried in 320-bit fixed point."""
    one = 1 << _FIXED_BITS
    ar, ai = _to_fixed(a)
    br, bi = _to_fixed(b)
    zr, zi = _to_fixed(z)
    tr, ti = one, 0
    sr, si = one, 0
    for k in range(_SERIES_CAP):
        # t *= (a + k) z
        nr, ni = ar + k * one, ai
        pr = (nr * zr - ni * zi) >> _FIXED_BITS
        pi_ = (nr * zi + ni * zr) >> _FIXED_BITS
        tr, ti = (tr * pr - ti * pi_) >> _FIXED_BITS, (tr * pi_ + ti * pr) >> _FIXED_BITS
        # t /= (b + k)(k + 1)
        dr, di = (br + k * one) * (k + 1), bi * (k + 1)
        den = dr * dr + di * di
        tr, ti = (
            ((tr * dr + ti * di) << _FIXED_BITS) // den,
            ((ti * dr - tr * di) << _FIXED_BITS) // den,
        )
        sr += tr
        si += ti
        if math.hypot(tr, ti) <= _SERIES_RTOL * math.hypot(sr, si):
            return complex(sr / one, si / one)
    raise NonConvergence(f"1F1({a}; {b}; {z}) needs more than {_SERIES_CAP} terms")


def kummer_1f1(a: complex, b: complex, z: complex) -> complex:
    """Confluent hypergeometric function 1F1(a; b; z) by its Maclaurin series.

    Terms follow ``t[k+1] = t[k] (a+k) z / ((b+k)(k+1))`` and the sum stops once
    ``|t[k]| <= 1e-16 |sum|``. When the largest term dwarfs the result (strong
    cancellation, e.g. ``Re z << 0`` or ``z`` near the imaginary axis) the same
    series is re-summed in wide fixed point so the double result keeps its
    accuracy. Supported domain is ``|z| <= 100``.
    """
    a, b, z = complex(a), complex(b), complex(z)
    if _near_nonpositive_integer(b):
        raise BParameterPole(f"1F1 lower parameter {b} is a non-positive integer")
    if z == 0:
        return 1 + 0j
    term = 1 + 0j
    total = 1 + 0j
    largest = 1.0
    for k in range(_SERIES_CAP):
        term *= (a + k) * z / ((b + k) * (k + 1))
        total += term
        mag = abs(term)
        if not math.isfinite(mag) or not cmath.isfinite(total):
            raise NonConvergence(f"1F1({a}; {b}; {z}) overflows double precision")
        largest = max(largest, mag)
        if mag <= _SERIES_RTOL * abs(total):
            if largest > _CANCELLATION_LIMIT * abs(total):
                return _kummer_fixed(a, b, z)
            return total
    raise NonConvergence(f"1F1({a}; {b}; {z}) needs more than {_SERIES_CAP} terms")


def asymptotic_2f0_with_error(
    a1: complex, a2: complex, w: complex, max_terms: int
) -> tuple[complex, float]:
    """Optimally truncated 2F0(a1, a2;; w) and the modulus of the first omitted term.

    Sums ``(a1)_k (a2)_k w^k / k!`` up to and including the first term whose
    successor is no smaller in modulus, or up to ``k = max_terms - 1``.
    """
    if max_terms < 1:
        raise ValueError("max_terms must be >= 1")
    w = complex(w)
    if abs(w) >= 1:
        raise ValueError(f"|w| = {abs(w)} is outside the asymptotic regime")
    term = 1 + 0j
    total = 0j
    for k in range(max_terms):
        total += term
        nxt = term * (a1 + k) * (a2 + k) * w / (k + 1)
        if abs(nxt) >= abs(term):
            break
        term = nxt
    return total, abs(nxt)


def asymptotic_2f0(a1: complex, a2: complex, w: complex, max_terms: int) -> complex:
    """Optimally truncated 2F0(a1, a2;; w); see :func:`asymptotic_2f0_with_error`."""
    return asymptotic_2f0_with_error(a1, a2, w, max_terms)[0]
