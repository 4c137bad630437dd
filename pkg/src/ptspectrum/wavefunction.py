"""Closed-form eigenfunctions.

On each half-line the solution is

    psi(x) = exp(-alpha x^2 / 2) [b1 1F1(a1; 1/2; alpha x^2) + b2 x 1F1(a3; 3/2; alpha x^2)]

with ``alpha = exp(+i pi/4)`` for x < 0 and ``exp(-i pi/4)`` for x > 0,
``a1 = (1 - E/alpha)/4`` and ``a3 = (3 - E/alpha)/4``. The coefficient b2 is
chosen per side so that psi decays at that end, for any E; the two choices
coincide exactly at eigenvalues.

The Kummer combination cancels catastrophically for large |x| (the growing
parts of the two 1F1 terms cancel), so beyond ``X_SWITCH`` the large-x form
built from an optimally truncated 2F0 series is used instead.
"""

from __future__ import annotations

import cmath
import enum
import functools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .complexfn import asymptotic_2f0_with_error, kummer_1f1, recip_gamma
from .errors import CoefficientPole, InvalidRange, InvalidSampling, QuadratureFailure

__all__ = [
    "X_SWITCH",
    "Side",
    "side_of",
    "alpha_for",
    "WaveCoefficients",
    "WaveSample",
    "coefficients",
    "asymptotic_constant",
    "psi_unnormalized",
    "psi_asymptotic",
    "psi",
    "adaptive_simpson",
    "normalization_cutoff",
    "normalize",
    "sample_wave",
    "potential",
    "ode_residual",
]

X_SWITCH = 4.5
ASYMPTOTIC_TERMS = 12
TAIL_FRACTION = 1e-12

_EPS = 2.0**-52
# the large-x form is used where its truncation error is below this
_ASYMPTOTIC_ACCEPT = 1e-13
_BRIDGE_LIMIT = 40.0
_SQRT_PI = math.sqrt(math.pi)
_GAMMA_3_2 = 0.5 * _SQRT_PI


class Side(enum.Enum):
    LEFT = -1
    RIGHT = 1


def side_of(x: float) -> Side:
    """x = 0 is assigned to the right half-line; both sides agree there."""
    return Side.LEFT if x < 0 else Side.RIGHT


_LOG_ALPHA = {Side.LEFT: 0.25j * math.pi, Side.RIGHT: -0.25j * math.pi}
_ALPHA = {s: cmath.exp(v) for s, v in _LOG_ALPHA.items()}
_SQRT_ALPHA = {s: cmath.exp(0.5 * v) for s, v in _LOG_ALPHA.items()}


def alpha_for(side: Side) -> complex:
    return _ALPHA[side]


@dataclass(frozen=True)
class WaveCoefficients:
    b1: complex
    b2: complex
    side: Side


@dataclass(frozen=True)
class WaveSample:
    x: float
    psi: complex
    abs2: float


def _parameters(E: complex, side: Side) -> tuple[complex, complex, complex]:
    # 1/alpha == conj(alpha); multiplying keeps left(E*) == conj(right(E)) exactly
    eps = complex(E) * _ALPHA[side].conjugate()
    return eps, (1 - eps) / 4, (3 - eps) / 4


@functools.lru_cache(maxsize=256)
def coefficients(E: complex, side: Side) -> WaveCoefficients:
    """b1 = 1/Gamma(1/2) and the decay-enforcing b2 for one half-line.

    Raises :class:`CoefficientPole` where Gamma(a3) is infinite, the only
    place b2 is undefined.
    """
    _, a1, a3 = _parameters(E, side)
    rg3 = recip_gamma(a3)
    if rg3 == 0:
        raise CoefficientPole(f"b2 is infinite at E = {E} ({side.name.lower()} side)")
    ratio = recip_gamma(a1) / rg3
    b2 = -side.value * (_SQRT_ALPHA[side] * ratio / _GAMMA_3_2)
    return WaveCoefficients(1 / _SQRT_PI + 0j, b2, side)


def psi_unnormalized(E: complex, x: float) -> complex:
    """Kummer-function form, accurate for |x| up to about X_SWITCH."""
    x = float(x)
    side = side_of(x)
    c = coefficients(complex(E), side)
    if x == 0:
        return c.b1
    _, a1, a3 = _parameters(E, side)
    z = _ALPHA[side] * (x * x)
    even = kummer_1f1(a1, 0.5, z)
    odd = kummer_1f1(a3, 1.5, z)
    return cmath.exp(-0.5 * z) * (c.b1 * even + (c.b2 * x) * odd)


@functools.lru_cache(maxsize=256)
def asymptotic_constant(E: complex, side: Side) -> complex:
    """Prefactor of the large-|x| form on one half-line (includes b1)."""
    eps, a1, a3 = _parameters(E, side)
    rg3 = recip_gamma(a3)
    if rg3 == 0:
        raise CoefficientPole(f"b2 is infinite at E = {E} ({side.name.lower()} side)")
    alpha = _ALPHA[side]
    bracket = recip_gamma((1 + eps) / 4) - (alpha * alpha) * (
        recip_gamma((3 + eps) / 4) * recip_gamma(a1) / rg3
    )
    return cmath.exp((1 - eps) * _LOG_ALPHA[side]) * bracket


def _asymptotic_parts(E: complex, x: float, max_terms: int) -> tuple[complex, float]:
    x = float(x)
    if x == 0:
        raise ValueError("the asymptotic form is undefined at x = 0")
    side = side_of(x)
    E = complex(E)
    _, a1, a3 = _parameters(E, side)
    x2 = x * x
    log_z = _LOG_ALPHA[side] + math.log(x2)
    envelope = cmath.exp(-0.5 * _ALPHA[side] * x2 - a1 * log_z)
    w = -_ALPHA[side].conjugate() / x2
    series, omitted = asymptotic_2f0_with_error(a1, a3, w, max_terms)
    error = omitted / abs(series) if series else math.inf
    return asymptotic_constant(E, side) * envelope * series, error


def psi_asymptotic(E: complex, x: float, max_terms: int = ASYMPTOTIC_TERMS) -> complex:
    """Large-|x| form: C exp(-alpha x^2/2) (alpha x^2)^(-a1) 2F0(a1, a3;; -1/(alpha x^2))."""
    return _asymptotic_parts(E, x, max_terms)[0]


@functools.lru_cache(maxsize=128)
def _bridge(E: complex, side: Side, x_switch: float):
    """Decaying solution between x_switch and the point where the large-x form converges.

    For |E| large compared with x^2 the 2F0 series has not settled yet at
    x_switch, while the Kummer form has already lost all its digits. The gap
    is filled by integrating the ODE inward from the first |x| (on a 0.5 grid)
    where the large-x form is accurate. Inward is the stable direction: any
    admixture of the growing solution decays as |x| decreases.
    """
    start = x_switch
    while True:
        start += 0.5
        if start > _BRIDGE_LIMIT:
            raise QuadratureFailure(f"large-x form does not converge for |x| <= {_BRIDGE_LIMIT} at E = {E}")
        value, error = _asymptotic_parts(E, side.value * start, ASYMPTOTIC_TERMS)
        if error <= _ASYMPTOTIC_ACCEPT:
            break
    x0 = side.value * start
    h = 1e-3
    f = [psi_asymptotic(E, x0 + k * h) for k in (-2, -1, 1, 2)]
    slope = (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * h)
    sign = 1j if side is Side.LEFT else -1j

    def rhs(x, y):
        return [y[1], (sign * x * x - E) * y[0]]

    sol = solve_ivp(
        rhs,
        (x0, side.value * x_switch),
        [value, slope],
        method="DOP853",
        rtol=1e-13,
        atol=1e-300,
        dense_output=True,
    )
    if not sol.success:
        raise QuadratureFailure(f"inward integration failed at E = {E}: {sol.message}")
    return start, sol.sol


def psi(E: complex, x: float, x_switch: float = X_SWITCH) -> complex:
    """Unnormalized eigenfunction.

    The Kummer form is used for |x| <= x_switch and the large-x form beyond,
    as long as its 2F0 series has settled. Where it has not (high states just
    past x_switch), the value comes from integrating the ODE inward from the
    first point where it has.
    """
    if abs(x) <= x_switch:
        return psi_unnormalized(E, x)
    value, error = _asymptotic_parts(E, x, ASYMPTOTIC_TERMS)
    if error <= _ASYMPTOTIC_ACCEPT:
        return value
    side = side_of(x)
    start, sol = _bridge(complex(E), side, float(x_switch))
    if abs(x) >= start:
        return value
    return complex(sol(x)[0])


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float,
    max_intervals: int = 10**6,
) -> float:
    """Adaptive Simpson rule with Richardson correction, iterative."""
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) * (fa + 4 * fm + fb) / 6
    stack = [(a, b, fa, fm, fb, whole, tol)]
    total = 0.0
    intervals = 1
    while stack:
        lo, hi, flo, fmid, fhi, s, eps = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        left = (mid - lo) * (flo + 4 * flm + fmid) / 6
        right = (hi - mid) * (fmid + 4 * frm + fhi) / 6
        delta = left + right - s
        if abs(delta) <= 15 * eps or hi - lo < 1e-12:
            total += left + right + delta / 15
            continue
        intervals += 1
        if intervals > max_intervals:
            raise QuadratureFailure(f"more than {max_intervals} subintervals on [{a}, {b}]")
        stack.append((mid, hi, fmid, frm, fhi, right, 0.5 * eps))
        stack.append((lo, mid, flo, flm, fmid, left, 0.5 * eps))
    return total


def _tail_bound(E: complex, x_cut: float, density: Callable[[float], float]) -> float:
    """Bound on the mass of |psi|^2 beyond |x| = x_cut.

    Far out |psi|^2 behaves like exp(-x^2/sqrt(2)) x^(-4 Re a1), so its
    logarithmic decay rate beyond x_cut is at least
    sqrt(2) x_cut + 4 min(Re a1, 0) / x_cut.
    """
    total = 0.0
    for side in Side:
        _, a1, _ = _parameters(E, side)
        rate = math.sqrt(2) * x_cut + 4 * min(a1.real, 0.0) / x_cut
        if rate <= 0:
            return math.inf
        total += density(side.value * x_cut) / rate
    return total


def normalization_cutoff(
    E: complex,
    start: float = 8.0,
    limit: float = 16.0,
    step: float = 1.0,
    x_switch: float = X_SWITCH,
) -> float:
    """Smallest x_cut in start, start + step, ... whose tail is negligible.

    Low states fit inside |x| = 8; high ones spread further because the
    factor x^(-4 Re a1) grows with Re(E).
    """
    E = complex(E)

    def density(x):
        return abs(psi(E, x, x_switch)) ** 2

    xs = np.linspace(-start, start, 321)
    rough = np.trapezoid([density(x) for x in xs], xs)
    x_cut = start
    while x_cut <= limit:
        # half the allowance leaves room for the error of the rough integral
        if _tail_bound(E, x_cut, density) < 0.5 * TAIL_FRACTION * rough:
            return x_cut
        x_cut += step
    raise QuadratureFailure(f"tail of |psi|^2 not negligible within |x| <= {limit} at E = {E}")


@functools.lru_cache(maxsize=64)
def normalize(
    E: complex,
    x_cut: float = 8.0,
    quad_tol: float = 1e-10,
    x_switch: float = X_SWITCH,
) -> float:
    """Positive N with integral of |N psi|^2 over [-x_cut, x_cut] equal to 1.

    ``quad_tol`` is relative to the integral. The mass beyond ``x_cut`` is
    bounded from the large-x decay and must be below 1e-12 of the total;
    :func:`normalization_cutoff` picks an ``x_cut`` that satisfies this.
    """
    if x_cut < x_switch or quad_tol <= 0:
        raise ValueError("need x_cut >= x_switch and quad_tol > 0")
    E = complex(E)

    def density(x):
        return abs(psi(E, x, x_switch)) ** 2

    panels = [(-x_cut, -x_switch), (-x_switch, 0.0), (0.0, x_switch), (x_switch, x_cut)]
    panels = [(lo, hi) for lo, hi in panels if hi > lo]
    # coarse trapezoid sets the scale for the relative tolerance
    xs = np.linspace(-x_cut, x_cut, 401)
    rough = np.trapezoid([density(x) for x in xs], xs)
    if not rough > 0:
        raise QuadratureFailure(f"non-positive norm estimate at E = {E}")
    tol = quad_tol * rough / len(panels)
    integral = sum(adaptive_simpson(density, lo, hi, tol) for lo, hi in panels)

    tail = _tail_bound(E, x_cut, density)
    if tail > TAIL_FRACTION * integral:
        raise QuadratureFailure(f"tail beyond |x| = {x_cut} is {tail / integral:.2e} of the norm")
    return 1.0 / math.sqrt(integral)


def sample_wave(
    E: complex,
    x_min: float,
    x_max: float,
    n: int,
    norm: float | None = None,
    x_switch: float = X_SWITCH,
) -> list[WaveSample]:
    """n equally spaced samples of the normalized eigenfunction.

    Without ``norm`` the state is normalized over [-x_cut, x_cut] with
    x_cut from :func:`normalization_cutoff`. Pass ``norm=1.0`` for
    unnormalized values. psi(0) = N/sqrt(pi) is real and positive.
    """
    if n < 2 or not x_max > x_min:
        raise InvalidRange(f"cannot sample {n} points on [{x_min}, {x_max}]")
    E = complex(E)
    if norm is None:
        norm = normalize(E, normalization_cutoff(E, x_switch=x_switch), x_switch=x_switch)
    out = []
    for x in np.linspace(x_min, x_max, n):
        value = norm * psi(E, float(x), x_switch)
        out.append(WaveSample(float(x), value, value.real**2 + value.imag**2))
    return out


def potential(x: float, exponent: float = 2.0) -> complex:
    """i(-x)^a for x <= 0 and -i x^a for x >= 0."""
    if x < 0:
        return 1j * (-x) ** exponent
    return -1j * x**exponent


def ode_residual(E: complex, samples: Sequence[WaveSample]) -> float:
    """max |-psi'' + V psi - E psi| / max |psi| at interior points.

    psi'' is the 5-point central difference, so the samples must be equally
    spaced and may not include the kink at x = 0; points whose stencil
    reaches across the kink are skipped.
    """
    if len(samples) < 5:
        raise InvalidSampling("need at least 5 samples")
    x = np.array([s.x for s in samples])
    values = np.array([s.psi for s in samples], dtype=complex)
    steps = np.diff(x)
    h = steps.mean()
    if h <= 0 or np.max(np.abs(steps - h)) > 1e-9 * abs(h):
        raise InvalidSampling("samples are not equally spaced")
    if np.any(x == 0):
        raise InvalidSampling("a sample sits on the kink at x = 0")
    peak = np.max(np.abs(values))
    if peak == 0:
        return 0.0
    second = (
        -values[4:] + 16 * values[3:-1] - 30 * values[2:-2] + 16 * values[1:-3] - values[:-4]
    ) / (12 * h * h)
    inner = x[2:-2]
    v = np.where(inner < 0, 1j * inner**2, -1j * inner**2)
    res = np.abs(-second + (v - complex(E)) * values[2:-2])
    # V'' jumps at 0, so stencils reaching across it are O(h^2), not O(h^4)
    one_sided = (x[:-4] > 0) | (x[4:] < 0)
    if not one_sided.any():
        raise InvalidSampling("every stencil straddles x = 0")
    return float(np.max(res[one_sided]) / peak)
