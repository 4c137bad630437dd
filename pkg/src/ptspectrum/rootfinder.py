"""Locating zeros of the spectral function in a rectangle of the complex
energy plane.

``count_zeros`` gives the exact number of zeros via the argument principle,
``find_eigenvalues`` finds them by seeding Newton's method from local minima
of a scaled residual on a grid, and cross-checks the two.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    BoundaryZeroSuspected,
    CompletenessMismatch,
    CompletenessWarning,
    DerivativeVanished,
    NoConvergence,
)
from .quantization import relative_residual, spectral_fn, spectral_fn_deriv, spectral_terms

__all__ = [
    "REALITY_TOL",
    "DEDUP_RADIUS",
    "DEFAULT_REGION",
    "SearchRegion",
    "Eigenvalue",
    "count_zeros",
    "newton_refine",
    "find_eigenvalues",
    "dedup_sorted",
]

REALITY_TOL = 1e-8
DEDUP_RADIUS = 1e-6
_MAX_BOUNDARY_SAMPLES = 10**6
_BOUNDARY_SPACING = 0.05
_DIVERGENCE_RADIUS = 1e3
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SearchRegion:
    """Closed rectangle ``[re_min, re_max] x [im_min, im_max]``."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError(f"degenerate search region {self}")

    def contains(self, E: complex) -> bool:
        return self.re_min <= E.real <= self.re_max and self.im_min <= E.imag <= self.im_max

    def conjugate(self) -> "SearchRegion":
        return SearchRegion(self.re_min, self.re_max, -self.im_max, -self.im_min)

    def corners(self) -> list[complex]:
        """Counter-clockwise, starting bottom-left."""
        return [
            complex(self.re_min, self.im_min),
            complex(self.re_max, self.im_min),
            complex(self.re_max, self.im_max),
            complex(self.re_min, self.im_max),
        ]


DEFAULT_REGION = SearchRegion(0.0, 32.0, -25.0, 25.0)


@dataclass(frozen=True)
class Eigenvalue:
    value: complex
    residual: float
    is_real: bool
    newton_iterations: int = 0


def count_zeros(
    region: SearchRegion,
    fn: Callable[[complex], complex] = spectral_fn,
    max_samples: int = _MAX_BOUNDARY_SAMPLES,
) -> int:
    """Winding number of ``fn`` around the boundary of ``region``.

    Each edge starts at a spacing of 0.05 and is bisected wherever the phase of
    ``fn`` turns by pi/2 or more between neighbouring samples.
    """
    corners = region.corners()
    samples = 0
    total_phase = 0.0

    def value(E):
        f = fn(E)
        if f == 0 or not cmath.isfinite(f):
            raise BoundaryZeroSuspected(f"spectral function vanishes or overflows at {E}")
        return f

    for p, q in zip(corners, corners[1:] + corners[:1]):
        n = max(16, math.ceil(abs(q - p) / _BOUNDARY_SPACING))
        pts = [p + (q - p) * k / n for k in range(n + 1)]
        vals = [value(E) for E in pts]
        samples += n + 1
        stack = [(pts[k], vals[k], pts[k + 1], vals[k + 1]) for k in range(n - 1, -1, -1)]
        while stack:
            a, fa, b, fb = stack.pop()
            step = cmath.phase(fb / fa)
            if abs(step) < math.pi / 2:
                total_phase += step
                continue
            samples += 1
            if samples > max_samples or abs(b - a) < 1e-13 * max(1.0, abs(a)):
                raise BoundaryZeroSuspected(
                    f"boundary phase unresolved near {a} after {samples} samples"
                )
            mid = 0.5 * (a + b)
            fm = value(mid)
            stack.append((mid, fm, b, fb))
            stack.append((a, fa, mid, fm))
    return round(total_phase / (2 * math.pi))


def _make_eigenvalue(E: complex, iterations: int, residual_fn) -> Eigenvalue:
    is_real = abs(E.imag) < REALITY_TOL
    if is_real:
        E = complex(E.real, 0.0)
    return Eigenvalue(E, residual_fn(E), is_real, iterations)


def newton_refine(
    seed: complex,
    tol: float = 1e-12,
    max_iter: int = 50,
    fn: Callable[[complex], complex] = spectral_fn,
) -> Eigenvalue:
    """Newton iteration on ``fn`` with a central-difference derivative.

    Iteration stops once ``|dE| <= tol``. For the spectral function the test is
    relaxed to the rounding floor ``64 eps (|t1| + |t2|) / |F'|`` when that is
    larger, because the two terms of F reach 1e13 near |E| = 37 while F itself
    cancels to zero. Values with ``|Im E| < REALITY_TOL`` are snapped onto the
    real axis.
    The reported residual is the scale-free :func:`relative_residual` when
    ``fn`` is the spectral function, ``|fn(E)|`` otherwise.
    """
    if tol <= 0 or max_iter < 1:
        raise ValueError("tol must be positive and max_iter >= 1")
    residual_fn = relative_residual if fn is spectral_fn else (lambda z: abs(fn(z)))
    E = complex(seed)
    for it in range(1, max_iter + 1):
        if fn is spectral_fn:
            t1, t2 = spectral_terms(E)
            f, scale = t1 + t2, abs(t1) + abs(t2)
        else:
            f, scale = fn(E), 0.0
        if f == 0:
            return _make_eigenvalue(E, it - 1, residual_fn)
        d = spectral_fn_deriv(E, fn)
        if abs(d) < 1e-300:
            raise DerivativeVanished(f"derivative vanished at {E}")
        step = f / d
        E = E - step
        if not cmath.isfinite(E) or abs(E) > _DIVERGENCE_RADIUS:
            raise NoConvergence(f"Newton diverged from seed {seed}")
        if abs(step) <= max(tol, 64 * _EPS * scale / abs(d)):
            return _make_eigenvalue(E, it, residual_fn)
    raise NoConvergence(f"Newton did not converge from seed {seed} in {max_iter} steps")


def _grid_minima(values: np.ndarray) -> list[tuple[int, int]]:
    """Indices of points no larger than any of their (up to 8) neighbours."""
    ni, nj = values.shape
    padded = np.pad(values, 1, constant_values=np.inf)
    is_min = np.ones_like(values, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            is_min &= values <= padded[1 + di : 1 + di + ni, 1 + dj : 1 + dj + nj]
    return [tuple(ix) for ix in np.argwhere(is_min)]


def dedup_sorted(roots: list[Eigenvalue], radius: float = DEDUP_RADIUS) -> list[Eigenvalue]:
    """Drop roots within ``radius`` of an earlier one, then sort by modulus."""
    kept: list[Eigenvalue] = []
    for r in roots:
        if all(abs(r.value - k.value) >= radius for k in kept):
            kept.append(r)
    # rounding keeps numerically split conjugates upper-half first
    return sorted(kept, key=lambda r: (round(abs(r.value), 9), -r.value.imag))


def _upper_search_box(region: SearchRegion) -> tuple[float, float]:
    spans = []
    if region.im_max >= 0:
        spans.append((max(region.im_min, 0.0), region.im_max))
    if region.im_min < 0:
        spans.append((max(-region.im_max, 0.0), -region.im_min))
    lo = min(s[0] for s in spans)
    hi = max(s[1] for s in spans)
    if hi <= lo:
        hi = lo + 1e-3
    return lo, hi


def find_eigenvalues(
    region: SearchRegion = DEFAULT_REGION,
    grid_n: int = 120,
    strict: bool = False,
) -> list[Eigenvalue]:
    """All zeros of the spectral function inside ``region``, sorted by |E|.

    Only the closed upper half plane is searched; lower-half roots are
    produced by conjugation. The number of roots is checked against
    :func:`count_zeros`: a mismatch raises :class:`CompletenessMismatch` when
    ``strict``, otherwise it is reported as a :class:`CompletenessWarning`.
    """
    if grid_n < 2:
        raise ValueError("grid_n must be >= 2")
    lo, hi = _upper_search_box(region)
    re_axis = np.linspace(region.re_min, region.re_max, grid_n)
    im_axis = np.linspace(lo, hi, grid_n)
    metric = np.array([[relative_residual(complex(x, y)) for y in im_axis] for x in re_axis])

    upper: list[Eigenvalue] = []
    for i, j in _grid_minima(metric):
        try:
            root = newton_refine(complex(re_axis[i], im_axis[j]))
        except (NoConvergence, DerivativeVanished):
            continue
        if root.value.imag < 0:
            root = Eigenvalue(root.value.conjugate(), root.residual, root.is_real, root.newton_iterations)
        upper.append(root)

    found: list[Eigenvalue] = []
    for root in dedup_sorted(upper):
        if region.contains(root.value):
            found.append(root)
        if not root.is_real:
            mirror = root.value.conjugate()
            if region.contains(mirror):
                found.append(Eigenvalue(mirror, root.residual, False, root.newton_iterations))
    found = dedup_sorted(found)

    expected = count_zeros(region)
    if len(found) != expected:
        if strict:
            raise CompletenessMismatch(len(found), expected)
        warnings.warn(
            f"found {len(found)} eigenvalues but the winding number is {expected}",
            CompletenessWarning,
            stacklevel=2,
        )
    return found
