"""Shooting-method eigenvalues for V_a(x) = i(-x)^a (x <= 0), -i x^a (x >= 0).

This path uses no special functions: the decaying solution is integrated
inward from x = -L and x = +L with an adaptive embedded Runge-Kutta pair and
the two halves are matched at the origin through their Wronskian. For a = 2 it
is an independent check on the Gamma-function spectrum.
"""

from __future__ import annotations

import cmath
import logging
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import DOP853
from scipy.special import binom

from .errors import NoConvergence, StepLimitExceeded, StiffnessFailure
from .rootfinder import REALITY_TOL, Eigenvalue, SearchRegion, dedup_sorted
from .wavefunction import Side

__all__ = [
    "ShootingConfig",
    "MatchResult",
    "ScanPoint",
    "wkb_log_derivative",
    "integrate_halfline",
    "wronskian_mismatch",
    "shoot_eigenvalues",
    "scan_exponent",
]

log = logging.getLogger(__name__)

_SECANT_MAX_ITER = 50
_SECANT_RTOL = 1e-10
_REAL_SNAP = 1e-6


@dataclass(frozen=True)
class ShootingConfig:
    exponent_a: float = 2.0
    cutoff_L: float = 6.0
    rtol: float = 1e-10
    atol: float = 1e-12
    max_steps: int = 10**6
    wkb_order: int = 8

    def __post_init__(self):
        if self.exponent_a < 2:
            raise ValueError("exponent_a must be >= 2")
        if not 0 <= self.wkb_order <= 20:
            raise ValueError("wkb_order must lie in [0, 20]")
        if self.cutoff_L <= 0 or self.rtol <= 0 or self.atol <= 0 or self.max_steps < 1:
            raise ValueError(f"invalid shooting configuration {self}")


@dataclass(frozen=True)
class MatchResult:
    mismatch: complex
    left_state: tuple[complex, complex]
    right_state: tuple[complex, complex]

    @property
    def normalized(self) -> float:
        """|W| relative to the two products it is the difference of."""
        (pl, dl), (pr, dr) = self.left_state, self.right_state
        scale = abs(pl * dr) + abs(pr * dl)
        return abs(self.mismatch) / scale if scale else float("inf")


@dataclass
class ScanPoint:
    exponent_a: float
    eigenvalues: list[Eigenvalue] = field(default_factory=list)
    error: str | None = None


def _potential(x: float, a: float) -> complex:
    if x < 0:
        return 1j * (-x) ** a
    return -1j * x**a


def _jet_mul(a, b):
    out = np.zeros_like(a)
    for k in range(len(a)):
        out[k] = sum(a[j] * b[k - j] for j in range(k + 1))
    return out


def _jet_recip(a):
    out = np.zeros_like(a)
    out[0] = 1 / a[0]
    for k in range(1, len(a)):
        out[k] = -sum(a[j] * out[k - j] for j in range(1, k + 1)) / a[0]
    return out


def _jet_sqrt(a):
    out = np.zeros_like(a)
    out[0] = np.sqrt(a[0])
    for k in range(1, len(a)):
        out[k] = (a[k] - sum(out[j] * out[k - j] for j in range(1, k))) / (2 * out[0])
    return out


def _jet_deriv(a):
    out = np.zeros_like(a)
    out[:-1] = a[1:] * np.arange(1, len(a))[:, None]
    return out


def wkb_log_derivative(x: float, E, a: float, side: Side, order: int = 8):
    """psi'/psi at ``x`` of the solution decaying towards ``side``.

    Sums the WKB series of the Riccati equation y' + y^2 = Q, Q = V - E:
    y0 = -+sqrt(Q) with Re sqrt > 0, and
    y_n = -(y_{n-1}' + sum_{j=1}^{n-1} y_j y_{n-j}) / (2 y0).
    Derivatives are carried as Taylor jets of Q about ``x``. Order 0 is the
    plain sqrt(V - E) start.
    """
    energies = np.atleast_1d(np.asarray(E, dtype=complex))
    u = abs(x)
    sign = -1.0 if x < 0 else 1.0
    c = 1j if x < 0 else -1j
    q = np.empty((order + 1, energies.size), dtype=complex)
    for k in range(order + 1):
        # Taylor coefficient of c |x|^a
        q[k] = c * binom(a, k) * u ** (a - k) * sign**k
    q[0] -= energies
    terms = [-side.value * _jet_sqrt(q)]
    inv = _jet_recip(2 * terms[0])
    for n in range(1, order + 1):
        acc = _jet_deriv(terms[n - 1])
        for j in range(1, n):
            acc = acc + _jet_mul(terms[j], terms[n - j])
        terms.append(-_jet_mul(acc, inv))
    y = sum(t[0] for t in terms)
    return y if np.ndim(E) else complex(y[0])


def integrate_halfline(E, cfg: ShootingConfig, side: Side):
    """Integrate psi'' = (V - E) psi from x = +-L to 0.

    ``E`` may be a scalar or an array; arrays are integrated together as one
    system. Starts from psi = 1 with the slope of the solution decaying
    towards ``side`` (WKB, ``cfg.wkb_order``), and returns (psi(0), psi'(0)).
    """
    scalar = np.ndim(E) == 0
    energies = np.atleast_1d(np.asarray(E, dtype=complex))
    m = energies.size
    a = cfg.exponent_a
    x0 = side.value * cfg.cutoff_L
    v0 = _potential(x0, a)
    if abs(v0) < 4 * np.max(np.abs(energies)):
        warnings.warn(
            f"|V(L)| = {abs(v0):.3g} is less than 4|E|; increase cutoff_L",
            RuntimeWarning,
            stacklevel=2,
        )
    slope = wkb_log_derivative(x0, energies, a, side, cfg.wkb_order)
    y0 = np.concatenate([np.ones(m, dtype=complex), slope])

    def rhs(x, y):
        return np.concatenate([y[m:], (_potential(x, a) - energies) * y[:m]])

    solver = DOP853(rhs, x0, y0, 0.0, rtol=cfg.rtol, atol=cfg.atol)
    steps = 0
    while solver.status == "running":
        steps += 1
        if steps > cfg.max_steps:
            raise StepLimitExceeded(f"more than {cfg.max_steps} steps from x = {x0}")
        message = solver.step()
        if solver.status == "failed":
            raise StiffnessFailure(message or "integration failed")
    psi0, dpsi0 = solver.y[:m], solver.y[m:]
    if scalar:
        return complex(psi0[0]), complex(dpsi0[0])
    return psi0, dpsi0


def _wronskian(E, cfg: ShootingConfig):
    pl, dl = integrate_halfline(E, cfg, Side.LEFT)
    pr, dr = integrate_halfline(E, cfg, Side.RIGHT)
    return pl, dl, pr, dr


def wronskian_mismatch(E: complex, cfg: ShootingConfig = ShootingConfig()) -> MatchResult:
    pl, dl, pr, dr = _wronskian(complex(E), cfg)
    return MatchResult(pl * dr - pr * dl, (pl, dl), (pr, dr))


def _grid_metric(region: SearchRegion, cfg: ShootingConfig, grid_n: int):
    re_axis = np.linspace(region.re_min, region.re_max, grid_n)
    im_axis = np.linspace(region.im_min, region.im_max, grid_n)
    energies = (re_axis[:, None] + 1j * im_axis[None, :]).ravel()
    pl, dl, pr, dr = _wronskian(energies, cfg)
    scale = np.abs(pl * dr) + np.abs(pr * dl)
    metric = np.abs(pl * dr - pr * dl) / scale
    return energies.reshape(grid_n, grid_n), metric.reshape(grid_n, grid_n)


def _secant(f, x0, x1, max_iter: int = _SECANT_MAX_ITER, max_step: float = float("inf")):
    f0, f1 = f(x0), f(x1)
    for it in range(1, max_iter + 1):
        if f1 == 0:
            return x1, it
        denom = f1 - f0
        if denom == 0:
            raise NoConvergence(f"secant stalled at {x1}")
        step = f1 * (x1 - x0) / denom
        if abs(step) > max_step:
            step *= max_step / abs(step)
        x2 = x1 - step
        if not cmath.isfinite(x2) or abs(x2) > 1e3:
            raise NoConvergence(f"secant diverged from {x0}")
        if abs(x2 - x1) <= _SECANT_RTOL * max(1.0, abs(x2)):
            return x2, it
        x0, f0 = x1, f1
        x1, f1 = x2, f(x2)
    raise NoConvergence(f"secant did not converge from {x0}")


def _refine(seed: complex, cfg: ShootingConfig) -> Eigenvalue:
    def w(E):
        # W / (psi_L psi_R): same zeros, but free of the huge overall scale
        pl, dl, pr, dr = _wronskian(E, cfg)
        return dr / pr - dl / pl

    delta = 1e-3 * max(1.0, abs(seed))
    max_step = max(1.0, 0.25 * abs(seed))
    root, iters = _secant(w, seed, seed + delta, max_step=max_step)
    if abs(root.imag) < _REAL_SNAP:
        # W is real on the real axis (PT symmetry), so polish there
        try:
            real_root, extra = _secant(
                lambda t: w(t.real).real,
                complex(root.real),
                complex(root.real + delta),
                max_step=max_step,
            )
        except NoConvergence:
            real_root = None
        if real_root is not None and abs(real_root - root) < _REAL_SNAP:
            root, iters = complex(real_root.real, 0.0), iters + extra
    return Eigenvalue(
        root,
        wronskian_mismatch(root, cfg).normalized,
        abs(root.imag) < REALITY_TOL,
        iters,
    )


def shoot_eigenvalues(
    region: SearchRegion,
    cfg: ShootingConfig = ShootingConfig(),
    grid_n: int = 16,
) -> list[Eigenvalue]:
    """Eigenvalues in ``region`` from secant iteration on the Wronskian.

    Seeds are the local minima of the normalized mismatch on a
    ``grid_n x grid_n`` grid. Unlike the analytic search, the whole region is
    scanned directly, so conjugate pairing is an outcome rather than an input.
    Seeds that fail to converge are dropped and counted in a warning.
    """
    from .rootfinder import _grid_minima

    if grid_n < 2:
        raise ValueError("grid_n must be >= 2")
    energies, metric = _grid_metric(region, cfg, grid_n)
    roots = []
    dropped = 0
    for i, j in _grid_minima(metric):
        try:
            root = _refine(complex(energies[i, j]), cfg)
        except NoConvergence:
            dropped += 1
            continue
        if region.contains(root.value):
            roots.append(root)
    if dropped:
        warnings.warn(f"{dropped} shooting seeds did not converge", RuntimeWarning, stacklevel=2)
    return dedup_sorted(roots)


def scan_exponent(
    a_from: float,
    a_to: float,
    steps: int,
    region: SearchRegion,
    cfg: ShootingConfig = ShootingConfig(),
    grid_n: int = 16,
) -> list[ScanPoint]:
    """Shooting spectra on an evenly spaced grid of potential exponents."""
    if steps < 2 or not a_to > a_from:
        raise ValueError("need a_from < a_to and steps >= 2")
    out = []
    for a in np.linspace(a_from, a_to, steps):
        point = ScanPoint(float(a))
        try:
            point.eigenvalues = shoot_eigenvalues(region, replace(cfg, exponent_a=float(a)), grid_n)
        except Exception as exc:  # recorded per exponent, the scan goes on
            log.warning("scan failed at a = %s: %s", a, exc)
            point.error = f"{type(exc).__name__}: {exc}"
        out.append(point)
    return out
