import cmath
import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from ptspectrum.errors import CoefficientPole, InvalidRange, InvalidSampling, QuadratureFailure
from ptspectrum.rootfinder import newton_refine
from ptspectrum.wavefunction import (
    X_SWITCH,
    Side,
    WaveSample,
    adaptive_simpson,
    alpha_for,
    coefficients,
    normalization_cutoff,
    normalize,
    ode_residual,
    potential,
    psi,
    psi_asymptotic,
    psi_unnormalized,
    sample_wave,
    side_of,
)

E1 = 1.258091762156501
E2 = 4.991314398227916 + 0.780485586112516j
E3 = 8.618143191877571 + 3.3632553163141483j
E_TOP = 29.91003069857372 + 22.14940333796791j


def test_alpha():
    s = math.sqrt(0.5)
    assert alpha_for(Side.LEFT) == pytest.approx(complex(s, s), abs=1e-15)
    assert alpha_for(Side.RIGHT) == pytest.approx(complex(s, -s), abs=1e-15)
    assert abs(alpha_for(Side.LEFT) * alpha_for(Side.RIGHT) - 1) < 1e-15
    assert abs(abs(alpha_for(Side.LEFT)) - 1) < 1e-15


def test_side_of_origin_is_right():
    assert side_of(0.0) is Side.RIGHT and side_of(-1e-300) is Side.LEFT


def test_b1_is_reciprocal_sqrt_pi():
    for E in (0, E2, 3 - 7j):
        for side in Side:
            assert coefficients(E, side).b1 == 1 / math.sqrt(math.pi)


def test_b2_pure_imaginary_and_continuous_at_real_eigenvalue():
    left, right = coefficients(E1, Side.LEFT), coefficients(E1, Side.RIGHT)
    assert abs(left.b2.real) < 1e-12
    assert abs(left.b2 - right.b2) < 1e-12
    assert left.b2 == pytest.approx(0.4044484523243507j, rel=1e-12)


def test_b2_differs_away_from_eigenvalues():
    for E in (2.0, 3 + 1j, 10 - 2j):
        assert abs(coefficients(E, Side.LEFT).b2 - coefficients(E, Side.RIGHT).b2) > 1e-3


def test_coefficient_pole():
    # Gamma(a3) has a pole where E / alpha = 3
    with pytest.raises(CoefficientPole):
        coefficients(3 * alpha_for(Side.RIGHT), Side.RIGHT)


def test_psi_at_origin():
    assert psi_unnormalized(E2, 0.0) == 1 / math.sqrt(math.pi)
    assert psi_unnormalized(E2, -0.0) == 1 / math.sqrt(math.pi)


def test_real_eigenvalue_symmetry_unnormalized():
    assert abs(psi_unnormalized(E1, -1) - psi_unnormalized(E1, 1).conjugate()) < 1e-10
    assert abs(psi_asymptotic(E1, -6) - psi_asymptotic(E1, 6).conjugate()) <= 1e-8 * abs(
        psi_asymptotic(E1, 6)
    )


def test_matches_ode_started_at_origin():
    # b1 and b2 are psi(0) and psi'(0) on the right half-line
    E = 4.991315 + 0.780486j
    c = coefficients(E, Side.RIGHT)
    sol = solve_ivp(
        lambda x, y: [y[1], (potential(x) - E) * y[0]],
        (0.0, 1.0),
        [c.b1, c.b2],
        method="DOP853",
        rtol=1e-13,
        atol=1e-15,
    )
    ref = complex(sol.y[0, -1])
    assert abs(psi_unnormalized(E, 1.0) - ref) <= 1e-8 * abs(ref)
    # 30-digit mpmath evaluation of the same closed form
    assert abs(ref - (-0.2586040550001586 + 0.36431278281773904j)) < 1e-12


@pytest.mark.parametrize("E", [E1, E2, E3])
def test_overlap_window(E):
    for x in np.concatenate([np.linspace(-5, -4, 11), np.linspace(4, 5, 11)]):
        a = psi_asymptotic(E, float(x))
        assert abs(psi_unnormalized(E, float(x)) - a) <= 1e-4 * abs(a)


def test_asymptotic_decays():
    assert abs(psi_asymptotic(E2, 12.0)) < 1e-20
    with pytest.raises(ValueError):
        psi_asymptotic(E2, 0.0)


def test_high_state_beyond_switch():
    # 60-digit mpmath values of the Kummer form; double-precision Kummer and
    # 2F0 forms both fail here, so psi() bridges the gap with the ODE
    refs = {
        6.0: 2.1379327596450923e-08 - 2.8486495804738796e-08j,
        8.5: 3.834671910353636e-14 - 1.0298799100366817e-13j,
        -7.0: 3.0626456519513545 - 19.55905039509447j,
    }
    for x, ref in refs.items():
        assert abs(psi(E_TOP, x) - ref) <= 1e-8 * abs(ref)


def test_adaptive_simpson():
    assert adaptive_simpson(math.sin, 0, math.pi, 1e-12) == pytest.approx(2.0, rel=1e-12)
    assert adaptive_simpson(lambda x: x**3, 0, 2, 1e-12) == pytest.approx(4.0, rel=1e-14)
    with pytest.raises(QuadratureFailure):
        adaptive_simpson(lambda x: math.sin(1 / x) if x else 0.0, 0, 1, 1e-14, max_intervals=50)


@pytest.mark.parametrize(
    "E, expected",
    [(E1, 1.2305174036512811), (E2, 0.9170024026036602), (E3, 0.562943473846398)],
)
def test_normalization_constant(E, expected):
    N = normalize(E)
    assert N == pytest.approx(expected, rel=1e-9)
    # fixed-step trapezoid oracle at 10^5 points
    xs = np.linspace(-8, 8, 100_001)
    mass = np.trapezoid([abs(psi(E, float(x))) ** 2 for x in xs], xs)
    assert N == pytest.approx(1 / math.sqrt(mass), rel=1e-6)


def test_normalize_arguments():
    with pytest.raises(ValueError):
        normalize(E1, x_cut=3.0)
    with pytest.raises(ValueError):
        normalize(E1, quad_tol=0)


def test_normalize_rejects_heavy_tail():
    with pytest.raises(QuadratureFailure):
        normalize(E_TOP, x_cut=8.0)


def test_normalization_cutoff():
    assert normalization_cutoff(E1) == 8.0
    assert normalization_cutoff(E3) == 8.0
    assert normalization_cutoff(E_TOP) > 8.0


def test_sample_wave_phase_and_norm():
    samples = sample_wave(E1, -6, 6, 1201)
    assert len(samples) == 1201
    origin = samples[600]
    assert origin.x == 0 and origin.psi.real > 0 and abs(origin.psi.imag) < 1e-12
    for s in samples[::97]:
        assert s.abs2 == pytest.approx(abs(s.psi) ** 2, rel=1e-15)


def test_sample_wave_pair_symmetry():
    a = sample_wave(E2, -6, 6, 1201)
    b = sample_wave(E2.conjugate(), -6, 6, 1201)
    assert max(abs(p.psi - q.psi.conjugate()) for p, q in zip(a, reversed(b))) < 1e-9


def test_sample_wave_unnormalized():
    s = sample_wave(E2, -1, 1, 3, norm=1.0)
    assert s[1].psi == 1 / math.sqrt(math.pi)


@pytest.mark.parametrize("lo, hi, n", [(0, 0, 2), (1, 0, 10), (0, 1, 1)])
def test_sample_wave_invalid_range(lo, hi, n):
    with pytest.raises(InvalidRange):
        sample_wave(E1, lo, hi, n)


def test_potential():
    assert potential(-2.0) == 4j and potential(2.0) == -4j and potential(0.0) == 0
    assert potential(-2.0, 3.0) == 8j


def test_ode_residual_eigenstate():
    samples = sample_wave(E1, -4, 4, 2000)
    assert ode_residual(E1, samples) < 1e-6


def test_ode_residual_non_eigenvalue_left_half():
    # the construction solves the ODE for any E; only decay picks eigenvalues
    samples = sample_wave(2.0, -4, -1e-3, 1000, norm=1.0)
    assert ode_residual(2.0, samples) < 1e-6


def test_ode_residual_fourth_order():
    coarse = ode_residual(E2, sample_wave(E2, 0.5, 4, 200, norm=1.0))
    fine = ode_residual(E2, sample_wave(E2, 0.5, 4, 399, norm=1.0))
    assert 10 < coarse / fine < 22  # ~2^4 when the step halves


def test_ode_residual_zero_samples():
    samples = [WaveSample(x, 0j, 0.0) for x in np.linspace(0.1, 1, 6)]
    assert ode_residual(1.0, samples) == 0.0


def test_ode_residual_errors():
    with pytest.raises(InvalidSampling):
        ode_residual(1.0, [WaveSample(x, 1j, 1.0) for x in (0.1, 0.2, 0.3, 0.4)])
    with pytest.raises(InvalidSampling):
        ode_residual(1.0, [WaveSample(x, 1j, 1.0) for x in (0.1, 0.2, 0.3, 0.5, 0.6)])
    with pytest.raises(InvalidSampling):
        ode_residual(1.0, sample_wave(1.0, -1, 1, 5, norm=1.0))
    with pytest.raises(InvalidSampling):
        ode_residual(1.0, sample_wave(1.0, -1, 1.01, 6, norm=1.0))


def test_switch_constant():
    assert X_SWITCH == 4.5
    assert psi(E2, 4.5) == psi_unnormalized(E2, 4.5)
    assert abs(psi(E2, 4.6) - psi_asymptotic(E2, 4.6)) < 1e-6 * abs(psi(E2, 4.6))
    assert cmath.isfinite(psi(E2, 20.0))
