import warnings

import numpy as np
import pytest

from ptspectrum import oracle
from ptspectrum.errors import StepLimitExceeded
from ptspectrum.oracle import (
    MatchResult,
    ShootingConfig,
    integrate_halfline,
    scan_exponent,
    shoot_eigenvalues,
    wkb_log_derivative,
    wronskian_mismatch,
)
from ptspectrum.rootfinder import SearchRegion
from ptspectrum.wavefunction import Side

E1 = 1.258091762156501
E2 = 4.991314398227916 + 0.780485586112516j
E3 = 8.618143191877571 + 3.3632553163141483j


@pytest.mark.parametrize(
    "kwargs",
    [{"exponent_a": 1.5}, {"cutoff_L": 0}, {"rtol": 0}, {"atol": -1}, {"max_steps": 0}, {"wkb_order": 21}],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        ShootingConfig(**kwargs)


def test_wkb_order_zero_is_plain_root():
    x, E = 6.0, 2 + 1j
    expected = -np.sqrt(-1j * x * x - E)
    if expected.real > 0:
        expected = -expected
    assert wkb_log_derivative(x, E, 2.0, Side.RIGHT, order=0) == pytest.approx(expected)
    assert wkb_log_derivative(x, E, 2.0, Side.RIGHT, order=0).real < 0
    assert wkb_log_derivative(-x, E, 2.0, Side.LEFT, order=0).real > 0


def test_wkb_series_matches_exact_log_derivative():
    # for a = 2 the decaying solution is known in closed form; compare psi'/psi at x = 6
    from ptspectrum.wavefunction import psi

    x, h = 6.0, 1e-4
    exact = (psi(E2, x + h) - psi(E2, x - h)) / (2 * h) / psi(E2, x)
    assert abs(wkb_log_derivative(x, E2, 2.0, Side.RIGHT) - exact) < 1e-6 * abs(exact)


def test_wkb_vectorized():
    energies = np.array([1.0, 2 + 1j])
    vec = wkb_log_derivative(6.0, energies, 2.5, Side.RIGHT)
    assert vec.shape == (2,)
    assert vec[1] == wkb_log_derivative(6.0, 2 + 1j, 2.5, Side.RIGHT)


def test_halfline_nonzero_and_linear():
    cfg = ShootingConfig()
    for side in Side:
        p, d = integrate_halfline(E1, cfg, side)
        assert abs(p) > 0
    # array input integrates each energy independently
    arr = integrate_halfline(np.array([E1, E2]), cfg, Side.LEFT)
    single = integrate_halfline(E2, cfg, Side.LEFT)
    assert abs(arr[0][1] - single[0]) < 1e-8 * abs(single[0])


def test_pt_mirror():
    # psi(x) -> conj(psi(-x)) maps left solutions at E to right solutions at conj E
    cfg = ShootingConfig()
    pl, dl = integrate_halfline(E2, cfg, Side.LEFT)
    pr, dr = integrate_halfline(E2.conjugate(), cfg, Side.RIGHT)
    assert abs(pr - pl.conjugate()) < 1e-8 * abs(pl)
    assert abs(dr + dl.conjugate()) < 1e-8 * abs(dl)


def test_match_result_invariant():
    m = wronskian_mismatch(E2)
    (pl, dl), (pr, dr) = m.left_state, m.right_state
    assert abs(m.mismatch - (pl * dr - pr * dl)) <= 1e-14 * (abs(pl * dr) + abs(pr * dl))
    assert MatchResult(0j, (0j, 0j), (0j, 0j)).normalized == float("inf")


def test_mismatch_at_and_off_eigenvalue():
    assert wronskian_mismatch(1.258091).normalized <= 1e-6
    assert wronskian_mismatch(E1).normalized <= 1e-10
    assert wronskian_mismatch(2.0).normalized > 1e-2


def test_mismatch_conjugation():
    a = wronskian_mismatch(E2 + 0.3)
    b = wronskian_mismatch((E2 + 0.3).conjugate())
    assert abs(a.normalized - b.normalized) < 1e-8


def test_cutoff_warning():
    with pytest.warns(RuntimeWarning, match="cutoff_L"):
        integrate_halfline(20.0, ShootingConfig(cutoff_L=3.0), Side.RIGHT)


def test_step_limit():
    with pytest.raises(StepLimitExceeded):
        integrate_halfline(E1, ShootingConfig(max_steps=2), Side.RIGHT)


def test_shoot_small_regions():
    first = shoot_eigenvalues(SearchRegion(0, 6, -1, 2))
    assert [pytest.approx(e.value, abs=1e-4) for e in first] == [E1, E2, E2.conjugate()]
    assert first[0].is_real
    third = shoot_eigenvalues(SearchRegion(7, 10, 2, 5))
    assert len(third) == 1 and abs(third[0].value - E3) < 1e-4


def test_shoot_empty_region():
    assert shoot_eigenvalues(SearchRegion(0, 1, 0.2, 0.7)) == []


def test_shoot_drops_failed_seeds(monkeypatch):
    def fail(seed, cfg):
        raise oracle.NoConvergence("forced")

    monkeypatch.setattr(oracle, "_refine", fail)
    with pytest.warns(RuntimeWarning, match="did not converge"):
        assert shoot_eigenvalues(SearchRegion(0, 6, -1, 2)) == []


def test_tolerance_convergence():
    region = SearchRegion(7, 10, 2, 5)
    values = [
        shoot_eigenvalues(region, ShootingConfig(rtol=r, atol=1e-14))[0].value
        for r in (1e-8, 5e-9, 2.5e-9)
    ]
    first, second = abs(values[1] - values[0]), abs(values[2] - values[1])
    assert second < 10 * first + 1e-12


def test_scan_arguments():
    with pytest.raises(ValueError):
        scan_exponent(2, 3, 1, SearchRegion(0, 1, 0, 1))
    with pytest.raises(ValueError):
        scan_exponent(3, 2, 3, SearchRegion(0, 1, 0, 1))


def test_scan_records_errors(monkeypatch):
    def boom(region, cfg, grid_n):
        if cfg.exponent_a > 2.4:
            raise RuntimeError("forced")
        return []

    monkeypatch.setattr(oracle, "shoot_eigenvalues", boom)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        points = scan_exponent(2.0, 3.0, 3, SearchRegion(0, 2, -1, 1))
    assert [p.exponent_a for p in points] == [2.0, 2.5, 3.0]
    assert points[0].error is None and "forced" in points[1].error


def test_scan_endpoint_a3():
    points = scan_exponent(2.0, 3.0, 2, SearchRegion(0, 4.5, -1, 1))
    assert [e.value for e in points[0].eigenvalues] == [pytest.approx(E1, abs=1e-8)]
    cubic = [e.value for e in points[1].eigenvalues]
    # lowest levels of -d2/dx2 - i x^3 (|x|^3 with the PT sign pattern)
    assert cubic == [pytest.approx(1.1562670719840038, abs=1e-8), pytest.approx(4.1092287528160485, abs=1e-8)]
