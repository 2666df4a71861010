import math
import time

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from swkb.catalog import coulomb_radial, radial_ho, square_well
from swkb.errors import ConfigurationError
from swkb.trace import (
    DensityCurve,
    broadened_stick_density,
    density_curve,
    energy_grid,
    extract_peaks,
)
from swkb.verify import trace_window
from frozen import GAUSS_PEAK_005

PEAK_LEVELS = np.array([3.0, 8.0, 15.0, 24.0, 35.0])


@pytest.fixture(scope="module")
def sw_window():
    e = square_well()
    curve = density_curve(e, 0.5, 35.0, 3500, 0.05, 10_000)
    ref = broadened_stick_density(e, curve.energies, 0.05)
    return e, curve, ref


def test_curve_fields_consistent(sw_window):
    _, curve, _ = sw_window
    assert np.array_equal(curve.total, curve.smooth + curve.oscillating)
    assert np.all(curve.smooth > 0)
    assert curve.energies[1] - curve.energies[0] <= curve.sigma / 5 * (1 + 1e-12)
    assert curve.k_max == 10_000


def test_square_well_peaks(sw_window):
    _, curve, ref = sw_window
    peaks = extract_peaks(curve, 0.5 * GAUSS_PEAK_005)
    assert len(peaks) == 5
    assert np.max(np.abs(peaks.energies - PEAK_LEVELS)) <= 0.025
    ref_peaks = extract_peaks(ref, 0.5 * GAUSS_PEAK_005)
    assert np.max(np.abs(ref_peaks.energies - peaks.energies)) <= 0.025
    assert np.max(np.abs(peaks.heights / ref_peaks.heights - 1)) <= 0.02


def test_density_close_to_stick_at_level(sw_window):
    _, curve, ref = sw_window
    i = int(np.argmin(np.abs(curve.energies - 3.0)))
    assert curve.total[i] == pytest.approx(ref.total[i], rel=0.02)


def test_off_resonance_equals_smooth():
    e = square_well()
    # between 3 and 8 with a width that damps every repetition
    curve = density_curve(e, 5.4, 5.6, 11, 4.0, 10_000)
    smooth = 1.0 / (2.0 * np.sqrt(1.0 + curve.energies))
    assert np.max(np.abs(curve.total - smooth)) <= 1e-3
    assert np.allclose(curve.smooth, smooth, rtol=1e-14)


def test_radial_smooth_constant():
    curve = density_curve(radial_ho(), 0.0, 10.0, 501, 0.1)
    assert np.allclose(curve.smooth, 0.5, rtol=0, atol=1e-15)


def test_kmax_stability(sw_window):
    e, curve, _ = sw_window
    doubled = density_curve(e, 0.5, 35.0, 3500, 0.05, 20_000)
    assert np.max(np.abs(doubled.total - curve.total)) < 1e-6


def test_counting_consistency():
    e = square_well()
    sigma = 0.05
    curve = density_curve(e, 0.0, 36.0, 3601, sigma)
    E, g = curve.energies, curve.total
    levels = [float(e.spectrum_f(n)) for n in range(7)]
    for n in range(5):
        mid = 0.5 * (levels[n] + levels[n + 1])
        m = E <= mid
        integral = np.trapezoid(g[m], E[m])
        # the n = 0 level sits on the lower edge; half its weight lies below E = 0
        assert integral == pytest.approx(n + 1 - 0.5, abs=0.02)


def test_stick_density_values():
    e = square_well()
    E = np.array([3.0 - 0.01, 3.0, 3.0 + 5 * 0.05])
    ref = broadened_stick_density(e, E, 0.05)
    assert ref.total[1] == pytest.approx(GAUSS_PEAK_005, rel=1e-12)
    assert ref.total[2] == pytest.approx(GAUSS_PEAK_005 * math.exp(-12.5), rel=1e-9)


def test_stick_density_five_peaks_on_full_grid():
    e = square_well()
    E = energy_grid(0.0, 35.0, 3501, 0.05)
    peaks = extract_peaks(broadened_stick_density(e, E, 0.05), 0.5 * GAUSS_PEAK_005)
    assert len(peaks) == 5
    assert np.allclose(peaks.energies, PEAK_LEVELS, atol=0.025)


def test_stick_density_stops_below_continuum():
    c = coulomb_radial()
    E = np.linspace(0.0, 0.99, 200)
    ref = broadened_stick_density(c, E, 0.001)
    assert np.all(np.isfinite(ref.total))
    with pytest.raises(ConfigurationError):
        broadened_stick_density(c, E, 0.01)


def test_peak_agreement_all_entries(entry):
    e_max, samples, sigma = trace_window(entry)
    curve = density_curve(entry, 0.0, e_max, samples, sigma)
    ref = broadened_stick_density(entry, curve.energies, sigma)
    h = 0.5 / (sigma * math.sqrt(2 * math.pi))
    got, want = extract_peaks(curve, h), extract_peaks(ref, h)
    keep_g, keep_w = got.energies >= 4 * sigma, want.energies >= 4 * sigma
    assert keep_g.sum() == keep_w.sum() > 0
    assert np.max(np.abs(got.energies[keep_g] - want.energies[keep_w])) <= sigma / 2
    assert np.max(np.abs(got.heights[keep_g] / want.heights[keep_w] - 1)) <= 0.02


def test_square_well_trace_runtime():
    t0 = time.perf_counter()
    density_curve(square_well(), 0.5, 35.0, 3500, 0.05, 10_000)
    assert time.perf_counter() - t0 < 10.0


def test_deterministic():
    a = density_curve(square_well(), 0.5, 10.0, 1000, 0.05)
    b = density_curve(square_well(), 0.5, 10.0, 1000, 0.05)
    assert np.array_equal(a.total, b.total)


# --- validation -----------------------------------------------------------------

@pytest.mark.parametrize("args", [
    (0.5, 35.0, 100, 0.05),    # spacing above sigma / 5
    (-1.0, 35.0, 3500, 0.05),  # negative start
    (5.0, 1.0, 3500, 0.05),    # reversed range
    (0.5, 35.0, 3500, 0.0),    # zero width
])
def test_grid_validation(args):
    with pytest.raises(ConfigurationError):
        density_curve(square_well(), *args)


def test_kmax_validation():
    with pytest.raises(ConfigurationError):
        density_curve(square_well(), 0.5, 1.0, 100, 0.05, 0)


def test_emax_beyond_bound_range():
    c = coulomb_radial()
    with pytest.raises(ConfigurationError):
        density_curve(c, 0.0, 1.5, 10_000, 0.05)


def test_stick_validation():
    with pytest.raises(ConfigurationError):
        broadened_stick_density(square_well(), [0.0, 1.0], -0.1)
    with pytest.raises(ConfigurationError):
        broadened_stick_density(square_well(), [1.0, 0.0], 0.1)


# --- peak extraction ------------------------------------------------------------

def _curve(E, y):
    E = np.asarray(E, float)
    y = np.asarray(y, float)
    z = np.zeros_like(E)
    return DensityCurve(E, z, z, y, 0.1, 0)


def test_flat_curve_has_no_peaks():
    assert len(extract_peaks(_curve(np.arange(10.0), np.ones(10)), 0.0)) == 0


def test_too_short_curve():
    with pytest.raises(ConfigurationError):
        extract_peaks(_curve([0.0, 1.0], [0.0, 1.0]), 0.0)


def test_edge_peak_detected():
    E = np.linspace(0, 1, 11)
    peaks = extract_peaks(_curve(E, np.exp(-((E - 1.0) / 0.2) ** 2)), 0.5)
    assert len(peaks) == 1
    assert peaks.energies[0] == pytest.approx(1.0, abs=0.1)


def test_first_sample_maximum_not_reported():
    E = np.linspace(0, 1, 11)
    assert len(extract_peaks(_curve(E, np.exp(-(E / 0.2) ** 2)), 0.5)) == 0


@given(st.floats(1.0, 9.0), st.floats(0.3, 2.0))
def test_quadratic_refinement_within_spacing(centre, width):
    E = np.linspace(0.0, 10.0, 101)
    y = np.exp(-0.5 * ((E - centre) / width) ** 2)
    peaks = extract_peaks(_curve(E, y), 0.5)
    assert len(peaks) == 1
    i = int(np.argmax(y))
    assert abs(peaks.energies[0] - E[i]) <= E[1] - E[0]
    assert abs(peaks.energies[0] - centre) <= 0.01
    assert peaks.heights[0] > 0


@given(st.lists(st.floats(1.0, 19.0), min_size=1, max_size=5, unique=True))
def test_peaks_ascending(centres):
    E = np.linspace(0.0, 20.0, 2001)
    y = sum(np.exp(-0.5 * ((E - c) / 0.05) ** 2) for c in centres)
    peaks = extract_peaks(_curve(E, y), 0.1)
    assert np.all(np.diff(peaks.energies) > 0)
    assert np.all(peaks.heights > 0)
