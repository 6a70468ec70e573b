import numpy as np
import pytest

from rebalance import (
    ControlPoint,
    RelevanceError,
    build_relevance_extremes,
    build_relevance_range,
    find_bumps,
)

from _toys import regression_ds

# five-point fixture whose relevance exceeds 0.5 exactly on
# [0, 1.5] and [4.5, 7]
WAVE = [(0, 1, 0), (3, 0, 0), (6, 1, 0), (7, 0.5, 1), (10, 0, 0)]


def test_hits_control_points_exactly():
    fn = build_relevance_range(WAVE)
    for y, phi, _ in WAVE:
        assert fn(y) == pytest.approx(phi, abs=1e-9)


def test_two_point_interpolation():
    fn = build_relevance_range([(0, 0, 0), (1, 1, 0)])
    assert fn(0) == 0 and fn(1) == 1
    assert 0 < fn(0.5) < 1


def test_constant_extrapolation():
    fn = build_relevance_range(WAVE)
    assert fn(-5) == 1.0
    assert fn(12) == 0.0


def test_flat_segment_stays_flat():
    fn = build_relevance_range([(0, 0, 0), (2, 0, 0), (4, 1, 0)])
    assert fn(1) == 0.0


def test_wave_midpoints_cross_at_half():
    # symmetric cubics with zero end slopes cross 0.5 at the midpoint
    fn = build_relevance_range(WAVE)
    assert fn(1.5) == pytest.approx(0.5, abs=1e-9)
    assert fn(4.5) == pytest.approx(0.5, abs=1e-9)
    assert fn(5) > 0.5


def test_vectorized_evaluation_matches_scalar():
    fn = build_relevance_range(WAVE)
    ys = np.linspace(-2, 12, 57)
    vec = fn(ys)
    assert vec.shape == ys.shape
    for y, v in zip(ys, vec):
        assert fn(float(y)) == v


def test_admissible_slopes_are_honoured():
    pts = [(0, 0, 0.5), (1, 0.5, 0.6), (2, 1, 0)]
    fn = build_relevance_range(pts)
    np.testing.assert_allclose(fn.slopes, [0.5, 0.6, 0.0], atol=1e-12)
    h = 1e-6
    d = (fn(1 + h) - fn(1 - h)) / (2 * h)
    assert d == pytest.approx(0.6, abs=1e-4)


def test_inadmissible_slope_is_zeroed():
    # positive user slope against two falling secants cannot be kept
    fn = build_relevance_range([(0, 1, 0), (1, 0.5, 5.0), (2, 0, 0)])
    assert fn.slopes[1] == 0.0


def test_slope_capped_at_three_times_secant():
    fn = build_relevance_range([(0, 0, 0), (1, 0.1, 9.0), (2, 0.2, 0)])
    assert fn.slopes[1] <= 3 * 0.1 + 1e-12


def test_monotone_between_ordered_points():
    rng = np.random.default_rng(0)
    for _ in range(20):
        n = int(rng.integers(2, 6))
        ys = np.sort(rng.normal(size=n) * 5)
        while len(np.unique(ys)) != n:
            ys = np.sort(rng.normal(size=n) * 5)
        phis = rng.uniform(size=n)
        dphis = rng.normal(size=n) * 3
        fn = build_relevance_range(list(zip(ys, phis, dphis)))
        for a, b, pa, pb in zip(ys, ys[1:], phis, phis[1:]):
            seg = fn(np.linspace(a, b, 50))
            diffs = np.diff(seg)
            if pa <= pb:
                assert np.all(diffs >= -1e-12)
            else:
                assert np.all(diffs <= 1e-12)


def test_output_always_in_unit_interval():
    rng = np.random.default_rng(1)
    fn = build_relevance_range([(0, 0, 2.0), (1, 1, 2.0), (2, 0, -2.0)])
    qs = rng.uniform(-5, 7, size=10_000)
    vals = fn(qs)
    assert np.all(vals >= 0) and np.all(vals <= 1)


def test_points_are_sorted_on_input():
    fn = build_relevance_range([(6, 1, 0), (0, 1, 0), (3, 0, 0)])
    assert fn(3) == 0.0


def test_control_point_objects_accepted():
    fn = build_relevance_range([ControlPoint(0, 0), ControlPoint(1, 1)])
    assert fn(1) == 1.0


@pytest.mark.parametrize(
    "points,msg",
    [
        ([(0, 0, 0)], "at least two"),
        ([(0, 0, 0), (0, 1, 0)], "duplicate"),
        ([(0, 0, 0), (1, 1.5, 0)], "relevance values"),
        ([(0, 0, 0), (np.nan, 1, 0)], "finite"),
    ],
)
def test_range_input_validation(points, msg):
    with pytest.raises(RelevanceError, match=msg):
        build_relevance_range(points)


# ------------------------------------------------------------- extremes

def test_extremes_symmetric_values():
    vals = [-2.0, -1.0, 0.0, 1.0, 2.0]
    fn = build_relevance_extremes(vals, extr_type="both")
    assert fn(0) == 0.0
    qs = np.linspace(0.1, 2.0, 25)
    np.testing.assert_allclose(fn(qs), fn(-qs), atol=1e-12)
    assert fn(2) == 1.0 and fn(-2) == 1.0


def test_extremes_high_outliers_anchor_fence():
    vals = [1, 2, 3, 4, 5, 6, 7, 8, 100.0]
    fn = build_relevance_extremes(vals, extr_type="both")
    # Q3+1.5*IQR = 13 is inside the data span, so it carries phi=1;
    # the low side has no outliers and stays at zero relevance
    assert fn(5) == 0.0
    assert fn(13) == pytest.approx(1.0)
    assert fn(100) == 1.0
    assert fn(1) == 0.0


def test_extremes_high_only():
    vals = list(np.linspace(0, 10, 20))
    fn = build_relevance_extremes(vals, extr_type="high")
    assert fn(np.median(vals)) == 0.0
    assert fn(10) == 1.0
    assert fn(0) == 0.0  # low side not requested


def test_extremes_low_only():
    vals = list(np.linspace(0, 10, 20))
    fn = build_relevance_extremes(vals, extr_type="low")
    assert fn(0) == 1.0
    assert fn(10) == 0.0


def test_extremes_no_spread_rejected():
    with pytest.raises(RelevanceError, match="no spread"):
        build_relevance_extremes([3.0, 3.0, 3.0, 3.0])


def test_extremes_no_spread_above_median():
    with pytest.raises(RelevanceError, match="above the median"):
        build_relevance_extremes([1.0, 2.0, 3.0, 3.0, 3.0], extr_type="high")


def test_extremes_bad_type():
    with pytest.raises(RelevanceError, match="unknown extremes type"):
        build_relevance_extremes([1.0, 2.0, 3.0], extr_type="middle")


# ---------------------------------------------------------------- bumps

def wave_ds(n=201):
    return regression_ds(np.linspace(0, 10, n))


def test_find_bumps_matches_wave_intervals():
    ds = wave_ds()
    fn = build_relevance_range(WAVE)
    part = find_bumps(ds, fn, 0.5)
    assert [b.rare for b in part.bumps] == [True, False, True, False]
    y = ds.target_column.values
    for b in part.bumps:
        inside = (y >= b.y_low) & (y <= b.y_high)
        assert sorted(np.flatnonzero(inside)) == sorted(b.indices)
    rare_ys = np.concatenate([y[list(b.indices)] for b in part.rare_bumps])
    assert np.all((rare_ys <= 1.5) | (rare_ys >= 4.5))
    assert np.all(rare_ys[rare_ys >= 4.5] <= 7.0)


def test_bumps_partition_and_alternate():
    rng = np.random.default_rng(4)
    fn = build_relevance_range(WAVE)
    for _ in range(10):
        ds = regression_ds(rng.uniform(-1, 11, size=60))
        part = find_bumps(ds, fn, float(rng.uniform(0.1, 0.9)))
        all_idx = sorted(i for b in part.bumps for i in b.indices)
        assert all_idx == list(range(60))
        flags = [b.rare for b in part.bumps]
        assert all(a != b for a, b in zip(flags, flags[1:]))


def test_constant_high_relevance_single_rare_bump():
    fn = build_relevance_range([(0, 1, 0), (1, 1, 0)])
    ds = wave_ds(30)
    part = find_bumps(ds, fn, 1.0)
    assert len(part.bumps) == 1
    assert part.bumps[0].rare and part.bumps[0].count == 30


def test_threshold_only_moves_boundaries():
    ds = wave_ds()
    fn = build_relevance_range(WAVE)
    lo = find_bumps(ds, fn, 0.3)
    hi = find_bumps(ds, fn, 0.7)
    # rare bumps shrink as the threshold rises but keep their order
    assert len(lo.rare_bumps) == len(hi.rare_bumps) == 2
    for a, b in zip(hi.rare_bumps, lo.rare_bumps):
        assert set(a.indices) <= set(b.indices)


def test_bump_indices_are_original_row_ids():
    ds = regression_ds([7.0, 0.5, 5.0, 9.0, 1.0])
    fn = build_relevance_range([(0, 0, 0), (10, 1, 0)])
    part = find_bumps(ds, fn, 0.5)
    y = ds.target_column.values
    for b in part.bumps:
        got = [float(y[i]) for i in b.indices]
        assert got == sorted(got)


def test_find_bumps_validates_threshold():
    ds = wave_ds(10)
    fn = build_relevance_range(WAVE)
    with pytest.raises(RelevanceError, match="thr_rel"):
        find_bumps(ds, fn, -0.1)
    with pytest.raises(RelevanceError, match="thr_rel"):
        find_bumps(ds, fn, 1.5)


def test_find_bumps_needs_numeric_target():
    from _toys import labelled

    ds = labelled(["a", "b"], {"x": ("num", [1.0, 2.0])})
    fn = build_relevance_range(WAVE)
    with pytest.raises(RelevanceError, match="numeric target"):
        find_bumps(ds, fn, 0.5)
