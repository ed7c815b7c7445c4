import math
import time

import numpy as np
import pytest

from vilenkin_lab.core.characters import character_values
from vilenkin_lab.core.experiments import (
    continuity_trace,
    fit_exponent,
    lacunary_fixture,
    lebesgue_point_trace,
    lipschitz_rate_table,
    locally_constant_level,
    moricz_siddiqi_ratio,
    norm_convergence,
    riemann_lebesgue_trace,
    subsequence_grid,
    vilenkin_lebesgue_trace,
    vilenkin_lebesgue_value,
)
from vilenkin_lab.core.function_space import StepFunction, modulus_of_continuity
from vilenkin_lab.core.group import GroupPoint, build_config, index_point
from vilenkin_lab.core.means import MeanFamily
from vilenkin_lab.core.weights import parse_weights
from vilenkin_lab.errors import DomainError, FitError
from vilenkin_lab.services.fixture_service import interval_fixture, random_step_function


def test_fejer_curve_of_a_character(cfg234):
    f = StepFunction(cfg234, character_values(cfg234, 3))
    grid = list(range(4, 25))
    curve = norm_convergence(MeanFamily.FEJER, f, math.inf, grid, fixture_id="character:3")
    assert curve.grid == grid
    assert max(abs(e - 3 / n) for n, e in zip(grid, curve.errors)) <= 1e-9
    assert curve.is_strictly_decreasing()
    assert not curve.subsequence


@pytest.mark.parametrize("spec", ["valpha:0.5", "ualpha:1"])
@pytest.mark.parametrize("seed", [1, 2, 3])
def test_subsequence_convergence_for_non_increasing_weights(dyadic6, spec, seed):
    q = parse_weights(spec)
    f = random_step_function(dyadic6, seed)
    grid = subsequence_grid(dyadic6)[1:]
    curve = norm_convergence(MeanFamily.NORLUND, f, 2, grid, q=q)
    assert curve.subsequence
    assert curve.weights == spec
    assert curve.is_strictly_decreasing()


def test_norm_convergence_rejects_bad_grids(random_f):
    with pytest.raises(DomainError):
        norm_convergence(MeanFamily.FEJER, random_f, 2, [3, 2])
    with pytest.raises(DomainError):
        norm_convergence(MeanFamily.FEJER, random_f, 2, [0, 1])
    with pytest.raises(DomainError):
        norm_convergence(MeanFamily.FEJER, random_f, 2, [])


def test_lebesgue_trace_matches_partial_sums(cfg234):
    rng = np.random.default_rng(11)
    for seed in range(100):
        f = random_step_function(cfg234, seed)
        x = index_point(int(rng.integers(cfg234.size)), cfg234)
        trace = lebesgue_point_trace(f, x, cfg234.resolution)
        assert max(abs(a - b) for a, b in zip(trace.lebesgue, trace.partial_sums)) <= 1e-12
        assert abs(trace.lebesgue[-1] - f(x)) <= 1e-12
        assert abs(trace.lebesgue[0] - f.integral()) <= 1e-12


def test_lebesgue_trace_records(random_f):
    trace = lebesgue_point_trace(random_f, GroupPoint.zero(random_f.cfg), 2)
    records = trace.records()
    assert [r["n"] for r in records] == [0, 1, 2]
    assert set(records[0]) == {"n", "lebesgue_re", "lebesgue_im", "partial_sum_re", "partial_sum_im"}


def test_vilenkin_lebesgue_operator(random_f):
    x = index_point(5, random_f.cfg)
    assert vilenkin_lebesgue_value(random_f, x, 0) == 0
    trace = vilenkin_lebesgue_trace(random_f, x, random_f.cfg.resolution)
    assert len(trace.vilenkin_lebesgue) == random_f.cfg.resolution + 1
    assert all(w >= 0 for w in trace.vilenkin_lebesgue)
    constant = StepFunction.constant(random_f.cfg, 4.0)
    assert all(w == 0 for w in vilenkin_lebesgue_trace(constant, x, 3).vilenkin_lebesgue)


def test_vilenkin_lebesgue_trace_marks_empty_prefix(random_f):
    trace = vilenkin_lebesgue_trace(random_f, GroupPoint.zero(random_f.cfg), 2, parse_weights("beta:1"))
    assert math.isnan(trace.mean_errors[0])
    assert not math.isnan(trace.mean_errors[1])


def test_tail_adjusted_lacunary_fixture_is_exactly_lipschitz():
    cfg = build_config([2], 8)
    f = lacunary_fixture(cfg, 0.5)
    for n in range(1, cfg.resolution):
        assert modulus_of_continuity(f, 2, n) == pytest.approx(2 * cfg.M(n) ** -0.5, rel=1e-12)


def test_lipschitz_rate():
    start = time.perf_counter()
    report = lipschitz_rate_table(0.5, 2, build_config([2], 10))
    assert report.predicted_case == "alpha"
    assert report.levels == list(range(1, 10))
    assert abs(report.fitted_exponent - (-0.5)) <= 0.15
    assert abs(report.modulus_exponent - (-0.5)) <= 1e-9
    assert time.perf_counter() - start < 30


def test_lipschitz_rate_cases():
    cfg = build_config([2], 8)
    assert lipschitz_rate_table(1.0, 2, cfg).predicted_case == "log-saturation"
    assert lipschitz_rate_table(1.5, 2, cfg).predicted_case == "saturation"
    with pytest.raises(FitError):
        lipschitz_rate_table(0.5, 2, build_config([2], 4))
    with pytest.raises(DomainError):
        lacunary_fixture(cfg, 0)


def test_exact_fixtures_skip_the_fit(cfg234):
    constant = StepFunction.constant(cfg234, 1.0)
    report = lipschitz_rate_table(0.5, 2, cfg234, f=constant)
    assert report.exact
    assert report.fitted_exponent is None


def test_fit_exponent():
    grid = [2.0, 4.0, 8.0, 16.0]
    assert fit_exponent(grid, [g**-0.7 for g in grid]) == pytest.approx(-0.7)
    with pytest.raises(FitError):
        fit_exponent(grid, [1.0, 0.0, 0.0, 0.5])


@pytest.mark.parametrize("spec,branch", [("fejer", "non-decreasing"), ("beta:1", "non-decreasing"), ("valpha:0.5", "non-increasing")])
def test_moricz_siddiqi_ratio(random_f, spec, branch):
    report = moricz_siddiqi_ratio(parse_weights(spec), random_f, 2, list(range(2, 25)))
    assert report.branch == branch
    assert report.rows
    assert all(math.isfinite(row.ratio) and row.ratio >= 0 for row in report.rows)
    assert report.sup_ratio == max(row.ratio for row in report.rows)
    assert report.truncated
    assert not moricz_siddiqi_ratio(parse_weights(spec), random_f, 2, [random_f.cfg.size]).truncated


def test_moricz_siddiqi_needs_monotone_weights(random_f):
    with pytest.raises(DomainError):
        moricz_siddiqi_ratio(parse_weights("custom:3/1/2"), random_f, 2, [4])


@pytest.mark.parametrize("spec", ["fejer", "valpha:0.5", "beta:1"])
def test_riemann_lebesgue_decomposition(random_f, spec):
    rows = riemann_lebesgue_trace(parse_weights(spec), random_f, index_point(7, random_f.cfg), random_f.cfg.resolution)
    assert rows
    assert max(row.residual for row in rows) <= 1e-9


def test_continuity_at_a_locally_constant_point(cfg234):
    f = interval_fixture(cfg234, 2)
    x = GroupPoint.zero(cfg234)
    assert locally_constant_level(f, x) == 2
    curve, level = continuity_trace(f, x, subsequence_grid(cfg234)[1:], MeanFamily.PARTIAL_SUM)
    assert level == 2
    assert curve.errors[1] <= 1e-12 and curve.errors[-1] <= 1e-12
    assert locally_constant_level(random_step_function(cfg234, 5), x) is None


def test_vilenkin_lebesgue_value_of_a_half_interval():
    cfg = build_config([2, 2, 2], 3)
    f = StepFunction.interval_indicator(GroupPoint.unit(cfg, 0), 1)
    assert vilenkin_lebesgue_value(f, GroupPoint.zero(cfg), 1) == pytest.approx(0.5)
