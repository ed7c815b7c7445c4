import math

import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings
from hypothesis import strategies as st

from vilenkin_lab.core.characters import character_values
from vilenkin_lab.core.function_space import (
    StepFunction,
    convolve,
    discretize,
    level_set_measure,
    lp_norm,
    minkowski_check,
    modulus_of_continuity,
    weak_lp,
)
from vilenkin_lab.core.group import CylinderRegion, GroupPoint, RegionKind, build_config, digit_table, sub_indices
from vilenkin_lab.core.kernels import dirichlet
from vilenkin_lab.core.transform import partial_sum
from vilenkin_lab.errors import DomainError
from vilenkin_lab.services.fixture_service import random_step_function

from .conftest import max_abs

CFG = build_config([2, 3, 4], 3)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_values_are_validated():
    with pytest.raises(DomainError):
        StepFunction(CFG, np.zeros(5))
    values = np.zeros(CFG.size)
    values[3] = np.inf
    with pytest.raises(DomainError):
        StepFunction(CFG, values)


def test_values_are_read_only(random_f):
    with pytest.raises(ValueError):
        random_f.values[0] = 1.0


def test_indicator_integrals():
    for n in range(CFG.resolution + 1):
        f = StepFunction.interval_indicator(GroupPoint.unit(CFG, 0), n)
        assert f.integral() == pytest.approx(1 / CFG.M(n))
    region = CylinderRegion(cfg=CFG, kind=RegionKind.ANNULUS, n=0)
    assert StepFunction.indicator(region).integral() == pytest.approx(0.5)


def test_discretize_samples_canonical_points():
    f = discretize(lambda x: x.digits[1], CFG)
    assert np.array_equal(f.values.real, digit_table(CFG)[:, 1])
    with pytest.raises(DomainError):
        discretize(lambda x: math.nan, CFG)


def test_arithmetic_and_evaluation(random_f):
    g = 2 * random_f - random_f + 1
    assert max_abs(g.values, random_f.values + 1) <= 1e-12
    x = GroupPoint(CFG, (1, 2, 3))
    assert random_f(x) == random_f.values[23]
    assert max_abs(abs(random_f).values, np.abs(random_f.values)) == 0


def test_translation(random_f):
    h = 7
    shifted = random_f.translate(h)
    idx = np.arange(CFG.size)
    assert np.array_equal(shifted.values, random_f.values[sub_indices(CFG, idx, h)])


def test_norms_of_constants():
    f = StepFunction.constant(CFG, 3 - 4j)
    for p in (1, 2, 3.5, math.inf):
        assert lp_norm(f, p).value == pytest.approx(5.0)
    with pytest.raises(DomainError):
        lp_norm(f, 0.5)


@given(a=seeds, b=seeds, p=st.sampled_from([1.0, 1.5, 2.0, 4.0, math.inf]))
@hypothesis_settings(max_examples=40, deadline=None)
def test_minkowski_for_sums(a, b, p):
    f, g = random_step_function(CFG, a), random_step_function(CFG, b)
    assert lp_norm(f + g, p).value <= lp_norm(f, p).value + lp_norm(g, p).value + 1e-12


@given(seed=seeds, p=st.sampled_from([1.0, 2.0, 3.0]))
@hypothesis_settings(max_examples=40, deadline=None)
def test_weak_norm_is_below_strong_norm(seed, p):
    f = random_step_function(CFG, seed)
    assert weak_lp(f, p).value <= lp_norm(f, p).value + 1e-12


def test_weak_norm_of_indicator():
    f = StepFunction.interval_indicator(GroupPoint.zero(CFG), 2)
    assert weak_lp(f, 1).value == pytest.approx(1 / 6)
    assert level_set_measure(f, 0.5) == pytest.approx(1 / 6)
    assert level_set_measure(f, 1.0) == 0
    assert level_set_measure(f, 1.0, strict=False) == pytest.approx(1 / 6)


def test_direct_and_fast_convolution_agree(random_f):
    g = random_step_function(CFG, 99)
    assert max_abs(convolve(random_f, g).values, convolve(random_f, g, method="fast").values) <= 1e-10
    with pytest.raises(DomainError):
        convolve(random_f, g, method="slow")


def test_convolution_with_dirichlet_is_a_partial_sum(random_f):
    for n in range(CFG.resolution + 1):
        M = CFG.M(n)
        assert max_abs(convolve(random_f, dirichlet(M, CFG).function).values, partial_sum(random_f, M).values) <= 1e-10


def test_modulus_of_continuity(random_f):
    assert modulus_of_continuity(random_f, 2, CFG.resolution) == 0
    assert modulus_of_continuity(StepFunction.constant(CFG, 2), 1, 0) == 0
    moduli = [modulus_of_continuity(random_f, 2, n) for n in range(CFG.resolution + 1)]
    assert all(b <= a for a, b in zip(moduli, moduli[1:]))


def test_minkowski_integral_inequality(random_f):
    table = np.outer(random_f.values, random_step_function(CFG, 3).values)
    for p in (1, 2, math.inf):
        lhs, rhs = minkowski_check(table, CFG, p)
        assert lhs <= rhs + 1e-12


@given(a=seeds, b=seeds)
@hypothesis_settings(max_examples=25, deadline=None)
def test_convolution_commutes(a, b):
    f, g = random_step_function(CFG, a), random_step_function(CFG, b)
    assert max_abs(convolve(f, g).values, convolve(g, f).values) <= 1e-10


def test_characters_convolve_to_themselves_or_zero():
    for n in range(CFG.size):
        psi_n = StepFunction(CFG, character_values(CFG, n))
        for k in range(CFG.size):
            expected = psi_n.values if n == k else np.zeros(CFG.size)
            assert max_abs(convolve(psi_n, StepFunction(CFG, character_values(CFG, k))).values, expected) <= 1e-12


@given(a=seeds, b=seeds, p=st.sampled_from([1, 1.5, 2, 3, math.inf]))
@hypothesis_settings(max_examples=25, deadline=None)
def test_young_inequality(a, b, p):
    f, g = random_step_function(CFG, a), random_step_function(CFG, b)
    lhs = lp_norm(convolve(f, g), p).value
    assert lhs <= lp_norm(f, p).value * lp_norm(g, 1).value + 1e-12


def test_modulus_of_a_rademacher_function():
    dyadic = build_config([2, 2, 2], 3)
    f = StepFunction(dyadic, character_values(dyadic, dyadic.M(1)))
    assert modulus_of_continuity(f, math.inf, 1) == pytest.approx(2.0)
    assert modulus_of_continuity(f, math.inf, 2) == 0
    assert modulus_of_continuity(f, 2, 0) == pytest.approx(2.0)
