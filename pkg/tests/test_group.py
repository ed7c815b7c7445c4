import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vilenkin_lab.config import settings
from vilenkin_lab.core.group import (
    CylinderRegion,
    GroupConfig,
    GroupPoint,
    RegionKind,
    add_indices,
    annulus_decomposition,
    build_config,
    complement_decomposition,
    group_add,
    group_sub,
    index_point,
    interval_contains,
    interval_coset,
    interval_mask,
    metric_rho,
    metric_rho_exact,
    nat_add,
    nat_digits,
    nat_sub,
    nat_value,
    point_index,
    sub_indices,
    subtraction_table,
)
from vilenkin_lab.errors import CapExceededError, ConfigError, ConfigMismatchError, DomainError

CFG = build_config([2, 3, 4], 3)
indices = st.integers(min_value=0, max_value=CFG.size - 1)


def test_build_config_repeats_short_radix():
    cfg = build_config([2, 3], 5)
    assert cfg.radix == (2, 3, 2, 3, 2)
    assert cfg.subgroup_sizes == (1, 2, 6, 12, 36, 72)
    assert cfg.size == 72


def test_build_config_truncates_long_radix():
    assert build_config([2, 3, 4, 5], 2).radix == (2, 3)


@pytest.mark.parametrize("radix,N", [([1, 2], 2), ([2], 0), ([], 3), ([2], 64)])
def test_build_config_rejects(radix, N):
    with pytest.raises(ConfigError):
        build_config(radix, N)


def test_group_config_validates_shape():
    with pytest.raises(ValueError):
        GroupConfig(radix=(2, 3), resolution=3)


def test_header_round_trip():
    assert GroupConfig.from_header(CFG.header()) == CFG
    assert GroupConfig.from_header("# " + CFG.header()) == CFG
    with pytest.raises(ConfigError):
        GroupConfig.from_header("radix=2,x;N=1")


def test_measure_is_exact():
    assert CFG.measure(2) == Fraction(1, 6)
    with pytest.raises(DomainError):
        CFG.M(4)


@given(a=indices, b=indices)
def test_point_arithmetic_matches_vectorized_indices(a, b):
    x, y = index_point(a, CFG), index_point(b, CFG)
    assert (x + y).index == int(add_indices(CFG, a, b))
    assert (x - y).index == int(sub_indices(CFG, a, b))
    assert ((x - y) + y) == x
    assert (x + (-x)) == GroupPoint.zero(CFG)


@given(a=indices)
def test_index_point_round_trip(a):
    assert point_index(index_point(a, CFG)) == a


@given(n=indices, k=indices)
def test_nat_add_and_sub_are_inverse(n, k):
    assert nat_sub(nat_add(n, k, CFG), k, CFG) == n
    assert nat_value(nat_digits(n, CFG).digits, CFG) == n


def test_nat_digits_and_leading_position():
    digits = nat_digits(23, CFG)
    assert digits.digits == (1, 2, 3)
    assert digits.leading_position() == 2
    assert nat_digits(0, CFG).leading_position() is None
    with pytest.raises(DomainError):
        nat_digits(24, CFG)


def test_point_rejects_bad_digits():
    with pytest.raises(DomainError):
        GroupPoint(CFG, (0, 3, 0))
    with pytest.raises(DomainError):
        GroupPoint(CFG, (0, 0))


def test_points_on_different_configs_do_not_mix():
    other = build_config([2, 3, 5], 3)
    with pytest.raises(ConfigMismatchError):
        GroupPoint.zero(CFG) + GroupPoint.zero(other)


@given(a=indices, b=indices)
def test_metric_is_symmetric(a, b):
    x, y = index_point(a, CFG), index_point(b, CFG)
    assert metric_rho_exact(x, y) == metric_rho_exact(y, x)
    assert (metric_rho(x, y) == 0) == (a == b)


def test_metric_of_unit_vectors():
    zero = GroupPoint.zero(CFG)
    for k in range(CFG.resolution):
        assert metric_rho_exact(zero, GroupPoint.unit(CFG, k)) == Fraction(1, CFG.M(k + 1))


@given(a=indices, b=indices, n=st.integers(min_value=0, max_value=3))
def test_interval_membership_agrees_with_mask(a, b, n):
    x, y = index_point(a, CFG), index_point(b, CFG)
    assert interval_contains(x, n, y) == bool(interval_mask(CFG, a, n)[b])
    assert interval_contains(x, n, interval_coset(x, n))


def test_interval_measure():
    for n in range(CFG.resolution + 1):
        region = CylinderRegion(cfg=CFG, kind=RegionKind.INTERVAL, n=n, center=5)
        assert region.measure == CFG.measure(n)


@pytest.mark.parametrize("N", [0, 1, 2, 3])
def test_complement_decomposition_partitions_the_complement(N):
    regions = complement_decomposition(N, CFG)
    cover = np.zeros(CFG.size, dtype=int)
    for region in regions:
        cover += region.mask()
    assert np.array_equal(cover, (~interval_mask(CFG, 0, N)).astype(int))


@pytest.mark.parametrize("N", [0, 1, 2, 3])
def test_annuli_partition_the_complement(N):
    cover = sum((r.mask().astype(int) for r in annulus_decomposition(N, CFG)), np.zeros(CFG.size, dtype=int))
    assert np.array_equal(cover, (~interval_mask(CFG, 0, N)).astype(int))


def test_region_labels():
    region = CylinderRegion(cfg=CFG, kind=RegionKind.CORNER, k=0, l=2, N=3)
    assert region.label() == "I_3^{0,2}"
    assert region.contains(GroupPoint(CFG, (1, 0, 2)))
    assert not region.contains(GroupPoint(CFG, (1, 1, 2)))


def test_subtraction_table(monkeypatch):
    table = subtraction_table(CFG)
    assert table[5, 5] == 0
    assert table.shape == (24, 24)
    cfg = build_config([5], 2)
    monkeypatch.setattr(settings, "direct_convolution_cap", 4)
    with pytest.raises(CapExceededError):
        subtraction_table(cfg)


def _all_points(cfg):
    return [index_point(a, cfg) for a in range(cfg.size)]


def test_group_axioms_hold_on_every_triple():
    points = _all_points(CFG)
    zero = GroupPoint.zero(CFG)
    for x, y in itertools.product(points, repeat=2):
        assert group_add(x, y) == group_add(y, x)
        assert group_sub(group_add(x, y), y) == x
    for x in points:
        assert group_add(x, zero) == x
        assert group_sub(x, x) == zero
    for x, y, z in itertools.product(points, repeat=3):
        assert group_add(group_add(x, y), z) == group_add(x, group_add(y, z))


def test_metric_triangle_inequality_on_every_triple():
    points = _all_points(CFG)
    rho = {(x.index, y.index): metric_rho_exact(x, y) for x, y in itertools.product(points, repeat=2)}
    for a, b, c in itertools.product(range(CFG.size), repeat=3):
        assert rho[a, c] <= rho[a, b] + rho[b, c]


def test_worked_examples():
    assert group_add(GroupPoint(CFG, (1, 2, 3)), GroupPoint(CFG, (1, 1, 1))) == GroupPoint.zero(CFG)
    assert group_sub(GroupPoint(CFG, (0, 2, 0)), GroupPoint(CFG, (0, 1, 0))) == GroupPoint(CFG, (0, 1, 0))
    assert nat_add(2, 4, CFG) == 0
    assert nat_add(1, 1, CFG) == 0
    assert nat_add(17, 0, CFG) == 17
    assert metric_rho_exact(GroupPoint(CFG, (1, 2, 3)), GroupPoint.zero(CFG)) == Fraction(23, 24)
    assert point_index(GroupPoint(CFG, (1, 2, 3))) == 23
    assert point_index(GroupPoint(CFG, (0, 1, 0))) == 2
