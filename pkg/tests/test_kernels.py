import numpy as np
import pytest

from vilenkin_lab.core.group import build_config, interval_mask
from vilenkin_lab.core.kernels import (
    KernelKind,
    TVariant,
    approximate_identity_report,
    build_kernel,
    dirichlet,
    dirichlet_closed,
    fejer,
    fejer_closed,
    norlund_kernel,
    paley,
    tmean_kernel,
)
from vilenkin_lab.core.weights import parse_weights
from vilenkin_lab.errors import DomainError

from .conftest import BUILTIN_WEIGHTS, max_abs

RADICES = [build_config([2, 3, 4], 3), build_config([2, 3, 2, 2], 4)]


def test_paley_lemma(cfg2322):
    for n in range(cfg2322.resolution + 1):
        M = cfg2322.M(n)
        D = dirichlet(M, cfg2322)
        assert max_abs(D.values, M * interval_mask(cfg2322, 0, n)) <= 1e-12
        assert abs(np.mean(np.abs(D.values)) - 1) <= 1e-12


@pytest.mark.parametrize("cfg", RADICES, ids=lambda c: c.header())
def test_dirichlet_closed_form(cfg):
    for k in range(cfg.resolution):
        for s in range(1, cfg.radix[k]):
            n = s * cfg.M(k)
            assert max_abs(dirichlet_closed(n, cfg).values, dirichlet(n, cfg).values) <= 1e-12
    assert max_abs(dirichlet_closed(cfg.size, cfg).values, paley(cfg, cfg.resolution)) == 0


def test_dirichlet_closed_form_rejects_other_indices(cfg234):
    with pytest.raises(DomainError):
        dirichlet_closed(5, cfg234)


@pytest.mark.parametrize("cfg", RADICES, ids=lambda c: c.header())
def test_fejer_closed_form(cfg):
    for n in range(cfg.resolution + 1):
        M = cfg.M(n)
        closed = fejer_closed(M, cfg)
        assert max_abs(closed.values, fejer(M, cfg).values) <= 1e-9
        assert closed.values[0] == (M + 1) / 2


def test_fejer_closed_form_needs_M_n(cfg234):
    with pytest.raises(DomainError):
        fejer_closed(5, cfg234)


@pytest.mark.parametrize("spec", BUILTIN_WEIGHTS)
def test_kernel_integrals(cfg234, spec):
    q = parse_weights(spec)
    for n in range(1, cfg234.size + 1):
        assert abs(fejer(n, cfg234).integral() - 1) <= 1e-12
        if q.Q(n) <= 0:
            continue
        assert abs(norlund_kernel(q, n, cfg234).integral() - 1) <= 1e-12
        assert abs(tmean_kernel(q, n, cfg234, TVariant.REGULAR).integral() - 1) <= 1e-12


def test_constant_weights_reduce_to_fejer(cfg234):
    q = parse_weights("fejer")
    for n in (1, 7, 24):
        K = fejer(n, cfg234).values
        assert max_abs(norlund_kernel(q, n, cfg234).values, K) <= 1e-12
        assert max_abs(tmean_kernel(q, n, cfg234).values, K) <= 1e-12


def test_identity_form_tmean_integral(cfg234):
    q = parse_weights("valpha:0.5")
    n = 12
    T = tmean_kernel(q, n, cfg234, TVariant.IDENTITY)
    assert abs(T.integral() - (q.Q(n) - q.q(0)) / q.Q(n)) <= 1e-12


def test_weighted_kernels_need_weights(cfg234):
    with pytest.raises(DomainError):
        build_kernel(KernelKind.NORLUND, 4, cfg234)
    with pytest.raises(DomainError):
        norlund_kernel(parse_weights("beta:1"), 1, cfg234)
    with pytest.raises(DomainError):
        dirichlet(0, cfg234)


def test_approximate_identity_for_beta_weights():
    cfg = build_config([2, 3, 2, 4], 4)
    report = approximate_identity_report(KernelKind.NORLUND, cfg, range(4, cfg.size + 1), 2, parse_weights("beta:1"))
    assert report.rows[0].n == 4 and report.rows[-1].n == 48
    assert report.tail_ratio >= 5
    assert report.tail_decreasing
    assert np.isfinite(report.sup_l1)
    assert all(abs(row.integral - 1) <= 1e-12 for row in report.rows)


def test_approximate_identity_for_fejer(cfg234):
    report = approximate_identity_report(KernelKind.FEJER, cfg234, range(1, 25), 1)
    assert report.weights is None
    assert report.sup_l1 >= 1
    assert report.rows[-1].tail < report.rows[0].tail
