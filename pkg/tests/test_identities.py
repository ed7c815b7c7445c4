import json

import numpy as np
import pytest

from vilenkin_lab.config import settings
from vilenkin_lab.core.group import build_config
from vilenkin_lab.core.identities import (
    EQUALITIES,
    IdentityId,
    _bound,
    admissible_params,
    identity_suite,
    kernel_identity_check,
)
from vilenkin_lab.core.weights import parse_weights
from vilenkin_lab.errors import CapExceededError, DomainError
from vilenkin_lab.schemas.reports import IdentityKind, IdentityReport

RADICES = [build_config([2, 3, 4], 3), build_config([2, 3, 2, 2], 4), build_config([2], 6)]

EXACT = [
    IdentityId.DN_SHIFT,
    IdentityId.DN_REFLECT,
    IdentityId.DN_SCALED,
    IdentityId.DN_EXPANSION,
    IdentityId.KN_SCALED,
    IdentityId.KN_DECOMP,
]


@pytest.mark.parametrize("cfg", RADICES, ids=lambda c: c.header())
@pytest.mark.parametrize("identity", EXACT, ids=lambda i: i.value)
def test_exact_kernel_identities(cfg, identity):
    reports = identity_suite(identity, cfg)
    assert reports
    worst = max(reports, key=lambda r: r.residual)
    assert worst.residual <= 1e-9, worst.params_label()
    assert all(r.kind == IdentityKind.EQUALITY and r.passed for r in reports)


@pytest.mark.parametrize("cfg", RADICES, ids=lambda c: c.header())
@pytest.mark.parametrize("spec", ["fejer", "valpha:0.5", "beta:1"])
@pytest.mark.parametrize("identity", [IdentityId.FN_REFLECT, IdentityId.FN_REFLECT_T], ids=lambda i: i.value)
def test_reflection_of_weighted_kernels(cfg, spec, identity):
    reports = identity_suite(identity, cfg, parse_weights(spec))
    assert reports
    assert max(r.residual for r in reports) <= 1e-9


@pytest.mark.parametrize(
    "identity",
    [
        IdentityId.KN_BOUND,
        IdentityId.KN_POINT_BOUND,
        IdentityId.KN_SUPPORT,
        IdentityId.DN_LOCAL_BOUND,
        IdentityId.DN_INTERVAL_BOUND,
        IdentityId.FN_BOUND,
        IdentityId.FN_TAIL_BOUND,
    ],
    ids=lambda i: i.value,
)
def test_bounds_have_finite_constants(cfg234, identity):
    reports = identity_suite(identity, cfg234, parse_weights("valpha:0.5"))
    assert reports
    assert all(r.kind == IdentityKind.BOUND for r in reports)
    assert all(r.residual is not None and r.passed for r in reports)


def test_single_check_and_parameter_errors(cfg234):
    report = kernel_identity_check("DN_SHIFT", {"n": 1, "j": 3}, cfg234)
    assert report.passed
    with pytest.raises(DomainError):
        kernel_identity_check("DN_SHIFT", {"n": 1, "j": 99}, cfg234)
    with pytest.raises(DomainError):
        kernel_identity_check("DN_SHIFT", {"n": 1}, cfg234)
    with pytest.raises(DomainError):
        kernel_identity_check("NOT_AN_IDENTITY", {}, cfg234)


def test_admissible_params_skip_zero_prefix_sums(cfg234):
    q = parse_weights("beta:1")
    params = list(admissible_params(IdentityId.FN_BOUND, cfg234, q))
    assert {"n": 1} not in params
    assert {"n": 2} in params


def test_every_identity_is_classified():
    for identity in IdentityId:
        assert (identity in EQUALITIES) or identity.value.endswith(("BOUND", "SUPPORT"))


def test_suite_respects_exhaustive_cap(monkeypatch):
    monkeypatch.setattr(settings, "exhaustive_cap", 8)
    with pytest.raises(CapExceededError):
        identity_suite(IdentityId.DN_SHIFT, build_config([2, 3, 4], 3))


def test_unbounded_constant_serializes_as_null():
    report = _bound(IdentityId.KN_BOUND, {"n": 1}, [1.0, 2.0], [1.0, 0.0])
    assert report.residual is None
    assert not report.passed
    assert json.loads(report.model_dump_json())["residual"] is None
    assert _bound(IdentityId.KN_BOUND, {"n": 1}, [1.0, 0.0], [0.5, 0.0]).residual == 2.0


def test_report_rejects_infinite_residual():
    with pytest.raises(ValueError):
        IdentityReport(identity="KN_BOUND", kind=IdentityKind.BOUND, params={}, residual=float("inf"), tolerance=1.0, passed=False)
    with pytest.raises(ValueError):
        IdentityReport(identity="KN_BOUND", kind=IdentityKind.BOUND, params={}, residual=None, tolerance=1.0, passed=True)


def test_bound_constant_with_zero_rhs_and_zero_lhs():
    report = _bound(IdentityId.KN_BOUND, {"n": 1}, np.zeros(3), np.zeros(3))
    assert report.residual == 0.0
    assert report.passed
