import logging
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from vilenkin_lab.core.group import (
    CylinderRegion,
    GroupConfig,
    GroupPoint,
    _same_config,
    index_point,
    interval_mask,
    point_index,
    sub_indices,
    subtraction_table,
)
from vilenkin_lab.errors import DomainError
from vilenkin_lab.schemas.reports import NormReport

logger = logging.getLogger(__name__)

Scalar = Union[int, float, complex]


@dataclass(frozen=True, eq=False)
class StepFunction:
    """A complex function constant on every I_N coset, stored by coset index."""

    cfg: GroupConfig
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=complex).reshape(-1)
        if values.shape != (self.cfg.size,):
            raise DomainError(f"expected {self.cfg.size} values, got {values.size}")
        if not np.all(np.isfinite(values)):
            raise DomainError("step function values must be finite")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, cfg: GroupConfig, c: Scalar) -> "StepFunction":
        return cls(cfg, np.full(cfg.size, c, dtype=complex))

    @classmethod
    def indicator(cls, region: CylinderRegion) -> "StepFunction":
        return cls(region.cfg, region.mask().astype(complex))

    @classmethod
    def interval_indicator(cls, x: GroupPoint, n: int) -> "StepFunction":
        return cls(x.cfg, interval_mask(x.cfg, point_index(x), n).astype(complex))

    def __call__(self, x: GroupPoint) -> complex:
        _same_config(self.cfg, x.cfg)
        return complex(self.values[point_index(x)])

    def integral(self) -> complex:
        return complex(self.values.mean())

    def translate(self, h: int) -> "StepFunction":
        """f(· − h) for the coset index h."""
        return StepFunction(self.cfg, self.values[sub_indices(self.cfg, np.arange(self.cfg.size), h)])

    def conj(self) -> "StepFunction":
        return StepFunction(self.cfg, self.values.conj())

    def __abs__(self) -> "StepFunction":
        return StepFunction(self.cfg, np.abs(self.values))

    def __neg__(self) -> "StepFunction":
        return StepFunction(self.cfg, -self.values)

    def _other(self, other) -> np.ndarray:
        if isinstance(other, StepFunction):
            _same_config(self.cfg, other.cfg)
            return other.values
        return other

    def __add__(self, other) -> "StepFunction":
        return StepFunction(self.cfg, self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other) -> "StepFunction":
        return StepFunction(self.cfg, self.values - self._other(other))

    def __mul__(self, other) -> "StepFunction":
        return StepFunction(self.cfg, self.values * self._other(other))

    __rmul__ = __mul__


def discretize(sampler: Callable[[GroupPoint], Scalar], cfg: GroupConfig) -> StepFunction:
    """Sample at the canonical representative of every I_N coset."""
    values = np.empty(cfg.size, dtype=complex)
    for idx in range(cfg.size):
        v = complex(sampler(index_point(idx, cfg)))
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise DomainError(f"non-finite sample {v} at coset {idx}")
        values[idx] = v
    return StepFunction(cfg, values)


def _check_p(p: float, allow_inf: bool = True) -> float:
    p = float(p)
    if math.isnan(p) or p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    if math.isinf(p) and not allow_inf:
        raise DomainError("p must be finite here")
    return p


def _lp(values: np.ndarray, p: float) -> float:
    a = np.abs(values)
    if math.isinf(p):
        return float(a.max(initial=0.0))
    if p == 1:
        return float(a.mean())
    if p == 2:
        return float(np.sqrt(np.mean(a * a)))
    return float(np.mean(a**p) ** (1 / p))


def lp_norm(f: StepFunction, p: float) -> NormReport:
    p = _check_p(p)
    return NormReport(p=p, value=_lp(f.values, p))


def level_set_measure(f: StepFunction, y: float, strict: bool = True) -> float:
    """μ(|f| > y), or μ(|f| ≥ y) when strict is False."""
    a = np.abs(f.values)
    return float(np.mean(a > y) if strict else np.mean(a >= y))


def weak_lp(f: StepFunction, p: float) -> NormReport:
    """
    sup_y y·μ(|f| > y)^{1/p} over the finite set of levels.

    The sup is approached from below each level |v|, where it equals
    |v|·μ(|f| ≥ |v|)^{1/p}; the maximum of that closed form is returned.
    """
    p = _check_p(p, allow_inf=False)
    a = np.abs(f.values)
    levels = np.unique(a[a > 0])
    if levels.size == 0:
        return NormReport(p=p, value=0.0)
    # μ(|f| ≥ level) via the sorted magnitudes
    sorted_a = np.sort(a)
    at_least = (a.size - np.searchsorted(sorted_a, levels, side="left")) / a.size
    return NormReport(p=p, value=float(np.max(levels * at_least ** (1 / p))))


def convolve(f: StepFunction, g: StepFunction, method: str = "direct") -> StepFunction:
    """(f∗g)(x) = ∫ f(x − t) g(t) dμ(t)."""
    _same_config(f.cfg, g.cfg)
    if method == "fast":
        from vilenkin_lab.core.transform import fast_convolve

        return fast_convolve(f, g)
    if method != "direct":
        raise DomainError(f"unknown convolution method {method!r}")
    table = subtraction_table(f.cfg)
    return StepFunction(f.cfg, f.values[table] @ g.values / f.cfg.size)


def modulus_of_continuity(f: StepFunction, p: float, n: int) -> float:
    """ω_p(1/M_n, f): max over h ∈ I_n of ‖f(· − h) − f‖_p."""
    p = _check_p(p)
    cfg = f.cfg
    if not 0 <= n <= cfg.resolution:
        raise DomainError(f"modulus level {n} outside [0, {cfg.resolution}]")
    idx = np.arange(cfg.size)
    best = 0.0
    for h in range(0, cfg.size, cfg.subgroup_sizes[n]):
        if h == 0:
            continue
        shifted = f.values[sub_indices(cfg, idx, h)]
        best = max(best, _lp(shifted - f.values, p))
    return best


def minkowski_check(table: np.ndarray, cfg: GroupConfig, p: float):
    """
    Both sides of Minkowski's integral inequality for F[x, t].

    Returns:
        (‖∫F(·, t)dt‖_p, ∫‖F(·, t)‖_p dt)
    """
    p = _check_p(p)
    table = np.asarray(table, dtype=complex)
    if table.shape != (cfg.size, cfg.size):
        raise DomainError(f"expected a {cfg.size}×{cfg.size} table, got {table.shape}")
    lhs = _lp(table.mean(axis=1), p)
    rhs = float(np.mean([_lp(table[:, t], p) for t in range(cfg.size)]))
    return lhs, rhs
