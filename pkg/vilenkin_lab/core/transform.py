import logging
from dataclasses import dataclass

import numpy as np

from vilenkin_lab.config import settings
from vilenkin_lab.core.characters import character_rows, dft_factor, phase_table, root_order, unit_roots
from vilenkin_lab.core.function_space import StepFunction
from vilenkin_lab.core.group import GroupConfig, _same_config
from vilenkin_lab.errors import CapExceededError, DomainError

logger = logging.getLogger(__name__)

_ORACLE_CHUNK = 256


@dataclass(frozen=True, eq=False)
class SpectrumTable:
    """Fourier coefficients f̂(0 .. M_N − 1)."""

    cfg: GroupConfig
    coefficients: np.ndarray

    def __post_init__(self):
        coefficients = np.array(self.coefficients, dtype=complex).reshape(-1)
        if coefficients.shape != (self.cfg.size,):
            raise DomainError(f"expected {self.cfg.size} coefficients, got {coefficients.size}")
        coefficients.flags.writeable = False
        object.__setattr__(self, "coefficients", coefficients)

    def __getitem__(self, n):
        return self.coefficients[n]

    def energy(self) -> float:
        return float(np.sum(np.abs(self.coefficients) ** 2))


def naive_coefficients(f: StepFunction) -> SpectrumTable:
    """O(M_N²) oracle f̂(n) = (1/M_N) Σ_x f(x)·conj(ψ_n(x))."""
    cfg = f.cfg
    phases = phase_table(cfg)
    L = root_order(cfg)
    roots = unit_roots(L)
    out = np.empty(cfg.size, dtype=complex)
    for start in range(0, cfg.size, _ORACLE_CHUNK):
        block = phases[start:start + _ORACLE_CHUNK].astype(np.int64)
        out[start:start + _ORACLE_CHUNK] = roots[(-block) % L] @ f.values
    return SpectrumTable(cfg, out / cfg.size)


def _stages(values: np.ndarray, cfg: GroupConfig, inverse: bool) -> np.ndarray:
    # axis N-1-k of the reshaped array carries digit k, so the C-order index is Σ x_k M_k
    a = values.reshape(tuple(reversed(cfg.radix)))
    for k, m in enumerate(cfg.radix):
        axis = cfg.resolution - 1 - k
        W = dft_factor(m) if inverse else dft_factor(m).conj()
        a = np.moveaxis(np.tensordot(W, a, axes=([1], [axis])), 0, axis)
    return np.ascontiguousarray(a).reshape(-1)


def fvt_forward(f: StepFunction) -> SpectrumTable:
    """Fast Vilenkin transform, one m_k-point stage per coordinate."""
    return SpectrumTable(f.cfg, _stages(f.values, f.cfg, inverse=False) / f.cfg.size)


def fvt_inverse(spec: SpectrumTable) -> StepFunction:
    return StepFunction(spec.cfg, _stages(spec.coefficients, spec.cfg, inverse=True))


def _check_n(n: int, cfg: GroupConfig, lower: int = 1) -> None:
    if not lower <= n <= cfg.size:
        raise DomainError(f"index {n} outside [{lower}, {cfg.size}]")


def apply_multiplier(f: StepFunction, weights: np.ndarray) -> StepFunction:
    """Σ_j f̂(j)·w_j·ψ_j."""
    weights = np.asarray(weights)
    if weights.shape != (f.cfg.size,):
        raise DomainError(f"multiplier must have {f.cfg.size} entries, got {weights.shape}")
    spec = fvt_forward(f)
    return fvt_inverse(SpectrumTable(f.cfg, spec.coefficients * weights))


def partial_sum(f: StepFunction, n: int) -> StepFunction:
    """S_n f = Σ_{k<n} f̂(k) ψ_k."""
    _check_n(n, f.cfg)
    w = np.zeros(f.cfg.size)
    w[:n] = 1.0
    return apply_multiplier(f, w)


def partial_sums(f: StepFunction, n: int) -> np.ndarray:
    """
    Stack S_1 f .. S_n f as an n × M_N array.

    Built as a cumulative sum of f̂(k)ψ_k rows; memory grows with n·M_N so
    the size is capped by direct_convolution_cap.
    """
    _check_n(n, f.cfg)
    if f.cfg.size > settings.direct_convolution_cap:
        raise CapExceededError(
            f"M_N={f.cfg.size} exceeds direct_convolution_cap={settings.direct_convolution_cap}"
        )
    coefficients = fvt_forward(f).coefficients[:n]
    rows = character_rows(f.cfg, n) * coefficients[:, None]
    return np.cumsum(rows, axis=0)


def fast_convolve(f: StepFunction, g: StepFunction) -> StepFunction:
    _same_config(f.cfg, g.cfg)
    product = fvt_forward(f).coefficients * fvt_forward(g).coefficients
    return fvt_inverse(SpectrumTable(f.cfg, product))


def parseval_gap(f: StepFunction) -> float:
    """Relative gap between (1/M_N)Σ|f|² and Σ|f̂|²."""
    energy = float(np.mean(np.abs(f.values) ** 2))
    gap = abs(energy - fvt_forward(f).energy())
    return gap / max(energy, 1e-300)
