import logging
from enum import Enum
from typing import Dict, List, Optional, Sequence

import numpy as np

from vilenkin_lab.core.function_space import StepFunction, convolve
from vilenkin_lab.core.kernels import (
    TVariant,
    fejer,
    fejer_multiplier,
    kernel_from_multiplier,
    norlund_kernel,
    norlund_multiplier,
    tmean_kernel,
    tmean_multiplier,
)
from vilenkin_lab.core.transform import SpectrumTable, apply_multiplier, fvt_forward, fvt_inverse, partial_sums
from vilenkin_lab.core.weights import WeightSequence, cesaro_binomial, make_weights
from vilenkin_lab.errors import DomainError

logger = logging.getLogger(__name__)


class MeanFamily(str, Enum):
    PARTIAL_SUM = "partial_sum"
    FEJER = "fejer"
    CESARO = "cesaro"
    NORLUND = "norlund"
    TMEAN = "tmean"
    NORLUND_LOG = "norlund_log"
    RIESZ_LOG = "riesz_log"


class MeanMethod(str, Enum):
    SPECTRAL = "spectral"
    DIRECT = "direct"
    KERNEL = "kernel"
    ABEL = "abel"


WEIGHTED_FAMILIES = (MeanFamily.CESARO, MeanFamily.NORLUND, MeanFamily.TMEAN)


class CesaroNormalization(str, Enum):
    """REGULAR divides by A_{n-1}^α = Q_n; LITERAL divides by A_n^α."""

    REGULAR = "regular"
    LITERAL = "literal"


def log_numbers(n: int) -> np.ndarray:
    """l_0 .. l_n with l_k = Σ_{i=1}^{k} 1/i."""
    out = np.zeros(n + 1)
    np.cumsum(1.0 / np.arange(1, n + 1), out=out[1:])
    return out


def _check_n(n: int, size: int) -> None:
    if not 1 <= n <= size:
        raise DomainError(f"mean index {n} outside [1, {size}]")


def _weights_for(family: MeanFamily, q: Optional[WeightSequence], alpha: Optional[float]) -> Optional[WeightSequence]:
    if family == MeanFamily.CESARO:
        if alpha is None:
            raise DomainError("cesaro means need α")
        return make_weights("cesaro", alpha)
    if family in (MeanFamily.NORLUND, MeanFamily.TMEAN) and q is None:
        raise DomainError(f"{family.value} means need weights")
    return q


def _literal_scale(alpha: float, n: int, Q_n: float) -> float:
    return Q_n / cesaro_binomial(n, alpha)[n]


def mean_multiplier(
    family,
    n: int,
    size: int,
    q: Optional[WeightSequence] = None,
    alpha: Optional[float] = None,
    variant: TVariant = TVariant.REGULAR,
    normalization: CesaroNormalization = CesaroNormalization.REGULAR,
) -> np.ndarray:
    """Coefficient of ψ_j in the kernel of the n-th mean, j < size."""
    family = MeanFamily(family)
    _check_n(n, size)
    q = _weights_for(family, q, alpha)
    if family == MeanFamily.PARTIAL_SUM:
        w = np.zeros(size)
        w[:n] = 1.0
        return w
    if family == MeanFamily.FEJER:
        return fejer_multiplier(n, size)
    if family == MeanFamily.NORLUND:
        return norlund_multiplier(q, n, size)
    if family == MeanFamily.TMEAN:
        return tmean_multiplier(q, n, size, variant)
    if family == MeanFamily.CESARO:
        w = norlund_multiplier(q, n, size)
        if CesaroNormalization(normalization) == CesaroNormalization.LITERAL:
            w = w * _literal_scale(alpha, n, q.Q(n))
        return w
    l = log_numbers(n)
    w = np.zeros(size)
    j = np.arange(n)
    if family == MeanFamily.NORLUND_LOG:
        w[:n] = l[n - j - 1] / l[n]
    else:
        w[:n] = (l[n] - l[j]) / l[n]
    return w


def partial_sum_weights(
    family,
    n: int,
    q: Optional[WeightSequence] = None,
    alpha: Optional[float] = None,
    variant: TVariant = TVariant.REGULAR,
    normalization: CesaroNormalization = CesaroNormalization.REGULAR,
) -> np.ndarray:
    """Weights on S_1 f .. S_n f in the displayed partial-sum average."""
    family = MeanFamily(family)
    q = _weights_for(family, q, alpha)
    if family == MeanFamily.PARTIAL_SUM:
        w = np.zeros(n)
        w[-1] = 1.0
        return w
    if family == MeanFamily.FEJER:
        return np.full(n, 1.0 / n)
    if family in (MeanFamily.NORLUND, MeanFamily.CESARO):
        values = q.values(n)
        Q_n = values.sum()
        if Q_n <= 0:
            raise DomainError(f"Q_{n} = 0 for {q.label} weights")
        w = values[::-1] / Q_n
        if family == MeanFamily.CESARO and CesaroNormalization(normalization) == CesaroNormalization.LITERAL:
            w = w * _literal_scale(alpha, n, Q_n)
        return w
    if family == MeanFamily.TMEAN:
        values = q.values(n)
        Q_n = values.sum()
        if Q_n <= 0:
            raise DomainError(f"Q_{n} = 0 for {q.label} weights")
        if TVariant(variant) == TVariant.IDENTITY:
            # q_k on S_k for k < n, with S_0 = 0
            return np.append(values[1:], 0.0) / Q_n
        return values / Q_n
    k = np.arange(1, n + 1)
    l_n = log_numbers(n)[n]
    if family == MeanFamily.NORLUND_LOG:
        # S_k/(n - k) for k < n; S_0 = 0 and S_n carries no weight
        w = np.zeros(n)
        w[:-1] = 1.0 / (n - k[:-1])
        return w / l_n
    return 1.0 / k / l_n


def _abel_mean(q: WeightSequence, n: int, f: StepFunction) -> StepFunction:
    """t_n f = (1/Q_n)(Σ_{j=1}^{n-1}(q_{n-j} − q_{n-j-1}) j σ_j f + q_0 n σ_n f)."""
    values = q.values(n)
    Q_n = values.sum()
    if Q_n <= 0:
        raise DomainError(f"Q_{n} = 0 for {q.label} weights")
    out = values[0] * n * fejer_mean(n, f).values
    for j in range(1, n):
        out = out + (values[n - j] - values[n - j - 1]) * j * fejer_mean(j, f).values
    return StepFunction(f.cfg, out / Q_n)


def _kernel_values(family, n, cfg, q, alpha, variant, normalization):
    if family == MeanFamily.FEJER:
        return fejer(n, cfg).function
    if family == MeanFamily.NORLUND:
        return norlund_kernel(q, n, cfg).function
    if family == MeanFamily.TMEAN:
        return tmean_kernel(q, n, cfg, variant).function
    return kernel_from_multiplier(
        cfg, mean_multiplier(family, n, cfg.size, q, alpha, variant, normalization)
    )


def evaluate_mean(
    family,
    n: int,
    f: StepFunction,
    q: Optional[WeightSequence] = None,
    alpha: Optional[float] = None,
    variant: TVariant = TVariant.REGULAR,
    normalization: CesaroNormalization = CesaroNormalization.REGULAR,
    method: MeanMethod = MeanMethod.SPECTRAL,
) -> StepFunction:
    """
    The n-th mean of f in the given family.

    Args:
        family: which summability mean
        n: index, 1 <= n <= M_N
        f: the function
        q: weights for Nörlund and T means
        alpha: order of the Cesàro mean
        variant: T mean variant
        normalization: Cesàro normalization
        method: spectral multiplier, partial-sum average, kernel
            convolution, or the Abel form (Nörlund type means only)

    Raises:
        DomainError: n out of range, missing weights, or Q_n = 0
    """
    family = MeanFamily(family)
    method = MeanMethod(method)
    cfg = f.cfg
    _check_n(n, cfg.size)
    if method == MeanMethod.SPECTRAL:
        return apply_multiplier(f, mean_multiplier(family, n, cfg.size, q, alpha, variant, normalization))
    if method == MeanMethod.DIRECT:
        w = partial_sum_weights(family, n, q, alpha, variant, normalization)
        return StepFunction(cfg, w @ partial_sums(f, n))
    if method == MeanMethod.KERNEL:
        weights = _weights_for(family, q, alpha)
        kernel = _kernel_values(family, n, cfg, weights, alpha, variant, normalization)
        return convolve(f, kernel)
    if family == MeanFamily.FEJER:
        return _abel_mean(make_weights("fejer"), n, f)
    if family == MeanFamily.NORLUND:
        return _abel_mean(_weights_for(family, q, alpha), n, f)
    if family == MeanFamily.CESARO and CesaroNormalization(normalization) == CesaroNormalization.REGULAR:
        return _abel_mean(_weights_for(family, q, alpha), n, f)
    raise DomainError(f"the Abel form is not available for {family.value} means")


def norlund_mean(q: WeightSequence, n: int, f: StepFunction, method: MeanMethod = MeanMethod.SPECTRAL) -> StepFunction:
    """t_n f = (1/Q_n) Σ_{k=1}^{n} q_{n-k} S_k f."""
    return evaluate_mean(MeanFamily.NORLUND, n, f, q=q, method=method)


def t_mean(
    q: WeightSequence,
    n: int,
    f: StepFunction,
    variant: TVariant = TVariant.REGULAR,
    method: MeanMethod = MeanMethod.SPECTRAL,
) -> StepFunction:
    return evaluate_mean(MeanFamily.TMEAN, n, f, q=q, variant=variant, method=method)


def fejer_mean(n: int, f: StepFunction, method: MeanMethod = MeanMethod.SPECTRAL) -> StepFunction:
    return evaluate_mean(MeanFamily.FEJER, n, f, method=method)


def cesaro_mean(
    n: int,
    alpha: float,
    f: StepFunction,
    normalization: CesaroNormalization = CesaroNormalization.REGULAR,
    method: MeanMethod = MeanMethod.SPECTRAL,
) -> StepFunction:
    return evaluate_mean(MeanFamily.CESARO, n, f, alpha=alpha, normalization=normalization, method=method)


def norlund_log(n: int, f: StepFunction, method: MeanMethod = MeanMethod.SPECTRAL) -> StepFunction:
    """L_n f = (1/l_n) Σ_{k=0}^{n-1} S_k f/(n − k)."""
    return evaluate_mean(MeanFamily.NORLUND_LOG, n, f, method=method)


def riesz_log(n: int, f: StepFunction, method: MeanMethod = MeanMethod.SPECTRAL) -> StepFunction:
    """R_n f = (1/l_n) Σ_{k=1}^{n} S_k f/k."""
    return evaluate_mean(MeanFamily.RIESZ_LOG, n, f, method=method)


def truncated_maximal(
    family,
    f: StepFunction,
    n_max: int,
    q: Optional[WeightSequence] = None,
    alpha: Optional[float] = None,
    variant: TVariant = TVariant.REGULAR,
    subsequence: bool = False,
) -> StepFunction:
    """
    Pointwise max of |mean_n f| over 1 <= n <= n_max, or over n = M_k <= n_max
    when subsequence is set. Indices with Q_n = 0 are skipped.
    """
    family = MeanFamily(family)
    _check_n(n_max, f.cfg.size)
    if subsequence:
        grid = [M for M in f.cfg.subgroup_sizes if M <= n_max]
    else:
        grid = range(1, n_max + 1)
    weights = _weights_for(family, q, alpha) if family in WEIGHTED_FAMILIES else None
    if weights is not None and not weights.q0_positive:
        grid = [n for n in grid if weights.Q(n) > 0]
    spec = fvt_forward(f)
    best = np.zeros(f.cfg.size)
    for n in grid:
        w = mean_multiplier(family, n, f.cfg.size, q, alpha, variant)
        values = fvt_inverse(SpectrumTable(f.cfg, spec.coefficients * w)).values
        best = np.maximum(best, np.abs(values))
    return StepFunction(f.cfg, best)


def weak_type_ratio(maximal: StepFunction, f: StepFunction, y_grid: Sequence[float]) -> List[Dict[str, float]]:
    """y·μ(Mf > y)/‖f‖_1 for each y in the grid."""
    l1 = float(np.mean(np.abs(f.values)))
    if l1 == 0:
        raise DomainError("weak-type ratio needs ‖f‖_1 > 0")
    a = np.abs(maximal.values)
    return [{"y": float(y), "ratio": float(y * np.mean(a > y) / l1)} for y in y_grid]


def eventual_error_bound(q: WeightSequence, n: int, f: StepFunction, n0: int) -> float:
    """
    (Σ_{k=1}^{n0-1} q_{n-k}/Q_n)·max_{1<=k<n0} ‖S_k f − f‖_∞ for f whose
    spectrum vanishes from n0 on.
    """
    coefficients = fvt_forward(f).coefficients
    scale = max(1.0, float(np.abs(coefficients).max()))
    if not 1 <= n0 <= f.cfg.size or np.any(np.abs(coefficients[n0:]) > 1e-12 * scale):
        raise DomainError(f"f has spectrum at or above n0={n0}")
    if n < n0:
        raise DomainError(f"n={n} must be >= n0={n0}")
    if n0 == 1:
        return 0.0
    values = q.values(n)
    Q_n = values.sum()
    if Q_n <= 0:
        raise DomainError(f"Q_{n} = 0 for {q.label} weights")
    weight = sum(values[n - k] for k in range(1, n0)) / Q_n
    S = partial_sums(f, n0 - 1)
    worst = float(np.max(np.abs(S - f.values[None, :])))
    return float(weight * worst)


def abel_prefix_identity(q: WeightSequence, n: int) -> float:
    """Relative residual of Q_n = Σ_{j=1}^{n-1}(q_{n-j} − q_{n-j-1}) j + q_0 n."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    values = q.values(n)
    Q_n = values.sum()
    j = np.arange(1, n)
    rhs = np.sum((values[n - j] - values[n - j - 1]) * j) + values[0] * n
    return float(abs(Q_n - rhs) / max(1.0, abs(Q_n)))


def abel_tail_identity(q: WeightSequence, n: int, start: int) -> float:
    """
    Relative residual of Σ_{j=start}^{n} q_{n-j}
    = Σ_{j=start}^{n-1}(q_{n-j} − q_{n-j-1}) j + q_0 n − (start − 1) q_{n-start}.
    """
    if not 1 <= start <= n:
        raise DomainError(f"need 1 <= start <= n, got start={start}, n={n}")
    values = q.values(n)
    lhs = values[: n - start + 1].sum()
    j = np.arange(start, n)
    rhs = np.sum((values[n - j] - values[n - j - 1]) * j) + values[0] * n - (start - 1) * values[n - start]
    return float(abs(lhs - rhs) / max(1.0, abs(lhs)))
