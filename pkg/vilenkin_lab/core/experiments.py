import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from vilenkin_lab.config import settings
from vilenkin_lab.core.characters import character_values
from vilenkin_lab.core.function_space import StepFunction, _lp, modulus_of_continuity
from vilenkin_lab.core.group import GroupConfig, GroupPoint, interval_mask, point_index, sub_indices
from vilenkin_lab.core.kernels import TVariant, kernel_from_multiplier, tmean_multiplier
from vilenkin_lab.core.means import MeanFamily, evaluate_mean, norlund_mean
from vilenkin_lab.core.transform import partial_sum
from vilenkin_lab.core.weights import WeightSequence, make_weights
from vilenkin_lab.errors import DomainError, FitError
from vilenkin_lab.schemas.reports import (
    ConvergenceCurve,
    MoriczSiddiqiReport,
    MoriczSiddiqiRow,
    RateReport,
    RiemannLebesgueRow,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PointDiagnostic:
    """Traces at one point; column n is defined for n <= N."""

    x: GroupPoint
    target: complex
    lebesgue: Tuple[complex, ...] = ()
    partial_sums: Tuple[complex, ...] = ()
    vilenkin_lebesgue: Tuple[float, ...] = ()
    mean_errors: Tuple[float, ...] = ()

    def records(self) -> List[Dict[str, Any]]:
        length = max(len(self.lebesgue), len(self.vilenkin_lebesgue))
        rows = []
        for n in range(length):
            row: Dict[str, Any] = {"n": n}
            if self.lebesgue:
                row["lebesgue_re"] = self.lebesgue[n].real
                row["lebesgue_im"] = self.lebesgue[n].imag
                row["partial_sum_re"] = self.partial_sums[n].real
                row["partial_sum_im"] = self.partial_sums[n].imag
            if self.vilenkin_lebesgue:
                row["W"] = self.vilenkin_lebesgue[n]
                row["mean_error"] = self.mean_errors[n]
            rows.append(row)
        return rows


def subsequence_grid(cfg: GroupConfig) -> List[int]:
    return list(cfg.subgroup_sizes)


def _check_grid(grid: Sequence[int], cfg: GroupConfig) -> List[int]:
    grid = [int(n) for n in grid]
    if not grid:
        raise DomainError("empty n grid")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("n grid must be strictly increasing")
    if grid[0] < 1 or grid[-1] > cfg.size:
        raise DomainError(f"n grid must lie in [1, {cfg.size}]")
    return grid


def norm_convergence(
    family,
    f: StepFunction,
    p: float,
    n_grid: Sequence[int],
    q: Optional[WeightSequence] = None,
    alpha: Optional[float] = None,
    variant: TVariant = TVariant.REGULAR,
    fixture_id: str = "f",
) -> ConvergenceCurve:
    """‖mean_n f − f‖_p over the grid, evaluated on a thread pool in grid order."""
    family = MeanFamily(family)
    grid = _check_grid(n_grid, f.cfg)
    p = float(p)

    def error(n: int) -> float:
        mean = evaluate_mean(family, n, f, q=q, alpha=alpha, variant=variant)
        value = _lp(mean.values - f.values, p)
        logger.debug("%s n=%d error=%.6g", family.value, n, value)
        return value

    with ThreadPoolExecutor(max_workers=settings.max_workers) as executor:
        errors = list(executor.map(error, grid))

    weights = None
    if family == MeanFamily.CESARO:
        weights = f"cesaro:{alpha:g}"
    elif q is not None:
        weights = q.label
    subsequence = set(grid) <= set(f.cfg.subgroup_sizes)
    curve = ConvergenceCurve(
        family=family.value,
        weights=weights,
        p=p,
        fixture=fixture_id,
        grid=grid,
        errors=errors,
        subsequence=subsequence,
    )
    logger.info("norm convergence %s (%s) on %s: final error %.3g", family.value, weights, fixture_id, errors[-1])
    return curve


def lebesgue_point_trace(f: StepFunction, x: GroupPoint, n_max: int) -> PointDiagnostic:
    """M_n ∫_{I_n(x)} f next to S_{M_n} f(x) for n <= n_max."""
    cfg = f.cfg
    if not 0 <= n_max <= cfg.resolution:
        raise DomainError(f"n_max {n_max} outside [0, {cfg.resolution}]")
    xi = point_index(x, cfg)
    lebesgue, sums = [], []
    for n in range(n_max + 1):
        mask = interval_mask(cfg, xi, n)
        lebesgue.append(complex(cfg.M(n) * f.values[mask].sum() / cfg.size))
        sums.append(complex(partial_sum(f, cfg.M(n)).values[xi]))
    return PointDiagnostic(x=x, target=f(x), lebesgue=tuple(lebesgue), partial_sums=tuple(sums))


def vilenkin_lebesgue_value(f: StepFunction, x: GroupPoint, A: int) -> float:
    """W_A f(x) = Σ_{s<A} M_s Σ_{r=1}^{m_s-1} ∫_{I_A(x − r e_s)} |f − f(x)|."""
    cfg = f.cfg
    xi = point_index(x, cfg)
    deviation = np.abs(f.values - f.values[xi])
    total = 0.0
    for s in range(A):
        for r in range(1, cfg.radix[s]):
            center = int(sub_indices(cfg, xi, r * cfg.M(s)))
            total += cfg.M(s) * deviation[interval_mask(cfg, center, A)].sum() / cfg.size
    return float(total)


def vilenkin_lebesgue_trace(
    f: StepFunction, x: GroupPoint, A_max: int, q: Optional[WeightSequence] = None
) -> PointDiagnostic:
    """W_A f(x) paired with |t_{M_A} f(x) − f(x)| for A <= A_max."""
    cfg = f.cfg
    if not 0 <= A_max <= cfg.resolution:
        raise DomainError(f"A_max {A_max} outside [0, {cfg.resolution}]")
    q = q or make_weights("fejer")
    xi = point_index(x, cfg)
    target = f(x)
    W, errors = [], []
    for A in range(A_max + 1):
        W.append(vilenkin_lebesgue_value(f, x, A))
        size = cfg.M(A)
        if q.Q(size) > 0:
            errors.append(abs(complex(norlund_mean(q, size, f).values[xi]) - target))
        else:
            errors.append(math.nan)
    return PointDiagnostic(x=x, target=target, vilenkin_lebesgue=tuple(W), mean_errors=tuple(errors))


def lacunary_fixture(cfg: GroupConfig, alpha: float, tail_adjusted: bool = True) -> StepFunction:
    """
    Σ_k c_k ψ_{M_k} over k < N.

    With tail_adjusted, c_k² = M_k^{-2α} − M_{k+1}^{-2α} and c_{N-1} = M_{N-1}^{-α},
    so Σ_{k>=n} c_k² = M_n^{-2α}; otherwise c_k = M_k^{-α}.
    """
    if alpha <= 0:
        raise DomainError(f"Lipschitz order must be positive, got {alpha}")
    N = cfg.resolution
    values = np.zeros(cfg.size, dtype=complex)
    for k in range(N):
        M_k = float(cfg.M(k))
        if not tail_adjusted:
            c = M_k**-alpha
        elif k < N - 1:
            c = math.sqrt(M_k ** (-2 * alpha) - float(cfg.M(k + 1)) ** (-2 * alpha))
        else:
            c = M_k**-alpha
        values += c * character_values(cfg, cfg.M(k))
    return StepFunction(cfg, values)


def fit_exponent(grid: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of log(values) against log(grid)."""
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    usable = values > 0
    if usable.sum() < 3:
        raise FitError(f"rate fit needs 3 positive points, got {int(usable.sum())}")
    slope, _ = np.polyfit(np.log(grid[usable]), np.log(values[usable]), 1)
    return float(slope)


def lipschitz_rate_table(
    alpha: float,
    p: float,
    cfg: GroupConfig,
    family=MeanFamily.FEJER,
    q: Optional[WeightSequence] = None,
    f: Optional[StepFunction] = None,
    tail_adjusted: bool = True,
) -> RateReport:
    """
    Rate of ‖mean_{M_n} f − f‖_p and of ω_p(1/M_n, f) over n = 1 .. N−1.

    Raises:
        FitError: fewer than 3 usable grid points for a non-exact fixture
    """
    family = MeanFamily(family)
    f = f if f is not None else lacunary_fixture(cfg, alpha, tail_adjusted)
    levels = list(range(1, cfg.resolution))
    grid = [cfg.M(n) for n in levels]
    errors = [_lp(evaluate_mean(family, M, f, q=q).values - f.values, p) for M in grid]
    moduli = [modulus_of_continuity(f, p, n) for n in levels]

    if alpha < 1:
        predicted, case = -alpha, "alpha"
    elif alpha == 1:
        predicted, case = -1.0, "log-saturation"
    else:
        predicted, case = -1.0, "saturation"

    exact = all(e <= 1e-14 for e in errors)
    fitted = modulus_exp = None
    if not exact:
        # a fit over the last ⌈N/2⌉ levels
        keep = min(len(grid), math.ceil(cfg.resolution / 2))
        if keep < 3:
            raise FitError(f"N={cfg.resolution} leaves {keep} fit points, need 3")
        fitted = fit_exponent(grid[-keep:], errors[-keep:])
        if any(w > 0 for w in moduli[-keep:]):
            modulus_exp = fit_exponent(grid[-keep:], moduli[-keep:])
    report = RateReport(
        alpha=alpha,
        p=float(p),
        family=family.value,
        levels=levels,
        grid=grid,
        errors=errors,
        moduli=moduli,
        exact=exact,
        fitted_exponent=fitted,
        modulus_exponent=modulus_exp,
        predicted_exponent=predicted,
        predicted_case=case,
    )
    logger.info("lipschitz α=%g p=%g: fitted %s, predicted %g (%s)", alpha, p, fitted, predicted, case)
    return report


def moricz_siddiqi_ratio(q: WeightSequence, f: StepFunction, p: float, n_grid: Sequence[int]) -> MoriczSiddiqiReport:
    """
    ‖t_n f − f‖_p against the modulus expression of the monotone weight
    bounds, without the unknown constant.

    Terms with M_i > n are dropped from the modulus sum.
    """
    cfg = f.cfg
    if q.is_non_decreasing:
        branch = "non-decreasing"
    elif q.is_non_increasing:
        branch = "non-increasing"
    else:
        raise DomainError(f"{q.label} weights are not monotone")
    grid = _check_grid(n_grid, cfg)
    M = cfg.subgroup_sizes
    N = cfg.resolution
    omega = [modulus_of_continuity(f, p, i) for i in range(N + 1)]
    Q = q.prefix_sums(cfg.size)
    values = q.values(cfg.size)

    rows = []
    truncated = False
    for n in grid:
        if n < 2 or Q[n] <= 0:
            continue
        j = max(i for i in range(N + 1) if M[i] < n)
        used = [i for i in range(N + 1) if M[i] <= n]
        truncated = truncated or len(used) < N + 1
        if branch == "non-decreasing":
            total = sum(M[i] * values[n - M[i]] * omega[i] for i in used) / Q[n]
        else:
            total = 0.0
            for i in used:
                upper = Q[n - M[i] + 1]
                lower_index = n - M[i + 1] + 1 if i + 1 <= N else -1
                lower = Q[lower_index] if lower_index > 0 else 0.0
                total += (upper - lower) * omega[i]
            total /= Q[n]
        rhs = total + omega[j]
        lhs = _lp(norlund_mean(q, n, f).values - f.values, p)
        if rhs > 0:
            ratio = lhs / rhs
        else:
            ratio = 0.0 if lhs <= 1e-14 else math.inf
        rows.append(MoriczSiddiqiRow(n=n, j=j, lhs=lhs, rhs=rhs, ratio=ratio))
    if not rows:
        raise DomainError("no grid point with n >= 2 and Q_n > 0")
    return MoriczSiddiqiReport(
        weights=q.label,
        branch=branch,
        p=float(p),
        rows=rows,
        sup_ratio=max(row.ratio for row in rows),
        truncated=truncated,
    )


def riemann_lebesgue_trace(
    q: WeightSequence, f: StepFunction, x: GroupPoint, n_max: int
) -> List[RiemannLebesgueRow]:
    """
    II_n = ∫ f(t)·conj(F⁻¹_{M_n}(x − t))·conj(ψ_{M_n−1}(t)) dt with the
    identity-form T kernel, for 1 <= n <= n_max, together with the residual
    of t_{M_n} f(x) = S_{M_n} f(x) − ψ_{M_n−1}(x)·II_n.
    """
    cfg = f.cfg
    if not 1 <= n_max <= cfg.resolution:
        raise DomainError(f"n_max {n_max} outside [1, {cfg.resolution}]")
    xi = point_index(x, cfg)
    shifted = sub_indices(cfg, xi, np.arange(cfg.size))
    rows = []
    for n in range(1, n_max + 1):
        size = cfg.M(n)
        if q.Q(size) <= 0:
            continue
        T = kernel_from_multiplier(cfg, tmean_multiplier(q, size, cfg.size, TVariant.IDENTITY)).values
        psi = character_values(cfg, size - 1)
        term = complex(np.mean(f.values * np.conj(T[shifted]) * np.conj(psi)))
        t = complex(norlund_mean(q, size, f).values[xi])
        S = complex(partial_sum(f, size).values[xi])
        rows.append(
            RiemannLebesgueRow(
                n=n, re=term.real, im=term.imag, magnitude=abs(term), residual=abs(t - (S - psi[xi] * term))
            )
        )
    return rows


def locally_constant_level(f: StepFunction, x: GroupPoint) -> Optional[int]:
    """Smallest k < N with f constant on I_k(x), or None."""
    cfg = f.cfg
    xi = point_index(x, cfg)
    for k in range(cfg.resolution):
        block = f.values[interval_mask(cfg, xi, k)]
        if np.all(np.abs(block - f.values[xi]) <= 1e-14):
            return k
    return None


def continuity_trace(
    f: StepFunction,
    x: GroupPoint,
    n_grid: Sequence[int],
    family=MeanFamily.FEJER,
    q: Optional[WeightSequence] = None,
) -> Tuple[ConvergenceCurve, Optional[int]]:
    """|mean_n f(x) − f(x)| over the grid, plus the level where f is locally constant at x."""
    family = MeanFamily(family)
    grid = _check_grid(n_grid, f.cfg)
    xi = point_index(x, f.cfg)
    target = f(x)
    errors = [abs(complex(evaluate_mean(family, n, f, q=q).values[xi]) - target) for n in grid]
    curve = ConvergenceCurve(
        family=family.value,
        weights=q.label if q is not None else None,
        p=math.inf,
        fixture=f"pointwise@{xi}",
        grid=grid,
        errors=errors,
    )
    return curve, locally_constant_level(f, x)
