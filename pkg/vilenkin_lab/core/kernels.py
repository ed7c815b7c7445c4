import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

import numpy as np

from vilenkin_lab.core.characters import rademacher_values
from vilenkin_lab.core.function_space import StepFunction
from vilenkin_lab.core.group import GroupConfig, digit_table, interval_mask
from vilenkin_lab.core.transform import SpectrumTable, fvt_inverse
from vilenkin_lab.core.weights import WeightSequence
from vilenkin_lab.errors import DomainError
from vilenkin_lab.schemas.reports import ApproximateIdentityReport, ApproximateIdentityRow

logger = logging.getLogger(__name__)


class KernelKind(str, Enum):
    DIRICHLET = "dirichlet"
    FEJER = "fejer"
    NORLUND = "norlund"
    TMEAN = "tmean"


class TVariant(str, Enum):
    """
    REGULAR weights q_k on D_{k+1} and integrates to 1; IDENTITY weights q_k
    on D_k (D_0 = 0) and is the form entering the reflection identities.
    """

    REGULAR = "regular"
    IDENTITY = "identity"


@dataclass(frozen=True)
class KernelFunction:
    kind: KernelKind
    n: int
    function: StepFunction
    weights: Optional[str] = None
    variant: Optional[TVariant] = None

    @property
    def cfg(self) -> GroupConfig:
        return self.function.cfg

    @property
    def values(self) -> np.ndarray:
        return self.function.values

    def integral(self) -> complex:
        return self.function.integral()


def _check_range(n: int, cfg: GroupConfig, lower: int = 1) -> None:
    if not lower <= n <= cfg.size:
        raise DomainError(f"kernel index {n} outside [{lower}, {cfg.size}]")


# Spectral multipliers: entry j is the coefficient of ψ_j, zero for j >= n


def dirichlet_multiplier(n: int, size: int) -> np.ndarray:
    w = np.zeros(size)
    w[:n] = 1.0
    return w


def fejer_multiplier(n: int, size: int) -> np.ndarray:
    w = np.zeros(size)
    j = np.arange(n)
    w[:n] = (n - j) / n
    return w


def _prefix(q: WeightSequence, n: int) -> np.ndarray:
    Q = q.prefix_sums(n)
    if Q[n] <= 0:
        raise DomainError(f"Q_{n} = 0 for {q.label} weights")
    return Q


def norlund_multiplier(q: WeightSequence, n: int, size: int) -> np.ndarray:
    """Q_{n-j}/Q_n."""
    Q = _prefix(q, n)
    w = np.zeros(size)
    j = np.arange(n)
    w[:n] = Q[n - j] / Q[n]
    return w


def tmean_multiplier(q: WeightSequence, n: int, size: int, variant: TVariant = TVariant.REGULAR) -> np.ndarray:
    """(Q_n − Q_j)/Q_n for the regular variant, (Q_n − Q_{j+1})/Q_n for the identity form."""
    Q = _prefix(q, n)
    w = np.zeros(size)
    j = np.arange(n)
    shift = 1 if TVariant(variant) == TVariant.IDENTITY else 0
    w[:n] = (Q[n] - Q[j + shift]) / Q[n]
    return w


def kernel_from_multiplier(cfg: GroupConfig, w: np.ndarray) -> StepFunction:
    return fvt_inverse(SpectrumTable(cfg, w))


def dirichlet_values(n: int, cfg: GroupConfig) -> np.ndarray:
    """D_n over all cosets, with D_0 = 0."""
    _check_range(n, cfg, lower=0)
    return kernel_from_multiplier(cfg, dirichlet_multiplier(n, cfg.size)).values


def dirichlet(n: int, cfg: GroupConfig) -> KernelFunction:
    """D_n = Σ_{k<n} ψ_k."""
    _check_range(n, cfg)
    return KernelFunction(KernelKind.DIRICHLET, n, StepFunction(cfg, dirichlet_values(n, cfg)))


def paley(cfg: GroupConfig, k: int) -> np.ndarray:
    """D_{M_k} = M_k on I_k and 0 elsewhere."""
    return cfg.M(k) * interval_mask(cfg, 0, k).astype(float)


def dirichlet_closed(n: int, cfg: GroupConfig) -> KernelFunction:
    """
    Closed form of D_n for n = M_k or n = s·M_k with 1 <= s <= m_k − 1.

    Raises:
        DomainError: n is not of either shape
    """
    _check_range(n, cfg)
    M = cfg.subgroup_sizes
    k = max(i for i in range(cfg.resolution + 1) if n % M[i] == 0)
    s = n // M[k]
    if s == 1:
        values = paley(cfg, k)
    elif k < cfg.resolution and s <= cfg.radix[k] - 1:
        r = rademacher_values(cfg, k)
        values = paley(cfg, k) * sum(r**i for i in range(s))
    else:
        raise DomainError(f"D_{n} has no closed form of shape s·M_k")
    return KernelFunction(KernelKind.DIRICHLET, n, StepFunction(cfg, values))


def fejer(n: int, cfg: GroupConfig) -> KernelFunction:
    """K_n = (1/n) Σ_{k=1}^{n} D_k."""
    _check_range(n, cfg)
    return KernelFunction(KernelKind.FEJER, n, kernel_from_multiplier(cfg, fejer_multiplier(n, cfg.size)))


def fejer_closed(size: int, cfg: GroupConfig) -> KernelFunction:
    """
    Closed form of K_{M_n}.

    (M_n + 1)/2 on I_n; M_t/(1 − r_t(x)) when t < n is the first nonzero digit
    of x and x − x_t e_t lies in I_n; 0 otherwise.
    """
    M = cfg.subgroup_sizes
    if size not in M:
        raise DomainError(f"{size} is not one of M_0 .. M_N")
    n = M.index(size)
    idx = np.arange(cfg.size)
    digits = digit_table(cfg)
    values = np.zeros(cfg.size, dtype=complex)
    inside = idx % size == 0
    values[inside] = (size + 1) / 2
    for t in range(n):
        x_t = digits[:, t]
        # x mod M_n has its only nonzero digit at t
        region = (x_t != 0) & (idx % size == x_t * M[t])
        r = rademacher_values(cfg, t)[region]
        values[region] = M[t] / (1 - r)
    return KernelFunction(KernelKind.FEJER, size, StepFunction(cfg, values))


def norlund_kernel(q: WeightSequence, n: int, cfg: GroupConfig) -> KernelFunction:
    """F_n = (1/Q_n) Σ_{k=1}^{n} q_{n−k} D_k."""
    _check_range(n, cfg)
    values = kernel_from_multiplier(cfg, norlund_multiplier(q, n, cfg.size))
    return KernelFunction(KernelKind.NORLUND, n, values, weights=q.label)


def tmean_kernel(
    q: WeightSequence, n: int, cfg: GroupConfig, variant: TVariant = TVariant.REGULAR
) -> KernelFunction:
    variant = TVariant(variant)
    _check_range(n, cfg)
    values = kernel_from_multiplier(cfg, tmean_multiplier(q, n, cfg.size, variant))
    return KernelFunction(KernelKind.TMEAN, n, values, weights=q.label, variant=variant)


def build_kernel(
    kind: KernelKind,
    n: int,
    cfg: GroupConfig,
    q: Optional[WeightSequence] = None,
    variant: TVariant = TVariant.REGULAR,
) -> KernelFunction:
    kind = KernelKind(kind)
    if kind == KernelKind.DIRICHLET:
        return dirichlet(n, cfg)
    if kind == KernelKind.FEJER:
        return fejer(n, cfg)
    if q is None:
        raise DomainError(f"{kind.value} kernels need weights")
    if kind == KernelKind.NORLUND:
        return norlund_kernel(q, n, cfg)
    return tmean_kernel(q, n, cfg, variant)


def approximate_identity_report(
    family: KernelKind,
    cfg: GroupConfig,
    n_range: Iterable[int],
    N_tail: int,
    q: Optional[WeightSequence] = None,
) -> ApproximateIdentityReport:
    """
    Integral, L1 mass and the L1 mass outside I_{N_tail} of each kernel in
    the family over n_range.
    """
    family = KernelKind(family)
    if not 0 <= N_tail <= cfg.resolution:
        raise DomainError(f"N_tail {N_tail} outside [0, {cfg.resolution}]")
    outside = ~interval_mask(cfg, 0, N_tail)
    rows = []
    for n in n_range:
        kernel = build_kernel(family, n, cfg, q)
        a = np.abs(kernel.values)
        rows.append(
            ApproximateIdentityRow(
                n=n,
                integral=kernel.integral().real,
                l1=float(a.mean()),
                tail=float(a[outside].sum() / cfg.size),
            )
        )
    if not rows:
        raise DomainError("n_range is empty")
    tails = [row.tail for row in rows]
    first, last = tails[0], tails[-1]
    if last > 0:
        ratio = first / last
    else:
        ratio = float("inf") if first > 0 else 1.0
    report = ApproximateIdentityReport(
        family=family.value,
        weights=q.label if q is not None and family in (KernelKind.NORLUND, KernelKind.TMEAN) else None,
        N_tail=N_tail,
        rows=rows,
        sup_l1=max(row.l1 for row in rows),
        tail_ratio=ratio,
        tail_decreasing=last < first or first == 0,
        tail_monotone=all(b <= a + 1e-15 for a, b in zip(tails, tails[1:])),
    )
    logger.info("approximate identity %s on %s: sup L1=%.4g, tail ratio=%.4g",
                family.value, cfg.header(), report.sup_l1, report.tail_ratio)
    return report
