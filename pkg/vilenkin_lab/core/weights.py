import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from vilenkin_lab.errors import DomainError
from vilenkin_lab.schemas.reports import RegularityReport

logger = logging.getLogger(__name__)


class WeightKind(str, Enum):
    FEJER = "fejer"
    CESARO = "cesaro"
    VALPHA = "valpha"
    LOG = "log"
    UALPHA = "ualpha"
    BETA = "beta"
    CUSTOM = "custom"


class Monotonicity(str, Enum):
    NON_DECREASING = "non-decreasing"
    NON_INCREASING = "non-increasing"
    CONSTANT = "constant"
    NONE = "none"


@dataclass(frozen=True, eq=False)
class CesaroCoefficients:
    """A_0^α .. A_n^α."""

    alpha: float
    table: np.ndarray

    def __getitem__(self, n):
        return self.table[n]


def _is_negative_integer(alpha: float) -> bool:
    return alpha < 0 and float(alpha).is_integer()


def _cesaro_table(n: int, alpha: float) -> np.ndarray:
    # A_k = A_{k-1}(α + k)/k, A_0 = 1
    table = np.empty(n + 1)
    table[0] = 1.0
    for k in range(1, n + 1):
        table[k] = table[k - 1] * (alpha + k) / k
    return table


def cesaro_binomial(n: int, alpha: float) -> CesaroCoefficients:
    if _is_negative_integer(alpha):
        raise DomainError(f"A_n^α is undefined for α = {alpha}")
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    table = _cesaro_table(n, alpha)
    table.flags.writeable = False
    return CesaroCoefficients(alpha=alpha, table=table)


@dataclass(frozen=True, eq=False)
class WeightSequence:
    """
    Nonnegative weights q_k with prefix sums Q_n = Σ_{k<n} q_k.

    The evaluator maps an integer array k to q_k; it is vectorized so that
    prefix sums up to M_N are a single cumulative sum.
    """

    kind: WeightKind
    evaluator: Callable[[np.ndarray], np.ndarray]
    monotonicity: Monotonicity
    alpha: Optional[float] = None
    limit: Optional[float] = None
    max_length: Optional[int] = None
    notes: tuple = field(default_factory=tuple)

    @property
    def label(self) -> str:
        if self.alpha is None:
            return self.kind.value
        return f"{self.kind.value}:{self.alpha:g}"

    def values(self, n: int) -> np.ndarray:
        """q_0 .. q_{n-1}."""
        if n < 0:
            raise DomainError(f"n must be >= 0, got {n}")
        if self.max_length is not None and n > self.max_length:
            raise DomainError(f"{self.label} weights only define {self.max_length} entries, {n} requested")
        return np.asarray(self.evaluator(np.arange(n)), dtype=float)

    def q(self, k: int) -> float:
        return float(self.values(k + 1)[k])

    def prefix_sums(self, n: int) -> np.ndarray:
        """Q_0 .. Q_n with Q_0 = 0."""
        out = np.zeros(n + 1)
        np.cumsum(self.values(n), out=out[1:])
        return out

    def Q(self, n: int) -> float:
        return float(self.prefix_sums(n)[n])

    @property
    def q0_positive(self) -> bool:
        return self.q(0) > 0

    @property
    def is_non_decreasing(self) -> bool:
        return self.monotonicity in (Monotonicity.NON_DECREASING, Monotonicity.CONSTANT)

    @property
    def is_non_increasing(self) -> bool:
        return self.monotonicity in (Monotonicity.NON_INCREASING, Monotonicity.CONSTANT)

    @property
    def is_bounded_class(self) -> bool:
        """Monotone with a finite positive limit."""
        return (
            self.monotonicity != Monotonicity.NONE
            and self.limit is not None
            and 0 < self.limit < math.inf
        )

    def verify_monotonicity(self, n: int) -> bool:
        q = self.values(n)
        if q.size < 2:
            return True
        diffs = np.diff(q)
        slack = 1e-14 * max(1.0, float(np.abs(q).max()))
        if self.monotonicity == Monotonicity.CONSTANT:
            return bool(np.all(np.abs(diffs) <= slack))
        if self.monotonicity == Monotonicity.NON_DECREASING:
            return bool(np.all(diffs >= -slack))
        if self.monotonicity == Monotonicity.NON_INCREASING:
            return bool(np.all(diffs <= slack))
        return True


def _classify(table: np.ndarray) -> Monotonicity:
    if table.size < 2:
        return Monotonicity.CONSTANT
    diffs = np.diff(table)
    if np.all(diffs == 0):
        return Monotonicity.CONSTANT
    if np.all(diffs >= 0):
        return Monotonicity.NON_DECREASING
    if np.all(diffs <= 0):
        return Monotonicity.NON_INCREASING
    return Monotonicity.NONE


def _cesaro_evaluator(alpha: float) -> Callable[[np.ndarray], np.ndarray]:
    def evaluate(k: np.ndarray) -> np.ndarray:
        if k.size == 0:
            return np.zeros(0)
        return _cesaro_table(int(k.max()), alpha - 1)[k]

    return evaluate


def make_weights(kind, alpha: Optional[float] = None, table: Optional[Sequence[float]] = None) -> WeightSequence:
    """
    Build one of the weight families.

    Args:
        kind: fejer, cesaro, valpha, log, ualpha, beta or custom
        alpha: family parameter where the family takes one
        table: the q_k values for custom weights

    Raises:
        DomainError: if alpha is missing or outside the family's range
    """
    kind = WeightKind(kind)
    if kind in (WeightKind.CESARO, WeightKind.VALPHA, WeightKind.UALPHA, WeightKind.BETA) and alpha is None:
        raise DomainError(f"{kind.value} weights need a parameter α")

    if kind == WeightKind.FEJER:
        return WeightSequence(kind, lambda k: np.ones(k.shape), Monotonicity.CONSTANT, limit=1.0)

    if kind == WeightKind.CESARO:
        if alpha < 0:
            raise DomainError(f"cesaro weights need α >= 0, got {alpha}")
        if alpha < 1:
            mono, limit = Monotonicity.NON_INCREASING, 0.0
        elif alpha == 1:
            mono, limit = Monotonicity.CONSTANT, 1.0
        else:
            mono, limit = Monotonicity.NON_DECREASING, math.inf
        return WeightSequence(kind, _cesaro_evaluator(alpha), mono, alpha=alpha, limit=limit)

    if kind == WeightKind.VALPHA:
        if not 0 < alpha <= 1:
            raise DomainError(f"valpha weights need 0 < α <= 1, got {alpha}")
        mono = Monotonicity.CONSTANT if alpha == 1 else Monotonicity.NON_INCREASING
        return WeightSequence(
            kind, lambda k: (k + 1.0) ** (alpha - 1), mono, alpha=alpha, limit=1.0 if alpha == 1 else 0.0
        )

    if kind == WeightKind.LOG:
        return WeightSequence(kind, lambda k: 1.0 / (k + 1.0), Monotonicity.NON_INCREASING, limit=0.0)

    if kind == WeightKind.UALPHA:
        if not 0 < alpha <= 1:
            raise DomainError(f"ualpha weights need 0 < α <= 1, got {alpha}")
        return WeightSequence(
            kind,
            lambda k: 1.0 / ((k + 3.0) * np.log(k + 3.0) ** alpha),
            Monotonicity.NON_INCREASING,
            alpha=alpha,
            limit=0.0,
        )

    if kind == WeightKind.BETA:
        if alpha <= 0:
            raise DomainError(f"beta weights need α > 0, got {alpha}")
        logger.warning("beta weights have q_0 = log^α(1) = 0; means are defined for n >= 2")
        return WeightSequence(
            kind,
            lambda k: np.log(k + 1.0) ** alpha,
            Monotonicity.NON_DECREASING,
            alpha=alpha,
            limit=math.inf,
            notes=("q_0 = 0, so Q_1 = 0 and means start at n = 2",),
        )

    if table is None:
        raise DomainError("custom weights need a table")
    values = np.asarray(table, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise DomainError("custom weight table must be a non-empty sequence")
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        raise DomainError("custom weights must be finite and nonnegative")
    values.flags.writeable = False
    mono = _classify(values)
    return WeightSequence(
        kind,
        lambda k: values[k],
        mono,
        limit=float(values[-1]) if mono != Monotonicity.NONE else None,
        max_length=values.size,
    )


def parse_weights(spec: str) -> WeightSequence:
    """Parse ``kind`` or ``kind:alpha``, e.g. ``cesaro:0.5``."""
    kind, _, alpha = spec.strip().partition(":")
    try:
        kind = WeightKind(kind.lower())
    except ValueError as e:
        raise DomainError(f"unknown weight family {kind!r}") from e
    if kind == WeightKind.CUSTOM:
        try:
            table = [float(v) for v in alpha.split("/") if v]
        except ValueError as e:
            raise DomainError(f"malformed custom weight table {alpha!r}") from e
        return make_weights(kind, table=table)
    if not alpha:
        return make_weights(kind)
    try:
        value = float(alpha)
    except ValueError as e:
        raise DomainError(f"malformed weight parameter {alpha!r}") from e
    return make_weights(kind, value)


def _trend(values: np.ndarray) -> str:
    diffs = np.diff(values)
    if diffs.size == 0:
        return "constant"
    if np.all(np.abs(diffs) <= 1e-15 * np.abs(values).max()):
        return "constant"
    if np.all(diffs <= 0):
        return "decreasing"
    if np.all(diffs >= 0):
        return "increasing"
    return "mixed"


def regularity_check(q: WeightSequence, n_max: int) -> RegularityReport:
    """
    Scan n/Q_n and n·q_{n-1}/Q_n for n <= n_max.

    The limit of q_{n-1}/Q_n is reported as observed; no pass/fail is
    attached to it.
    """
    if n_max < 2:
        raise DomainError(f"n_max must be >= 2, got {n_max}")
    values = q.values(n_max)
    Q = q.prefix_sums(n_max)
    n = np.arange(1, n_max + 1)
    Qn = Q[1:]
    valid = Qn > 0
    notes = list(q.notes)
    if not np.all(valid):
        notes.append(f"Q_n = 0 for n <= {int(n[~valid].max())}; those n are skipped")
    n, Qn, q_last = n[valid], Qn[valid], values[n[valid] - 1]

    ratio = q_last / Qn
    exponent = None
    if q.q0_positive and n.size >= 3:
        # log-log slope of q_0/Q_n on a geometric grid over the upper decade
        lo = max(2, n_max // 10)
        grid = np.unique(np.geomspace(lo, n_max, num=min(20, n_max - lo + 1)).astype(int))
        grid = grid[grid >= n.min()]
        if grid.size >= 2:
            y = values[0] / Q[grid]
            exponent = float(np.polyfit(np.log(grid), np.log(y), 1)[0])
    elif not q.q0_positive:
        logger.warning("%s has q_0 = 0; q_0/Q_n decay is not defined", q.label)

    report = RegularityReport(
        weights=q.label,
        n_max=n_max,
        sup_n_over_Q=float(np.max(n / Qn)),
        sup_n_q_over_Q=float(np.max(n * ratio)),
        final_q_over_Q=float(ratio[-1]),
        q_over_Q_trend=_trend(ratio),
        q0_positive=q.q0_positive,
        q0_decay_exponent=exponent,
        monotonicity=q.monotonicity.value,
        monotonicity_verified=q.verify_monotonicity(n_max),
        notes=notes,
    )
    logger.info("regularity of %s up to %d: sup n/Q_n=%.4g, sup n q/Q=%.4g", q.label, n_max,
                report.sup_n_over_Q, report.sup_n_q_over_Q)
    return report
