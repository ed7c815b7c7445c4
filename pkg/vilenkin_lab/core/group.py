import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from vilenkin_lab.config import settings
from vilenkin_lab.errors import CapExceededError, ConfigError, ConfigMismatchError, DomainError

logger = logging.getLogger(__name__)

MAX_GROUP_ORDER = 2**63 - 1


class GroupConfig(BaseModel):
    """
    A bounded Vilenkin group materialized up to coordinate N.

    Every function handled by the library is constant on the cosets of I_N,
    so the group is represented by the M_N coset indices Σ x_k M_k.
    """

    model_config = ConfigDict(frozen=True)

    radix: Tuple[int, ...]
    resolution: int

    @field_validator("radix")
    @classmethod
    def radix_entries(cls, v):
        if any(m < 2 for m in v):
            raise ValueError(f"every radix entry must be >= 2, got {v}")
        return v

    @model_validator(mode="after")
    def check_shape(self):
        if self.resolution < 1 or len(self.radix) != self.resolution:
            raise ValueError("radix length must equal the resolution N >= 1")
        if _product(self.radix) > MAX_GROUP_ORDER:
            raise ValueError("M_N does not fit in a machine word")
        return self

    @property
    def subgroup_sizes(self) -> Tuple[int, ...]:
        """M_0 .. M_N."""
        return _subgroup_sizes(self.radix)

    @property
    def size(self) -> int:
        return self.subgroup_sizes[-1]

    def M(self, n: int) -> int:
        if not 0 <= n <= self.resolution:
            raise DomainError(f"subgroup level {n} outside [0, {self.resolution}]")
        return self.subgroup_sizes[n]

    def measure(self, n: int) -> Fraction:
        return Fraction(1, self.M(n))

    def header(self) -> str:
        return f"radix={','.join(str(m) for m in self.radix)};N={self.resolution}"

    @classmethod
    def from_header(cls, header: str) -> "GroupConfig":
        fields = dict(part.split("=", 1) for part in header.strip().lstrip("#").strip().split(";") if "=" in part)
        try:
            radix = [int(m) for m in fields["radix"].split(",")]
            N = int(fields["N"])
        except (KeyError, ValueError) as e:
            raise ConfigError(f"malformed config header {header!r}") from e
        return build_config(radix, N)


def _product(values: Sequence[int]) -> int:
    out = 1
    for v in values:
        out *= v
    return out


@lru_cache(maxsize=None)
def _subgroup_sizes(radix: Tuple[int, ...]) -> Tuple[int, ...]:
    sizes = [1]
    for m in radix:
        sizes.append(sizes[-1] * m)
    return tuple(sizes)


def build_config(radix: Sequence[int], N: int) -> GroupConfig:
    """
    Build a GroupConfig, repeating a short radix pattern periodically.

    Args:
        radix: radix entries m_k; shorter than N means the pattern repeats
        N: number of materialized coordinates

    Raises:
        ConfigError: on m_k < 2, N < 1, or M_N beyond 2**63 - 1
    """
    radix = [int(m) for m in radix]
    if N < 1:
        raise ConfigError(f"resolution must be >= 1, got {N}")
    if not radix:
        raise ConfigError("radix must not be empty")
    bad = [m for m in radix if m < 2]
    if bad:
        raise ConfigError(f"radix entries must be >= 2, got {bad}")
    full = tuple(radix[k % len(radix)] for k in range(N))
    if _product(full) > MAX_GROUP_ORDER:
        raise ConfigError(f"M_N overflows a machine word for radix {full}")
    return GroupConfig(radix=full, resolution=N)


def _same_config(a: GroupConfig, b: GroupConfig) -> None:
    if a != b:
        raise ConfigMismatchError(f"{a.header()} vs {b.header()}")


@dataclass(frozen=True)
class GroupPoint:
    cfg: GroupConfig
    digits: Tuple[int, ...]

    def __post_init__(self):
        digits = tuple(int(d) for d in self.digits)
        object.__setattr__(self, "digits", digits)
        if len(digits) != self.cfg.resolution:
            raise DomainError(f"expected {self.cfg.resolution} digits, got {len(digits)}")
        for k, (d, m) in enumerate(zip(digits, self.cfg.radix)):
            if not 0 <= d < m:
                raise DomainError(f"digit x_{k}={d} outside Z_{m}")

    @classmethod
    def zero(cls, cfg: GroupConfig) -> "GroupPoint":
        return cls(cfg, (0,) * cfg.resolution)

    @classmethod
    def unit(cls, cfg: GroupConfig, k: int, r: int = 1) -> "GroupPoint":
        """r·e_k."""
        if not 0 <= k < cfg.resolution:
            raise DomainError(f"coordinate {k} outside [0, {cfg.resolution})")
        digits = [0] * cfg.resolution
        digits[k] = r % cfg.radix[k]
        return cls(cfg, tuple(digits))

    @property
    def index(self) -> int:
        return point_index(self)

    def __add__(self, other: "GroupPoint") -> "GroupPoint":
        return group_add(self, other)

    def __sub__(self, other: "GroupPoint") -> "GroupPoint":
        return group_sub(self, other)

    def __neg__(self) -> "GroupPoint":
        return group_sub(GroupPoint.zero(self.cfg), self)


@dataclass(frozen=True)
class NaturalDigits:
    """Digits n_0, n_1, ... of a natural number in the generalized number system."""

    cfg: GroupConfig
    digits: Tuple[int, ...]

    @property
    def value(self) -> int:
        return sum(d * M for d, M in zip(self.digits, self.cfg.subgroup_sizes))

    def leading_position(self) -> Optional[int]:
        """|n|: the position of the highest nonzero digit, None for n = 0."""
        nonzero = [k for k, d in enumerate(self.digits) if d]
        return nonzero[-1] if nonzero else None


def point_index(x: GroupPoint, cfg: Optional[GroupConfig] = None) -> int:
    if cfg is not None:
        _same_config(x.cfg, cfg)
    return sum(d * M for d, M in zip(x.digits, x.cfg.subgroup_sizes))


def index_point(index: int, cfg: GroupConfig) -> GroupPoint:
    if not 0 <= index < cfg.size:
        raise DomainError(f"coset index {index} outside [0, {cfg.size})")
    digits = []
    for m in cfg.radix:
        index, d = divmod(index, m)
        digits.append(d)
    return GroupPoint(cfg, tuple(digits))


def group_add(x: GroupPoint, y: GroupPoint) -> GroupPoint:
    _same_config(x.cfg, y.cfg)
    return GroupPoint(x.cfg, tuple((a + b) % m for a, b, m in zip(x.digits, y.digits, x.cfg.radix)))


def group_sub(x: GroupPoint, y: GroupPoint) -> GroupPoint:
    _same_config(x.cfg, y.cfg)
    return GroupPoint(x.cfg, tuple((a - b) % m for a, b, m in zip(x.digits, y.digits, x.cfg.radix)))


def nat_digits(n: int, cfg: GroupConfig) -> NaturalDigits:
    """Expand n = Σ n_j M_j; n must be below M_N."""
    if not 0 <= n < cfg.size:
        raise DomainError(f"{n} needs digits beyond the materialized range [0, {cfg.size})")
    digits = []
    for m in cfg.radix:
        n, d = divmod(n, m)
        digits.append(d)
    return NaturalDigits(cfg, tuple(digits))


def nat_value(digits: Sequence[int], cfg: GroupConfig) -> int:
    return NaturalDigits(cfg, tuple(digits)).value


def nat_add(n: int, k: int, cfg: GroupConfig) -> int:
    """Digitwise n_i ⊕ k_i, recombined with weights M_i."""
    a, b = nat_digits(n, cfg).digits, nat_digits(k, cfg).digits
    return nat_value([(x + y) % m for x, y, m in zip(a, b, cfg.radix)], cfg)


def nat_sub(n: int, k: int, cfg: GroupConfig) -> int:
    a, b = nat_digits(n, cfg).digits, nat_digits(k, cfg).digits
    return nat_value([(x - y) % m for x, y, m in zip(a, b, cfg.radix)], cfg)


def metric_rho_exact(x: GroupPoint, y: GroupPoint) -> Fraction:
    _same_config(x.cfg, y.cfg)
    M = x.cfg.subgroup_sizes
    return sum((Fraction(abs(a - b), M[k + 1]) for k, (a, b) in enumerate(zip(x.digits, y.digits))), Fraction(0))


def metric_rho(x: GroupPoint, y: GroupPoint) -> float:
    return float(metric_rho_exact(x, y))


def _check_level(n: int, cfg: GroupConfig) -> None:
    if not 0 <= n <= cfg.resolution:
        raise DomainError(f"interval level {n} outside [0, {cfg.resolution}]")


def interval_coset(x: GroupPoint, n: int) -> GroupPoint:
    """Canonical representative of I_n(x): first n digits of x, zeros after."""
    _check_level(n, x.cfg)
    return GroupPoint(x.cfg, x.digits[:n] + (0,) * (x.cfg.resolution - n))


def interval_contains(x: GroupPoint, n: int, y: GroupPoint) -> bool:
    _same_config(x.cfg, y.cfg)
    _check_level(n, x.cfg)
    return x.digits[:n] == y.digits[:n]


# Vectorized helpers over all coset indices


@lru_cache(maxsize=16)
def digit_table(cfg: GroupConfig) -> np.ndarray:
    """M_N × N table of digits of every coset index."""
    idx = np.arange(cfg.size, dtype=np.int64)
    table = np.empty((cfg.size, cfg.resolution), dtype=np.int64)
    for k, (m, M) in enumerate(zip(cfg.radix, cfg.subgroup_sizes)):
        table[:, k] = (idx // M) % m
    table.flags.writeable = False
    return table


def _weights(cfg: GroupConfig) -> np.ndarray:
    return np.asarray(cfg.subgroup_sizes[:-1], dtype=np.int64)


def _as_digits(cfg: GroupConfig, indices) -> np.ndarray:
    return digit_table(cfg)[np.asarray(indices, dtype=np.int64)]


def add_indices(cfg: GroupConfig, a, b) -> np.ndarray:
    radix = np.asarray(cfg.radix, dtype=np.int64)
    return ((_as_digits(cfg, a) + _as_digits(cfg, b)) % radix) @ _weights(cfg)


def sub_indices(cfg: GroupConfig, a, b) -> np.ndarray:
    """Coset index of x − y for index arrays a (x) and b (y), broadcasting."""
    radix = np.asarray(cfg.radix, dtype=np.int64)
    return ((_as_digits(cfg, a) - _as_digits(cfg, b)) % radix) @ _weights(cfg)


@lru_cache(maxsize=4)
def subtraction_table(cfg: GroupConfig) -> np.ndarray:
    """S[x, t] = index of x − t."""
    if cfg.size > settings.direct_convolution_cap:
        raise CapExceededError(
            f"M_N={cfg.size} exceeds direct_convolution_cap={settings.direct_convolution_cap}"
        )
    idx = np.arange(cfg.size)
    table = sub_indices(cfg, idx[:, None], idx[None, :])
    table.flags.writeable = False
    return table


def interval_mask(cfg: GroupConfig, center: int, n: int) -> np.ndarray:
    """Boolean mask of the cosets lying in I_n(center)."""
    _check_level(n, cfg)
    M_n = cfg.subgroup_sizes[n]
    return np.arange(cfg.size) % M_n == center % M_n


class RegionKind(str, Enum):
    INTERVAL = "interval"
    ANNULUS = "annulus"
    CORNER = "corner"


class CylinderRegion(BaseModel):
    """
    A union of I_N cosets: I_n(center), the annulus I_s minus I_{s+1}, or a
    corner region I_N^{k,l} of the complement decomposition.
    """

    model_config = ConfigDict(frozen=True)

    cfg: GroupConfig
    kind: RegionKind
    n: Optional[int] = None
    center: Optional[int] = None
    k: Optional[int] = None
    l: Optional[int] = None
    N: Optional[int] = None

    def mask(self) -> np.ndarray:
        cfg = self.cfg
        if self.kind == RegionKind.INTERVAL:
            return interval_mask(cfg, self.center or 0, self.n)
        digits = digit_table(cfg)
        if self.kind == RegionKind.ANNULUS:
            s = self.n
            return interval_mask(cfg, 0, s) & (digits[:, s] != 0)
        # x_0..x_{k-1} = 0, x_k != 0, x_{k+1}..x_{l-1} = 0, and x_l != 0 unless l = N
        k, l, N = self.k, self.l, self.N
        mask = interval_mask(cfg, 0, k) & (digits[:, k] != 0)
        for j in range(k + 1, l):
            mask &= digits[:, j] == 0
        if l < N:
            mask &= digits[:, l] != 0
        return mask

    def contains(self, x: GroupPoint) -> bool:
        _same_config(self.cfg, x.cfg)
        return bool(self.mask()[point_index(x)])

    @property
    def measure(self) -> Fraction:
        return Fraction(int(self.mask().sum()), self.cfg.size)

    def label(self) -> str:
        if self.kind == RegionKind.INTERVAL:
            return f"I_{self.n}({self.center})"
        if self.kind == RegionKind.ANNULUS:
            return f"I_{self.n}\\I_{self.n + 1}"
        return f"I_{self.N}^{{{self.k},{self.l}}}"


def complement_decomposition(N: int, cfg: GroupConfig) -> List[CylinderRegion]:
    """
    Regions I_N^{k,l} partitioning G_m minus I_N.

    The l = N family starts at k = 0 so that points whose only nonzero digit
    among x_0..x_{N-1} is x_0 are covered.
    """
    _check_level(N, cfg)
    regions = [
        CylinderRegion(cfg=cfg, kind=RegionKind.CORNER, k=k, l=l, N=N)
        for k in range(N)
        for l in range(k + 1, N)
    ]
    regions.extend(CylinderRegion(cfg=cfg, kind=RegionKind.CORNER, k=k, l=N, N=N) for k in range(N))
    logger.debug("complement decomposition of I_%d: %d regions", N, len(regions))
    return regions


def annulus_decomposition(N: int, cfg: GroupConfig) -> List[CylinderRegion]:
    _check_level(N, cfg)
    return [CylinderRegion(cfg=cfg, kind=RegionKind.ANNULUS, n=s) for s in range(N)]
