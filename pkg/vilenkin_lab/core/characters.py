import logging
import math
from functools import lru_cache, reduce
from typing import Optional

import numpy as np

from vilenkin_lab.config import settings
from vilenkin_lab.core.group import GroupConfig, GroupPoint, digit_table, nat_digits
from vilenkin_lab.errors import CapExceededError, DomainError

logger = logging.getLogger(__name__)

CharacterValue = complex


@lru_cache(maxsize=None)
def unit_roots(m: int) -> np.ndarray:
    """exp(2πi j/m) for j < m, with the quarter turns set exactly."""
    j = np.arange(m)
    roots = np.exp(2j * np.pi * j / m)
    for q, value in enumerate((1, 1j, -1, -1j)):
        if (q * m) % 4 == 0:
            roots[q * m // 4] = value
    roots.flags.writeable = False
    return roots


@lru_cache(maxsize=None)
def dft_factor(m: int) -> np.ndarray:
    """The m × m character table of Z_m: entry [a, b] = exp(2πi ab/m)."""
    a = np.arange(m)
    table = unit_roots(m)[np.outer(a, a) % m]
    table.flags.writeable = False
    return table


def rademacher(k: int, x: GroupPoint) -> CharacterValue:
    if not 0 <= k < x.cfg.resolution:
        raise DomainError(f"Rademacher index {k} outside [0, {x.cfg.resolution})")
    return complex(unit_roots(x.cfg.radix[k])[x.digits[k]])


def vilenkin_psi(n: int, x: GroupPoint) -> CharacterValue:
    """ψ_n(x) = Π_k r_k(x)^{n_k}."""
    if not 0 <= n < x.cfg.size:
        raise DomainError(f"character index {n} outside [0, {x.cfg.size})")
    digits = nat_digits(n, x.cfg).digits
    value = 1 + 0j
    for n_k, x_k, m in zip(digits, x.digits, x.cfg.radix):
        if n_k:
            value *= unit_roots(m)[(n_k * x_k) % m]
    return complex(value)


def rademacher_values(cfg: GroupConfig, k: int) -> np.ndarray:
    """r_k over every coset index."""
    if not 0 <= k < cfg.resolution:
        raise DomainError(f"Rademacher index {k} outside [0, {cfg.resolution})")
    return unit_roots(cfg.radix[k])[digit_table(cfg)[:, k]]


def character_values(cfg: GroupConfig, n: int) -> np.ndarray:
    """ψ_n over every coset index."""
    if not 0 <= n < cfg.size:
        raise DomainError(f"character index {n} outside [0, {cfg.size})")
    digits = digit_table(cfg)
    values = np.ones(cfg.size, dtype=complex)
    for k, n_k in enumerate(nat_digits(n, cfg).digits):
        if n_k:
            m = cfg.radix[k]
            values *= unit_roots(m)[(n_k * digits[:, k]) % m]
    return values


def root_order(cfg: GroupConfig) -> int:
    return reduce(math.lcm, cfg.radix, 1)


def phase_block(cfg: GroupConfig, rows: np.ndarray, cols: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Integer phases Σ_k n_k x_k (L/m_k) mod L with L = lcm(m_k).

    ψ_n(x) = unit_roots(L)[phase], so any block of the character table is a
    single lookup into one root table.
    """
    L = root_order(cfg)
    digits = digit_table(cfg)
    n_digits = digits[np.asarray(rows)]
    x_digits = digits if cols is None else digits[np.asarray(cols)]
    scale = np.asarray([L // m for m in cfg.radix], dtype=np.int64)
    return (n_digits * scale) @ x_digits.T % L


@lru_cache(maxsize=2)
def phase_table(cfg: GroupConfig) -> np.ndarray:
    if cfg.size > settings.character_table_cap:
        raise CapExceededError(
            f"M_N={cfg.size} exceeds character_table_cap={settings.character_table_cap}"
        )
    L = root_order(cfg)
    dtype = np.int16 if L < 2**15 else np.int32
    table = phase_block(cfg, np.arange(cfg.size)).astype(dtype)
    table.flags.writeable = False
    logger.debug("phase table for %s built (L=%d)", cfg.header(), L)
    return table


def character_table(cfg: GroupConfig) -> np.ndarray:
    """M_N × M_N table with entry [n, x] = ψ_n(x)."""
    return unit_roots(root_order(cfg))[phase_table(cfg)]


def character_rows(cfg: GroupConfig, n: int) -> np.ndarray:
    """Rows ψ_0 .. ψ_{n-1}, without the character-table cap."""
    if not 0 <= n <= cfg.size:
        raise DomainError(f"row count {n} outside [0, {cfg.size}]")
    return unit_roots(root_order(cfg))[phase_block(cfg, np.arange(n))]


def kronecker_table(cfg: GroupConfig) -> np.ndarray:
    """Kronecker product of the per-coordinate tables, coordinate 0 fastest."""
    return reduce(np.kron, [dft_factor(m) for m in reversed(cfg.radix)])
