import logging
import sys
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional

import numpy as np

from vilenkin_lab.config import settings
from vilenkin_lab.core.characters import character_values, rademacher_values
from vilenkin_lab.core.group import CylinderRegion, GroupConfig, RegionKind, digit_table, nat_digits, sub_indices
from vilenkin_lab.core.kernels import (
    TVariant,
    dirichlet_values,
    fejer_multiplier,
    kernel_from_multiplier,
    norlund_multiplier,
    tmean_multiplier,
)
from vilenkin_lab.core.weights import WeightSequence, make_weights
from vilenkin_lab.errors import CapExceededError, DomainError
from vilenkin_lab.schemas.reports import IdentityKind, IdentityReport

logger = logging.getLogger(__name__)

BOUND_TOLERANCE = sys.float_info.max


class IdentityId(str, Enum):
    DN_SHIFT = "DN_SHIFT"
    DN_REFLECT = "DN_REFLECT"
    DN_SCALED = "DN_SCALED"
    DN_EXPANSION = "DN_EXPANSION"
    KN_SCALED = "KN_SCALED"
    KN_DECOMP = "KN_DECOMP"
    KN_BOUND = "KN_BOUND"
    KN_POINT_BOUND = "KN_POINT_BOUND"
    KN_SUPPORT = "KN_SUPPORT"
    FN_REFLECT = "FN_REFLECT"
    FN_REFLECT_T = "FN_REFLECT_T"
    DN_LOCAL_BOUND = "DN_LOCAL_BOUND"
    DN_INTERVAL_BOUND = "DN_INTERVAL_BOUND"
    FN_BOUND = "FN_BOUND"
    FN_TAIL_BOUND = "FN_TAIL_BOUND"


EQUALITIES = {
    IdentityId.DN_SHIFT,
    IdentityId.DN_REFLECT,
    IdentityId.DN_SCALED,
    IdentityId.DN_EXPANSION,
    IdentityId.KN_SCALED,
    IdentityId.KN_DECOMP,
    IdentityId.FN_REFLECT,
    IdentityId.FN_REFLECT_T,
}

WEIGHTED = {IdentityId.FN_REFLECT, IdentityId.FN_REFLECT_T, IdentityId.FN_BOUND, IdentityId.FN_TAIL_BOUND}


class _Kernels:
    """Memoized kernel values on one configuration."""

    def __init__(self, cfg: GroupConfig):
        self.cfg = cfg
        self._cache: Dict[tuple, np.ndarray] = {}

    def _get(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def D(self, n: int) -> np.ndarray:
        return self._get(("D", n), lambda: dirichlet_values(n, self.cfg))

    def K(self, n: int) -> np.ndarray:
        return self._get(("K", n), lambda: kernel_from_multiplier(self.cfg, fejer_multiplier(n, self.cfg.size)).values)

    def psi(self, n: int) -> np.ndarray:
        return self._get(("psi", n), lambda: character_values(self.cfg, n))

    def r(self, k: int) -> np.ndarray:
        return self._get(("r", k), lambda: rademacher_values(self.cfg, k))

    def K_levels(self, top: int) -> np.ndarray:
        """Σ_{l<=top} M_l |K_{M_l}|."""
        M = self.cfg.subgroup_sizes
        return self._get(("KL", top), lambda: sum(M[l] * np.abs(self.K(M[l])) for l in range(top + 1)))


def _level(n: int, cfg: GroupConfig) -> int:
    """|n| = max{l : M_l <= n}."""
    return max(l for l, M in enumerate(cfg.subgroup_sizes) if M <= n)


def _point_levels(cfg: GroupConfig) -> np.ndarray:
    """For each coset, the largest s <= N with x ∈ I_s."""
    digits = digit_table(cfg)
    nonzero = digits != 0
    first = np.argmax(nonzero, axis=1)
    return np.where(nonzero.any(axis=1), first, cfg.resolution)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise DomainError(message)


def _equality(identity, params, lhs, rhs) -> IdentityReport:
    residual = float(np.max(np.abs(lhs - rhs)))
    scale = max(1.0, float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))))
    tolerance = settings.identity_tolerance * scale
    return IdentityReport(
        identity=identity.value,
        kind=IdentityKind.EQUALITY,
        params=params,
        residual=residual,
        tolerance=tolerance,
        passed=residual <= tolerance,
    )


def _bound(identity, params, lhs_abs, rhs) -> IdentityReport:
    """Smallest c with lhs_abs <= c·rhs everywhere, None when no finite c exists."""
    lhs_abs = np.asarray(lhs_abs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    eps = 1e-9 * max(1.0, float(rhs.max(initial=0.0)))
    positive = rhs > eps
    c = float(np.max(lhs_abs[positive] / rhs[positive], initial=0.0))
    if np.any(lhs_abs[~positive] > 1e-9 * max(1.0, float(lhs_abs.max(initial=0.0)))) or not np.isfinite(c):
        c = None
    return IdentityReport(
        identity=identity.value,
        kind=IdentityKind.BOUND,
        params=params,
        residual=c,
        tolerance=BOUND_TOLERANCE,
        passed=c is not None and c <= BOUND_TOLERANCE,
    )


def _check(identity: IdentityId, params: Dict[str, Any], kern: _Kernels, q: Optional[WeightSequence]) -> IdentityReport:
    cfg = kern.cfg
    M = cfg.subgroup_sizes
    N = cfg.resolution
    p = dict(params)

    if identity == IdentityId.DN_SHIFT:
        n, j = p["n"], p["j"]
        _require(0 <= n < N and 0 <= j <= (cfg.radix[n] - 1) * M[n], "DN_SHIFT needs n < N and j <= (m_n-1)M_n")
        return _equality(identity, p, kern.D(j + M[n]), kern.D(M[n]) + kern.psi(M[n]) * kern.D(j))

    if identity == IdentityId.DN_REFLECT:
        n, j = p["n"], p["j"]
        _require(0 <= n <= N and 0 <= j <= M[n], "DN_REFLECT needs n <= N and 0 <= j <= M_n")
        rhs = kern.D(M[n]) - kern.psi(M[n] - 1) * np.conj(kern.D(j))
        return _equality(identity, p, kern.D(M[n] - j), rhs)

    if identity == IdentityId.DN_SCALED:
        n, s = p["n"], p["s"]
        _require(0 <= n < N and 1 <= s <= cfg.radix[n] - 1, "DN_SCALED needs n < N and 1 <= s <= m_n - 1")
        r = kern.r(n)
        return _equality(identity, p, kern.D(s * M[n]), kern.D(M[n]) * sum(r**k for k in range(s)))

    if identity == IdentityId.DN_EXPANSION:
        n = p["n"]
        _require(0 <= n < cfg.size, "DN_EXPANSION needs 0 <= n < M_N")
        digits = nat_digits(n, cfg).digits
        total = np.zeros(cfg.size, dtype=complex)
        for j, n_j in enumerate(digits):
            m_j = cfg.radix[j]
            r = kern.r(j)
            total += kern.D(M[j]) * sum(r**k for k in range(m_j - n_j, m_j))
        return _equality(identity, p, kern.D(n), kern.psi(n) * total)

    if identity == IdentityId.KN_SCALED:
        n, s = p["n"], p["s"]
        _require(0 <= n < N and 1 <= s <= cfg.radix[n] - 1, "KN_SCALED needs n < N and 1 <= s <= m_n - 1")
        r = kern.r(n)
        geometric = [sum(r**i for i in range(l)) for l in range(s)]
        rhs = sum(geometric) * M[n] * kern.D(M[n]) + sum(r**l for l in range(s)) * M[n] * kern.K(M[n])
        return _equality(identity, p, s * M[n] * kern.K(s * M[n]), rhs)

    if identity == IdentityId.KN_DECOMP:
        n = p["n"]
        _require(1 <= n < cfg.size, "KN_DECOMP needs 1 <= n < M_N")
        digits = nat_digits(n, cfg).digits
        blocks = [(k, digits[k]) for k in reversed(range(N)) if digits[k]]
        rhs = np.zeros(cfg.size, dtype=complex)
        prefix = np.ones(cfg.size, dtype=complex)
        rest = n
        for i, (k, s) in enumerate(blocks):
            size = s * M[k]
            rest -= size
            rhs += prefix * size * kern.K(size)
            if i < len(blocks) - 1:
                rhs += prefix * rest * kern.D(size)
            prefix = prefix * kern.r(k) ** s
        return _equality(identity, p, n * kern.K(n), rhs)

    if identity == IdentityId.KN_BOUND:
        n = p["n"]
        _require(1 <= n <= cfg.size, "KN_BOUND needs 1 <= n <= M_N")
        return _bound(identity, p, n * np.abs(kern.K(n)), kern.K_levels(_level(n, cfg)))

    if identity == IdentityId.KN_POINT_BOUND:
        n, k, l = p["n"], p["k"], p["l"]
        _require(0 <= n <= N and 0 <= k < l <= N, "KN_POINT_BOUND needs n <= N and k < l <= N")
        mask = CylinderRegion(cfg=cfg, kind=RegionKind.CORNER, k=k, l=l, N=N).mask()
        return _bound(identity, p, np.abs(kern.K(M[n]))[mask], np.full(int(mask.sum()), float(M[k])))

    if identity == IdentityId.KN_SUPPORT:
        n = p["n"]
        _require(0 <= n < N, "KN_SUPPORT needs 0 <= n < N")
        idx = np.arange(cfg.size)
        rhs = np.zeros(cfg.size)
        for s in range(n + 1):
            for r in range(1, cfg.radix[s]):
                rhs += M[s] * (idx % M[n] == (r * M[s]) % M[n])
        return _bound(identity, p, np.abs(kern.K(M[n])), rhs)

    if identity == IdentityId.DN_LOCAL_BOUND:
        n = p["n"]
        _require(1 <= n <= cfg.size, "DN_LOCAL_BOUND needs 1 <= n <= M_N")
        levels = _point_levels(cfg)
        return _bound(identity, p, np.abs(kern.D(n)), np.asarray(M)[levels].astype(float))

    if identity == IdentityId.DN_INTERVAL_BOUND:
        n, top = p["n"], p["N"]
        _require(1 <= n <= cfg.size and 1 <= top <= N, "DN_INTERVAL_BOUND needs 1 <= n <= M_N and 1 <= N <= resolution")
        levels = _point_levels(cfg)
        xs = np.flatnonzero(levels < top)
        ts = np.arange(0, cfg.size, M[top])
        D = np.abs(kern.D(n))
        lhs = D[sub_indices(cfg, xs[:, None], ts[None, :])].sum(axis=1) / cfg.size
        rhs = np.asarray(M)[levels[xs]] / M[top]
        return _bound(identity, p, lhs, rhs)

    if q is None:
        q = make_weights("fejer")

    if identity in (IdentityId.FN_REFLECT, IdentityId.FN_REFLECT_T):
        n = p["n"]
        variant = TVariant(p.get("variant", TVariant.IDENTITY.value))
        _require(1 <= n <= N, f"{identity.value} needs 1 <= n <= N")
        size = M[n]
        F = kernel_from_multiplier(cfg, norlund_multiplier(q, size, cfg.size)).values
        T = kernel_from_multiplier(cfg, tmean_multiplier(q, size, cfg.size, variant)).values
        psi = kern.psi(size - 1)
        if identity == IdentityId.FN_REFLECT:
            return _equality(identity, p, F, kern.D(size) - psi * np.conj(T))
        return _equality(identity, p, T, kern.D(size) - psi * np.conj(F))

    if identity == IdentityId.FN_BOUND:
        n = p["n"]
        _require(1 <= n <= cfg.size, "FN_BOUND needs 1 <= n <= M_N")
        F = kernel_from_multiplier(cfg, norlund_multiplier(q, n, cfg.size)).values
        return _bound(identity, p, n * np.abs(F), kern.K_levels(_level(n, cfg)))

    if identity == IdentityId.FN_TAIL_BOUND:
        n, t = p["n"], p["t"]
        _require(0 <= t <= N and M[t] <= n <= cfg.size, "FN_TAIL_BOUND needs M_t <= n <= M_N")
        Q = q.prefix_sums(n)
        _require(Q[n] > 0, f"Q_{n} = 0 for {q.label} weights")
        # coefficient of ψ_i in (1/Q_n) Σ_{j=M_t}^{n} q_{n-j} D_j
        i = np.arange(n)
        w = np.zeros(cfg.size)
        w[:n] = Q[n - np.maximum(M[t], i + 1) + 1] / Q[n]
        G = kernel_from_multiplier(cfg, w).values
        return _bound(identity, p, M[t] * np.abs(G), kern.K_levels(_level(n, cfg)))

    raise DomainError(f"unknown identity {identity}")


def kernel_identity_check(
    identity, params: Dict[str, Any], cfg: GroupConfig, q: Optional[WeightSequence] = None
) -> IdentityReport:
    """
    Check one kernel identity at one parameter tuple.

    Equalities report the max residual against identity_tolerance scaled by
    the magnitude of both sides; bounds report the smallest constant c.

    Raises:
        DomainError: parameters outside the identity's admissible range
    """
    try:
        identity = IdentityId(identity)
    except ValueError as e:
        raise DomainError(f"unknown identity {identity!r}") from e
    try:
        return _check(identity, params, _Kernels(cfg), q)
    except KeyError as e:
        raise DomainError(f"{identity.value} is missing parameter {e}") from e


def admissible_params(identity: IdentityId, cfg: GroupConfig, q: Optional[WeightSequence] = None) -> Iterator[Dict[str, Any]]:
    M = cfg.subgroup_sizes
    N = cfg.resolution
    identity = IdentityId(identity)

    def q_positive(n: int) -> bool:
        return q is None or q.Q(n) > 0

    if identity == IdentityId.DN_SHIFT:
        for n in range(N):
            for j in range((cfg.radix[n] - 1) * M[n] + 1):
                yield {"n": n, "j": j}
    elif identity == IdentityId.DN_REFLECT:
        for n in range(N + 1):
            for j in range(M[n] + 1):
                yield {"n": n, "j": j}
    elif identity in (IdentityId.DN_SCALED, IdentityId.KN_SCALED):
        for n in range(N):
            for s in range(1, cfg.radix[n]):
                yield {"n": n, "s": s}
    elif identity == IdentityId.DN_EXPANSION:
        for n in range(cfg.size):
            yield {"n": n}
    elif identity == IdentityId.KN_DECOMP:
        for n in range(1, cfg.size):
            yield {"n": n}
    elif identity in (IdentityId.KN_BOUND, IdentityId.DN_LOCAL_BOUND):
        for n in range(1, cfg.size + 1):
            yield {"n": n}
    elif identity == IdentityId.KN_POINT_BOUND:
        for n in range(N + 1):
            for k in range(N):
                for l in range(k + 1, N + 1):
                    yield {"n": n, "k": k, "l": l}
    elif identity == IdentityId.KN_SUPPORT:
        for n in range(N):
            yield {"n": n}
    elif identity in (IdentityId.FN_REFLECT, IdentityId.FN_REFLECT_T):
        for n in range(1, N + 1):
            if q_positive(M[n]):
                yield {"n": n, "variant": TVariant.IDENTITY.value}
    elif identity == IdentityId.FN_BOUND:
        for n in range(1, cfg.size + 1):
            if q_positive(n):
                yield {"n": n}
    elif identity == IdentityId.FN_TAIL_BOUND:
        for n in range(1, cfg.size + 1):
            if q_positive(n):
                for t in range(N + 1):
                    if M[t] <= n:
                        yield {"n": n, "t": t}
    elif identity == IdentityId.DN_INTERVAL_BOUND:
        for n in range(1, cfg.size + 1):
            for top in range(1, N + 1):
                yield {"n": n, "N": top}


def identity_suite(identity, cfg: GroupConfig, q: Optional[WeightSequence] = None) -> List[IdentityReport]:
    """One report per admissible parameter tuple, exhaustive up to exhaustive_cap."""
    identity = IdentityId(identity)
    if cfg.size > settings.exhaustive_cap:
        raise CapExceededError(f"M_N={cfg.size} exceeds exhaustive_cap={settings.exhaustive_cap}")
    if identity in WEIGHTED and q is None:
        q = make_weights("fejer")
    kern = _Kernels(cfg)
    reports = [_check(identity, params, kern, q) for params in admissible_params(identity, cfg, q)]
    failed = sum(not r.passed for r in reports)
    logger.info("%s on %s: %d checks, %d failed", identity.value, cfg.header(), len(reports), failed)
    return reports
