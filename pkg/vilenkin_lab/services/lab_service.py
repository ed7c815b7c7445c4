import logging
from typing import Any, Dict, List, Optional

from vilenkin_lab.core.experiments import norm_convergence
from vilenkin_lab.core.group import GroupConfig, build_config
from vilenkin_lab.core.identities import WEIGHTED, IdentityId, identity_suite
from vilenkin_lab.core.kernels import KernelFunction, KernelKind, TVariant, build_kernel, dirichlet_closed, fejer_closed
from vilenkin_lab.core.means import MeanFamily
from vilenkin_lab.core.weights import WeightSequence, parse_weights
from vilenkin_lab.errors import DomainError
from vilenkin_lab.schemas.reports import ConvergenceCurve, IdentityReport
from vilenkin_lab.services.fixture_service import make_fixture
from vilenkin_lab.utils.parsing import parse_p, parse_range

logger = logging.getLogger(__name__)


def resolve_config(radix: List[int], resolution: Optional[int] = None) -> GroupConfig:
    return build_config(radix, resolution if resolution is not None else len(radix))


def resolve_weights(spec: Optional[str]) -> Optional[WeightSequence]:
    return parse_weights(spec) if spec else None


def make_kernel(
    kind: KernelKind,
    n: int,
    cfg: GroupConfig,
    weights: Optional[str] = None,
    variant: TVariant = TVariant.REGULAR,
    closed: bool = False,
) -> KernelFunction:
    """
    Build a kernel by kind.

    Raises:
        DomainError: closed form requested for a weighted kernel, or bad index
    """
    kind = KernelKind(kind)
    if closed:
        if kind == KernelKind.DIRICHLET:
            return dirichlet_closed(n, cfg)
        if kind == KernelKind.FEJER:
            return fejer_closed(n, cfg)
        raise DomainError(f"no closed form for {kind.value} kernels")
    q = resolve_weights(weights)
    if kind in (KernelKind.NORLUND, KernelKind.TMEAN) and q is None:
        q = parse_weights("fejer")
    return build_kernel(kind, n, cfg, q, variant)


def kernel_records(kernel: KernelFunction) -> List[Dict[str, Any]]:
    return [{"index": i, "re": v.real, "im": v.imag} for i, v in enumerate(kernel.values.tolist())]


def run_identities(identity: str, cfg: GroupConfig, weights: Optional[str] = None) -> List[IdentityReport]:
    """Sweep one identity, or every identity when identity is 'all'."""
    q = resolve_weights(weights)
    if identity.lower() == "all":
        ids = list(IdentityId)
    else:
        try:
            ids = [IdentityId(identity.upper())]
        except ValueError as e:
            raise DomainError(f"unknown identity {identity!r}") from e
    reports: List[IdentityReport] = []
    for identity_id in ids:
        reports.extend(identity_suite(identity_id, cfg, q if identity_id in WEIGHTED else None))
    logger.info("identity sweep on %s: %d reports, %d failed", cfg.header(), len(reports),
                sum(not r.passed for r in reports))
    return reports


def identity_records(reports: List[IdentityReport]) -> List[Dict[str, Any]]:
    return [
        {"id": r.identity, "params": r.params_label(), "residual": r.residual, "pass": r.passed}
        for r in reports
    ]


def run_norm_convergence(
    cfg: GroupConfig,
    family: MeanFamily = MeanFamily.FEJER,
    weights: Optional[str] = None,
    alpha: Optional[float] = None,
    p: str = "2",
    fixture: str = "random",
    seed: Optional[int] = None,
    n: str = "1..8",
) -> ConvergenceCurve:
    f, fixture_id = make_fixture(fixture, cfg, seed)
    return norm_convergence(
        family,
        f,
        parse_p(p),
        parse_range(n),
        q=resolve_weights(weights),
        alpha=alpha,
        fixture_id=fixture_id,
    )
