import logging
from typing import Dict, Optional, Tuple

import numpy as np

from vilenkin_lab.config import settings
from vilenkin_lab.core.characters import character_values
from vilenkin_lab.core.experiments import lacunary_fixture
from vilenkin_lab.core.function_space import StepFunction
from vilenkin_lab.core.group import GroupConfig, interval_mask
from vilenkin_lab.errors import DomainError

# Configure logging for this module
logger = logging.getLogger(__name__)


def random_step_function(cfg: GroupConfig, seed: Optional[int] = None) -> StepFunction:
    """Complex Gaussian values on every coset, reproducible from the seed."""
    seed = settings.default_seed if seed is None else seed
    rng = np.random.default_rng(seed)
    values = rng.standard_normal(cfg.size) + 1j * rng.standard_normal(cfg.size)
    return StepFunction(cfg, values)


def polynomial_fixture(cfg: GroupConfig, coefficients: Dict[int, complex]) -> StepFunction:
    """Σ c_n ψ_n."""
    values = np.zeros(cfg.size, dtype=complex)
    for n, c in coefficients.items():
        values += c * character_values(cfg, n)
    return StepFunction(cfg, values)


def interval_fixture(cfg: GroupConfig, n: int, center: int = 0) -> StepFunction:
    return StepFunction(cfg, interval_mask(cfg, center, n).astype(complex))


def make_fixture(spec: str, cfg: GroupConfig, seed: Optional[int] = None) -> Tuple[StepFunction, str]:
    """
    Build a fixture from a short description.

    Args:
        spec: one of ``random``, ``constant:c``, ``character:n``,
            ``poly:n=c,n=c``, ``interval:n`` or ``interval:n@center``,
            ``lacunary:alpha``
        cfg: group configuration
        seed: seed for ``random``

    Returns:
        Tuple of the step function and its fixture id

    Raises:
        DomainError: if the description cannot be parsed
    """
    kind, _, arg = spec.strip().partition(":")
    try:
        if kind == "random":
            seed = settings.default_seed if seed is None else seed
            return random_step_function(cfg, seed), f"random:{seed}"
        if kind == "constant":
            return StepFunction.constant(cfg, complex(arg or "1")), spec
        if kind == "character":
            return StepFunction(cfg, character_values(cfg, int(arg))), spec
        if kind == "poly":
            terms = {}
            for part in arg.split(","):
                n, _, c = part.partition("=")
                terms[int(n)] = complex(c or "1")
            return polynomial_fixture(cfg, terms), spec
        if kind == "interval":
            level, _, center = arg.partition("@")
            return interval_fixture(cfg, int(level), int(center or 0)), spec
        if kind == "lacunary":
            return lacunary_fixture(cfg, float(arg)), spec
    except ValueError as e:
        if isinstance(e, DomainError):
            raise
        raise DomainError(f"malformed fixture {spec!r}: {e}") from e
    raise DomainError(f"unknown fixture kind {kind!r}")
