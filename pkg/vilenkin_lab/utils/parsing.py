import math
from typing import List

from vilenkin_lab.errors import DomainError


def parse_radix(text: str) -> List[int]:
    """``2,3,4`` -> [2, 3, 4]."""
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise DomainError(f"malformed radix {text!r}") from e


def parse_range(text: str) -> List[int]:
    """``1..24``, ``4,8,12`` or a mix such as ``1..4,8``."""
    out: List[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if ".." in part:
                lo, hi = part.split("..", 1)
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError as e:
        raise DomainError(f"malformed range {text!r}") from e
    if not out:
        raise DomainError("empty range")
    return out


def parse_p(text: str) -> float:
    """``1``, ``2`` or ``inf``."""
    if str(text).strip().lower() in ("inf", "infinity", "∞"):
        return math.inf
    try:
        p = float(text)
    except ValueError as e:
        raise DomainError(f"malformed exponent {text!r}") from e
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    return p
