"""Enumeration budget control.

Exact results come from exhaustive enumeration, so every enumerating
operation first predicts how many branches it will visit and refuses to
start when the count exceeds the budget.  The default budget is 10^7
weighted branches; the environment variable MIXSCOPE_BUDGET overrides it.
Exceeding the budget raises CapacityError rather than silently sampling.
"""

from __future__ import annotations

import os

DEFAULT_BUDGET = 10**7
ENV_VAR = "MIXSCOPE_BUDGET"


class CapacityError(Exception):
    """Raised when a requested exact computation exceeds the enumeration budget."""


def enumeration_budget() -> int:
    """Return the active budget, honoring the MIXSCOPE_BUDGET override."""
    raw = os.environ.get(ENV_VAR)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_VAR} must be a positive integer, got {raw!r}")
    if value <= 0:
        raise ValueError(f"{ENV_VAR} must be a positive integer, got {raw!r}")
    return value


def require_within_budget(count: int, what: str, hint: str) -> None:
    """Fail with CapacityError when count exceeds the active budget.

    hint names the fallback the caller should suggest (for enumeration
    backends that is Monte-Carlo mode, for dense kernels the sampler).
    """
    budget = enumeration_budget()
    if count > budget:
        raise CapacityError(
            f"{what} needs {count} branches, over the budget of {budget}; {hint}"
        )
