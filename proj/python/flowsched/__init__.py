"""Preemptive weighted flow-time scheduling.

Costs are exact ``fractions.Fraction`` values for integer exponents p and
floats otherwise. Times in schedules are Fractions.
"""

from ._core import (
    Instance,
    ParseError,
    ResourceLimitExceeded,
    Schedule,
    Solution,
    ValidationError,
    adversarial,
    density_feasible,
    edf_schedule,
    generate,
    lawler_moore,
    objective,
    oracle,
    solve_poly,
    solve_pseudo,
    solve_qptas,
    validate,
)

__all__ = [
    "Instance",
    "ParseError",
    "ResourceLimitExceeded",
    "Schedule",
    "Solution",
    "ValidationError",
    "adversarial",
    "density_feasible",
    "edf_schedule",
    "generate",
    "lawler_moore",
    "objective",
    "oracle",
    "solve_poly",
    "solve_pseudo",
    "solve_qptas",
    "validate",
]
