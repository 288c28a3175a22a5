"""Polynomial entropy estimates, constructive covers and bound checks."""

from ._core import (
    BudgetError,
    ConfigError,
    HpolError,
    NotApplicableError,
    UnknownSystemError,
    bound_instances,
    estimate,
    list_systems,
    rotation_number,
    run,
    suspension_flow,
    verify,
)

__all__ = [
    "BudgetError",
    "ConfigError",
    "HpolError",
    "NotApplicableError",
    "UnknownSystemError",
    "bound_instances",
    "estimate",
    "list_systems",
    "rotation_number",
    "run",
    "suspension_flow",
    "verify",
]
