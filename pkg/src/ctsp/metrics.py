"""Reporting formulas."""

from __future__ import annotations


def rpd(obj_run: float, obj_ref: float) -> float:
    """Relative percentage deviation of ``obj_run`` from ``obj_ref``."""
    if obj_ref <= 0:
        raise ValueError(f"reference value must be positive, got {obj_ref}")
    return 100.0 * (obj_run - obj_ref) / obj_ref


def gap(value: float, bound: float) -> float:
    """Optimality gap of an incumbent ``value`` against a proven ``bound``."""
    if value <= 0:
        raise ValueError(f"incumbent value must be positive, got {value}")
    return 100.0 * abs(value - bound) / value
