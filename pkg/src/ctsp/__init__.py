"""Coupled-task single-machine scheduling with exact delays."""

from .instance import Instance, Job, generate_instance, load_instance, parse_instance, upper_bound
from .schedule import InsertionCandidate, Schedule, validate

__all__ = [
    "Instance",
    "InsertionCandidate",
    "Job",
    "Schedule",
    "generate_instance",
    "load_instance",
    "parse_instance",
    "upper_bound",
    "validate",
]
