"""Skill-task matching model: production accounting, recalibration, training
and efficiency checks backed by a C++ core."""

import json

from ._core import (
    IoError,
    actual_income,
    cost,
    expected_income,
    profit_gap,
    task_output,
)
from . import _core

__all__ = [
    "IoError",
    "actual_income",
    "cost",
    "cycle_bounds",
    "expected_income",
    "generate_scenario",
    "matching_values",
    "profit_gap",
    "simulate",
    "task_output",
    "train_matrix",
    "train_values",
]


def simulate(config):
    """Run the recalibration loop for a run config (same schema as the CLI).

    Returns the run summary with an extra "trace" list, one dict per period.
    """
    return json.loads(_core._simulate(json.dumps(config)))


def generate_scenario(spec):
    """Materialize a scenario spec or run config into ideal matrix and base vectors."""
    return json.loads(_core._generate_scenario(json.dumps(spec)))


def train_matrix(skills, tasks, learning=None, seed=0):
    """Fit A on rows of skill totals and task targets. Returns (matrix, report)."""
    matrix, report = _core._train_matrix(skills, tasks, _learning(learning), seed)
    return matrix, json.loads(report)


def train_values(tasks, incomes, learning=None, seed=0):
    """Fit lambda on task plans and their incomes. Returns (values, report)."""
    values, report = _core._train_values(tasks, incomes, _learning(learning), seed)
    return values, json.loads(report)


def matching_values(instance):
    return json.loads(_core._matching_values(json.dumps(instance)))


def cycle_bounds(instance):
    return json.loads(_core._cycle_bounds(json.dumps(instance)))


def _learning(learning):
    return json.dumps(learning) if learning else ""
