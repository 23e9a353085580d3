"""Exact dynamic equilibria of flows over time in fluid queueing networks.

Thin wrapper over the C++ core: scenarios, trajectories and results travel as
JSON-compatible dictionaries, with every rational encoded as a "p/q" string.
"""

import json as _json

from flowtime._core import (
    PiecewiseLinear,
    StepFunction,
    labels_of,
    solve_ntf as _solve_ntf,
    solve_scenario as _solve_scenario,
    verify_trajectory as _verify_trajectory,
    load_paths as _load_paths,
    decompose as _decompose,
    generate as _generate,
)

__all__ = [
    "PiecewiseLinear",
    "StepFunction",
    "solve",
    "verify",
    "solve_ntf",
    "load",
    "decompose",
    "generate",
    "label_function",
]


def solve(scenario, phase_cap=10000):
    """Compute the dynamic equilibrium of a scenario dict; returns the trajectory dict."""
    return _json.loads(_solve_scenario(_json.dumps(scenario), phase_cap))


def verify(scenario, trajectory, cross_check=False):
    """Run the feasibility and equilibrium checks; returns the violation report dict."""
    return _json.loads(_verify_trajectory(_json.dumps(scenario), _json.dumps(trajectory), cross_check))


def solve_ntf(instance):
    """Solve a normalized thin flow instance dict; returns {flow, labels}."""
    return _json.loads(_solve_ntf(_json.dumps(instance)))


def load(scenario):
    """Propagate the scenario's path_flows through the queueing dynamics."""
    return _json.loads(_load_paths(_json.dumps(scenario)))


def decompose(scenario, trajectory):
    """Rewrite a trajectory as per-phase path flows; returns a scenario with path_flows."""
    return _json.loads(_decompose(_json.dumps(scenario), _json.dumps(trajectory)))


def generate(kind, seed):
    """Generate a random "scenario", "instance", or "path-flows" input."""
    return _json.loads(_generate(kind, seed))


def label_function(trajectory, node):
    """The piecewise-linear label function of one node."""
    return labels_of(_json.dumps(trajectory), node)
