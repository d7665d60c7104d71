"""Exact induced probabilities on finite spaces, with a Monte Carlo cross-check."""

from .core import (
    Chain,
    Distribution,
    Event,
    JointSpace,
    ProbabilityError,
    RuleMap,
    SampleSpace,
    chain_joint,
    compose,
    conditional,
    event_probability,
    induced_distribution,
    joint_probability,
    marginalize,
    product_space,
    uniform_distribution,
)
from .scenarios import Query, Scenario, build, evaluate, verify_scenario

__version__ = "0.1.0"

__all__ = [
    "Chain",
    "Distribution",
    "Event",
    "JointSpace",
    "ProbabilityError",
    "RuleMap",
    "SampleSpace",
    "chain_joint",
    "compose",
    "conditional",
    "event_probability",
    "induced_distribution",
    "joint_probability",
    "marginalize",
    "product_space",
    "uniform_distribution",
    "Query",
    "Scenario",
    "build",
    "evaluate",
    "verify_scenario",
]
