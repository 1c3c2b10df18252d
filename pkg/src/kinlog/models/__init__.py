"""Desk-scale models, the formula evaluator, and the checking suites."""

from .core import (  # noqa: F401
    Body,
    FTLObserverPresent,
    InvalidSpec,
    Model,
    NotAnObserver,
    build_model,
    ether_drift,
    relativize_placement,
    sr_boost_placement,
    standard_spec,
    transform_model,
)
from .evalr import FAILS, HOLDS, UNDECIDED, EvalResult, Evaluator, recheck  # noqa: F401
from .checks import (  # noqa: F401
    DIRECTIONS,
    check_interpretation,
    check_roundtrip,
    check_velocity_remap,
    eval_axiom,
    hooks_for,
)
