"""Python bindings for the degenflow solver and verifier."""

from ._core import (
    DegenflowError,
    accretive,
    audit,
    chi,
    fnv1a,
    normalize_scenario,
    run,
    sgn_delta,
    verify,
)

__all__ = [
    "DegenflowError",
    "accretive",
    "audit",
    "chi",
    "fnv1a",
    "normalize_scenario",
    "run",
    "sgn_delta",
    "verify",
]
