"""Numerics for the massless Vlasov-Poisson system."""

from ._core import (
    BarrierViolation,
    InitialData,
    SimConfig,
    charge_identity,
    family_names,
    free_stream_moment,
    inequality_scan,
    simulate,
    solve_field,
    verify_algebra,
)

__all__ = [
    "BarrierViolation",
    "InitialData",
    "SimConfig",
    "charge_identity",
    "family_names",
    "free_stream_moment",
    "inequality_scan",
    "simulate",
    "solve_field",
    "verify_algebra",
]
