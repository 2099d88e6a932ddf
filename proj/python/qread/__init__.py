"""Polar coding analysis for quantum reading of binary memory cells."""

from ._core import (
    MemoryCell,
    ProbeState,
    ad_cell,
    channel_outputs,
    encode_bits,
    fidelity,
    holevo_lower_bound,
    kraus_cell,
    one_step_report,
    optimize_probe,
    polarization_profile,
    probe_sweep,
    rate,
    rate_reliability_bounds,
    reliability,
    roga_upper_bound,
    simulate,
    transform_rows,
    von_neumann_entropy,
)

__all__ = [
    "MemoryCell",
    "ProbeState",
    "ad_cell",
    "channel_outputs",
    "encode_bits",
    "fidelity",
    "holevo_lower_bound",
    "kraus_cell",
    "one_step_report",
    "optimize_probe",
    "polarization_profile",
    "probe_sweep",
    "rate",
    "rate_reliability_bounds",
    "reliability",
    "roga_upper_bound",
    "simulate",
    "transform_rows",
    "von_neumann_entropy",
]
