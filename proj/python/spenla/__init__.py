"""Exact simulator of a heralded amplifier for single-photon entanglement.

The heavy lifting happens in the compiled extension; this package re-exports
its surface.  All functions take the branch weight a2 (that is, a squared)
rather than the amplitude.
"""

from ._core import (
    RunResult,
    eta_out_closed,
    g_limit,
    gain_closed,
    p1_closed,
    p2_closed,
    pt_closed,
    run,
    success_pattern_names,
    t1_threshold,
    t2_matched,
)

__all__ = [
    "RunResult",
    "eta_out_closed",
    "g_limit",
    "gain_closed",
    "p1_closed",
    "p2_closed",
    "pt_closed",
    "run",
    "success_pattern_names",
    "t1_threshold",
    "t2_matched",
]

__version__ = "0.1.0"
