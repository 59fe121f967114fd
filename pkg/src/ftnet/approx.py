"""Approximation algorithms for general directed path instances.

`approx_ftp_kplus1` is the flow rounding: a min-cost integral (k+1)-flow
with capacity 1 on vulnerable and k+1 on safe arcs; its support is
feasible and costs at most (k+1) times the optimum (the factor comes
from safe arcs possibly carrying k+1 units while being paid once per
unit of the fractional bound).

`approx_ftp_k` sharpens that to factor k by decomposing at bridges: the
same two-tier pair metric as the exact single-fault solver, except the
second tier prices (u, v) at the support weight of a min-cost (k+1)-flow
with capacity k on safe and 1 on vulnerable arcs.
"""

from __future__ import annotations

from .errors import ValidationError
from .exact import _metric_route
from .flows import CapacityProfile, min_cost_flow
from .instance import ArcSet, Instance


def approx_ftp_kplus1(inst: Instance) -> ArcSet:
    """Support of a min-cost (k+1)-flow; feasible, cost <= (k+1) * OPT."""
    if inst.mode != "ftp":
        raise ValidationError("approx_ftp_kplus1 requires an ftp instance")
    k = inst.k
    caps = CapacityProfile.build(inst, lambda i, a: 1 if a.vulnerable else k + 1)
    result = min_cost_flow(inst, caps, k + 1)
    return result.support


def approx_ftp_k(inst: Instance) -> ArcSet:
    """Metric-path assembly of segment flows; feasible, cost <= k * OPT."""
    if inst.mode != "ftp":
        raise ValidationError("approx_ftp_k requires an ftp instance")
    if inst.k < 1:
        raise ValidationError("approx_ftp_k requires k >= 1")
    ids = _metric_route(inst, unit_ell2=False)
    return ArcSet.of(inst, ids)
