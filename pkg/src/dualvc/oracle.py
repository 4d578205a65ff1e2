"""Slow, obviously-correct validators used to cross-check the fast layers.

Nothing here shares caching or incremental logic with the rest of the
package: loads are recomputed from scratch, covers are found by exhaustive
or branch-and-bound search, and maximal solutions are enumerated over an
integer grid.  Size limits keep every call desk-scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence, Union

from .dual import FitnessOutcome
from .graph import WeightedGraph
from .numeric import RadicalValue

Value = Union[int, RadicalValue]

_MAX_EXACT_N = 24
_MAX_ENUM_M = 6
_MAX_ENUM_W = 8


@dataclass(frozen=True)
class ExactCoverResult:
    cover: frozenset[int]
    weight: int


def _greedy_dual_bound(g: WeightedGraph, taken: int) -> int:
    """Value-sum lower bound on covering the edges missed by `taken`.

    Raises each uncovered edge by the smaller residual of its endpoints;
    any cover of those edges weighs at least the resulting sum.
    """
    residual = list(g.weights)
    total = 0
    for u, v in g.edges:
        if (taken >> u) & 1 or (taken >> v) & 1:
            continue
        t = min(residual[u], residual[v])
        residual[u] -= t
        residual[v] -= t
        total += t
    return total


def exact_min_wvc(g: WeightedGraph) -> ExactCoverResult:
    """Exact minimum-weight vertex cover by branch and bound.

    Branches on the two endpoints of an uncovered edge, pruning with the
    greedy dual bound.  Limited to n <= 24.
    """
    if g.n > _MAX_EXACT_N:
        raise ValueError(f"instance too large: n={g.n} > {_MAX_EXACT_N}")
    best_mask = (1 << g.n) - 1
    best_weight = sum(g.weights)

    def first_uncovered(taken: int) -> int:
        for e, (u, v) in enumerate(g.edges):
            if not ((taken >> u) & 1 or (taken >> v) & 1):
                return e
        return -1

    def rec(taken: int, cost: int) -> None:
        nonlocal best_mask, best_weight
        e = first_uncovered(taken)
        if e < 0:
            if cost < best_weight:
                best_weight = cost
                best_mask = taken
            return
        if cost + _greedy_dual_bound(g, taken) >= best_weight:
            return
        u, v = g.edges[e]
        rec(taken | (1 << u), cost + g.weights[u])
        rec(taken | (1 << v), cost + g.weights[v])

    rec(0, 0)
    cover = frozenset(v for v in range(g.n) if (best_mask >> v) & 1)
    return ExactCoverResult(cover, sum(g.weights[v] for v in cover))


def exhaustive_min_wvc(g: WeightedGraph) -> ExactCoverResult:
    """Brute force over all vertex subsets; self-check partner for the
    branch-and-bound (n <= 12 keeps 2^n small)."""
    if g.n > 12:
        raise ValueError(f"instance too large: n={g.n} > 12")
    best = None
    for mask in range(1 << g.n):
        if all((mask >> u) & 1 or (mask >> v) & 1 for u, v in g.edges):
            w = sum(g.weights[v] for v in range(g.n) if (mask >> v) & 1)
            if best is None or w < best[0]:
                best = (w, mask)
    assert best is not None
    w, mask = best
    return ExactCoverResult(
        frozenset(v for v in range(g.n) if (mask >> v) & 1), w)


def _loads(g: WeightedGraph, values: Sequence[Value]) -> list:
    values = list(values)
    rad = next((v for v in values if isinstance(v, RadicalValue)), None)
    if rad is None:
        zero: Value = 0
    else:
        zero = RadicalValue.zero(rad.alpha)
        values = [v if isinstance(v, RadicalValue)
                  else RadicalValue.from_rational(rad.alpha, v)
                  for v in values]
    loads: list = [zero] * g.n
    for e, (u, v) in enumerate(g.edges):
        loads[u] = loads[u] + values[e]
        loads[v] = loads[v] + values[e]
    return loads


def _cmp_to_weight(load: Value, w: int) -> int:
    """Sign of load - w for int or RadicalValue loads."""
    if isinstance(load, RadicalValue):
        c = load.coeffs
        return RadicalValue(load.alpha, (c[0] - w,) + c[1:]).sign()
    return (load > w) - (load < w)


def validate_mfds_naive(g: WeightedGraph, values: Sequence[Value]) -> bool:
    """Full-recompute check that `values` is a maximal feasible solution."""
    if len(values) != g.m:
        raise ValueError(f"{len(values)} values for {g.m} edges")
    loads = _loads(g, values)
    cmp = [_cmp_to_weight(loads[v], g.weights[v]) for v in range(g.n)]
    if any(c > 0 for c in cmp):
        return False
    return all(cmp[u] == 0 or cmp[v] == 0 for u, v in g.edges)


def reference_fitness(g: WeightedGraph, values: Sequence[Value],
                      proposed: Sequence[Value],
                      w_max: int) -> FitnessOutcome:
    """From-scratch evaluation of the acceptance functional.

    Mirrors dual.fitness without touching DualSolution: violated vertices,
    their incident edges, and both branch formulas are recomputed directly.
    Values must be RadicalValues (use DualSolution.from_ints upstream for
    integer data).
    """
    if len(values) != g.m or len(proposed) != g.m:
        raise ValueError("value vectors must match the edge count")
    loads = _loads(g, values)
    violated = [v for v in range(g.n)
                if _cmp_to_weight(loads[v], g.weights[v]) > 0]
    alpha = values[0].alpha if g.m else None
    assert alpha is not None, "reference_fitness needs at least one edge"
    zero = RadicalValue.zero(alpha)
    if not violated:
        total = zero
        for e in range(g.m):
            total = total + (proposed[e] - values[e])
        new_loads = _loads(g, proposed)
        feasible = all(_cmp_to_weight(new_loads[v], g.weights[v]) <= 0
                       for v in range(g.n))
        value = total if feasible else -total
        return FitnessOutcome(value, value.sign() >= 0)
    viol_edges = set()
    for v in violated:
        viol_edges.update(g.adjacency(v))
    gain = zero
    off = zero
    for e in range(g.m):
        diff = values[e] - proposed[e]
        if e in viol_edges:
            gain = gain + diff
        else:
            off = off + (diff if diff.sign() >= 0 else -diff)
    value = gain - off.scale(g.m * w_max)
    return FitnessOutcome(value, value.sign() >= 0)


def enumerate_mfds(g: WeightedGraph) -> list[tuple[int, ...]]:
    """All integer-valued maximal feasible solutions, by grid search.

    Each edge value ranges over 0..min(weight of endpoints); limited to
    m <= 6 and weights <= 8 so the grid stays small.
    """
    if g.m > _MAX_ENUM_M:
        raise ValueError(f"instance too large: m={g.m} > {_MAX_ENUM_M}")
    if g.n and max(g.weights) > _MAX_ENUM_W:
        raise ValueError(
            f"weights too large for enumeration (> {_MAX_ENUM_W})")
    ranges = [range(min(g.weights[u], g.weights[v]) + 1)
              for u, v in g.edges]
    out = []
    for values in product(*ranges):
        if validate_mfds_naive(g, values):
            out.append(values)
    return out
