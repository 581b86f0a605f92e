"""Distance between zigzag modules by counting reflection steps.

Two modules are close when short runs of reflections carry each into a
summand of the other, up to reversing invertible arrows and ignoring
one-position summands.  The search runs over symbolic states: an
orientation normalized at every flippable arrow plus a sanitized
diagram.  Breadth-first search is the reference algorithm; a best-first
variant with an admissible lower bound is available behind a flag and
must agree with it.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass

from .diagrams import PersistenceDiagram, SymbolicModule, act
from .reflections import ReflectionSequence, all_ops
from .zigzag_core import canonical_type, is_summand_upto_equiv

_StateKey = tuple[tuple[str, ...], tuple[tuple[int, int], ...]]

# successor lists depend only on the state, so they are shared globally;
# fills are idempotent
_SUCCESSORS: dict[_StateKey, tuple] = {}
_SEARCHES: dict[tuple, tuple[int, ReflectionSequence]] = {}


def _check_p(p: float) -> float:
    if not (isinstance(p, (int, float)) and not isinstance(p, bool) and p >= 1):
        raise ValueError(f"p must be a real number >= 1 or infinity, got {p!r}")
    return float(p)


def cost(seq: ReflectionSequence, p: float = 1) -> float:
    """Cost of a reflection run: its length to the power 1/p.

    The empty run costs 0 for every p, including infinity.
    """
    p = _check_p(p)
    length = len(seq)
    if length == 0:
        return 0.0
    return float(length) ** (1.0 / p)


def _canonical(S: SymbolicModule) -> SymbolicModule:
    diagram = S.diagram.remove_simple()
    return SymbolicModule(canonical_type(S.tau, diagram.points), diagram)


def _key(S: SymbolicModule) -> _StateKey:
    return (S.tau.dirs, S.diagram.points)


def _successors(S: SymbolicModule):
    key = _key(S)
    cached = _SUCCESSORS.get(key)
    if cached is None:
        cached = tuple((op, _canonical(act(op, S))) for op in all_ops(S.n))
        _SUCCESSORS[key] = cached
    return cached


def _depth_cap(start: SymbolicModule) -> int:
    return start.n * max(1, len(start.diagram.points))


def _search(source: SymbolicModule, target: SymbolicModule) -> tuple[int, ReflectionSequence]:
    """Fewest reflections carrying source into a summand of target, with
    a witness run realizing the minimum."""
    if source.n != target.n:
        raise ValueError(f"length mismatch: {source.n} vs {target.n}")
    start = _canonical(source)
    cache_key = (_key(start), target.tau.dirs, target.diagram.points)
    hit = _SEARCHES.get(cache_key)
    if hit is not None:
        return hit

    def is_goal(S: SymbolicModule) -> bool:
        return is_summand_upto_equiv(S.tau, S.diagram, target.tau, target.diagram)

    if is_goal(start):
        result = (0, ReflectionSequence(()))
        _SEARCHES[cache_key] = result
        return result

    cap = _depth_cap(start)
    # key -> (parent key, op); the start maps to None
    parents: dict[_StateKey, tuple[_StateKey, object] | None] = {_key(start): None}
    frontier = [start]
    depth = 0
    goal_key = None
    while goal_key is None:
        depth += 1
        if depth > cap:
            raise AssertionError(f"search exceeded its depth bound {cap}")
        layer: list[SymbolicModule] = []
        for S in frontier:
            sk = _key(S)
            for op, T in _successors(S):
                tk = _key(T)
                if tk in parents:
                    continue
                parents[tk] = (sk, op)
                if is_goal(T):
                    goal_key = tk
                    break
                layer.append(T)
            if goal_key is not None:
                break
        if goal_key is None:
            frontier = layer
            if not frontier:
                raise AssertionError("search space exhausted; the empty module should be a goal")

    ops = []
    walk = goal_key
    while parents[walk] is not None:
        walk, op = parents[walk]
        ops.append(op)
    ops.reverse()
    if len(ops) != depth:
        raise AssertionError("witness length disagrees with search depth")
    result = (depth, ReflectionSequence(tuple(ops)))
    _SEARCHES[cache_key] = result
    return result


def _lower_bound(S: SymbolicModule, target_points: tuple[tuple[int, int], ...]) -> int:
    """Steps needed from this state, never overestimating.

    Every interval must either shrink to one position (at least its
    length in steps, since a step moves each end at most one) or land
    exactly on some interval of the target; one step advances every
    interval at most one unit, so the worst single interval bounds the
    whole run.
    """
    worst = 0
    for (b, d) in S.diagram.points:
        need = d - b
        for (b2, d2) in target_points:
            need = min(need, abs(b - b2) + abs(d - d2))
        worst = max(worst, need)
    return worst


def _search_best_first(source: SymbolicModule, target: SymbolicModule) -> int:
    if source.n != target.n:
        raise ValueError(f"length mismatch: {source.n} vs {target.n}")
    start = _canonical(source)

    def is_goal(S: SymbolicModule) -> bool:
        return is_summand_upto_equiv(S.tau, S.diagram, target.tau, target.diagram)

    tie = itertools.count()
    tpts = target.diagram.points
    best: dict[_StateKey, int] = {_key(start): 0}
    heap = [(_lower_bound(start, tpts), next(tie), 0, start)]
    while heap:
        _, _, g, S = heapq.heappop(heap)
        if g > best.get(_key(S), math.inf):
            continue
        if is_goal(S):
            return g
        for _, T in _successors(S):
            tk = _key(T)
            ng = g + 1
            if ng < best.get(tk, math.inf):
                best[tk] = ng
                heapq.heappush(heap, (ng + _lower_bound(T, tpts), next(tie), ng, T))
    raise AssertionError("search space exhausted; the empty module should be a goal")


def min_steps(source: SymbolicModule, target: SymbolicModule, *,
              best_first: bool = False) -> int:
    """Fewest reflections after which the source sits inside the target
    as a summand up to reversing invertible arrows.

    ``best_first`` switches to the guided search; both algorithms return
    the same value on every input.
    """
    if best_first:
        return _search_best_first(source, target)
    return _search(source, target)[0]


@dataclass(frozen=True)
class ReflectionDistance:
    """A distance value together with the two runs that realize it.

    ``forward`` carries the first module into a summand of the second,
    ``backward`` the other way around; the value is the larger length to
    the power 1/p.
    """

    value: float
    steps: int
    forward: ReflectionSequence
    backward: ReflectionSequence


def reflection_distance(V: SymbolicModule, W: SymbolicModule, p: float = 1) -> ReflectionDistance:
    """The reflection distance between two symbolic modules.

    The two directions are independent minimizations, so the distance is
    the maximum of the two minimal lengths, raised to 1/p; zero stays
    exactly zero for every p.
    """
    p = _check_p(p)
    s_vw, run_vw = _search(V, W)
    s_wv, run_wv = _search(W, V)
    steps = max(s_vw, s_wv)
    value = 0.0 if steps == 0 else float(steps) ** (1.0 / p)
    return ReflectionDistance(value, steps, run_vw, run_wv)
