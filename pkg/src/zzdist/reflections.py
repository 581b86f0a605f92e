"""Reflection operations on concrete zigzag modules.

A reflection at position k tears out the space there and rebuilds it as
the limit or the colimit of the three-space window around k; the two
adjacent structure maps are replaced by the legs of the universal
construction, which also fixes the new local arrow directions.  At an
end position the missing neighbour is a zero space whose phantom arrow
the caller orients explicitly.

Reflections act on morphisms too (the induced map is solved for through
the universal property), and composing enough of them annihilates any
module; ``annihilating_sequence`` builds such a sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .linalg import (FiniteDiagram, Matrix, diagram_colimit, diagram_limit,
                     hstack, solve, vstack)
from .zigzag_core import (BACKWARD, EXTROVERSION, FORWARD, INTROVERSION,
                          Morphism, ZigzagModule, transform_type)

LIMIT = "limit"
COLIMIT = "colimit"


@dataclass(frozen=True)
class ReflectionOp:
    """One reflection step: rebuild position k as a window limit or colimit.

    ``boundary_dir`` orients the phantom zero arrow used when k is an end
    position: ">" draws it rightward, "<" leftward.  It must be present
    exactly at the ends; ``check_applicable`` enforces this against a
    concrete length since the op itself does not know n.
    """

    kind: str
    k: int
    boundary_dir: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in (LIMIT, COLIMIT):
            raise ValueError(f"kind must be {LIMIT!r} or {COLIMIT!r}, got {self.kind!r}")
        if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 1:
            raise ValueError(f"position must be a positive integer, got {self.k!r}")
        if self.boundary_dir not in (None, FORWARD, BACKWARD):
            raise ValueError(f"boundary direction must be {FORWARD!r} or {BACKWARD!r}, "
                             f"got {self.boundary_dir!r}")


def check_applicable(op: ReflectionOp, n: int) -> None:
    """Raise unless ``op`` makes sense for a module of length ``n``."""
    if not 1 <= op.k <= n:
        raise ValueError(f"position {op.k} out of range 1..{n}")
    if op.k in (1, n):
        if op.boundary_dir is None:
            raise ValueError(f"a reflection at end position {op.k} needs a boundary direction")
    elif op.boundary_dir is not None:
        raise ValueError(f"boundary direction given for interior position {op.k}")


def ops_at(n: int, k: int) -> tuple[ReflectionOp, ...]:
    """Every reflection available at position k, in a fixed order.

    Limits come before colimits; at the ends each kind appears with the
    rightward phantom arrow before the leftward one.
    """
    if not 1 <= k <= n:
        raise ValueError(f"position {k} out of range 1..{n}")
    if k in (1, n):
        return (ReflectionOp(LIMIT, k, FORWARD), ReflectionOp(LIMIT, k, BACKWARD),
                ReflectionOp(COLIMIT, k, FORWARD), ReflectionOp(COLIMIT, k, BACKWARD))
    return (ReflectionOp(LIMIT, k), ReflectionOp(COLIMIT, k))


def all_ops(n: int) -> tuple[ReflectionOp, ...]:
    """Every reflection available on length-n modules, position-major."""
    out: list[ReflectionOp] = []
    for k in range(1, n + 1):
        out.extend(ops_at(n, k))
    return tuple(out)


def _window(V: ZigzagModule, op: ReflectionOp) -> FiniteDiagram:
    """The three-slot diagram around position k, slots (k-1, k, k+1).

    End positions get a zero slot on the missing side; its arrow carries
    the direction ``op.boundary_dir`` and an empty matrix.
    """
    k, n, p = op.k, V.n, V.p
    dims = (V.dims[k - 2] if k >= 2 else 0,
            V.dims[k - 1],
            V.dims[k] if k <= n - 1 else 0)
    arrows = []
    if k == 1:
        if op.boundary_dir == FORWARD:
            arrows.append((0, 1, Matrix.zero(dims[1], 0, p)))
        else:
            arrows.append((1, 0, Matrix.zero(0, dims[1], p)))
    else:
        M = V.maps[k - 2]
        arrows.append((0, 1, M) if V.tau.dirs[k - 2] == FORWARD else (1, 0, M))
    if k == n:
        if op.boundary_dir == FORWARD:
            arrows.append((1, 2, Matrix.zero(0, dims[1], p)))
        else:
            arrows.append((2, 1, Matrix.zero(dims[1], 0, p)))
    else:
        M = V.maps[k - 1]
        arrows.append((1, 2, M) if V.tau.dirs[k - 1] == FORWARD else (2, 1, M))
    return FiniteDiagram(p, dims, tuple(arrows))


def apply(op: ReflectionOp, V: ZigzagModule) -> ZigzagModule:
    """The reflected module.

    A limit makes position k a source (both new arrows are the legs out
    of the limit); a colimit makes it a sink.  Away from k the module is
    untouched.
    """
    check_applicable(op, V.n)
    win = _window(V, op)
    if op.kind == LIMIT:
        dim_new, legs = diagram_limit(win)
        new_tau = transform_type(V.tau, EXTROVERSION, op.k)
    else:
        dim_new, legs = diagram_colimit(win)
        new_tau = transform_type(V.tau, INTROVERSION, op.k)
    dims = list(V.dims)
    dims[op.k - 1] = dim_new
    maps = list(V.maps)
    if op.k >= 2:
        maps[op.k - 2] = legs[0]
    if op.k <= V.n - 1:
        maps[op.k - 1] = legs[2]
    return ZigzagModule(new_tau, tuple(dims), tuple(maps))


def apply_to_morphism(op: ReflectionOp, phi: Morphism) -> Morphism:
    """The reflected morphism between the reflected modules.

    Only the component at position k changes; it is the unique map
    between the new spaces commuting with all the legs, obtained by an
    exact linear solve.
    """
    check_applicable(op, phi.n)
    V, W = phi.source, phi.target
    Vr = apply(op, V)
    Wr = apply(op, W)
    k, n, p = op.k, phi.n, V.p
    window_comps = (phi.components[k - 2] if k >= 2 else Matrix.zero(0, 0, p),
                    phi.components[k - 1],
                    phi.components[k] if k <= n - 1 else Matrix.zero(0, 0, p))
    if op.kind == LIMIT:
        _, s_legs = diagram_limit(_window(V, op))
        _, t_legs = diagram_limit(_window(W, op))
        # stacked target legs have full column rank, so the solution is unique
        lhs = vstack(t_legs)
        rhs = vstack([window_comps[i] @ s_legs[i] for i in range(3)])
        mu = solve(lhs, rhs)
    else:
        _, s_legs = diagram_colimit(_window(V, op))
        _, t_legs = diagram_colimit(_window(W, op))
        lhs = hstack(s_legs)
        rhs = hstack([t_legs[i] @ window_comps[i] for i in range(3)])
        x = solve(lhs.transpose(), rhs.transpose())
        mu = None if x is None else x.transpose()
    if mu is None:
        raise AssertionError("universal factoring map does not exist; input was not a morphism")
    comps = list(phi.components)
    comps[k - 1] = mu
    return Morphism(Vr, Wr, tuple(comps))


@dataclass(frozen=True)
class ReflectionSequence:
    """An ordered run of reflections, applied left to right."""

    ops: tuple[ReflectionOp, ...]

    def __post_init__(self) -> None:
        ops = tuple(self.ops)
        for op in ops:
            if not isinstance(op, ReflectionOp):
                raise TypeError(f"sequence entries must be ReflectionOp, got {type(op).__name__}")
        object.__setattr__(self, "ops", ops)

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self) -> Iterator[ReflectionOp]:
        return iter(self.ops)


def apply_sequence(seq: ReflectionSequence, V: ZigzagModule) -> ZigzagModule:
    """Fold ``apply`` over the sequence, left to right."""
    for op in seq:
        V = apply(op, V)
    return V


def annihilating_sequence(V: ZigzagModule) -> ReflectionSequence:
    """A reflection run that empties the module.

    Repeatedly take the lexicographically largest surviving interval
    [b, d] and walk its right end down: at each position j from d to b+1
    pick the first reflection at j whose action shortens [b, j] to
    [b, j-1].  The final one-position remnant is a simple summand and is
    dropped by the sanitizing step built into the symbolic action.  Each
    pass kills every copy of the chosen interval while moving others at
    most sideways, so the point count strictly drops and the loop ends.
    """
    from .diagrams import SymbolicModule, act, decompose, interval_image

    n = V.n
    state = SymbolicModule(V.tau, decompose(V).remove_simple())
    chosen: list[ReflectionOp] = []
    while state.diagram.points:
        before = len(state.diagram.points)
        b, d = max(state.diagram.points)
        for j in range(d, b, -1):
            for op in ops_at(n, j):
                if interval_image(op, state.tau, b, j) == (b, j - 1):
                    break
            else:
                raise AssertionError(f"no reflection at {j} shortens [{b}, {j}]")
            chosen.append(op)
            state = act(op, state)
        if len(state.diagram.points) >= before:
            raise AssertionError("annihilation pass failed to reduce the point count")
    return ReflectionSequence(tuple(chosen))
