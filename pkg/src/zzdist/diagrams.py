"""Persistence diagrams and the symbolic side of reflections.

A persistence diagram is the multiset of interval supports in a
module's decomposition into interval summands.  ``decompose`` extracts
it from a concrete module by exact rank bookkeeping; ``interval_image``
and ``act`` push diagrams through reflections without touching matrices
at all, deriving the required movement rules from the concrete functor
once per local situation and caching them.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator

from .linalg import FiniteDiagram, diagram_colimit, diagram_limit, rank
from .reflections import LIMIT, ReflectionOp, apply, check_applicable
from .zigzag_core import (EXTROVERSION, FORWARD, INTROVERSION, Orientation,
                          ZigzagModule, interval_module, transform_type)


@dataclass(frozen=True)
class PersistenceDiagram:
    """A multiset of intervals [b, d] inside positions 1..n.

    ``points`` is kept expanded (one entry per copy) and sorted, so equal
    diagrams compare and hash equal.
    """

    n: int
    points: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 2:
            raise ValueError(f"ambient length must be an integer >= 2, got {self.n!r}")
        pts = sorted((int(b), int(d)) for (b, d) in self.points)
        for (b, d) in pts:
            if not 1 <= b <= d <= self.n:
                raise ValueError(f"interval [{b}, {d}] out of range 1..{self.n}")
        object.__setattr__(self, "points", tuple(pts))

    @classmethod
    def from_counts(cls, n: int, counts: Iterable[tuple[int, int, int]]) -> "PersistenceDiagram":
        """Build from (b, d, multiplicity) triples."""
        pts: list[tuple[int, int]] = []
        for (b, d, m) in counts:
            if m < 1:
                raise ValueError(f"multiplicity must be >= 1, got {m} for [{b}, {d}]")
            pts.extend([(b, d)] * m)
        return cls(n, tuple(pts))

    def counter(self) -> Counter:
        return Counter(self.points)

    def counts(self) -> tuple[tuple[int, int, int], ...]:
        """Sorted (b, d, multiplicity) triples."""
        c = self.counter()
        return tuple((b, d, c[(b, d)]) for (b, d) in sorted(c))

    def remove_simple(self) -> "PersistenceDiagram":
        """Drop every one-position interval; idempotent."""
        return PersistenceDiagram(self.n, tuple(pt for pt in self.points if pt[0] != pt[1]))

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)


def diagram_contains(inner: PersistenceDiagram, outer: PersistenceDiagram) -> bool:
    """Whether every interval of ``inner`` occurs in ``outer`` at least as often."""
    if inner.n != outer.n:
        raise ValueError(f"length mismatch: {inner.n} vs {outer.n}")
    co = outer.counter()
    return all(co.get(pt, 0) >= m for pt, m in inner.counter().items())


@dataclass(frozen=True)
class SymbolicModule:
    """A module up to isomorphism: an orientation plus its diagram."""

    tau: Orientation
    diagram: PersistenceDiagram

    def __post_init__(self) -> None:
        if self.tau.n != self.diagram.n:
            raise ValueError(f"length mismatch: type has {self.tau.n} positions, "
                             f"diagram has {self.diagram.n}")

    @property
    def n(self) -> int:
        return self.tau.n


def _segment_rank(V: ZigzagModule, b: int, d: int) -> int:
    """Rank of the canonical limit-to-colimit map of the slice b..d.

    This counts the interval summands whose support contains all of
    [b, d]: such a summand contributes an isomorphism slice, while any
    summand missing part of [b, d] contributes zero.  The composite is
    taken through the leftmost slot; any slot gives the same rank.
    """
    dims = V.dims[b - 1:d]
    arrows = []
    for i in range(b, d):
        M = V.maps[i - 1]
        if V.tau.dirs[i - 1] == FORWARD:
            arrows.append((i - b, i - b + 1, M))
        else:
            arrows.append((i - b + 1, i - b, M))
    D = FiniteDiagram(V.p, tuple(dims), tuple(arrows))
    _, lim_legs = diagram_limit(D)
    _, col_legs = diagram_colimit(D)
    return rank(col_legs[0] @ lim_legs[0])


def decompose(V: ZigzagModule) -> PersistenceDiagram:
    """The multiset of interval supports in V's interval decomposition.

    Multiplicities come from inclusion-exclusion over segment ranks:
    m(b, d) = rk(b, d) - rk(b-1, d) - rk(b, d+1) + rk(b-1, d+1), with rk
    taken as zero outside 1..n.  Negative intermediate values cannot
    occur for honest inputs and raise immediately.
    """
    n = V.n
    rk: dict[tuple[int, int], int] = {}
    for b in range(1, n + 1):
        for d in range(b, n + 1):
            rk[(b, d)] = _segment_rank(V, b, d)

    def get(b: int, d: int) -> int:
        return rk.get((b, d), 0)

    mult: dict[tuple[int, int], int] = {}
    for b in range(1, n + 1):
        for d in range(b, n + 1):
            m = get(b, d) - get(b - 1, d) - get(b, d + 1) + get(b - 1, d + 1)
            if m < 0:
                raise AssertionError(f"negative multiplicity {m} at [{b}, {d}]")
            if m:
                mult[(b, d)] = m
    for i in range(1, n + 1):
        covering = sum(m for ((b, d), m) in mult.items() if b <= i <= d)
        if covering != V.dims[i - 1]:
            raise AssertionError(f"decomposition covers dimension {covering} at position {i}, "
                                 f"module has {V.dims[i - 1]}")
    pts: list[tuple[int, int]] = []
    for (b, d), m in sorted(mult.items()):
        pts.extend([(b, d)] * m)
    return PersistenceDiagram(n, tuple(pts))


# Derived movement rules: key -> None (interval annihilated) or (db, dd).
# A reflection only rearranges the three window slots, so the image of an
# interval depends only on the op, the arrow directions inside the window,
# and where the interval's ends sit relative to k; offsets are clamped to
# +-2 because nothing distinguishes farther ends.  Filling is idempotent,
# so concurrent readers are safe.
_IMAGE_RULES: dict[tuple, tuple[int, int] | None] = {}


def _rule_key(op: ReflectionOp, tau: Orientation, b: int, d: int) -> tuple:
    k, n = op.k, tau.n
    pos = "first" if k == 1 else ("last" if k == n else "mid")
    left = tau.dirs[k - 2] if k >= 2 else None
    right = tau.dirs[k - 1] if k <= n - 1 else None

    def clamp(x: int) -> int:
        return max(-2, min(2, x))

    return (op.kind, op.boundary_dir, pos, left, right, clamp(b - k), clamp(d - k))


def _derive_rule(op: ReflectionOp, tau: Orientation, b: int, d: int) -> tuple[int, int] | None:
    image = decompose(apply(op, interval_module(tau, b, d)))
    if len(image.points) == 0:
        if b != d:
            raise AssertionError(f"reflection annihilated [{b}, {d}], which spans two positions")
        return None
    if len(image.points) != 1:
        raise AssertionError(f"reflection of an interval decomposed into {len(image.points)} "
                             "pieces; expected at most one")
    (b2, d2), = image.points
    if abs(b2 - b) + abs(d2 - d) > 1:
        raise AssertionError(f"reflection moved [{b}, {d}] to [{b2}, {d2}], further than one step")
    return (b2 - b, d2 - d)


def interval_image(op: ReflectionOp, tau: Orientation, b: int, d: int) -> tuple[int, int] | None:
    """Where a reflection sends the interval [b, d], or None if it dies.

    The image is reported raw: a one-position image is returned, not
    dropped.  Rules are derived on first use by running the concrete
    functor on the corresponding interval module and decomposing.
    """
    check_applicable(op, tau.n)
    if not 1 <= b <= d <= tau.n:
        raise ValueError(f"interval [{b}, {d}] out of range 1..{tau.n}")
    key = _rule_key(op, tau, b, d)
    if key not in _IMAGE_RULES:
        _IMAGE_RULES[key] = _derive_rule(op, tau, b, d)
    delta = _IMAGE_RULES[key]
    if delta is None:
        return None
    return (b + delta[0], d + delta[1])


def act(op: ReflectionOp, S: SymbolicModule) -> SymbolicModule:
    """Push a symbolic module through a reflection.

    Every interval moves by its derived rule, annihilated intervals
    disappear, and one-position intervals are sanitized away afterwards,
    matching how reflection runs are costed.
    """
    check_applicable(op, S.n)
    new_tau = transform_type(S.tau, EXTROVERSION if op.kind == LIMIT else INTROVERSION, op.k)
    images = (interval_image(op, S.tau, b, d) for (b, d) in S.diagram)
    pts = tuple(img for img in images if img is not None)
    return SymbolicModule(new_tau, PersistenceDiagram(S.n, pts).remove_simple())
