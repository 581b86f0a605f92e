"""Zigzag modules and their basic calculus.

A zigzag module of length n is a row of n vector spaces joined by n-1
linear maps, each pointing either forward (">") or backward ("<").  The
tuple of arrow directions is the module's orientation type.  This module
provides the type algebra (reversal and the source/sink placements used
by reflections), interval modules, direct sums, morphisms, conjugation by
base change, and reversal of invertible arrows together with the summand
preorder it generates on decomposed modules.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator

from .linalg import (DEFAULT_PRIME, Matrix, block_diag, inverse, is_invertible,
                     _check_prime)

FORWARD = ">"
BACKWARD = "<"

SINK = "sink"
SOURCE = "source"
FORWARD_FLOW = "forward_flow"
BACKWARD_FLOW = "backward_flow"

REVERSAL = "reversal"
EXTROVERSION = "extroversion"
INTROVERSION = "introversion"


@dataclass(frozen=True)
class Orientation:
    """Arrow directions of a length-n zigzag; entry k joins positions k, k+1."""

    dirs: tuple[str, ...]

    def __post_init__(self) -> None:
        dirs = tuple(self.dirs)
        if len(dirs) < 1:
            raise ValueError("a zigzag needs at least two positions (one arrow)")
        for i, d in enumerate(dirs):
            if d not in (FORWARD, BACKWARD):
                raise ValueError(f"entry {i + 1} must be {FORWARD!r} or {BACKWARD!r}, got {d!r}")
        object.__setattr__(self, "dirs", dirs)

    @classmethod
    def from_string(cls, s: str) -> "Orientation":
        return cls(tuple(s))

    def to_string(self) -> str:
        return "".join(self.dirs)

    @property
    def n(self) -> int:
        """Number of positions."""
        return len(self.dirs) + 1

    def entry(self, k: int) -> str:
        """Direction of arrow k (1-based, joining positions k and k+1)."""
        if not 1 <= k <= len(self.dirs):
            raise ValueError(f"arrow index {k} out of range 1..{len(self.dirs)}")
        return self.dirs[k - 1]

    def __str__(self) -> str:
        return self.to_string()


def transform_type(tau: Orientation, kind: str, k: int) -> Orientation:
    """Orientation after an operation at index k.

    ``reversal`` flips arrow k.  ``extroversion`` turns position k into a
    source (both adjacent arrows leave k); ``introversion`` turns it into a
    sink (both adjacent arrows enter k).  At the ends only the one existing
    adjacent arrow is set.
    """
    n = tau.n
    dirs = list(tau.dirs)
    if kind == REVERSAL:
        if not 1 <= k <= n - 1:
            raise ValueError(f"reversal index {k} out of range 1..{n - 1}")
        dirs[k - 1] = FORWARD if dirs[k - 1] == BACKWARD else BACKWARD
    elif kind in (EXTROVERSION, INTROVERSION):
        if not 1 <= k <= n:
            raise ValueError(f"index {k} out of range 1..{n}")
        left_dir, right_dir = (BACKWARD, FORWARD) if kind == EXTROVERSION else (FORWARD, BACKWARD)
        # arrow k-1 joins (k-1, k); arrow k joins (k, k+1)
        if k >= 2:
            dirs[k - 2] = left_dir
        if k <= n - 1:
            dirs[k - 1] = right_dir
    else:
        raise ValueError(f"unknown type transformation {kind!r}")
    return Orientation(tuple(dirs))


def classify_index(tau: Orientation, k: int) -> str:
    """Role of position k: sink, source, or one of the two flow kinds.

    k is a sink when no arrow leaves it and a source when no arrow enters
    it; end positions are always one or the other.  Interior positions
    whose two adjacent arrows agree are flows, named by the shared
    direction.
    """
    n = tau.n
    if not 1 <= k <= n:
        raise ValueError(f"index {k} out of range 1..{n}")
    if k == 1:
        return SINK if tau.dirs[0] == BACKWARD else SOURCE
    if k == n:
        return SINK if tau.dirs[-1] == FORWARD else SOURCE
    left, right = tau.dirs[k - 2], tau.dirs[k - 1]
    if left == FORWARD and right == BACKWARD:
        return SINK
    if left == BACKWARD and right == FORWARD:
        return SOURCE
    return FORWARD_FLOW if left == FORWARD else BACKWARD_FLOW


@dataclass(frozen=True)
class ZigzagModule:
    """A concrete zigzag module: dimensions plus structure matrices.

    For a forward arrow k the matrix ``maps[k-1]`` sends position k to
    position k+1 and so has shape (dims[k], dims[k-1]) in 0-based terms;
    for a backward arrow the shape is transposed accordingly.
    """

    tau: Orientation
    dims: tuple[int, ...]
    maps: tuple[Matrix, ...]

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        maps = tuple(self.maps)
        n = self.tau.n
        if len(dims) != n:
            raise ValueError(f"expected {n} dimensions, got {len(dims)}")
        if any(d < 0 for d in dims):
            raise ValueError(f"dimensions must be nonnegative, got {dims}")
        if len(maps) != n - 1:
            raise ValueError(f"expected {n - 1} structure maps, got {len(maps)}")
        p = maps[0].p
        for i, M in enumerate(maps):
            if not isinstance(M, Matrix):
                raise ValueError(f"map {i + 1} is {type(M).__name__}, expected Matrix")
            if M.p != p:
                raise ValueError("structure maps must share one field")
            if self.tau.dirs[i] == FORWARD:
                want = (dims[i + 1], dims[i])
            else:
                want = (dims[i], dims[i + 1])
            if M.shape != want:
                raise ValueError(f"map {i + 1} has shape {M.shape}, expected {want}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "maps", maps)

    @property
    def n(self) -> int:
        return self.tau.n

    @property
    def p(self) -> int:
        return self.maps[0].p


def _empty_map(direction: str, dim_left: int, dim_right: int, p: int) -> Matrix:
    if direction == FORWARD:
        return Matrix.zero(dim_right, dim_left, p)
    return Matrix.zero(dim_left, dim_right, p)


def zero_module(tau: Orientation, p: int = DEFAULT_PRIME) -> ZigzagModule:
    n = tau.n
    maps = tuple(_empty_map(tau.dirs[i], 0, 0, p) for i in range(n - 1))
    return ZigzagModule(tau, (0,) * n, maps)


def interval_module(tau: Orientation, b: int, d: int, p: int = DEFAULT_PRIME) -> ZigzagModule:
    """The interval module supported on positions b..d.

    One-dimensional on the support with identity maps strictly inside it,
    zero elsewhere.
    """
    n = tau.n
    if not 1 <= b <= d <= n:
        raise ValueError(f"interval [{b}, {d}] out of range 1..{n}")
    dims = tuple(1 if b <= i <= d else 0 for i in range(1, n + 1))
    maps = []
    for i in range(1, n):
        if b <= i and i + 1 <= d:
            maps.append(Matrix.identity(1, p))
        else:
            maps.append(_empty_map(tau.dirs[i - 1], dims[i - 1], dims[i], p))
    return ZigzagModule(tau, dims, tuple(maps))


def direct_sum(V: ZigzagModule, W: ZigzagModule) -> ZigzagModule:
    if V.tau != W.tau:
        raise ValueError(f"type mismatch: {V.tau} vs {W.tau}")
    if V.p != W.p:
        raise ValueError(f"field mismatch: GF({V.p}) vs GF({W.p})")
    dims = tuple(a + b for a, b in zip(V.dims, W.dims))
    maps = tuple(block_diag(a, b) for a, b in zip(V.maps, W.maps))
    return ZigzagModule(V.tau, dims, maps)


def synthesize(tau: Orientation, points: Iterable[tuple[int, int]],
               p: int = DEFAULT_PRIME) -> ZigzagModule:
    """Direct sum of interval modules, one per (birth, death) point.

    Equal to folding ``direct_sum`` over the points in sorted order; built
    directly so each summand occupies one fixed coordinate per position.
    """
    n = tau.n
    pts = sorted((int(b), int(d)) for (b, d) in points)
    for (b, d) in pts:
        if not 1 <= b <= d <= n:
            raise ValueError(f"interval [{b}, {d}] out of range 1..{n}")
    covers = [[j for j, (b, d) in enumerate(pts) if b <= i <= d] for i in range(1, n + 1)]
    dims = tuple(len(c) for c in covers)
    maps = []
    for i in range(1, n):
        left, right = covers[i - 1], covers[i]
        if tau.dirs[i - 1] == FORWARD:
            a = Matrix.zero(len(right), len(left), p).data.copy()
            for col, j in enumerate(left):
                if j in right:
                    a[right.index(j), col] = 1
        else:
            a = Matrix.zero(len(left), len(right), p).data.copy()
            for col, j in enumerate(right):
                if j in left:
                    a[left.index(j), col] = 1
        maps.append(Matrix(p, a))
    return ZigzagModule(tau, dims, tuple(maps))


@dataclass(frozen=True)
class Morphism:
    """A morphism of zigzag modules over one type: commuting components."""

    source: ZigzagModule
    target: ZigzagModule
    components: tuple[Matrix, ...]

    def __post_init__(self) -> None:
        comps = tuple(self.components)
        if self.source.tau != self.target.tau:
            raise ValueError("source and target must share an orientation type")
        if self.source.p != self.target.p:
            raise ValueError("source and target must share a field")
        if len(comps) != self.source.n:
            raise ValueError(f"expected {self.source.n} components, got {len(comps)}")
        for i, c in enumerate(comps):
            want = (self.target.dims[i], self.source.dims[i])
            if not isinstance(c, Matrix) or c.p != self.source.p:
                raise ValueError(f"component {i + 1} must be a Matrix over GF({self.source.p})")
            if c.shape != want:
                raise ValueError(f"component {i + 1} has shape {c.shape}, expected {want}")
        object.__setattr__(self, "components", comps)

    @property
    def n(self) -> int:
        return self.source.n


def identity_morphism(V: ZigzagModule) -> Morphism:
    comps = tuple(Matrix.identity(d, V.p) for d in V.dims)
    return Morphism(V, V, comps)


def compose(outer: Morphism, inner: Morphism) -> Morphism:
    """The composite outer after inner."""
    if inner.target is not outer.source and inner.target != outer.source:
        raise ValueError("morphisms are not composable")
    comps = tuple(a @ b for a, b in zip(outer.components, inner.components))
    return Morphism(inner.source, outer.target, comps)


def is_morphism(phi: Morphism) -> bool:
    """True when every square of phi commutes."""
    V, W = phi.source, phi.target
    for i in range(V.n - 1):
        if V.tau.dirs[i] == FORWARD:
            left = phi.components[i + 1] @ V.maps[i]
            right = W.maps[i] @ phi.components[i]
        else:
            left = phi.components[i] @ V.maps[i]
            right = W.maps[i] @ phi.components[i + 1]
        if left != right:
            return False
    return True


def conjugate(V: ZigzagModule, bases: Iterable[Matrix]) -> tuple[ZigzagModule, Morphism]:
    """Rewrite V in new coordinates: position i gets basis change bases[i].

    Returns the conjugated module and the isomorphism from V onto it whose
    components are the base changes themselves.
    """
    B = tuple(bases)
    if len(B) != V.n:
        raise ValueError(f"expected {V.n} base changes, got {len(B)}")
    for i, M in enumerate(B):
        if M.p != V.p or M.shape != (V.dims[i], V.dims[i]):
            raise ValueError(f"base change {i + 1} must be {V.dims[i]}x{V.dims[i]} over GF({V.p})")
        if not is_invertible(M):
            raise ValueError(f"base change {i + 1} is singular")
    inv = [inverse(M) for M in B]
    maps = []
    for i in range(V.n - 1):
        if V.tau.dirs[i] == FORWARD:
            maps.append(B[i + 1] @ V.maps[i] @ inv[i])
        else:
            maps.append(B[i] @ V.maps[i] @ inv[i + 1])
    W = ZigzagModule(V.tau, V.dims, tuple(maps))
    return W, Morphism(V, W, B)


def arrow_reverse(V: ZigzagModule, k: int) -> ZigzagModule:
    """Reverse arrow k, which must be invertible, replacing it by its inverse."""
    if not 1 <= k <= V.n - 1:
        raise ValueError(f"arrow index {k} out of range 1..{V.n - 1}")
    M = V.maps[k - 1]
    if not is_invertible(M):
        raise ValueError(f"arrow {k} is not invertible and cannot be reversed")
    maps = list(V.maps)
    maps[k - 1] = inverse(M)
    return ZigzagModule(transform_type(V.tau, REVERSAL, k), V.dims, tuple(maps))


def iso_positions(V: ZigzagModule) -> frozenset[int]:
    """Arrow indices whose structure maps are isomorphisms."""
    return frozenset(k for k in range(1, V.n) if is_invertible(V.maps[k - 1]))


def flippable_positions(points: Iterable[tuple[int, int]], n: int) -> frozenset[int]:
    """Arrow indices that are isomorphisms for a module with this diagram.

    Arrow k is an isomorphism exactly when every interval of the diagram
    contains both of positions k, k+1 or neither of them.
    """
    pts = list(points)
    out = set()
    for k in range(1, n):
        ok = True
        for (b, d) in pts:
            crosses = b <= k and d >= k + 1
            misses = d <= k - 1 or b >= k + 2
            if not (crosses or misses):
                ok = False
                break
        if ok:
            out.add(k)
    return frozenset(out)


def canonical_type(tau: Orientation, points: Iterable[tuple[int, int]]) -> Orientation:
    """Normal form of a type up to reversing arrows the diagram makes invertible.

    Every flippable arrow is set forward; two modules reachable from each
    other by such reversals share this normal form.
    """
    dirs = list(tau.dirs)
    for k in flippable_positions(points, tau.n):
        dirs[k - 1] = FORWARD
    return Orientation(tuple(dirs))


def _counter(points: Iterable[tuple[int, int]]) -> Counter:
    return Counter(tuple(pt) for pt in points)


def is_summand_upto_equiv(tau_v: Orientation, diagram_v, tau_w: Orientation, diagram_w) -> bool:
    """Whether the (tau_v, diagram_v) module embeds as a summand of the
    (tau_w, diagram_w) module after reversing invertible arrows.

    Requires the first diagram to be contained in the second as a multiset
    and every position where the types disagree to be flippable for the
    first diagram.
    """
    if tau_v.n != tau_w.n:
        raise ValueError(f"length mismatch: {tau_v.n} vs {tau_w.n}")
    if diagram_v.n != tau_v.n or diagram_w.n != tau_w.n:
        raise ValueError("diagram length does not match orientation length")
    cv, cw = _counter(diagram_v), _counter(diagram_w)
    for pt, mult in cv.items():
        if cw.get(pt, 0) < mult:
            return False
    disagree = {k for k in range(1, tau_v.n) if tau_v.dirs[k - 1] != tau_w.dirs[k - 1]}
    return disagree <= flippable_positions(cv.elements(), tau_v.n)
