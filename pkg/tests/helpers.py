"""Shared generators and independent oracles for the test suite.

Everything here is deliberately naive: oracles recompute answers by
enumeration or first-principles formulas so that library results are
checked against a second, unrelated route.
"""

from __future__ import annotations

import itertools
import math
import random

from zzdist import (BACKWARD, FORWARD, Matrix, Orientation,
                    PersistenceDiagram, SymbolicModule, ZigzagModule,
                    synthesize)


def random_dirs(rng: random.Random, n: int) -> tuple[str, ...]:
    return tuple(rng.choice((FORWARD, BACKWARD)) for _ in range(n - 1))


def random_orientation(rng: random.Random, n: int) -> Orientation:
    return Orientation(random_dirs(rng, n))


def random_points(rng: random.Random, n: int, max_points: int) -> tuple[tuple[int, int], ...]:
    pts = []
    for _ in range(rng.randint(0, max_points)):
        b = rng.randint(1, n)
        pts.append((b, rng.randint(b, n)))
    return tuple(pts)


def random_diagram(rng: random.Random, n: int, max_points: int) -> PersistenceDiagram:
    return PersistenceDiagram(n, random_points(rng, n, max_points))


def random_symbolic(rng: random.Random, n: int, max_points: int) -> SymbolicModule:
    return SymbolicModule(random_orientation(rng, n), random_diagram(rng, n, max_points))


def random_matrix(rng: random.Random, rows: int, cols: int, p: int) -> Matrix:
    return Matrix.from_rows(
        [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)], p, cols=cols)


def random_module(rng: random.Random, n: int, max_dim: int, p: int) -> ZigzagModule:
    """Uniformly random structure maps; need not be in any normal form."""
    dirs = random_dirs(rng, n)
    dims = tuple(rng.randint(0, max_dim) for _ in range(n))
    maps = []
    for i, d in enumerate(dirs):
        rows, cols = (dims[i + 1], dims[i]) if d == FORWARD else (dims[i], dims[i + 1])
        maps.append(random_matrix(rng, rows, cols, p))
    return ZigzagModule(Orientation(dirs), dims, tuple(maps))


def synthesized_pair(rng: random.Random, n: int, max_points: int, p: int):
    """A random symbolic module together with its concrete realization."""
    S = random_symbolic(rng, n, max_points)
    return S, synthesize(S.tau, S.diagram.points, p)


def all_dirs(n: int) -> list[tuple[str, ...]]:
    return [tuple(c) for c in itertools.product((FORWARD, BACKWARD), repeat=n - 1)]


def all_intervals(n: int) -> list[tuple[int, int]]:
    return [(b, d) for b in range(1, n + 1) for d in range(b, n + 1)]


def minor_rank(M: Matrix) -> int:
    """Rank by enumerating square minors with exact integer determinants.

    Exponential; callers keep shapes at 4x4 or below.
    """
    rows = M.tolists()
    p = M.p

    def det(sub: list[list[int]]) -> int:
        k = len(sub)
        if k == 1:
            return sub[0][0] % p
        total = 0
        for j in range(k):
            minor = [r[:j] + r[j + 1:] for r in sub[1:]]
            term = sub[0][j] * det(minor)
            total += -term if j % 2 else term
        return total % p

    for k in range(min(M.rows, M.cols), 0, -1):
        for ri in itertools.combinations(range(M.rows), k):
            for ci in itertools.combinations(range(M.cols), k):
                if det([[rows[r][c] for c in ci] for r in ri]) != 0:
                    return k
    return 0


def enumerate_limit_dim(spaces: list[int], arrows, p: int) -> int:
    """Limit dimension by checking every tuple in the product space.

    Only usable when p**sum(spaces) is tiny.
    """
    offs = [0]
    for d in spaces:
        offs.append(offs[-1] + d)
    total = offs[-1]
    count = 0
    for vec in itertools.product(range(p), repeat=total):
        ok = True
        for (src, tgt, M) in arrows:
            x = vec[offs[src]:offs[src + 1]]
            y = vec[offs[tgt]:offs[tgt + 1]]
            rows = M.tolists()
            for r in range(M.rows):
                if sum(rows[r][c] * x[c] for c in range(M.cols)) % p != y[r]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            count += 1
    dim = 0
    while p ** dim < count:
        dim += 1
    assert p ** dim == count
    return dim


def point_dist(x, y, p) -> float:
    db, dd = abs(x[0] - y[0]), abs(x[1] - y[1])
    if math.isinf(p):
        return float(max(db, dd))
    return float((db ** p + dd ** p) ** (1 / p))


def diagonal_penalty(x, p) -> float:
    if math.isinf(p):
        return (x[1] - x[0]) / 2
    return (x[1] - x[0]) / 2 ** (1 - 1 / p)


def brute_force_bottleneck(ps, qs, p) -> float:
    """Minimax over every complete assignment, diagonal slots included."""
    ps, qs = list(ps), list(qs)
    ns, nt = len(ps), len(qs)
    size = ns + nt
    cost = [[0.0] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            if i < ns and j < nt:
                cost[i][j] = point_dist(ps[i], qs[j], p)
            elif i < ns:
                cost[i][j] = diagonal_penalty(ps[i], p)
            elif j < nt:
                cost[i][j] = diagonal_penalty(qs[j], p)
    best = math.inf
    for perm in itertools.permutations(range(size)):
        worst = 0.0
        for i, j in enumerate(perm):
            if cost[i][j] > worst:
                worst = cost[i][j]
                if worst >= best:
                    break
        else:
            best = worst
    return best
