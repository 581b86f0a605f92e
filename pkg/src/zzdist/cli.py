"""Command line front end, file formats, random instances, and the
stability experiment.

Module files are JSON with fields ``n``, ``type`` (a string of ">" and
"<" read left to right), and exactly one of ``matrices`` (concrete
structure maps) or ``diagram`` (a list of [birth, death, multiplicity]
triples).  All randomness flows from explicit seeds, and the field
prime may be overridden through the ZZ_FIELD_PRIME environment
variable.

Exit codes: 0 on success, 2 on bad input, 3 when a checked property is
violated.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from dataclasses import dataclass
from typing import Sequence

from .bottleneck import bottleneck_distance
from .diagrams import PersistenceDiagram, SymbolicModule, act, decompose
from .linalg import DEFAULT_PRIME, Matrix, _check_prime, is_invertible
from .reflection_distance import reflection_distance
from .reflections import (COLIMIT, LIMIT, ReflectionOp, annihilating_sequence,
                          apply, check_applicable)
from .zigzag_core import BACKWARD, FORWARD, Orientation, ZigzagModule, conjugate, synthesize

_BOUNDARY_WORDS = {FORWARD: "forward", BACKWARD: "backward"}
_BOUNDARY_DIRS = {w: d for (d, w) in _BOUNDARY_WORDS.items()}


class InputError(Exception):
    """Bad user input; reported with exit code 2."""


def _field_prime() -> int:
    raw = os.environ.get("ZZ_FIELD_PRIME")
    if raw is None:
        return DEFAULT_PRIME
    try:
        return _check_prime(int(raw))
    except ValueError as e:
        raise InputError(f"ZZ_FIELD_PRIME: {e}") from e


def _expect(cond: bool, message: str) -> None:
    if not cond:
        raise InputError(message)


def parse_module_data(obj) -> ZigzagModule | SymbolicModule:
    """Validate a decoded module file and build the in-memory value."""
    _expect(isinstance(obj, dict), "module file must be a JSON object")
    _expect("n" in obj, "missing field 'n'")
    n = obj["n"]
    _expect(isinstance(n, int) and not isinstance(n, bool) and n >= 2,
            f"'n' must be an integer >= 2, got {n!r}")
    ts = obj.get("type")
    _expect(isinstance(ts, str), "missing or non-string field 'type'")
    _expect(len(ts) == n - 1, f"'type' must have length n-1 = {n - 1}, got {len(ts)}")
    _expect(all(c in (FORWARD, BACKWARD) for c in ts),
            f"'type' may contain only '{FORWARD}' and '{BACKWARD}', got {ts!r}")
    tau = Orientation.from_string(ts)
    has_m, has_d = "matrices" in obj, "diagram" in obj
    _expect(has_m != has_d, "exactly one of 'matrices' and 'diagram' must be present")
    if has_d:
        dg = obj["diagram"]
        _expect(isinstance(dg, list), "'diagram' must be a list of [b, d, multiplicity]")
        triples = []
        for idx, row in enumerate(dg):
            _expect(isinstance(row, list) and len(row) == 3
                    and all(isinstance(x, int) and not isinstance(x, bool) for x in row),
                    f"diagram entry {idx} must be three integers, got {row!r}")
            b, d, m = row
            _expect(1 <= b <= d <= n, f"diagram entry {idx}: interval [{b}, {d}] "
                    f"out of range 1..{n}")
            _expect(m >= 1, f"diagram entry {idx}: multiplicity {m} must be >= 1")
            triples.append((b, d, m))
        return SymbolicModule(tau, PersistenceDiagram.from_counts(n, triples))
    block = obj["matrices"]
    _expect(isinstance(block, dict), "'matrices' must be an object")
    for key in ("field_prime", "dims", "maps"):
        _expect(key in block, f"'matrices' is missing field '{key}'")
    try:
        p = _check_prime(block["field_prime"])
    except ValueError as e:
        raise InputError(f"'field_prime': {e}") from e
    dims = block["dims"]
    _expect(isinstance(dims, list) and len(dims) == n
            and all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in dims),
            f"'dims' must be {n} nonnegative integers")
    raw_maps = block["maps"]
    _expect(isinstance(raw_maps, list) and len(raw_maps) == n - 1,
            f"'maps' must list {n - 1} matrices")
    maps = []
    for i, flat in enumerate(raw_maps):
        if tau.dirs[i] == FORWARD:
            rows, cols = dims[i + 1], dims[i]
        else:
            rows, cols = dims[i], dims[i + 1]
        _expect(isinstance(flat, list)
                and all(isinstance(x, int) and not isinstance(x, bool) for x in flat),
                f"map {i + 1} must be a flat list of integers")
        _expect(len(flat) == rows * cols,
                f"map {i + 1} has {len(flat)} entries, expected {rows}x{cols}={rows * cols}")
        maps.append(Matrix.from_rows([flat[r * cols:(r + 1) * cols] for r in range(rows)],
                                     p, cols=cols))
    return ZigzagModule(tau, tuple(dims), tuple(maps))


def parse_module_file(path: str) -> ZigzagModule | SymbolicModule:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as e:
        raise InputError(f"{path}: {e.strerror or e}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}") from e
    try:
        return parse_module_data(obj)
    except InputError as e:
        raise InputError(f"{path}: {e}") from e


def serialize_module(V: ZigzagModule) -> dict:
    return {
        "n": V.n,
        "type": V.tau.to_string(),
        "matrices": {
            "field_prime": V.p,
            "dims": list(V.dims),
            "maps": [list(M.entries) for M in V.maps],
        },
    }


def serialize_symbolic(S: SymbolicModule) -> dict:
    return {
        "n": S.n,
        "type": S.tau.to_string(),
        "diagram": [[b, d, m] for (b, d, m) in S.diagram.counts()],
    }


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def format_quantity(x: float) -> str:
    """Render a distance: integers exactly, otherwise 12 significant digits."""
    if math.isinf(x):
        return "inf"
    if float(x).is_integer():
        return str(int(x))
    return f"{x:.12g}"


def _as_symbolic(m: ZigzagModule | SymbolicModule) -> SymbolicModule:
    if isinstance(m, SymbolicModule):
        return m
    return SymbolicModule(m.tau, decompose(m))


def _as_concrete(m: ZigzagModule | SymbolicModule, prime: int) -> ZigzagModule:
    if isinstance(m, ZigzagModule):
        return m
    return synthesize(m.tau, m.diagram.points, prime)


def _op_to_dict(op: ReflectionOp) -> dict:
    out = {"kind": op.kind, "index": op.k}
    if op.boundary_dir is not None:
        out["boundary_dir"] = _BOUNDARY_WORDS[op.boundary_dir]
    return out


def _parse_p(raw: str) -> float:
    if raw.strip().lower() == "inf":
        return math.inf
    try:
        p = float(raw)
    except ValueError:
        raise InputError(f"--p must be a number >= 1 or 'inf', got {raw!r}") from None
    if not p >= 1:
        raise InputError(f"--p must be >= 1, got {raw!r}")
    return p


def random_symbolic_module(rng: random.Random, n: int, max_points: int) -> SymbolicModule:
    """A random orientation and diagram, drawn entirely from ``rng``."""
    if n < 2:
        raise ValueError(f"length must be >= 2, got {n}")
    if max_points < 0:
        raise ValueError(f"max_points must be >= 0, got {max_points}")
    dirs = tuple(rng.choice((FORWARD, BACKWARD)) for _ in range(n - 1))
    pts = []
    for _ in range(rng.randint(0, max_points)):
        b = rng.randint(1, n)
        pts.append((b, rng.randint(b, n)))
    return SymbolicModule(Orientation(dirs), PersistenceDiagram(n, tuple(pts)))


def _random_invertible(rng: random.Random, dim: int, prime: int) -> Matrix:
    while True:
        M = Matrix.from_rows([[rng.randrange(prime) for _ in range(dim)] for _ in range(dim)],
                             prime, cols=dim)
        if is_invertible(M):
            return M


def generate_random_module(n: int, max_points: int, prime: int = DEFAULT_PRIME,
                           seed: int = 0) -> ZigzagModule:
    """A random module in scrambled coordinates, deterministic per seed.

    The same seed regenerates the same underlying diagram through
    ``random_symbolic_module``, so the ground truth is recoverable.
    """
    rng = random.Random(seed)
    S = random_symbolic_module(rng, n, max_points)
    V = synthesize(S.tau, S.diagram.points, prime)
    bases = [_random_invertible(rng, d, prime) for d in V.dims]
    W, _ = conjugate(V, bases)
    return W


@dataclass(frozen=True)
class ExperimentReport:
    """Outcome of a stability run: per-trial records plus failures."""

    trials: tuple[dict, ...]
    violations: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "trials": list(self.trials),
            "violations": list(self.violations),
            "passed": self.passed,
            "count": len(self.trials),
        }


def stability_experiment(trials: int, n: int, max_points: int, seed: int) -> ExperimentReport:
    """Check the distance inequalities on random pairs.

    Each trial draws a pair of symbolic modules of one random length up
    to ``n`` (half the time sharing one orientation), computes the
    reflection distance at p=1 and the bottleneck distances at p=1 and
    p=infinity, and records whether the bottleneck value stays below the
    reflection value, the two bottleneck values sandwich each other, and
    same-orientation pairs respect the polynomial upper bound.
    """
    if trials < 0:
        raise ValueError(f"trials must be >= 0, got {trials}")
    rng = random.Random(seed)
    records: list[dict] = []
    violations: list[int] = []
    for t in range(trials):
        trial_seed = rng.randrange(2 ** 32)
        trng = random.Random(trial_seed)
        n_t = trng.randint(2, n)
        A = random_symbolic_module(trng, n_t, max_points)
        B = random_symbolic_module(trng, n_t, max_points)
        same_type = trng.random() < 0.5
        if same_type:
            B = SymbolicModule(A.tau, B.diagram)
        d_r1 = reflection_distance(A, B, 1).value
        d_b1 = bottleneck_distance(A.diagram, B.diagram, 1)
        d_binf = bottleneck_distance(A.diagram, B.diagram, math.inf)
        main_ok = d_b1 <= d_r1
        sandwich_ok = d_binf <= d_b1 <= 2 * d_binf
        bilip_ok = (not same_type) or d_r1 <= n_t * n_t * (n_t + 1) * d_b1
        record = {
            "trial": t,
            "seed": trial_seed,
            "n": n_t,
            "type_v": A.tau.to_string(),
            "type_w": B.tau.to_string(),
            "diagram_v": [list(x) for x in A.diagram.counts()],
            "diagram_w": [list(x) for x in B.diagram.counts()],
            "same_type": same_type,
            "d_r1": d_r1,
            "d_b1": d_b1,
            "d_binf": d_binf,
            "main_ok": main_ok,
            "sandwich_ok": sandwich_ok,
            "bilip_ok": bilip_ok,
        }
        records.append(record)
        if not (main_ok and sandwich_ok and bilip_ok):
            violations.append(t)
    return ExperimentReport(tuple(records), tuple(violations))


def _cmd_decompose(args) -> int:
    S = _as_symbolic(parse_module_file(args.file))
    sys.stdout.write(_dump(serialize_symbolic(S)))
    return 0


def _cmd_synthesize(args) -> int:
    m = parse_module_file(args.file)
    _expect(isinstance(m, SymbolicModule), f"{args.file}: synthesize expects a diagram file")
    sys.stdout.write(_dump(serialize_module(_as_concrete(m, _field_prime()))))
    return 0


def _build_op(args, n: int) -> ReflectionOp:
    boundary = _BOUNDARY_DIRS[args.boundary_dir] if args.boundary_dir else None
    op = ReflectionOp(args.kind, args.index, boundary)
    try:
        check_applicable(op, n)
    except ValueError as e:
        raise InputError(str(e)) from e
    return op


def _cmd_reflect(args) -> int:
    m = parse_module_file(args.file)
    op = _build_op(args, m.n)
    if isinstance(m, SymbolicModule):
        sys.stdout.write(_dump(serialize_symbolic(act(op, m))))
    else:
        sys.stdout.write(_dump(serialize_module(apply(op, m))))
    return 0


def _cmd_annihilate(args) -> int:
    m = parse_module_file(args.file)
    V = _as_concrete(m, _field_prime())
    seq = annihilating_sequence(V)
    sys.stdout.write(_dump({"length": len(seq), "ops": [_op_to_dict(op) for op in seq]}))
    return 0


def _cmd_distance(args) -> int:
    p = _parse_p(args.p)
    a = _as_symbolic(parse_module_file(args.file_v))
    b = _as_symbolic(parse_module_file(args.file_w))
    if args.metric == "reflection":
        _expect(a.n == b.n, f"reflection distance needs equal lengths, got {a.n} and {b.n}")
        value = reflection_distance(a, b, p).value
    else:
        value = bottleneck_distance(a.diagram, b.diagram, p)
    sys.stdout.write(format_quantity(value) + "\n")
    return 0


def _cmd_gen(args) -> int:
    _expect(args.n >= 2, f"--n must be >= 2, got {args.n}")
    _expect(args.max_points >= 0, f"--max-points must be >= 0, got {args.max_points}")
    V = generate_random_module(args.n, args.max_points, _field_prime(), args.seed)
    sys.stdout.write(_dump(serialize_module(V)))
    return 0


def _cmd_verify_stability(args) -> int:
    _expect(args.trials >= 0, f"--trials must be >= 0, got {args.trials}")
    _expect(args.n >= 2, f"--n must be >= 2, got {args.n}")
    _expect(args.max_points >= 0, f"--max-points must be >= 0, got {args.max_points}")
    report = stability_experiment(args.trials, args.n, args.max_points, args.seed)
    sys.stdout.write(_dump(report.to_dict()))
    if not report.passed:
        for t in report.violations:
            sys.stderr.write("violation in trial "
                             f"{t}: {json.dumps(report.trials[t], sort_keys=True)}\n")
        return 3
    return 0


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="zzdist",
        description="Interval decompositions, reflections, and distances "
                    "for zigzag modules.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("decompose", help="interval decomposition of a module file")
    c.add_argument("file")
    c.set_defaults(func=_cmd_decompose)

    c = sub.add_parser("synthesize", help="build matrices from a diagram file")
    c.add_argument("file")
    c.set_defaults(func=_cmd_synthesize)

    c = sub.add_parser("reflect", help="apply one reflection to a module file")
    c.add_argument("file")
    c.add_argument("--kind", required=True, choices=[LIMIT, COLIMIT])
    c.add_argument("--index", required=True, type=int)
    c.add_argument("--boundary-dir", choices=sorted(_BOUNDARY_DIRS))
    c.set_defaults(func=_cmd_reflect)

    c = sub.add_parser("annihilate", help="a reflection run that empties the module")
    c.add_argument("file")
    c.set_defaults(func=_cmd_annihilate)

    c = sub.add_parser("distance", help="distance between two module files")
    c.add_argument("file_v")
    c.add_argument("file_w")
    c.add_argument("--metric", required=True, choices=["reflection", "bottleneck"])
    c.add_argument("--p", default="1")
    c.set_defaults(func=_cmd_distance)

    c = sub.add_parser("gen", help="generate a random module file")
    c.add_argument("--n", required=True, type=int)
    c.add_argument("--max-points", required=True, type=int)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=_cmd_gen)

    c = sub.add_parser("verify-stability",
                       help="check the distance inequalities on random pairs")
    c.add_argument("--trials", type=int, default=200)
    c.add_argument("--n", type=int, default=6)
    c.add_argument("--max-points", type=int, default=3)
    c.add_argument("--seed", type=int, default=1)
    c.set_defaults(func=_cmd_verify_stability)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
