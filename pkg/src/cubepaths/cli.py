"""Command-line front end and the HPD1 decomposition file format.

File layout::

    HPD1 q=<q> m=<m> n=<count>
    <v0> <v1> ... <vm>          (n lines, lowercase hex, single spaces)

Vertex labels are the integer encoding of Q_q: coordinate 1 is the least
significant bit.  Every line, including the last, ends with a newline.

Exit codes: 0 success, 1 negative answer / failed verification /
NotDivisible / malformed file, 2 usage error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import re
import sys
from typing import IO, Iterator

import numpy as np

from . import ham
from .cube_core import VERTEX_DTYPE, Decomposition, get_max_edges, set_max_edges
from .decompose import build_plan, check_divisibility, decompose, divisibility_reason, validate_plan
from .dvop import dvop_for
from .errors import CubePathsError, InvalidParameter, NotDivisible, ResourceLimit, Unsupported
from .verify import brute_force_decompose, verify_cycles, verify_decomposition, verify_dvop

MAGIC = "HPD1"
_HEADER = re.compile(r"HPD1 q=(\d+) m=(\d+) n=(\d+)\n?\Z")
_LABEL = re.compile(r"[0-9a-f]+\Z")
_READ_ROWS = 1 << 16


class FormatError(CubePathsError):
    """The decomposition file does not follow the HPD1 layout."""


def header_line(q: int, m: int, n: int) -> str:
    return f"{MAGIC} q={q} m={m} n={n}\n"


def format_block(block: np.ndarray) -> str:
    return "".join(" ".join(f"{x:x}" for x in row) + "\n" for row in block.tolist())


def write_decomposition(d: Decomposition, fh: IO[str]) -> int:
    """Stream ``d`` to ``fh``; returns the number of paths written."""
    fh.write(header_line(d.q, d.m, d.count))
    n = 0
    for block in d.blocks():
        fh.write(format_block(block))
        n += len(block)
    if n != d.count:
        raise FormatError(f"decomposition produced {n} paths, header says {d.count}")
    return n


def read_header(fh: IO[str]) -> tuple[int, int, int]:
    line = fh.readline()
    match = _HEADER.match(line)
    if not match:
        raise FormatError(f"bad header: {line.rstrip()!r}")
    return tuple(int(x) for x in match.groups())  # type: ignore[return-value]


def _parse_row(line: str, lineno: int) -> list[int]:
    if not line.endswith("\n"):
        raise FormatError(f"line {lineno}: missing newline terminator")
    body = line[:-1]
    if body != body.strip() or "  " in body or not body:
        raise FormatError(f"line {lineno}: stray whitespace")
    toks = body.split(" ")
    for tok in toks:
        if not _LABEL.match(tok):
            raise FormatError(f"line {lineno}: bad label {tok!r}")
    return [int(tok, 16) for tok in toks]


def iter_blocks(fh: IO[str], n: int) -> Iterator[np.ndarray | list]:
    """Rows of the body in blocks; raises FormatError on layout problems."""
    rows: list[list[int]] = []
    seen = 0
    for lineno, line in enumerate(fh, start=2):
        row = _parse_row(line, lineno)
        if any(v >> 64 for v in row):
            raise FormatError(f"line {lineno}: label out of range")
        rows.append(row)
        seen += 1
        if len(rows) == _READ_ROWS:
            yield _to_block(rows)
            rows = []
    if rows:
        yield _to_block(rows)
    if seen != n:
        raise FormatError(f"header promises {n} paths, file has {seen}")


def _to_block(rows: list[list[int]]):
    if len({len(r) for r in rows}) == 1:
        return np.array(rows, dtype=VERTEX_DTYPE)
    return rows


def read_decomposition(fh: IO[str]) -> tuple[int, int, int, Iterator]:
    q, m, n = read_header(fh)
    return q, m, n, iter_blocks(fh, n)


def verify_file(fh: IO[str]):
    q, m, n, blocks = read_decomposition(fh)
    report = verify_decomposition(blocks, q, m)
    if report.ok:
        # drain so the count check at the end of the stream runs
        for _ in blocks:
            pass
    return q, m, n, report


# ---------------------------------------------------------------------------
# commands


def _cmd_check(args) -> int:
    if check_divisibility(args.m, args.q):
        print(f"yes: P_{args.m} divides Q_{args.q} ({args.q}·2^{args.q - 1}/{args.m} = "
              f"{(args.q << (args.q - 1)) // args.m} paths)")
        return 0
    print(f"no: {divisibility_reason(args.m, args.q)}")
    return 1


def _cmd_decompose(args) -> int:
    d = decompose(args.m, args.q, hub=args.hub)
    if args.out:
        with open(args.out, "w", encoding="ascii", newline="\n") as fh:
            write_decomposition(d, fh)
        log = sys.stdout
        print(f"wrote {d.count} paths of length {d.m} in Q_{d.q} to {args.out}", file=log)
    else:
        write_decomposition(d, sys.stdout)
        log = sys.stderr
    if args.verify:
        report = verify_decomposition(d)
        print(f"verify: {report.summary()}", file=log)
        return 0 if report.ok else 1
    return 0


def _cmd_verify(args) -> int:
    try:
        with open(args.file, encoding="ascii", newline="") as fh:
            q, m, n, report = verify_file(fh)
    except (FormatError, UnicodeDecodeError) as exc:
        print(f"malformed: {exc}")
        return 1
    print(f"Q_{q}, P_{m}, {n} paths: {report.summary()}")
    return 0 if report.ok else 1


def _cmd_ham(args) -> int:
    deltas = [args.delta] if args.delta is not None else range(ham.num_cycles(args.r))
    cycles = []
    for delta in deltas:
        c = ham.ham_cycle(args.r, delta) if args.r <= ham.TABLE_MAX_R else None
        if c is None:
            raise ResourceLimit(f"Q_{1 << args.r} cycles are not materialized")
        sys.stdout.write(f"# delta={delta} length={len(c)}\n")
        sys.stdout.write(" ".join(f"{x:x}" for x in c.verts.tolist()) + "\n")
        cycles.append(c)
    if args.delta is None:
        report = verify_cycles(cycles, 1 << args.r)
        print(f"verify: {report.summary()}", file=sys.stderr)
        return 0 if report.ok else 1
    return 0


def _cmd_dvop(args) -> int:
    d = dvop_for(args.r, args.k)
    report = verify_dvop(d, sample=args.sample)
    print(f"DVOP[{d.k}] on Q_{d.dim} ({d.kind}), complement {len(d.complement)} cycles: "
          f"{report.summary()}")
    for v in range(min(args.show, 1 << d.dim)):
        print(" ".join(f"{x:x}" for x in d.path_of(v).verts))
    return 0 if report.ok else 1


def _cmd_oracle(args) -> int:
    witness = brute_force_decompose(args.q, args.m)
    if witness is None:
        print(f"none: no partition of Q_{args.q} into P_{args.m}")
        return 1
    print(f"witness: {witness.count} paths")
    sys.stdout.write(format_block(witness.to_array()))
    return 0


def _cmd_plan(args) -> int:
    plan = build_plan(args.m, args.q, hub=args.hub)
    print(plan)
    problems = validate_plan(plan)
    for p in problems:
        print(f"problem: {p}")
    return 0 if not problems else 1


def _odd(text: str) -> int:
    v = int(text)
    if v < 1 or v % 2 == 0:
        raise argparse.ArgumentTypeError(f"{text} is not a positive odd integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cubepaths", description="Path decompositions of hypercubes.")
    p.add_argument("--max-edges", type=int, default=None,
                   help="cap on edges any command may materialize (default 2^28)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="test the divisibility condition")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--q", type=_odd, required=True)
    s.set_defaults(func=_cmd_check)

    s = sub.add_parser("decompose", help="build a P_m decomposition of Q_q")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--q", type=_odd, required=True)
    s.add_argument("--out")
    s.add_argument("--verify", action="store_true")
    s.add_argument("--hub", type=int, default=None, help="override the Q_{2^r} hub used for P_{2^t}")
    s.set_defaults(func=_cmd_decompose)

    s = sub.add_parser("verify", help="verify an HPD1 file")
    s.add_argument("file")
    s.set_defaults(func=_cmd_verify)

    s = sub.add_parser("ham", help="print the Hamiltonian cycles of Q_{2^r}")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--delta", type=int, default=None)
    s.set_defaults(func=_cmd_ham)

    s = sub.add_parser("dvop", help="build and verify a DVOP[k] on Q_{2^r}")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--sample", type=int, default=None)
    s.add_argument("--show", type=int, default=0, help="print the paths from the first N vertices")
    s.set_defaults(func=_cmd_dvop)

    s = sub.add_parser("oracle", help="brute-force search on a tiny cube")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.set_defaults(func=_cmd_oracle)

    s = sub.add_parser("plan", help="print the construction tree without emitting paths")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--q", type=_odd, required=True)
    s.add_argument("--hub", type=int, default=None)
    s.set_defaults(func=_cmd_plan)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    saved = get_max_edges()
    try:
        if args.max_edges is not None:
            set_max_edges(args.max_edges)
        return args.func(args)
    except NotDivisible as exc:
        print(f"no: {exc}", file=sys.stderr)
        return 1
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except (InvalidParameter, Unsupported, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    finally:
        set_max_edges(saved)


if __name__ == "__main__":
    sys.exit(main())
