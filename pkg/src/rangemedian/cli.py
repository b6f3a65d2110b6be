"""Command line front end.

Subcommands:
  query   answer range-rank queries from a file or stdin, online
  bench   run a seeded (n, k) grid and emit counters as CSV + gnuplot data
  filter  median-filter a binary PGM image
  gen     write seeded random datasets, query files, op streams, or images

Static input format: line 1 holds n, line 2 holds n whitespace-separated
values, then one query per line as "L R [p]" until EOF.  Answers are printed
as "value<TAB>index" immediately after each query line is read.  Ranks default
to the lower median, ceil(m/2).

Dynamic op-stream format (structure=dynamic): "I <after-id|0> <value>" inserts
(ids are assigned 1, 2, ... in insertion order; 0 means the front of the
list), "D <id>" deletes, "Q <id> <id> [p]" queries and prints just the value.

Exit codes: 0 success, 1 usage error, 2 input format error.
"""

from __future__ import annotations

import argparse
import csv
import math
import random
import sys
import time
from dataclasses import dataclass, field

from .cascade_tree import CascadeTree
from .compact_tree import CompactTree
from .core import RangeQuery, Stats, as_elements, oracle_select
from .dynamic_rmp import DynamicTree
from .median_filter import (
    GrayImage,
    PgmFormatError,
    filter_image,
    naive_filter,
    read_pgm,
    write_pgm,
)
from .selection import SelectionStrategy

from array import array

STRUCTURES = ("cascade", "compact", "dynamic", "oracle")


class UsageError(Exception):
    pass


class InputFormatError(Exception):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass
class RunConfig:
    """Everything one invocation needs; built from parsed flags."""

    command: str
    structure: str = "compact"
    mode: str = "lazy"
    strategy: str = "randomized"
    seed: int = 0
    input: str | None = None
    output: str | None = None
    radius: int | None = None
    grid_n: tuple[int, ...] = (1024,)
    grid_k: tuple[int, ...] = (256,)
    reps: int = 1

    def selection_strategy(self) -> SelectionStrategy:
        return SelectionStrategy(self.strategy, self.seed)


def parse_grid(text: str) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Parse "n=16384,32768,k=100,200" into (n values, k values)."""
    ns: list[int] = []
    ks: list[int] = []
    cur: list[int] | None = None
    for tok in text.split(","):
        tok = tok.strip()
        if tok.startswith("n="):
            cur = ns
            tok = tok[2:]
        elif tok.startswith("k="):
            cur = ks
            tok = tok[2:]
        if cur is None:
            raise UsageError(f"grid must start with n= or k=: {text!r}")
        try:
            cur.append(int(tok))
        except ValueError:
            raise UsageError(f"bad grid entry {tok!r}") from None
    if not ns or not ks:
        raise UsageError(f"grid needs both n= and k= entries: {text!r}")
    return tuple(ns), tuple(ks)


# -- input parsing ------------------------------------------------------------


def _parse_number(tok: str, line_no: int):
    try:
        return int(tok)
    except ValueError:
        pass
    try:
        v = float(tok)
    except ValueError:
        raise InputFormatError(line_no, f"not a number: {tok!r}") from None
    if math.isnan(v):
        raise InputFormatError(line_no, "NaN values are not admitted")
    return v


def _format_value(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def _read_static_header(fin) -> list:
    header = fin.readline()
    if header == "":
        raise InputFormatError(1, "missing array length")
    try:
        n = int(header.split()[0])
    except (ValueError, IndexError):
        raise InputFormatError(1, f"bad array length {header.strip()!r}") from None
    if n < 1:
        raise InputFormatError(1, f"array length must be >= 1, got {n}")
    line = fin.readline()
    if line == "":
        raise InputFormatError(2, "missing value line")
    tokens = line.split()
    if len(tokens) != n:
        raise InputFormatError(2, f"expected {n} values, got {len(tokens)}")
    return [_parse_number(t, 2) for t in tokens]


def _parse_query_line(parts: list[str], line_no: int) -> RangeQuery:
    if len(parts) not in (2, 3):
        raise InputFormatError(line_no, f"expected 'L R [p]', got {len(parts)} fields")
    try:
        nums = [int(t) for t in parts]
    except ValueError:
        raise InputFormatError(line_no, f"non-integer query field in {parts}") from None
    return RangeQuery(nums[0], nums[1], nums[2] if len(nums) == 3 else None)


# -- query command -------------------------------------------------------------


def cmd_query(cfg: RunConfig, fin, fout, ferr) -> int:
    if cfg.structure == "dynamic":
        return _query_dynamic(cfg, fin, fout, ferr)
    return _query_static(cfg, fin, fout, ferr)


def _query_static(cfg: RunConfig, fin, fout, ferr) -> int:
    values = _read_static_header(fin)
    strategy = cfg.selection_strategy()
    if cfg.structure == "oracle":
        elems = as_elements(values)
        answer = lambda q: oracle_select(elems, q)  # noqa: E731
    elif cfg.structure == "cascade":
        tree = CascadeTree(values, strategy)
        if cfg.mode == "eager":
            tree.build_eager()
        answer = tree.query
    else:
        tree = CompactTree(values, strategy)
        if cfg.mode == "eager":
            tree.build_eager()
        answer = tree.query
    n = len(values)
    line_no = 2
    while True:
        raw = fin.readline()
        if raw == "":
            break
        line_no += 1
        parts = raw.split()
        if not parts:
            continue
        q = _parse_query_line(parts, line_no)
        try:
            q.validate(n)
        except ValueError as exc:
            print(f"line {line_no}: {exc}", file=ferr)
            continue
        e = answer(q)
        fout.write(f"{_format_value(e.value)}\t{e.index}\n")
        fout.flush()
    return 0


def _query_dynamic(cfg: RunConfig, fin, fout, ferr) -> int:
    tree = DynamicTree(seed=cfg.seed)
    handles: dict[int, object] = {}
    next_id = 1
    line_no = 0
    while True:
        raw = fin.readline()
        if raw == "":
            break
        line_no += 1
        parts = raw.split()
        if not parts:
            continue
        op = parts[0].upper()
        if op == "I":
            if len(parts) != 3:
                raise InputFormatError(line_no, "I needs: I <after-id|0> <value>")
            after_id = _parse_int(parts[1], line_no)
            value = _parse_number(parts[2], line_no)
            after = None if after_id == 0 else handles.get(after_id)
            if after_id != 0 and after is None:
                raise InputFormatError(line_no, f"unknown handle id {after_id}")
            try:
                handles[next_id] = tree.insert(after, value)
            except ValueError as exc:
                print(f"line {line_no}: {exc}", file=ferr)
                continue
            next_id += 1
        elif op == "D":
            if len(parts) != 2:
                raise InputFormatError(line_no, "D needs: D <id>")
            hid = _parse_int(parts[1], line_no)
            h = handles.get(hid)
            if h is None:
                raise InputFormatError(line_no, f"unknown handle id {hid}")
            try:
                tree.delete(h)
            except ValueError as exc:
                print(f"line {line_no}: {exc}", file=ferr)
        elif op == "Q":
            if len(parts) not in (3, 4):
                raise InputFormatError(line_no, "Q needs: Q <id> <id> [p]")
            a = handles.get(_parse_int(parts[1], line_no))
            b = handles.get(_parse_int(parts[2], line_no))
            p = _parse_int(parts[3], line_no) if len(parts) == 4 else None
            if a is None or b is None:
                raise InputFormatError(line_no, "unknown handle id in query")
            try:
                value = tree.query(a, b, p)
            except ValueError as exc:
                print(f"line {line_no}: {exc}", file=ferr)
                continue
            fout.write(f"{_format_value(value)}\n")
            fout.flush()
        else:
            raise InputFormatError(line_no, f"unknown op {parts[0]!r}")
    return 0


def _parse_int(tok: str, line_no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise InputFormatError(line_no, f"not an integer: {tok!r}") from None


# -- bench command -------------------------------------------------------------

BENCH_COLUMNS = (
    "structure",
    "mode",
    "n",
    "k",
    "rep",
    "seed",
    "wall_s",
    "comparisons",
    "elements_partitioned",
    "cascade_steps",
    "payload_bits",
    "total_words",
    "rebuild_elements",
)


def _derived_seed(base: int, n: int, k: int, rep: int) -> int:
    return base * 1_000_003 + n * 8191 + k * 131 + rep


def bench_one(cfg: RunConfig, n: int, k: int, rep: int) -> dict:
    """One grid cell: seeded data and queries, one structure, all counters."""
    seed = _derived_seed(cfg.seed, n, k, rep)
    rng = random.Random(seed)
    values = [rng.randrange(n) for _ in range(n)]
    queries = []
    for _ in range(k):
        L = rng.randint(1, n)
        queries.append(RangeQuery(L, rng.randint(L, n)))
    stats = Stats()
    strategy = SelectionStrategy(cfg.strategy, seed)
    payload_bits = 0
    total_words = 0
    t0 = time.perf_counter()
    if cfg.structure == "cascade":
        tree = CascadeTree(values, strategy, stats=stats)
        if cfg.mode == "eager":
            tree.build_eager()
        for q in queries:
            tree.query(q)
    elif cfg.structure == "compact":
        tree = CompactTree(values, strategy, stats=stats)
        if cfg.mode == "eager":
            tree.build_eager()
        for q in queries:
            tree.query(q)
        report = tree.space_report()
        payload_bits = report.total_payload_bits
        total_words = report.total_words
    elif cfg.structure == "dynamic":
        tree = DynamicTree(seed=seed, stats=stats)
        handles = []
        last = None
        for v in values:
            last = tree.insert(last, v)
            handles.append(last)
        for q in queries:
            tree.query(handles[q.L - 1], handles[q.R - 1], q.p)
    else:
        elems = as_elements(values)
        for q in queries:
            oracle_select(elems, q)
    wall = time.perf_counter() - t0
    return {
        "structure": cfg.structure,
        "mode": cfg.mode,
        "n": n,
        "k": k,
        "rep": rep,
        "seed": seed,
        "wall_s": round(wall, 6),
        "comparisons": stats.comparisons,
        "elements_partitioned": stats.elements_partitioned,
        "cascade_steps": stats.cascade_steps,
        "payload_bits": payload_bits,
        "total_words": total_words,
        "rebuild_elements": stats.rebuild_elements,
    }


def run_bench_grid(cfg: RunConfig) -> list[dict]:
    rows = []
    for n in cfg.grid_n:
        for k in cfg.grid_k:
            for rep in range(cfg.reps):
                rows.append(bench_one(cfg, n, k, rep))
    return rows


def cmd_bench(cfg: RunConfig, fout, ferr) -> int:
    rows = run_bench_grid(cfg)
    if cfg.output is None:
        writer = csv.DictWriter(fout, fieldnames=BENCH_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
        return 0
    with open(cfg.output, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=BENCH_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    dat_path = cfg.output + ".dat"
    with open(dat_path, "w") as f:
        f.write("# " + " ".join(BENCH_COLUMNS) + "\n")
        for row in rows:
            f.write(" ".join(str(row[c]) for c in BENCH_COLUMNS) + "\n")
    print(f"wrote {cfg.output} and {dat_path}", file=ferr)
    return 0


# -- filter command ------------------------------------------------------------


def cmd_filter(cfg: RunConfig, ferr) -> int:
    if cfg.input is None or cfg.output is None:
        raise UsageError("filter needs --input and --output")
    if cfg.radius is None:
        raise UsageError("filter needs --radius")
    img = read_pgm(cfg.input)
    try:
        if cfg.structure == "oracle":
            out = naive_filter(img, cfg.radius)
        else:
            out = filter_image(img, cfg.radius, seed=cfg.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    write_pgm(out, cfg.output)
    return 0


# -- gen command ---------------------------------------------------------------


def cmd_gen(cfg: RunConfig) -> int:
    if cfg.output is None:
        raise UsageError("gen needs --output")
    rng = random.Random(cfg.seed)
    if cfg.output.endswith(".pgm"):
        side = cfg.grid_n[0]
        pixels = array("H", (rng.randrange(256) for _ in range(side * side)))
        write_pgm(GrayImage(side, side, 255, pixels), cfg.output)
        return 0
    if cfg.structure == "dynamic":
        _gen_ops(cfg, rng)
        return 0
    n = cfg.grid_n[0]
    k = cfg.grid_k[0]
    with open(cfg.output, "w") as f:
        f.write(f"{n}\n")
        f.write(" ".join(str(rng.randrange(n)) for _ in range(n)) + "\n")
        for _ in range(k):
            L = rng.randint(1, n)
            f.write(f"{L} {rng.randint(L, n)}\n")
    return 0


def _gen_ops(cfg: RunConfig, rng: random.Random) -> None:
    # op stream that replays cleanly: ids are assigned in insertion order and
    # queries always use two live ids in list order
    m = cfg.grid_n[0]
    live: list[int] = []  # ids in current list order
    next_id = 1
    lines = []
    for _ in range(m):
        roll = rng.random()
        if not live or roll < 0.5:
            pos = rng.randrange(len(live) + 1)
            after = live[pos - 1] if pos else 0
            lines.append(f"I {after} {rng.randrange(m)}")
            live.insert(pos, next_id)
            next_id += 1
        elif roll < 0.7 and len(live) > 1:
            victim = rng.randrange(len(live))
            lines.append(f"D {live.pop(victim)}")
        else:
            i = rng.randrange(len(live))
            j = rng.randrange(len(live))
            if i > j:
                i, j = j, i
            lines.append(f"Q {live[i]} {live[j]}")
    with open(cfg.output, "w") as f:
        f.write("\n".join(lines) + "\n")


# -- argument handling ---------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(
        prog="rangemedian",
        description="Range rank/median queries over unsorted arrays; "
        "ranks default to the lower median ceil(m/2), value ties are "
        "broken by original position.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in (
        ("query", "stream queries against a structure, answering online"),
        ("bench", "run a seeded (n, k) grid and emit counters"),
        ("filter", "median-filter a binary PGM image"),
        ("gen", "write seeded random inputs"),
    ):
        p = sub.add_parser(name, help=doc)
        p.add_argument("--structure", choices=STRUCTURES, default="compact")
        p.add_argument("--mode", choices=("lazy", "eager"), default="lazy")
        p.add_argument(
            "--strategy", choices=("deterministic", "randomized"), default="randomized"
        )
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--input", default=None)
        p.add_argument("--output", default=None)
        p.add_argument("--radius", type=int, default=None)
        p.add_argument("--grid", default=None, metavar="n=...,k=...")
        p.add_argument("--reps", type=int, default=1)
    return parser


def config_from_args(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        structure=args.structure,
        mode=args.mode,
        strategy=args.strategy,
        seed=args.seed,
        input=args.input,
        output=args.output,
        radius=args.radius,
        reps=args.reps,
    )
    if args.grid is not None:
        cfg.grid_n, cfg.grid_k = parse_grid(args.grid)
    return cfg


def main(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    """Entry point; returns the exit code instead of raising SystemExit."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    try:
        cfg = config_from_args(argv)
        if cfg.command == "query":
            if cfg.input is not None:
                with open(cfg.input) as fin:
                    if cfg.output is not None:
                        with open(cfg.output, "w") as fouf:
                            return cmd_query(cfg, fin, fouf, stderr)
                    return cmd_query(cfg, fin, stdout, stderr)
            return cmd_query(cfg, stdin, stdout, stderr)
        if cfg.command == "bench":
            return cmd_bench(cfg, stdout, stderr)
        if cfg.command == "filter":
            return cmd_filter(cfg, stderr)
        if cfg.command == "gen":
            return cmd_gen(cfg)
        raise UsageError(f"unknown command {cfg.command!r}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return 1
    except (InputFormatError, PgmFormatError) as exc:
        print(f"input error: {exc}", file=stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"input error: {exc}", file=stderr)
        return 2


def console_main() -> None:
    sys.exit(main())
