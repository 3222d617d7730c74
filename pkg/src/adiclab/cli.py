"""Batch command-line front end.

Every command is deterministic: randomized commands require an explicit
seed and identical invocations produce byte-identical output.  Exit codes:
0 when no assertion-bearing check failed, 1 when one did, 2 for usage
errors, 3 for resource-cap aborts.
"""

import argparse
import csv
import io
import json
import re
import sys

from . import bratteli, coding, factoring
from .adic import kink_classify, kink_verify
from .coding import basic_block, block_store, stabilized_complexity, symbol_census
from .core import (OrderingTable, Vertex, binomial, column_size, make_ordering,
                   seeded_ordering, unrank)
from .errors import (AdiclabError, BlockMemoryCap, BoundExceeded, CapExceeded,
                     SizeCap)

CAP_ERRORS = (SizeCap, CapExceeded, BlockMemoryCap, BoundExceeded, MemoryError)


def load_ordering(text: str) -> OrderingTable:
    """Ordering from inline JSON, an @file reference, or a shorthand like
    constant0 / seeded:7 / tree:3."""
    if text.startswith("@"):
        with open(text[1:]) as fh:
            return make_ordering(json.load(fh))
    if text.startswith("{"):
        return make_ordering(json.loads(text))
    if text in ("constant0", "constant1"):
        return make_ordering({"kind": "constant", "bit": int(text[-1])})
    m = re.fullmatch(r"seeded:(\d+)", text)
    if m:
        return seeded_ordering(int(m.group(1)))
    m = re.fullmatch(r"tree:(\d+)", text)
    if m:
        return make_ordering({"kind": "tree", "depth": int(m.group(1))})
    raise argparse.ArgumentTypeError(f"cannot parse ordering {text!r}")


def emit(args, doc, table=None):
    """Print a report; CSV is only available for tabular commands."""
    if args.format == "json":
        print(json.dumps(doc, sort_keys=True))
    elif args.format == "csv":
        if table is None:
            raise UsageError("this command has no CSV form")
        out = io.StringIO()
        writer = csv.writer(out)
        for row in table:
            writer.writerow(row)
        sys.stdout.write(out.getvalue())
    else:
        for key, value in sorted(doc.items()):
            print(f"{key}: {value}")


class UsageError(Exception):
    pass


def cmd_block(args):
    xi = args.ordering
    if args.max_mem is not None:
        block_store(xi, args.max_mem << 20)
    x, y = args.x, args.y
    doc = {"vertex": [x, y], "length": binomial(x + y, x)}
    if args.k in (None, 1):
        word = basic_block(xi, x, y)
        ca, cb, vertex = symbol_census(word)
        doc.update(block=word, count_a=ca, count_b=cb,
                   census_vertex=list(vertex) if vertex else None,
                   census_matches=vertex == (x, y))
        ok = doc["census_matches"] and len(word) == doc["length"]
    else:
        syms = coding.basic_block_k(xi, args.k, x, y)
        doc.update(k=args.k, block=[[s.k, s.m, s.s] for s in syms])
        ok = len(syms) == doc["length"]
    emit(args, doc)
    return 0 if ok else 1


def cmd_decode(args):
    try:
        tokens = factoring.decompose_CD(args.word)
        vertex, table = factoring.decode_ordering(args.word)
    except AdiclabError as exc:
        emit(args, {"error": str(exc)})
        return 1
    bits = sorted((x, y, table.bit(x, y)) for x in range(2, vertex.x + 1)
                  for y in range(2, vertex.y + 1))
    emit(args, {"vertex": list(vertex), "tokens": [str(t) for t in tokens],
                "bits": [list(b) for b in bits]})
    return 0


def cmd_complexity(args):
    xi = args.ordering
    rows = [("n", "count", "stabilized", "level")]
    doc = {"ordering": xi.fingerprint(), "rows": []}
    for n in range(args.nmin, args.nmax + 1):
        count, lvl, stab = stabilized_complexity(xi, n, args.level)
        doc["rows"].append({"n": n, "count": count, "stabilized": stab,
                            "level": lvl})
        rows.append((n, count, stab, lvl))
    emit(args, doc, table=rows)
    return 0


def cmd_odometer(args):
    with open(args.diagram) as fh:
        diagram = bratteli.OrderedDiagram.from_json(fh.read())
    cert = bratteli.odometer_certificate(diagram, args.depth)
    emit(args, {"found": cert.found, "message": cert.message,
                "segments": [[a, b, list(base)] for a, b, base in cert.segments],
                "depth": cert.searched_depth})
    return 0


def cmd_montecarlo(args):
    with open(args.shapes) as fh:
        doc = json.load(fh)
    mults = [tuple(tuple(r) for r in rows) for rows in doc["shapes"]]
    shapes = [bratteli.Shape(m) for m in mults]
    jobs = [(mults, lo, hi, args.seed)
            for lo, hi in _chunks(args.trials, max(args.threads, 1))]
    hits = [0] * len(shapes)
    for part in _run_parallel(_montecarlo_worker, jobs, args.threads):
        hits = [a + b for a, b in zip(hits, part)]
    exacts = [bratteli.exact_uniform_probability(s) for s in shapes]
    sums = []
    acc = 0
    for e in exacts:
        if e is None:
            break
        acc += e
        sums.append(acc)
    rows = [("level", "frequency", "exact")]
    out = {"seed": args.seed, "trials": args.trials, "levels": [],
           "partial_sums": [str(s) for s in sums]}
    for idx, (h, e) in enumerate(zip(hits, exacts)):
        exact = str(e) if e is not None else None
        out["levels"].append({"level": idx, "frequency": h / args.trials,
                              "uniform": h, "exact": exact})
        rows.append((idx, h / args.trials, exact))
    emit(args, out, table=rows)
    return 0


def _chunks(total: int, parts: int):
    step = (total + parts - 1) // parts
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def _kink_worker(args):
    seed, lo, hi, max_n, max_level = args
    hits = {}
    failures = 0
    for trial in range(lo, hi):
        xi, path = sample_kink_configuration(seed, trial, max_n)
        case = str(tuple(kink_classify(xi, path)))
        hits[case] = hits.get(case, 0) + 1
        if not kink_verify(xi, path, max_level=max_level):
            failures += 1
    return hits, failures


def _montecarlo_worker(args):
    mults, lo, hi, seed = args
    import adiclab.bratteli as bratteli_mod

    shapes = [bratteli_mod.Shape(m) for m in mults]
    hits = [0] * len(shapes)
    for lvl_idx, shape in enumerate(shapes):
        edges = [shape.in_edges(t) for t in range(shape.target_count)]
        for trial in range(lo, hi):
            words = tuple(
                bratteli_mod._keyed_rng_perm(seed, trial, lvl_idx, t, edges[t])
                for t in range(shape.target_count))
            if bratteli_mod.uniform_base(words) is not None:
                hits[lvl_idx] += 1
    return hits


def _run_parallel(worker, jobs, threads):
    if threads <= 1 or len(jobs) <= 1:
        return [worker(j) for j in jobs]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, jobs))


def sample_kink_configuration(seed: int, trial: int, max_n: int):
    """Deterministic (ordering, path) pair ending in a kink configuration."""
    import hashlib
    import random
    import struct

    key = hashlib.blake2b(struct.pack("<QQ", seed & (2**64 - 1), trial),
                          digest_size=8).digest()
    rng = random.Random(int.from_bytes(key, "little"))
    xi = seeded_ordering(rng.getrandbits(63))
    n = rng.randint(2, max_n)
    i = rng.randint(1, n - 1)
    j = n - i
    prefix = unrank(xi, Vertex(i, j), rng.randrange(column_size(Vertex(i, j))))
    # exactly one branch direction makes the edge into (i+1, j+1) minimal
    if xi.bit(i + 1, j + 1) == 0:
        steps = (0, 1)
    else:
        steps = (1, 0)
    return xi, prefix.extend(steps)


def cmd_kink(args):
    jobs = [(args.seed, lo, hi, args.max_n, args.max_level)
            for lo, hi in _chunks(args.trials, max(args.threads, 1))]
    hits = {}
    failures = 0
    for part_hits, part_failures in _run_parallel(_kink_worker, jobs,
                                                  args.threads):
        failures += part_failures
        for case, count in part_hits.items():
            hits[case] = hits.get(case, 0) + count
    emit(args, {"trials": args.trials, "failures": failures,
                "cases": dict(sorted(hits.items()))})
    return 0 if failures == 0 else 1


def cmd_alternation(args):
    verdict = factoring.alternation_exclusion(args.max_level, args.j)
    xi, xi_prime = factoring.small_subshift_orderings()
    emit(args, {
        "j": args.j,
        "verdict": "EXCLUDED" if verdict.excluded else "NOT-EXCLUDED",
        "exact_level": verdict.exact_level,
        "exact_excluded": verdict.exact_excluded,
        "dp_level": verdict.dp_level,
        "dp_excluded": verdict.dp_excluded,
        "witness_each_side": {
            "ab_power": basic_block(xi, 3, 3),
            "ba_power": basic_block(xi_prime, 3, 3),
        },
    })
    return 0 if verdict.excluded else 1


_SMALL_ORBITS = re.compile(r"a*|b*|a*ba*|b*ab*")


def cmd_smallshift(args):
    xi, xi_prime = factoring.small_subshift_orderings()
    common = sorted(factoring.intersection_probe(xi, xi_prime, args.n,
                                                 args.level))
    stray = [w for w in common if not _SMALL_ORBITS.fullmatch(w)]
    emit(args, {"n": args.n, "level": args.level, "common": len(common),
                "expected_orbit_subwords": len(common) - len(stray),
                "stray_words": stray})
    return 0 if not stray else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="adiclab",
        description="Batch tools for arbitrarily ordered Pascal adic systems")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"),
                        default="json")
    common.add_argument("--max-mem", type=int, metavar="MIB", default=None,
                        help="cap for the block memo, in MiB")
    common.add_argument("--threads", type=int, default=1,
                        help="worker cap for parallel sections")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("block", parents=[common],
                       help="basic block and symbol census at a vertex")
    p.add_argument("--ordering", type=load_ordering, required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--k", type=int, default=None)
    p.set_defaults(func=cmd_block)

    p = sub.add_parser("decode", parents=[common],
                       help="vertex, tokens, and ordering bits of a block")
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("complexity", parents=[common],
                       help="language complexity table with stabilization")
    p.add_argument("--ordering", type=load_ordering, required=True)
    p.add_argument("--nmin", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--level", type=int, default=60)
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("odometer", parents=[common],
                       help="odometer certificate search on a diagram file")
    p.add_argument("--diagram", required=True)
    p.add_argument("--depth", type=int, default=4)
    p.set_defaults(func=cmd_odometer)

    p = sub.add_parser("montecarlo", parents=[common],
                       help="uniform-ordering frequencies over a shape file")
    p.add_argument("--shapes", required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("kink", parents=[common],
                       help="verify return times on sampled kink configurations")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-n", type=int, default=12)
    p.add_argument("--max-level", type=int, default=64)
    p.set_defaults(func=cmd_kink)

    p = sub.add_parser("alternation", parents=[common],
                       help="two-phase (ab)^j / (ba)^j exclusion verdict")
    p.add_argument("--max-level", type=int, default=12)
    p.add_argument("--j", type=int, default=9)
    p.set_defaults(func=cmd_alternation)

    p = sub.add_parser("smallshift", parents=[common],
                       help="intersection probe for the two named orderings")
    p.add_argument("--n", type=int, default=60)
    p.add_argument("--level", type=int, default=20)
    p.set_defaults(func=cmd_smallshift)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CAP_ERRORS as exc:
        print(json.dumps({"error": str(exc), "kind": "resource-cap"},
                         sort_keys=True))
        return 3
    except UsageError as exc:
        parser.error(str(exc))  # exits 2
    except (OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": str(exc), "kind": "input"}, sort_keys=True))
        return 2


if __name__ == "__main__":
    sys.exit(main())
