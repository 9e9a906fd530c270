"""Command line interface: ``matroid-hodge <command> [options]``."""

import argparse
import json
import random
import sys
import time
from fractions import Fraction

from . import catalog
from .chow import chow_ring
from .concavity import certify_all, chromatic, parse_edge_list
from .errors import InputError, MatroidHodgeError, VerificationError
from .fan import (PLFunction, build_fan, check_fan, describe_filter, flip_order,
                  named_filter)
from .flips import admissible_orders, degree_via_chain, flip_report
from .hodge import certify, default_ell
from .linalg import bareiss_rank, determinant
from .matroid import MAX_GROUND, bits, build, graphic, to_mask

SCHEMA_VERSION = 1

COMMANDS = {
    ("matroid", "info"), ("charpoly",), ("fan", "check"), ("chow", "dims"), ("chow", "pd"),
    ("flip", "verify"), ("hodge", "certify"), ("logconcave",), ("catalog", "list"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError("usage-error", message)


def _common(parser):
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--catalog", metavar="NAME")
    source.add_argument("--input", metavar="PATH",
                        help="matroid JSON or a graph edge list")
    parser.add_argument("--filter", default=None,
                        help="full, empty, chain or chain:K")
    parser.add_argument("--ell", default="default", help="default or a JSON file of ray values")
    parser.add_argument("--nef", action="store_true",
                        help="accept a convex but not strictly convex ell")
    parser.add_argument("--json", action="store_true")
    parser.add_argument("--max-ground", type=int, default=MAX_GROUND)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--verbose", action="store_true",
                        help="report the elapsed time on stderr")


def make_parser():
    parser = _Parser(prog="matroid-hodge",
                     description="Exact Chow ring and Hodge theory computations for matroids.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    groups = {}
    for cmd in sorted(COMMANDS):
        if len(cmd) == 1:
            _common(sub.add_parser(cmd[0]))
            continue
        if cmd[0] not in groups:
            g = sub.add_parser(cmd[0])
            groups[cmd[0]] = g.add_subparsers(dest="action", parser_class=_Parser)
        _common(groups[cmd[0]].add_parser(cmd[1]))
    return parser


# --- inputs -------------------------------------------------------------------

def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except FileNotFoundError:
        raise InputError("file-not-found", f"no such file: {path}") from None
    except OSError as exc:
        raise InputError("file-not-found", f"cannot read {path}: {exc}") from None


def load_input(args):
    """(matroid, graph or None).  A graph is (vertex count, edges)."""
    if args.max_ground > MAX_GROUND or args.max_ground < 1:
        raise InputError("usage-error",
                         f"--max-ground is {args.max_ground}; the hard limit is 1..{MAX_GROUND}")
    graph = None
    if args.catalog is not None:
        if args.catalog not in catalog.names():
            raise InputError("malformed-input", f"unknown catalog matroid {args.catalog!r}; "
                             "see 'catalog list'")
        size = len(catalog.description(args.catalog).get("edges", [])) or \
            catalog.get(args.catalog).size
        _cap(size, args.max_ground)
        return catalog.get(args.catalog), None
    if args.input is None:
        raise InputError("usage-error", "give exactly one of --catalog NAME or --input PATH")
    text = _read(args.input)
    try:
        description = json.loads(text)
    except json.JSONDecodeError:
        description = None
    name = args.input.rsplit("/", 1)[-1]
    if description is None:
        vertices, edges = parse_edge_list(text)
        _cap(len(edges), args.max_ground)
        graph = (vertices, edges)
        return graphic(vertices, edges, name=name), graph
    if not isinstance(description, dict):
        raise InputError("malformed-input", "matroid JSON must be an object")
    size = description.get("n")
    if description.get("format") == "graph":
        size = len(description.get("edges", []))
        graph = (int(description.get("vertices", 0)),
                 [tuple(e) for e in description.get("edges", [])])
    if isinstance(size, int):
        _cap(size, args.max_ground)
    m = build(description, name=description.get("name", name))
    _cap(m.size, args.max_ground)
    return m, graph


def _cap(size, cap):
    if size > cap:
        raise InputError("size-cap-exceeded",
                         f"ground set has {size} elements; --max-ground is {cap} "
                         f"(hard limit {MAX_GROUND})")


def _filter(m, args, default="full"):
    return named_filter(m, args.filter or default)


def load_ell(ring, source):
    if source == "default":
        return default_ell(ring), "default"
    data = json.loads(_read(source)) if not isinstance(source, dict) else source
    try:
        pairs = data["values"]
        table = {to_mask(elems): Fraction(str(v)) for elems, v in pairs}
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("malformed-input",
                         f"ell file needs 'values': [[elements, value], ...] ({exc})") from None
    values = []
    for subset in ring.fan.ray_subsets:
        if subset not in table:
            raise InputError("malformed-input", f"ell file has no value for ray {bits(subset)}")
        values.append(table[subset])
    return PLFunction(ring.fan, values), source


# --- commands -------------------------------------------------------------------

def cmd_catalog_list(args):
    rows = [{"name": n, "summary": catalog.SUMMARIES[n]} for n in catalog.names()]
    text = "\n".join(f"{r['name']:14s} {r['summary']}" for r in rows)
    return {"catalog": rows}, text, True


def cmd_matroid_info(args):
    m, _ = load_input(args)
    counts = m.lattice.counts()
    out = {"matroid": m.name, "size": m.size, "rank": m.rank, "simple": m.is_simple(),
           "flats_by_rank": list(counts), "independent_counts": list(m.independent_counts())}
    text = (f"{m.name}: {m.size} elements, rank {m.rank}, "
            f"{'simple' if out['simple'] else 'not simple'}\n"
            f"flats by rank: {out['flats_by_rank']}\n"
            f"independent sets by size: {out['independent_counts']}")
    return out, text, True


def cmd_charpoly(args):
    m, graph = load_input(args)
    subset = m.char_poly("subset-sum")
    mobius = m.char_poly("mobius")
    out = {"matroid": m.name, "coefficients": list(subset.coefficients),
           "methods_agree": subset == mobius,
           "reduced": list(m.reduced_char_poly().coefficients),
           "mu": list(m.mu_sequence()), "whitney": list(m.whitney_sequence())}
    text = f"chi(x) = {subset}\nreduced: {m.reduced_char_poly()}\nmu = {out['mu']}"
    if graph is not None:
        poly, _ = chromatic(*graph)
        out["chromatic"] = list(poly.coefficients)
        text += f"\nchromatic: {poly}"
    return out, text, out["methods_agree"]


def cmd_fan_check(args):
    m, _ = load_input(args)
    flats = _filter(m, args)
    out = {"matroid": m.name, "filter": describe_filter(m, flats), "fans": []}
    lines = []
    for reduced in (False, True):
        fan = build_fan(m, flats, reduced=reduced, check=False)
        check_fan(fan)
        entry = {"reduced": reduced, "rays": len(fan.rays),
                 "cones_by_dim": [len(c) for c in fan.cones_by_dim],
                 "pure": fan.is_pure(fan.dim), "unimodular": True}
        out["fans"].append(entry)
        kind = "reduced" if reduced else "non-reduced"
        lines.append(f"{kind} fan: {entry['rays']} rays, cones by dimension "
                     f"{entry['cones_by_dim']}, pure={entry['pure']}")
    return out, "\n".join(lines), True


def cmd_chow_dims(args):
    m, _ = load_input(args)
    flats = _filter(m, args)
    ring = chow_ring(m, flats)
    out = {"matroid": m.name, "filter": describe_filter(m, flats), "hilbert": ring.hilbert()}
    ok = True
    if args.seed is not None:
        out["random_reduction_agrees"] = _random_reductions(ring, args.seed)
        ok = out["random_reduction_agrees"]
    return out, f"Hilbert function: {out['hilbert']}", ok


def _random_reductions(ring, seed, trials=20):
    """Randomized substitution orders give the same normal form."""
    rng = random.Random(seed)
    rays = len(ring.fan.rays)
    for _ in range(trials):
        q = rng.randint(1, ring.r)
        exps = {}
        for _ in range(q):
            k = rng.randrange(rays)
            exps[k] = exps.get(k, 0) + 1
        if ring.reduce(exps) != ring.reduce(exps, rule="random", rng=rng):
            return False
    return True


def cmd_chow_pd(args):
    m, _ = load_input(args)
    flats = _filter(m, args)
    ring = chow_ring(m, flats)
    levels = []
    ok = True
    for q in range(ring.r + 1):
        pairing = ring.pairing_matrix(q)
        dim, dual = ring.dim(q), ring.dim(ring.r - q)
        rank = bareiss_rank(pairing) if pairing and pairing[0] else 0
        level = {"q": q, "dim": dim, "dual_dim": dual, "rank": rank,
                 "nondegenerate": dim == dual == rank}
        try:
            level["integral_det"] = int(determinant(ring.integral_pairing_matrix(q)))
        except VerificationError as exc:
            level["integral_det"] = None
            level["integral_error"] = exc.code
        level["unimodular"] = level["integral_det"] in (1, -1)
        ok &= level["nondegenerate"] and level["unimodular"]
        levels.append(level)
    out = {"matroid": m.name, "filter": describe_filter(m, flats), "levels": levels, "pass": ok}
    text = "\n".join(f"q={lv['q']}: dim {lv['dim']}/{lv['dual_dim']}, rank {lv['rank']}, "
                     f"integral det {lv['integral_det']}" for lv in levels)
    return out, text, ok


def cmd_flip_verify(args):
    m, _ = load_input(args)
    start = _filter(m, args, default="empty")
    order = flip_order(m, start)
    report = flip_report(m, start, order)
    ring = chow_ring(m, start)
    top = ring.basis(ring.r)
    agree = True
    orders = admissible_orders(m, start)
    for b in top:
        degrees = {degree_via_chain(m, start, ring.from_cones(ring.r, {b: 1}), o)
                   for o in orders}
        agree &= len(degrees) == 1
    out = {"matroid": m.name, "start": describe_filter(m, start),
           "order": [bits(z) for z in order], "steps": report["steps"],
           "orders_compared": len(orders), "degree_chain_agreement": agree,
           "pass": report["pass"] and agree}
    lines = []
    for step in report["steps"]:
        flags = "".join("." if d["pass"] else "F" for d in step["degrees"])
        lines.append(f"center {step['center']} (rank {step['center_rank']}): {flags}")
    lines.append(f"degree agrees across {len(orders)} flat orders: {agree}")
    return out, "\n".join(lines), out["pass"]


def cmd_hodge_certify(args):
    m, _ = load_input(args)
    flats = _filter(m, args)
    ring = chow_ring(m, flats)
    ell, ell_id = load_ell(ring, args.ell)
    report = certify(ring, ell, nef=args.nef, ell_id=ell_id)
    out = report.to_json()
    text = "\n".join(f"q={lv['q']}: dim {lv['dim']}, signature {tuple(lv['signature'])}, "
                     f"HL {'pass' if lv['hl'] else 'FAIL'}, HR {'pass' if lv['hr'] else 'FAIL'}"
                     for lv in report.levels)
    return out, text, report.hl and report.hr and report.consistent


def cmd_logconcave(args):
    m, graph = load_input(args)
    report = certify_all(m)
    out = report.to_json()
    ok = report.passed
    if graph is not None:
        poly, chrom = chromatic(*graph)
        out["chromatic"] = {"coefficients": list(poly.coefficients),
                            **chrom.sequences["chromatic"]}
        ok &= chrom.passed
    out["pass"] = ok
    sequences = dict(report.sequences)
    if graph is not None:
        sequences["chromatic"] = chrom.sequences["chromatic"]
    text = "\n".join(f"{name}: {s['values']} log-concave={s['log_concave_all']} "
                     f"unimodal={s['unimodal']}" for name, s in sequences.items())
    return out, text, ok


HANDLERS = {
    ("catalog", "list"): cmd_catalog_list,
    ("matroid", "info"): cmd_matroid_info,
    ("charpoly",): cmd_charpoly,
    ("fan", "check"): cmd_fan_check,
    ("chow", "dims"): cmd_chow_dims,
    ("chow", "pd"): cmd_chow_pd,
    ("flip", "verify"): cmd_flip_verify,
    ("hodge", "certify"): cmd_hodge_certify,
    ("logconcave",): cmd_logconcave,
}


def _dump(obj):
    return json.dumps(obj, sort_keys=True, indent=2, default=str) + "\n"


def run(argv, stdout=None, stderr=None):
    """Run the CLI; returns the exit code (0 pass, 1 verification failure,
    2 usage or input error)."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    as_json = "--json" in argv
    try:
        args = make_parser().parse_args(argv)
        key = (args.command,) if getattr(args, "action", None) is None \
            else (args.command, args.action)
        handler = HANDLERS.get(key)
        if handler is None:
            raise InputError("usage-error", f"unknown command {' '.join(filter(None, key)) or '(none)'}")
        started = time.perf_counter()
        out, text, ok = handler(args)
        if args.verbose:
            stderr.write(f"{' '.join(key)}: {time.perf_counter() - started:.2f}s\n")
    except MatroidHodgeError as exc:
        code = 2 if isinstance(exc, InputError) else 1
        if as_json:
            stdout.write(_dump({"schema_version": SCHEMA_VERSION, "error": exc.to_json()}))
        else:
            stderr.write(f"error [{exc.code}]: {exc.message}\n")
        return code
    if as_json:
        stdout.write(_dump({"schema_version": SCHEMA_VERSION, **out}))
    else:
        stdout.write(text + "\n")
    return 0 if ok else 1


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
