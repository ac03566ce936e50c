"""Command line front end.

Exit codes: 0 success, 1 check failure, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import automata, verification
from .bundle import BundleError, InstanceBundle, make_bundle
from .primes import ClusterNotFound
from .residues import accepted_by, crt_reconstruct
from .tournament import (
    OrientationNotFound,
    Tournament,
    TournamentError,
    covering_threshold,
    find_orientation,
    smallest_inbound_covering_size,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_tournament(path) -> tuple:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return Tournament.from_dict(data), data.get("certified_k")
    except (OSError, json.JSONDecodeError, KeyError, TournamentError) as exc:
        raise UsageError(f"cannot load tournament {path}: {exc}") from exc


def _load_bundle(path) -> InstanceBundle:
    if not path:
        raise UsageError("--bundle is required")
    try:
        return InstanceBundle.load(path)
    except BundleError as exc:
        raise UsageError(str(exc)) from exc


def cmd_orient(args) -> int:
    try:
        t = find_orientation(args.k, args.n, args.max_tries, args.seed)
    except OrientationNotFound as exc:
        print(f"orient: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except TournamentError as exc:
        raise UsageError(str(exc)) from exc
    doc = t.to_dict()
    doc["certified_k"] = args.k
    doc["seed"] = args.seed
    _emit(json.dumps(doc, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def cmd_build(args) -> int:
    t, k = _load_tournament(args.tournament)
    if k is not None and smallest_inbound_covering_size(t, int(k)) is not None:
        raise UsageError(f"tournament claims certified_k={k} but has a smaller inbound-covering set")
    prov = {"tournament_file": Path(args.tournament).name, "certified_k": int(k) if k is not None else covering_threshold(t)}
    try:
        bundle = make_bundle(t, args.b, args.prime_mode, prov)
    except (BundleError, ClusterNotFound) as exc:
        raise UsageError(str(exc)) from exc
    _emit(bundle.to_json(), args.out)
    return EXIT_OK


def _run_suite(name: str, bundle, args) -> verification.Verdict:
    if name == "theorem10":
        return verification.theorem10_verdict(tuple(args.d))
    ms = bundle.ms
    if name == "lemma8":
        return verification.check_lemma8(ms, seed=args.seed)
    if name == "lemma9":
        k = bundle.certified_k
        if k < 1 or smallest_inbound_covering_size(ms.tournament, k) is not None:
            return verification.Verdict("lemma9", verification.instance_descriptor(ms), False, {"uncertified_k": k})
        return verification.check_lemma9(ms, k, seed=args.seed)
    if name == "automata":
        try:
            return verification.check_automata(ms, window=args.window, seed=args.seed, state_cap=args.cap)
        except automata.CapExceeded as exc:
            v = verification.Verdict("automata", verification.instance_descriptor(ms), None)
            v.census = {"skipped": "cap exceeded", "required_states": str(exc.required), "cap": exc.cap}
            return v
    raise UsageError(f"unknown suite {name}")


def cmd_check(args) -> int:
    suites = ["lemma8", "lemma9", "automata", "theorem10"] if args.suite == "all" else [args.suite]
    bundle = None
    if any(s != "theorem10" for s in suites):
        bundle = _load_bundle(args.bundle)
    verdicts = [_run_suite(s, bundle, args) for s in suites]
    _emit(json.dumps([v.to_dict() for v in verdicts], sort_keys=True, indent=1) + "\n", args.out)
    for v in verdicts:
        status = {True: "PASS", False: "FAIL", None: "SKIP"}[v.passed]
        print(f"{v.check:<10} {status}", file=sys.stderr)
    return EXIT_FAIL if any(v.passed is False for v in verdicts) else EXIT_OK


def parse_length(text: str, ms) -> int:
    """Decimal integer, ``product-of-all-primes``, or ``residues:r0,r1,...``."""
    text = text.strip()
    if text == "product-of-all-primes":
        return ms.prime_product
    if text.startswith("residues:"):
        try:
            values = [int(x) for x in text[len("residues:") :].split(",")]
            return crt_reconstruct(ms, values)
        except ValueError as exc:
            raise UsageError(f"bad residue list: {exc}") from exc
    if not text.isdigit():
        raise UsageError(f"malformed length {text!r}")
    return int(text)


def cmd_member(args) -> int:
    ms = _load_bundle(args.bundle).ms
    t = parse_length(args.length, ms)
    residues = [t % p for p in ms.primes]
    vertex = accepted_by(ms, residues)
    doc = {
        "length": str(t),
        "in_language": vertex is not None,
        "in_complement": vertex is None,
        "vertex": vertex,
        "residues": residues,
    }
    _emit(json.dumps(doc, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def cmd_export(args) -> int:
    bundle = _load_bundle(args.bundle)
    ms = bundle.ms
    try:
        if args.what == "tournament-dot":
            text = ms.tournament.to_dot()
        elif args.what == "ufa-dot":
            text = automata.build_ufa(ms, args.cap).to_dot(node_cap=args.cap)
        elif args.what == "ufa-json":
            text = automata.build_ufa(ms, args.cap).to_json() + "\n"
        else:
            text = automata.build_swdfa(ms, args.complement, args.cap).to_json() + "\n"
    except automata.CapExceeded as exc:
        print(f"export: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unaryufa", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    o = sub.add_parser("orient", help="find a tournament without small inbound-covering sets")
    o.add_argument("--k", type=int, required=True)
    o.add_argument("--n", type=int)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--max-tries", type=int, default=100_000)
    o.add_argument("--out")
    o.set_defaults(func=cmd_orient)

    b = sub.add_parser("build", help="assemble an instance bundle")
    b.add_argument("--b", type=int, default=2)
    b.add_argument("--tournament", required=True)
    b.add_argument("--prime-mode", choices=["cluster", "desk"], default="desk")
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("check", help="run verification suites")
    c.add_argument("--bundle")
    c.add_argument("--suite", choices=["lemma8", "lemma9", "theorem10", "automata", "all"], default="all")
    c.add_argument("--d", type=int, nargs="+", default=[8, 9, 10])
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--window", type=int, default=10**4)
    c.add_argument("--cap", type=int, default=10**6)
    c.add_argument("--out")
    c.set_defaults(func=cmd_check)

    m = sub.add_parser("member", help="membership of one length")
    m.add_argument("--bundle", required=True)
    m.add_argument("--length", required=True)
    m.add_argument("--out")
    m.set_defaults(func=cmd_member)

    e = sub.add_parser("export", help="export explicit automata or the tournament")
    e.add_argument("--bundle", required=True)
    e.add_argument("--what", choices=["ufa-dot", "ufa-json", "swdfa-json", "tournament-dot"], required=True)
    e.add_argument("--cap", type=int, default=100_000)
    e.add_argument("--complement", action="store_true")
    e.add_argument("--out")
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
