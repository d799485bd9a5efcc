"""Command-line front end.

Exit codes: 0 when everything passes, 1 on a verification failure, 2 on bad
input.  ``--format json`` prints one deterministic JSON document.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import yaml

from . import checks
from .checks import CheckResult
from .envelope import (EnvAlgebra, EnvError, completion_order, identity_env, limit_multiply,
                       theta_family, verify_identity_A1)
from .loop import EllipticLie, LoopElt, LoopError
from .prep_rep import RepError, dump_rep, is_nilpotent, parse_rep, reflect, torsion_membership
from .quiver import QuiverError, builtin_quiver, load_quiver
from .series import SeriesError, TruncationWindow, coha_character, semistable_character, slopes_in_window
from .shuffle import ShuffleAlgebra, ShuffleError, deserialize, serialize, shuffle_mul, to_text
from .weyl import BraidWord, WeylError

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# ---------------------------------------------------------------- parsing helpers

def _ints(text: str) -> List[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise InputError(f"expected comma-separated integers, got {text!r}") from exc


def load_quiver_arg(arg: Optional[str]):
    """A path to a quiver file, or a builtin tag such as A1~ or D4~."""
    if not arg:
        raise InputError("--quiver is required")
    if os.path.exists(arg):
        return load_quiver(arg)
    try:
        return builtin_quiver(arg)
    except QuiverError as exc:
        raise InputError(f"{arg!r} is neither a file nor a builtin quiver ({exc})") from exc


def parse_window(text: str, nvertices: int) -> TruncationWindow:
    """``D`` or ``D:K``: total dimension at most D, |q-degree| at most K (default 4)."""
    parts = text.split(":")
    try:
        D = int(parts[0])
        K = int(parts[1]) if len(parts) > 1 else 4
    except ValueError as exc:
        raise InputError(f"bad window {text!r}; use D or D:K") from exc
    if D < 0 or K < 0:
        raise InputError(f"window bounds must be nonnegative, got {text!r}")
    return TruncationWindow.total(nvertices, D, K)


def default_theta(Q) -> List[int]:
    return [0] + list(range(1, Q.num_vertices))


def _frac(x) -> str:
    return str(Fraction(x))


# ---------------------------------------------------------------- output

class Report:
    def __init__(self, fmt: str):
        self.fmt = fmt
        self.data: Dict[str, object] = {}
        self.lines: List[str] = []

    def line(self, text: str) -> None:
        self.lines.append(text)

    def emit(self) -> None:
        if self.fmt == "json":
            print(json.dumps(self.data, sort_keys=True, indent=1))
        else:
            print("\n".join(self.lines))


def report_checks(report: Report, suite: str, results: Sequence[CheckResult]) -> bool:
    bad = checks.failures(results)
    report.data.setdefault("suites", {})[suite] = {
        "total": len(results), "failed": len(bad), "results": [r.as_dict() for r in results]}
    for r in results:
        report.line(f"[{'PASS' if r.passed else 'FAIL'}] {suite}: {r.name}"
                    + ("" if r.passed or not r.witness else f"  witness: {r.witness}"))
    report.line(f"{suite}: {len(results) - len(bad)}/{len(results)} passed")
    return not bad


# ---------------------------------------------------------------- commands

def cmd_character(args, report: Report) -> int:
    Q = load_quiver_arg(args.quiver)
    window = parse_window(args.window or "2", Q.num_vertices)
    theta = _ints(args.theta) if args.theta else default_theta(Q)
    ch = coha_character(Q, window)
    rows = [(list(d), k, _frac(c)) for d, k, c in ch.terms()]
    report.data["character"] = rows
    report.line("coha character (d, q-degree, coefficient):")
    report.lines += [f"  {d} {k} {c}" for d, k, c in rows]
    ss = {}
    for mu in slopes_in_window(theta, window):
        series = semistable_character(Q, theta, [mu], window)
        ss[str(mu)] = [(list(d), k, _frac(c)) for d, k, c in series.terms() if any(d)]
    report.data["theta"] = theta
    report.data["semistable"] = ss
    report.line(f"semistable characters for theta={theta}:")
    for mu, rows in ss.items():
        report.line(f"  slope {mu}: " + ", ".join(f"{d}q^{k}:{c}" for d, k, c in rows))
    return EXIT_OK


SUITES = ("relations", "identities", "braid", "reflect", "twist")


def cmd_verify(args, report: Report) -> int:
    suites = SUITES if args.suite == "all" else (args.suite,)
    # the identities live on A1~ and need no quiver argument
    Q = load_quiver_arg(args.quiver) if suites != ("identities",) else None
    ok = True
    for suite in suites:
        if suite == "relations":
            results = checks.check_relations(Q, args.modes)
        elif suite == "identities":
            results = checks.check_identities(args.order)
        elif suite == "braid":
            results = checks.check_braid_relations(Q) + checks.check_translation(Q)
        elif suite == "reflect":
            results = checks.check_reflections(Q, count=args.count, seed=args.seed)
        else:
            results = checks.check_twists(Q, count=args.count, seed=args.seed)
        ok &= report_checks(report, suite, results)
    report.data["seed"] = args.seed
    report.line(f"seed: {args.seed}")
    return EXIT_OK if ok else EXIT_FAIL


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def cmd_shuffle(args, report: Report) -> int:
    Q = load_quiver_arg(args.quiver)
    A = ShuffleAlgebra(Q)
    if args.action == "mul":
        if len(args.files) != 2:
            raise InputError("shuffle mul needs two element files")
        P, R = (deserialize(A, _read_json(p)) for p in args.files)
        out = shuffle_mul(A, P, R)
        report.data["product"] = serialize(A, out)
        report.line(to_text(A, out))
        return EXIT_OK
    results = checks.check_relations(Q, args.modes)
    return EXIT_OK if report_checks(report, "relations", results) else EXIT_FAIL


def cmd_braid(args, report: Report) -> int:
    Q = load_quiver_arg(args.quiver)
    L = EllipticLie(Q)
    word = BraidWord.parse(args.word.split(",")) if args.word else BraidWord.parse([])
    v = LoopElt.basis(L.parse_symbol(args.element))
    out = L.apply_word(word, v)
    terms = sorted(((L.symbol_text(s), _frac(c)) for s, c in out.terms.items()))
    report.data["word"] = word.serialize()
    report.data["result"] = terms
    report.line(" + ".join(f"{c}*{s}" for s, c in terms) or "0")
    return EXIT_OK


def cmd_identity(args, report: Report) -> int:
    L = EllipticLie(builtin_quiver("A1~"))
    env = identity_env(L)
    ok_all = True
    for which in ("h", "e") if args.which == "both" else (args.which,):
        ok, wit = verify_identity_A1(L, which, args.order, env)
        ok_all &= ok
        report.data[which] = {"passed": ok, "witness": None if ok else [wit[0], env.serialize(wit[1])]}
        report.line(f"[{'PASS' if ok else 'FAIL'}] {which}-series up to order {args.order}"
                    + ("" if ok else f"  witness at order {wit[0]}: {env.to_text(wit[1])}"))
    return EXIT_OK if ok_all else EXIT_FAIL


def _parse_class(text: str):
    parts = text.split(":")
    if len(parts) != 3 or parts[0] not in ("Y", "Z", "1"):
        raise InputError(f"bad class {text!r}; use Y:i:n, Z:i:n or 1:0:0")
    return parts[0], int(parts[1]), int(parts[2])


def cmd_limit(args, report: Report) -> int:
    Q = load_quiver_arg(args.quiver)
    L = EllipticLie(Q)
    env = EnvAlgebra(L, completion_order(L))
    x, y = _parse_class(args.x), _parse_class(args.y)
    z, depth = limit_multiply(env, theta_family(env, *x), theta_family(env, *y), args.level)
    report.data.update({"product": env.serialize(z), "stable_depth": depth, "level": args.level})
    report.line(f"stable from depth {depth}: {env.to_text(z)}")
    return EXIT_OK


def cmd_rep(args, report: Report) -> int:
    Q = load_quiver_arg(args.quiver)
    try:
        with open(args.file) as fh:
            M = parse_rep(Q, fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {args.file}: {exc}") from exc
    if args.action == "check":
        nil = is_nilpotent(M)
        flags = {i: torsion_membership(M, i) for i in Q.vertices}
        report.data["nilpotent"] = nil
        report.data["torsion"] = {str(i): {"in_T": f.in_T, "in_F": f.in_F} for i, f in flags.items()}
        report.line(f"dim {list(M.dim)} nilpotent: {nil}")
        for i, f in flags.items():
            report.line(f"  vertex {i}: in T^(s_i) {f.in_T}, in F^(s_i) {f.in_F}")
        return EXIT_OK
    if args.vertex is None:
        raise InputError("rep reflect needs --vertex")
    out = reflect(M, args.vertex, args.dir)
    text = dump_rep(out)
    report.data["module"] = yaml.safe_load(text)
    report.line(text.rstrip())
    return EXIT_OK


# ---------------------------------------------------------------- argument parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiver", help="quiver YAML file or builtin tag (A1~, A2~, D4~, ...)")
    common.add_argument("--theta", help="stability vector, comma-separated")
    common.add_argument("--window", help="truncation window D or D:K")
    common.add_argument("--modes", type=int, default=2, help="maximal mode degree for relations")
    common.add_argument("--order", type=int, default=5, help="maximal order for the identities")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(prog="quiverlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("character", parents=[common], help="character tables")
    p.set_defaults(func=cmd_character)

    p = sub.add_parser("verify", parents=[common], help="batch verification suites")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--count", type=int, default=50, help="random instances for reflect/twist")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("shuffle", parents=[common], help="shuffle products and relation checks")
    p.add_argument("action", choices=("mul", "check"))
    p.add_argument("files", nargs="*", help="two JSON element files for mul")
    p.set_defaults(func=cmd_shuffle)

    p = sub.add_parser("braid", parents=[common], help="braid operators on the loop algebra")
    p.add_argument("action", choices=("apply",))
    p.add_argument("--word", default="", help="signed letters, e.g. 1,-2 (letter k is T_{k-1})")
    p.add_argument("--element", required=True, help="basis symbol, e.g. 'e[1,0]s^-1 t^0'")
    p.set_defaults(func=cmd_braid)

    p = sub.add_parser("identity", parents=[common], help="generating-series identities on A1~")
    p.add_argument("action", choices=("verify",))
    p.add_argument("--which", choices=("h", "e", "both"), default="both")
    p.set_defaults(func=cmd_identity)

    p = sub.add_parser("limit", parents=[common], help="limit multiplication of Θ classes")
    p.add_argument("action", choices=("mul",))
    p.add_argument("--x", required=True, help="class Y:i:n, Z:i:n or 1:0:0")
    p.add_argument("--y", required=True)
    p.add_argument("--level", type=int, default=1)
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("rep", parents=[common], help="preprojective modules")
    p.add_argument("action", choices=("check", "reflect"))
    p.add_argument("file")
    p.add_argument("--vertex", type=int)
    p.add_argument("--dir", choices=("S", "S'"), default="S")
    p.set_defaults(func=cmd_rep)
    return parser


INPUT_ERRORS = (InputError, QuiverError, SeriesError, ShuffleError, WeylError, LoopError,
                EnvError, RepError, ValueError)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    report = Report(args.format)
    try:
        code = args.func(args, report)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report.emit()
    return code


if __name__ == "__main__":
    sys.exit(main())
