"""Command-line interface.

Exit status: 0 when every check passes, 1 when a mathematical check fails,
2 for usage, parse or file errors.  ``--format json`` switches any command to
machine-readable output.
"""
from __future__ import annotations

import argparse
import json
import pathlib
import re
import sys
from typing import Sequence

from . import __version__
from .algebra import Algebra
from .catalog import algebra_to_text, entry as catalog_entry, instantiate, parse_single
from .catalog.fileformat import CatalogEntry
from .cohomology import h2, parse_form
from .errors import NilalgError, NotACocycle, ParseError
from .expr import evaluate, parse_expr
from .extension import ExtensionSpec, extend
from .identities import VARIETY_NAMES, builtin, holds
from .iso import DEFAULT_PRIMES, decide, witness_from_json
from .scalars import parse_field

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- argument helpers --------------------------------------------------------------------

def parse_params(text: str | None) -> dict:
    """'alpha=1,beta=-1/2' -> {'alpha': '1', 'beta': '-1/2'} (values parsed later in the algebra's field)."""
    out: dict = {}
    if not text:
        return out
    for item in filter(None, (s.strip() for s in text.split(","))):
        if "=" not in item:
            raise UsageError(f"parameter {item!r} must look like NAME=VALUE")
        k, v = (s.strip() for s in item.split("=", 1))
        out[k] = v
    return out


def parse_budget(text: str) -> float:
    m = re.fullmatch(r"\s*(\d+(?:\.\d+)?)\s*(ms|s|m)?\s*", text)
    if not m:
        raise UsageError(f"bad budget {text!r}; use e.g. 60s, 2m or 500ms")
    value = float(m.group(1))
    return value * {"ms": 0.001, "s": 1.0, "m": 60.0, None: 1.0}[m.group(2)]


def parse_primes(text: str) -> tuple:
    try:
        primes = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise UsageError(f"bad prime list {text!r}") from None
    if not primes:
        raise UsageError("empty prime list")
    return primes


def load_entry(source: str, name: str | None = None) -> CatalogEntry:
    """A file path, or @NAME for a builtin catalog entry."""
    if source.startswith("@"):
        return catalog_entry(source[1:])
    path = pathlib.Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {source}: {exc.strerror}") from None
    if name is None:
        return parse_single(text)
    from .catalog import parse_algebra_file

    for e in parse_algebra_file(text):
        if e.name == name:
            return e
    raise UsageError(f"{source} has no algebra named {name!r}")


def load_algebra(source: str, params: str | None, field: str | None = None, name: str | None = None) -> Algebra:
    e = load_entry(source, name)
    tag = parse_field(field) if field else parse_field(e.field)
    values = {k: evaluate(parse_expr(v), {}, tag) for k, v in parse_params(params).items()}
    return instantiate(e, values, field=tag)


def _describe(A: Algebra) -> str:
    params = ", ".join(f"{k}={v}" for k, v in A.params)
    return f"{A.name}({params})" if params else (A.name or "algebra")


# -- commands --------------------------------------------------------------------------------

def cmd_check(args) -> tuple:
    A = load_algebra(args.file, args.params, args.field, args.name)
    variety = args.variety
    report = holds(builtin(variety), A)
    fp = A.fingerprint()
    try:
        dims, index = A.power_series()
        nilpotent = True
    except NilalgError:
        dims, index, nilpotent = None, None, False
    ann = A.annihilator().dim
    left, right = A.left_annihilator().dim, A.right_annihilator().dim
    doc = {
        "command": "check", "algebra": _describe(A), "field": str(A.field), "variety": variety,
        "identities": {
            "holds": report.all_hold, "instances": report.instances,
            "templates": [{"name": r.name, "holds": r.holds, "instances": r.instances,
                           "counterexample": list(r.counterexample) if r.counterexample else None}
                          for r in report.results],
        },
        "nilpotent": nilpotent, "nilpotency_index": index, "power_dims": list(dims) if dims else None,
        "annihilator": {"two_sided": ann, "left": left, "right": right},
        "fingerprint": {k: getattr(fp, k) for k in fp.__dataclass_fields__},
    }
    status = "PASS" if report.all_hold else "FAIL"
    nil = f"nilpotent, index {index}" if nilpotent else "not nilpotent"
    lines = [f"{variety}: {status} ({report.instances} instances); {nil}; Ann dim {ann}"]
    if not report.all_hold:
        bad = report.first_failure()
        shown = ", ".join(f"e{i}" for i in bad.counterexample)
        lines.append(f"first counterexample: {bad.name} at ({shown})")
    lines.append(f"left Ann dim {left}; right Ann dim {right}")
    lines.append("fingerprint: " + ", ".join(f"{k}={v}" for k, v in doc["fingerprint"].items()))
    return (EXIT_OK if report.all_hold else EXIT_FAIL), lines, doc


def cmd_cohomology(args) -> tuple:
    A = load_algebra(args.file, args.params, args.field, args.name)
    H = h2(A, args.variety)
    z, b, h = H.dims
    reps = [str(r) for r in H.representatives]
    doc = {"command": "cohomology", "algebra": _describe(A), "variety": args.variety,
           "Z2": z, "B2": b, "H2": h, "representatives": reps}
    line = f"Z²={z} B²={b} H²={h}; H² reps: " + (", ".join(reps) if reps else "none")
    return EXIT_OK, [line], doc


def cmd_extend(args) -> tuple:
    A = load_algebra(args.file, args.params, args.field, args.name)
    if not args.cocycle:
        raise UsageError("extend needs at least one --cocycle")
    env = {k: v for k, v in A.params}
    forms = tuple(parse_form(text, A.dim, A.field, env) for text in args.cocycle)
    spec = ExtensionSpec(A, forms)
    try:
        B = extend(spec)
    except NotACocycle as exc:
        doc = {"command": "extend", "error": "not a cocycle", "message": str(exc)}
        return EXIT_FAIL, [f"not a cocycle: {exc}"], doc
    name = args.out_name or (f"{A.name}_ext" if A.name else "B")
    text = algebra_to_text(B, name)
    doc = {"command": "extend", "parent": _describe(A), "cocycles": [str(f) for f in forms],
           "dim": B.dim, "field": str(B.field), "algebra": text}
    return EXIT_OK, [text.rstrip("\n")], doc


def cmd_iso(args) -> tuple:
    A = load_algebra(args.file_a, args.params_a, args.field, None)
    B = load_algebra(args.file_b, args.params_b, args.field, None)
    witness = None
    if args.witness:
        try:
            doc_w = json.loads(pathlib.Path(args.witness).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read witness {args.witness}: {exc}") from None
        witness = witness_from_json(doc_w, A.field)
    verdict = decide(A, B, witness=witness, primes=parse_primes(args.primes), budget=parse_budget(args.budget))
    doc = {"command": "iso", "a": _describe(A), "b": _describe(B), **verdict.to_json()}
    lines = [verdict.summary()]
    if verdict.details.get("witness") == "rejected":
        lines.append("note: the supplied witness is not an isomorphism")
    failed = verdict.kind == "unknown" or verdict.details.get("witness") == "rejected"
    return (EXIT_FAIL if failed else EXIT_OK), lines, doc


def cmd_fingerprint(args) -> tuple:
    A = load_algebra(args.file, args.params, args.field, args.name)
    fp = A.fingerprint()
    doc = {"command": "fingerprint", "algebra": _describe(A), **{k: getattr(fp, k) for k in fp.__dataclass_fields__}}
    return EXIT_OK, [", ".join(f"{k}={getattr(fp, k)}" for k in fp.__dataclass_fields__)], doc


def cmd_catalog(args) -> tuple:
    from .catalog import builtin_catalog, unparse
    from .catalog.verify import coverage, export_catalog, verify_catalog

    sections = tuple(args.section) if args.section else None
    if args.action == "verify":
        reports = verify_catalog(sections, args.samples, args.workers)
        if not reports:
            raise UsageError(f"no catalog entries in section(s) {', '.join(sections or ())}")
        failed = [r for r in reports if not r.ok]
        cov = coverage(sections)
        lines = [r.line() for r in reports if args.verbose or not r.ok]
        lines.append(f"{len(reports) - len(failed)}/{len(reports)} entries pass "
                     f"({sum(r.samples for r in reports)} instantiations, "
                     f"{sum(r.instances for r in reports)} identity instances)")
        ext = sum(v["external"] for v in cov.values())
        if ext:
            lines.append(f"{ext} external entries without tables are not checked")
        doc = {"command": "catalog verify", "passed": not failed, "coverage": cov,
               "entries": [{"name": r.name, "section": r.section, "ok": r.ok, "samples": r.samples,
                            "instances": r.instances, "failures": r.failures} for r in reports]}
        return (EXIT_FAIL if failed else EXIT_OK), lines, doc
    if args.action == "export":
        if not args.directory:
            raise UsageError("catalog export needs a target directory")
        path = export_catalog(args.directory)
        return EXIT_OK, [f"wrote {path}"], {"command": "catalog export", "index": str(path)}
    if args.action == "show":
        if not args.directory:
            raise UsageError("catalog show needs an entry name")
        e = catalog_entry(args.directory)
        return EXIT_OK, [unparse(e).rstrip("\n")], {"command": "catalog show", "name": e.name, "text": unparse(e)}
    entries = [e for e in builtin_catalog() if not sections or e.section in sections]
    lines = [f"{e.name:10s} {e.section:4s} " + (" ".join(e.params) or "-") + (" (external)" if e.external else "")
             for e in entries]
    doc = {"command": "catalog list", "entries": [{"name": e.name, "section": e.section, "params": list(e.params),
                                                   "external": e.external} for e in entries]}
    return EXIT_OK, lines, doc


def cmd_action(args) -> tuple:
    from .orbit import ACTION_BLOCKS, verify_action_block

    blocks = args.block or sorted(ACTION_BLOCKS)
    unknown_blocks = [b for b in blocks if b not in ACTION_BLOCKS]
    if unknown_blocks:
        raise UsageError(f"unknown block(s) {', '.join(unknown_blocks)}; known: {', '.join(sorted(ACTION_BLOCKS))}")
    results, lines, failed = [], [], False
    for b in blocks:
        rep = verify_action_block(b, samples=args.samples, seed=args.seed, raise_on_failure=False)
        results.append({"block": b, "samples": rep.samples, "passed": rep.passed, "failure": rep.failure})
        if rep.passed:
            lines.append(f"block {b}: PASS ({rep.samples} samples)")
        else:
            failed = True
            f = rep.failure
            lines.append(f"block {b}: FAIL at sample {rep.samples}: entry {f['entry']} computed {f['computed']}, "
                         f"formula gives {f['expected']} at {f['assignment']}")
    return (EXIT_FAIL if failed else EXIT_OK), lines, {"command": "action verify", "blocks": results}


# -- parser -------------------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nilalg", description="Exact computations with nilpotent algebras and central extensions.")
    p.add_argument("--version", action="version", version=f"nilalg {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def algebra_cmd(name, help_text):
        s = sub.add_parser(name, parents=[common], help=help_text)
        s.add_argument("file", help="algebra file, or @NAME for a catalog entry")
        s.add_argument("--params", help="NAME=VALUE,... for the table parameters")
        s.add_argument("--field", help="field override, e.g. Q(sqrt(-3))")
        s.add_argument("--name", help="algebra to use when the file holds several")
        return s

    s = algebra_cmd("check", "identities, nilpotency, annihilators and fingerprint")
    s.add_argument("--variety", default="cd", choices=VARIETY_NAMES + ("jordan",))
    s = algebra_cmd("cohomology", "Z², B² and H² with representatives")
    s.add_argument("--variety", default="cd", choices=VARIETY_NAMES + ("jordan",))
    s = algebra_cmd("extend", "central extension by one or more cocycles")
    s.add_argument("--cocycle", action="append", help="D(i,j) combination; repeat for several")
    s.add_argument("--out-name", help="name of the extended algebra")
    algebra_cmd("fingerprint", "basis-invariant summary")

    s = sub.add_parser("iso", parents=[common], help="decide isomorphism")
    s.add_argument("file_a")
    s.add_argument("file_b")
    s.add_argument("--params-a")
    s.add_argument("--params-b")
    s.add_argument("--field")
    s.add_argument("--witness", help="JSON file with rows of the matrix (columns = images)")
    s.add_argument("--primes", default=",".join(map(str, DEFAULT_PRIMES)))
    s.add_argument("--budget", default="60s")

    s = sub.add_parser("catalog", parents=[common], help="builtin catalog")
    s.add_argument("action", choices=("verify", "export", "list", "show"))
    s.add_argument("directory", nargs="?", help="target directory for export, entry name for show")
    s.add_argument("--section", action="append")
    s.add_argument("--samples", type=int, default=3)
    s.add_argument("--workers", type=int)
    s.add_argument("--verbose", action="store_true")

    s = sub.add_parser("action", parents=[common], help="transformation formulas of cocycle coordinates")
    s.add_argument("action", choices=("verify",))
    s.add_argument("--block", action="append")
    s.add_argument("--samples", type=int, default=20)
    return p


COMMANDS = {"check": cmd_check, "cohomology": cmd_cohomology, "extend": cmd_extend, "iso": cmd_iso,
            "fingerprint": cmd_fingerprint, "catalog": cmd_catalog, "action": cmd_action}


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    fmt = "json" if argv and "--format" in argv and "json" in argv else "text"
    try:
        args = parser.parse_args(argv)
        fmt = getattr(args, "format", "text")
        if not args.command:
            raise UsageError("missing command; see --help")
        code, lines, doc = COMMANDS[args.command](args)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (UsageError, ParseError) as exc:
        return _report_error(fmt, out, err, "usage" if isinstance(exc, UsageError) else "parse", str(exc), EXIT_USAGE)
    except NilalgError as exc:
        return _report_error(fmt, out, err, type(exc).__name__, str(exc), EXIT_USAGE)
    doc["exit_code"] = code
    if fmt == "json":
        out.write(json.dumps(doc, indent=1, default=str) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return code


def _report_error(fmt, out, err, kind, message, code) -> int:
    if fmt == "json":
        out.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")
    else:
        err.write(f"nilalg: {kind} error: {message}\n")
    return code


def main(argv: Sequence[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
