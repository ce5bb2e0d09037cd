"""Command-line front end.

Exit codes: 0 when every asserted expectation holds, 1 on an assertion or
corpus failure, 2 on usage, input or parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .derived import Semantics
from .dsl import DslError, evaluate, parse
from .propsuite import run, run_paper_corpus
from .propsuite.registry import REGISTRY
from .core import FstsError

OK, FAILED, USAGE = 0, 1, 2


def _color_enabled(stream) -> bool:
    mode = os.environ.get("FSTS_COLOR", "auto").lower()
    if mode == "always":
        return True
    if mode == "never":
        return False
    return hasattr(stream, "isatty") and stream.isatty()


def _paint(text: str, verdict: str, enabled: bool) -> str:
    if not enabled:
        return text
    code = {"pass": "32", "fail": "31", "error": "31"}.get(verdict.lower())
    return f"\033[{code}m{text}\033[0m" if code else text


def _dump(obj, out):
    json.dump(obj, out, indent=2, sort_keys=True, ensure_ascii=False)
    out.write("\n")


def _semantics(args) -> Semantics:
    return Semantics(membership=args.membership)


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"{path}: {exc.strerror or exc}", file=sys.stderr)
        return None
    except UnicodeDecodeError as exc:
        print(f"{path}: not valid UTF-8 ({exc.reason})", file=sys.stderr)
        return None
    try:
        return parse(text)
    except DslError as exc:
        print(f"{path}:{exc.render()}", file=sys.stderr)
        return None


def cmd_eval(args, only_checks: bool = False) -> int:
    model = _load(args.file)
    if model is None:
        return USAGE
    results = evaluate(model, _semantics(args), only_checks=only_checks)
    failed = any(r.failed for r in results)
    out = sys.stdout
    if args.format == "json":
        _dump({"file": args.file, "results": [r.to_dict() for r in results]}, out)
    else:
        color = _color_enabled(out)
        for r in results:
            verdict = _paint(r.verdict, r.verdict, color)
            out.write(f"{r.span.line}:{r.span.column} {r.statement} => {verdict}\n")
            if r.witness is not None:
                out.write(f"    {json.dumps(r.witness, sort_keys=True, ensure_ascii=False)}\n")
    for r in results:
        if r.verdict == "error":
            print(f"{args.file}:{r.span.line}:{r.span.column}: {r.witness['message']}", file=sys.stderr)
    return FAILED if failed else OK


def cmd_props(args) -> int:
    ids = None
    if args.only:
        ids = [i for chunk in args.only for i in chunk.replace(",", " ").split()]
    try:
        reports = run(ids, trials=args.trials, seed=args.seed, semantics=_semantics(args),
                      do_shrink=not args.no_shrink)
    except FstsError as exc:
        print(str(exc), file=sys.stderr)
        return USAGE
    failed = [r for r in reports if not r.ok]
    out = sys.stdout
    if args.format == "json":
        _dump({
            "seed": args.seed,
            "trials": args.trials,
            "membership": args.membership,
            "reports": [r.to_dict() for r in reports],
            "failed": [r.property_id for r in failed],
        }, out)
    else:
        color = _color_enabled(out)
        for r in reports:
            v = r.verdicts()
            if r.status == "experiment":
                tag = "EXPERIMENT"
            else:
                tag = "PASS" if r.ok else "FAIL"
            if r.trials == 0 and r.corpus_models == 0:
                tag = "CORPUS" if r.status == "assert" else tag
            out.write(f"{_paint(tag.ljust(10), 'pass' if tag == 'PASS' else 'fail' if tag == 'FAIL' else '', color)} "
                      f"{r.property_id:<20} holds={v['holds']} fails={v['fails']} errors={v['errors']}\n")
            if r.status == "assert":
                for f in r.failures[:1]:
                    out.write(f"    seed={f.case_seed} {f.label} {f.detail}\n")
                    out.write("".join(f"    | {line}\n" for line in f.model.splitlines()))
        out.write(f"{len(reports) - len(failed)}/{len(reports)} properties ok (seed {args.seed}, {args.trials} trials)\n")
    return FAILED if failed else OK


def cmd_paper(args) -> int:
    items = run_paper_corpus(_semantics(args))
    passed = sum(it.passed for it in items)
    out = sys.stdout
    if args.format == "json":
        _dump({"corpus": [it.to_dict() for it in items], "passed": passed, "total": len(items)}, out)
    else:
        color = _color_enabled(out)
        for it in items:
            tag = "PASS" if it.passed else "FAIL"
            out.write(f"{_paint(tag, tag, color)} {it.name}\n")
            for r in it.results:
                if r.verdict != "pass":
                    out.write(f"    {r.span.line}:{r.span.column} {r.statement} => {r.verdict} {json.dumps(r.witness, ensure_ascii=False)}\n")
        out.write(f"{passed}/{len(items)} corpus PASS\n")
    return OK if passed == len(items) else FAILED


def cmd_list(args) -> int:
    out = sys.stdout
    if args.format == "json":
        _dump([{"id": p.id, "status": p.status, "statement": p.statement, "corpus": list(p.corpus)}
               for p in REGISTRY], out)
    else:
        for p in REGISTRY:
            out.write(f"{p.id:<20} {p.status:<11} {p.statement}\n")
    return OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--membership", choices=("weak", "strong"), default="weak",
                        help="when the 'meets the set elsewhere' clause of accumulation applies")

    parser = argparse.ArgumentParser(prog="fsts", description="Fuzzy sequential topology engine and model checker.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="parse a model file and evaluate every statement")
    p.add_argument("file")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("check", parents=[common], help="evaluate only check and expect statements")
    p.add_argument("file")
    p.set_defaults(func=lambda a: cmd_eval(a, only_checks=True))

    p = sub.add_parser("props", parents=[common], help="run the property suite on random models")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--only", action="append", metavar="IDS", help="comma-separated property ids")
    p.add_argument("--no-shrink", action="store_true", help="report failing cases unshrunk")
    p.set_defaults(func=cmd_props)

    p = sub.add_parser("paper", parents=[common], help="run the example corpus")
    p.set_defaults(func=cmd_paper)

    p = sub.add_parser("list", parents=[common], help="list the property registry")
    p.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    if getattr(args, "trials", 1) < 0:
        print("--trials must be non-negative", file=sys.stderr)
        return USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
