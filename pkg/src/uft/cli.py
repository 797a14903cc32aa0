"""Command-line driver: ``uft check | level-of | verify | neg-suite``.

Exit status is 0 when no error was reported, 1 on any checking error and 2 on
unreadable input, a malformed manifest or bad flags.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional, Sequence, TextIO

from . import corpus
from .diagnostics import Diagnostic, to_jsonl
from .errors import UftError
from .kernel import infer_level_of
from .level import show_level
from .session import Session

OK, FAILED, USAGE = 0, 1, 2


class Output:
    def __init__(self, json_mode: bool, ascii: bool, stream: TextIO):
        self.json = json_mode
        self.ascii = ascii
        self.stream = stream
        self.diags: list[Diagnostic] = []
        mode = os.environ.get("UFT_COLOR", "auto")
        self.color = not json_mode and mode != "never" and hasattr(stream, "isatty") and stream.isatty()

    def emit(self, d: Diagnostic) -> None:
        self.diags.append(d)
        if self.json:
            self.stream.write(to_jsonl([d]))
        else:
            print(d.render(self.color), file=self.stream)

    def text(self, line: str) -> None:
        if not self.json:
            print(line, file=self.stream)

    @property
    def status(self) -> int:
        return FAILED if any(d.severity == "error" for d in self.diags) else OK


def _paths(args: argparse.Namespace) -> list[Path | str]:
    paths: list[Path | str] = list(args.files) or corpus.corpus_contents()
    if args.prelude_univalence:
        paths = corpus.with_univalence(paths)
    return paths


def _io_error(out: Output, path, e: OSError) -> int:
    out.emit(Diagnostic("error", "io-error", f"cannot read {path}: {e.strerror or e}", str(path)))
    return USAGE


def _load(args, out: Output) -> tuple[Optional[Session], int]:
    s = Session(unit_eta=not args.no_unit_eta, ascii=args.ascii)
    for p in _paths(args):
        try:
            diags = s.check_file(p)
        except OSError as e:
            return None, _io_error(out, p, e)
        if diags:
            for d in diags:
                out.emit(d)
            return None, FAILED
    return s, OK


def cmd_check(args, out: Output) -> int:
    s, status = _load(args, out)
    if s is None:
        return status
    out.text(f"checked {len(s.checked)} declaration(s)")
    return out.status


def cmd_level_of(args, out: Output) -> int:
    s, status = _load(args, out)
    if s is None:
        return status
    name = args.name
    if name not in s.env:
        out.emit(Diagnostic("error", "unbound", f"no declaration named {name!r}"))
        return out.status
    try:
        lvl = infer_level_of(s.env, name, s.unit_eta)
    except UftError as e:
        out.emit(Diagnostic.from_error(e))
        return out.status
    shown = show_level(lvl, args.ascii)
    out.text(f"{name} : {shown}")
    if out.json:
        out.emit(Diagnostic("info", "level", f"{name} : {shown}", decl=name, actual=shown))
    return out.status


def cmd_verify(args, out: Output) -> int:
    manifest = Path(args.manifest) if args.manifest else corpus.MANIFEST
    try:
        entries = corpus.parse_manifest(manifest.read_text(encoding="utf-8"), str(manifest))
    except OSError as e:
        return _io_error(out, manifest, e)
    except UftError as e:
        out.emit(Diagnostic("error", e.code, e.message, str(manifest)))
        return USAGE
    s, status = _load(args, out)
    if s is None:
        return status
    if not entries:
        out.emit(Diagnostic("info", "empty-manifest", "manifest has no entries; nothing to verify", str(manifest)))
        return out.status
    results = corpus.verify_manifest(s.env, entries, s.unit_eta)
    rows = [("", "name", "expected", "inferred")] + [r.row(args.ascii) for r in results]
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    for r in rows:
        out.text("  ".join(col.ljust(w) for col, w in zip(r, widths)).rstrip())
    for r in results:
        if not r.passed:
            exp = None if r.expected is None else show_level(r.expected, args.ascii)
            act = None if r.inferred is None else show_level(r.inferred, args.ascii)
            out.emit(Diagnostic("error", "manifest-mismatch", f"{r.entry.name}: {r.message}",
                                str(manifest), expected=exp, actual=act, decl=r.entry.name))
    passed = sum(r.passed for r in results)
    out.text(f"{passed}/{len(results)} entries verified")
    return out.status


def cmd_neg_suite(args, out: Output) -> int:
    try:
        cases = [corpus.read_negative_case(p) for p in args.cases] if args.cases else corpus.negative_suite()
    except OSError as e:
        return _io_error(out, getattr(e, "filename", "?"), e)
    except UftError as e:
        out.emit(Diagnostic("error", e.code, e.message))
        return USAGE
    args.files = args.corpus or []
    s, status = _load(args, out)
    if s is None:
        return status
    results = corpus.run_negative_suite(s.env, cases, s.unit_eta)
    for r in results:
        mark = "pass" if r.passed else "FAIL"
        out.text(f"{mark}  {r.case.path.name}: expected {r.case.expected}, got {r.actual or 'acceptance'}")
        if not r.passed:
            out.emit(Diagnostic("error", "negative-case-failed",
                                f"{r.case.path.name} should fail with {r.case.expected}: {r.message}",
                                str(r.case.path), expected=r.case.expected, actual=r.actual or "accepted"))
    out.text(f"{sum(r.passed for r in results)}/{len(results)} negative cases failed as expected")
    return out.status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="one JSON record per diagnostic")
    common.add_argument("--ascii", action="store_true", help="print terms and levels in ASCII")
    common.add_argument("--no-unit-eta", action="store_true", help="disable the η-rule for 𝟙")
    common.add_argument("--prelude-univalence", action="store_true",
                        help="check the univalence postulate right after the prelude")

    ap = argparse.ArgumentParser(prog="uft", description="Checker for a predicative univalent type theory.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="check files in order")
    p.add_argument("files", nargs="*", help="files in dependency order (default: shipped corpus)")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("level-of", parents=[common], help="print the universe level of a declaration")
    p.add_argument("name")
    p.add_argument("files", nargs="*", help="files in dependency order (default: shipped corpus)")
    p.set_defaults(run=cmd_level_of)

    p = sub.add_parser("verify", parents=[common], help="verify a level manifest")
    p.add_argument("--manifest", "-m", help="manifest file (default: shipped manifest)")
    p.add_argument("files", nargs="*", help="corpus files (default: shipped corpus)")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("neg-suite", parents=[common], help="run files that must be rejected")
    p.add_argument("cases", nargs="*", help="negative files (default: shipped suite)")
    p.add_argument("--corpus", action="append", default=[],
                   help="corpus file to check first (repeatable; default: shipped corpus)")
    p.set_defaults(run=cmd_neg_suite)
    return ap


def main(argv: Optional[Sequence[str]] = None, stream: Optional[TextIO] = None) -> int:
    args = build_parser().parse_args(argv)
    out = Output(args.json, args.ascii, stream or sys.stdout)
    return args.run(args, out)


if __name__ == "__main__":
    sys.exit(main())
