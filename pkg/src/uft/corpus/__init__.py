"""The shipped object-language corpus, its level manifest and the negative suite."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Optional, Sequence

from ..errors import UftError
from ..kernel import GlobalEnv, check_declaration, infer_level_of
from ..level import Level, show_level
from ..syntax import parse, parse_level, resolve, resolve_level
from ..syntax.surface import LExpr
from ..session import load

CORPUS_DIR = Path(__file__).parent
NEGATIVE_DIR = CORPUS_DIR / "neg"
MANIFEST = CORPUS_DIR / "manifest.txt"

# checked in this order; each file may use everything before it
CORPUS_FILES = ("prelude", "arith", "smallness", "logic", "images", "quotients", "vtrunc",
                "powerset", "posets", "lifting", "subsets")
UNIVALENCE = CORPUS_DIR / "univalence.uft"


def corpus_contents(univalence: bool = False) -> list[Path]:
    paths = [CORPUS_DIR / f"{n}.uft" for n in CORPUS_FILES]
    if univalence:
        paths.insert(1, UNIVALENCE)
    return paths


def with_univalence(paths: Sequence[Path | str]) -> list[Path | str]:
    """Insert the univalence file right after the prelude, or first if there is none."""
    out = list(paths)
    for i, p in enumerate(out):
        if Path(p).name == "prelude.uft":
            out.insert(i + 1, UNIVALENCE)
            return out
    return [UNIVALENCE, *out]


@lru_cache(maxsize=4)
def load_corpus(univalence: bool = False, unit_eta: bool = True) -> GlobalEnv:
    return load(corpus_contents(univalence), unit_eta)


# -- manifest -----------------------------------------------------------------------

class ManifestError(UftError):
    code = "malformed-manifest"


@dataclass(frozen=True)
class ManifestEntry:
    name: str
    arity: int
    level_text: str
    level: LExpr
    label: str
    line: int


def parse_manifest(text: str, file: str = "manifest.txt") -> list[ManifestEntry]:
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(";")]
        if len(parts) != 4:
            raise ManifestError(f"{file}:{lineno}: expected 'name ; arity ; level ; label', "
                                f"found {len(parts)} field(s)")
        name, arity, level_text, label = parts
        if not name or not arity.isdigit():
            raise ManifestError(f"{file}:{lineno}: bad name or arity")
        try:
            lexpr = parse_level(level_text, file)
        except UftError as e:
            raise ManifestError(f"{file}:{lineno}: bad level expression {level_text!r}: {e.message}") from e
        entries.append(ManifestEntry(name, int(arity), level_text, lexpr, label, lineno))
    return entries


@dataclass(frozen=True)
class ManifestResult:
    entry: ManifestEntry
    passed: bool
    expected: Optional[Level]
    inferred: Optional[Level]
    message: str

    def row(self, ascii: bool = False) -> tuple[str, str, str, str]:
        show = lambda l: "-" if l is None else show_level(l, ascii)
        return ("pass" if self.passed else "FAIL", self.entry.name, show(self.expected), show(self.inferred))


def verify_entry(env: GlobalEnv, e: ManifestEntry, unit_eta: bool = True) -> ManifestResult:
    d = env.get(e.name)
    if d is None:
        return ManifestResult(e, False, None, None, f"no declaration named {e.name!r}")
    if len(d.telescope) != e.arity:
        return ManifestResult(e, False, None, None,
                              f"{e.name!r} has {len(d.telescope)} level parameter(s), manifest says {e.arity}")
    try:
        expected = resolve_level(e.level, {v.name: v for v in d.telescope})
        inferred = infer_level_of(env, e.name, unit_eta)
    except UftError as err:
        return ManifestResult(e, False, None, None, err.message)
    assert expected is not None
    if inferred == expected:
        return ManifestResult(e, True, expected, inferred, "ok")
    return ManifestResult(e, False, expected, inferred,
                          f"expected {show_level(expected)}, inferred {show_level(inferred)}")


def verify_manifest(env: GlobalEnv, entries: Sequence[ManifestEntry], unit_eta: bool = True) -> list[ManifestResult]:
    return [verify_entry(env, e, unit_eta) for e in entries]


# -- negative suite -------------------------------------------------------------------

_EXPECT = re.compile(r"^--\s*expect:\s*([\w-]+)\s*$")


@dataclass(frozen=True)
class NegativeCase:
    path: Path
    expected: str


@dataclass(frozen=True)
class NegativeResult:
    case: NegativeCase
    actual: Optional[str]  # None if the file was accepted
    message: str

    @property
    def passed(self) -> bool:
        return self.actual == self.case.expected


def read_negative_case(path: Path | str) -> NegativeCase:
    path = Path(path)
    for line in path.read_text(encoding="utf-8").splitlines():
        m = _EXPECT.match(line.strip())
        if m:
            return NegativeCase(path, m.group(1))
    raise ManifestError(f"{path}: missing '-- expect: <error-kind>' header")


def negative_suite() -> list[NegativeCase]:
    return [read_negative_case(p) for p in sorted(NEGATIVE_DIR.glob("*.uft"))]


def run_negative_case(env: GlobalEnv, case: NegativeCase, unit_eta: bool = True) -> NegativeResult:
    text = case.path.read_text(encoding="utf-8")
    try:
        local = env
        for d in resolve(parse(text, str(case.path)), env.arities()):
            local = check_declaration(local, d, unit_eta)
    except UftError as e:
        return NegativeResult(case, e.code, str(e))
    return NegativeResult(case, None, "accepted")


def run_negative_suite(env: GlobalEnv, cases: Sequence[NegativeCase], unit_eta: bool = True) -> list[NegativeResult]:
    return [run_negative_case(env, c, unit_eta) for c in cases]
