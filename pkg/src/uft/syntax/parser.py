"""Lexer and recursive-descent parser for ``.uft`` files.

Layout: a token in column 1 starts a new declaration chunk; continuation
lines must be indented.  Words are separated by whitespace and by the
delimiters ``( ) { } , ∥ ∣``, so ``A→B`` is a single identifier, as in Agda.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..core import Span
from ..errors import ParseError
from .surface import (PRIM_ARITY, LExpr, LHole, LMax, LName, LNum, LSuc, SAnn, SApp, SLam,
                      SName, SPair, SPi, SPrim, SSigma, STerm, SUniv, SurfaceDeclaration)

DELIMS = "(){},∥∣"

ALIASES = {
    "->": "→", "\\": "λ", "Pi": "Π", "Sigma": "Σ", "Nat": "ℕ",
    "Empty": "𝟘", "Unit": "𝟙", "star": "⋆", "*": "×",
}

KEYWORDS = frozenset({
    "postulate", "Level", "U", "Π", "Σ", "λ", "→", ":", "=", "×", "+", "_",
    "lsuc", "lmax", "⊔",
}) | frozenset(PRIM_ARITY) | frozenset(ALIASES)

NULLARY_ATOMS = frozenset({"ℕ", "zero", "refl", "⋆"})
LEVELED = frozenset({"𝟘", "𝟙"})
PREFIX_PRIMS = frozenset(op for op, n in PRIM_ARITY.items() if n > 0 and op != "+")


@dataclass
class Token:
    kind: str  # "name" | "num" | "sym" | "eof"
    text: str
    line: int
    col: int
    end_col: int
    bol: bool = False  # first token on its line

    def span(self, file: str) -> Span:
        return Span(file, self.line, self.col, self.line, self.end_col)


def tokenize(source: str, file: str = "<input>") -> list[Token]:
    tokens: list[Token] = []
    for lineno, line in enumerate(source.splitlines(), start=1):
        i, n = 0, len(line)
        first = True
        while i < n:
            ch = line[i]
            if ch.isspace():
                i += 1
                continue
            if ch in DELIMS:
                tokens.append(Token("sym", ch, lineno, i + 1, i + 2, first))
                first = False
                i += 1
                continue
            j = i
            while j < n and not line[j].isspace() and line[j] not in DELIMS:
                j += 1
            word = line[i:j]
            if word.startswith("--"):
                break
            if len(word) > 1 and word[0] in "λ\\":
                # λx → x is common enough to accept
                tokens.append(Token("sym", "λ", lineno, i + 1, i + 2, first))
                first = False
                word, i = word[1:], i + 1
            text = ALIASES.get(word, word)
            if word.isascii() and word.isdigit():
                kind = "num"
            elif text in KEYWORDS:
                kind = "sym"
            else:
                kind = "name"
            tokens.append(Token(kind, text, lineno, i + 1, j + 1, first))
            first = False
            i = j
    last = len(source.splitlines()) or 1
    tokens.append(Token("eof", "<end of input>", last + 1, 1, 1, True))
    return tokens


def _join(a: Optional[Span], b: Optional[Span]) -> Optional[Span]:
    if a is None or b is None:
        return a or b
    return Span(a.file, a.line, a.col, b.end_line, b.end_col)


class Parser:
    def __init__(self, tokens: list[Token], file: str):
        self.toks = tokens
        self.pos = 0
        self.file = file
        self.stop = len(tokens) - 1  # index of the chunk terminator
        # nesting of ∥ … ∥ and ∣ … ∣ so a bar in argument position closes
        self.open_bars: list[str] = []

    # -- token helpers ------------------------------------------------------

    @property
    def tok(self) -> Token:
        if self.pos < self.stop:
            return self.toks[self.pos]
        return self._end_token()

    def _end_token(self) -> Token:
        t = self.toks[self.stop]
        return Token("eof", "<end of declaration>", t.line, t.col, t.col, True)

    def span(self, t: Token) -> Span:
        return t.span(self.file)

    def at(self, *texts: str) -> bool:
        t = self.tok
        return t.kind == "sym" and t.text in texts

    def advance(self) -> Token:
        t = self.tok
        if self.pos < self.stop:
            self.pos += 1
        return t

    def error(self, expected: set[str] | frozenset[str], what: Optional[str] = None) -> ParseError:
        t = self.tok
        exp = ", ".join(sorted(expected))
        msg = what or f"unexpected {t.text!r}; expected {exp}"
        return ParseError(msg, self.span(t), frozenset(expected))

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error({text})
        return self.advance()

    def expect_name(self, allow_hole: bool = False) -> Token:
        t = self.tok
        if t.kind == "name" or (allow_hole and self.at("_")):
            return self.advance()
        raise self.error({"identifier"})

    # -- levels -------------------------------------------------------------

    def level_expr(self) -> LExpr:
        left = self.level_app()
        while self.at("⊔"):
            self.advance()
            right = self.level_app()
            left = LMax(left, right, _join(left.span, right.span))
        return left

    def level_app(self) -> LExpr:
        t = self.tok
        if self.at("lsuc"):
            self.advance()
            arg = self.level_atom()
            return LSuc(arg, _join(self.span(t), arg.span))
        if self.at("lmax"):
            self.advance()
            a = self.level_atom()
            b = self.level_atom()
            return LMax(a, b, _join(self.span(t), b.span))
        return self.level_atom()

    def level_atom(self) -> LExpr:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return LNum(int(t.text), self.span(t))
        if t.kind == "name":
            self.advance()
            return LName(t.text, self.span(t))
        if self.at("_"):
            self.advance()
            return LHole(self.span(t))
        if self.at("("):
            self.advance()
            e = self.level_expr()
            self.expect(")")
            return e
        raise self.error({"level", "(", "identifier", "numeral"})

    # -- terms --------------------------------------------------------------

    def term(self) -> STerm:
        t = self.tok
        if self.at("λ"):
            return self.lam()
        if self.at("Π"):
            return self.pi()
        if self.at("Σ"):
            return self.sigma()
        left = self.sum_expr()
        if self.at("→"):
            self.advance()
            right = self.term()
            return SPi("_", left, right, _join(self.span(t), right.span))
        return left

    def binder_group(self) -> list[tuple[str, STerm, Span]]:
        self.expect("(")
        names = [self.expect_name(allow_hole=True)]
        while not self.at(":"):
            if self.tok.kind != "name" and not self.at("_"):
                raise self.error({":", "identifier"})
            names.append(self.advance())
        self.advance()
        ty = self.term()
        self.expect(")")
        return [(n.text, ty, self.span(n)) for n in names]

    def lam(self) -> STerm:
        start = self.advance()
        binders: list[tuple[str, Optional[STerm], Span]] = []
        while not self.at("→"):
            if self.at("("):
                binders.extend(self.binder_group())
            elif self.tok.kind == "name" or self.at("_"):
                n = self.advance()
                binders.append((n.text, None, self.span(n)))
            else:
                raise self.error({"→", "identifier", "("})
        if not binders:
            raise self.error({"identifier", "("})
        self.advance()
        body = self.term()
        for name, dom, sp in reversed(binders):
            body = SLam(name, dom, body, _join(self.span(start), body.span))
        return body

    def pi(self) -> STerm:
        start = self.advance()
        binders = self.binder_group()
        while self.at("("):
            binders.extend(self.binder_group())
        self.expect("→")
        body = self.term()
        for name, dom, _ in reversed(binders):
            body = SPi(name, dom, body, _join(self.span(start), body.span))
        return body

    def sigma(self) -> STerm:
        start = self.advance()
        binders = self.binder_group()
        self.expect(",")
        body = self.term()
        for name, dom, _ in reversed(binders):
            body = SSigma(name, dom, body, _join(self.span(start), body.span))
        return body

    def sum_expr(self) -> STerm:
        left = self.prod_expr()
        if self.at("+"):
            self.advance()
            right = self.sum_expr()
            return SPrim("+", [left, right], None, _join(left.span, right.span))
        return left

    def prod_expr(self) -> STerm:
        left = self.app_expr()
        if self.at("×"):
            self.advance()
            right = self.prod_expr()
            return SSigma("_", left, right, _join(left.span, right.span))
        return left

    def starts_atom(self) -> bool:
        t = self.tok
        if t.kind == "name":
            return True
        if t.kind != "sym":
            return False
        if t.text in ("∥", "∣"):
            return not self.open_bars or self.open_bars[-1] != t.text
        return t.text == "(" or t.text in NULLARY_ATOMS

    def app_expr(self) -> STerm:
        t = self.tok
        if self.at("U"):
            self.advance()
            lv = self.level_atom()
            head: STerm = SUniv(lv, _join(self.span(t), lv.span))
        elif self.at(*LEVELED):
            self.advance()
            lv = self.level_atom()
            head = SPrim(t.text, [], lv, _join(self.span(t), lv.span))
        elif t.kind == "sym" and t.text in PREFIX_PRIMS:
            self.advance()
            args = []
            for _ in range(PRIM_ARITY[t.text]):
                if not self.starts_atom():
                    raise self.error({"argument"}, f"{t.text} expects {PRIM_ARITY[t.text]} argument(s); "
                                                   f"found {self.tok.text!r}")
                args.append(self.atom())
            head = SPrim(t.text, args, None, _join(self.span(t), args[-1].span))
        else:
            head = self.atom()
        while self.starts_atom():
            arg = self.atom()
            head = SApp(head, arg, _join(head.span, arg.span))
        return head

    def atom(self) -> STerm:
        t = self.tok
        sp = self.span(t)
        if t.kind == "name":
            self.advance()
            levels = None
            end = sp
            if self.at("{"):
                levels = []
                while self.at("{"):
                    self.advance()
                    levels.append(self.level_expr())
                    end = self.span(self.expect("}"))
            return SName(t.text, levels, _join(sp, end))
        if self.at(*NULLARY_ATOMS):
            self.advance()
            return SPrim(t.text, [], None, sp)
        if self.at("∥", "∣"):
            self.advance()
            self.open_bars.append(t.text)
            inner = self.term()
            self.open_bars.pop()
            end = self.expect(t.text)
            op = "Trunc" if t.text == "∥" else "tr"
            return SPrim(op, [inner], None, _join(sp, self.span(end)))
        if self.at("("):
            self.advance()
            saved, self.open_bars = self.open_bars, []
            inner = self.term()
            if self.at(":"):
                self.advance()
                ty = self.term()
                inner = SAnn(inner, ty)
            elif self.at(","):
                parts = [inner]
                while self.at(","):
                    self.advance()
                    parts.append(self.term())
                inner = parts[-1]
                for p in reversed(parts[:-1]):
                    inner = SPair(p, inner)
            self.open_bars = saved
            end = self.expect(")")
            if isinstance(inner, (SAnn, SPair)):
                inner.span = _join(sp, self.span(end))
                if isinstance(inner, SPair):
                    self._fix_pair_spans(inner, sp, self.span(end))
            return inner
        raise self.error({"term"})

    def _fix_pair_spans(self, p: SPair, start: Span, end: Span) -> None:
        while isinstance(p.snd, SPair) and p.snd.span is None:
            p.snd.span = _join(p.snd.fst.span, end)
            p = p.snd

    # -- declarations -------------------------------------------------------

    def telescope(self) -> list[tuple[str, Optional[Span]]]:
        names: list[tuple[str, Optional[Span]]] = []
        while self.at("{"):
            self.advance()
            group = []
            while not self.at(":"):
                group.append(self.expect_name())
            if not group:
                raise self.error({"identifier"})
            self.advance()
            self.expect("Level")
            self.expect("}")
            self.expect("→")
            names.extend((g.text, self.span(g)) for g in group)
        return names

    def at_end(self) -> bool:
        return self.pos >= self.stop

    def finish(self) -> None:
        if not self.at_end():
            raise self.error({"end of declaration"},
                             f"unexpected {self.tok.text!r}; expected end of declaration "
                             "(continuation lines must be indented)")


def _chunks(tokens: list[Token]) -> list[tuple[int, int]]:
    starts = [i for i, t in enumerate(tokens) if t.col == 1 and t.kind != "eof"]
    eof = len(tokens) - 1
    if tokens and tokens[0].kind != "eof" and (not starts or starts[0] != 0):
        starts.insert(0, 0)
    return [(s, starts[k + 1] if k + 1 < len(starts) else eof) for k, s in enumerate(starts)]


def parse(source: str, file: str = "<input>") -> list[SurfaceDeclaration]:
    """Parse a whole file into declarations, in file order."""
    tokens = tokenize(source, file)
    p = Parser(tokens, file)
    decls: list[SurfaceDeclaration] = []
    pending: Optional[tuple] = None  # (name token, telescope, type, start span)
    for start, stop in _chunks(tokens):
        p.pos, p.stop, p.open_bars = start, stop, []
        first = p.tok
        if p.at("postulate"):
            if pending:
                raise _missing_body(pending, p)
            p.advance()
            name = p.expect_name()
            p.expect(":")
            tele = p.telescope()
            ty = p.term()
            p.finish()
            decls.append(SurfaceDeclaration(name.text, tele, ty, None,
                                            _join(p.span(first), ty.span), p.span(name)))
            continue
        name = p.expect_name()
        if p.at(":"):
            if pending:
                raise _missing_body(pending, p)
            p.advance()
            tele = p.telescope()
            ty = p.term()
            p.finish()
            pending = (name, tele, ty, p.span(first))
        elif p.at("="):
            if pending is None or pending[0].text != name.text:
                if pending:
                    raise _missing_body(pending, p)
                raise ParseError(f"definition of {name.text!r} has no type signature before it",
                                 p.span(name), frozenset({":"}))
            p.advance()
            body = p.term()
            p.finish()
            sig_name, tele, ty, sp = pending
            decls.append(SurfaceDeclaration(name.text, tele, ty, body, _join(sp, body.span),
                                            p.span(sig_name)))
            pending = None
        else:
            raise p.error({":", "="})
    if pending:
        raise _missing_body(pending, p)
    return decls


def _missing_body(pending, p: Parser) -> ParseError:
    name = pending[0]
    return ParseError(f"signature for {name.text!r} is not followed by its definition "
                      f"(use 'postulate' for axioms)", p.span(name), frozenset({"="}))


def parse_term(source: str, file: str = "<input>") -> STerm:
    """Parse a single term (used by tests and the manifest reader)."""
    p = Parser(tokenize(source, file), file)
    t = p.term()
    p.finish()
    return t


def parse_level(source: str, file: str = "<input>") -> LExpr:
    tokens = tokenize(source, file)
    p = Parser(tokens, file)
    e = p.level_expr()
    p.finish()
    return e
