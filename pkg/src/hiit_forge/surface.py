"""Surface syntax: lexer, parser, and printer for signature files.

A signature file is an optional ``assume`` block followed by declarations::

    assume (A : Set) (P : A -> Set)
    T : U;
    leaf : T;
    node : (A -> T) -> T;

Parsing is total: :func:`parse` returns ``(module, diagnostics)`` and never
raises.  Every node carries a source span (excluded from equality, so parsed
trees compare structurally).  :func:`print_module` renders a module back to
text such that reparsing yields an equal tree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .diagnostics import Diagnostic, Span

KEYWORDS = frozenset({"assume", "U", "Set", "Id", "refl", "J", "Jbeta"})
RESERVED_MARKERS = frozenset("ᴬᴰᴹˢ")
_DIGITS = frozenset("0123456789")
_SUBSCRIPTS = frozenset("₀₁₂₃₄₅₆₇₈₉")
_PRIMES = frozenset("'′")


def _ident_start(c: str) -> bool:
    return (c.isalpha() and c not in RESERVED_MARKERS) or c == "_"


def _ident_char(c: str) -> bool:
    return _ident_start(c) or c in _DIGITS or c in _SUBSCRIPTS or c in _PRIMES


# ---------------------------------------------------------------------------
# Surface expressions


@dataclass(frozen=True)
class SurfaceExpr:
    pass


@dataclass(frozen=True)
class EName(SurfaceExpr):
    name: str
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class ESort(SurfaceExpr):
    """``U`` or ``Set`` — the small-sort universe or the external base universe."""

    keyword: str
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class EPi(SurfaceExpr):
    """``(x : dom) -> cod``; ``name`` is None for ``dom -> cod``."""

    name: Optional[str]
    dom: SurfaceExpr
    cod: SurfaceExpr
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class EApp(SurfaceExpr):
    fn: SurfaceExpr
    arg: SurfaceExpr
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class EEq(SurfaceExpr):
    lhs: SurfaceExpr
    rhs: SurfaceExpr
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class EId(SurfaceExpr):
    index: SurfaceExpr
    lhs: SurfaceExpr
    rhs: SurfaceExpr
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class ERefl(SurfaceExpr):
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class EComp(SurfaceExpr):
    """Path composition ``p * q`` (also written ``p ∙ q``)."""

    lhs: SurfaceExpr
    rhs: SurfaceExpr
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class EJ(SurfaceExpr):
    """``J (x z. motive) pr eq``."""

    var_names: tuple[str, str]
    motive: SurfaceExpr
    base: SurfaceExpr
    eq: SurfaceExpr
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class EJBeta(SurfaceExpr):
    """``Jbeta (x z. motive) t pr``."""

    var_names: tuple[str, str]
    motive: SurfaceExpr
    point: SurfaceExpr
    base: SurfaceExpr
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class Assumption:
    name: str
    ty: SurfaceExpr
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class SurfaceDecl:
    name: str
    ty: SurfaceExpr
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class SurfaceModule:
    assumptions: tuple[Assumption, ...]
    decls: tuple[SurfaceDecl, ...]


# ---------------------------------------------------------------------------
# Lexer


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    span: Span


class _ParseError(Exception):
    def __init__(self, span: Span, message: str):
        super().__init__(message)
        self.span = span
        self.message = message


def _lex(src: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i, line, col = 0, 1, 1
    n = len(src)

    def span(start_i, start_line, start_col, length):
        return Span(start_i, length, start_line, start_col)

    while i < n:
        c = src[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        if c == "-" and i + 1 < n and src[i + 1] == "-":
            while i < n and src[i] != "\n":
                i += 1
            continue
        if c == "{" and i + 1 < n and src[i + 1] == "-":
            start = span(i, line, col, 2)
            depth = 1
            i += 2
            col += 2
            while i < n and depth:
                if src[i] == "{" and i + 1 < n and src[i + 1] == "-":
                    depth += 1
                    i += 2
                    col += 2
                elif src[i] == "-" and i + 1 < n and src[i + 1] == "}":
                    depth -= 1
                    i += 2
                    col += 2
                elif src[i] == "\n":
                    i += 1
                    line += 1
                    col = 1
                else:
                    i += 1
                    col += 1
            if depth:
                raise _ParseError(start, "unterminated block comment")
            continue
        if c == "-" and i + 1 < n and src[i + 1] == ">":
            toks.append(_Tok("ARROW", "->", span(i, line, col, 2)))
            i += 2
            col += 2
            continue
        if c == "→":
            toks.append(_Tok("ARROW", "→", span(i, line, col, 1)))
            i += 1
            col += 1
            continue
        simple = {"(": "LPAREN", ")": "RPAREN", ":": "COLON", ";": "SEMI",
                  "=": "EQUALS", ".": "DOT", "*": "STAR", "∙": "STAR"}
        if c in simple:
            toks.append(_Tok(simple[c], c, span(i, line, col, 1)))
            i += 1
            col += 1
            continue
        if c in RESERVED_MARKERS:
            raise _ParseError(
                span(i, line, col, 1),
                f"the superscript marker {c!r} is reserved for emitted names",
            )
        if _ident_start(c):
            j = i
            while j < n and _ident_char(src[j]):
                if src[j] in RESERVED_MARKERS:
                    raise _ParseError(
                        span(j, line, col + (j - i), 1),
                        f"the superscript marker {src[j]!r} is reserved for emitted names",
                    )
                j += 1
            text = src[i:j]
            kind = "KW" if text in KEYWORDS else "NAME"
            toks.append(_Tok(kind, text, span(i, line, col, j - i)))
            col += j - i
            i = j
            continue
        raise _ParseError(span(i, line, col, 1), f"unexpected character {c!r}")
    toks.append(_Tok("EOF", "", Span(n, 0, line, col)))
    return toks


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.pos = 0

    def peek(self, ahead: int = 0) -> _Tok:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> _Tok:
        t = self.peek()
        if t.kind != "EOF":
            self.pos += 1
        return t

    def expect(self, kind: str, what: str) -> _Tok:
        t = self.peek()
        if t.kind != kind:
            got = t.text if t.kind != "EOF" else "end of input"
            raise _ParseError(t.span, f"expected {what}, found {got!r}")
        return self.next()

    def expect_name(self, what: str) -> _Tok:
        t = self.peek()
        if t.kind != "NAME":
            got = t.text if t.kind != "EOF" else "end of input"
            raise _ParseError(t.span, f"expected {what}, found {got!r}")
        return self.next()

    def _join(self, a: Span, b: Span) -> Span:
        return Span(a.offset, b.offset + b.length - a.offset, a.line, a.col)

    def _span_of(self, e: SurfaceExpr) -> Span:
        assert e.span is not None
        return e.span

    # -- expressions --------------------------------------------------------

    def expr(self) -> SurfaceExpr:
        return self.arrow()

    def arrow(self) -> SurfaceExpr:
        binders = self._try_binder_groups()
        if binders is not None:
            groups, start = binders
            self.expect("ARROW", "'->'")
            cod = self.arrow()
            for name, dom, bspan in reversed(groups):
                cod = EPi(name, dom, cod, span=self._join(bspan, self._span_of(cod)))
            return cod
        lhs = self.eq()
        if self.peek().kind == "ARROW":
            self.next()
            cod = self.arrow()
            return EPi(None, lhs, cod, span=self._join(self._span_of(lhs), self._span_of(cod)))
        return lhs

    def _try_binder_groups(self):
        """Parse ``( names : expr )``+ if and only if followed by an arrow."""
        if self.peek().kind != "LPAREN":
            return None
        save = self.pos
        groups: list[tuple[str, SurfaceExpr, Span]] = []
        try:
            while self.peek().kind == "LPAREN":
                lp = self.next()
                names: list[_Tok] = []
                while self.peek().kind == "NAME":
                    names.append(self.next())
                if not names or self.peek().kind != "COLON":
                    raise _ParseError(lp.span, "not a binder group")
                self.next()
                dom = self.expr()
                self.expect("RPAREN", "')'")
                for nt in names:
                    groups.append((nt.text, dom, nt.span))
            if not groups or self.peek().kind != "ARROW":
                raise _ParseError(self.peek().span, "not a binder telescope")
        except _ParseError:
            self.pos = save
            return None
        return groups, self.toks[save].span

    def eq(self) -> SurfaceExpr:
        lhs = self.comp()
        if self.peek().kind == "EQUALS":
            self.next()
            rhs = self.comp()
            return EEq(lhs, rhs, span=self._join(self._span_of(lhs), self._span_of(rhs)))
        return lhs

    def comp(self) -> SurfaceExpr:
        e = self.app()
        while self.peek().kind == "STAR":
            self.next()
            rhs = self.app()
            e = EComp(e, rhs, span=self._join(self._span_of(e), self._span_of(rhs)))
        return e

    _ATOM_START = frozenset({"NAME", "LPAREN", "KW"})

    def app(self) -> SurfaceExpr:
        e = self.atom()
        while True:
            t = self.peek()
            if t.kind == "NAME" or t.kind == "LPAREN" or (
                t.kind == "KW" and t.text in ("U", "Set", "Id", "refl", "J", "Jbeta")
            ):
                arg = self.atom()
                e = EApp(e, arg, span=self._join(self._span_of(e), self._span_of(arg)))
                continue
            return e

    def atom(self) -> SurfaceExpr:
        t = self.peek()
        if t.kind == "NAME":
            self.next()
            return EName(t.text, span=t.span)
        if t.kind == "LPAREN":
            self.next()
            e = self.expr()
            rp = self.expect("RPAREN", "')'")
            return type(e)(**{**_fields(e), "span": self._join(t.span, rp.span)})
        if t.kind == "KW":
            if t.text in ("U", "Set"):
                self.next()
                return ESort(t.text, span=t.span)
            if t.text == "refl":
                self.next()
                return ERefl(span=t.span)
            if t.text == "Id":
                self.next()
                index = self.atom()
                lhs = self.atom()
                rhs = self.atom()
                return EId(index, lhs, rhs, span=self._join(t.span, self._span_of(rhs)))
            if t.text == "J":
                self.next()
                names, motive = self._motive()
                base = self.atom()
                eq = self.atom()
                return EJ(names, motive, base, eq, span=self._join(t.span, self._span_of(eq)))
            if t.text == "Jbeta":
                self.next()
                names, motive = self._motive()
                point = self.atom()
                base = self.atom()
                return EJBeta(names, motive, point, base, span=self._join(t.span, self._span_of(base)))
        got = t.text if t.kind != "EOF" else "end of input"
        raise _ParseError(t.span, f"expected an expression, found {got!r}")

    def _motive(self) -> tuple[tuple[str, str], SurfaceExpr]:
        self.expect("LPAREN", "'(' opening a motive")
        x = self.expect_name("a motive variable")
        z = self.expect_name("a motive variable")
        self.expect("DOT", "'.'")
        m = self.expr()
        self.expect("RPAREN", "')'")
        return (x.text, z.text), m

    # -- modules ------------------------------------------------------------

    def module(self) -> SurfaceModule:
        assumptions: list[Assumption] = []
        if self.peek().kind == "KW" and self.peek().text == "assume":
            self.next()
            while self.peek().kind == "LPAREN":
                self.next()
                names: list[_Tok] = []
                while self.peek().kind == "NAME":
                    names.append(self.next())
                if not names:
                    raise _ParseError(self.peek().span, "expected assumption names")
                self.expect("COLON", "':'")
                ty = self.expr()
                self.expect("RPAREN", "')'")
                for nt in names:
                    assumptions.append(Assumption(nt.text, ty, span=nt.span))
            if not assumptions:
                raise _ParseError(self.peek().span, "expected '(' after 'assume'")
            if self.peek().kind == "SEMI":
                self.next()
        decls: list[SurfaceDecl] = []
        while self.peek().kind != "EOF":
            name = self.expect_name("a declaration name")
            self.expect("COLON", "':'")
            ty = self.expr()
            self.expect("SEMI", "';'")
            decls.append(SurfaceDecl(name.text, ty, span=name.span))
        return SurfaceModule(tuple(assumptions), tuple(decls))


def _fields(e: SurfaceExpr) -> dict:
    return {f: getattr(e, f) for f in e.__dataclass_fields__}


def parse(src: str) -> tuple[Optional[SurfaceModule], list[Diagnostic]]:
    """Parse a signature file.  Never raises; syntax errors come back as
    a single PARSE diagnostic."""
    try:
        toks = _lex(src)
        mod = _Parser(toks).module()
        return mod, []
    except _ParseError as e:
        return None, [Diagnostic("PARSE", e.message, e.span)]
    except RecursionError:
        return None, [Diagnostic("PARSE", "expression nesting too deep", Span(0, 0, 1, 1))]


# ---------------------------------------------------------------------------
# Printer


def print_expr(e: SurfaceExpr, prec: int = 0) -> str:
    def wrap(s: str, p: int) -> str:
        return f"({s})" if prec > p else s

    match e:
        case EName(n):
            return n
        case ESort(kw):
            return kw
        case ERefl():
            return "refl"
        case EPi(None, d, c):
            return wrap(f"{print_expr(d, 1)} -> {print_expr(c, 0)}", 0)
        case EPi(x, d, c):
            return wrap(f"({x} : {print_expr(d, 0)}) -> {print_expr(c, 0)}", 0)
        case EEq(l, r):
            return wrap(f"{print_expr(l, 2)} = {print_expr(r, 2)}", 1)
        case EComp(l, r):
            return wrap(f"{print_expr(l, 2)} * {print_expr(r, 3)}", 2)
        case EApp(f, a):
            return wrap(f"{print_expr(f, 3)} {print_expr(a, 4)}", 3)
        case EId(i, l, r):
            return wrap(f"Id {print_expr(i, 4)} {print_expr(l, 4)} {print_expr(r, 4)}", 3)
        case EJ((x, z), m, b, q):
            return wrap(f"J ({x} {z}. {print_expr(m, 0)}) {print_expr(b, 4)} {print_expr(q, 4)}", 3)
        case EJBeta((x, z), m, t, b):
            return wrap(
                f"Jbeta ({x} {z}. {print_expr(m, 0)}) {print_expr(t, 4)} {print_expr(b, 4)}", 3
            )
    raise AssertionError(f"print_expr: unhandled {e!r}")


def print_module(m: SurfaceModule) -> str:
    out = []
    if m.assumptions:
        parts = " ".join(f"({a.name} : {print_expr(a.ty)})" for a in m.assumptions)
        out.append(f"assume {parts}")
    for d in m.decls:
        out.append(f"{d.name} : {print_expr(d.ty)};")
    return "\n".join(out) + "\n"
