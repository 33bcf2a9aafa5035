"""Deterministic Agda-source emission for translation bundles.

There is exactly one printing mode: every equality/prelude operation is
applied with all value arguments explicit, so the printer needs no
precedence machinery beyond atom/application/arrow, and the reference
grammar implemented by :func:`parse_target_expr` can rebuild the exact
kernel term from emitted text.  The emit tests pin that round trip.

Output is a pure function of the bundle and the config — no timestamps,
no environment lookups — so repeated runs are byte-identical.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Optional

from . import __version__
from .diagnostics import Diagnostic
from .target import (
    PRELUDE_NAMES,
    TApp,
    TConst,
    TEq,
    TJ,
    TLam,
    TPair,
    TPi,
    TProj1,
    TProj2,
    TRefl,
    TSigma,
    TTt,
    TType,
    TUnit,
    TVar,
    Tm,
    shift,
    tarr,
)
from .translate import (
    ALG,
    DIS,
    INDUCTION,
    INITIALITY,
    MOR,
    RECURSION,
    SEC,
    STAR,
    Bundle,
)

OPTIONS_LINE = "{-# OPTIONS --without-K #-}"

# The prelude body is the single embeddable source of truth; the standalone
# file shipped with the golden corpus is OPTIONS + module header + this text,
# and a test pins the byte equality.  `J` is the only place a path is ever
# matched; everything below it is defined by applying `J`.
PRELUDE_BODY = """\
open import Agda.Primitive using (Level; _⊔_)

record ⊤ : Set₀ where
  constructor tt

record Σ {ℓ ℓ′ : Level} (A : Set ℓ) (B : A → Set ℓ′) : Set (ℓ ⊔ ℓ′) where
  constructor _,_
  field
    proj₁ : A
    proj₂ : B proj₁
open Σ public

data _≡_ {ℓ : Level} {A : Set ℓ} (x : A) : A → Set ℓ where
  refl : x ≡ x

Eq : {ℓ : Level} (A : Set ℓ) → A → A → Set ℓ
Eq A x y = x ≡ y

Refl : {ℓ : Level} {A : Set ℓ} (x : A) → Eq A x x
Refl x = refl

J : {ℓ ℓ′ : Level} (A : Set ℓ) (t : A) (P : (x : A) → Eq A t x → Set ℓ′)
    → P t (Refl t) → (u : A) (e : Eq A t u) → P u e
J A t P pr .t refl = pr

tr : {ℓ ℓ′ : Level} (A : Set ℓ) (P : A → Set ℓ′) (u v : A) (e : Eq A u v) (x : P u) → P v
tr A P u v e x = J A u (λ y w → P y) x v e

coe : (A B : Set₀) (e : Eq Set₀ A B) (x : A) → B
coe A B e x = J Set₀ A (λ Y w → Y) x B e

ap : {ℓ ℓ′ : Level} (A : Set ℓ) (B : Set ℓ′) (f : A → B) (u v : A) (e : Eq A u v) → Eq B (f u) (f v)
ap A B f u v e = J A u (λ y w → Eq B (f u) (f y)) (Refl (f u)) v e

apd : {ℓ ℓ′ : Level} (A : Set ℓ) (P : A → Set ℓ′) (f : (x : A) → P x) (u v : A) (e : Eq A u v)
      → Eq (P v) (tr A P u v e (f u)) (f v)
apd A P f u v e = J A u (λ y w → Eq (P y) (tr A P u y w (f u)) (f y)) (Refl (f u)) v e

compose : {ℓ : Level} (A : Set ℓ) (t u v : A) (p : Eq A t u) (q : Eq A u v) → Eq A t v
compose A t u v p q = J A u (λ y w → Eq A t y) p v q

inverse : {ℓ : Level} (A : Set ℓ) (t u : A) (p : Eq A t u) → Eq A u t
inverse A t u p = J A t (λ y w → Eq A y t) (Refl t) u p

inv : {ℓ : Level} (A : Set ℓ) (t u : A) (p : Eq A t u)
      → Eq (Eq A u u) (compose A u t u (inverse A t u p) p) (Refl u)
inv A t u p =
  J A t
    (λ y w → Eq (Eq A y y) (compose A y t y (inverse A t y w) w) (Refl y))
    (Refl (Refl t)) u p

isContr : {ℓ : Level} → Set ℓ → Set ℓ
isContr A = Σ A (λ a → (b : A) → Eq A a b)
"""

_AGDA_KEYWORDS = frozenset(
    """abstract constructor data do eta-equality field forall hiding import in
    inductive infix infixl infixr instance interleaved let macro module mutual
    no-eta-equality open overlap pattern postulate primitive private public
    quote quoteTerm record renaming rewrite syntax tactic unquote unquoteDecl
    unquoteDef using variable where with""".split()
)

# Names the emitted file defines or the grammar treats as heads; a source
# identifier that lands on one of these cannot be printed faithfully.
RESERVED_EMIT_NAMES = _AGDA_KEYWORDS | {
    "Level",
    "Set",
    "Set₀",
    "Set₁",
    "Set₂",
    "⊤",
    "tt",
    "Σ",
    "proj₁",
    "proj₂",
    "refl",
    "Eq",
    "Refl",
    "J",
    *PRELUDE_NAMES,
}

TRANSLATION_KEYS = ("A", "D", "M", "S", "IND", "REC", "INIT")

_NEEDS = {
    "A": (),
    "D": ("A",),
    "M": ("A",),
    "S": ("A", "D"),
    "IND": ("A", "D", "S"),
    "REC": ("A", "M"),
    "INIT": ("A", "M"),
}


def closure(requested: tuple[str, ...]) -> tuple[str, ...]:
    """Requested translations plus everything their headers mention."""
    want: set[str] = set()

    def add(k: str) -> None:
        if k not in want:
            for dep in _NEEDS[k]:
                add(dep)
            want.add(k)

    for k in requested:
        if k not in _NEEDS:
            raise ValueError(f"unknown translation {k!r}")
        add(k)
    return tuple(k for k in TRANSLATION_KEYS if k in want)


@dataclass(frozen=True)
class EmitConfig:
    translations: tuple[str, ...] = TRANSLATION_KEYS
    prelude: str = "embed"  # or "import"
    module_name: str = "out"
    width: int = 100
    input_label: str = "<memory>"
    input_sha256: str = ""

    def validate(self) -> None:
        if not self.translations:
            raise ValueError("at least one translation must be requested")
        for k in self.translations:
            if k not in _NEEDS:
                raise ValueError(f"unknown translation {k!r}")
        if self.prelude not in ("embed", "import"):
            raise ValueError("prelude mode must be 'embed' or 'import'")


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _uses(t: Tm, k: int) -> bool:
    """Does the bound variable ``k`` occur in ``t``?"""
    match t:
        case TVar(ix):
            return ix == k
        case TPi(_, d, c):
            return _uses(d, k) or _uses(c, k + 1)
        case TLam(_, b):
            return _uses(b, k + 1)
        case TSigma(_, f, s):
            return _uses(f, k) or _uses(s, k + 1)
        case TApp(f, a):
            return _uses(f, k) or _uses(a, k)
        case TPair(a, b):
            return _uses(a, k) or _uses(b, k)
        case TProj1(p) | TProj2(p):
            return _uses(p, k)
        case TEq(ty, l, r):
            return _uses(ty, k) or _uses(l, k) or _uses(r, k)
        case TRefl(s):
            return _uses(s, k)
        case TJ(ty, bp, m, b, ep, e):
            return (
                _uses(ty, k)
                or _uses(bp, k)
                or _uses(m, k + 2)
                or _uses(b, k)
                or _uses(ep, k)
                or _uses(e, k)
            )
        case _:
            return False


_SET_NAMES = ("Set₀", "Set₁", "Set₂")


class _Printer:
    """Width-aware term printer over display names.

    ``display`` maps internal constant names to what the file calls them.
    Binder names are freshened against the enclosing scope, every display
    name, and the reserved grammar heads, so no printed variable can
    capture another name.
    """

    def __init__(self, display: dict[str, str], width: int) -> None:
        self.display = display
        self.width = width
        self._taken = frozenset(display.values()) | RESERVED_EMIT_NAMES
        self._memo: dict[tuple[int, tuple[str, ...]], tuple[str, int]] = {}
        self._keep: list[Tm] = []  # pin ids used as memo keys

    def fresh(self, name: str, scope: list[str]) -> str:
        cand = name or "x"
        while cand in scope or cand in self._taken:
            cand += "′"
        return cand

    def binder(self, name: str, used: bool, scope: list[str]) -> str:
        """Display name for a binder; '_' is kept only when never referenced."""
        if name == "_":
            if not used:
                return "_"
            name = "x"
        return self.fresh(name, scope)

    # -- single-line form ---------------------------------------------------

    def show(self, t: Tm, scope: list[str], prec: int) -> str:
        s, lvl = self._show_raw(t, scope)
        return f"({s})" if lvl < prec else s

    def _show_raw(self, t: Tm, scope: list[str]) -> tuple[str, int]:
        key = (id(t), tuple(scope))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        out = self._show_calc(t, scope)
        self._memo[key] = out
        self._keep.append(t)
        return out

    def _show_calc(self, t: Tm, scope: list[str]) -> tuple[str, int]:
        match t:
            case TVar(ix):
                return scope[-1 - ix], 2
            case TConst(name):
                return self.display.get(name, name), 2
            case TType(i):
                return _SET_NAMES[i], 2
            case TUnit():
                return "⊤", 2
            case TTt():
                return "tt", 2
            case TPair(a, b):
                return f"({self.show(a, scope, 0)} , {self.show(b, scope, 0)})", 2
            case TLam(name, body):
                nm = self.binder(name, _uses(body, 0), scope)
                return f"λ {nm} → {self.show(body, scope + [nm], 0)}", 0
            case TPi(name, dom, cod):
                if not _uses(cod, 0):
                    head = self.show(dom, scope, 1)
                    return f"{head} → {self.show(cod, scope + ['_'], 0)}", 0
                nm = self.binder(name, True, scope)
                body = self.show(cod, scope + [nm], 0)
                return f"({nm} : {self.show(dom, scope, 0)}) → {body}", 0
            case TApp(fn, arg):
                spine = [arg]
                while isinstance(fn, TApp):
                    spine.append(fn.arg)
                    fn = fn.fn
                args = " ".join(self.show(a, scope, 2) for a in reversed(spine))
                return f"{self.show(fn, scope, 2)} {args}", 1
            case TSigma(name, fst, snd):
                nm = self.binder(name, _uses(snd, 0), scope)
                body = self.show(snd, scope + [nm], 0)
                return f"Σ {self.show(fst, scope, 2)} (λ {nm} → {body})", 1
            case TProj1(p):
                return f"proj₁ {self.show(p, scope, 2)}", 1
            case TProj2(p):
                return f"proj₂ {self.show(p, scope, 2)}", 1
            case TEq(ty, l, r):
                parts = (self.show(ty, scope, 2), self.show(l, scope, 2), self.show(r, scope, 2))
                return "Eq " + " ".join(parts), 1
            case TRefl(s):
                return f"Refl {self.show(s, scope, 2)}", 1
            case TJ(ty, bp, motive, base, ep, eq, names):
                nx = self.binder(names[0], _uses(motive, 1), scope)
                nz = self.binder(names[1], _uses(motive, 0), scope + [nx])
                mot = self.show(motive, scope + [nx, nz], 0)
                parts = (
                    self.show(ty, scope, 2),
                    self.show(bp, scope, 2),
                    f"(λ {nx} {nz} → {mot})",
                    self.show(base, scope, 2),
                    self.show(ep, scope, 2),
                    self.show(eq, scope, 2),
                )
                return "J " + " ".join(parts), 1
        raise AssertionError(f"unprintable node {t!r}")

    # -- width-aware form ---------------------------------------------------

    def fmt(self, t: Tm, scope: list[str], indent: int, prec: int) -> str:
        s, lvl = self._show_raw(t, scope)
        inline = f"({s})" if lvl < prec else s
        if indent + len(inline) <= self.width:
            return inline
        return self._fmt_block(t, scope, indent, prec)

    def _wrap(self, text: str, need: bool) -> str:
        return f"({text})" if need else text

    def _fmt_lam_arg(self, names: list[str], body: Tm, scope: list[str], indent: int) -> str:
        """A parenthesized lambda argument, body on its own lines."""
        inner = self.fmt(body, scope, indent + 2, 0)
        binders = " ".join(names)
        return f"(λ {binders} →\n{' ' * (indent + 2)}{inner})"

    def _fmt_block(self, t: Tm, scope: list[str], indent: int, prec: int) -> str:
        pad = " " * (indent + 2)
        match t:
            case TLam(name, body):
                nm = self.binder(name, _uses(body, 0), scope)
                inner = self.fmt(body, scope + [nm], indent + 2, 0)
                return self._wrap(f"λ {nm} →\n{pad}{inner}", prec > 0)
            case TPi(_, _, _):
                segs: list[str] = []
                sc = list(scope)
                cur: Tm = t
                while isinstance(cur, TPi):
                    if not _uses(cur.cod, 0):
                        segs.append(self.fmt(cur.dom, sc, indent, 1) + " →")
                        sc = sc + ["_"]
                    else:
                        nm = self.binder(cur.name, True, sc)
                        dom = self.fmt(cur.dom, sc, indent + 2, 0)
                        segs.append(f"({nm} : {dom}) →")
                        sc = sc + [nm]
                    cur = cur.cod
                segs.append(self.fmt(cur, sc, indent, 0))
                body = ("\n" + " " * indent).join(segs)
                return self._wrap(body, prec > 0)
            case TApp(fn, arg):
                spine = [arg]
                while isinstance(fn, TApp):
                    spine.append(fn.arg)
                    fn = fn.fn
                head = self.fmt(fn, scope, indent, 2)
                args = [self.fmt(a, scope, indent + 2, 2) for a in reversed(spine)]
                return self._wrap(head + "".join(f"\n{pad}{a}" for a in args), prec > 1)
            case TSigma(name, fst, snd):
                nm = self.binder(name, _uses(snd, 0), scope)
                fst_s = self.fmt(fst, scope, indent + 2, 2)
                lam = self._fmt_lam_arg([nm], snd, scope + [nm], indent + 2)
                return self._wrap(f"Σ\n{pad}{fst_s}\n{pad}{lam}", prec > 1)
            case TPair(a, b):
                left = self.fmt(a, scope, indent + 2, 0)
                right = self.fmt(b, scope + [], indent + 2, 0)
                return f"({left}\n{pad}, {right})"
            case TProj1(p):
                return self._wrap(f"proj₁\n{pad}{self.fmt(p, scope, indent + 2, 2)}", prec > 1)
            case TProj2(p):
                return self._wrap(f"proj₂\n{pad}{self.fmt(p, scope, indent + 2, 2)}", prec > 1)
            case TEq(ty, l, r):
                args = [
                    self.fmt(ty, scope, indent + 2, 2),
                    self.fmt(l, scope, indent + 2, 2),
                    self.fmt(r, scope, indent + 2, 2),
                ]
                return self._wrap("Eq" + "".join(f"\n{pad}{a}" for a in args), prec > 1)
            case TRefl(s):
                return self._wrap(f"Refl\n{pad}{self.fmt(s, scope, indent + 2, 2)}", prec > 1)
            case TJ(ty, bp, motive, base, ep, eq, names):
                nx = self.binder(names[0], _uses(motive, 1), scope)
                nz = self.binder(names[1], _uses(motive, 0), scope + [nx])
                args = [
                    self.fmt(ty, scope, indent + 2, 2),
                    self.fmt(bp, scope, indent + 2, 2),
                    self._fmt_lam_arg([nx, nz], motive, scope + [nx, nz], indent + 2),
                    self.fmt(base, scope, indent + 2, 2),
                    self.fmt(ep, scope, indent + 2, 2),
                    self.fmt(eq, scope, indent + 2, 2),
                ]
                return self._wrap("J" + "".join(f"\n{pad}{a}" for a in args), prec > 1)
        # atoms never exceed the width by themselves
        return self.show(t, scope, prec)

    # -- translation folds, annotated per component -------------------------

    def fmt_fold(self, t: Tm, scope: list[str], indent: int, fields: list[str]) -> str:
        """Layout for an iterated Σ, one component per layer with a name tag."""
        if not fields:
            return self.fmt(t, scope, indent, 0)
        assert isinstance(t, TSigma), "fold shorter than its field list"
        pad = " " * (indent + 2)
        k = len(fields) - 1
        inner = self.fmt_fold(t.fst, scope, indent + 2, fields[:-1])
        if isinstance(t.fst, TSigma):
            inner = f"({inner})"
        nm = self.binder(t.name, _uses(t.snd, 0), scope)
        lam = f"(λ {nm} → {self.show(t.snd, scope + [nm], 0)})"
        if indent + 2 + len(lam) > self.width:
            clause = self.fmt(t.snd, scope + [nm], indent + 4, 0)
            lam = f"(λ {nm} →\n{pad}  {clause})"
        return f"Σ\n{pad}{inner}\n{pad}-- field {k}: {fields[k]}\n{pad}{lam}"


# ---------------------------------------------------------------------------
# Reference grammar: text → kernel term
# ---------------------------------------------------------------------------

_DELIMS = set("(),:λ→")


def _tokenize(text: str) -> list[str]:
    toks: list[str] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if text.startswith("--", i):
            j = text.find("\n", i)
            i = n if j < 0 else j + 1
            continue
        if c in _DELIMS:
            toks.append(c)
            i += 1
            continue
        j = i
        while j < n and not text[j].isspace() and text[j] not in _DELIMS:
            j += 1
        toks.append(text[i:j])
        i = j
    return toks


class _ParseFail(Exception):
    pass


class _RefParser:
    """Reads the emitted expression grammar back into kernel terms."""

    def __init__(self, toks: list[str], consts: dict[str, str]) -> None:
        self.toks = toks
        self.pos = 0
        self.consts = consts

    def peek(self) -> Optional[str]:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise _ParseFail("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.next()
        if got != tok:
            raise _ParseFail(f"expected {tok!r}, found {got!r}")

    def expr(self, scope: list[str]) -> Tm:
        tok = self.peek()
        if tok == "λ":
            self.next()
            names: list[str] = []
            while self.peek() != "→":
                names.append(self.next())
            self.expect("→")
            if not names:
                raise _ParseFail("lambda without binders")
            body = self.expr(scope + names)
            for nm in reversed(names):
                body = TLam(nm, body)
            return body
        if tok == "(":
            save = self.pos
            try:
                return self.pi_group(scope)
            except _ParseFail:
                self.pos = save
        return self.arrow(scope)

    def pi_group(self, scope: list[str]) -> Tm:
        self.expect("(")
        names: list[str] = []
        while self.peek() != ":":
            tok = self.next()
            if tok in _DELIMS:
                raise _ParseFail("not a binder group")
            names.append(tok)
        if not names:
            raise _ParseFail("empty binder group")
        self.expect(":")
        dom = self.expr(scope)
        self.expect(")")
        self.expect("→")
        body = self.expr(scope + names)
        for k, nm in enumerate(reversed(names)):
            body = TPi(nm, shift(dom, len(names) - 1 - k), body)
        return body

    def arrow(self, scope: list[str]) -> Tm:
        dom = self.app(scope)
        if self.peek() == "→":
            self.next()
            return tarr(dom, self.expr(scope))
        return dom

    def app(self, scope: list[str]) -> Tm:
        head_tok = self.peek()
        args: list[Tm] = []
        special = head_tok in ("Σ", "Eq", "Refl", "J", "proj₁", "proj₂")
        if special:
            self.next()
        else:
            args.append(self.atom(scope))
        while self._at_atom():
            args.append(self.atom(scope))
        if special:
            return self._fold_special(head_tok, args)
        t = args[0]
        for a in args[1:]:
            t = TApp(t, a)
        return t

    def _at_atom(self) -> bool:
        tok = self.peek()
        return tok is not None and (tok == "(" or tok not in _DELIMS)

    def _fold_special(self, head: str, args: list[Tm]) -> Tm:
        if head == "Σ":
            if len(args) != 2 or not isinstance(args[1], TLam):
                raise _ParseFail("Σ expects a type and a lambda")
            return TSigma(args[1].name, args[0], args[1].body)
        if head == "Eq":
            if len(args) != 3:
                raise _ParseFail("Eq expects three arguments")
            return TEq(args[0], args[1], args[2])
        if head == "Refl":
            if len(args) != 1:
                raise _ParseFail("Refl expects one argument")
            return TRefl(args[0])
        if head in ("proj₁", "proj₂"):
            if len(args) != 1:
                raise _ParseFail(f"{head} expects one argument")
            return TProj1(args[0]) if head == "proj₁" else TProj2(args[0])
        if len(args) != 6:
            raise _ParseFail("J expects six arguments")
        mot = args[2]
        if not isinstance(mot, TLam) or not isinstance(mot.body, TLam):
            raise _ParseFail("J motive must bind two variables")
        names = (mot.name, mot.body.name)
        return TJ(args[0], args[1], mot.body.body, args[3], args[4], args[5], names)

    def atom(self, scope: list[str]) -> Tm:
        tok = self.next()
        if tok == "(":
            first = self.expr(scope)
            if self.peek() == ",":
                self.next()
                second = self.expr(scope)
                self.expect(")")
                return TPair(first, second)
            self.expect(")")
            return first
        if tok in _DELIMS:
            raise _ParseFail(f"unexpected {tok!r}")
        if tok in _SET_NAMES:
            return TType(_SET_NAMES.index(tok))
        if tok == "⊤":
            return TUnit()
        if tok == "tt":
            return TTt()
        if tok != "_":
            for depth, nm in enumerate(reversed(scope)):
                if nm == tok:
                    return TVar(depth)
        return TConst(self.consts.get(tok, tok))


def parse_target_expr(
    text: str,
    scope: tuple[str, ...] = (),
    consts: Optional[dict[str, str]] = None,
) -> Tm:
    """Parse one emitted target expression back into a kernel term.

    ``scope`` supplies names for free de Bruijn variables (outermost first);
    ``consts`` maps display names back to internal constant names.
    """
    p = _RefParser(_tokenize(text), dict(consts or {}))
    try:
        t = p.expr(list(scope))
    except _ParseFail as ex:
        raise ValueError(f"cannot parse target expression: {ex}") from None
    if p.peek() is not None:
        raise ValueError(f"trailing input at token {p.pos}: {p.peek()!r}")
    return t


# ---------------------------------------------------------------------------
# File assembly
# ---------------------------------------------------------------------------


def display_map(bundle: Bundle) -> dict[str, str]:
    """Internal constant name → name used in the emitted file."""
    n = bundle.name
    out = {
        ALG: n + "ᴬ",
        DIS: n + "ᴰ",
        MOR: n + "ᴹ",
        SEC: n + "ˢ",
        STAR: n + "⋆",
        INDUCTION: n + "-induction",
        RECURSION: n + "-recursion",
        INITIALITY: n + "-initiality",
    }
    for cname, _ in bundle.ext:
        out[cname] = cname[1:]
    return out


def emit_prelude(cfg: Optional[EmitConfig] = None) -> str:
    """The standalone prelude file: what the golden corpus stores on disk."""
    return f"{OPTIONS_LINE}\nmodule prelude where\n\n{PRELUDE_BODY}"


def emit_agda(bundle: Bundle, cfg: EmitConfig) -> tuple[Optional[str], list[Diagnostic]]:
    """Render a bundle as Agda source.

    Returns ``(text, [])`` on success and ``(None, diagnostics)`` when a
    source name cannot be printed without colliding with the grammar.
    """
    cfg.validate()
    diags: list[Diagnostic] = []
    for cname, _ in bundle.ext:
        if cname[1:] in RESERVED_EMIT_NAMES:
            diags.append(
                Diagnostic(
                    "EMIT",
                    f"assumption '{cname[1:]}' collides with a prelude or grammar name",
                )
            )
    if cfg.module_name in RESERVED_EMIT_NAMES:
        diags.append(
            Diagnostic("EMIT", f"module name '{cfg.module_name}' is reserved")
        )
    if diags:
        return None, diags

    wanted = closure(cfg.translations)
    derived = [k for k in wanted if k in ("IND", "REC", "INIT")]
    printer = _Printer(display_map(bundle), cfg.width)
    disp = printer.display
    glob = bundle.globals
    fields = [c.name for c in bundle.components]

    lines: list[str] = []
    lines.append(f"-- generated by hiit-forge {__version__}")
    lines.append(f"-- input: {cfg.input_label} (sha256 {cfg.input_sha256 or 'unknown'})")
    lines.append(
        "-- flags: --trans "
        + ",".join(cfg.translations)
        + f" --level {bundle.level} --prelude {cfg.prelude}"
    )
    lines.append(OPTIONS_LINE)
    lines.append(f"module {cfg.module_name} where")
    lines.append("")
    if cfg.prelude == "embed":
        lines.append(PRELUDE_BODY.rstrip("\n"))
    else:
        lines.append("open import prelude")
    lines.append("")

    if bundle.ext:
        lines.append("-- external assumptions")
        lines.append("postulate")
        for cname, cty in bundle.ext:
            rhs = printer.fmt(cty, [], 2 + len(disp[cname]) + 3, 0)
            lines.append(f"  {disp[cname]} : {rhs}")
        lines.append("")

    if bundle.components:
        lines.append(f"-- field paths into a {disp[ALG]} record value γ:")
        m = len(bundle.components)
        for comp in bundle.components:
            path = "γ"
            for _ in range(comp.proj1s):
                path = f"proj₁ ({path})" if path != "γ" else "proj₁ γ"
            path = f"proj₂ ({path})" if path != "γ" else "proj₂ γ"
            lines.append(f"--   {comp.name} = {path}")
        lines.append("")

    def emit_def(key: str, const: str) -> None:
        ty, body = glob[const]
        assert body is not None
        name = disp[const]
        lines.append(f"{name} : {printer.fmt(ty, [], len(name) + 3, 0)}")
        scope: list[str] = []
        prefix_binders: list[str] = []
        inner = body
        # peel the header lambdas so the fold layout starts at the Σ spine
        while isinstance(inner, TLam):
            nm = printer.binder(inner.name, _uses(inner.body, 0), scope)
            prefix_binders.append(nm)
            scope = scope + [nm]
            inner = inner.body
        lines.append(f"{name} =")
        indent = 2
        for nm in prefix_binders:
            lines.append(f"{' ' * indent}λ {nm} →")
        lines.append(f"{' ' * indent}{printer.fmt_fold(inner, scope, indent, fields)}")
        lines.append("")

    key_const = {"A": ALG, "D": DIS, "M": MOR, "S": SEC}
    for key in ("A", "D", "M", "S"):
        if key in wanted:
            emit_def(key, key_const[key])

    if derived:
        lines.append("-- the derived statements, over a postulated model")
        lines.append("postulate")
        lines.append(f"  {disp[STAR]} : {disp[ALG]}")
        lines.append("")
        key_derived = {"IND": INDUCTION, "REC": RECURSION, "INIT": INITIALITY}
        for key in derived:
            const = key_derived[key]
            ty = glob[const][0]
            name = disp[const]
            lines.append("postulate")
            lines.append(f"  {name} : {printer.fmt(ty, [], 2 + len(name) + 3, 0)}")
            lines.append("")

    return "\n".join(lines).rstrip("\n") + "\n", []
