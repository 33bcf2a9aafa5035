"""Kernel for the target type theory that elaborated signatures land in.

Terms are de Bruijn-indexed frozen dataclasses, so structural equality is
alpha-equivalence.  The theory has cumulative Russell-style universes
``Type 0 : Type 1 : ...``, dependent products and sums with eta, a unit type
with eta, and an intensional identity type ``Eq`` whose eliminator ``J``
computes definitionally on ``Refl``.

The module provides:

* weak head normalisation (``whnf``) with a reduction-fuel bound,
* type-directed conversion checking (beta-eta) and cumulativity (``subty``),
* a bidirectional checker (``tt_infer`` / ``tt_check``),
* a library of derived path operations (``prelude_globals``), each of which
  is definable from ``J`` alone and is re-verified by ``check_prelude``.

Context entries may be ``None``: such entries stand for variables that exist
in an enclosing telescope but are off-limits in the position being checked
(referencing one raises ``PoisonedVariable``, which the signature checker
turns into a scoping diagnostic).
"""
from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass, field
from typing import Callable, Optional

# Deeply nested eliminator towers (path-algebra sections, in particular)
# overrun CPython's default frame budget long before the C stack is at risk.
sys.setrecursionlimit(max(sys.getrecursionlimit(), 30000))

DEFAULT_FUEL = 10**6


class KernelError(Exception):
    """A term failed to check, infer, or reduce in the target theory."""


class FuelExhausted(KernelError):
    """Reduction exceeded its step budget."""


class PoisonedVariable(KernelError):
    """A variable from an off-limits context zone was referenced."""


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Tm:
    pass


@dataclass(frozen=True)
class TType(Tm):
    level: int


@dataclass(frozen=True)
class TVar(Tm):
    ix: int


@dataclass(frozen=True)
class TFVar(Tm):
    """Free placeholder used only while building terms; see ``tlam`` etc."""

    uid: int


@dataclass(frozen=True)
class TConst(Tm):
    name: str


@dataclass(frozen=True)
class TPi(Tm):
    name: str = field(compare=False)
    dom: Tm = field()
    cod: Tm = field()


@dataclass(frozen=True)
class TLam(Tm):
    name: str = field(compare=False)
    body: Tm = field()


@dataclass(frozen=True)
class TApp(Tm):
    fn: Tm
    arg: Tm


@dataclass(frozen=True)
class TSigma(Tm):
    name: str = field(compare=False)
    fst: Tm = field()
    snd: Tm = field()


@dataclass(frozen=True)
class TPair(Tm):
    fst: Tm
    snd: Tm


@dataclass(frozen=True)
class TProj1(Tm):
    tm: Tm


@dataclass(frozen=True)
class TProj2(Tm):
    tm: Tm


@dataclass(frozen=True)
class TUnit(Tm):
    pass


@dataclass(frozen=True)
class TTt(Tm):
    pass


@dataclass(frozen=True)
class TEq(Tm):
    ty: Tm
    lhs: Tm
    rhs: Tm


@dataclass(frozen=True)
class TRefl(Tm):
    tm: Tm


@dataclass(frozen=True)
class TJ(Tm):
    """``J ty t (x z. motive) base u eq`` — based path induction.

    ``motive`` lives under two binders: the endpoint (index 1) and the path
    from ``base_pt`` to it (index 0).
    """

    ty: Tm
    base_pt: Tm
    motive: Tm
    base: Tm
    end_pt: Tm
    eq: Tm
    names: tuple[str, str] = field(compare=False, default=("x", "z"))


Globals = dict[str, tuple[Tm, Optional[Tm]]]


# ---------------------------------------------------------------------------
# Shifting and substitution


def shift(t: Tm, by: int, cutoff: int = 0) -> Tm:
    if by == 0:
        return t
    match t:
        case TVar(ix):
            return TVar(ix + by) if ix >= cutoff else t
        case TType(_) | TFVar(_) | TConst(_) | TUnit() | TTt():
            return t
        case TPi(n, d, c):
            return TPi(n, shift(d, by, cutoff), shift(c, by, cutoff + 1))
        case TLam(n, b):
            return TLam(n, shift(b, by, cutoff + 1))
        case TApp(f, a):
            return TApp(shift(f, by, cutoff), shift(a, by, cutoff))
        case TSigma(n, f, s):
            return TSigma(n, shift(f, by, cutoff), shift(s, by, cutoff + 1))
        case TPair(a, b):
            return TPair(shift(a, by, cutoff), shift(b, by, cutoff))
        case TProj1(p):
            return TProj1(shift(p, by, cutoff))
        case TProj2(p):
            return TProj2(shift(p, by, cutoff))
        case TEq(ty, l, r):
            return TEq(shift(ty, by, cutoff), shift(l, by, cutoff), shift(r, by, cutoff))
        case TRefl(s):
            return TRefl(shift(s, by, cutoff))
        case TJ(ty, bp, m, b, ep, e, names):
            return TJ(
                shift(ty, by, cutoff),
                shift(bp, by, cutoff),
                shift(m, by, cutoff + 2),
                shift(b, by, cutoff),
                shift(ep, by, cutoff),
                shift(e, by, cutoff),
                names,
            )
    raise KernelError(f"shift: unhandled term {t!r}")


def subst(t: Tm, depth: int, repl: Tm) -> Tm:
    """Replace ``TVar(depth)`` by ``repl`` and close the gap below it."""
    match t:
        case TVar(ix):
            if ix == depth:
                return shift(repl, depth)
            return TVar(ix - 1) if ix > depth else t
        case TType(_) | TFVar(_) | TConst(_) | TUnit() | TTt():
            return t
        case TPi(n, d, c):
            return TPi(n, subst(d, depth, repl), subst(c, depth + 1, repl))
        case TLam(n, b):
            return TLam(n, subst(b, depth + 1, repl))
        case TApp(f, a):
            return TApp(subst(f, depth, repl), subst(a, depth, repl))
        case TSigma(n, f, s):
            return TSigma(n, subst(f, depth, repl), subst(s, depth + 1, repl))
        case TPair(a, b):
            return TPair(subst(a, depth, repl), subst(b, depth, repl))
        case TProj1(p):
            return TProj1(subst(p, depth, repl))
        case TProj2(p):
            return TProj2(subst(p, depth, repl))
        case TEq(ty, l, r):
            return TEq(subst(ty, depth, repl), subst(l, depth, repl), subst(r, depth, repl))
        case TRefl(s):
            return TRefl(subst(s, depth, repl))
        case TJ(ty, bp, m, b, ep, e, names):
            return TJ(
                subst(ty, depth, repl),
                subst(bp, depth, repl),
                subst(m, depth + 2, repl),
                subst(b, depth, repl),
                subst(ep, depth, repl),
                subst(e, depth, repl),
                names,
            )
    raise KernelError(f"subst: unhandled term {t!r}")


def subst_top(body: Tm, arg: Tm) -> Tm:
    return subst(body, 0, arg)


def inst_motive(motive: Tm, endpoint: Tm, path: Tm) -> Tm:
    """Instantiate a two-binder ``J`` motive at an endpoint and a path."""
    return subst_top(subst_top(motive, shift(path, 1)), endpoint)


# ---------------------------------------------------------------------------
# Term builders (locally nameless): build with Python functions, then bind.


_uid = itertools.count()


def _abstract(t: Tm, uid: int, depth: int = 0) -> Tm:
    match t:
        case TFVar(u):
            return TVar(depth) if u == uid else t
        case TVar(_) | TType(_) | TConst(_) | TUnit() | TTt():
            return t
        case TPi(n, d, c):
            return TPi(n, _abstract(d, uid, depth), _abstract(c, uid, depth + 1))
        case TLam(n, b):
            return TLam(n, _abstract(b, uid, depth + 1))
        case TApp(f, a):
            return TApp(_abstract(f, uid, depth), _abstract(a, uid, depth))
        case TSigma(n, f, s):
            return TSigma(n, _abstract(f, uid, depth), _abstract(s, uid, depth + 1))
        case TPair(a, b):
            return TPair(_abstract(a, uid, depth), _abstract(b, uid, depth))
        case TProj1(p):
            return TProj1(_abstract(p, uid, depth))
        case TProj2(p):
            return TProj2(_abstract(p, uid, depth))
        case TEq(ty, l, r):
            return TEq(_abstract(ty, uid, depth), _abstract(l, uid, depth), _abstract(r, uid, depth))
        case TRefl(s):
            return TRefl(_abstract(s, uid, depth))
        case TJ(ty, bp, m, b, ep, e, names):
            return TJ(
                _abstract(ty, uid, depth),
                _abstract(bp, uid, depth),
                _abstract(m, uid, depth + 2),
                _abstract(b, uid, depth),
                _abstract(ep, uid, depth),
                _abstract(e, uid, depth),
                names,
            )
    raise KernelError(f"abstract: unhandled term {t!r}")


def tlam(name: str, fn: Callable[[Tm], Tm]) -> Tm:
    v = TFVar(next(_uid))
    return TLam(name, _abstract(fn(v), v.uid))


def tpi(name: str, dom: Tm, fn: Callable[[Tm], Tm]) -> Tm:
    v = TFVar(next(_uid))
    return TPi(name, dom, _abstract(fn(v), v.uid))


def tsig(name: str, fst: Tm, fn: Callable[[Tm], Tm]) -> Tm:
    v = TFVar(next(_uid))
    return TSigma(name, fst, _abstract(fn(v), v.uid))


def tarr(dom: Tm, cod: Tm) -> Tm:
    return TPi("_", dom, shift(cod, 1))


def tapp(fn: Tm, *args: Tm) -> Tm:
    for a in args:
        fn = TApp(fn, a)
    return fn


def tj(
    ty: Tm,
    base_pt: Tm,
    motive: Callable[[Tm, Tm], Tm],
    base: Tm,
    end_pt: Tm,
    eq: Tm,
    names: tuple[str, str] = ("x", "z"),
) -> Tm:
    vx = TFVar(next(_uid))
    vz = TFVar(next(_uid))
    m = _abstract(_abstract(motive(vx, vz), vz.uid, 0), vx.uid, 1)
    return TJ(ty, base_pt, m, base, end_pt, eq, names)


# ---------------------------------------------------------------------------
# Weak head normalisation


@dataclass
class _Fuel:
    n: int


def whnf(t: Tm, glob: Globals, fuel: Optional[_Fuel] = None) -> Tm:
    return _whnf(t, glob, fuel if fuel is not None else _Fuel(DEFAULT_FUEL))


def _whnf(t: Tm, glob: Globals, fuel: _Fuel) -> Tm:
    while True:
        fuel.n -= 1
        if fuel.n < 0:
            raise FuelExhausted("reduction fuel exhausted")
        match t:
            case TApp(f, a):
                head = _whnf(f, glob, fuel)
                if isinstance(head, TLam):
                    t = subst_top(head.body, a)
                    continue
                return TApp(head, a) if head is not f else t
            case TProj1(p):
                q = _whnf(p, glob, fuel)
                if isinstance(q, TPair):
                    t = q.fst
                    continue
                return TProj1(q) if q is not p else t
            case TProj2(p):
                q = _whnf(p, glob, fuel)
                if isinstance(q, TPair):
                    t = q.snd
                    continue
                return TProj2(q) if q is not p else t
            case TConst(name):
                entry = glob.get(name)
                if entry is not None and entry[1] is not None:
                    t = entry[1]
                    continue
                return t
            case TJ(ty, bp, m, b, ep, e, names):
                en = _whnf(e, glob, fuel)
                if isinstance(en, TRefl):
                    t = b
                    continue
                return TJ(ty, bp, m, b, ep, en, names) if en is not e else t
            case _:
                return t


# ---------------------------------------------------------------------------
# Conversion (type-directed, beta-eta) and cumulativity


def _lookup(ctx: list[Optional[Tm]], ix: int) -> Tm:
    if ix < 0 or ix >= len(ctx):
        raise KernelError(f"variable index {ix} out of range (depth {len(ctx)})")
    ty = ctx[len(ctx) - 1 - ix]
    if ty is None:
        raise PoisonedVariable("signature variable used where only external terms may appear")
    return shift(ty, ix + 1)


def conv(ctx: list[Optional[Tm]], glob: Globals, a: Tm, b: Tm, ty: Tm, fuel: Optional[_Fuel] = None) -> bool:
    return _conv(ctx, glob, a, b, ty, fuel if fuel is not None else _Fuel(DEFAULT_FUEL))


def _conv(ctx, glob, a, b, ty, fuel) -> bool:
    if a == b:
        return True
    ty = _whnf(ty, glob, fuel)
    match ty:
        case TPi(_, dom, cod):
            fa = TApp(shift(a, 1), TVar(0))
            fb = TApp(shift(b, 1), TVar(0))
            return _conv(ctx + [dom], glob, fa, fb, cod, fuel)
        case TSigma(_, fst, snd):
            if not _conv(ctx, glob, TProj1(a), TProj1(b), fst, fuel):
                return False
            return _conv(ctx, glob, TProj2(a), TProj2(b), subst_top(snd, TProj1(a)), fuel)
        case TUnit():
            return True
        case TType(_):
            return _conv_ty(ctx, glob, a, b, fuel)
        case TEq(ity, _, _):
            wa = _whnf(a, glob, fuel)
            wb = _whnf(b, glob, fuel)
            if isinstance(wa, TRefl) and isinstance(wb, TRefl):
                return _conv(ctx, glob, wa.tm, wb.tm, ity, fuel)
            if isinstance(wa, TRefl) or isinstance(wb, TRefl):
                return False
            return _conv_ne(ctx, glob, wa, wb, fuel) is not None
        case _:
            wa = _whnf(a, glob, fuel)
            wb = _whnf(b, glob, fuel)
            return _conv_ne(ctx, glob, wa, wb, fuel) is not None


def conv_ty(ctx: list[Optional[Tm]], glob: Globals, a: Tm, b: Tm, fuel: Optional[_Fuel] = None) -> bool:
    return _conv_ty(ctx, glob, a, b, fuel if fuel is not None else _Fuel(DEFAULT_FUEL))


def _conv_ty(ctx, glob, a, b, fuel) -> bool:
    if a == b:
        return True
    a = _whnf(a, glob, fuel)
    b = _whnf(b, glob, fuel)
    if a == b:
        return True
    match a, b:
        case (TType(i), TType(j)):
            return i == j
        case (TPi(_, d1, c1), TPi(_, d2, c2)):
            return _conv_ty(ctx, glob, d1, d2, fuel) and _conv_ty(ctx + [d1], glob, c1, c2, fuel)
        case (TSigma(_, f1, s1), TSigma(_, f2, s2)):
            return _conv_ty(ctx, glob, f1, f2, fuel) and _conv_ty(ctx + [f1], glob, s1, s2, fuel)
        case (TUnit(), TUnit()):
            return True
        case (TEq(t1, l1, r1), TEq(t2, l2, r2)):
            return (
                _conv_ty(ctx, glob, t1, t2, fuel)
                and _conv(ctx, glob, l1, l2, t1, fuel)
                and _conv(ctx, glob, r1, r2, t1, fuel)
            )
        case _:
            return _conv_ne(ctx, glob, a, b, fuel) is not None


def _conv_ne(ctx, glob, a, b, fuel) -> Optional[Tm]:
    """Compare two weak-head-normal neutrals, synthesising their common type."""
    match a, b:
        case (TVar(i), TVar(j)):
            return _lookup(ctx, i) if i == j else None
        case (TConst(x), TConst(y)):
            if x != y or x not in glob:
                return None
            return glob[x][0]
        case (TApp(f1, a1), TApp(f2, a2)):
            ft = _conv_ne(ctx, glob, f1, f2, fuel)
            if ft is None:
                return None
            ft = _whnf(ft, glob, fuel)
            if not isinstance(ft, TPi):
                raise KernelError("application head does not have a function type")
            if not _conv(ctx, glob, a1, a2, ft.dom, fuel):
                return None
            return subst_top(ft.cod, a1)
        case (TProj1(p), TProj1(q)):
            st = _conv_ne(ctx, glob, p, q, fuel)
            if st is None:
                return None
            st = _whnf(st, glob, fuel)
            if not isinstance(st, TSigma):
                raise KernelError("projection subject does not have a pair type")
            return st.fst
        case (TProj2(p), TProj2(q)):
            st = _conv_ne(ctx, glob, p, q, fuel)
            if st is None:
                return None
            st = _whnf(st, glob, fuel)
            if not isinstance(st, TSigma):
                raise KernelError("projection subject does not have a pair type")
            return subst_top(st.snd, TProj1(p))
        case (TJ(t1, bp1, m1, b1, ep1, e1, _), TJ(t2, bp2, m2, b2, ep2, e2, _)):
            if not _conv_ty(ctx, glob, t1, t2, fuel):
                return None
            if not _conv(ctx, glob, bp1, bp2, t1, fuel):
                return None
            mctx = ctx + [t1, TEq(shift(t1, 1), shift(bp1, 1), TVar(0))]
            if not _conv_ty(mctx, glob, m1, m2, fuel):
                return None
            if not _conv(ctx, glob, b1, b2, inst_motive(m1, bp1, TRefl(bp1)), fuel):
                return None
            if not _conv(ctx, glob, ep1, ep2, t1, fuel):
                return None
            if not _conv(ctx, glob, e1, e2, TEq(t1, bp1, ep1), fuel):
                return None
            return inst_motive(m1, ep1, e1)
        case _:
            return None


def subty(ctx: list[Optional[Tm]], glob: Globals, a: Tm, b: Tm, fuel: Optional[_Fuel] = None) -> bool:
    """Cumulativity: ``a`` is a subtype of ``b`` (covariant in Pi/Sigma codomains)."""
    f = fuel if fuel is not None else _Fuel(DEFAULT_FUEL)
    return _subty(ctx, glob, a, b, f)


def _subty(ctx, glob, a, b, fuel) -> bool:
    if a == b:
        return True
    a = _whnf(a, glob, fuel)
    b = _whnf(b, glob, fuel)
    match a, b:
        case (TType(i), TType(j)):
            return i <= j
        case (TPi(_, d1, c1), TPi(_, d2, c2)):
            return _conv_ty(ctx, glob, d1, d2, fuel) and _subty(ctx + [d1], glob, c1, c2, fuel)
        case (TSigma(_, f1, s1), TSigma(_, f2, s2)):
            return _subty(ctx, glob, f1, f2, fuel) and _subty(ctx + [f1], glob, s1, s2, fuel)
        case _:
            return _conv_ty(ctx, glob, a, b, fuel)


# ---------------------------------------------------------------------------
# Bidirectional checking


def tt_infer(ctx: list[Optional[Tm]], glob: Globals, t: Tm, fuel: Optional[_Fuel] = None) -> Tm:
    return _infer(ctx, glob, t, fuel if fuel is not None else _Fuel(DEFAULT_FUEL))


def tt_check(ctx: list[Optional[Tm]], glob: Globals, t: Tm, ty: Tm, fuel: Optional[_Fuel] = None) -> None:
    _check(ctx, glob, t, ty, fuel if fuel is not None else _Fuel(DEFAULT_FUEL))


def infer_sort(ctx: list[Optional[Tm]], glob: Globals, t: Tm, fuel: Optional[_Fuel] = None) -> int:
    return _infer_sort(ctx, glob, t, fuel if fuel is not None else _Fuel(DEFAULT_FUEL))


def _infer_sort(ctx, glob, t, fuel) -> int:
    s = _whnf(_infer(ctx, glob, t, fuel), glob, fuel)
    if not isinstance(s, TType):
        raise KernelError(f"expected a type, found a term of {show(s)}")
    return s.level


def _infer(ctx, glob, t, fuel) -> Tm:
    match t:
        case TVar(ix):
            return _lookup(ctx, ix)
        case TConst(name):
            if name not in glob:
                raise KernelError(f"unknown constant {name}")
            return glob[name][0]
        case TType(i):
            return TType(i + 1)
        case TUnit():
            return TType(0)
        case TTt():
            return TUnit()
        case TPi(_, d, c):
            i = _infer_sort(ctx, glob, d, fuel)
            j = _infer_sort(ctx + [d], glob, c, fuel)
            return TType(max(i, j))
        case TSigma(_, f, s):
            i = _infer_sort(ctx, glob, f, fuel)
            j = _infer_sort(ctx + [f], glob, s, fuel)
            return TType(max(i, j))
        case TEq(ity, l, r):
            i = _infer_sort(ctx, glob, ity, fuel)
            _check(ctx, glob, l, ity, fuel)
            _check(ctx, glob, r, ity, fuel)
            return TType(i)
        case TRefl(s):
            a = _infer(ctx, glob, s, fuel)
            return TEq(a, s, s)
        case TApp(f, a):
            ft = _whnf(_infer(ctx, glob, f, fuel), glob, fuel)
            if not isinstance(ft, TPi):
                raise KernelError(f"cannot apply a term of {show(ft)}")
            _check(ctx, glob, a, ft.dom, fuel)
            return subst_top(ft.cod, a)
        case TProj1(p):
            st = _whnf(_infer(ctx, glob, p, fuel), glob, fuel)
            if not isinstance(st, TSigma):
                raise KernelError(f"cannot project from a term of {show(st)}")
            return st.fst
        case TProj2(p):
            st = _whnf(_infer(ctx, glob, p, fuel), glob, fuel)
            if not isinstance(st, TSigma):
                raise KernelError(f"cannot project from a term of {show(st)}")
            return subst_top(st.snd, TProj1(p))
        case TJ(ity, bp, m, b, ep, e, _):
            _infer_sort(ctx, glob, ity, fuel)
            _check(ctx, glob, bp, ity, fuel)
            mctx = ctx + [ity, TEq(shift(ity, 1), shift(bp, 1), TVar(0))]
            _infer_sort(mctx, glob, m, fuel)
            _check(ctx, glob, b, inst_motive(m, bp, TRefl(bp)), fuel)
            _check(ctx, glob, ep, ity, fuel)
            _check(ctx, glob, e, TEq(ity, bp, ep), fuel)
            return inst_motive(m, ep, e)
        case TLam(_, _):
            raise KernelError("cannot infer the type of an unannotated function")
        case TPair(_, _):
            raise KernelError("cannot infer the type of a bare pair")
        case TFVar(_):
            raise KernelError("free placeholder escaped the term builder")
    raise KernelError(f"infer: unhandled term {t!r}")


def _check(ctx, glob, t, ty, fuel) -> None:
    w = _whnf(ty, glob, fuel)
    match t:
        case TLam(_, body):
            if not isinstance(w, TPi):
                raise KernelError(f"function given where {show(w)} expected")
            _check(ctx + [w.dom], glob, body, w.cod, fuel)
            return
        case TPair(a, b):
            if not isinstance(w, TSigma):
                raise KernelError(f"pair given where {show(w)} expected")
            _check(ctx, glob, a, w.fst, fuel)
            _check(ctx, glob, b, subst_top(w.snd, a), fuel)
            return
        case TTt():
            if isinstance(w, TUnit):
                return
        case TRefl(s):
            if isinstance(w, TEq):
                _check(ctx, glob, s, w.ty, fuel)
                if not _conv(ctx, glob, s, w.lhs, w.ty, fuel):
                    raise KernelError(
                        f"reflexivity subject {show(s)} does not match endpoint {show(w.lhs)}"
                    )
                if not _conv(ctx, glob, s, w.rhs, w.ty, fuel):
                    raise KernelError(
                        f"reflexivity subject {show(s)} does not match endpoint {show(w.rhs)}"
                    )
                return
    it = _infer(ctx, glob, t, fuel)
    if not _subty(ctx, glob, it, w, fuel):
        raise KernelError(f"type mismatch: term of {show(it)} given where {show(w)} expected")


# ---------------------------------------------------------------------------
# Debug printer (the Agda emitter has the real one)


_SUBSCRIPTS = "₀₁₂₃₄₅₆₇₈₉"


def _sub(i: int) -> str:
    return "".join(_SUBSCRIPTS[int(d)] for d in str(i))


def show(t: Tm, names: tuple[str, ...] = ()) -> str:
    def fresh(n: str) -> str:
        base = n if n and n != "_" else "v"
        cand = base
        while cand in names_list:
            cand += "'"
        return cand

    names_list = list(names)

    def go(t: Tm, ns: list[str], prec: int) -> str:
        def wrap(s: str, p: int) -> str:
            return f"({s})" if prec > p else s

        match t:
            case TType(i):
                return f"Type{_sub(i)}"
            case TVar(ix):
                return ns[ix] if ix < len(ns) else f"#{ix}"
            case TFVar(u):
                return f"?{u}"
            case TConst(n):
                return n
            case TUnit():
                return "⊤"
            case TTt():
                return "tt"
            case TPi(n, d, c):
                nn = n if n else "_"
                if nn == "_":
                    return wrap(f"{go(d, ns, 1)} → {go(c, ['_'] + ns, 0)}", 0)
                return wrap(f"({nn} : {go(d, ns, 0)}) → {go(c, [nn] + ns, 0)}", 0)
            case TSigma(n, f, s):
                nn = n if n else "_"
                return wrap(f"Σ ({nn} : {go(f, ns, 0)}) × {go(s, [nn] + ns, 0)}", 0)
            case TLam(n, b):
                nn = n if n else "_"
                return wrap(f"λ {nn} → {go(b, [nn] + ns, 0)}", 0)
            case TApp(f, a):
                return wrap(f"{go(f, ns, 1)} {go(a, ns, 2)}", 1)
            case TPair(a, b):
                return f"({go(a, ns, 0)} , {go(b, ns, 0)})"
            case TProj1(p):
                return wrap(f"proj₁ {go(p, ns, 2)}", 1)
            case TProj2(p):
                return wrap(f"proj₂ {go(p, ns, 2)}", 1)
            case TEq(ty, l, r):
                return wrap(f"Eq {go(ty, ns, 2)} {go(l, ns, 2)} {go(r, ns, 2)}", 1)
            case TRefl(s):
                return wrap(f"Refl {go(s, ns, 2)}", 1)
            case TJ(ty, bp, m, b, ep, e, (nx, nz)):
                return wrap(
                    f"J {go(ty, ns, 2)} {go(bp, ns, 2)} "
                    f"(λ {nx} {nz} → {go(m, [nz, nx] + ns, 0)}) "
                    f"{go(b, ns, 2)} {go(ep, ns, 2)} {go(e, ns, 2)}",
                    1,
                )
        return repr(t)

    _ = fresh
    return go(t, names_list, 0)


# ---------------------------------------------------------------------------
# Path-operation library: everything is a lambda tower over a single J.


def _ty_tr() -> Tm:
    T = TType(2)
    return tpi("A", T, lambda A: tpi("P", tarr(A, T), lambda P: tpi("u", A, lambda u: tpi(
        "v", A, lambda v: tpi("e", TEq(A, u, v), lambda e: tpi("x", TApp(P, u), lambda x: TApp(P, v)))))))


def _body_tr() -> Tm:
    return tlam("A", lambda A: tlam("P", lambda P: tlam("u", lambda u: tlam("v", lambda v: tlam(
        "e", lambda e: tlam("x", lambda x: tj(A, u, lambda y, w: TApp(P, y), x, v, e)))))))


def _ty_coe() -> Tm:
    T = TType(0)
    return tpi("A", T, lambda A: tpi("B", T, lambda B: tpi(
        "e", TEq(TType(0), A, B), lambda e: tpi("x", A, lambda x: B))))


def _body_coe() -> Tm:
    return tlam("A", lambda A: tlam("B", lambda B: tlam("e", lambda e: tlam(
        "x", lambda x: tj(TType(0), A, lambda Y, w: Y, x, B, e)))))


def _ty_ap() -> Tm:
    T = TType(2)
    return tpi("A", T, lambda A: tpi("B", T, lambda B: tpi("f", tarr(A, B), lambda f: tpi(
        "u", A, lambda u: tpi("v", A, lambda v: tpi("e", TEq(A, u, v), lambda e: TEq(
            B, TApp(f, u), TApp(f, v))))))))


def _body_ap() -> Tm:
    return tlam("A", lambda A: tlam("B", lambda B: tlam("f", lambda f: tlam("u", lambda u: tlam(
        "v", lambda v: tlam("e", lambda e: tj(
            A, u, lambda y, w: TEq(B, TApp(f, u), TApp(f, y)), TRefl(TApp(f, u)), v, e)))))))


def _ty_apd() -> Tm:
    T = TType(2)
    return tpi("A", T, lambda A: tpi("P", tarr(A, T), lambda P: tpi(
        "f", tpi("x", A, lambda x: TApp(P, x)), lambda f: tpi("u", A, lambda u: tpi(
            "v", A, lambda v: tpi("e", TEq(A, u, v), lambda e: TEq(
                TApp(P, v),
                tapp(TConst("tr"), A, P, u, v, e, TApp(f, u)),
                TApp(f, v))))))))


def _body_apd() -> Tm:
    return tlam("A", lambda A: tlam("P", lambda P: tlam("f", lambda f: tlam("u", lambda u: tlam(
        "v", lambda v: tlam("e", lambda e: tj(
            A, u,
            lambda y, w: TEq(TApp(P, y), tapp(TConst("tr"), A, P, u, y, w, TApp(f, u)), TApp(f, y)),
            TRefl(TApp(f, u)), v, e)))))))


def _ty_compose() -> Tm:
    T = TType(2)
    return tpi("A", T, lambda A: tpi("t", A, lambda t: tpi("u", A, lambda u: tpi(
        "v", A, lambda v: tpi("p", TEq(A, t, u), lambda p: tpi(
            "q", TEq(A, u, v), lambda q: TEq(A, t, v)))))))


def _body_compose() -> Tm:
    # Recursion on the second path, so `p ∙ refl` reduces to `p`.
    return tlam("A", lambda A: tlam("t", lambda t: tlam("u", lambda u: tlam("v", lambda v: tlam(
        "p", lambda p: tlam("q", lambda q: tj(A, u, lambda y, w: TEq(A, t, y), p, v, q)))))))


def _ty_inverse() -> Tm:
    T = TType(2)
    return tpi("A", T, lambda A: tpi("t", A, lambda t: tpi("u", A, lambda u: tpi(
        "p", TEq(A, t, u), lambda p: TEq(A, u, t)))))


def _body_inverse() -> Tm:
    return tlam("A", lambda A: tlam("t", lambda t: tlam("u", lambda u: tlam(
        "p", lambda p: tj(A, t, lambda y, w: TEq(A, y, t), TRefl(t), u, p)))))


def _ty_inv() -> Tm:
    T = TType(2)
    return tpi("A", T, lambda A: tpi("t", A, lambda t: tpi("u", A, lambda u: tpi(
        "p", TEq(A, t, u), lambda p: TEq(
            TEq(A, u, u),
            tapp(TConst("compose"), A, u, t, u, tapp(TConst("inverse"), A, t, u, p), p),
            TRefl(u))))))


def _body_inv() -> Tm:
    return tlam("A", lambda A: tlam("t", lambda t: tlam("u", lambda u: tlam("p", lambda p: tj(
        A, t,
        lambda y, w: TEq(
            TEq(A, y, y),
            tapp(TConst("compose"), A, y, t, y, tapp(TConst("inverse"), A, t, y, w), w),
            TRefl(y)),
        TRefl(TRefl(t)), u, p)))))


def _ty_iscontr() -> Tm:
    return tarr(TType(2), TType(2))


def _body_iscontr() -> Tm:
    return tlam("A", lambda A: tsig("a", A, lambda a: tpi("b", A, lambda b: TEq(A, a, b))))


PRELUDE_NAMES = ("tr", "coe", "ap", "apd", "compose", "inverse", "inv", "isContr")


def prelude_globals() -> Globals:
    """Fresh globals table holding the derived path operations."""
    return {
        "tr": (_ty_tr(), _body_tr()),
        "coe": (_ty_coe(), _body_coe()),
        "ap": (_ty_ap(), _body_ap()),
        "apd": (_ty_apd(), _body_apd()),
        "compose": (_ty_compose(), _body_compose()),
        "inverse": (_ty_inverse(), _body_inverse()),
        "inv": (_ty_inv(), _body_inv()),
        "isContr": (_ty_iscontr(), _body_iscontr()),
    }


_PRIMITIVE_NODES = (TLam, TApp, TVar, TConst, TEq, TRefl, TJ, TPi, TSigma, TType)


def _only_j_primitives(t: Tm) -> bool:
    """The library may use binders, application, Eq/Refl/J and earlier entries —
    nothing else (no pairs, projections, or unit tricks smuggled in)."""
    if not isinstance(t, _PRIMITIVE_NODES):
        return False
    match t:
        case TPi(_, d, c) | TSigma(_, d, c):
            return _only_j_primitives(d) and _only_j_primitives(c)
        case TLam(_, b):
            return _only_j_primitives(b)
        case TApp(f, a):
            return _only_j_primitives(f) and _only_j_primitives(a)
        case TEq(ty, l, r):
            return all(_only_j_primitives(x) for x in (ty, l, r))
        case TRefl(s):
            return _only_j_primitives(s)
        case TJ(ty, bp, m, b, ep, e, _):
            return all(_only_j_primitives(x) for x in (ty, bp, m, b, ep, e))
        case _:
            return True


def check_prelude(glob: Optional[Globals] = None) -> None:
    """Re-verify every library constant against its declared type."""
    g = glob if glob is not None else prelude_globals()
    for name, (ty, body) in g.items():
        infer_sort([], g, ty)
        if body is not None:
            tt_check([], g, body, ty)
            if not _only_j_primitives(body):
                raise KernelError(f"library constant {name} uses a non-J primitive")
