"""Core syntax for signatures.

A signature is a single telescope whose entries live in one of two zones:

* ``ext`` entries are assumptions drawn from the target theory (their types
  are target terms, see :mod:`hiit_forge.target`);
* ``sig`` entries are the constructors of the signature proper (their types
  are ``SigType`` values).

Both zones share one de Bruijn index space: a target term embedded in a
signature (the domain of an external product, the argument of an external
application, ...) refers to telescope entries with ordinary ``TVar`` indices.
Well-formed embedded terms only ever reference ``ext`` entries; the
substitution operations below enforce that invariant and the checker reports
violations as scoping errors.

Binder display names carry ``compare=False``, so dataclass equality on this
syntax *is* alpha-equivalence.

Signature types (``SigType``):
    ``SUniv``                the universe of small sorts
    ``SEl t``                decoding of a small-sort code ``t``
    ``SPiInd x a B``         product over the small sort ``a`` (recursive argument)
    ``SPiExt x  t B``        product over the external type ``t``
    ``SEqU a b``             equality of small-sort codes (a large type)

Signature terms (``SigTerm``) include variables, the three application forms
matching the three products, infinitary product codes, equality codes with
their reflexivity and eliminators, and the propositional computation
witnesses ``SJBeta``/``SJBetaU`` for those eliminators.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .target import TFVar, Tm, shift as tm_shift, subst as tm_subst


class CoreError(Exception):
    """An invariant of the zoned telescope was violated."""


# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class SigType:
    pass


@dataclass(frozen=True)
class SUniv(SigType):
    pass


@dataclass(frozen=True)
class SEl(SigType):
    tm: "SigTerm"


@dataclass(frozen=True)
class SPiInd(SigType):
    name: str = field(compare=False)
    dom: "SigTerm" = field()
    cod: "SigType" = field()


@dataclass(frozen=True)
class SPiExt(SigType):
    name: str = field(compare=False)
    dom: Tm = field()
    cod: "SigType" = field()


@dataclass(frozen=True)
class SEqU(SigType):
    lhs: "SigTerm"
    rhs: "SigTerm"


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class SigTerm:
    pass


@dataclass(frozen=True)
class SVar(SigTerm):
    ix: int


@dataclass(frozen=True)
class SApp(SigTerm):
    fn: SigTerm
    arg: SigTerm


@dataclass(frozen=True)
class SAppExt(SigTerm):
    fn: SigTerm
    arg: Tm


@dataclass(frozen=True)
class SAppInf(SigTerm):
    fn: SigTerm
    arg: Tm


@dataclass(frozen=True)
class SPiInf(SigTerm):
    """Code for an infinitary product: external domain, small codomain."""

    name: str = field(compare=False)
    dom: Tm = field()
    cod: "SigTerm" = field()


@dataclass(frozen=True)
class SEqId(SigTerm):
    """Code for an equality of elements of the small sort ``index``."""

    index: SigTerm
    lhs: SigTerm
    rhs: SigTerm


@dataclass(frozen=True)
class SRefl(SigTerm):
    index: SigTerm
    subject: SigTerm


@dataclass(frozen=True)
class SReflU(SigTerm):
    subject: SigTerm


@dataclass(frozen=True)
class SJ(SigTerm):
    """Eliminator for small equalities.

    ``motive`` is a small-sort code under two binders: the endpoint
    (index 1, an element of ``El index``) and the path to it (index 0).
    """

    index: SigTerm
    base_pt: SigTerm
    motive: SigTerm
    base: SigTerm
    end_pt: SigTerm
    eq: SigTerm
    names: tuple[str, str] = field(compare=False, default=("x", "z"))


@dataclass(frozen=True)
class SJBeta(SigTerm):
    """Propositional computation witness for ``SJ`` at a reflexivity path."""

    index: SigTerm
    base_pt: SigTerm
    motive: SigTerm
    base: SigTerm
    names: tuple[str, str] = field(compare=False, default=("x", "z"))


@dataclass(frozen=True)
class SJU(SigTerm):
    """Eliminator for equalities of small-sort codes.

    ``motive`` is under two binders: a code (index 1) and a large path to it
    (index 0).
    """

    base_pt: SigTerm
    motive: SigTerm
    base: SigTerm
    end_pt: SigTerm
    eq: SigTerm
    names: tuple[str, str] = field(compare=False, default=("x", "z"))


@dataclass(frozen=True)
class SJBetaU(SigTerm):
    base_pt: SigTerm
    motive: SigTerm
    base: SigTerm
    names: tuple[str, str] = field(compare=False, default=("x", "z"))


# ---------------------------------------------------------------------------
# Telescopes


@dataclass(frozen=True)
class ExtEntry:
    name: str = field(compare=False)
    ty: Tm = field()


@dataclass(frozen=True)
class SigEntry:
    name: str = field(compare=False)
    ty: SigType = field()


Entry = Union[ExtEntry, SigEntry]
SigContext = list  # list[Entry]

Node = Union[SigType, SigTerm, Tm]

_POISON = TFVar(-1)


def _tm_nodes(t):
    yield t
    for f in getattr(t, "__dataclass_fields__", {}):
        v = getattr(t, f)
        if isinstance(v, Tm):
            yield from _tm_nodes(v)


def _tm_drop(t: Tm, depth: int) -> Tm:
    """Remove the telescope entry ``depth`` from an embedded target term.

    The entry must not actually occur: embedded terms may only mention
    ``ext`` entries, and this is only called when eliminating a ``sig`` one.
    """
    r = tm_subst(t, depth, _POISON)
    if any(n == _POISON for n in _tm_nodes(r)):
        raise CoreError("signature variable occurs inside an external term")
    return r


# ---------------------------------------------------------------------------
# Weakening


def weaken(x: Node, by: int = 1, cutoff: int = 0) -> Node:
    """Shift free indices >= ``cutoff`` up by ``by`` (uniformly in both syntaxes)."""
    if by == 0:
        return x
    if isinstance(x, Tm):
        return tm_shift(x, by, cutoff)
    match x:
        case SUniv():
            return x
        case SEl(t):
            return SEl(weaken(t, by, cutoff))
        case SPiInd(n, d, c):
            return SPiInd(n, weaken(d, by, cutoff), weaken(c, by, cutoff + 1))
        case SPiExt(n, d, c):
            return SPiExt(n, tm_shift(d, by, cutoff), weaken(c, by, cutoff + 1))
        case SEqU(l, r):
            return SEqU(weaken(l, by, cutoff), weaken(r, by, cutoff))
        case SVar(ix):
            return SVar(ix + by) if ix >= cutoff else x
        case SApp(f, a):
            return SApp(weaken(f, by, cutoff), weaken(a, by, cutoff))
        case SAppExt(f, a):
            return SAppExt(weaken(f, by, cutoff), tm_shift(a, by, cutoff))
        case SAppInf(f, a):
            return SAppInf(weaken(f, by, cutoff), tm_shift(a, by, cutoff))
        case SPiInf(n, d, c):
            return SPiInf(n, tm_shift(d, by, cutoff), weaken(c, by, cutoff + 1))
        case SEqId(a, l, r):
            return SEqId(weaken(a, by, cutoff), weaken(l, by, cutoff), weaken(r, by, cutoff))
        case SRefl(a, s):
            return SRefl(weaken(a, by, cutoff), weaken(s, by, cutoff))
        case SReflU(s):
            return SReflU(weaken(s, by, cutoff))
        case SJ(a, t, m, b, e, q, names):
            return SJ(
                weaken(a, by, cutoff),
                weaken(t, by, cutoff),
                weaken(m, by, cutoff + 2),
                weaken(b, by, cutoff),
                weaken(e, by, cutoff),
                weaken(q, by, cutoff),
                names,
            )
        case SJBeta(a, t, m, b, names):
            return SJBeta(
                weaken(a, by, cutoff),
                weaken(t, by, cutoff),
                weaken(m, by, cutoff + 2),
                weaken(b, by, cutoff),
                names,
            )
        case SJU(a, m, b, e, q, names):
            return SJU(
                weaken(a, by, cutoff),
                weaken(m, by, cutoff + 2),
                weaken(b, by, cutoff),
                weaken(e, by, cutoff),
                weaken(q, by, cutoff),
                names,
            )
        case SJBetaU(a, m, b, names):
            return SJBetaU(weaken(a, by, cutoff), weaken(m, by, cutoff + 2), weaken(b, by, cutoff), names)
    raise CoreError(f"weaken: unhandled node {x!r}")


# ---------------------------------------------------------------------------
# Substitution


def substitute(x: Node, depth: int, repl: Union[SigTerm, Tm]) -> Node:
    """Substitute ``repl`` for index ``depth`` in ``x`` and close the gap.

    ``repl`` may be a signature term (eliminating a ``sig`` entry) or a
    target term (eliminating an ``ext`` entry); indices in both syntaxes are
    adjusted consistently either way.
    """
    repl_is_sig = isinstance(repl, SigTerm)
    if isinstance(x, Tm):
        if repl_is_sig:
            return _tm_drop(x, depth)
        return tm_subst(x, depth, repl)

    def tm(t: Tm, d: int) -> Tm:
        if repl_is_sig:
            return _tm_drop(t, d)
        return tm_subst(t, d, repl)

    def go(x: Node, d: int) -> Node:
        match x:
            case SUniv():
                return x
            case SEl(t):
                return SEl(go(t, d))
            case SPiInd(n, dm, c):
                return SPiInd(n, go(dm, d), go(c, d + 1))
            case SPiExt(n, dm, c):
                return SPiExt(n, tm(dm, d), go(c, d + 1))
            case SEqU(l, r):
                return SEqU(go(l, d), go(r, d))
            case SVar(ix):
                if ix == d:
                    if not repl_is_sig:
                        raise CoreError("external term substituted for a signature variable")
                    return weaken(repl, d)
                return SVar(ix - 1) if ix > d else x
            case SApp(f, a):
                return SApp(go(f, d), go(a, d))
            case SAppExt(f, a):
                return SAppExt(go(f, d), tm(a, d))
            case SAppInf(f, a):
                return SAppInf(go(f, d), tm(a, d))
            case SPiInf(n, dm, c):
                return SPiInf(n, tm(dm, d), go(c, d + 1))
            case SEqId(a, l, r):
                return SEqId(go(a, d), go(l, d), go(r, d))
            case SRefl(a, s):
                return SRefl(go(a, d), go(s, d))
            case SReflU(s):
                return SReflU(go(s, d))
            case SJ(a, t, m, b, e, q, names):
                return SJ(go(a, d), go(t, d), go(m, d + 2), go(b, d), go(e, d), go(q, d), names)
            case SJBeta(a, t, m, b, names):
                return SJBeta(go(a, d), go(t, d), go(m, d + 2), go(b, d), names)
            case SJU(a, m, b, e, q, names):
                return SJU(go(a, d), go(m, d + 2), go(b, d), go(e, d), go(q, d), names)
            case SJBetaU(a, m, b, names):
                return SJBetaU(go(a, d), go(m, d + 2), go(b, d), names)
        raise CoreError(f"substitute: unhandled node {x!r}")

    return go(x, depth)


def inst_motive2(motive: Node, endpoint: SigTerm, path: SigTerm) -> Node:
    """Instantiate a two-binder motive (endpoint at index 1, path at index 0)."""
    return substitute(substitute(motive, 0, weaken(path, 1)), 0, endpoint)


def alpha_eq(a: Node, b: Node) -> bool:
    """Alpha-equivalence; structural equality modulo binder display names.

    Display-name fields are excluded from dataclass comparison, so this is
    plain ``==`` — kept as a named operation because tests and the golden
    comparison speak in terms of alpha-equivalence.
    """
    return a == b


# ---------------------------------------------------------------------------
# Debug printing


def show_sig(x: Node, names: tuple[str, ...] = ()) -> str:
    from .target import show as tm_show

    def go(x, ns, prec):
        def wrap(s, p):
            return f"({s})" if prec > p else s

        match x:
            case SUniv():
                return "U"
            case SEl(t):
                return wrap(f"El {go(t, ns, 2)}", 1)
            case SPiInd(n, d, c):
                return wrap(f"({n} : {go(d, ns, 0)}) → {go(c, [n] + ns, 0)}", 0)
            case SPiExt(n, d, c):
                return wrap(f"({n} ∈ {tm_show(d, tuple(ns))}) → {go(c, [n] + ns, 0)}", 0)
            case SEqU(l, r):
                return wrap(f"{go(l, ns, 1)} =U {go(r, ns, 1)}", 0)
            case SVar(ix):
                return ns[ix] if ix < len(ns) else f"#{ix}"
            case SApp(f, a):
                return wrap(f"{go(f, ns, 1)} {go(a, ns, 2)}", 1)
            case SAppExt(f, a) | SAppInf(f, a):
                return wrap(f"{go(f, ns, 1)} {tm_show(a, tuple(ns))}", 1)
            case SPiInf(n, d, c):
                return wrap(f"({n} ∈ {tm_show(d, tuple(ns))}) → {go(c, [n] + ns, 0)}", 0)
            case SEqId(a, l, r):
                return wrap(f"{go(l, ns, 1)} ={go(a, ns, 2)} {go(r, ns, 1)}", 0)
            case SRefl(_, s):
                return wrap(f"refl {go(s, ns, 2)}", 1)
            case SReflU(s):
                return wrap(f"refl {go(s, ns, 2)}", 1)
            case SJ(a, t, m, b, e, q, (nx, nz)):
                return wrap(
                    f"J ({nx} {nz}. {go(m, [nz, nx] + ns, 0)}) {go(b, ns, 2)} {go(q, ns, 2)}", 1
                )
            case SJBeta(a, t, m, b, (nx, nz)):
                return wrap(f"Jbeta ({nx} {nz}. {go(m, [nz, nx] + ns, 0)}) {go(t, ns, 2)} {go(b, ns, 2)}", 1)
            case SJU(a, m, b, e, q, (nx, nz)):
                return wrap(f"J ({nx} {nz}. {go(m, [nz, nx] + ns, 0)}) {go(b, ns, 2)} {go(q, ns, 2)}", 1)
            case SJBetaU(a, m, b, (nx, nz)):
                return wrap(f"Jbeta ({nx} {nz}. {go(m, [nz, nx] + ns, 0)}) {go(a, ns, 2)} {go(b, ns, 2)}", 1)
        if isinstance(x, Tm):
            return tm_show(x, tuple(ns))
        return repr(x)

    return go(x, list(names), 0)
