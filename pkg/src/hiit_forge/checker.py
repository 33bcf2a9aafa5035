"""Bidirectional checker: surface signatures to core telescopes.

Declarations are checked in order against the judgment forms of the
signature language: context formation (``assume`` entries and declarations),
signature types, and signature terms.  Arrows are classified by what their
domain elaborates to:

* the domain is a small-sort code      -> inductive product,
* the domain is an external type       -> infinitary-product *code* when the
  codomain is itself a small-sort code, external product otherwise.

Small equalities (between elements of a small sort) and large equalities
(between small-sort codes) are told apart by the inferred type of the left
endpoint; ``Id`` makes the index explicit.

Conversion at this level is syntactic (alpha-equivalence): the signature
language has no binders with bodies and no definitions, so nothing computes
— in particular the eliminator's computation rule holds only as the
propositional witness term, never as a conversion.

Failures are per-declaration: a declaration that does not check becomes a
poisoned entry, later references to it are reported as depending on a failed
declaration, and checking continues.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from . import target
from .core import (
    Entry,
    ExtEntry,
    SEl,
    SEqId,
    SEqU,
    SJ,
    SJBeta,
    SJBetaU,
    SJU,
    SPiExt,
    SPiInd,
    SPiInf,
    SRefl,
    SReflU,
    SApp,
    SAppExt,
    SAppInf,
    SigContext,
    SigEntry,
    SigTerm,
    SigType,
    SUniv,
    SVar,
    alpha_eq,
    inst_motive2,
    show_sig,
    substitute,
    weaken,
)
from .diagnostics import Diagnostic, Span
from .surface import (
    Assumption,
    EApp,
    EComp,
    EEq,
    EId,
    EJ,
    EJBeta,
    EName,
    EPi,
    ERefl,
    ESort,
    SurfaceDecl,
    SurfaceExpr,
    SurfaceModule,
)
from .target import TEq, TPi, TType, TVar, Tm

_GLOB = target.prelude_globals()

# Maximum universe for assumption types: Type0 assumptions cover first-order
# parameters, Type1 admits assumed type families such as `Set -> Set`.
_ASSUME_MAX_SORT = 1


class CheckError(Exception):
    def __init__(self, tag: str, message: str, span: Optional[Span] = None):
        super().__init__(message)
        self.tag = tag
        self.message = message
        self.span = span


# When several classification attempts fail, report the most structural
# failure: zone violations beat generic resolution errors, and the
# small-domain/external-codomain mismatch beats both.
_RANK = {"PI-EXT": 3, "PI-IND": 3, "EXTERNAL": 2}


def _pick(*errs: Optional[CheckError]) -> CheckError:
    best = None
    for e in errs:
        if e is None:
            continue
        if best is None or _RANK.get(e.tag, 1) > _RANK.get(best.tag, 1):
            best = e
    assert best is not None
    return best


@dataclass(frozen=True)
class PoisonedEntry:
    name: str = field(compare=False)


@dataclass
class CheckedModule:
    context: SigContext
    n_ext: int
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return not self.diagnostics


def convert(a, b) -> bool:
    """Signature-level conversion: syntactic up to display names."""
    return alpha_eq(a, b)


class _Elab:
    def __init__(self) -> None:
        self.ctx: SigContext = []

    # -- context plumbing ----------------------------------------------------

    def kctx(self) -> list[Optional[Tm]]:
        return [e.ty if isinstance(e, ExtEntry) else None for e in self.ctx]

    def resolve(self, name: str, span: Optional[Span]) -> tuple[int, Entry]:
        for pos in range(len(self.ctx) - 1, -1, -1):
            e = self.ctx[pos]
            if e.name == name:
                if isinstance(e, PoisonedEntry):
                    raise CheckError(
                        "VAR", f"'{name}' refers to a declaration that failed to check", span
                    )
                return len(self.ctx) - 1 - pos, e
        raise CheckError("VAR", f"unbound name '{name}'", span)

    def _attempt(self, thunk):
        depth = len(self.ctx)
        try:
            return thunk(), None
        except CheckError as err:
            del self.ctx[depth:]
            return None, err

    # -- external zone ---------------------------------------------------------

    def ext_expr(self, e: SurfaceExpr) -> Tm:
        """Elaborate a surface expression in an external position."""
        match e:
            case ESort("Set"):
                return TType(0)
            case ESort("U"):
                raise CheckError(
                    "EXTERNAL", "the universe of small sorts cannot appear in an external position", e.span
                )
            case EName(n):
                ix, entry = self.resolve(n, e.span)
                if isinstance(entry, SigEntry):
                    raise CheckError(
                        "EXTERNAL",
                        f"the signature declaration '{n}' cannot appear in an external position",
                        e.span,
                    )
                return TVar(ix)
            case EPi(x, d, c):
                dt = self.ext_expr(d)
                self.ctx.append(ExtEntry(x or "_", dt))
                try:
                    ct = self.ext_expr(c)
                finally:
                    self.ctx.pop()
                return TPi(x or "_", dt, ct)
            case EApp(f, a):
                return target.TApp(self.ext_expr(f), self.ext_expr(a))
            case EEq(l, r):
                lt = self.ext_expr(l)
                ity = self._kernel_infer(lt, e.span)
                rt = self.ext_expr(r)
                return TEq(ity, lt, rt)
            case EId(i, l, r):
                return TEq(self.ext_expr(i), self.ext_expr(l), self.ext_expr(r))
        raise CheckError(
            "EXTERNAL", "this expression form is not available in external positions", e.span
        )

    def _kernel_infer(self, t: Tm, span: Optional[Span]) -> Tm:
        try:
            return target.tt_infer(self.kctx(), _GLOB, t)
        except target.KernelError as err:
            raise CheckError("EXTERNAL", f"ill-typed external term: {err}", span)

    def ext_type(self, e: SurfaceExpr, max_sort: int) -> Tm:
        t = self.ext_expr(e)
        try:
            sort = target.infer_sort(self.kctx(), _GLOB, t)
        except target.KernelError as err:
            raise CheckError("EXTERNAL", f"not an external type: {err}", e.span)
        if sort > max_sort:
            raise CheckError(
                "EXTERNAL",
                f"external type lives in Type{sort}, above the allowed Type{max_sort}",
                e.span,
            )
        return t

    def ext_term_checked(self, e: SurfaceExpr, expected: Tm) -> Tm:
        t = self.ext_expr(e)
        try:
            target.tt_check(self.kctx(), _GLOB, t, expected)
        except target.KernelError as err:
            raise CheckError("EXTERNAL", f"external argument does not fit: {err}", e.span)
        return t

    # -- signature terms -------------------------------------------------------

    def u_term(self, e: SurfaceExpr) -> SigTerm:
        tm, ty = self.sig_term_infer(e)
        if not alpha_eq(ty, SUniv()):
            raise CheckError(
                "UNIV",
                f"expected a small-sort code, found a term of type {show_sig(ty, self._names())}",
                e.span,
            )
        return tm

    def _names(self) -> tuple[str, ...]:
        return tuple(en.name for en in reversed(self.ctx))

    def sig_term_infer(self, e: SurfaceExpr) -> tuple[SigTerm, SigType]:
        match e:
            case EName(n):
                ix, entry = self.resolve(n, e.span)
                if isinstance(entry, ExtEntry):
                    raise CheckError(
                        "VAR",
                        f"'{n}' is an external assumption; it is not a signature term",
                        e.span,
                    )
                return SVar(ix), weaken(entry.ty, ix + 1)
            case EApp(f, a):
                ft, fty = self.sig_term_infer(f)
                match fty:
                    case SPiInd(_, dom, cod):
                        at = self.sig_term_check(a, SEl(dom), "PI-IND")
                        return SApp(ft, at), substitute(cod, 0, at)
                    case SPiExt(_, dom, cod):
                        at = self.ext_term_checked(a, dom)
                        return SAppExt(ft, at), substitute(cod, 0, at)
                    case SEl(SPiInf(_, dom, codcode)):
                        at = self.ext_term_checked(a, dom)
                        return SAppInf(ft, at), SEl(substitute(codcode, 0, at))
                    case _:
                        raise CheckError(
                            "PI-IND",
                            f"cannot apply a term of type {show_sig(fty, self._names())}",
                            e.span,
                        )
            case EEq(l, r):
                lt, lty = self.sig_term_infer(l)
                match lty:
                    case SEl(a):
                        rt = self.sig_term_check(r, SEl(a), "EQ-ID")
                        return SEqId(a, lt, rt), SUniv()
                    case SUniv():
                        raise CheckError(
                            "EQ-U",
                            "an equality of small-sort codes is a large type, not a code",
                            e.span,
                        )
                    case _:
                        raise CheckError(
                            "EQ-ID",
                            f"equality endpoints must inhabit a small sort, found {show_sig(lty, self._names())}",
                            e.span,
                        )
            case EId(i, l, r):
                if i == ESort("U"):
                    raise CheckError(
                        "EQ-U", "an equality of small-sort codes is a large type, not a code", e.span
                    )
                a, err = self._attempt(lambda: self.u_term(i))
                if a is None:
                    raise CheckError(
                        "EQ-ID",
                        f"the index of a small equality must be a small-sort code ({err.message})",
                        i.span or e.span,
                    )
                lt = self.sig_term_check(l, SEl(a), "EQ-ID")
                rt = self.sig_term_check(r, SEl(a), "EQ-ID")
                return SEqId(a, lt, rt), SUniv()
            case EComp(l, r):
                lt, lty = self.sig_term_infer(l)
                match lty:
                    case SEl(SEqId(a, t, u)):
                        pass
                    case _:
                        raise CheckError(
                            "J",
                            f"composition needs a small equality proof on the left, found {show_sig(lty, self._names())}",
                            l.span or e.span,
                        )
                rt, rty = self.sig_term_infer(r)
                match rty:
                    case SEl(SEqId(a2, u2, v)):
                        pass
                    case _:
                        raise CheckError(
                            "J",
                            f"composition needs a small equality proof on the right, found {show_sig(rty, self._names())}",
                            r.span or e.span,
                        )
                if not (alpha_eq(a, a2) and alpha_eq(u, u2)):
                    raise CheckError(
                        "J",
                        "composition endpoints do not line up: "
                        f"{show_sig(lty, self._names())} then {show_sig(rty, self._names())}",
                        e.span,
                    )
                motive = SEqId(weaken(a, 2), weaken(t, 2), SVar(1))
                return (
                    SJ(a, u, motive, lt, v, rt, ("x", "z")),
                    SEl(SEqId(a, t, v)),
                )
            case EJ(names, m, pr, q):
                qt, qty = self.sig_term_infer(q)
                match qty:
                    case SEl(SEqId(a, t, u)):
                        p = self._motive_small(names, m, a, t)
                        base_ty = SEl(inst_motive2(p, t, SRefl(a, t)))
                        prt = self.sig_term_check(pr, base_ty, "J")
                        return (
                            SJ(a, t, p, prt, u, qt, names),
                            SEl(inst_motive2(p, u, qt)),
                        )
                    case SEqU(a, b):
                        p = self._motive_large(names, m, a)
                        base_ty = SEl(inst_motive2(p, a, SReflU(a)))
                        prt = self.sig_term_check(pr, base_ty, "J")
                        return (
                            SJU(a, p, prt, b, qt, names),
                            SEl(inst_motive2(p, b, qt)),
                        )
                    case _:
                        raise CheckError(
                            "J",
                            f"the eliminator needs an equality proof, found {show_sig(qty, self._names())}",
                            q.span or e.span,
                        )
            case EJBeta(names, m, point, pr):
                pt, pty = self.sig_term_infer(point)
                match pty:
                    case SEl(a):
                        p = self._motive_small(names, m, a, pt)
                        rfl = SRefl(a, pt)
                        base_ty = SEl(inst_motive2(p, pt, rfl))
                        prt = self.sig_term_check(pr, base_ty, "JBETA")
                        red = SJ(a, pt, p, prt, pt, rfl, names)
                        return (
                            SJBeta(a, pt, p, prt, names),
                            SEl(SEqId(inst_motive2(p, pt, rfl), red, prt)),
                        )
                    case SUniv():
                        p = self._motive_large(names, m, pt)
                        rfl = SReflU(pt)
                        base_ty = SEl(inst_motive2(p, pt, rfl))
                        prt = self.sig_term_check(pr, base_ty, "JBETA")
                        red = SJU(pt, p, prt, pt, rfl, names)
                        return (
                            SJBetaU(pt, p, prt, names),
                            SEl(SEqId(inst_motive2(p, pt, rfl), red, prt)),
                        )
                    case _:
                        raise CheckError(
                            "JBETA",
                            f"the computation witness needs a point of a small sort or a code, found {show_sig(pty, self._names())}",
                            point.span or e.span,
                        )
            case EPi(x, d, c):
                return self._pi_inf_code(e, x, d, c)
            case ERefl():
                raise CheckError(
                    "EQ-ID", "cannot infer the endpoints of refl here; use Id to annotate", e.span
                )
            case ESort(kw):
                raise CheckError("UNIV", f"'{kw}' is not a signature term", e.span)
        raise CheckError("VAR", "this expression is not a signature term", e.span)

    def _motive_small(
        self, names: tuple[str, str], m: SurfaceExpr, a: SigTerm, t: SigTerm
    ) -> SigTerm:
        nx, nz = names
        self.ctx.append(SigEntry(nx, SEl(a)))
        self.ctx.append(SigEntry(nz, SEl(SEqId(weaken(a, 1), weaken(t, 1), SVar(0)))))
        try:
            return self.u_term(m)
        finally:
            self.ctx.pop()
            self.ctx.pop()

    def _motive_large(self, names: tuple[str, str], m: SurfaceExpr, a: SigTerm) -> SigTerm:
        nx, nz = names
        self.ctx.append(SigEntry(nx, SUniv()))
        self.ctx.append(SigEntry(nz, SEqU(weaken(a, 1), SVar(0))))
        try:
            return self.u_term(m)
        finally:
            self.ctx.pop()
            self.ctx.pop()

    def _pi_inf_code(self, e, x, d, c) -> tuple[SigTerm, SigType]:
        dt, ext_err = self._attempt(lambda: self.ext_type(d, 0))
        if dt is not None:
            self.ctx.append(ExtEntry(x or "_", dt))
            try:
                ccode = self.u_term(c)
            finally:
                self.ctx.pop()
            return SPiInf(x or "_", dt, ccode), SUniv()
        small, _ = self._attempt(lambda: self.u_term(d))
        if small is not None:
            cod_ext, _ = self._attempt(lambda: self.ext_expr(c))
            if cod_ext is not None:
                raise CheckError(
                    "PI-EXT",
                    "a small type cannot be the domain of a function into an external type",
                    e.span,
                )
            raise CheckError(
                "PI-IND",
                "a function out of a small sort is a signature type, not a small-sort code "
                "(inductive arguments only nest to the right)",
                e.span,
            )
        raise _pick(ext_err)

    def sig_term_check(self, e: SurfaceExpr, expected: SigType, tag: str) -> SigTerm:
        if isinstance(e, ERefl):
            match expected:
                case SEl(SEqId(a, l, r)):
                    if not alpha_eq(l, r):
                        raise CheckError(
                            tag if tag != "PI-IND" else "EQ-ID",
                            "refl endpoints differ: "
                            f"{show_sig(l, self._names())} vs {show_sig(r, self._names())}",
                            e.span,
                        )
                    return SRefl(a, l)
                case SEqU(a, b):
                    if not alpha_eq(a, b):
                        raise CheckError(
                            "EQ-U",
                            "refl endpoints differ: "
                            f"{show_sig(a, self._names())} vs {show_sig(b, self._names())}",
                            e.span,
                        )
                    return SReflU(a)
                case _:
                    raise CheckError(
                        tag,
                        f"refl needs an equality type, expected {show_sig(expected, self._names())}",
                        e.span,
                    )
        tm, ty = self.sig_term_infer(e)
        if not alpha_eq(ty, expected):
            raise CheckError(
                tag,
                f"expected {show_sig(expected, self._names())}, "
                f"found a term of type {show_sig(ty, self._names())}",
                e.span,
            )
        return tm

    # -- signature types -------------------------------------------------------

    def sig_type(self, e: SurfaceExpr) -> SigType:
        match e:
            case ESort("U"):
                return SUniv()
            case ESort("Set"):
                raise CheckError(
                    "UNIV",
                    "'Set' is the external universe; signature sorts are declared with 'U'",
                    e.span,
                )
            case EPi(x, d, c):
                return self._classify_arrow(e, x, d, c)
            case EEq(l, r):
                got, err = self._attempt(lambda: self.sig_term_infer(l))
                if got is None:
                    ext, ext_err = self._attempt(lambda: self.ext_expr(e))
                    if ext is not None:
                        raise CheckError(
                            "EXTERNAL",
                            "an equality of external terms may only appear as a binder domain, "
                            "not as a declaration type",
                            e.span,
                        )
                    raise _pick(err, ext_err)
                lt, lty = got
                match lty:
                    case SEl(a):
                        rt = self.sig_term_check(r, SEl(a), "EQ-ID")
                        return SEl(SEqId(a, lt, rt))
                    case SUniv():
                        rt = self.u_term(r)
                        return SEqU(lt, rt)
                    case _:
                        raise CheckError(
                            "EQ-ID",
                            f"equality endpoints must inhabit a small sort, found {show_sig(lty, self._names())}",
                            e.span,
                        )
            case EId(i, l, r):
                if i == ESort("U"):
                    return SEqU(self.u_term(l), self.u_term(r))
                return SEl(self.u_term(e))
        return SEl(self.u_term(e))

    def _classify_arrow(self, e, x, d, c) -> SigType:
        small, small_err = self._attempt(lambda: self.u_term(d))
        if small is not None:
            self.ctx.append(SigEntry(x or "_", SEl(small)))
            try:
                cod = self.sig_type(c)
            finally:
                self.ctx.pop()
            return SPiInd(x or "_", small, cod)
        dt, ext_err = self._attempt(lambda: self.ext_type(d, 0))
        if dt is not None:
            self.ctx.append(ExtEntry(x or "_", dt))
            try:
                ccode, _ = self._attempt(lambda: self.u_term(c))
                if ccode is not None:
                    return SEl(SPiInf(x or "_", dt, ccode))
                cod = self.sig_type(c)
            finally:
                self.ctx.pop()
            return SPiExt(x or "_", dt, cod)
        raise _pick(small_err, ext_err)

    # -- module ------------------------------------------------------------------

    def run(self, mod: SurfaceModule) -> CheckedModule:
        diags: list[Diagnostic] = []

        def dup(name: str) -> bool:
            return any(en.name == name for en in self.ctx)

        for a in mod.assumptions:
            if dup(a.name):
                diags.append(
                    Diagnostic("CTX", f"duplicate name '{a.name}' in the telescope", a.span)
                )
                self.ctx.append(PoisonedEntry(a.name))
                continue
            try:
                ty = self.ext_type(a.ty, _ASSUME_MAX_SORT)
                self.ctx.append(ExtEntry(a.name, ty))
            except CheckError as err:
                diags.append(Diagnostic(err.tag, err.message, err.span or a.span))
                self.ctx.append(PoisonedEntry(a.name))
        n_ext = len(self.ctx)
        for d in mod.decls:
            if dup(d.name):
                diags.append(
                    Diagnostic("CTX", f"duplicate name '{d.name}' in the telescope", d.span)
                )
                self.ctx.append(PoisonedEntry(d.name))
                continue
            try:
                ty = self.sig_type(d.ty)
                self.ctx.append(SigEntry(d.name, ty))
            except CheckError as err:
                diags.append(Diagnostic(err.tag, err.message, err.span or d.span))
                self.ctx.append(PoisonedEntry(d.name))
        return CheckedModule(self.ctx, n_ext, diags)


def elaborate_module(mod: SurfaceModule) -> CheckedModule:
    return _Elab().run(mod)
