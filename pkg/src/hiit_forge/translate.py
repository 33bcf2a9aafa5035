"""The four syntactic translations over checked signatures.

For a signature telescope (external assumptions followed by declarations)
this module computes closed target-theory terms for:

* the algebra type         ``-A``   (what a model of the signature is),
* the displayed algebras   ``-D``   (predicates/families over a model),
* the homomorphisms        ``-M``   (maps between two models),
* the sections             ``-S``   (dependent maps from a model into a
                                     displayed algebra over it),

together with the derived statements of induction, recursion, and homotopy
initiality for a postulated model.

Every construction is a single structural pass driven by an environment
that maps each telescope entry (and each binder crossed along the way) to
its translated instance parts: one target term for an external entry, and
per-translation tuples for declaration entries (``(a,)`` / ``(a, d)`` /
``(a0, a1, m)`` / ``(a, d, s)``).  Equality eliminators translate to towers
of target-level ``J`` whose motives are produced by re-running the
translation of the source motive with selected environment slots replaced
by the tower's binder variables; the kernel checks every such tower, so the
test suite validates each clause against the typing it must satisfy.

External assumptions become body-less constants (named with a ``%`` prefix
so they can never collide with prelude names); headers and derived types
are closed terms over those constants.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Optional, Union

from .core import (
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
    inst_motive2,
    substitute,
    weaken,
)
from .target import (
    Globals,
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
    TType,
    TUnit,
    TTt,
    TVar,
    Tm,
    infer_sort,
    prelude_globals,
    subst_top,
    tapp,
    tarr,
    tj,
    tlam,
    tpi,
    tsig,
    tt_check,
    tt_infer,
)

if TYPE_CHECKING:
    from .checker import CheckedModule

C_TR = TConst("tr")
C_COE = TConst("coe")
C_AP = TConst("ap")
C_APD = TConst("apd")
C_COMPOSE = TConst("compose")
C_INVERSE = TConst("inverse")
C_INV = TConst("inv")
C_ISCONTR = TConst("isContr")


def app_beta(f: Tm, a: Tm) -> Tm:
    """Apply, contracting the administrative redex when ``f`` is a lambda."""
    if isinstance(f, TLam):
        return subst_top(f.body, a)
    return TApp(f, a)


def apps_beta(f: Tm, *args: Tm) -> Tm:
    for a in args:
        f = app_beta(f, a)
    return f


@dataclass(frozen=True)
class EnvEntry:
    """Translated instances for one telescope entry or crossed binder.

    ``src`` is the entry's source type, relative to its own position.
    ``parts`` carries the instance terms used by the active translation;
    unused slots are ``None`` so that a mistaken access fails loudly.
    """

    src: Union[SigType, Tm]
    is_ext: bool
    parts: tuple[Optional[Tm], ...]


Env = list  # list[EnvEntry]


def _ext(src: Tm, value: Tm) -> EnvEntry:
    return EnvEntry(src, True, (value,))


def _sig(src: SigType, *parts: Optional[Tm]) -> EnvEntry:
    return EnvEntry(src, False, parts)


def rebase(t: Tm, env: Env, depth: int = 0) -> Tm:
    """Map telescope indices inside an embedded target term to their
    translated values (external entries only; declaration entries cannot
    occur in external positions).  Locally bound indices are kept."""
    match t:
        case TVar(ix):
            if ix < depth:
                return t
            entry = env[len(env) - 1 - (ix - depth)]
            assert entry.is_ext, "declaration index inside an external term"
            return entry.parts[0]
        case TType() | TConst() | TUnit() | TTt():
            return t
        case TPi(x, dom, cod):
            return TPi(x, rebase(dom, env, depth), rebase(cod, env, depth + 1))
        case TLam(x, body):
            return TLam(x, rebase(body, env, depth + 1))
        case TApp(f, a):
            return TApp(rebase(f, env, depth), rebase(a, env, depth))
        case TSigma(x, fst, snd):
            return TSigma(x, rebase(fst, env, depth), rebase(snd, env, depth + 1))
        case TPair(a, b):
            return TPair(rebase(a, env, depth), rebase(b, env, depth))
        case TProj1(p):
            return TProj1(rebase(p, env, depth))
        case TProj2(p):
            return TProj2(rebase(p, env, depth))
        case TEq(ty, l, r):
            return TEq(rebase(ty, env, depth), rebase(l, env, depth), rebase(r, env, depth))
        case TRefl(s):
            return TRefl(rebase(s, env, depth))
        case TJ(ty, bp, mot, base, ep, eq, names):
            return TJ(
                rebase(ty, env, depth),
                rebase(bp, env, depth),
                rebase(mot, env, depth + 2),
                rebase(base, env, depth),
                rebase(ep, env, depth),
                rebase(eq, env, depth),
                names,
            )
    raise AssertionError(f"rebase: unhandled {t!r}")


def src_type(t: SigTerm, env: Env) -> SigType:
    """Source type of a checked signature term, relative to ``len(env)``."""
    n = len(env)
    match t:
        case SVar(k):
            entry = env[n - 1 - k]
            assert not entry.is_ext
            return weaken(entry.src, k + 1)
        case SApp(f, u):
            fty = src_type(f, env)
            assert isinstance(fty, SPiInd)
            return substitute(fty.cod, 0, u)
        case SAppExt(f, v):
            fty = src_type(f, env)
            assert isinstance(fty, SPiExt)
            return substitute(fty.cod, 0, v)
        case SAppInf(f, v):
            fty = src_type(f, env)
            assert isinstance(fty, SEl) and isinstance(fty.tm, SPiInf)
            return SEl(substitute(fty.tm.cod, 0, v))
        case SEqId() | SPiInf():
            return SUniv()
        case SRefl(a, s):
            return SEl(SEqId(a, s, s))
        case SReflU(a):
            return SEqU(a, a)
        case SJ(a, _t, p, _pr, u, e, _):
            return SEl(inst_motive2(p, u, e))
        case SJU(a, p, _pr, b, e, _):
            return SEl(inst_motive2(p, b, e))
        case SJBeta(a, pt, p, pr, names):
            rfl = SRefl(a, pt)
            red = SJ(a, pt, p, pr, pt, rfl, names)
            return SEl(SEqId(inst_motive2(p, pt, rfl), red, pr))
        case SJBetaU(a, p, pr, names):
            rfl = SReflU(a)
            red = SJU(a, p, pr, a, rfl, names)
            return SEl(SEqId(inst_motive2(p, a, rfl), red, pr))
    raise AssertionError(f"src_type: unhandled {t!r}")


def _el_code(t: SigTerm, env: Env) -> SigTerm:
    ty = src_type(t, env)
    assert isinstance(ty, SEl)
    return ty.tm


# --------------------------------------------------------------------------
# Algebra translation (-A)
# --------------------------------------------------------------------------


def tm_A(t: SigTerm, env: Env, side: int = 0) -> Tm:
    """Algebra translation of a term.  ``side`` selects which algebra
    instance a declaration entry refers to (both exist only while the
    homomorphism translation is running; otherwise it is 0)."""
    match t:
        case SVar(k):
            entry = env[len(env) - 1 - k]
            return entry.parts[0] if entry.is_ext else entry.parts[side]
        case SApp(f, u):
            return app_beta(tm_A(f, env, side), tm_A(u, env, side))
        case SAppExt(f, v) | SAppInf(f, v):
            return app_beta(tm_A(f, env, side), rebase(v, env))
        case SPiInf(x, dom, cod):
            dom_t = rebase(dom, env)
            return tpi(x, dom_t, lambda v: tm_A(cod, env + [_ext(dom, v)], side))
        case SEqId(a, l, r):
            return TEq(tm_A(a, env, side), tm_A(l, env, side), tm_A(r, env, side))
        case SRefl(_a, s):
            return TRefl(tm_A(s, env, side))
        case SReflU(a):
            return TRefl(tm_A(a, env, side))
        case SJ(a, bp, p, pr, ep, eq, names):
            a_t = tm_A(a, env, side)
            return tj(
                a_t,
                tm_A(bp, env, side),
                lambda vx, vz: tm_A(p, _jenv4_A(env, a, bp, vx, vz, side), side),
                tm_A(pr, env, side),
                tm_A(ep, env, side),
                tm_A(eq, env, side),
                names,
            )
        case SJU(a, p, pr, ep, eq, names):
            return tj(
                TType(0),
                tm_A(a, env, side),
                lambda vx, vz: tm_A(p, _jenv5_A(env, a, vx, vz, side), side),
                tm_A(pr, env, side),
                tm_A(ep, env, side),
                tm_A(eq, env, side),
                names,
            )
        case SJBeta(_a, _pt, _p, pr, _names):
            return TRefl(tm_A(pr, env, side))
        case SJBetaU(_a, _p, pr, _names):
            return TRefl(tm_A(pr, env, side))
    raise AssertionError(f"tm_A: unhandled {t!r}")


def _mk_parts(side_count: int, slot: int, value: Tm) -> tuple[Optional[Tm], ...]:
    parts: list[Optional[Tm]] = [None] * side_count
    parts[slot] = value
    return tuple(parts)


def _jenv4_A(env: Env, a: SigTerm, bp: SigTerm, vx: Tm, vz: Tm, side: int) -> Env:
    """Environment for a small-equality eliminator motive under -A: the two
    motive binders become entries carrying only the selected algebra slot."""
    n = max(side + 1, 1)
    x_entry = _sig(SEl(a), *_mk_parts(n, side, vx))
    z_ty = SEl(SEqId(weaken(a, 1), weaken(bp, 1), SVar(0)))
    z_entry = _sig(z_ty, *_mk_parts(n, side, vz))
    return env + [x_entry, z_entry]


def _jenv5_A(env: Env, a: SigTerm, vx: Tm, vz: Tm, side: int) -> Env:
    n = max(side + 1, 1)
    x_entry = _sig(SUniv(), *_mk_parts(n, side, vx))
    z_entry = _sig(SEqU(weaken(a, 1), SVar(0)), *_mk_parts(n, side, vz))
    return env + [x_entry, z_entry]


def ty_A(A: SigType, env: Env, side: int = 0) -> Tm:
    match A:
        case SUniv():
            return TType(0)
        case SEl(a):
            return tm_A(a, env, side)
        case SPiInd(x, a, B):
            return tpi(
                x,
                tm_A(a, env, side),
                lambda v: ty_A(B, env + [_sig(SEl(a), *_mk_parts(max(side + 1, 1), side, v))], side),
            )
        case SPiExt(x, dom, B):
            return tpi(x, rebase(dom, env), lambda v: ty_A(B, env + [_ext(dom, v)], side))
        case SEqU(a, b):
            return TEq(TType(0), tm_A(a, env, side), tm_A(b, env, side))
    raise AssertionError(f"ty_A: unhandled {A!r}")


# --------------------------------------------------------------------------
# Displayed algebra translation (-D)
# --------------------------------------------------------------------------
#
# Environment entries carry (a, d); crossing an inductive binder x : El a
# introduces two target binders (the point and its displayed image).


def _tr(a_ty: Tm, fam: Tm, u: Tm, v: Tm, e: Tm, x: Tm) -> Tm:
    return tapp(C_TR, a_ty, fam, u, v, e, x)


def fam_app_D(a: SigTerm, env: Env, t: Tm, level: int) -> Tm:
    """The displayed family of a small-sort code, applied to a point.
    Structured codes produce their clause shape directly so no
    administrative redex is ever formed."""
    match a:
        case SEqId(c, l, r):
            cA = tm_A(c, env)
            return TEq(
                fam_app_D(c, env, tm_A(r, env), level),
                _tr(cA, tm_D(c, env, level), tm_A(l, env), tm_A(r, env), t, tm_D(l, env, level)),
                tm_D(r, env, level),
            )
        case SPiInf(x, dom, cod):
            dom_t = rebase(dom, env)
            return tpi(
                x,
                dom_t,
                lambda v: fam_app_D(cod, env + [_ext(dom, v)], TApp(t, v), level),
            )
        case _:
            return app_beta(tm_D(a, env, level), t)


def ty_D(A: SigType, env: Env, inst: Tm, level: int) -> Tm:
    """Type of the displayed component over the algebra instance ``inst``."""
    match A:
        case SUniv():
            return tarr(inst, TType(level))
        case SEl(a):
            return fam_app_D(a, env, inst, level)
        case SPiInd(x, a, B):
            return tpi(
                x,
                tm_A(a, env),
                lambda vx: tpi(
                    x + "ᵈ",
                    fam_app_D(a, env, vx, level),
                    lambda vd: ty_D(
                        B,
                        env + [_sig(SEl(a), vx, vd)],
                        app_beta(inst, vx),
                        level,
                    ),
                ),
            )
        case SPiExt(x, dom, B):
            return tpi(
                x,
                rebase(dom, env),
                lambda v: ty_D(B, env + [_ext(dom, v)], app_beta(inst, v), level),
            )
        case SEqU(a, b):
            fam = tlam("A", lambda v: tarr(v, TType(level)))
            return TEq(
                tarr(tm_A(b, env), TType(level)),
                _tr(TType(0), fam, tm_A(a, env), tm_A(b, env), inst, tm_D(a, env, level)),
                tm_D(b, env, level),
            )
    raise AssertionError(f"ty_D: unhandled {A!r}")


def tm_D(t: SigTerm, env: Env, level: int) -> Tm:
    match t:
        case SVar(k):
            entry = env[len(env) - 1 - k]
            return entry.parts[0] if entry.is_ext else entry.parts[1]
        case SApp(f, u):
            return apps_beta(tm_D(f, env, level), tm_A(u, env), tm_D(u, env, level))
        case SAppExt(f, v) | SAppInf(f, v):
            return app_beta(tm_D(f, env, level), rebase(v, env))
        case SEqId(_c, _l, _r):
            return tlam("e", lambda e: fam_app_D(t, env, e, level))
        case SPiInf(_x, _dom, _cod):
            return tlam("f", lambda f: fam_app_D(t, env, f, level))
        case SRefl(_a, s):
            return TRefl(tm_D(s, env, level))
        case SReflU(a):
            return TRefl(tm_D(a, env, level))
        case SJ(a, bp, p, pr, ep, eq, names):
            return _sj_D(env, a, bp, p, pr, ep, eq, names, level)
        case SJU(a, p, pr, ep, eq, names):
            return _sju_D(env, a, p, pr, ep, eq, names, level)
        case SJBeta(_a, _pt, _p, pr, _names):
            return TRefl(tm_D(pr, env, level))
        case SJBetaU(_a, _p, pr, _names):
            return TRefl(tm_D(pr, env, level))
    raise AssertionError(f"tm_D: unhandled {t!r}")


def _sj_D(
    env: Env,
    a: SigTerm,
    t: SigTerm,
    p: SigTerm,
    pr: SigTerm,
    u: SigTerm,
    e: SigTerm,
    names: tuple[str, str],
    level: int,
    *,
    tD: Optional[Tm] = None,
    uA: Optional[Tm] = None,
    uD: Optional[Tm] = None,
    eA: Optional[Tm] = None,
    eD: Optional[Tm] = None,
    prD: Optional[Tm] = None,
    pD_fn: Optional[Tm] = None,
) -> Tm:
    """Displayed translation of the small-equality eliminator: an outer ``J``
    over the displayed path, whose base is an inner ``J`` over the base path
    that re-runs the motive's displayed translation at transported slots.
    The keyword overrides let dependent constructions rebuild this tower
    with selected instance parts replaced by their own binder variables;
    ``pD_fn`` routes the motive's displayed family through a supplied
    function instead of re-running the translation."""
    aA = tm_A(a, env)
    aD = tm_D(a, env, level)
    tA = tm_A(t, env)
    tD = tm_D(t, env, level) if tD is None else tD
    uA = tm_A(u, env) if uA is None else uA
    uD = tm_D(u, env, level) if uD is None else uD
    eA = tm_A(e, env) if eA is None else eA
    eD = tm_D(e, env, level) if eD is None else eD
    prD = tm_D(pr, env, level) if prD is None else prD
    nx, nz = names

    def z_src() -> SigType:
        return SEl(SEqId(weaken(a, 1), weaken(t, 1), SVar(0)))

    def p_D(x_parts: tuple[Tm, Tm], z_parts: tuple[Tm, Tm], at: Tm) -> Tm:
        if pD_fn is not None:
            return app_beta(
                tapp(pD_fn, x_parts[0], x_parts[1], z_parts[0], z_parts[1]), at
            )
        env2 = env + [
            _sig(SEl(a), x_parts[0], x_parts[1]),
            _sig(z_src(), z_parts[0], z_parts[1]),
        ]
        return ty_D(SEl(p), env2, at, level)

    def jA(end: Tm, eq: Tm) -> Tm:
        return tj(
            aA,
            tA,
            lambda vx, vz: tm_A(p, _jenv4_A(env, a, t, vx, vz, 0)),
            tm_A(pr, env),
            end,
            eq,
            names,
        )

    def trD(end: Tm, path: Tm) -> Tm:
        return _tr(aA, aD, tA, end, path, tD)

    inner = tj(
        aA,
        tA,
        lambda vx, vz: p_D((vx, trD(vx, vz)), (vz, TRefl(trD(vx, vz))), jA(vx, vz)),
        prD,
        uA,
        eA,
        (nx, nz),
    )
    return tj(
        fam_app_D(a, env, uA, level),
        trD(uA, eA),
        lambda vy, vw: p_D((uA, vy), (eA, vw), jA(uA, eA)),
        inner,
        uD,
        eD,
        (nx + "ᵈ", nz + "ᵈ"),
    )


def _sju_D(
    env: Env,
    a: SigTerm,
    p: SigTerm,
    pr: SigTerm,
    b: SigTerm,
    e: SigTerm,
    names: tuple[str, str],
    level: int,
    *,
    aDf: Optional[Tm] = None,
    bA: Optional[Tm] = None,
    bD: Optional[Tm] = None,
    eA: Optional[Tm] = None,
    eD: Optional[Tm] = None,
    prD: Optional[Tm] = None,
) -> Tm:
    """Displayed translation of the code-equality eliminator: the same
    double-``J`` shape as the small case, one universe up."""
    aA = tm_A(a, env)
    aD = tm_D(a, env, level) if aDf is None else aDf
    bA = tm_A(b, env) if bA is None else bA
    bD = tm_D(b, env, level) if bD is None else bD
    eA = tm_A(e, env) if eA is None else eA
    eD = tm_D(e, env, level) if eD is None else eD
    prD = tm_D(pr, env, level) if prD is None else prD
    nx, nz = names
    fam = tlam("A", lambda v: tarr(v, TType(level)))

    def z_src() -> SigType:
        return SEqU(weaken(a, 1), SVar(0))

    def p_D(x_parts: tuple[Tm, Tm], z_parts: tuple[Tm, Tm], at: Tm) -> Tm:
        env2 = env + [
            _sig(SUniv(), x_parts[0], x_parts[1]),
            _sig(z_src(), z_parts[0], z_parts[1]),
        ]
        return ty_D(SEl(p), env2, at, level)

    def jA(end: Tm, eq: Tm) -> Tm:
        return tj(
            TType(0),
            aA,
            lambda vx, vz: tm_A(p, _jenv5_A(env, a, vx, vz, 0)),
            tm_A(pr, env),
            end,
            eq,
            names,
        )

    def trFam(end: Tm, path: Tm) -> Tm:
        return _tr(TType(0), fam, aA, end, path, aD)

    inner = tj(
        TType(0),
        aA,
        lambda vx, vz: p_D((vx, trFam(vx, vz)), (vz, TRefl(trFam(vx, vz))), jA(vx, vz)),
        prD,
        bA,
        eA,
        (nx, nz),
    )
    return tj(
        tarr(bA, TType(level)),
        trFam(bA, eA),
        lambda vy, vw: p_D((bA, vy), (eA, vw), jA(bA, eA)),
        inner,
        bD,
        eD,
        (nx + "ᵈ", nz + "ᵈ"),
    )


# --------------------------------------------------------------------------
# Homomorphism translation (-M)
# --------------------------------------------------------------------------
#
# Environment entries carry (a0, a1, m).  An inductive binder x : El a is
# contracted to the single binder x0, with x1 := a^M x0 and the path the
# reflexivity witness; dependent result types are then realigned by a
# target ``J`` whenever an application's argument carries its own path.


def _inverse(a_ty: Tm, t: Tm, u: Tm, p: Tm) -> Tm:
    return tapp(C_INVERSE, a_ty, t, u, p)


def _compose(a_ty: Tm, t: Tm, u: Tm, v: Tm, p: Tm, q: Tm) -> Tm:
    return tapp(C_COMPOSE, a_ty, t, u, v, p, q)


def _ap(a_ty: Tm, b_ty: Tm, f: Tm, u: Tm, v: Tm, e: Tm) -> Tm:
    return tapp(C_AP, a_ty, b_ty, f, u, v, e)


def _coe(a_ty: Tm, b_ty: Tm, e: Tm, x: Tm) -> Tm:
    return tapp(C_COE, a_ty, b_ty, e, x)


def _eqid_fwd(c: SigTerm, l: SigTerm, r: SigTerm, env: Env, e: Tm) -> Tm:
    """Action of a homomorphism on a small equality: the left-associated
    composite (l^M)⁻¹ · ap(c^M) e · r^M."""
    cA0 = tm_A(c, env, 0)
    cA1 = tm_A(c, env, 1)
    cM = tm_M(c, env)
    lA0, lA1, lM = tm_A(l, env, 0), tm_A(l, env, 1), tm_M(l, env)
    rA0, rA1, rM = tm_A(r, env, 0), tm_A(r, env, 1), tm_M(r, env)
    cm_l = app_beta(cM, lA0)
    cm_r = app_beta(cM, rA0)
    inner = _compose(
        cA1, lA1, cm_l, cm_r, _inverse(cA1, cm_l, lA1, lM), _ap(cA0, cA1, cM, lA0, rA0, e)
    )
    return _compose(cA1, lA1, cm_r, rA1, inner, rM)


def code_applied_M(a: SigTerm, env: Env, t0: Tm, t1: Tm) -> Tm:
    """The homomorphism constraint attached to a small-sort code, applied to
    instances on both sides: Eq(a^A1, a^M t0, t1), with structured codes
    expanded to their clause shapes directly."""
    match a:
        case SEqId(c, l, r):
            idx = TEq(tm_A(c, env, 1), tm_A(l, env, 1), tm_A(r, env, 1))
            return TEq(idx, _eqid_fwd(c, l, r, env, t0), t1)
        case SPiInf(x, dom, cod):
            dom_t = rebase(dom, env)
            pi1 = tpi(x, dom_t, lambda v: tm_A(cod, env + [_ext(dom, v)], 1))
            fwd = tlam(
                x, lambda v: app_beta(tm_M(cod, env + [_ext(dom, v)]), TApp(t0, v))
            )
            return TEq(pi1, fwd, t1)
        case _:
            return TEq(tm_A(a, env, 1), app_beta(tm_M(a, env), t0), t1)


def ty_M(A: SigType, env: Env, t0: Tm, t1: Tm) -> Tm:
    match A:
        case SUniv():
            return tarr(t0, t1)
        case SEl(a):
            return code_applied_M(a, env, t0, t1)
        case SPiInd(x, a, B):
            aM = tm_M(a, env)

            def body(v0: Tm) -> Tm:
                am_x = app_beta(aM, v0)
                env2 = env + [_sig(SEl(a), v0, am_x, TRefl(am_x))]
                return ty_M(B, env2, app_beta(t0, v0), app_beta(t1, am_x))

            return tpi(x, tm_A(a, env, 0), body)
        case SPiExt(x, dom, B):
            return tpi(
                x,
                rebase(dom, env),
                lambda v: ty_M(B, env + [_ext(dom, v)], app_beta(t0, v), app_beta(t1, v)),
            )
        case SEqU(a, b):
            aA0, aA1 = tm_A(a, env, 0), tm_A(a, env, 1)
            bA0, bA1 = tm_A(b, env, 0), tm_A(b, env, 1)
            aM, bM = tm_M(a, env), tm_M(b, env)
            lhs = tlam("x", lambda v: app_beta(bM, _coe(aA0, bA0, t0, v)))
            rhs = tlam("x", lambda v: _coe(aA1, bA1, t1, app_beta(aM, v)))
            return TEq(tarr(aA0, bA1), lhs, rhs)
    raise AssertionError(f"ty_M: unhandled {A!r}")


def tm_M(t: SigTerm, env: Env) -> Tm:
    match t:
        case SVar(k):
            entry = env[len(env) - 1 - k]
            return entry.parts[0] if entry.is_ext else entry.parts[2]
        case SApp(f, u):
            fty = src_type(f, env)
            assert isinstance(fty, SPiInd)
            x, a, B = fty.name, fty.dom, fty.cod
            uA0, uA1, uM = tm_A(u, env, 0), tm_A(u, env, 1), tm_M(u, env)
            f0 = tm_A(f, env, 0)
            f1 = tm_A(f, env, 1)
            base = app_beta(tm_M(f, env), uA0)
            return tj(
                tm_A(a, env, 1),
                app_beta(tm_M(a, env), uA0),
                lambda vy, vw: ty_M(
                    B,
                    env + [_sig(SEl(a), uA0, vy, vw)],
                    app_beta(f0, uA0),
                    app_beta(f1, vy),
                ),
                base,
                uA1,
                uM,
                (x, x + "ᵐ"),
            )
        case SAppExt(f, v):
            return app_beta(tm_M(f, env), rebase(v, env))
        case SAppInf(f, v):
            code = _el_code(f, env)
            assert isinstance(code, SPiInf)
            v_t = rebase(v, env)
            cod_inst = substitute(code.cod, 0, v)
            cA1 = tm_A(code, env, 1)
            bA1 = tm_A(cod_inst, env, 1)
            return _ap(
                cA1,
                bA1,
                tlam("f", lambda g: TApp(g, v_t)),
                app_beta(tm_M(code, env), tm_A(f, env, 0)),
                tm_A(f, env, 1),
                tm_M(f, env),
            )
        case SEqId(c, l, r):
            return tlam("e", lambda e: _eqid_fwd(c, l, r, env, e))
        case SPiInf(x, dom, cod):
            return tlam(
                "f",
                lambda g: tlam(
                    x,
                    lambda v: app_beta(tm_M(cod, env + [_ext(dom, v)]), TApp(g, v)),
                ),
            )
        case SRefl(a, s):
            aA1 = tm_A(a, env, 1)
            sA0, sA1, sM = tm_A(s, env, 0), tm_A(s, env, 1), tm_M(s, env)
            return tapp(C_INV, aA1, app_beta(tm_M(a, env), sA0), sA1, sM)
        case SReflU(a):
            aA0, aA1 = tm_A(a, env, 0), tm_A(a, env, 1)
            aM = tm_M(a, env)
            return TRefl(
                tlam("x", lambda v: app_beta(aM, _coe(aA0, aA0, TRefl(aA0), v)))
            )
        case SJ(a, bp, p, pr, ep, eq, names):
            return _sj_M(env, a, bp, p, pr, ep, eq, names)
        case SJU(a, p, pr, ep, eq, names):
            return _sju_M(env, a, p, pr, ep, eq, names)
        case SJBeta(a, pt, p, pr, names):
            return _sjbeta_M(env, a, pt, p, pr, names)
        case SJBetaU(a, p, pr, names):
            return _sjbetau_M(env, a, p, pr, names)
    raise AssertionError(f"tm_M: unhandled {t!r}")


def _x_parts0(v: Tm) -> tuple:
    return (v, None, None)


def _x_parts1(v: Tm) -> tuple:
    return (None, v, None)


def _zsrc_eqid(a: SigTerm, t: SigTerm) -> SigType:
    return SEl(SEqId(weaken(a, 1), weaken(t, 1), SVar(0)))


def _zsrc_equ(a: SigTerm) -> SigType:
    return SEqU(weaken(a, 1), SVar(0))


def _motive_cbs_M(env: Env, a: SigTerm, t: SigTerm, p: SigTerm, large: bool):
    """Callbacks that re-run the motive's translations at given slot values,
    for a small-equality motive (x : El a, z : El (t = x)) or, when
    ``large`` is set, a code-equality motive (x : U, z : a = x)."""
    x_src: SigType = SUniv() if large else SEl(a)
    z_src = _zsrc_equ(a) if large else _zsrc_eqid(a, t)

    def P(side: int, x: Tm, z: Tm) -> Tm:
        parts = _x_parts0 if side == 0 else _x_parts1
        env2 = env + [_sig(x_src, *parts(x)), _sig(z_src, *parts(z))]
        return tm_A(p, env2, side)

    def PMf(xp: tuple, zp: tuple) -> Tm:
        env2 = env + [_sig(x_src, *xp), _sig(z_src, *zp)]
        return tm_M(p, env2)

    return P, PMf


def _sj_M(
    env: Env,
    a: SigTerm,
    t: SigTerm,
    p: SigTerm,
    pr: SigTerm,
    u: SigTerm,
    e: SigTerm,
    names: tuple[str, str],
) -> Tm:
    P, PMf = _motive_cbs_M(env, a, t, p, large=False)
    parts = dict(
        tA1=tm_A(t, env, 1),
        tM=tm_M(t, env),
        uA1=tm_A(u, env, 1),
        uM=tm_M(u, env),
        eA1=tm_A(e, env, 1),
        eM=tm_M(e, env),
        prA1=tm_A(pr, env, 1),
        prM=tm_M(pr, env),
        P1=lambda x, z: P(1, x, z),
        PMf=PMf,
    )
    parts["uncP1"] = tlam(
        "x₁", lambda x1: tlam("z₁", lambda z1: parts["P1"](x1, z1))
    )
    parts["uncPM"] = _unc6(lambda x0, x1, xm, z0, z1, zm: PMf((x0, x1, xm), (z0, z1, zm)))
    return _jm_tower(env, a, t, p, pr, u, e, names, parts)


def _unc6(body: Callable[[Tm, Tm, Tm, Tm, Tm, Tm], Tm]) -> Tm:
    return tlam(
        "x₀",
        lambda x0: tlam(
            "x₁",
            lambda x1: tlam(
                "xᵐ",
                lambda xm: tlam(
                    "z₀",
                    lambda z0: tlam(
                        "z₁", lambda z1: tlam("zᵐ", lambda zm: body(x0, x1, xm, z0, z1, zm))
                    ),
                ),
            ),
        ),
    )


def _jm_tower(
    env: Env,
    a: SigTerm,
    t: SigTerm,
    p: SigTerm,
    pr: SigTerm,
    u: SigTerm,
    e: SigTerm,
    names: tuple[str, str],
    K: dict,
) -> Tm:
    """Homomorphism translation of the small-equality eliminator.

    Four nested target ``J``s, eliminating in order: the path action of the
    homomorphism on the scrutinee, the action on the endpoint, the base
    path, and the action on the base point.  The innermost layer quantifies
    over the motive's own translations so that eliminating the base-point
    action stays well-typed; its base collapses definitionally.  ``K``
    carries the instance parts, overridable so the computation witness can
    rebuild this tower with punched slots.
    """
    nx, nz = names
    aA0, aA1 = tm_A(a, env, 0), tm_A(a, env, 1)
    am = tm_M(a, env)
    tA0 = tm_A(t, env, 0)
    uA0 = tm_A(u, env, 0)
    eA0 = tm_A(e, env, 0)
    prA0 = tm_A(pr, env, 0)
    tA1, tM = K["tA1"], K["tM"]
    uA1, uM = K["uA1"], K["uM"]
    eA1, eM = K["eA1"], K["eM"]
    prA1, prM = K["prA1"], K["prM"]
    P1, PMf = K["P1"], K["PMf"]
    P0, _ = _motive_cbs_M(env, a, t, p, large=False)
    am_t = app_beta(am, tA0)
    am_u = app_beta(am, uA0)

    jA0 = tj(aA0, tA0, lambda vx, vz: P0(0, vx, vz), prA0, uA0, eA0, names)

    def jA1(end: Tm, eq: Tm) -> Tm:
        return tj(aA1, tA1, lambda vx, vz: P1(vx, vz), prA1, end, eq, names)

    def fwd_to(y3: Tm, w3: Tm, end: Tm, xm: Tm) -> Tm:
        """(t-action)⁻¹ · ap(point-action) w3 · xm, left-associated."""
        am_y = app_beta(am, y3)
        inner = _compose(
            aA1, tA1, am_t, am_y, _inverse(aA1, am_t, tA1, tM), _ap(aA0, aA1, am, tA0, y3, w3)
        )
        return _compose(aA1, tA1, am_y, end, inner, xm)

    def mot1(y1: Tm, w1: Tm) -> Tm:
        return TEq(
            P1(uA1, y1),
            app_beta(PMf((uA0, uA1, uM), (eA0, y1, w1)), jA0),
            jA1(uA1, y1),
        )

    def mot2(y2: Tm, w2: Tm) -> Tm:
        f2 = fwd_to(uA0, eA0, y2, w2)
        return TEq(
            P1(y2, f2),
            app_beta(PMf((uA0, y2, w2), (eA0, f2, TRefl(f2))), jA0),
            jA1(y2, f2),
        )

    def mot3(y3: Tm, w3: Tm) -> Tm:
        am_y = app_beta(am, y3)
        f3 = fwd_to(y3, w3, am_y, TRefl(am_y))
        jA0g = tj(aA0, tA0, lambda vx, vz: P0(0, vx, vz), prA0, y3, w3, names)
        return TEq(
            P1(am_y, f3),
            app_beta(PMf((y3, am_y, TRefl(am_y)), (w3, f3, TRefl(f3))), jA0g),
            jA1(am_y, f3),
        )

    def t_p1(y: Tm) -> Tm:
        return tpi(
            nx + "₁", aA1, lambda x1: tpi(nz + "₁", TEq(aA1, y, x1), lambda z1: TType(0))
        )

    def t_pm(y: Tm, w: Tm, p1: Tm) -> Tm:
        def zm_ty(x0, x1, xm, z0, z1):
            inner = _compose(
                aA1, y, am_t, app_beta(am, x0), _inverse(aA1, am_t, y, w), _ap(aA0, aA1, am, tA0, x0, z0)
            )
            return TEq(TEq(aA1, y, x1), _compose(aA1, y, app_beta(am, x0), x1, inner, xm), z1)

        return tpi(
            nx + "₀",
            aA0,
            lambda x0: tpi(
                nx + "₁",
                aA1,
                lambda x1: tpi(
                    nx + "ᵐ",
                    TEq(aA1, app_beta(am, x0), x1),
                    lambda xm: tpi(
                        nz + "₀",
                        TEq(aA0, tA0, x0),
                        lambda z0: tpi(
                            nz + "₁",
                            TEq(aA1, y, x1),
                            lambda z1: tpi(
                                nz + "ᵐ",
                                zm_ty(x0, x1, xm, z0, z1),
                                lambda zm: tarr(P0(0, x0, z0), tapp(p1, x1, z1)),
                            ),
                        ),
                    ),
                ),
            ),
        )

    def t_prm(y: Tm, w: Tm, p1: Tm, pm: Tm, pr1: Tm) -> Tm:
        inv_w = tapp(C_INV, aA1, am_t, y, w)
        return TEq(
            tapp(p1, y, TRefl(y)),
            tapp(pm, tA0, y, w, TRefl(tA0), TRefl(y), inv_w, prA0),
            pr1,
        )

    def g3gen(y4: Tm, w4: Tm, p1: Tm, pm: Tm, pr1: Tm) -> Tm:
        wbar = _inverse(aA1, am_t, y4, w4)
        return TEq(
            tapp(p1, am_t, wbar),
            tapp(pm, tA0, am_t, TRefl(am_t), TRefl(tA0), wbar, TRefl(wbar), prA0),
            tj(aA1, y4, lambda vx, vz: tapp(p1, vx, vz), pr1, am_t, wbar, names),
        )

    def mot4(y4: Tm, w4: Tm) -> Tm:
        return tpi(
            "p₁",
            t_p1(y4),
            lambda p1: tpi(
                "pᵐ",
                t_pm(y4, w4, p1),
                lambda pm: tpi(
                    "pr₁",
                    tapp(p1, y4, TRefl(y4)),
                    lambda pr1: tpi(
                        "prᵐ",
                        t_prm(y4, w4, p1, pm, pr1),
                        lambda prm: g3gen(y4, w4, p1, pm, pr1),
                    ),
                ),
            ),
        )

    l4base = tlam(
        "p₁",
        lambda p1: tlam(
            "pᵐ", lambda pm: tlam("pr₁", lambda pr1: tlam("prᵐ", lambda prm: prm))
        ),
    )
    l4 = tapp(
        tj(aA1, am_t, mot4, l4base, tA1, tM, (nx, nz)),
        K["uncP1"],
        K["uncPM"],
        prA1,
        prM,
    )
    l3 = tj(aA0, tA0, mot3, l4, uA0, eA0, names)
    l2 = tj(aA1, am_u, mot2, l3, uA1, uM, names)
    return tj(
        TEq(aA1, tA1, uA1),
        fwd_to(uA0, eA0, uA1, uM),
        mot1,
        l2,
        eA1,
        eM,
        names,
    )


def _sjbeta_M(
    env: Env, a: SigTerm, t: SigTerm, p: SigTerm, pr: SigTerm, names: tuple[str, str]
) -> Tm:
    """Homomorphism translation of the small-equality computation witness.

    Two nested ``J``s: the outer eliminates the action on the base point of
    the motive, the inner the action on the point, quantifying over the
    motive's own translations.  The inner base reduces to a doubled
    reflexivity because every layer of the rebuilt eliminator tower
    collapses on reflexivity paths.
    """
    nx, nz = names
    aA0, aA1 = tm_A(a, env, 0), tm_A(a, env, 1)
    am = tm_M(a, env)
    tA0, tA1, tM = tm_A(t, env, 0), tm_A(t, env, 1), tm_M(t, env)
    prA0, prA1, prM = tm_A(pr, env, 0), tm_A(pr, env, 1), tm_M(pr, env)
    am_t = app_beta(am, tA0)
    rfl = SRefl(a, t)
    c_pr = inst_motive2(p, t, rfl)
    ty0 = tm_A(c_pr, env, 0)
    cprM = tm_M(c_pr, env)
    pm0 = app_beta(cprM, prA0)
    P, PMf = _motive_cbs_M(env, a, t, p, large=False)
    jredA0 = tj(aA0, tA0, lambda vx, vz: P(0, vx, vz), prA0, tA0, TRefl(tA0), names)

    def goal(ty1g, cprMg, pm0g, jredA1g, towerg, y1, w1):
        cm_l = app_beta(cprMg, jredA0)
        inner = _compose(
            ty1g,
            jredA1g,
            cm_l,
            pm0g,
            _inverse(ty1g, cm_l, jredA1g, towerg),
            _ap(ty0, ty1g, cprMg, jredA0, prA0, TRefl(prA0)),
        )
        lhs = _compose(ty1g, jredA1g, pm0g, y1, inner, w1)
        return TEq(TEq(ty1g, jredA1g, y1), lhs, TRefl(y1))

    def tower(tA1g, tMg, prA1g, prMg, P1g, PMg, uncP1g, uncPMg):
        parts = dict(
            tA1=tA1g,
            tM=tMg,
            uA1=tA1g,
            uM=tMg,
            eA1=TRefl(tA1g),
            eM=tapp(C_INV, aA1, am_t, tA1g, tMg),
            prA1=prA1g,
            prM=prMg,
            P1=P1g,
            PMf=PMg,
            uncP1=uncP1g,
            uncPM=uncPMg,
        )
        return _jm_tower(env, a, t, p, pr, t, rfl, names, parts)

    def at_slots(y2, w2, p1, pm):
        """All instance parts of the goal with the point action generalized
        to (y2, w2) and the motive translations to (p1, pm)."""
        ty1g = tapp(p1, y2, TRefl(y2))
        inv_w = tapp(C_INV, aA1, am_t, y2, w2)
        cprMg = tapp(pm, tA0, y2, w2, TRefl(tA0), TRefl(y2), inv_w)
        pm0g = app_beta(cprMg, prA0)
        jredA1g = tj(
            aA1, y2, lambda vx, vz: tapp(p1, vx, vz), pm0g, y2, TRefl(y2), names
        )
        towerg = tower(
            y2,
            w2,
            pm0g,
            TRefl(pm0g),
            lambda x, z: tapp(p1, x, z),
            lambda xp, zp: tapp(pm, *xp, *zp),
            p1,
            pm,
        )
        return ty1g, cprMg, pm0g, jredA1g, towerg

    def t_pm(y2, w2, p1):
        def zm_ty(x0, x1, xm, z0, z1):
            inner = _compose(
                aA1,
                y2,
                am_t,
                app_beta(am, x0),
                _inverse(aA1, am_t, y2, w2),
                _ap(aA0, aA1, am, tA0, x0, z0),
            )
            return TEq(TEq(aA1, y2, x1), _compose(aA1, y2, app_beta(am, x0), x1, inner, xm), z1)

        return tpi(
            nx + "₀",
            aA0,
            lambda x0: tpi(
                nx + "₁",
                aA1,
                lambda x1: tpi(
                    nx + "ᵐ",
                    TEq(aA1, app_beta(am, x0), x1),
                    lambda xm: tpi(
                        nz + "₀",
                        TEq(aA0, tA0, x0),
                        lambda z0: tpi(
                            nz + "₁",
                            TEq(aA1, y2, x1),
                            lambda z1: tpi(
                                nz + "ᵐ",
                                zm_ty(x0, x1, xm, z0, z1),
                                lambda zm: tarr(P(0, x0, z0), tapp(p1, x1, z1)),
                            ),
                        ),
                    ),
                ),
            ),
        )

    def mot2_body(y2, w2, p1, pm):
        ty1g, cprMg, pm0g, jredA1g, towerg = at_slots(y2, w2, p1, pm)
        return goal(ty1g, cprMg, pm0g, jredA1g, towerg, pm0g, TRefl(pm0g))

    def mot2(y2, w2):
        return tpi(
            "p₁",
            tpi(nx + "₁", aA1, lambda x1: tpi(nz + "₁", TEq(aA1, y2, x1), lambda z1: TType(0))),
            lambda p1: tpi(
                "pᵐ",
                t_pm(y2, w2, p1),
                lambda pm: mot2_body(y2, w2, p1, pm),
            ),
        )

    def base2_body(p1, pm):
        pm0g = at_slots(am_t, TRefl(am_t), p1, pm)[2]
        return TRefl(TRefl(pm0g))

    uncP1 = tlam(nx + "₁", lambda x1: tlam(nz + "₁", lambda z1: P(1, x1, z1)))
    uncPM = _unc6(lambda x0, x1, xm, z0, z1, zm: PMf((x0, x1, xm), (z0, z1, zm)))
    inner_j = tapp(
        tj(
            aA1,
            am_t,
            mot2,
            tlam("p₁", lambda p1: tlam("pᵐ", lambda pm: base2_body(p1, pm))),
            tA1,
            tM,
            names,
        ),
        uncP1,
        uncPM,
    )

    def mot1(y1, w1):
        ty1 = tm_A(c_pr, env, 1)
        jredA1 = tj(aA1, tA1, lambda vx, vz: P(1, vx, vz), y1, tA1, TRefl(tA1), names)
        towerg = tower(
            tA1,
            tM,
            y1,
            w1,
            lambda x, z: P(1, x, z),
            PMf,
            uncP1,
            uncPM,
        )
        return goal(ty1, cprM, pm0, jredA1, towerg, y1, w1)

    return tj(tm_A(c_pr, env, 1), pm0, mot1, inner_j, prA1, prM, names)


def _sju_M(
    env: Env,
    a: SigTerm,
    p: SigTerm,
    pr: SigTerm,
    b: SigTerm,
    e: SigTerm,
    names: tuple[str, str],
) -> Tm:
    """Homomorphism translation of the code-equality eliminator.

    Two outer ``J``s eliminate the two algebra-side paths; the third
    eliminates the homomorphism's coherence for the path, with a motive that
    generalizes the function underlying that coherence so the elimination
    stays well-typed.  The innermost motive quantifies over the motive's own
    homomorphism translation.
    """
    nx, nz = names
    t0 = TType(0)
    aA0, aA1 = tm_A(a, env, 0), tm_A(a, env, 1)
    am = tm_M(a, env)
    bA0, bA1 = tm_A(b, env, 0), tm_A(b, env, 1)
    bm = tm_M(b, env)
    eA0, eA1, em = tm_A(e, env, 0), tm_A(e, env, 1), tm_M(e, env)
    prA0, prA1, prM = tm_A(pr, env, 0), tm_A(pr, env, 1), tm_M(pr, env)
    r0, r1 = TRefl(aA0), TRefl(aA1)
    P, PMf = _motive_cbs_M(env, a, a, p, large=True)

    def ju1(end, eq):
        return tj(t0, aA1, lambda vx, vz: P(1, vx, vz), prA1, end, eq, names)

    def coh_ty(dom0, z0, cod1, z1, f):
        return TEq(
            tarr(aA0, cod1),
            tlam("v", lambda v: app_beta(f, _coe(aA0, dom0, z0, v))),
            tlam("v", lambda v: _coe(aA1, cod1, z1, app_beta(am, v))),
        )

    def mot1(x0, z0):
        return tpi(
            "bᵐ",
            tarr(x0, bA1),
            lambda bmv: tpi(
                "eᵐ",
                coh_ty(x0, z0, bA1, eA1, bmv),
                lambda emv: TEq(
                    P(1, bA1, eA1),
                    app_beta(
                        PMf((x0, bA1, bmv), (z0, eA1, emv)),
                        tj(t0, aA0, lambda vx, vz: P(0, vx, vz), prA0, x0, z0, names),
                    ),
                    ju1(bA1, eA1),
                ),
            ),
        )

    jured0 = tj(t0, aA0, lambda vx, vz: P(0, vx, vz), prA0, aA0, r0, names)

    def mot2(x1, z1):
        return tpi(
            "bᵐ",
            tarr(aA0, x1),
            lambda bmv: tpi(
                "eᵐ",
                coh_ty(aA0, r0, x1, z1, bmv),
                lambda emv: TEq(
                    P(1, x1, z1),
                    app_beta(PMf((aA0, x1, bmv), (r0, z1, emv)), jured0),
                    ju1(x1, z1),
                ),
            ),
        )

    def layer3(bmv, emv):
        fn_t = tarr(aA0, aA1)
        lb = tlam("v", lambda v: app_beta(bmv, _coe(aA0, aA0, r0, v)))
        ram = tlam("v", lambda v: _coe(aA1, aA1, r1, app_beta(am, v)))

        def t_pmg(g):
            def zm_ty(x0, x1, xm, z0, z1):
                return TEq(
                    tarr(aA0, x1),
                    tlam("v", lambda v: app_beta(xm, _coe(aA0, x0, z0, v))),
                    tlam("v", lambda v: _coe(aA1, x1, z1, TApp(g, v))),
                )

            return tpi(
                nx + "₀",
                t0,
                lambda x0: tpi(
                    nx + "₁",
                    t0,
                    lambda x1: tpi(
                        nx + "ᵐ",
                        tarr(x0, x1),
                        lambda xm: tpi(
                            nz + "₀",
                            TEq(t0, aA0, x0),
                            lambda z0: tpi(
                                nz + "₁",
                                TEq(t0, aA1, x1),
                                lambda z1: tpi(
                                    nz + "ᵐ",
                                    zm_ty(x0, x1, xm, z0, z1),
                                    lambda zm: tarr(P(0, x0, z0), P(1, x1, z1)),
                                ),
                            ),
                        ),
                    ),
                ),
            )

        def mot3(g, w):
            return tpi(
                "pᵐ",
                t_pmg(g),
                lambda pm: tpi(
                    "prᵐ",
                    TEq(
                        P(1, aA1, r1),
                        tapp(pm, aA0, aA1, g, r0, r1, TRefl(g), prA0),
                        prA1,
                    ),
                    lambda prm: TEq(
                        P(1, aA1, r1),
                        tapp(pm, aA0, aA1, bmv, r0, r1, w, prA0),
                        prA1,
                    ),
                ),
            )

        uncPM = _unc6(lambda x0, x1, xm, z0, z1, zm: PMf((x0, x1, xm), (z0, z1, zm)))
        base3 = tlam("pᵐ", lambda pm: tlam("prᵐ", lambda prm: prm))
        return tapp(tj(fn_t, lb, mot3, base3, ram, emv, names), uncPM, prM)

    base1 = tj(
        t0,
        aA1,
        mot2,
        tlam("bᵐ", lambda bmv: tlam("eᵐ", lambda emv: layer3(bmv, emv))),
        bA1,
        eA1,
        names,
    )
    whole = tj(t0, aA0, mot1, base1, bA0, eA0, names)
    return tapp(whole, bm, em)


def _sjbetau_M(
    env: Env, a: SigTerm, p: SigTerm, pr: SigTerm, names: tuple[str, str]
) -> Tm:
    """Homomorphism translation of the code-equality computation witness.

    The rebuilt eliminator collapses on reflexivity to the action on the
    base point, so the composite that the forward map produces is exactly
    the one the prelude's ``inv`` contracts.
    """
    c_pr = inst_motive2(p, a, SReflU(a))
    ty1 = tm_A(c_pr, env, 1)
    pm0 = app_beta(tm_M(c_pr, env), tm_A(pr, env, 0))
    return tapp(C_INV, ty1, pm0, tm_A(pr, env, 1), tm_M(pr, env))


# --------------------------------------------------------------------------
# Section translation (-S)
# --------------------------------------------------------------------------
#
# Environment entries carry (a, d, s): the algebra part, the displayed part,
# and the section coherence.  For a small-sort element t the coherence is a
# path  tᔆ : Eq (aᴰ-family at tᴬ) (canonical section at tᴬ) tᴰ,  and for a
# sort code it is the section function itself.  An inductive binder is its
# own canonical section point, so it extends the environment with a
# reflexivity coherence.


def sec_app_S(a: SigTerm, env: Env, t: Tm, level: int) -> Tm:
    """Canonical section action of the sort code ``a`` applied at ``t``."""
    match a:
        case SEqId(c, l, r):
            return _eqid_sec(c, l, r, env, t, level)
        case SPiInf(x, dom, cod):
            return tlam(
                x,
                lambda v: sec_app_S(cod, env + [_ext(dom, v)], TApp(t, v), level),
            )
        case _:
            return app_beta(tm_S(a, env, level), t)


def _eqid_sec(
    c: SigTerm,
    l: SigTerm,
    r: SigTerm,
    env: Env,
    e: Tm,
    level: int,
    *,
    cDf: Optional[Tm] = None,
    cSf: Optional[Tm] = None,
    lD: Optional[Tm] = None,
    lS: Optional[Tm] = None,
    rA: Optional[Tm] = None,
    rD: Optional[Tm] = None,
    rS: Optional[Tm] = None,
) -> Tm:
    """Section action of a small-equality code on a path ``e``: the
    dependent action of the index's section, corrected at both endpoints
    by their coherences.  Overridable so dependent constructions can
    rebuild it with punched slots."""
    cA = tm_A(c, env)
    cDf = tm_D(c, env, level) if cDf is None else cDf
    cSf = tm_S(c, env, level) if cSf is None else cSf
    lA = tm_A(l, env)
    rA = tm_A(r, env) if rA is None else rA
    lD = tm_D(l, env, level) if lD is None else lD
    lS = tm_S(l, env, level) if lS is None else lS
    rD = tm_D(r, env, level) if rD is None else rD
    rS = tm_S(r, env, level) if rS is None else rS
    fam_l = app_beta(cDf, lA)
    fam_r = app_beta(cDf, rA)
    sec_l = app_beta(cSf, lA)
    sec_r = app_beta(cSf, rA)

    def trc(x: Tm) -> Tm:
        return _tr(cA, cDf, lA, rA, e, x)

    apd_e = tapp(C_APD, cA, cDf, cSf, lA, rA, e)
    inner = _tr(
        fam_r,
        tlam("y", lambda y: TEq(fam_r, trc(sec_l), y)),
        sec_r,
        rD,
        rS,
        apd_e,
    )
    return _tr(
        fam_l,
        tlam("x", lambda x: TEq(fam_r, trc(x), rD)),
        sec_l,
        lD,
        lS,
        inner,
    )


def _equ_S_ty(
    env: Env,
    a: SigTerm,
    b: SigTerm,
    e: Tm,
    eD: Tm,
    level: int,
    *,
    bA: Optional[Tm] = None,
    bDf: Optional[Tm] = None,
    bSf: Optional[Tm] = None,
    a_sec: Optional[Callable[[Tm], Tm]] = None,
) -> Tm:
    """Section coherence type for a code equality: pointwise over the first
    code, the second code's section agrees with the transported section of
    the first.  ``a_sec`` overrides the canonical section of ``a`` used as
    the base of the inner eliminator."""
    aA = tm_A(a, env)
    aDf = tm_D(a, env, level)
    bA = tm_A(b, env) if bA is None else bA
    bDf = tm_D(b, env, level) if bDf is None else bDf
    fam = tlam("A", lambda v: tarr(v, TType(level)))

    def tr_fam(end: Tm, path: Tm) -> Tm:
        return _tr(TType(0), fam, aA, end, path, aDf)

    def b_sec(x: Tm) -> Tm:
        if bSf is not None:
            return app_beta(bSf, x)
        return sec_app_S(b, env, x, level)

    def base_sec(x: Tm) -> Tm:
        if a_sec is not None:
            return a_sec(x)
        return sec_app_S(a, env, x, level)

    index = tpi("x", aA, lambda vx: app_beta(bDf, _coe(aA, bA, e, vx)))
    lhs = tlam("x", lambda vx: b_sec(_coe(aA, bA, e, vx)))

    def inner_j(vx: Tm) -> Tm:
        return tj(
            TType(0),
            aA,
            lambda vX, vz: app_beta(tr_fam(vX, vz), _coe(aA, vX, vz, vx)),
            base_sec(vx),
            bA,
            e,
            ("X", "z"),
        )

    rhs = tlam(
        "x",
        lambda vx: _tr(
            tarr(bA, TType(level)),
            tlam("F", lambda f: TApp(f, _coe(aA, bA, e, vx))),
            tr_fam(bA, e),
            bDf,
            eD,
            inner_j(vx),
        ),
    )
    return TEq(index, lhs, rhs)


def ty_S(A: SigType, env: Env, t: Tm, tD: Tm, level: int) -> Tm:
    match A:
        case SUniv():
            return tpi("x", t, lambda v: app_beta(tD, v))
        case SEl(a):
            return TEq(
                fam_app_D(a, env, t, level), sec_app_S(a, env, t, level), tD
            )
        case SPiInd(x, a, B):

            def body(vx: Tm) -> Tm:
                sx = sec_app_S(a, env, vx, level)
                env2 = env + [_sig(SEl(a), vx, sx, TRefl(sx))]
                return ty_S(
                    B, env2, app_beta(t, vx), apps_beta(tD, vx, sx), level
                )

            return tpi(x, tm_A(a, env), body)
        case SPiExt(x, dom, B):
            return tpi(
                x,
                rebase(dom, env),
                lambda v: ty_S(
                    B,
                    env + [_ext(dom, v)],
                    app_beta(t, v),
                    app_beta(tD, v),
                    level,
                ),
            )
        case SEqU(a, b):
            return _equ_S_ty(env, a, b, t, tD, level)
    raise AssertionError(f"ty_S: unhandled {A!r}")


def tm_S(t: SigTerm, env: Env, level: int) -> Tm:
    match t:
        case SVar(k):
            entry = env[len(env) - 1 - k]
            return entry.parts[0] if entry.is_ext else entry.parts[2]
        case SApp(f, u):
            fty = src_type(f, env)
            assert isinstance(fty, SPiInd)
            x, a, B = fty.name, fty.dom, fty.cod
            uA = tm_A(u, env)
            uD = tm_D(u, env, level)
            uS = tm_S(u, env, level)
            fA = tm_A(f, env)
            fD = tm_D(f, env, level)
            return tj(
                fam_app_D(a, env, uA, level),
                sec_app_S(a, env, uA, level),
                lambda vy, vw: ty_S(
                    B,
                    env + [_sig(SEl(a), uA, vy, vw)],
                    app_beta(fA, uA),
                    apps_beta(fD, uA, vy),
                    level,
                ),
                app_beta(tm_S(f, env, level), uA),
                uD,
                uS,
                (x + "ᵈ", x + "ˢ"),
            )
        case SAppExt(f, v):
            return app_beta(tm_S(f, env, level), rebase(v, env))
        case SAppInf(f, v):
            code = _el_code(f, env)
            assert isinstance(code, SPiInf)
            v_t = rebase(v, env)
            cod_inst = substitute(code.cod, 0, v)
            fA = tm_A(f, env)
            return _ap(
                fam_app_D(code, env, fA, level),
                fam_app_D(cod_inst, env, TApp(fA, v_t), level),
                tlam("f", lambda g: TApp(g, v_t)),
                sec_app_S(code, env, fA, level),
                tm_D(f, env, level),
                tm_S(f, env, level),
            )
        case SEqId(_, _, _) | SPiInf(_, _, _):
            return tlam("e", lambda v: sec_app_S(t, env, v, level))
        case SRefl(a, s):
            return _srefl_S(env, a, s, level)
        case SReflU(a):
            aA = tm_A(a, env)
            return TRefl(
                tlam(
                    "x",
                    lambda v: sec_app_S(
                        a, env, _coe(aA, aA, TRefl(aA), v), level
                    ),
                )
            )
        case SJ(a, bp, p, pr, ep, eq, names):
            return _sj_S(env, a, bp, p, pr, ep, eq, names, level)
        case SJU(a, p, pr, ep, eq, names):
            return _sju_S(env, a, p, pr, ep, eq, names, level)
        case SJBeta(a, pt, p, pr, names):
            return _sjbeta_S(env, a, pt, p, pr, names, level)
        case SJBetaU(a, p, pr, names):
            return _sjbetau_S(env, a, p, pr, names, level)
    raise AssertionError(f"tm_S: unhandled {t!r}")


def _srefl_S(
    env: Env,
    a: SigTerm,
    t: SigTerm,
    level: int,
    *,
    tD: Optional[Tm] = None,
    tS: Optional[Tm] = None,
) -> Tm:
    """Section coherence of reflexivity: eliminate the point's coherence;
    at the canonical point every corrective transport collapses."""
    aA = tm_A(a, env)
    aDf = tm_D(a, env, level)
    tA = tm_A(t, env)
    tD = tm_D(t, env, level) if tD is None else tD
    tS = tm_S(t, env, level) if tS is None else tS
    sec_t = sec_app_S(a, env, tA, level)

    def mot(v: Tm, wv: Tm) -> Tm:
        secr = _eqid_sec(
            a, t, t, env, TRefl(tA), level, lD=v, lS=wv, rD=v, rS=wv
        )
        return TEq(
            TEq(app_beta(aDf, tA), _tr(aA, aDf, tA, tA, TRefl(tA), v), v),
            secr,
            TRefl(v),
        )

    return tj(
        app_beta(aDf, tA),
        sec_t,
        mot,
        TRefl(TRefl(sec_t)),
        tD,
        tS,
        ("v", "w"),
    )


def _p_slot_tys_S(
    env: Env,
    a: SigTerm,
    t: SigTerm,
    p: SigTerm,
    names: tuple[str, str],
    level: int,
    y: Tm,
    w: Tm,
) -> tuple[Tm, Callable[[Tm], Tm]]:
    """Types of the uncurried displayed family and section of a small
    eliminator motive, with the base point's displayed part replaced by
    ``y`` and its coherence by ``w``.  Returns the family slot type and a
    function from the family to the section slot type."""
    nx, nz = names
    aA = tm_A(a, env)
    aDf = tm_D(a, env, level)
    tA = tm_A(t, env)

    def fam_a(x: Tm) -> Tm:
        return fam_app_D(a, env, x, level)

    def sec_a(x: Tm) -> Tm:
        return sec_app_S(a, env, x, level)

    def pA(x: Tm, z: Tm) -> Tm:
        return tm_A(p, _jenv4_A(env, a, t, x, z, 0))

    def zd_ty(x: Tm, xd: Tm, z: Tm) -> Tm:
        return TEq(fam_a(x), _tr(aA, aDf, tA, x, z, y), xd)

    t_fam = tpi(
        nx,
        aA,
        lambda x: tpi(
            nx + "ᵈ",
            fam_a(x),
            lambda xd: tpi(
                nz,
                TEq(aA, tA, x),
                lambda z: tpi(
                    nz + "ᵈ",
                    zd_ty(x, xd, z),
                    lambda zd: tarr(pA(x, z), TType(level)),
                ),
            ),
        ),
    )

    def t_sec(pD: Tm) -> Tm:
        return tpi(
            nx,
            aA,
            lambda x: tpi(
                nx + "ᵈ",
                fam_a(x),
                lambda xd: tpi(
                    nx + "ˢ",
                    TEq(fam_a(x), sec_a(x), xd),
                    lambda xs: tpi(
                        nz,
                        TEq(aA, tA, x),
                        lambda z: tpi(
                            nz + "ᵈ",
                            zd_ty(x, xd, z),
                            lambda zd: tpi(
                                nz + "ˢ",
                                TEq(
                                    zd_ty(x, xd, z),
                                    _eqid_sec(
                                        a,
                                        t,
                                        t,
                                        env,
                                        z,
                                        level,
                                        lD=y,
                                        lS=w,
                                        rA=x,
                                        rD=xd,
                                        rS=xs,
                                    ),
                                    zd,
                                ),
                                lambda zs: tpi(
                                    "w",
                                    pA(x, z),
                                    lambda v: app_beta(
                                        tapp(pD, x, xd, z, zd), v
                                    ),
                                ),
                            ),
                        ),
                    ),
                ),
            ),
        )

    return t_fam, t_sec


def _sj_S(
    env: Env,
    a: SigTerm,
    t: SigTerm,
    p: SigTerm,
    pr: SigTerm,
    u: SigTerm,
    e: SigTerm,
    names: tuple[str, str],
    level: int,
    *,
    tD: Optional[Tm] = None,
    tS: Optional[Tm] = None,
    uD: Optional[Tm] = None,
    uS: Optional[Tm] = None,
    eD: Optional[Tm] = None,
    eS: Optional[Tm] = None,
    prD: Optional[Tm] = None,
    prS: Optional[Tm] = None,
    pD_fn: Optional[Tm] = None,
    pS_fn: Optional[Tm] = None,
) -> Tm:
    """Section coherence of the small-equality eliminator.

    Four eliminations, outside in: the path's coherence, the endpoint's
    coherence, the base path, and finally the base point's coherence.  The
    innermost motive quantifies over the motive's displayed family and
    section together with the method's displayed part and coherence, since
    their types mention the slot being rewritten; its base is then the
    method coherence itself.  The keyword overrides serve the computation
    witnesses, which rebuild this tower with punched slots."""
    nx, nz = names
    aA = tm_A(a, env)
    aDf = tm_D(a, env, level)
    tA = tm_A(t, env)
    uA = tm_A(u, env)
    eA = tm_A(e, env)
    prA = tm_A(pr, env)
    tD = tm_D(t, env, level) if tD is None else tD
    tS = tm_S(t, env, level) if tS is None else tS
    uD = tm_D(u, env, level) if uD is None else uD
    uS = tm_S(u, env, level) if uS is None else uS
    eD = tm_D(e, env, level) if eD is None else eD
    eS = tm_S(e, env, level) if eS is None else eS
    prD = tm_D(pr, env, level) if prD is None else prD
    prS = tm_S(pr, env, level) if prS is None else prS
    x_src = SEl(a)
    z_src = _zsrc_eqid(a, t)

    def fam_a(x: Tm) -> Tm:
        return fam_app_D(a, env, x, level)

    def sec_a(x: Tm) -> Tm:
        return sec_app_S(a, env, x, level)

    def Ifam(xp: tuple, zp: tuple, at: Tm) -> Tm:
        if pD_fn is not None:
            return app_beta(tapp(pD_fn, xp[0], xp[1], zp[0], zp[1]), at)
        env2 = env + [
            _sig(x_src, xp[0], xp[1], None),
            _sig(z_src, zp[0], zp[1], None),
        ]
        return fam_app_D(p, env2, at, level)

    def Isec(xp: tuple, zp: tuple, at: Tm) -> Tm:
        if pS_fn is not None:
            return app_beta(tapp(pS_fn, *xp, *zp), at)
        env2 = env + [_sig(x_src, *xp), _sig(z_src, *zp)]
        return sec_app_S(p, env2, at, level)

    def jAg(end: Tm, eq: Tm) -> Tm:
        return tj(
            aA,
            tA,
            lambda vx, vz: tm_A(p, _jenv4_A(env, a, t, vx, vz, 0)),
            prA,
            end,
            eq,
            names,
        )

    jA = jAg(uA, eA)

    def jDg(**over) -> Tm:
        kw: dict = dict(tD=tD, uD=uD, eD=eD, prD=prD)
        if pD_fn is not None:
            kw["pD_fn"] = pD_fn
        kw.update(over)
        return _sj_D(env, a, t, p, pr, u, e, names, level, **kw)

    def secg(ee: Tm, **over) -> Tm:
        kw: dict = dict(lD=tD, lS=tS, rD=uD, rS=uS)
        kw.update(over)
        return _eqid_sec(a, t, u, env, ee, level, **kw)

    # Innermost layer: eliminate the base point's coherence.
    s_t = sec_a(tA)
    jA4 = jAg(tA, TRefl(tA))

    def mot4(y4: Tm, w4: Tm) -> Tm:
        t_fam, t_sec = _p_slot_tys_S(env, a, t, p, names, level, y4, w4)
        s4 = secg(TRefl(tA), rA=tA, rD=s_t, rS=TRefl(s_t), lD=y4, lS=w4)

        def t_prD(pD: Tm) -> Tm:
            return app_beta(tapp(pD, tA, y4, TRefl(tA), TRefl(y4)), prA)

        def t_prS(pD: Tm, pS: Tm, q: Tm) -> Tm:
            rg = _srefl_S(env, a, t, level, tD=y4, tS=w4)
            return TEq(
                t_prD(pD),
                app_beta(
                    tapp(pS, tA, y4, w4, TRefl(tA), TRefl(y4), rg), prA
                ),
                q,
            )

        def goal(pD: Tm, pS: Tm, q: Tm, r: Tm) -> Tm:
            return TEq(
                app_beta(tapp(pD, tA, s_t, TRefl(tA), s4), jA4),
                app_beta(
                    tapp(pS, tA, s_t, TRefl(s_t), TRefl(tA), s4, TRefl(s4)),
                    jA4,
                ),
                _sj_D(
                    env,
                    a,
                    t,
                    p,
                    pr,
                    u,
                    e,
                    names,
                    level,
                    tD=y4,
                    uA=tA,
                    uD=s_t,
                    eA=TRefl(tA),
                    eD=s4,
                    prD=q,
                    pD_fn=pD,
                ),
            )

        return tpi(
            "P",
            t_fam,
            lambda pD: tpi(
                "S",
                t_sec(pD),
                lambda pS: tpi(
                    "q",
                    t_prD(pD),
                    lambda q: tpi(
                        "r",
                        t_prS(pD, pS, q),
                        lambda r: goal(pD, pS, q, r),
                    ),
                ),
            ),
        )

    base4 = tlam(
        "P",
        lambda pD: tlam(
            "S", lambda pS: tlam("q", lambda q: tlam("r", lambda r: r))
        ),
    )
    if pD_fn is not None:
        uPD, uPS = pD_fn, pS_fn
    else:
        uPD = tlam(
            nx,
            lambda x: tlam(
                nx + "ᵈ",
                lambda xd: tlam(
                    nz,
                    lambda z: tlam(
                        nz + "ᵈ",
                        lambda zd: tm_D(
                            p,
                            env
                            + [
                                _sig(x_src, x, xd, None),
                                _sig(z_src, z, zd, None),
                            ],
                            level,
                        ),
                    ),
                ),
            ),
        )
        uPS = tlam(
            nx,
            lambda x: tlam(
                nx + "ᵈ",
                lambda xd: tlam(
                    nx + "ˢ",
                    lambda xs: tlam(
                        nz,
                        lambda z: tlam(
                            nz + "ᵈ",
                            lambda zd: tlam(
                                nz + "ˢ",
                                lambda zs: tm_S(
                                    p,
                                    env
                                    + [
                                        _sig(x_src, x, xd, xs),
                                        _sig(z_src, z, zd, zs),
                                    ],
                                    level,
                                ),
                            ),
                        ),
                    ),
                ),
            ),
        )
    l4 = tapp(
        tj(fam_a(tA), s_t, mot4, base4, tD, tS, ("v", "w")), uPD, uPS, prD, prS
    )

    # Third layer: eliminate the base path.
    def mot3(y3: Tm, w3: Tm) -> Tm:
        s3v = sec_a(y3)
        s3 = secg(w3, rA=y3, rD=s3v, rS=TRefl(s3v))
        jA3 = jAg(y3, w3)
        return TEq(
            Ifam((y3, s3v, None), (w3, s3, None), jA3),
            Isec((y3, s3v, TRefl(s3v)), (w3, s3, TRefl(s3)), jA3),
            jDg(uA=y3, uD=s3v, eA=w3, eD=s3),
        )

    l3 = tj(aA, tA, mot3, l4, uA, eA, names)

    # Second layer: eliminate the endpoint's coherence.
    def mot2(y2: Tm, w2: Tm) -> Tm:
        s2 = secg(eA, rD=y2, rS=w2)
        return TEq(
            Ifam((uA, y2, None), (eA, s2, None), jA),
            Isec((uA, y2, w2), (eA, s2, TRefl(s2)), jA),
            jDg(uD=y2, eD=s2),
        )

    l2 = tj(fam_a(uA), sec_a(uA), mot2, l3, uD, uS, (nx + "ᵈ", nx + "ˢ"))

    # Outer layer: eliminate the path's coherence.
    def mot1(y1: Tm, w1: Tm) -> Tm:
        return TEq(
            Ifam((uA, uD, None), (eA, y1, None), jA),
            Isec((uA, uD, uS), (eA, y1, w1), jA),
            jDg(eD=y1),
        )

    ty_e = TEq(fam_a(uA), _tr(aA, aDf, tA, uA, eA, tD), uD)
    return tj(ty_e, secg(eA), mot1, l2, eD, eS, (nz + "ᵈ", nz + "ˢ"))


def _sjbeta_S(
    env: Env,
    a: SigTerm,
    t: SigTerm,
    p: SigTerm,
    pr: SigTerm,
    names: tuple[str, str],
    level: int,
) -> Tm:
    """Section coherence of the small computation witness: eliminate the
    method's coherence, then the base point's coherence with the motive's
    displayed family and section quantified; at the canonical slots the
    whole eliminator tower collapses to the method."""
    nx, nz = names
    rfl = SRefl(a, t)
    jred = SJ(a, t, p, pr, t, rfl, names)
    c_pr = inst_motive2(p, t, rfl)
    aA = tm_A(a, env)
    tA = tm_A(t, env)
    tD = tm_D(t, env, level)
    tS = tm_S(t, env, level)
    prA = tm_A(pr, env)
    prD = tm_D(pr, env, level)
    prS = tm_S(pr, env, level)
    tyP = tm_A(c_pr, env)
    cDf = tm_D(c_pr, env, level)
    famP = fam_app_D(c_pr, env, prA, level)
    secP = sec_app_S(c_pr, env, prA, level)
    jredA = tm_A(jred, env)
    x_src = SEl(a)
    z_src = _zsrc_eqid(a, t)

    def sec_a(x: Tm) -> Tm:
        return sec_app_S(a, env, x, level)

    # Inner layer: eliminate the base point's coherence, with the motive's
    # displayed family and section quantified so the generalized method
    # stays well typed.
    def inst(y2: Tm, w2: Tm, pD: Tm, pS: Tm) -> tuple[Tm, Tm, Tm, Tm]:
        """The method-type pieces with the base point's displayed part and
        coherence punched to ``y2``/``w2`` and the motive translations
        routed through ``pD``/``pS``."""
        pD_t = tapp(pD, tA, y2, TRefl(tA), TRefl(y2))
        rg = _srefl_S(env, a, t, level, tD=y2, tS=w2)
        pS_t = tapp(pS, tA, y2, w2, TRefl(tA), TRefl(y2), rg)
        secP_g = app_beta(pS_t, prA)
        jredD_g = _sj_D(
            env,
            a,
            t,
            p,
            pr,
            t,
            rfl,
            names,
            level,
            tD=y2,
            uD=y2,
            eD=TRefl(y2),
            prD=secP_g,
            pD_fn=pD,
        )
        return pD_t, pS_t, secP_g, jredD_g

    def goal(y2: Tm, w2: Tm, pD: Tm, pS: Tm) -> Tm:
        pD_t, pS_t, secP_g, jredD_g = inst(y2, w2, pD, pS)
        rg = _srefl_S(env, a, t, level, tD=y2, tS=w2)
        jredS_g = _sj_S(
            env,
            a,
            t,
            p,
            pr,
            t,
            rfl,
            names,
            level,
            tD=y2,
            tS=w2,
            uD=y2,
            uS=w2,
            eD=TRefl(y2),
            eS=rg,
            prD=secP_g,
            prS=TRefl(secP_g),
            pD_fn=pD,
            pS_fn=pS,
        )
        sec_g = _eqid_sec(
            c_pr,
            jred,
            pr,
            env,
            TRefl(prA),
            level,
            cDf=pD_t,
            cSf=pS_t,
            lD=jredD_g,
            lS=jredS_g,
            rD=secP_g,
            rS=TRefl(secP_g),
        )
        return TEq(
            TEq(
                app_beta(pD_t, prA),
                _tr(tyP, pD_t, jredA, prA, TRefl(prA), jredD_g),
                secP_g,
            ),
            sec_g,
            TRefl(secP_g),
        )

    def mot2(y2: Tm, w2: Tm) -> Tm:
        t_fam, t_sec = _p_slot_tys_S(env, a, t, p, names, level, y2, w2)
        return tpi(
            "P",
            t_fam,
            lambda pD: tpi(
                "S", t_sec(pD), lambda pS: goal(y2, w2, pD, pS)
            ),
        )

    s_t = sec_a(tA)

    def base2(pD: Tm, pS: Tm) -> Tm:
        _pD_t, _pS_t, secP_b, _jD = inst(s_t, TRefl(s_t), pD, pS)
        return TRefl(TRefl(secP_b))

    uPD = tlam(
        nx,
        lambda x: tlam(
            nx + "ᵈ",
            lambda xd: tlam(
                nz,
                lambda z: tlam(
                    nz + "ᵈ",
                    lambda zd: tm_D(
                        p,
                        env
                        + [_sig(x_src, x, xd, None), _sig(z_src, z, zd, None)],
                        level,
                    ),
                ),
            ),
        ),
    )
    uPS = tlam(
        nx,
        lambda x: tlam(
            nx + "ᵈ",
            lambda xd: tlam(
                nx + "ˢ",
                lambda xs: tlam(
                    nz,
                    lambda z: tlam(
                        nz + "ᵈ",
                        lambda zd: tlam(
                            nz + "ˢ",
                            lambda zs: tm_S(
                                p,
                                env
                                + [
                                    _sig(x_src, x, xd, xs),
                                    _sig(z_src, z, zd, zs),
                                ],
                                level,
                            ),
                        ),
                    ),
                ),
            ),
        ),
    )
    inner = tapp(
        tj(
            fam_app_D(a, env, tA, level),
            s_t,
            mot2,
            tlam("P", lambda pD: tlam("S", lambda pS: base2(pD, pS))),
            tD,
            tS,
            ("v", "w"),
        ),
        uPD,
        uPS,
    )

    # Outer layer: eliminate the method's coherence.
    def mot1(y1: Tm, w1: Tm) -> Tm:
        jredD_g = _sj_D(env, a, t, p, pr, t, rfl, names, level, prD=y1)
        jredS_g = _sj_S(
            env, a, t, p, pr, t, rfl, names, level, prD=y1, prS=w1
        )
        sec_g = _eqid_sec(
            c_pr,
            jred,
            pr,
            env,
            TRefl(prA),
            level,
            lD=jredD_g,
            lS=jredS_g,
            rD=y1,
            rS=w1,
        )
        return TEq(
            TEq(famP, _tr(tyP, cDf, jredA, prA, TRefl(prA), jredD_g), y1),
            sec_g,
            TRefl(y1),
        )

    return tj(famP, secP, mot1, inner, prD, prS, names)


def _sju_S(
    env: Env,
    a: SigTerm,
    p: SigTerm,
    pr: SigTerm,
    b: SigTerm,
    e: SigTerm,
    names: tuple[str, str],
    level: int,
    *,
    prD: Optional[Tm] = None,
    prS: Optional[Tm] = None,
) -> Tm:
    """Section coherence of the code-equality eliminator.

    Eliminate the base code equality (quantifying the endpoint's displayed
    family, section, and both coherences), then the displayed coherence,
    then the section coherence.  A section function cannot itself be
    eliminated, so the innermost motive generalizes the moving endpoint of
    the section coherence into the uncurried motive section's slot type;
    at both ends of that elimination the mismatched arguments agree up to
    transport along reflexivity."""
    nx, nz = names
    t0 = TType(0)
    aA = tm_A(a, env)
    aDf = tm_D(a, env, level)
    bA = tm_A(b, env)
    bDf = tm_D(b, env, level)
    bSf = tm_S(b, env, level)
    eA = tm_A(e, env)
    eD = tm_D(e, env, level)
    eS = tm_S(e, env, level)
    prA = tm_A(pr, env)
    prD = tm_D(pr, env, level) if prD is None else prD
    prS = tm_S(pr, env, level) if prS is None else prS
    x_src = SUniv()
    z_src = _zsrc_equ(a)
    fam = tlam("A", lambda v: tarr(v, TType(level)))

    def tr_fam(end: Tm, path: Tm) -> Tm:
        return _tr(t0, fam, aA, end, path, aDf)

    def pA(x: Tm, z: Tm) -> Tm:
        return tm_A(p, _jenv5_A(env, a, x, z, 0))

    def juAg(end: Tm, eq: Tm) -> Tm:
        return tj(
            t0,
            aA,
            lambda vx, vz: tm_A(p, _jenv5_A(env, a, vx, vz, 0)),
            prA,
            end,
            eq,
            names,
        )

    def Ifam(xp: tuple, zp: tuple, at: Tm) -> Tm:
        env2 = env + [
            _sig(x_src, xp[0], xp[1], None),
            _sig(z_src, zp[0], zp[1], None),
        ]
        return fam_app_D(p, env2, at, level)

    def Isec(xp: tuple, zp: tuple, at: Tm) -> Tm:
        env2 = env + [_sig(x_src, *xp), _sig(z_src, *zp)]
        return sec_app_S(p, env2, at, level)

    def juDg(**over) -> Tm:
        kw: dict = dict(prD=prD)
        kw.update(over)
        return _sju_D(env, a, p, pr, b, e, names, level, **kw)

    def es_ty(X: Tm, Z: Tm, bD_: Tm, bS_: Tm, eD_: Tm) -> Tm:
        return _equ_S_ty(env, a, b, Z, eD_, level, bA=X, bDf=bD_, bSf=bS_)

    def goal_gen(X: Tm, Z: Tm, bD_: Tm, bS_: Tm, eD_: Tm, eS_: Tm) -> Tm:
        juA_g = juAg(X, Z)
        return TEq(
            Ifam((X, bD_, None), (Z, eD_, None), juA_g),
            Isec((X, bD_, bS_), (Z, eD_, eS_), juA_g),
            juDg(bA=X, bD=bD_, eA=Z, eD=eD_),
        )

    trFamR = tr_fam(aA, TRefl(aA))

    # Innermost layer: eliminate the section coherence.
    def equs_slot(X: Tm, Xd: Tm, Xs: Tm, Z: Tm, Zd: Tm, g: Tm) -> Tm:
        return _equ_S_ty(
            env,
            a,
            b,
            Z,
            Zd,
            level,
            bA=X,
            bDf=Xd,
            bSf=Xs,
            a_sec=lambda x: TApp(g, x),
        )

    def t_sec_g(g: Tm) -> Tm:
        return tpi(
            nx,
            t0,
            lambda X: tpi(
                nx + "ᵈ",
                tarr(X, TType(level)),
                lambda Xd: tpi(
                    nx + "ˢ",
                    tpi("w", X, lambda w: TApp(Xd, w)),
                    lambda Xs: tpi(
                        nz,
                        TEq(t0, aA, X),
                        lambda Z: tpi(
                            nz + "ᵈ",
                            TEq(tarr(X, TType(level)), tr_fam(X, Z), Xd),
                            lambda Zd: tpi(
                                nz + "ˢ",
                                equs_slot(X, Xd, Xs, Z, Zd, g),
                                lambda Zs: tpi(
                                    "w",
                                    pA(X, Z),
                                    lambda v: Ifam(
                                        (X, Xd, None), (Z, Zd, None), v
                                    ),
                                ),
                            ),
                        ),
                    ),
                ),
            ),
        )

    c1b = Ifam(
        (aA, trFamR, None), (TRefl(aA), TRefl(trFamR), None), prA
    )

    def pr_slot(g: Tm, pS: Tm) -> Tm:
        return TEq(
            c1b,
            app_beta(
                tapp(
                    pS,
                    aA,
                    trFamR,
                    g,
                    TRefl(aA),
                    TRefl(trFamR),
                    TRefl(g),
                ),
                prA,
            ),
            prD,
        )

    def inner3(bS2: Tm, eS2: Tm, es2: Tm) -> Tm:
        assert isinstance(es2, TEq)

        def mot3(g: Tm, wS: Tm) -> Tm:
            return tpi(
                "S",
                t_sec_g(g),
                lambda pS: tpi(
                    "r",
                    pr_slot(g, pS),
                    lambda r: TEq(
                        c1b,
                        app_beta(
                            tapp(
                                pS,
                                aA,
                                trFamR,
                                bS2,
                                TRefl(aA),
                                TRefl(trFamR),
                                wS,
                            ),
                            prA,
                        ),
                        prD,
                    ),
                ),
            )

        base3 = tlam("S", lambda pS: tlam("r", lambda r: r))
        uPS = tlam(
            nx,
            lambda X: tlam(
                nx + "ᵈ",
                lambda Xd: tlam(
                    nx + "ˢ",
                    lambda Xs: tlam(
                        nz,
                        lambda Z: tlam(
                            nz + "ᵈ",
                            lambda Zd: tlam(
                                nz + "ˢ",
                                lambda Zs: tm_S(
                                    p,
                                    env
                                    + [
                                        _sig(x_src, X, Xd, Xs),
                                        _sig(z_src, Z, Zd, Zs),
                                    ],
                                    level,
                                ),
                            ),
                        ),
                    ),
                ),
            ),
        )
        return tapp(
            tj(es2.ty, es2.lhs, mot3, base3, es2.rhs, eS2, ("g", "w")),
            uPS,
            prS,
        )

    # Middle layer: eliminate the displayed coherence.
    def mot2(h: Tm, wD: Tm) -> Tm:
        return tpi(
            "s",
            tpi("w", aA, lambda w: TApp(h, w)),
            lambda bS2: tpi(
                "c",
                es_ty(aA, TRefl(aA), h, bS2, wD),
                lambda eS2: goal_gen(aA, TRefl(aA), h, bS2, wD, eS2),
            ),
        )

    def base2(bS2: Tm, eS2: Tm) -> Tm:
        es2 = es_ty(aA, TRefl(aA), trFamR, bS2, TRefl(trFamR))
        return inner3(bS2, eS2, es2)

    def l2(bD_: Tm, bS_: Tm, eD_: Tm, eS_: Tm) -> Tm:
        return tapp(
            tj(
                tarr(aA, TType(level)),
                trFamR,
                mot2,
                tlam("s", lambda bS2: tlam("c", lambda eS2: base2(bS2, eS2))),
                bD_,
                eD_,
                (nx + "ᵈ", nz + "ᵈ"),
            ),
            bS_,
            eS_,
        )

    # Outer layer: eliminate the base code equality.
    def mot1(X: Tm, Z: Tm) -> Tm:
        return tpi(
            "D",
            tarr(X, TType(level)),
            lambda bD_: tpi(
                "s",
                tpi("w", X, lambda w: TApp(bD_, w)),
                lambda bS_: tpi(
                    "d",
                    TEq(tarr(X, TType(level)), tr_fam(X, Z), bD_),
                    lambda eD_: tpi(
                        "c",
                        es_ty(X, Z, bD_, bS_, eD_),
                        lambda eS_: goal_gen(X, Z, bD_, bS_, eD_, eS_),
                    ),
                ),
            ),
        )

    base1 = tlam(
        "D",
        lambda bD_: tlam(
            "s",
            lambda bS_: tlam(
                "d", lambda eD_: tlam("c", lambda eS_: l2(bD_, bS_, eD_, eS_))
            ),
        ),
    )
    return tapp(tj(t0, aA, mot1, base1, bA, eA, names), bDf, bSf, eD, eS)


def _sjbetau_S(
    env: Env,
    a: SigTerm,
    p: SigTerm,
    pr: SigTerm,
    names: tuple[str, str],
    level: int,
) -> Tm:
    """Section coherence of the code computation witness: a single
    elimination of the method's coherence; at the canonical method the
    eliminator tower and both endpoint corrections collapse."""
    rfl = SReflU(a)
    jured = SJU(a, p, pr, a, rfl, names)
    c_pr = inst_motive2(p, a, rfl)
    prA = tm_A(pr, env)
    prD = tm_D(pr, env, level)
    prS = tm_S(pr, env, level)
    tyP = tm_A(c_pr, env)
    cDf = tm_D(c_pr, env, level)
    famP = fam_app_D(c_pr, env, prA, level)
    secP = sec_app_S(c_pr, env, prA, level)
    juredA = tm_A(jured, env)

    def mot(v: Tm, wv: Tm) -> Tm:
        jD_g = _sju_D(env, a, p, pr, a, rfl, names, level, prD=v)
        jS_g = _sju_S(env, a, p, pr, a, rfl, names, level, prD=v, prS=wv)
        sec_g = _eqid_sec(
            c_pr,
            jured,
            pr,
            env,
            TRefl(prA),
            level,
            lD=jD_g,
            lS=jS_g,
            rD=v,
            rS=wv,
        )
        return TEq(
            TEq(famP, _tr(tyP, cDf, juredA, prA, TRefl(prA), jD_g), v),
            sec_g,
            TRefl(v),
        )

    return tj(famP, secP, mot, TRefl(TRefl(secP)), prD, prS, ("v", "w"))


# ---------------------------------------------------------------------------
# Packaging: iterated Σ over the telescope, headers, derived statements.
# ---------------------------------------------------------------------------

ALG = "#A"
DIS = "#D"
MOR = "#M"
SEC = "#S"
STAR = "#star"
INDUCTION = "#induction"
RECURSION = "#recursion"
INITIALITY = "#initiality"

DERIVED_NAMES = (INDUCTION, RECURSION, INITIALITY)


def _component(t: Tm, size: int, j: int) -> Tm:
    """Component ``j`` of a left-nested ``size``-tuple ``t``."""
    for _ in range(size - 1 - j):
        t = TProj1(t)
    return TProj2(t)


@dataclass(frozen=True)
class Component:
    """Where one declaration lives inside the nested pairs of a model.

    The component is reached by ``proj1s`` first projections followed by a
    single second projection.
    """

    name: str
    proj1s: int


@dataclass
class Bundle:
    """Closed output of :func:`translate` for one checked signature.

    ``globals`` extends the prelude, in dependency order, with

    * one body-less constant per external assumption (``%`` + its name),
    * definitions ``#A``/``#D``/``#M``/``#S`` holding the four translations
      at their inferred sorts,
    * a postulated model ``#star : #A``, and
    * body-less constants ``#induction``/``#recursion``/``#initiality``
      whose types are the derived statements over ``#star``.
    """

    name: str
    level: int
    ext: list[tuple[str, Tm]]
    components: list[Component]
    globals: Globals
    derived: dict[str, Tm]


def translate(checked: "CheckedModule", level: int = 0) -> Bundle:
    """Package all four translations of a checked signature.

    ``level`` picks the universe the displayed families land in; it widens
    the displayed-algebra and section translations only.
    """
    if level not in (0, 1):
        raise ValueError("level must be 0 or 1")
    if not checked.ok:
        raise ValueError("cannot translate a signature that has diagnostics")

    glob = prelude_globals()
    ext_env: Env = []
    ext_decls: list[tuple[str, Tm]] = []
    for entry in checked.context[: checked.n_ext]:
        cname = "%" + entry.name
        cty = rebase(entry.ty, ext_env)
        glob[cname] = (cty, None)
        ext_env.append(_ext(entry.ty, TConst(cname)))
        ext_decls.append((cname, cty))

    sig_entries = list(checked.context[checked.n_ext :])
    m = len(sig_entries)

    def prefix_env(k: int, parts_of: Callable[[int], tuple]) -> Env:
        env = list(ext_env)
        for j in range(k):
            env.append(_sig(sig_entries[j].ty, *parts_of(j)))
        return env

    def fold_A() -> Tm:
        acc: Tm = TUnit()
        for k in range(m):
            def clause(g: Tm, k: int = k) -> Tm:
                env = prefix_env(k, lambda j: (_component(g, k, j),))
                return ty_A(sig_entries[k].ty, env, 0)

            acc = tsig("γ", acc, clause)
        return acc

    def fold_D(g: Tm) -> Tm:
        acc: Tm = TUnit()
        for k in range(m):
            def clause(d: Tm, k: int = k) -> Tm:
                env = prefix_env(
                    k, lambda j: (_component(g, m, j), _component(d, k, j))
                )
                return ty_D(sig_entries[k].ty, env, _component(g, m, k), level)

            acc = tsig("δ", acc, clause)
        return acc

    def fold_M(g0: Tm, g1: Tm) -> Tm:
        acc: Tm = TUnit()
        for k in range(m):
            def clause(mu: Tm, k: int = k) -> Tm:
                env = prefix_env(
                    k,
                    lambda j: (
                        _component(g0, m, j),
                        _component(g1, m, j),
                        _component(mu, k, j),
                    ),
                )
                return ty_M(
                    sig_entries[k].ty, env, _component(g0, m, k), _component(g1, m, k)
                )

            acc = tsig("φ", acc, clause)
        return acc

    def fold_S(g: Tm, gd: Tm) -> Tm:
        acc: Tm = TUnit()
        for k in range(m):
            def clause(s: Tm, k: int = k) -> Tm:
                env = prefix_env(
                    k,
                    lambda j: (
                        _component(g, m, j),
                        _component(gd, m, j),
                        _component(s, k, j),
                    ),
                )
                return ty_S(
                    sig_entries[k].ty,
                    env,
                    _component(g, m, k),
                    _component(gd, m, k),
                    level,
                )

            acc = tsig("σ", acc, clause)
        return acc

    alg = fold_A()
    glob[ALG] = (TType(infer_sort([], glob, alg)), alg)
    c_alg = TConst(ALG)

    dis = tlam("γ", fold_D)
    assert isinstance(dis, TLam)
    s_dis = infer_sort([c_alg], glob, dis.body)
    glob[DIS] = (tarr(c_alg, TType(s_dis)), dis)
    c_dis = TConst(DIS)

    mor = tlam("γ₀", lambda g0: tlam("γ₁", lambda g1: fold_M(g0, g1)))
    assert isinstance(mor, TLam) and isinstance(mor.body, TLam)
    s_mor = infer_sort([c_alg, c_alg], glob, mor.body.body)
    glob[MOR] = (tarr(c_alg, tarr(c_alg, TType(s_mor))), mor)
    c_mor = TConst(MOR)

    sec = tlam("γ", lambda g: tlam("γᵈ", lambda gd: fold_S(g, gd)))
    assert isinstance(sec, TLam) and isinstance(sec.body, TLam)
    s_sec = infer_sort([c_alg, TApp(c_dis, TVar(0))], glob, sec.body.body)
    glob[SEC] = (tpi("γ", c_alg, lambda g: tarr(TApp(c_dis, g), TType(s_sec))), sec)
    c_sec = TConst(SEC)

    glob[STAR] = (c_alg, None)
    star = TConst(STAR)

    derived = {
        "induction": tpi("γᵈ", TApp(c_dis, star), lambda gd: tapp(c_sec, star, gd)),
        "recursion": tpi("γ", c_alg, lambda g: tapp(c_mor, star, g)),
        "initiality": tpi(
            "γ", c_alg, lambda g: TApp(C_ISCONTR, tapp(c_mor, star, g))
        ),
    }
    glob[INDUCTION] = (derived["induction"], None)
    glob[RECURSION] = (derived["recursion"], None)
    glob[INITIALITY] = (derived["initiality"], None)

    name = sig_entries[0].name if sig_entries else "Sig"
    components = [
        Component(se.name, m - 1 - j) for j, se in enumerate(sig_entries)
    ]
    return Bundle(name, level, ext_decls, components, glob, derived)


def verify_bundle(bundle: Bundle) -> None:
    """Re-check every stored global against its declared type, in order.

    Each entry may depend only on entries before it, so a single left-to-right
    pass both sort-checks every declared type and type-checks every body.
    Raises ``KernelError`` on the first failure.
    """
    acc: Globals = {}
    for name, (ty, body) in bundle.globals.items():
        infer_sort([], acc, ty)
        if body is not None:
            tt_check([], acc, body, ty)
        acc[name] = (ty, body)
