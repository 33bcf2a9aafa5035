"""Kernel behaviour: reduction, conversion, bidirectional checking, path library."""
import itertools

import pytest

from hiit_forge.target import (
    FuelExhausted,
    KernelError,
    PoisonedVariable,
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
    _Fuel,
    _only_j_primitives,
    check_prelude,
    conv,
    prelude_globals,
    tapp,
    tj,
    tt_check,
    tt_infer,
    whnf,
)

G = prelude_globals()

# Context: A : Type0, t : A, u : A, p : Eq A t u  (types relative to their prefix).
PATH_CTX = [TType(0), TVar(0), TVar(1), TEq(TVar(2), TVar(1), TVar(0))]
A, T, U, P = TVar(3), TVar(2), TVar(1), TVar(0)


def test_beta_reduction():
    assert whnf(TApp(TLam("x", TVar(0)), TTt()), G) == TTt()


def test_projections_compute():
    pair = TPair(TTt(), TType(0))
    assert whnf(TProj1(pair), G) == TTt()
    assert whnf(TProj2(pair), G) == TType(0)


# Motive x z. Eq A t x, written under its two binders (A and t shift by 2).
MOT = TEq(TVar(5), TVar(4), TVar(1))


def test_j_computes_on_refl():
    j = TJ(A, T, MOT, TRefl(T), T, TRefl(T))
    assert whnf(j, G) == TRefl(T)


def test_j_stuck_on_neutral_path():
    j = TJ(A, T, MOT, TRefl(T), U, P)
    assert isinstance(whnf(j, G), TJ)


def test_compose_computes_on_second_refl():
    t = tapp(TConst("compose"), A, T, U, U, P, TRefl(U))
    assert whnf(t, G) == P


def test_compose_stuck_on_first_refl():
    t = tapp(TConst("compose"), A, T, T, U, TRefl(T), P)
    assert isinstance(whnf(t, G), TJ)


def test_inverse_refl_reduces():
    t = tapp(TConst("inverse"), A, T, T, TRefl(T))
    assert whnf(t, G) == TRefl(T)


def test_inv_refl_reduces():
    t = tapp(TConst("inv"), A, T, T, TRefl(T))
    assert whnf(t, G) == TRefl(TRefl(T))


def test_eta_pi():
    # f : A -> A;  (λ x → f x) ≡ f
    ctx = [TType(0), TPi("x", TVar(0), TVar(1))]
    f = TVar(0)
    fty = TPi("x", TVar(1), TVar(2))
    expanded = TLam("x", TApp(TVar(1), TVar(0)))
    assert conv(ctx, G, expanded, f, fty)


def test_eta_unit():
    ctx = [TUnit(), TUnit()]
    assert conv(ctx, G, TVar(0), TVar(1), TUnit())
    assert conv(ctx, G, TVar(0), TTt(), TUnit())


def test_eta_sigma():
    ctx = [TType(0), TSigma("a", TVar(0), TVar(1))]
    p = TVar(0)
    pty = TSigma("a", TVar(1), TVar(2))
    assert conv(ctx, G, TPair(TProj1(p), TProj2(p)), p, pty)


def test_distinct_variables_do_not_convert():
    assert not conv(PATH_CTX, G, T, U, A)


def test_refl_checks_only_at_matching_endpoints():
    tt_check(PATH_CTX, G, TRefl(T), TEq(A, T, T))
    with pytest.raises(KernelError):
        tt_check(PATH_CTX, G, TRefl(T), TEq(A, T, U))


def test_cumulativity():
    tt_check([], G, TType(0), TType(2))
    tt_check([], G, TUnit(), TType(1))
    # covariant codomains: (x : A) -> Type0  ≤  (x : A) -> Type2
    ctx = [TType(0)]
    f = TLam("x", TVar(1))
    tt_check(ctx, G, f, TPi("x", TVar(0), TType(0)))
    tt_check(ctx, G, f, TPi("x", TVar(0), TType(2)))


def test_strict_level_equality_in_conversion():
    assert not conv([], G, TType(0), TType(1), TType(2))


def test_poisoned_variable():
    with pytest.raises(PoisonedVariable):
        tt_infer([None], G, TVar(0))


def test_fuel_exhaustion():
    t = TTt()
    for _ in range(10):
        t = TApp(TLam("x", TVar(0)), t)
    with pytest.raises(FuelExhausted):
        whnf(t, G, _Fuel(3))


def test_lambda_needs_a_checking_type():
    with pytest.raises(KernelError):
        tt_infer([], G, TLam("x", TVar(0)))


def test_prelude_checks():
    check_prelude()


def test_prelude_is_j_definable():
    for name, (_, body) in G.items():
        assert body is not None
        assert _only_j_primitives(body), name


def test_prelude_references_stay_inside_the_library():
    def consts(t):
        if isinstance(t, TConst):
            yield t.name
        for f in getattr(t, "__dataclass_fields__", {}):
            v = getattr(t, f)
            if hasattr(v, "__dataclass_fields__"):
                yield from consts(v)

    for name, (ty, body) in G.items():
        for ref in itertools.chain(consts(ty), consts(body)):
            assert ref in G, (name, ref)


def test_j_inference():
    j = TJ(A, T, MOT, TRefl(T), U, P)
    assert tt_infer(PATH_CTX, G, j) == TEq(A, T, U)


def test_transport_along_refl_disappears():
    ctx = PATH_CTX + [TPi("x", TVar(3), TType(0)), TApp(TVar(0), TVar(3))]
    pfam, x = TVar(1), TVar(0)
    t = tapp(TConst("tr"), TVar(5), pfam, TVar(4), TVar(4), TRefl(TVar(4)), x)
    assert whnf(t, G) == x


# ---------------------------------------------------------------------------
# Subject reduction over every well-typed term assembled from a small menu.
# Context: A : Type0, a : A, f : A -> A, pr : (x : A) × A, p : Eq A a a.

_SR_CTX = [
    TType(0),
    TVar(0),
    TPi("x", TVar(1), TVar(2)),
    TSigma("x", TVar(2), TVar(3)),
    TEq(TVar(3), TVar(2), TVar(2)),
]
_LEAVES = [TVar(i) for i in range(5)] + [
    TTt(),
    TUnit(),
    TType(0),
    TConst("inverse"),
    TConst("compose"),
]
_UNARY = [TRefl, TProj1, TProj2, lambda b: TLam("x", b)]
_BINARY = [TApp, TPair]


def _terms(size):
    if size == 1:
        yield from _LEAVES
        return
    for mk in _UNARY:
        for sub in _terms(size - 1):
            yield mk(sub)
    for mk in _BINARY:
        for ls in range(1, size - 1):
            for a in _terms(ls):
                for b in _terms(size - 1 - ls):
                    yield mk(a, b)


def test_subject_reduction_small_terms():
    well_typed = reduced = 0
    for size in range(1, 6):
        for t in _terms(size):
            try:
                ty = tt_infer(_SR_CTX, G, t)
            except KernelError:
                continue
            well_typed += 1
            n = whnf(t, G)
            tt_check(_SR_CTX, G, n, ty)
            if n != t:
                reduced += 1
    assert well_typed > 80
    assert reduced > 10
