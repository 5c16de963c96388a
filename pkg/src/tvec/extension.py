"""Large eliminations: ifzero types with quasi-implicit products.

Large-elimination mode swaps the implicit product rules for quasi-implicit
ones (same side condition, but inhabitants carry an explicit erased shell
so progress survives) and adds fold/unfold forms that move between a
branch type and the corresponding `ifzero` type.  Unfolding matches the
scrutinee purely syntactically: `unfoldz` wants literally `ifzero 0 _ _`,
`unfolds [w]` wants a scrutinee alpha-equal to `S |w|`.  Any reduction of
the scrutinee must be routed through an explicit cast first.
"""

from __future__ import annotations

from .erase import erase
from .reduce import DEFAULT_FUEL
from .syntax import (
    AllTy, AnnTerm, Context, IfZeroTy, NatTy, Succ, TAppImp, TFoldS, TFoldZ,
    TLamImp, TQApp, TQLam, TUnfoldS, TUnfoldZ, Ty, Zero, alpha_eq, open1,
)
from .typecheck import CheckResult, Checker, Mode, _fmt


class ExtChecker(Checker):
    """Checker for large-elimination mode."""

    mode = Mode.LARGE_ELIM

    # implicit forms are base-mode only

    def _rule_spec_abs(self, ctx: Context, t: TLamImp) -> Ty:
        self._mode_fail("spec-abs", t, "implicit abstraction")

    def _rule_spec_app(self, ctx: Context, t: TAppImp) -> Ty:
        self._mode_fail("spec-app", t, "implicit application")

    # ctx, x:A |- t : B    x not free in |t|
    # ------------------------------------------ qfun x:A => t : All x:A. B
    def _rule_quasi_abs(self, ctx: Context, t: TQLam) -> Ty:
        self._hit("quasi-abs")
        hint, dom, cod = self._binder("quasi-abs", ctx, t, erased_absent=True)
        return AllTy(hint, dom, cod)

    # f : All x:A. B    w : A
    # ------------------------------------------ f @-[w] : B[x := |w|]
    def _rule_quasi_app(self, ctx: Context, t: TQApp) -> Ty:
        self._hit("quasi-app")
        fn_ty = self._infer(ctx, t.fn)
        if not isinstance(fn_ty, AllTy):
            self._fail("quasi-app", t.fn,
                       "quasi-implicit application head is not a "
                       "quasi-implicit product",
                       code="shape-mismatch", actual=_fmt(fn_ty))
        wit_ty = self._infer(ctx, t.witness)
        self._expect_alpha("quasi-app", t.witness, wit_ty, fn_ty.dom,
                           "quasi-implicit witness")
        return open1(fn_ty.cod, erase(t.witness))

    # t : A
    # ------------------------------------------ foldz [B] t : ifzero 0 A B
    def _rule_fold_zero(self, ctx: Context, t: TFoldZ) -> Ty:
        self._hit("fold-zero")
        self._scope_check("fold-zero", t, t.other, ctx)
        body_ty = self._infer(ctx, t.body)
        return IfZeroTy(Zero(), body_ty, t.other)

    # t : ifzero 0 A B
    # ------------------------------------------ unfoldz t : A
    def _rule_unfold_zero(self, ctx: Context, t: TUnfoldZ) -> Ty:
        self._hit("unfold-zero")
        body_ty = self._infer(ctx, t.body)
        if not isinstance(body_ty, IfZeroTy):
            self._fail("unfold-zero", t.body,
                       "unfoldz subject is not an ifzero type",
                       code="shape-mismatch", actual=_fmt(body_ty))
        if not alpha_eq(body_ty.scrut, Zero()):
            self._fail("unfold-zero", t.body,
                       "unfoldz needs the scrutinee to be literally 0",
                       code="scrutinee-mismatch", actual=_fmt(body_ty))
        return body_ty.on_zero

    # w : Nat    t : B
    # ------------------------------------------ folds [w][A] t : ifzero (S |w|) A B
    def _rule_fold_succ(self, ctx: Context, t: TFoldS) -> Ty:
        self._hit("fold-succ")
        self._scope_check("fold-succ", t, t.zero_ty, ctx)
        wit_ty = self._infer(ctx, t.witness)
        self._expect_alpha("fold-succ", t.witness, wit_ty, NatTy(),
                           "folds witness")
        body_ty = self._infer(ctx, t.body)
        return IfZeroTy(Succ(erase(t.witness)), t.zero_ty, body_ty)

    # w : Nat    t : ifzero (S |w|) A B
    # ------------------------------------------ unfolds [w] t : B
    def _rule_unfold_succ(self, ctx: Context, t: TUnfoldS) -> Ty:
        self._hit("unfold-succ")
        wit_ty = self._infer(ctx, t.witness)
        self._expect_alpha("unfold-succ", t.witness, wit_ty, NatTy(),
                           "unfolds witness")
        body_ty = self._infer(ctx, t.body)
        if not isinstance(body_ty, IfZeroTy):
            self._fail("unfold-succ", t.body,
                       "unfolds subject is not an ifzero type",
                       code="shape-mismatch", actual=_fmt(body_ty))
        if not alpha_eq(body_ty.scrut, Succ(erase(t.witness))):
            self._fail("unfold-succ", t.body,
                       "unfolds needs the scrutinee to be literally "
                       "S of the erased witness; no normalization is applied",
                       code="scrutinee-mismatch",
                       expected=_fmt(Succ(erase(t.witness))),
                       actual=_fmt(body_ty.scrut))
        return body_ty.on_succ


def infer_ext(ctx: Context, t: AnnTerm, fuel: int = DEFAULT_FUEL) -> CheckResult:
    """Compute the type of an annotated term in large-elimination mode."""
    return ExtChecker(fuel).infer(ctx, t)


def check_against_ext(ctx: Context, t: AnnTerm, expected: Ty,
                      fuel: int = DEFAULT_FUEL) -> CheckResult:
    """Check against a declared type in large-elimination mode."""
    return ExtChecker(fuel).check_against(ctx, t, expected)


def checker_for(mode: Mode, fuel: int = DEFAULT_FUEL) -> Checker:
    """The checker matching a mode."""
    return ExtChecker(fuel) if mode is Mode.LARGE_ELIM else Checker(fuel)
