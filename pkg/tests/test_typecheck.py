"""Base-mode checking: one syntax-directed rule per construct."""

import pytest

from tvec.corpus import (
    append_body, append_ty, num, p1_body, p1_ty, plus_body, plus_ty,
)
from tvec.erase import erase
from tvec.syntax import (
    AllTy, BVar, Context, EqTy, FVar, NatTy, PiTy, Succ, TApp, TAppImp,
    TCast, TCons, TJoin, TLam, TLamImp, TNil, TQLam, TRNat, TRVec, TSucc,
    TZero, VecTy, Zero, alpha_eq,
)
from tvec.typecheck import (
    BASE_RULES, Checker, Failure, Inferred, check_against, infer,
)

NAT = NatTy()


def inferred(ctx, t):
    res = infer(ctx, t)
    assert isinstance(res, Inferred), res
    return res.type


def failure(ctx, t):
    res = infer(ctx, t)
    assert isinstance(res, Failure), f"expected a failure, got {res}"
    return res.diagnostic


class TestRulePositive:
    @pytest.mark.parametrize("t, ty", [
        (TZero(), NAT),
        (num(3), NAT),
        (TNil(NAT), VecTy(NAT, Zero())),
        (TCons(TZero(), TNil(NAT)), VecTy(NAT, Succ(Zero()))),
        (TLam("x", NAT, BVar(0)), PiTy("x", NAT, NAT)),
        (TApp(TLam("x", NAT, BVar(0)), TZero()), NAT),
        (TJoin(TZero(), TZero()), EqTy(Zero(), Zero())),
    ])
    def test_closed(self, t, ty):
        assert alpha_eq(inferred(Context(), t), ty)

    def test_var(self):
        ctx = Context().extend("n", NAT)
        assert inferred(ctx, FVar("n")) == NAT

    def test_application_substitutes_erasure_into_codomain(self):
        # f : Pi n:Nat. Vec Nat n, so f 2 : Vec Nat 2
        ctx = Context().extend("f", PiTy("n", NAT, VecTy(NAT, BVar(0))))
        got = inferred(ctx, TApp(FVar("f"), num(2)))
        assert got == VecTy(NAT, erase(num(2)))

    def test_implicit_abstraction(self):
        # ifun l => join: l never reaches the erasure
        t = TLamImp("l", NAT, TJoin(TZero(), TZero()))
        assert inferred(Context(), t) == AllTy("l", NAT,
                                               EqTy(Zero(), Zero()))

    def test_implicit_application(self):
        t = TAppImp(TLamImp("l", NAT, TJoin(TZero(), TZero())), num(7))
        assert inferred(Context(), t) == EqTy(Zero(), Zero())

    def test_implicit_binder_may_appear_in_annotations(self):
        # ifun l => nil-cast chain may mention l in types freely
        t = TLamImp("l", NAT,
                    TCast("w", VecTy(NAT, Zero()),
                          TJoin(TNil(NAT), TNil(NAT)), TNil(NAT)))
        res = infer(Context(), t)
        assert isinstance(res, Inferred)

    def test_rnat(self):
        # rnat [x. Nat] 0 (fun y => fun u => S u) 2 : Nat
        step = TLam("y", NAT, TLam("u", NAT, TSucc(BVar(0))))
        t = TRNat("x", NAT, TZero(), step, num(2))
        assert inferred(Context(), t) == NAT

    def test_rnat_dependent_motive(self):
        # rnat [x. Vec Nat x] nil[Nat] step n : Vec Nat |n|
        ctx = Context().extend("n", NAT)
        step = TLam("y", NAT,
                    TLam("u", VecTy(NAT, BVar(0)),
                         TCons(TZero(), BVar(0))))
        t = TRNat("x", VecTy(NAT, BVar(0)), TNil(NAT), step, FVar("n"))
        assert inferred(ctx, t) == VecTy(NAT, FVar("n"))

    def test_cast_transports_along_equation(self):
        # p : 0 = n |- cast [w. Vec Nat w] p nil : Vec Nat n
        ctx = (Context().extend("n", NAT)
               .extend("p", EqTy(Zero(), FVar("n"))))
        t = TCast("w", VecTy(NAT, BVar(0)), FVar("p"), TNil(NAT))
        assert inferred(ctx, t) == VecTy(NAT, FVar("n"))

    def test_corpus_definitions(self):
        assert alpha_eq(inferred(Context(), plus_body()), plus_ty())
        assert alpha_eq(inferred(Context(), p1_body()), p1_ty())
        assert alpha_eq(inferred(Context(), append_body()), append_ty())


class TestRuleNegative:
    @pytest.mark.parametrize("ctx, t, rule, code", [
        (Context(), FVar("ghost"), "var", "unbound-variable"),
        (Context(), BVar(0), "var", "unbound-variable"),
        (Context(), TSucc(TNil(NAT)), "succ", "type-mismatch"),
        (Context(), TCons(TZero(), TZero()), "cons", "shape-mismatch"),
        (Context(), TApp(TZero(), TZero()), "app", "shape-mismatch"),
        (Context(), TApp(TLam("x", NAT, BVar(0)), TNil(NAT)),
         "app", "type-mismatch"),
        (Context(), TJoin(TZero(), TSucc(TZero())), "join", "join-distinct"),
        (Context(), TCast("w", NAT, TZero(), TZero()),
         "cast", "shape-mismatch"),
        (Context(), TNil(VecTy(NAT, FVar("n"))), "nil", "scope-violation"),
        (Context(), TQLam("q", NAT, TZero()), "quasi-abs", "mode-violation"),
    ])
    def test_codes(self, ctx, t, rule, code):
        diag = failure(ctx, t)
        assert diag.rule == rule
        assert diag.code == code

    def test_join_zero_succ_zero_rejected(self):
        # there must be no proof of 0 = S 0
        diag = failure(Context(), TJoin(TZero(), TSucc(TZero())))
        assert diag.code == "join-distinct"
        notes = [c.message for c in diag.children]
        assert any("left normalizes to 0" in m for m in notes)
        assert any("right normalizes to 1" in m for m in notes)

    def test_join_fuel_exhaustion_is_undecided(self):
        # plus 2 2 needs more than three steps to meet 4
        checker = Checker(fuel=3)
        res = checker.infer(
            Context(),
            TJoin(TApp(TApp(plus_body(), num(2)), num(2)), num(4)))
        assert isinstance(res, Failure)
        assert res.diagnostic.code == "fuel-exhausted"

    def test_implicit_binder_must_not_survive_erasure(self):
        t = TLamImp("l", NAT, TSucc(BVar(0)))
        diag = failure(Context(), t)
        assert diag.rule == "spec-abs"
        assert diag.code == "erased-occurrence"

    def test_ill_scoped_context_is_rejected_up_front(self):
        ctx = Context().extend("v", VecTy(NAT, FVar("n")))
        diag = failure(ctx, TZero())
        assert diag.code == "context-ill-scoped"

    def test_rnat_base_must_match_motive_at_zero(self):
        t = TRNat("x", VecTy(NAT, BVar(0)), TZero(),
                  TLam("y", NAT, TLam("u", NAT, BVar(0))), num(1))
        diag = failure(Context(), t)
        assert diag.rule == "rnat" and diag.code == "type-mismatch"

    def test_check_against_reports_both_types(self):
        res = check_against(Context(), TZero(), VecTy(NAT, Zero()))
        assert isinstance(res, Failure)
        assert res.diagnostic.code == "type-mismatch"
        assert res.diagnostic.expected == "Vec Nat 0"
        assert res.diagnostic.actual == "Nat"


class TestCheckerBookkeeping:
    def test_rule_hits_count_attempts(self):
        checker = Checker()
        checker.infer(Context(), TApp(TLam("x", NAT, BVar(0)), TZero()))
        assert checker.rule_hits["app"] == 1
        assert checker.rule_hits["abs"] == 1
        assert checker.rule_hits["zero"] == 1

    def test_failed_attempts_still_count(self):
        checker = Checker()
        checker.infer(Context(), TJoin(TZero(), TSucc(TZero())))
        assert checker.rule_hits["join"] == 1

    def test_base_rule_set(self):
        assert "quasi-abs" not in BASE_RULES
        assert {"spec-abs", "spec-app", "rvec"} <= BASE_RULES

    def test_diagnostics_serialize(self):
        diag = failure(Context(), TJoin(TZero(), TSucc(TZero())))
        blob = diag.to_json()
        assert blob["code"] == "join-distinct"
        assert [c["severity"] for c in blob["children"]] == ["note", "note"]
        assert "distinct normal forms" in diag.render()
