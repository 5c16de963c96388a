"""Reduction: contraction rules, strategies, joinability, call-by-value."""

import pytest

from tvec.corpus import plus_u, unum
from tvec.reduce import (
    DEFAULT_FUEL, FuelExhausted, LEFTMOST_OUTERMOST, NormalForm,
    RIGHTMOST_INNERMOST, Stuck, Value, contract, eval_cbv, is_value,
    joinable, normalize, step_cbv, step_full, step_lo, step_ri,
)
from tvec.syntax import (
    App, BVar, Cons, FVar, Join, Lam, Nil, QApp, QLam, RNat, RVec, Succ,
    Zero, alpha_eq,
)

IDENTITY = Lam("x", BVar(0))
OMEGA_HALF = Lam("x", App(BVar(0), BVar(0)))
OMEGA = App(OMEGA_HALF, OMEGA_HALF)


class TestContract:
    # (fun x => b) v  ~>  b[x := v]
    def test_beta(self):
        assert contract(App(IDENTITY, Zero())) == Zero()

    # rnat b s 0  ~>  b
    def test_rnat_zero(self):
        assert contract(RNat(FVar("b"), FVar("s"), Zero())) == FVar("b")

    # rnat b s (S a)  ~>  s a (rnat b s a)
    def test_rnat_succ(self):
        r = RNat(FVar("b"), FVar("s"), Succ(Zero()))
        assert contract(r) == App(
            App(FVar("s"), Zero()), RNat(FVar("b"), FVar("s"), Zero()))

    # rvec b s nil  ~>  b
    def test_rvec_nil(self):
        assert contract(RVec(FVar("b"), FVar("s"), Nil())) == FVar("b")

    # rvec b s (cons a1 a2)  ~>  s a1 a2 (rvec b s a2)
    def test_rvec_cons(self):
        r = RVec(FVar("b"), FVar("s"), Cons(Zero(), Nil()))
        assert contract(r) == App(
            App(App(FVar("s"), Zero()), Nil()),
            RVec(FVar("b"), FVar("s"), Nil()))

    # (qfun => b) applied  ~>  b
    def test_qapp_shell(self):
        assert contract(QApp(QLam(Zero()))) == Zero()

    def test_non_redexes(self):
        for t in (Zero(), FVar("x"), App(Zero(), Zero()),
                  RNat(Zero(), Zero(), FVar("n"))):
            assert contract(t) is None


class TestStrategies:
    def test_full_collects_all_one_step_reducts(self):
        # both the root redex and the inner one are available, and they
        # disagree when the function discards its argument
        k = Lam("x", Zero())
        t = App(k, App(IDENTITY, Zero()))
        reducts = step_full(t)
        assert reducts == {Zero(), App(k, Zero())}

    def test_leftmost_outermost_takes_root_first(self):
        t = App(IDENTITY, App(IDENTITY, Zero()))
        assert step_lo(t) == App(IDENTITY, Zero())

    def test_rightmost_innermost_takes_argument_first(self):
        t = App(IDENTITY, App(IDENTITY, Zero()))
        assert step_ri(t) == App(IDENTITY, Zero())
        # the two strategies differ on which redex fired; on this term
        # the results coincide, so distinguish via a discarding function
        k = Lam("x", Zero())
        t2 = App(k, App(IDENTITY, Zero()))
        assert step_lo(t2) == Zero()
        assert step_ri(t2) == App(k, Zero())

    def test_reduces_under_binders(self):
        t = Lam("x", App(IDENTITY, BVar(0)))
        assert step_lo(t) == Lam("x", BVar(0))

    def test_reduces_under_quasi_shell(self):
        t = QLam(App(IDENTITY, Zero()))
        assert step_lo(t) == QLam(Zero())


class TestNormalize:
    def test_plus_two_two(self):
        out = normalize(plus_u(unum(2), unum(2)))
        assert isinstance(out, NormalForm)
        assert out.term == unum(4)

    def test_strategies_agree_on_plus(self):
        lo = normalize(plus_u(unum(2), unum(2)), strategy=LEFTMOST_OUTERMOST)
        ri = normalize(plus_u(unum(2), unum(2)),
                       strategy=RIGHTMOST_INNERMOST)
        assert alpha_eq(lo.term, ri.term)

    def test_normal_form_is_fixed_point(self):
        out = normalize(plus_u(unum(1), unum(1)))
        again = normalize(out.term)
        assert again.steps == 0 and again.term == out.term

    @pytest.mark.parametrize("fuel", [1, 7, 100, 10000])
    def test_omega_exhausts_any_fuel(self, fuel):
        out = normalize(OMEGA, fuel)
        assert isinstance(out, FuelExhausted)
        assert out.fuel == fuel
        assert alpha_eq(out.term, OMEGA)  # omega steps to itself

    def test_open_terms_normalize(self):
        t = App(IDENTITY, FVar("n"))
        out = normalize(t)
        assert out.term == FVar("n")


class TestJoinable:
    def test_equal_after_reduction(self):
        assert joinable(plus_u(unum(2), unum(2)), unum(4)) is True

    def test_open_instance(self):
        # l2 and plus 0 l2 meet because the recursor consumes the literal 0
        assert joinable(FVar("l2"), plus_u(unum(0), FVar("l2"))) is True

    def test_distinct_normal_forms(self):
        assert joinable(unum(0), unum(1)) is False

    def test_fuel_exhaustion_is_not_a_verdict(self):
        out = joinable(OMEGA, Zero(), fuel=50)
        assert isinstance(out, FuelExhausted)


class TestCallByValue:
    @pytest.mark.parametrize("v", [
        Zero(), unum(3), Nil(), Cons(Zero(), Nil()), Join(), IDENTITY,
        QLam(App(Zero(), Zero())),
    ])
    def test_values(self, v):
        assert is_value(v)
        out = eval_cbv(v)
        assert isinstance(out, Value) and out.steps == 0

    def test_non_values(self):
        for t in (App(Zero(), Zero()), FVar("x"), Succ(App(Zero(), Zero())),
                  RNat(Zero(), Zero(), Zero())):
            assert not is_value(t)

    def test_plus_evaluates(self):
        out = eval_cbv(plus_u(unum(2), unum(3)))
        assert isinstance(out, Value)
        assert out.term == unum(5)

    def test_stuck_application_of_zero(self):
        out = eval_cbv(App(Zero(), Zero()))
        assert isinstance(out, Stuck)
        assert out.term == App(Zero(), Zero())

    def test_stuck_free_variable(self):
        out = eval_cbv(App(FVar("f"), Zero()))
        assert isinstance(out, Stuck)

    def test_shell_suspends_its_body(self):
        # the body 0 0 would be stuck, but the shell never runs it
        out = eval_cbv(QLam(App(Zero(), Zero())))
        assert isinstance(out, Value) and out.steps == 0

    def test_operand_evaluated_before_beta(self):
        t = App(Lam("x", Zero()), App(IDENTITY, Zero()))
        first = step_cbv(t)
        assert first == App(Lam("x", Zero()), Zero())

    def test_fuel_exhaustion(self):
        assert isinstance(eval_cbv(OMEGA, 25), FuelExhausted)

    def test_rejects_nonpositive_fuel(self):
        with pytest.raises(ValueError):
            eval_cbv(Zero(), 0)
        with pytest.raises(ValueError):
            normalize(Zero(), -3)
