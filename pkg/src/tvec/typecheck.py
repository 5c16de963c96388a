"""Syntax-directed type computation for annotated terms.

Each annotated construct determines exactly one rule, so checking is a
single recursive pass.  All type comparisons are alpha-equivalence; there
is no conversion rule.  Conversion happens only through explicit casts,
whose equations are produced by `join`, which in turn decides joinability
by fuel-bounded normalization of erasures.  A fuel-exhausted joinability
test is reported as undecided, never as a mismatch.

The checker runs in one of two modes.  Base mode accepts implicit
abstraction and application; large-elimination mode replaces them with the
quasi-implicit and fold/unfold forms (see extension.py, which subclasses
`Checker`).  Rule attempts are tallied in `rule_hits` so the self-test
suite can assert coverage.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass

from .erase import erase
from .reduce import DEFAULT_FUEL, FuelExhausted, joinable, normalize
from .syntax import (
    AllTy, AnnTerm, BVar, Cons, Context, EqTy, FVar, NatTy, Nil, PiTy, Span,
    Succ, TApp, TAppImp, TCast, TCons, TFoldS, TFoldZ, TJoin, TLam, TLamImp,
    TNil, TQApp, TQLam, TRNat, TRVec, TSucc, TUnfoldS, TUnfoldZ, TZero, Ty,
    VecTy, Zero, alpha_eq, close1, ctx_ok, free_vars, fresh_name, open1,
    open2,
)


class Mode(enum.Enum):
    BASE = "base"
    LARGE_ELIM = "large-elim"


BASE_RULES = frozenset({
    "var", "zero", "succ", "nil", "cons", "abs", "app", "spec-abs",
    "spec-app", "rnat", "rvec", "join", "cast",
})

EXT_RULES = frozenset({
    "var", "zero", "succ", "nil", "cons", "abs", "app", "rnat", "rvec",
    "join", "cast", "quasi-abs", "quasi-app", "fold-zero", "unfold-zero",
    "fold-succ", "unfold-succ",
})


@dataclass(frozen=True)
class Diagnostic:
    rule: str
    message: str
    span: Span
    code: str = "error"
    expected: str | None = None
    actual: str | None = None
    severity: str = "error"
    children: tuple["Diagnostic", ...] = ()

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "code": self.code,
            "message": self.message,
            "severity": self.severity,
            "span": {"start": self.span.start, "end": self.span.end},
            "expected": self.expected,
            "actual": self.actual,
            "children": [c.to_json() for c in self.children],
        }

    def render(self, indent: int = 0) -> str:
        pad = "  " * indent
        lines = [f"{pad}{self.severity}[{self.rule}]: {self.message}"]
        if self.span != Span(0, 0):
            lines.append(f"{pad}  at {self.span.start}..{self.span.end}")
        if self.expected is not None:
            lines.append(f"{pad}  expected: {self.expected}")
        if self.actual is not None:
            lines.append(f"{pad}  actual:   {self.actual}")
        for child in self.children:
            lines.append(child.render(indent + 1))
        return "\n".join(lines)


@dataclass(frozen=True)
class Inferred:
    type: Ty


@dataclass(frozen=True)
class Failure:
    diagnostic: Diagnostic


CheckResult = Inferred | Failure


class _CheckError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


def _fmt(node) -> str:
    from .frontend import pretty
    return pretty(node)


def _span(node) -> Span:
    return node.span or Span(0, 0)


class Checker:
    """Base-mode checker; large-elimination mode subclasses it."""

    mode = Mode.BASE

    def __init__(self, fuel: int = DEFAULT_FUEL):
        self.fuel = fuel
        self.rule_hits: Counter[str] = Counter()

    # -- public entry points -------------------------------------------

    def infer(self, ctx: Context, t: AnnTerm) -> CheckResult:
        if not ctx_ok(ctx):
            return Failure(Diagnostic(
                "context", "context is not well-scoped", Span(0, 0),
                code="context-ill-scoped"))
        try:
            return Inferred(self._infer(ctx, t))
        except _CheckError as err:
            return Failure(err.diagnostic)

    def check_against(self, ctx: Context, t: AnnTerm, expected: Ty) -> CheckResult:
        res = self.infer(ctx, t)
        if isinstance(res, Failure):
            return res
        if not alpha_eq(res.type, expected):
            return Failure(Diagnostic(
                "check", "inferred type does not match the declared type",
                _span(t), code="type-mismatch",
                expected=_fmt(expected), actual=_fmt(res.type)))
        return res

    # -- failure helpers -----------------------------------------------

    def _hit(self, rule: str) -> None:
        self.rule_hits[rule] += 1

    def _fail(self, rule: str, node, message: str, *, code: str,
              expected: str | None = None, actual: str | None = None,
              children: tuple[Diagnostic, ...] = ()) -> None:
        raise _CheckError(Diagnostic(
            rule, message, _span(node), code=code,
            expected=expected, actual=actual, children=children))

    def _scope_check(self, rule: str, node, ty: Ty, ctx: Context) -> None:
        loose = free_vars(ty) - ctx.names()
        if loose:
            names = ", ".join(sorted(loose))
            self._fail(rule, node,
                       f"annotation mentions names not in scope: {names}",
                       code="scope-violation", actual=_fmt(ty))

    def _expect_alpha(self, rule: str, node, actual: Ty, expected: Ty,
                      what: str) -> None:
        if not alpha_eq(actual, expected):
            self._fail(rule, node, f"{what} has the wrong type",
                       code="type-mismatch",
                       expected=_fmt(expected), actual=_fmt(actual))

    def _mode_fail(self, rule: str, node, construct: str) -> None:
        self._fail(rule, node,
                   f"{construct} is not part of {self.mode.value} mode",
                   code="mode-violation")

    # -- the rules -----------------------------------------------------

    def _infer(self, ctx: Context, t: AnnTerm) -> Ty:
        match t:
            # ---------------------------------------- x : ctx(x)
            case FVar(name):
                self._hit("var")
                ty = ctx.lookup(name)
                if ty is None:
                    self._fail("var", t, f"unbound variable {name}",
                               code="unbound-variable")
                return ty
            case BVar():
                self._hit("var")
                self._fail("var", t, "dangling bound variable "
                           "(term is not locally closed)",
                           code="unbound-variable")
            # ---------------------------------------- 0 : Nat
            case TZero():
                self._hit("zero")
                return NatTy()
            # t : Nat
            # ---------------------------------------- S t : Nat
            case TSucc(pred):
                self._hit("succ")
                pty = self._infer(ctx, pred)
                self._expect_alpha("succ", pred, pty, NatTy(),
                                   "successor argument")
                return NatTy()
            # ---------------------------------------- nil A : Vec A 0
            case TNil(elem):
                self._hit("nil")
                self._scope_check("nil", t, elem, ctx)
                return VecTy(elem, Zero())
            # h : A   tl : Vec A n
            # ---------------------------------------- cons h tl : Vec A (S n)
            case TCons(head, tail):
                self._hit("cons")
                tail_ty = self._infer(ctx, tail)
                if not isinstance(tail_ty, VecTy):
                    self._fail("cons", tail, "cons tail is not a vector",
                               code="shape-mismatch", actual=_fmt(tail_ty))
                head_ty = self._infer(ctx, head)
                self._expect_alpha("cons", head, head_ty, tail_ty.elem,
                                   "cons head")
                return VecTy(tail_ty.elem, Succ(tail_ty.length))
            # ctx, x:A |- t : B
            # ---------------------------------------- fun x:A => t : Pi x:A. B
            case TLam():
                self._hit("abs")
                hint, dom, cod = self._binder("abs", ctx, t, erased_absent=False)
                return PiTy(hint, dom, cod)
            case TLamImp():
                return self._rule_spec_abs(ctx, t)
            # f : Pi x:A. B   a : A
            # ---------------------------------------- f a : B[x := |a|]
            case TApp(fn, arg):
                self._hit("app")
                fn_ty = self._infer(ctx, fn)
                if not isinstance(fn_ty, PiTy):
                    self._fail("app", fn, "application head is not a function",
                               code="shape-mismatch", actual=_fmt(fn_ty))
                arg_ty = self._infer(ctx, arg)
                self._expect_alpha("app", arg, arg_ty, fn_ty.dom,
                                   "function argument")
                return open1(fn_ty.cod, erase(arg))
            case TAppImp():
                return self._rule_spec_app(ctx, t)
            # t : A   t' : B   |t| and |t'| joinable
            # ---------------------------------------- join t t' : |t| = |t'|
            case TJoin(lhs, rhs):
                self._hit("join")
                self._infer(ctx, lhs)
                self._infer(ctx, rhs)
                return self._join_type(t, lhs, rhs)
            # p : a = b   t : M[x := a]
            # ---------------------------------------- cast x.M p t : M[x := b]
            case TCast(_, motive, proof, body):
                self._hit("cast")
                self._scope_check("cast", t, motive, ctx)
                proof_ty = self._infer(ctx, proof)
                if not isinstance(proof_ty, EqTy):
                    self._fail("cast", proof, "cast proof is not an equation",
                               code="shape-mismatch", actual=_fmt(proof_ty))
                body_ty = self._infer(ctx, body)
                self._expect_alpha("cast", body, body_ty,
                                   open1(motive, proof_ty.lhs), "cast subject")
                return open1(motive, proof_ty.rhs)
            # n : Nat   b : M[0]   s : Pi y:Nat. Pi u:M[y]. M[S y]
            # ---------------------------------------- rnat x.M b s n : M[|n|]
            case TRNat(_, motive, base, step, scrut):
                self._hit("rnat")
                self._scope_check("rnat", t, motive, ctx)
                scrut_ty = self._infer(ctx, scrut)
                self._expect_alpha("rnat", scrut, scrut_ty, NatTy(),
                                   "recursor scrutinee")
                base_ty = self._infer(ctx, base)
                self._expect_alpha("rnat", base, base_ty,
                                   open1(motive, Zero()), "recursor base")
                step_ty = self._infer(ctx, step)
                self._expect_alpha("rnat", step, step_ty,
                                   self._rnat_step_ty(ctx, motive),
                                   "recursor step")
                return open1(motive, erase(scrut))
            # v : Vec A n   b : M[0, nil]
            # s : All l:Nat. Pi z:A. Pi v:Vec A l. Pi u:M[l, v]. M[S l, cons z v]
            # ---------------------------------------- rvec x.y.M b s v : M[n, |v|]
            case TRVec(_, _, motive, base, step, scrut):
                self._hit("rvec")
                self._scope_check("rvec", t, motive, ctx)
                scrut_ty = self._infer(ctx, scrut)
                if not isinstance(scrut_ty, VecTy):
                    self._fail("rvec", scrut,
                               "vector recursor scrutinee is not a vector",
                               code="shape-mismatch", actual=_fmt(scrut_ty))
                base_ty = self._infer(ctx, base)
                self._expect_alpha("rvec", base, base_ty,
                                   open2(motive, Zero(), Nil()),
                                   "recursor base")
                step_ty = self._infer(ctx, step)
                self._expect_alpha("rvec", step, step_ty,
                                   self._rvec_step_ty(ctx, motive, scrut_ty.elem),
                                   "recursor step")
                return open2(motive, scrut_ty.length, erase(scrut))
            # quasi-implicit and fold/unfold forms: large-elim mode only
            case TQLam():
                return self._rule_quasi_abs(ctx, t)
            case TQApp():
                return self._rule_quasi_app(ctx, t)
            case TFoldZ():
                return self._rule_fold_zero(ctx, t)
            case TUnfoldZ():
                return self._rule_unfold_zero(ctx, t)
            case TFoldS():
                return self._rule_fold_succ(ctx, t)
            case TUnfoldS():
                return self._rule_unfold_succ(ctx, t)
        raise TypeError(f"not an annotated term: {t!r}")

    # -- shared rule bodies ---------------------------------------------

    def _binder(self, rule: str, ctx: Context, t, *,
                erased_absent: bool) -> tuple[str, Ty, Ty]:
        """Check a binder form; returns (hint, dom, closed codomain)."""
        self._scope_check(rule, t, t.dom, ctx)
        avoid = ctx.names() | free_vars(t.body) | free_vars(t.dom)
        x = fresh_name(t.hint, avoid)
        opened = open1(t.body, FVar(x))
        body_ty = self._infer(ctx.extend(x, t.dom), opened)
        if erased_absent and x in free_vars(erase(opened)):
            self._fail(rule, t,
                       f"bound variable {t.hint or x} survives erasure; "
                       "it may only occur in annotations",
                       code="erased-occurrence")
        return t.hint, t.dom, close1(body_ty, x)

    def _join_type(self, t, lhs, rhs) -> Ty:
        lhs_e, rhs_e = erase(lhs), erase(rhs)
        j = joinable(lhs_e, rhs_e, self.fuel)
        if j is True:
            return EqTy(lhs_e, rhs_e)
        if isinstance(j, FuelExhausted):
            self._fail("join", t,
                       "undecided: fuel exhausted before both sides "
                       "reached normal form",
                       code="fuel-exhausted", actual=_fmt(j.term))
        left_nf = normalize(lhs_e, self.fuel).term
        right_nf = normalize(rhs_e, self.fuel).term
        self._fail("join", t, "the two sides have distinct normal forms",
                   code="join-distinct",
                   children=(
                       Diagnostic("join", f"left normalizes to {_fmt(left_nf)}",
                                  _span(lhs), code="note", severity="note"),
                       Diagnostic("join", f"right normalizes to {_fmt(right_nf)}",
                                  _span(rhs), code="note", severity="note"),
                   ))

    def _rnat_step_ty(self, ctx: Context, motive: Ty) -> Ty:
        y = fresh_name("y", ctx.names() | free_vars(motive))
        u_ty = open1(motive, FVar(y))
        res_ty = open1(motive, Succ(FVar(y)))
        return PiTy("y", NatTy(), close1(PiTy("u", u_ty, res_ty), y))

    def _rvec_step_ty(self, ctx: Context, motive: Ty, elem: Ty) -> Ty:
        avoid = set(ctx.names() | free_vars(motive) | free_vars(elem))
        l = fresh_name("l", avoid)
        avoid.add(l)
        z = fresh_name("z", avoid)
        avoid.add(z)
        v = fresh_name("v", avoid)
        u_ty = open2(motive, FVar(l), FVar(v))
        res_ty = open2(motive, Succ(FVar(l)), Cons(FVar(z), FVar(v)))
        ty: Ty = PiTy("u", u_ty, res_ty)
        ty = PiTy("v", VecTy(elem, FVar(l)), close1(ty, v))
        ty = PiTy("z", elem, close1(ty, z))
        return AllTy("l", NatTy(), close1(ty, l))

    # -- implicit forms (base mode); extension mode forbids them --------

    def _rule_spec_abs(self, ctx: Context, t: TLamImp) -> Ty:
        self._hit("spec-abs")
        hint, dom, cod = self._binder("spec-abs", ctx, t, erased_absent=True)
        return AllTy(hint, dom, cod)

    def _rule_spec_app(self, ctx: Context, t: TAppImp) -> Ty:
        self._hit("spec-app")
        fn_ty = self._infer(ctx, t.fn)
        if not isinstance(fn_ty, AllTy):
            self._fail("spec-app", t.fn,
                       "implicit application head is not an implicit product",
                       code="shape-mismatch", actual=_fmt(fn_ty))
        arg_ty = self._infer(ctx, t.arg)
        self._expect_alpha("spec-app", t.arg, arg_ty, fn_ty.dom,
                           "implicit argument")
        return open1(fn_ty.cod, erase(t.arg))

    # -- large-elimination forms; base mode rejects them -----------------

    def _rule_quasi_abs(self, ctx: Context, t: TQLam) -> Ty:
        self._mode_fail("quasi-abs", t, "quasi-implicit abstraction")

    def _rule_quasi_app(self, ctx: Context, t: TQApp) -> Ty:
        self._mode_fail("quasi-app", t, "quasi-implicit application")

    def _rule_fold_zero(self, ctx: Context, t: TFoldZ) -> Ty:
        self._mode_fail("fold-zero", t, "ifzero introduction")

    def _rule_unfold_zero(self, ctx: Context, t: TUnfoldZ) -> Ty:
        self._mode_fail("unfold-zero", t, "ifzero elimination")

    def _rule_fold_succ(self, ctx: Context, t: TFoldS) -> Ty:
        self._mode_fail("fold-succ", t, "ifzero introduction")

    def _rule_unfold_succ(self, ctx: Context, t: TUnfoldS) -> Ty:
        self._mode_fail("unfold-succ", t, "ifzero elimination")


def infer(ctx: Context, t: AnnTerm, fuel: int = DEFAULT_FUEL) -> CheckResult:
    """Compute the type of an annotated term in base mode."""
    return Checker(fuel).infer(ctx, t)


def check_against(ctx: Context, t: AnnTerm, expected: Ty,
                  fuel: int = DEFAULT_FUEL) -> CheckResult:
    """Check an annotated term against a declared type in base mode."""
    return Checker(fuel).check_against(ctx, t, expected)
