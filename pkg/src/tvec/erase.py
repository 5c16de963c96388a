"""Erasure from annotated to unannotated terms.

Erasure strips annotations, motives, witnesses, and every implicit or
fold/unfold wrapper.  It is total and purely syntactic: it never consults
types and is defined on ill-typed terms too.  Implicit and quasi-implicit
abstractions erase to their bare bodies; for well-typed terms the bound
variable cannot occur in the erased body, and for arbitrary terms any
leftover occurrence is released as a fresh free name so the result stays
locally closed.
"""

from __future__ import annotations

from .syntax import (
    AnnTerm, App, BVar, Cons, FVar, Join, Lam, Nil, Node, QApp, QLam, RNat,
    RVec, Succ, TApp, TAppImp, TCast, TCons, TFoldS, TFoldZ, TJoin, TLam,
    TLamImp, TNil, TQApp, TQLam, TRNat, TRVec, TSucc, TUnfoldS, TUnfoldZ,
    TZero, UnannTerm, Zero, free_vars, fresh_name, has_bound_at, open_at,
    subst,
)


def erase(t: AnnTerm) -> UnannTerm:
    match t:
        case FVar() | BVar():
            return t
        case TApp(fn, arg):
            return App(erase(fn), erase(arg), span=t.span)
        case TAppImp(fn, _):
            return erase(fn)
        case TLam(hint, _, body):
            return Lam(hint, erase(body), span=t.span)
        case TLamImp(hint, _, body):
            return _release(erase(body), hint)
        case TZero():
            return Zero(span=t.span)
        case TSucc(pred):
            return Succ(erase(pred), span=t.span)
        case TRNat(_, _, base, step, scrut):
            return RNat(erase(base), erase(step), erase(scrut), span=t.span)
        case TNil(_):
            return Nil(span=t.span)
        case TCons(head, tail):
            return Cons(erase(head), erase(tail), span=t.span)
        case TRVec(_, _, _, base, step, scrut):
            return RVec(erase(base), erase(step), erase(scrut), span=t.span)
        case TJoin(_, _):
            return Join(span=t.span)
        case TCast(_, _, _, body):
            return erase(body)
        case TQLam(hint, _, body):
            return QLam(_release(erase(body), hint), span=t.span)
        case TQApp(fn, _):
            return QApp(erase(fn), span=t.span)
        case TFoldZ(_, body) | TUnfoldZ(body):
            return erase(body)
        case TFoldS(_, _, body) | TUnfoldS(_, body):
            return erase(body)
    raise TypeError(f"not an annotated term: {t!r}")


def _release(body: UnannTerm, hint: str) -> UnannTerm:
    """Drop one binder level from an erased body.

    If the erased body still mentions the bound variable (only possible for
    ill-typed terms), release it under a name that captures nothing.
    """
    if not has_bound_at(body, 0):
        return body
    return open_at(body, 0, FVar(fresh_name(hint, free_vars(body))))


def term_free_vars(t: AnnTerm) -> frozenset[str]:
    """Free variables occurring in term positions, ignoring annotations."""
    acc: set[str] = set()
    _collect(t, acc)
    return frozenset(acc)


def _collect(t: Node, acc: set[str]) -> None:
    if isinstance(t, FVar):
        acc.add(t.name)
        return
    for name in type(t).ANN:
        _collect(getattr(t, name), acc)


def subst_annotated(t: AnnTerm, name: str, repl: AnnTerm) -> AnnTerm:
    """Substitute an annotated term for a free variable.

    Term positions receive `repl` itself; annotation positions (types,
    motives) embed unannotated terms only, so they receive its erasure.
    """
    from dataclasses import replace

    repl_erased = erase(repl)

    def go(t: Node) -> Node:
        if isinstance(t, FVar):
            return repl if t.name == name else t
        scopes = type(t).SCOPES
        if not scopes:
            return t
        ann = type(t).ANN
        changes = {}
        for fname in scopes:
            child = getattr(t, fname)
            new = go(child) if fname in ann else subst(child, name, repl_erased)
            if new is not child:
                changes[fname] = new
        return replace(t, **changes) if changes else t

    return go(t)
