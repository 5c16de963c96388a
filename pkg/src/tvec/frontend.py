"""Surface syntax: lexer, parser, pretty-printer, definition resolution.

The file grammar (comments run `--` to end of line):

    file   := item*
    item   := "mode" ("base" | "large-elim")
            | "assume" IDENT ":" type
            | "def" IDENT ":" type "=" term

    type   := "Nat"
            | "Vec" tyatom atom
            | "Pi" IDENT ":" type "." type
            | "All" IDENT ":" type "." type
            | "ifzero" atom tyatom tyatom
            | "(" type ")"
            | apply "=" apply            -- non-associative, lowest
    tyatom := "Nat" | "(" type ")"

    term   := ("fun" | "ifun" | "qfun") IDENT ":" type "=>" term
            | apply
    apply  := head (atom | "@[" term "]" | "@-[" term "]")*
    head   := "S" atom | "cons" atom atom | "join" atom atom
            | "rnat" "[" IDENT "." type "]" atom atom atom
            | "rvec" "[" IDENT "." IDENT "." type "]" atom atom atom
            | "cast" "[" IDENT "." type "]" atom atom
            | "foldz" "[" type "]" atom | "unfoldz" atom
            | "folds" "[" term "]" "[" type "]" atom
            | "unfolds" "[" term "]" atom
            | atom
    atom   := "zero" | NUMBER | IDENT | "nil" "[" type "]" | "(" term ")"

Application is juxtaposition, left-associative; arguments are atoms, so
compound arguments take parentheses.  Numerals abbreviate towers of S over
zero and are pure sugar.  Terms embedded in types (vector lengths, ifzero
scrutinees, equation sides) are parsed as annotated terms and erased on
the spot, since types embed unannotated terms only.

Definitions are transparent, non-recursive abbreviations: resolution
substitutes each earlier def into later items, annotated bodies into term
positions and erased bodies into type positions.  `assume` introduces a
context binding for everything after it; apart from assumed names and
their own binders, resolved items must be closed.

The pretty-printer inverts the grammar with minimal parentheses and is
the source of the textual forms used in diagnostics and reports.  Erased
terms print in a display-only dialect (`fun x => t`, bare `nil`, `rnat b
s n`, `qfun => t`, `t @-[]`) that the parser does not accept.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .erase import erase, subst_annotated
from .syntax import (
    AllTy, AnnTerm, App, BVar, Cons, Context, EqTy, FVar, IfZeroTy, Join,
    Lam, NatTy, Nil, Node, PiTy, QApp, QLam, RNat, RVec, Span, Succ, TApp,
    TAppImp, TCast, TCons, TFoldS, TFoldZ, TJoin, TLam, TLamImp, TNil,
    TQApp, TQLam, TRNat, TRVec, TSucc, TUnfoldS, TUnfoldZ, TZero, Ty,
    VecTy, Zero, close_at, close1, free_vars, fresh_name, subst,
)
from .typecheck import Diagnostic, Mode


class SourceError(Exception):
    """A diagnostic-carrying error from the frontend."""

    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


class ParseError(SourceError):
    pass


class ResolveError(SourceError):
    pass


# --------------------------------------------------------------------------
# lexer

KEYWORDS = frozenset({
    "def", "mode", "assume", "Nat", "Vec", "Pi", "All", "ifzero", "fun",
    "ifun", "qfun", "zero", "S", "nil", "cons", "rnat", "rvec", "join",
    "cast", "foldz", "unfoldz", "folds", "unfolds", "large-elim",
})

_SYMBOLS = ("@-[", "@[", "=>", "(", ")", "[", "]", ":", ".", "=")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "number", "eof", or the literal keyword/symbol
    text: str
    start: int
    end: int

    @property
    def span(self) -> Span:
        return Span(self.start, self.end)


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_ident_cont(ch: str) -> bool:
    return ch.isalnum() or ch in "_'"


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text.startswith("large-elim", i) and (
                i + 10 >= n or not _is_ident_cont(text[i + 10])):
            toks.append(Token("large-elim", "large-elim", i, i + 10))
            i += 10
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append(Token(sym, sym, i, i + len(sym)))
                i += len(sym)
                break
        else:
            if ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                toks.append(Token("number", text[i:j], i, j))
                i = j
            elif _is_ident_start(ch):
                j = i
                while j < n and _is_ident_cont(text[j]):
                    j += 1
                word = text[i:j]
                kind = word if word in KEYWORDS else "ident"
                toks.append(Token(kind, word, i, j))
                i = j
            else:
                raise ParseError(Diagnostic(
                    "lex", f"unexpected character {ch!r}", Span(i, i + 1),
                    code="parse-error"))
    toks.append(Token("eof", "", n, n))
    return toks


# --------------------------------------------------------------------------
# source items


@dataclass(frozen=True)
class DefItem:
    name: str
    ty: Ty
    body: AnnTerm
    span: Span


@dataclass(frozen=True)
class AssumeItem:
    name: str
    ty: Ty
    span: Span


@dataclass(frozen=True)
class ModeItem:
    mode: Mode
    span: Span


Item = DefItem | AssumeItem | ModeItem


@dataclass(frozen=True)
class SourceFile:
    items: tuple[Item, ...]


_ATOM_STARTS = frozenset({"zero", "number", "ident", "nil", "("})
_HEAD_STARTS = _ATOM_STARTS | frozenset(
    {"S", "cons", "join", "rnat", "rvec", "cast", "foldz", "unfoldz",
     "folds", "unfolds"})
_TYPE_KEYWORDS = frozenset({"Nat", "Vec", "Pi", "All", "ifzero"})


class _Parser:
    def __init__(self, toks: list[Token]):
        self.toks = toks
        self.pos = 0

    def peek(self) -> Token:
        return self.toks[self.pos]

    def next(self) -> Token:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def at(self, kind: str) -> bool:
        return self.peek().kind == kind

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            shown = tok.text or "end of input"
            self._err(f"expected {what or kind!r}, found {shown!r}", tok)
        return self.next()

    def _err(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ParseError(Diagnostic("parse", message, tok.span,
                                    code="parse-error"))

    # -- items ---------------------------------------------------------

    def file(self) -> SourceFile:
        items: list[Item] = []
        while not self.at("eof"):
            items.append(self.item())
        return SourceFile(tuple(items))

    def item(self) -> Item:
        tok = self.peek()
        if tok.kind == "mode":
            self.next()
            val = self.next()
            if val.kind == "large-elim":
                return ModeItem(Mode.LARGE_ELIM, Span(tok.start, val.end))
            if val.kind == "ident" and val.text == "base":
                return ModeItem(Mode.BASE, Span(tok.start, val.end))
            self._err("mode must be 'base' or 'large-elim'", val)
        if tok.kind == "assume":
            self.next()
            name = self.expect("ident", "a name")
            self.expect(":")
            ty = self.type_()
            return AssumeItem(name.text, ty, Span(tok.start, self._prev_end()))
        if tok.kind == "def":
            self.next()
            name = self.expect("ident", "a name")
            self.expect(":")
            ty = self.type_()
            self.expect("=")
            body = self.term()
            return DefItem(name.text, ty, body,
                           Span(tok.start, self._prev_end()))
        self._err("expected 'def', 'assume', or 'mode'", tok)

    def _prev_end(self) -> int:
        return self.toks[self.pos - 1].end

    # -- types ---------------------------------------------------------

    def type_(self) -> Ty:
        tok = self.peek()
        if tok.kind in _TYPE_KEYWORDS:
            return self._type_keyword()
        if tok.kind == "(":
            save = self.pos
            try:
                self.next()
                inner = self.type_()
                self.expect(")")
                return inner
            except ParseError:
                self.pos = save
        return self._equation()

    def _type_keyword(self) -> Ty:
        tok = self.next()
        if tok.kind == "Nat":
            return NatTy(span=tok.span)
        if tok.kind == "Vec":
            elem = self.tyatom()
            length = self.atom()
            return VecTy(elem, erase(length),
                         span=Span(tok.start, self._prev_end()))
        if tok.kind in ("Pi", "All"):
            name = self.expect("ident", "a bound variable")
            self.expect(":")
            dom = self.type_()
            self.expect(".")
            cod = self.type_()
            cls = PiTy if tok.kind == "Pi" else AllTy
            return cls(name.text, dom, close1(cod, name.text),
                       span=Span(tok.start, self._prev_end()))
        if tok.kind == "ifzero":
            scrut = self.atom()
            on_zero = self.tyatom()
            on_succ = self.tyatom()
            return IfZeroTy(erase(scrut), on_zero, on_succ,
                            span=Span(tok.start, self._prev_end()))
        raise AssertionError(tok)

    def tyatom(self) -> Ty:
        tok = self.peek()
        if tok.kind == "Nat":
            self.next()
            return NatTy(span=tok.span)
        if tok.kind == "(":
            self.next()
            ty = self.type_()
            self.expect(")")
            return ty
        self._err("expected a type", tok)

    def _equation(self) -> Ty:
        start = self.peek().start
        lhs = self.apply()
        self.expect("=", "'=' (equation type)")
        rhs = self.apply()
        return EqTy(erase(lhs), erase(rhs), span=Span(start, self._prev_end()))

    # -- terms ---------------------------------------------------------

    def term(self) -> AnnTerm:
        tok = self.peek()
        if tok.kind in ("fun", "ifun", "qfun"):
            self.next()
            name = self.expect("ident", "a bound variable")
            self.expect(":")
            dom = self.type_()
            self.expect("=>")
            body = self.term()
            cls = {"fun": TLam, "ifun": TLamImp, "qfun": TQLam}[tok.kind]
            return cls(name.text, dom, close1(body, name.text),
                       span=Span(tok.start, self._prev_end()))
        return self.apply()

    def apply(self) -> AnnTerm:
        start = self.peek().start
        t = self.head()
        while True:
            tok = self.peek()
            if tok.kind in _ATOM_STARTS:
                arg = self.atom()
                t = TApp(t, arg, span=Span(start, self._prev_end()))
            elif tok.kind == "@[":
                self.next()
                arg = self.term()
                self.expect("]")
                t = TAppImp(t, arg, span=Span(start, self._prev_end()))
            elif tok.kind == "@-[":
                self.next()
                arg = self.term()
                self.expect("]")
                t = TQApp(t, arg, span=Span(start, self._prev_end()))
            else:
                return t

    def head(self) -> AnnTerm:
        tok = self.peek()
        kind = tok.kind
        if kind == "S":
            self.next()
            return TSucc(self.atom(), span=Span(tok.start, self._prev_end()))
        if kind == "cons":
            self.next()
            head = self.atom()
            tail = self.atom()
            return TCons(head, tail, span=Span(tok.start, self._prev_end()))
        if kind == "join":
            self.next()
            lhs = self.atom()
            rhs = self.atom()
            return TJoin(lhs, rhs, span=Span(tok.start, self._prev_end()))
        if kind == "rnat":
            self.next()
            self.expect("[")
            var = self.expect("ident", "a motive variable")
            self.expect(".")
            motive = self.type_()
            self.expect("]")
            base = self.atom()
            step = self.atom()
            scrut = self.atom()
            return TRNat(var.text, close1(motive, var.text), base, step,
                         scrut, span=Span(tok.start, self._prev_end()))
        if kind == "rvec":
            self.next()
            self.expect("[")
            lvar = self.expect("ident", "the length motive variable")
            self.expect(".")
            vvar = self.expect("ident", "the vector motive variable")
            self.expect(".")
            motive = self.type_()
            self.expect("]")
            base = self.atom()
            step = self.atom()
            scrut = self.atom()
            closed = close_at(close_at(motive, 0, vvar.text), 1, lvar.text)
            return TRVec(lvar.text, vvar.text, closed, base, step, scrut,
                         span=Span(tok.start, self._prev_end()))
        if kind == "cast":
            self.next()
            self.expect("[")
            var = self.expect("ident", "a motive variable")
            self.expect(".")
            motive = self.type_()
            self.expect("]")
            proof = self.atom()
            body = self.atom()
            return TCast(var.text, close1(motive, var.text), proof, body,
                         span=Span(tok.start, self._prev_end()))
        if kind == "foldz":
            self.next()
            self.expect("[")
            other = self.type_()
            self.expect("]")
            body = self.atom()
            return TFoldZ(other, body, span=Span(tok.start, self._prev_end()))
        if kind == "unfoldz":
            self.next()
            body = self.atom()
            return TUnfoldZ(body, span=Span(tok.start, self._prev_end()))
        if kind == "folds":
            self.next()
            self.expect("[")
            witness = self.term()
            self.expect("]")
            self.expect("[")
            zero_ty = self.type_()
            self.expect("]")
            body = self.atom()
            return TFoldS(witness, zero_ty, body,
                          span=Span(tok.start, self._prev_end()))
        if kind == "unfolds":
            self.next()
            self.expect("[")
            witness = self.term()
            self.expect("]")
            body = self.atom()
            return TUnfoldS(witness, body,
                            span=Span(tok.start, self._prev_end()))
        return self.atom()

    def atom(self) -> AnnTerm:
        tok = self.peek()
        if tok.kind == "zero":
            self.next()
            return TZero(span=tok.span)
        if tok.kind == "number":
            self.next()
            t: AnnTerm = TZero(span=tok.span)
            for _ in range(int(tok.text)):
                t = TSucc(t, span=tok.span)
            return t
        if tok.kind == "ident":
            self.next()
            return FVar(tok.text, span=tok.span)
        if tok.kind == "nil":
            self.next()
            self.expect("[")
            elem = self.type_()
            self.expect("]")
            return TNil(elem, span=Span(tok.start, self._prev_end()))
        if tok.kind == "(":
            self.next()
            t = self.term()
            self.expect(")")
            return t
        self._err("expected a term", tok)


def parse(text: str) -> SourceFile:
    """Parse a .tvec source file."""
    return _Parser(tokenize(text)).file()


def parse_term(text: str) -> AnnTerm:
    """Parse a standalone annotated term."""
    p = _Parser(tokenize(text))
    t = p.term()
    p.expect("eof", "end of input")
    return t


def parse_type(text: str) -> Ty:
    """Parse a standalone type."""
    p = _Parser(tokenize(text))
    ty = p.type_()
    p.expect("eof", "end of input")
    return ty


# --------------------------------------------------------------------------
# pretty-printer


def pretty(node: Node) -> str:
    """Canonical text for a term or type, with minimal parentheses."""
    if isinstance(node, Ty):
        return _ty(node, ())
    return _term(node, ())


def _numeral(t: Node) -> int | None:
    n = 0
    while isinstance(t, (TSucc, Succ)):
        t = t.pred
        n += 1
    if isinstance(t, (TZero, Zero)):
        return n
    return None


def _bind(hint: str, body: Node, env: tuple[str, ...]) -> tuple[str, tuple[str, ...]]:
    # Avoid every visible name, not just the body's free ones: the body may
    # reach an enclosing binder through an index, and capturing its printed
    # name would change the term on reparse.
    name = fresh_name(hint, free_vars(body) | set(env))
    return name, (name,) + env


def _term(t: Node, env: tuple[str, ...]) -> str:
    match t:
        case TLam(hint, dom, body) | TLamImp(hint, dom, body) | TQLam(hint, dom, body):
            kw = {TLam: "fun", TLamImp: "ifun", TQLam: "qfun"}[type(t)]
            name, inner = _bind(hint, body, env)
            return f"{kw} {name} : {_ty(dom, env)} => {_term(body, inner)}"
        case Lam(hint, body):
            name, inner = _bind(hint, body, env)
            return f"fun {name} => {_term(body, inner)}"
        case QLam(body):
            return f"qfun => {_term(body, env)}"
        case _:
            return _apply(t, env)


def _apply(t: Node, env: tuple[str, ...]) -> str:
    match t:
        case TApp(fn, arg) | App(fn, arg):
            return f"{_apply(fn, env)} {_atom(arg, env)}"
        case TAppImp(fn, arg):
            return f"{_apply(fn, env)} @[{_term(arg, env)}]"
        case TQApp(fn, arg):
            return f"{_apply(fn, env)} @-[{_term(arg, env)}]"
        case QApp(fn):
            return f"{_apply(fn, env)} @-[]"
        case TSucc(p) | Succ(p) if _numeral(t) is None:
            return f"S {_atom(p, env)}"
        case TCons(h, tl):
            return f"cons {_atom(h, env)} {_atom(tl, env)}"
        case Cons(h, tl):
            return f"cons {_atom(h, env)} {_atom(tl, env)}"
        case TJoin(l, r):
            return f"join {_atom(l, env)} {_atom(r, env)}"
        case TRNat(hint, motive, base, step, scrut):
            name = fresh_name(hint, free_vars(motive) | set(env))
            menv = (name,) + env
            return (f"rnat [{name}. {_ty(motive, menv)}] {_atom(base, env)} "
                    f"{_atom(step, env)} {_atom(scrut, env)}")
        case TRVec(lh, vh, motive, base, step, scrut):
            lname = fresh_name(lh, free_vars(motive) | set(env))
            vname = fresh_name(vh, free_vars(motive) | set(env) | {lname})
            menv = (vname, lname) + env
            return (f"rvec [{lname}. {vname}. {_ty(motive, menv)}] "
                    f"{_atom(base, env)} {_atom(step, env)} {_atom(scrut, env)}")
        case TCast(hint, motive, proof, body):
            name = fresh_name(hint, free_vars(motive) | set(env))
            menv = (name,) + env
            return (f"cast [{name}. {_ty(motive, menv)}] "
                    f"{_atom(proof, env)} {_atom(body, env)}")
        case TFoldZ(other, body):
            return f"foldz [{_ty(other, env)}] {_atom(body, env)}"
        case TUnfoldZ(body):
            return f"unfoldz {_atom(body, env)}"
        case TFoldS(witness, zero_ty, body):
            return (f"folds [{_term(witness, env)}][{_ty(zero_ty, env)}] "
                    f"{_atom(body, env)}")
        case TUnfoldS(witness, body):
            return f"unfolds [{_term(witness, env)}] {_atom(body, env)}"
        case RNat(base, step, scrut):
            return (f"rnat {_atom(base, env)} {_atom(step, env)} "
                    f"{_atom(scrut, env)}")
        case RVec(base, step, scrut):
            return (f"rvec {_atom(base, env)} {_atom(step, env)} "
                    f"{_atom(scrut, env)}")
        case _:
            return _atom(t, env)


def _atom(t: Node, env: tuple[str, ...]) -> str:
    n = _numeral(t)
    if n is not None:
        return str(n)
    match t:
        case FVar(name):
            return name
        case BVar(index):
            return env[index] if index < len(env) else f"?{index}"
        case TNil(elem):
            return f"nil[{_ty(elem, env)}]"
        case Nil():
            return "nil"
        case Join():
            return "join"
        case _:
            return f"({_term(t, env)})"


def _ty(ty: Node, env: tuple[str, ...]) -> str:
    match ty:
        case NatTy():
            return "Nat"
        case VecTy(elem, length):
            return f"Vec {_tyatom(elem, env)} {_atom(length, env)}"
        case PiTy(hint, dom, cod) | AllTy(hint, dom, cod):
            kw = "Pi" if isinstance(ty, PiTy) else "All"
            name, inner = _bind(hint, cod, env)
            return f"{kw} {name} : {_ty(dom, env)}. {_ty(cod, inner)}"
        case EqTy(lhs, rhs):
            return f"{_apply(lhs, env)} = {_apply(rhs, env)}"
        case IfZeroTy(scrut, on_zero, on_succ):
            return (f"ifzero {_atom(scrut, env)} {_tyatom(on_zero, env)} "
                    f"{_tyatom(on_succ, env)}")
    raise TypeError(f"not a type: {ty!r}")


def _tyatom(ty: Node, env: tuple[str, ...]) -> str:
    if isinstance(ty, NatTy):
        return "Nat"
    return f"({_ty(ty, env)})"


# --------------------------------------------------------------------------
# definition resolution


@dataclass(frozen=True)
class ResolvedDef:
    name: str
    ty: Ty          # declared type with earlier defs inlined
    body: AnnTerm   # body with earlier defs inlined
    declared: Ty    # the type as written, for reports
    span: Span


@dataclass(frozen=True)
class ResolvedFile:
    mode: Mode
    assumptions: Context
    defs: tuple[ResolvedDef, ...]


def resolve_defs(source: SourceFile,
                 mode_override: Mode | None = None) -> ResolvedFile:
    """Inline definitions and collect assumptions.

    Each def or assume may reference only earlier defs, earlier assumes,
    and its own binders.  Def bodies substitute in annotated at term
    positions and erased at type positions; a leftover free name is an
    unknown reference, or a recursive one if it names the def itself.
    """
    mode: Mode | None = None
    assumed = Context()
    defs: list[ResolvedDef] = []
    resolved: dict[str, AnnTerm] = {}
    taken: set[str] = set()

    def fail(message: str, span: Span, code: str):
        raise ResolveError(Diagnostic("resolve", message, span, code=code))

    def inline_ty(ty: Ty) -> Ty:
        for dname, dbody in resolved.items():
            ty = subst(ty, dname, erase(dbody))
        return ty

    def inline_term(t: AnnTerm) -> AnnTerm:
        for dname, dbody in resolved.items():
            t = subst_annotated(t, dname, dbody)
        return t

    for item in source.items:
        match item:
            case ModeItem(m, span):
                if mode is not None:
                    fail("duplicate mode pragma", span, "duplicate-pragma")
                mode = m
            case AssumeItem(name, ty, span):
                if name in taken:
                    fail(f"duplicate name {name}", span, "duplicate-name")
                ty = inline_ty(ty)
                loose = free_vars(ty) - assumed.names()
                if loose:
                    fail(f"assume {name} mentions unknown names: "
                         f"{', '.join(sorted(loose))}", span, "unknown-name")
                assumed = assumed.extend(name, ty)
                taken.add(name)
            case DefItem(name, declared, body, span):
                if name in taken:
                    fail(f"duplicate name {name}", span, "duplicate-name")
                ty = inline_ty(declared)
                body = inline_term(body)
                if name in free_vars(body) | free_vars(ty):
                    fail(f"def {name} refers to itself; definitions are "
                         "non-recursive", span, "recursive-definition")
                loose = (free_vars(body) | free_vars(ty)) - assumed.names()
                if loose:
                    fail(f"def {name} mentions unknown names: "
                         f"{', '.join(sorted(loose))}", span, "unknown-name")
                defs.append(ResolvedDef(name, ty, body, declared, span))
                resolved[name] = body
                taken.add(name)

    if mode_override is not None:
        mode = mode_override
    return ResolvedFile(mode or Mode.BASE, assumed, tuple(defs))
