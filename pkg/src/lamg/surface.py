"""Text format for both languages: lexer, parsers, printers.

Gradual terms (`.lamg`)::

    term  ::= "fun" "(" x ":" T ")" "->" term
            | "match" term "with" "(" mbind "," mbind ")" "->" term
            | "case" term "of" "inl" binder "->" term "|" "inr" binder "->" term
            | "inl" app ":" T | "inr" app ":" T | "err" ":" T
            | "<" T "=>" T ">" castarg
            | app
    castarg ::= "<" T "=>" T ">" castarg | app
    app   ::= atom+                     (left associative)
    atom  ::= "()" | x | "(" term ")" | "(" term "," term ")"
    mbind ::= x | x ":" T               (match binders, ascription optional)
    binder ::= x | "(" x ":" T ")"      (case binders)
    T     ::= "?" | "1" | T "*" T | T "+" T | T "->" T | "(" T ")"

`->` is right associative and loosest; `+` then `*` bind tighter, both
left associative.  Typed terms (`.lamt`) drop `?` and casts and add
`let x = term in term`, `roll [T] primary`, `unroll primary`,
`mu a. T` types, and type variables.

Printers emit canonical binder names (x0, x1, ... by depth; a0, ... for
type binders); parse(print(t)) == t is the tested round-trip.
"""

from dataclasses import dataclass

from . import gradual as g
from . import typed as tt


class ParseError(Exception):
    def __init__(self, msg: str, line: int, col: int):
        self.line, self.col = line, col
        super().__init__(f"{msg} at line {line}, column {col}")


# ---------------------------------------------------------------- lexer

_KEYWORDS = frozenset(
    ["fun", "match", "with", "case", "of", "inl", "inr", "err",
     "let", "in", "roll", "unroll", "mu"])
_TWO = ("->", "=>")
_ONE = "()*+?1:|<>[].,="


@dataclass(frozen=True)
class Tok:
    kind: str  # "ident" | "kw" | "punct" | "eof"
    text: str
    line: int
    col: int


def lex(src: str) -> list[Tok]:
    toks = []
    i, line, col = 0, 1, 1
    n = len(src)
    while i < n:
        ch = src[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch in " \t\r":
            i, col = i + 1, col + 1
            continue
        if src[i:i + 2] in _TWO:
            toks.append(Tok("punct", src[i:i + 2], line, col))
            i, col = i + 2, col + 2
            continue
        if ch in _ONE:
            toks.append(Tok("punct", ch, line, col))
            i, col = i + 1, col + 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] in "_'"):
                j += 1
            text = src[i:j]
            toks.append(Tok("kw" if text in _KEYWORDS else "ident", text, line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(Tok("eof", "", line, col))
    return toks


# --------------------------------------------------------------- parser

class _Parser:
    def __init__(self, src: str, lang: str):
        self.toks = lex(src)
        self.pos = 0
        self.lang = lang  # "g" or "t"

    def peek(self) -> Tok:
        return self.toks[self.pos]

    def advance(self) -> Tok:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def expect(self, kind: str, text: str | None = None) -> Tok:
        if not self.at(kind, text):
            tok = self.peek()
            want = text or kind
            raise ParseError(f"expected {want!r}, found {tok.text or 'end of input'!r}",
                             tok.line, tok.col)
        return self.advance()

    def fail(self, msg: str):
        tok = self.peek()
        raise ParseError(msg, tok.line, tok.col)

    # -- types ---------------------------------------------------------

    def type_(self, tenv):
        if self.lang == "t" and self.at("kw", "mu"):
            self.advance()
            name = self.expect("ident").text
            self.expect("punct", ".")
            return tt.Mu(self.type_([name] + tenv))
        return self.type_fun(tenv)

    def type_fun(self, tenv):
        left = self.type_sum(tenv)
        if self.at("punct", "->"):
            self.advance()
            right = self.type_(tenv)  # right associative, mu allowed
            return g.Fun(left, right) if self.lang == "g" else tt.Fun(left, right)
        return left

    def type_sum(self, tenv):
        left = self.type_prod(tenv)
        while self.at("punct", "+"):
            self.advance()
            right = self.type_prod(tenv)
            left = g.Sum(left, right) if self.lang == "g" else tt.Sum(left, right)
        return left

    def type_prod(self, tenv):
        left = self.type_atom(tenv)
        while self.at("punct", "*"):
            self.advance()
            right = self.type_atom(tenv)
            left = g.Prod(left, right) if self.lang == "g" else tt.Prod(left, right)
        return left

    def type_atom(self, tenv):
        if self.at("punct", "1"):
            self.advance()
            return g.Unit() if self.lang == "g" else tt.Unit()
        if self.at("punct", "?"):
            if self.lang != "g":
                self.fail("the dynamic type does not exist in the typed language")
            self.advance()
            return g.Dyn()
        if self.at("punct", "("):
            self.advance()
            ty = self.type_(tenv)
            self.expect("punct", ")")
            return ty
        if self.at("ident"):
            tok = self.advance()
            if self.lang != "t":
                raise ParseError(f"unknown type {tok.text!r}", tok.line, tok.col)
            if tok.text not in tenv:
                raise ParseError(f"unbound type variable {tok.text!r}", tok.line, tok.col)
            return tt.TVar(tenv.index(tok.text))
        self.fail("expected a type")

    # -- terms ---------------------------------------------------------

    def binder(self):
        """x or (x : T) — returns (name, annotation-or-None)."""
        if self.at("punct", "("):
            self.advance()
            name = self.expect("ident").text
            self.expect("punct", ":")
            ann = self.type_([])
            self.expect("punct", ")")
            return name, ann
        return self.expect("ident").text, None

    def term(self, env):
        if self.at("kw", "fun"):
            self.advance()
            self.expect("punct", "(")
            name = self.expect("ident").text
            self.expect("punct", ":")
            dom = self.type_([])
            self.expect("punct", ")")
            self.expect("punct", "->")
            body = self.term([name] + env)
            return g.Lam(dom, body) if self.lang == "g" else tt.Lam(dom, body)
        if self.at("kw", "match"):
            self.advance()
            scrut = self.term(env)
            self.expect("kw", "with")
            self.expect("punct", "(")
            n1, a1 = self.binder_parts()
            self.expect("punct", ",")
            n2, a2 = self.binder_parts()
            self.expect("punct", ")")
            self.expect("punct", "->")
            body = self.term([n2, n1] + env)
            if self.lang == "g":
                return g.MatchPair(scrut, a1, a2, body)
            if a1 is not None or a2 is not None:
                self.fail("typed match binders take no ascription")
            return tt.MatchPair(scrut, body)
        if self.at("kw", "case"):
            self.advance()
            scrut = self.term(env)
            self.expect("kw", "of")
            self.expect("kw", "inl")
            n1, a1 = self.binder()
            self.expect("punct", "->")
            left = self.term([n1] + env)
            self.expect("punct", "|")
            self.expect("kw", "inr")
            n2, a2 = self.binder()
            self.expect("punct", "->")
            right = self.term([n2] + env)
            if self.lang == "g":
                return g.Case(scrut, a1, left, a2, right)
            if a1 is not None or a2 is not None:
                self.fail("typed case binders take no ascription")
            return tt.Case(scrut, left, right)
        if self.at("kw", "inl") or self.at("kw", "inr"):
            which = self.advance().text
            body = self.appterm(env)
            self.expect("punct", ":")
            ann = self.type_([])
            if self.lang == "g":
                return g.Inl(ann, body) if which == "inl" else g.Inr(ann, body)
            return tt.Inl(ann, body) if which == "inl" else tt.Inr(ann, body)
        if self.at("kw", "err"):
            self.advance()
            self.expect("punct", ":")
            ann = self.type_([])
            return g.Err(ann) if self.lang == "g" else tt.Err(ann)
        if self.at("kw", "let"):
            if self.lang != "t":
                self.fail("let is only part of the typed language")
            self.advance()
            name = self.expect("ident").text
            self.expect("punct", "=")
            bound = self.term(env)
            self.expect("kw", "in")
            body = self.term([name] + env)
            return tt.Let(bound, body)
        if self.at("punct", "<"):
            return self.cast(env)
        return self.appterm(env)

    def binder_parts(self):
        """A match binder: bare name or name : T inside the parentheses."""
        name = self.expect("ident").text
        if self.at("punct", ":"):
            self.advance()
            return name, self.type_([])
        return name, None

    def cast(self, env):
        if self.lang != "g":
            self.fail("casts are only part of the gradual language")
        self.expect("punct", "<")
        src = self.type_([])
        self.expect("punct", "=>")
        tgt = self.type_([])
        self.expect("punct", ">")
        arg = self.cast(env) if self.at("punct", "<") else self.appterm(env)
        return g.Cast(src, tgt, arg)

    def appterm(self, env):
        t = self.primary(env)
        while (self.at("ident") or self.at("punct", "(")
               or (self.lang == "t" and (self.at("kw", "roll") or self.at("kw", "unroll")))):
            t = (g.App(t, self.primary(env)) if self.lang == "g"
                 else tt.App(t, self.primary(env)))
        return t

    def primary(self, env):
        if self.lang == "t" and self.at("kw", "roll"):
            self.advance()
            self.expect("punct", "[")
            ann = self.type_([])
            self.expect("punct", "]")
            return tt.Roll(ann, self.primary(env))
        if self.lang == "t" and self.at("kw", "unroll"):
            self.advance()
            return tt.Unroll(self.primary(env))
        return self.atom(env)

    def atom(self, env):
        if self.at("punct", "("):
            self.advance()
            if self.at("punct", ")"):
                self.advance()
                return g.UnitVal() if self.lang == "g" else tt.UnitVal()
            first = self.term(env)
            if self.at("punct", ","):
                self.advance()
                second = self.term(env)
                self.expect("punct", ")")
                return g.Pair(first, second) if self.lang == "g" else tt.Pair(first, second)
            self.expect("punct", ")")
            return first
        if self.at("ident"):
            tok = self.advance()
            if tok.text not in env:
                raise ParseError(f"unbound name {tok.text!r}", tok.line, tok.col)
            ix = env.index(tok.text)
            return g.Var(ix) if self.lang == "g" else tt.Var(ix)
        self.fail("expected a term")


def _parse(src: str, lang: str, what: str):
    p = _Parser(src, lang)
    out = p.term([]) if what == "term" else p.type_([])
    p.expect("eof")
    return out


def parse_gradual(src: str) -> g.GTerm:
    return _parse(src, "g", "term")


def parse_gradual_type(src: str) -> g.GType:
    return _parse(src, "g", "type")


def parse_typed(src: str) -> tt.TTerm:
    return _parse(src, "t", "term")


def parse_typed_type(src: str) -> tt.TType:
    return _parse(src, "t", "type")


# -------------------------------------------------------------- printer

def _wrap(s: str, yes: bool) -> str:
    return f"({s})" if yes else s


def print_gradual_type(ty: g.GType, prec: int = 0) -> str:
    match ty:
        case g.Dyn():
            return "?"
        case g.Unit():
            return "1"
        case g.Prod(l, r):
            return _wrap(f"{print_gradual_type(l, 2)} * {print_gradual_type(r, 3)}", prec > 2)
        case g.Sum(l, r):
            return _wrap(f"{print_gradual_type(l, 1)} + {print_gradual_type(r, 2)}", prec > 1)
        case g.Fun(d, c):
            return _wrap(f"{print_gradual_type(d, 1)} -> {print_gradual_type(c, 0)}", prec > 0)
    raise AssertionError(f"print_gradual_type: {ty!r}")


def print_typed_type(ty: tt.TType, prec: int = 0, depth: int = 0) -> str:
    match ty:
        case tt.TVar(k):
            return f"a{depth - 1 - k}"
        case tt.Mu(b):
            return _wrap(f"mu a{depth}. {print_typed_type(b, 0, depth + 1)}", prec > 0)
        case tt.Unit():
            return "1"
        case tt.Prod(l, r):
            return _wrap(f"{print_typed_type(l, 2, depth)} * {print_typed_type(r, 3, depth)}",
                         prec > 2)
        case tt.Sum(l, r):
            return _wrap(f"{print_typed_type(l, 1, depth)} + {print_typed_type(r, 2, depth)}",
                         prec > 1)
        case tt.Fun(d, c):
            return _wrap(f"{print_typed_type(d, 1, depth)} -> {print_typed_type(c, 0, depth)}",
                         prec > 0)
    raise AssertionError(f"print_typed_type: {ty!r}")


def _binder(name: str, ann, pt) -> str:
    return name if ann is None else f"({name} : {pt(ann)})"


def _mbind(name: str, ann, pt) -> str:
    # match binders live inside the shared parens, so no extra wrapping
    return name if ann is None else f"{name} : {pt(ann)}"


def print_gradual(t: g.GTerm, prec: int = 0, depth: int = 0) -> str:
    pt = print_gradual_type

    def pr(sub, p, d=None):
        return print_gradual(sub, p, depth if d is None else d)

    match t:
        case g.Err(ann):
            return _wrap(f"err : {pt(ann)}", prec > 0)
        case g.Var(k):
            return f"x{depth - 1 - k}"
        case g.UnitVal():
            return "()"
        case g.Pair(l, r):
            return f"({pr(l, 0)}, {pr(r, 0)})"
        case g.MatchPair(s, la, ra, body):
            b1 = _mbind(f"x{depth}", la, pt)
            b2 = _mbind(f"x{depth + 1}", ra, pt)
            return _wrap(f"match {pr(s, 0)} with ({b1}, {b2}) -> {pr(body, 0, depth + 2)}",
                         prec > 0)
        case g.Inl(ann, b):
            return _wrap(f"inl {pr(b, 1)} : {pt(ann)}", prec > 0)
        case g.Inr(ann, b):
            return _wrap(f"inr {pr(b, 1)} : {pt(ann)}", prec > 0)
        case g.Case(s, la, left, ra, right):
            b1 = _binder(f"x{depth}", la, pt)
            b2 = _binder(f"x{depth}", ra, pt)
            return _wrap(f"case {pr(s, 0)} of inl {b1} -> {pr(left, 0, depth + 1)}"
                         f" | inr {b2} -> {pr(right, 0, depth + 1)}", prec > 0)
        case g.Lam(dom, body):
            return _wrap(f"fun (x{depth} : {pt(dom)}) -> {pr(body, 0, depth + 1)}", prec > 0)
        case g.App(f, a):
            return _wrap(f"{pr(f, 1)} {pr(a, 2)}", prec > 1)
        case g.Cast(src, tgt, body):
            inner = pr(body, 0) if isinstance(body, g.Cast) else pr(body, 1)
            return _wrap(f"<{pt(src)} => {pt(tgt)}> {inner}", prec > 0)
    raise AssertionError(f"print_gradual: {t!r}")


def print_typed(t: tt.TTerm, prec: int = 0, depth: int = 0) -> str:
    pt = print_typed_type

    def pr(sub, p, d=None):
        return print_typed(sub, p, depth if d is None else d)

    match t:
        case tt.Err(ann):
            return _wrap(f"err : {pt(ann)}", prec > 0)
        case tt.Var(k):
            return f"x{depth - 1 - k}"
        case tt.UnitVal():
            return "()"
        case tt.Hole():
            return "[]"
        case tt.Let(bound, body):
            return _wrap(f"let x{depth} = {pr(bound, 0)} in {pr(body, 0, depth + 1)}", prec > 0)
        case tt.Roll(ann, b):
            return _wrap(f"roll [{pt(ann)}] {pr(b, 2)}", prec > 1)
        case tt.Unroll(b):
            return _wrap(f"unroll {pr(b, 2)}", prec > 1)
        case tt.Pair(l, r):
            return f"({pr(l, 0)}, {pr(r, 0)})"
        case tt.MatchPair(s, body):
            return _wrap(f"match {pr(s, 0)} with (x{depth}, x{depth + 1})"
                         f" -> {pr(body, 0, depth + 2)}", prec > 0)
        case tt.Inl(ann, b):
            return _wrap(f"inl {pr(b, 1)} : {pt(ann)}", prec > 0)
        case tt.Inr(ann, b):
            return _wrap(f"inr {pr(b, 1)} : {pt(ann)}", prec > 0)
        case tt.Case(s, left, right):
            return _wrap(f"case {pr(s, 0)} of inl x{depth} -> {pr(left, 0, depth + 1)}"
                         f" | inr x{depth} -> {pr(right, 0, depth + 1)}", prec > 0)
        case tt.Lam(dom, body):
            return _wrap(f"fun (x{depth} : {pt(dom)}) -> {pr(body, 0, depth + 1)}", prec > 0)
        case tt.App(f, a):
            return _wrap(f"{pr(f, 1)} {pr(a, 2)}", prec > 1)
    raise AssertionError(f"print_typed: {t!r}")


def format_gradual_trace(t: g.GTerm, fuel: int = 200) -> str:
    """Render a full reduction trace: the canonical print of t, one line
    per step labelled with its rule, and a final outcome line."""
    lines = [print_gradual(t)]
    cur = t
    for _ in range(fuel):
        if g.is_value(cur) or isinstance(cur, g.Err):
            break
        cur, rule = g.step_rule(cur)
        lines.append(f"--[{rule}]--> {print_gradual(cur)}")
    if g.is_value(cur):
        lines.append(f"result: value {print_gradual(cur)}")
    elif isinstance(cur, g.Err):
        lines.append("result: error")
    else:
        lines.append("result: fuel")
    return "\n".join(lines) + "\n"
