"""Recursive-descent parser for the core `.fd` format.

Declarations end with `;`, comments run `--` to end of line. Binders are
written with names and resolved to de Bruijn indices; `#k` denotes a raw
index relative to the enclosing binders (used for open terms). Constructor
and type-constant names start uppercase, open-function and let names start
lowercase; that convention is what lets the parser resolve free names
without an environment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .syntax import (
    Node, KArr, TVar, TCon, TApp, EqTy, Forall, Var, Con, Ref, Lam,
    App, TyLam, TyApp, Cast, Pattern, If, Guard, ZERO, Choice, Refl, Sym,
    Trans, CApp, Fst, Snd, Univ, CInst, Sim, Decl, DataDecl, CtorDecl,
    OpenTypeDecl, OpenCtorDecl, MethodDecl, InstanceDecl, LetDecl,
    STAR, ARROW, arrow,
)

KEYWORDS = {
    "data", "ctor", "open", "openctor", "method", "instance", "let",
    "forall", "forallc", "if", "is", "then", "else", "guard",
    "refl", "sym", "sim",
    # surface-only keywords, reserved here so the shared lexer treats them
    # uniformly
    "class", "where",
}

RESERVED_NAME = re.compile(r"^[xt][0-9]+$")

_SYMBOLS = [
    "@[", ";;", "<+>", "|>", "->", "/\\", ".1", ".2",
    "~", "@", ";", ":", ".", ",", "(", ")", "[", "]", "\\", "*", "=",
    "{", "}", "|", ">",
]

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<comment>--[^\n]*)"
    r"|(?P<hash>#[0-9]+)"
    r"|(?P<num>[0-9]+)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<sym>" + "|".join(re.escape(s) for s in _SYMBOLS) + r")"
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int,
                 expected: frozenset[str] = frozenset()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = expected
        where = f"{line}:{col}"
        exp = f" (expected one of: {', '.join(sorted(expected))})" if expected else ""
        super().__init__(f"{where}: {message}{exp}")


@dataclass(frozen=True)
class Token:
    kind: str  # 'name' | 'kw' | 'num' | 'hash' | a symbol | 'eof'
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unsupported character {text[pos]!r}", line, col)
        lexeme = m.group(0)
        group = m.lastgroup
        if group == "name":
            kind = "kw" if lexeme in KEYWORDS else "name"
            tokens.append(Token(kind, lexeme, line, col))
        elif group == "num":
            tokens.append(Token("num", lexeme, line, col))
        elif group == "hash":
            tokens.append(Token("hash", lexeme, line, col))
        elif group == "sym":
            tokens.append(Token(lexeme, lexeme, line, col))
        # whitespace and comments are skipped
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


@dataclass
class Parser:
    tokens: list[Token]
    pos: int = 0
    stack: list[str] = field(default_factory=list)  # binder names, outer first

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def at(self, *kinds: str) -> bool:
        return self.cur.kind in kinds

    def at_kw(self, *words: str) -> bool:
        return self.cur.kind == "kw" and self.cur.text in words

    def advance(self) -> Token:
        tok = self.cur
        self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        if self.cur.kind != kind:
            raise ParseError(f"unexpected {self.cur.text or 'end of input'!r}",
                             self.cur.line, self.cur.col, frozenset({kind}))
        return self.advance()

    def expect_kw(self, word: str) -> Token:
        if not self.at_kw(word):
            raise ParseError(f"unexpected {self.cur.text or 'end of input'!r}",
                             self.cur.line, self.cur.col, frozenset({word}))
        return self.advance()

    def fail(self, message: str, expected: frozenset[str] = frozenset()):
        raise ParseError(message, self.cur.line, self.cur.col, expected)

    # ---------------------------------------------------------- kinds

    def kind(self) -> Node:
        left = self.kind_atom()
        if self.at("->"):
            self.advance()
            return KArr(left, self.kind())
        return left

    def kind_atom(self) -> Node:
        if self.at("*"):
            self.advance()
            return STAR
        if self.at("("):
            self.advance()
            k = self.kind()
            self.expect(")")
            return k
        self.fail("expected a kind", frozenset({"*", "("}))

    # ---------------------------------------------------------- types

    def type_(self) -> Node:
        if self.at_kw("forall"):
            self.advance()
            name = self.expect("name").text
            self.expect(":")
            k = self.kind()
            self.expect(".")
            self.stack.append(name)
            try:
                body = self.type_()
            finally:
                self.stack.pop()
            return Forall(k, body)
        return self.ty_arrow()

    def ty_arrow(self) -> Node:
        left = self.ty_eq()
        if self.at("->"):
            self.advance()
            return arrow(left, self.type_())
        return left

    def ty_eq(self) -> Node:
        left = self.ty_app()
        if self.at("~"):
            self.advance()
            kind = STAR
            if self.at("["):
                self.advance()
                kind = self.kind()
                self.expect("]")
            right = self.ty_app()
            return EqTy(left, right, kind)
        return left

    def ty_app(self) -> Node:
        f = self.ty_atom()
        while self.at("name", "hash") or self._at_type_paren():
            f = TApp(f, self.ty_atom())
        return f

    def _at_type_paren(self) -> bool:
        return self.at("(")

    def ty_atom(self) -> Node:
        if self.at("name"):
            tok = self.advance()
            return self.resolve_type_name(tok)
        if self.at("hash"):
            tok = self.advance()
            return TVar(int(tok.text[1:]) + len(self.stack))
        if self.at("("):
            self.advance()
            if self.at("->"):
                self.advance()
                self.expect(")")
                return ARROW
            t = self.type_()
            self.expect(")")
            return t
        self.fail("expected a type", frozenset({"name", "(", "#"}))

    def resolve_type_name(self, tok: Token) -> Node:
        name = tok.text
        for depth, bound in enumerate(reversed(self.stack)):
            if bound == name:
                return TVar(depth)
        if name[0].isupper():
            return TCon(name)
        raise ParseError(f"unbound type variable {name!r}", tok.line, tok.col)

    # ---------------------------------------------------------- terms

    def _at_binder(self) -> bool:
        return (self.at("\\", "/\\")
                or self.at_kw("forallc", "if", "guard"))

    def term(self) -> Node:
        if self.at("\\"):
            self.advance()
            name = self.expect("name").text
            self.expect(":")
            ann = self.type_()
            self.expect(".")
            return Lam(ann, self._under(name))
        if self.at("/\\"):
            self.advance()
            name = self.expect("name").text
            self.expect(":")
            k = self.kind()
            self.expect(".")
            return TyLam(k, self._under(name))
        if self.at_kw("forallc"):
            self.advance()
            name = self.expect("name").text
            self.expect(":")
            k = self.kind()
            self.expect(".")
            return Univ(k, self._under(name))
        if self.at_kw("if"):
            self.advance()
            scrut = self.term()
            self.expect_kw("is")
            pat = self.pattern()
            self.expect_kw("then")
            cons = self.term()
            self.expect_kw("else")
            alt = self.term()
            return If(scrut, pat, cons, alt)
        if self.at_kw("guard"):
            self.advance()
            scrut = self.term()
            self.expect_kw("is")
            pat = self.pattern()
            self.expect_kw("then")
            cons = self.term()
            return Guard(scrut, pat, cons)
        return self.choice()

    def _under(self, name: str) -> Node:
        self.stack.append(name)
        try:
            return self.term()
        finally:
            self.stack.pop()

    def _operand(self, sub) -> Node:
        if self._at_binder():
            return self.term()
        return sub()

    def choice(self) -> Node:
        left = self._operand(self.cast)
        if self.at("<+>"):
            self.advance()
            return Choice(left, self.term())
        return left

    def cast(self) -> Node:
        left = self._operand(self.trans)
        while self.at("|>"):
            self.advance()
            left = Cast(left, self._operand(self.trans))
        return left

    def trans(self) -> Node:
        left = self._operand(self.capp)
        if self.at(";;"):
            self.advance()
            return Trans(left, self._operand(self.trans))
        return left

    def capp(self) -> Node:
        left = self._operand(self.prefix)
        while self.at("@", "@["):
            if self.at("@"):
                self.advance()
                left = CApp(left, self._operand(self.prefix))
            else:
                self.advance()
                t = self.type_()
                self.expect("]")
                left = CInst(left, t)
        return left

    def prefix(self) -> Node:
        if self.at_kw("sym"):
            self.advance()
            return Sym(self._operand(self.prefix))
        return self.proj()

    def proj(self) -> Node:
        node = self.app()
        while self.at(".1", ".2"):
            node = Fst(node) if self.advance().kind == ".1" else Snd(node)
        return node

    def app(self) -> Node:
        f = self.atom()
        while True:
            if self.at("["):
                self.advance()
                t = self.type_()
                self.expect("]")
                f = TyApp(f, t)
            elif self._at_atom():
                f = App(f, self.atom())
            else:
                return f

    def _at_atom(self) -> bool:
        return (self.at("name", "hash", "num", "(")
                or self.at_kw("refl", "sim"))

    def atom(self) -> Node:
        if self.at("name"):
            tok = self.advance()
            return self.resolve_term_name(tok)
        if self.at("hash"):
            tok = self.advance()
            return Var(int(tok.text[1:]) + len(self.stack))
        if self.at("num"):
            tok = self.advance()
            if tok.text != "0":
                raise ParseError("numeric literals are not supported "
                                 "(only the failure element 0)",
                                 tok.line, tok.col)
            return ZERO
        if self.at_kw("refl"):
            self.advance()
            self.expect("(")
            t = self.type_()
            self.expect(")")
            return Refl(t)
        if self.at_kw("sim"):
            self.advance()
            self.expect("(")
            l = self.term()
            self.expect(",")
            r = self.term()
            self.expect(")")
            return Sim(l, r)
        if self.at("("):
            self.advance()
            m = self.term()
            self.expect(")")
            return m
        self.fail("expected a term",
                  frozenset({"name", "0", "refl", "sim", "("}))

    def resolve_term_name(self, tok: Token) -> Node:
        name = tok.text
        for depth, bound in enumerate(reversed(self.stack)):
            if bound == name:
                return Var(depth)
        if name[0].isupper():
            return Con(name)
        return Ref(name)

    def pattern(self) -> Pattern:
        tok = self.expect("name")
        if not tok.text[0].isupper():
            raise ParseError(f"pattern head {tok.text!r} must be a constructor",
                             tok.line, tok.col)
        args = []
        while self.at("["):
            self.advance()
            args.append(self.type_())
            self.expect("]")
        return Pattern(tok.text, tuple(args))

    # ---------------------------------------------------- declarations

    def decl_name(self, upper: bool) -> str:
        tok = self.expect("name")
        name = tok.text
        if RESERVED_NAME.match(name):
            raise ParseError(f"{name!r} is reserved for generated binder names",
                             tok.line, tok.col)
        if upper and not name[0].isupper():
            raise ParseError(f"{name!r} must start uppercase", tok.line, tok.col)
        if not upper and name[0].isupper():
            raise ParseError(f"{name!r} must start lowercase", tok.line, tok.col)
        return name

    def decl(self) -> Decl:
        if self.at_kw("data"):
            self.advance()
            name = self.decl_name(upper=True)
            self.expect(":")
            k = self.kind()
            self.expect(";")
            return DataDecl(name, k)
        if self.at_kw("open"):
            self.advance()
            name = self.decl_name(upper=True)
            self.expect(":")
            k = self.kind()
            self.expect(";")
            return OpenTypeDecl(name, k)
        if self.at_kw("ctor"):
            self.advance()
            name = self.decl_name(upper=True)
            self.expect(":")
            t = self.type_()
            self.expect(";")
            return CtorDecl(name, t)
        if self.at_kw("openctor"):
            self.advance()
            name = self.decl_name(upper=True)
            self.expect(":")
            t = self.type_()
            self.expect(";")
            return OpenCtorDecl(name, t)
        if self.at_kw("method"):
            self.advance()
            name = self.decl_name(upper=False)
            self.expect(":")
            t = self.type_()
            self.expect(";")
            return MethodDecl(name, t)
        if self.at_kw("instance"):
            self.advance()
            tok = self.cur
            name = self.expect("name").text
            if RESERVED_NAME.match(name):
                raise ParseError(f"{name!r} is reserved for generated binder names",
                                 tok.line, tok.col)
            if self.at(":"):
                if not name[0].isupper():
                    raise ParseError(f"{name!r} must start uppercase",
                                     tok.line, tok.col)
                self.advance()
                t = self.type_()
                self.expect(";")
                return OpenCtorDecl(name, t)
            if not name[0].islower() and name[0] != "_":
                raise ParseError(f"open function {name!r} must start lowercase",
                                 tok.line, tok.col)
            self.expect("=")
            body = self.term()
            self.expect(";")
            return InstanceDecl(name, body)
        if self.at_kw("let"):
            self.advance()
            name = self.decl_name(upper=False)
            self.expect(":")
            t = self.type_()
            self.expect("=")
            body = self.term()
            self.expect(";")
            return LetDecl(name, t, body)
        self.fail("expected a declaration",
                  frozenset({"data", "ctor", "open", "openctor",
                             "method", "instance", "let"}))

    def program(self) -> list[Decl]:
        decls = []
        while not self.at("eof"):
            decls.append(self.decl())
        return decls

    def program_with_spans(self) -> tuple[list[Decl], list[tuple[int, int]]]:
        decls, spans = [], []
        while not self.at("eof"):
            spans.append((self.cur.line, self.cur.col))
            decls.append(self.decl())
        return decls, spans


def parse_core(text: str) -> list[Decl]:
    return Parser(tokenize(text)).program()


def parse_core_with_spans(text: str) -> tuple[list[Decl],
                                              list[tuple[int, int]]]:
    return Parser(tokenize(text)).program_with_spans()


def parse_term(text: str) -> Node:
    p = Parser(tokenize(text))
    node = p.term()
    p.expect("eof")
    return node


def parse_type(text: str) -> Node:
    p = Parser(tokenize(text))
    node = p.type_()
    p.expect("eof")
    return node


def parse_kind(text: str) -> Node:
    p = Parser(tokenize(text))
    node = p.kind()
    p.expect("eof")
    return node
