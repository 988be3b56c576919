"""Deterministic pretty-printer for the core syntax.

Minimal parentheses by precedence (application > `@` > `;;` > `<+>`), single
spaces between tokens. Binders get generated names (`x<n>` for term binders,
`t<n>` for type binders, numbered outside-in), which the parser resolves back
to the same indices; free indices print as `#k` relative to the term root.
"""

from __future__ import annotations

from .syntax import (
    Node, Star, KArr, TVar, TCon, TApp, EqTy, Forall, Var, Con, Ref, Lam,
    App, TyLam, TyApp, Cast, Pattern, If, Guard, Zero, Choice, Refl, Sym,
    Trans, CApp, Fst, Snd, Univ, CInst, Sim, Decl, DataDecl, CtorDecl,
    OpenTypeDecl, OpenCtorDecl, MethodDecl, InstanceDecl, LetDecl, un_arrow,
)

# Term precedence levels, loosest to tightest.
BINDER, CHOICE, CAST, TRANS, CAPP, PREFIX, PROJ, APP, ATOM = range(9)

# Type levels.
T_FORALL, T_ARROW, T_EQ, T_APP, T_ATOM = range(5)


def print_kind(k: Node, level: int = 0) -> str:
    match k:
        case Star():
            return "*"
        case KArr(l, r):
            s = f"{print_kind(l, 1)} -> {print_kind(r, 0)}"
            return f"({s})" if level > 0 else s
    raise TypeError(f"not a kind: {k!r}")


class _Printer:
    def __init__(self) -> None:
        self.stack: list[str] = []  # binder names, outermost first
        self.term_count = 0
        self.type_count = 0

    def fresh(self, is_type: bool) -> str:
        if is_type:
            name = f"t{self.type_count}"
            self.type_count += 1
        else:
            name = f"x{self.term_count}"
            self.term_count += 1
        return name

    def under(self, name: str):
        self.stack.append(name)
        return _Popper(self.stack)

    def lookup(self, index: int) -> str:
        if index < len(self.stack):
            return self.stack[-1 - index]
        return f"#{index - len(self.stack)}"

    # ---- types

    def ty(self, t: Node, level: int = 0) -> str:
        match t:
            case TVar(i):
                return self.lookup(i)
            case TCon("->"):
                return "(->)"
            case TCon(name):
                return name
            case Forall(k, body):
                name = self.fresh(True)
                with self.under(name):
                    inner = self.ty(body, T_FORALL)
                s = f"forall {name}:{print_kind(k)}. {inner}"
                return f"({s})" if level > T_FORALL else s
            case EqTy(l, r, k):
                ann = "" if k == Star() else f"[{print_kind(k)}]"
                s = f"{self.ty(l, T_APP)} ~{ann} {self.ty(r, T_APP)}"
                return f"({s})" if level > T_EQ else s
            case TApp(_, _):
                if (dc := un_arrow(t)) is not None:
                    s = f"{self.ty(dc[0], T_EQ)} -> {self.ty(dc[1], T_ARROW)}"
                    return f"({s})" if level > T_ARROW else s
                s = f"{self.ty(t.fun, T_APP)} {self.ty(t.arg, T_ATOM)}"
                return f"({s})" if level > T_APP else s
        raise TypeError(f"not a type: {t!r}")

    # ---- terms

    def pat(self, p: Pattern) -> str:
        parts = [p.head] + [f"[{self.ty(a)}]" for a in p.type_args]
        return " ".join(parts)

    def tm(self, m: Node, level: int = 0) -> str:
        match m:
            case Var(i):
                return self.lookup(i)
            case Con(name) | Ref(name):
                return name
            case Zero():
                return "0"
            case Lam(ann, body):
                ann_s = self.ty(ann)
                name = self.fresh(False)
                with self.under(name):
                    inner = self.tm(body, BINDER)
                s = f"\\{name}:{ann_s}. {inner}"
                return f"({s})" if level > BINDER else s
            case TyLam(k, body):
                name = self.fresh(True)
                with self.under(name):
                    inner = self.tm(body, BINDER)
                s = f"/\\{name}:{print_kind(k)}. {inner}"
                return f"({s})" if level > BINDER else s
            case Univ(k, body):
                name = self.fresh(True)
                with self.under(name):
                    inner = self.tm(body, BINDER)
                s = f"forallc {name}:{print_kind(k)}. {inner}"
                return f"({s})" if level > BINDER else s
            case If(scrut, pat, cons, alt):
                s = (f"if {self.tm(scrut, CHOICE)} is {self.pat(pat)} "
                     f"then {self.tm(cons, CHOICE)} else {self.tm(alt, BINDER)}")
                return f"({s})" if level > BINDER else s
            case Guard(scrut, pat, cons):
                s = (f"guard {self.tm(scrut, CHOICE)} is {self.pat(pat)} "
                     f"then {self.tm(cons, BINDER)}")
                return f"({s})" if level > BINDER else s
            case Choice(l, r):
                s = f"{self.tm(l, CAST)} <+> {self.tm(r, CHOICE)}"
                return f"({s})" if level > CHOICE else s
            case Cast(subj, co):
                s = f"{self.tm(subj, CAST)} |> {self.tm(co, TRANS)}"
                return f"({s})" if level > CAST else s
            case Trans(l, r):
                s = f"{self.tm(l, CAPP)} ;; {self.tm(r, TRANS)}"
                return f"({s})" if level > TRANS else s
            case CApp(l, r):
                s = f"{self.tm(l, CAPP)} @ {self.tm(r, PREFIX)}"
                return f"({s})" if level > CAPP else s
            case CInst(co, t):
                s = f"{self.tm(co, CAPP)} @[{self.ty(t)}]"
                return f"({s})" if level > CAPP else s
            case Sym(a):
                s = f"sym {self.tm(a, PREFIX)}"
                return f"({s})" if level > PREFIX else s
            case Fst(a):
                s = f"{self.tm(a, PROJ)} .1"
                return f"({s})" if level > PROJ else s
            case Snd(a):
                s = f"{self.tm(a, PROJ)} .2"
                return f"({s})" if level > PROJ else s
            case App(f, a):
                s = f"{self.tm(f, APP)} {self.tm(a, ATOM)}"
                return f"({s})" if level > APP else s
            case TyApp(f, a):
                s = f"{self.tm(f, APP)} [{self.ty(a)}]"
                return f"({s})" if level > APP else s
            case Refl(t):
                return f"refl({self.ty(t)})"
            case Sim(l, r):
                return f"sim({self.tm(l)}, {self.tm(r)})"
        raise TypeError(f"not a term: {m!r}")


class _Popper:
    def __init__(self, stack: list) -> None:
        self.stack = stack

    def __enter__(self):
        return self

    def __exit__(self, *exc) -> None:
        self.stack.pop()


def print_type(t: Node) -> str:
    return _Printer().ty(t)


def print_term(m: Node) -> str:
    return _Printer().tm(m)


def print_node(n: Node) -> str:
    """Print any node, choosing the kind/type/term syntax by its class."""
    match n:
        case Star() | KArr():
            return print_kind(n)
        case TVar() | TCon() | TApp() | EqTy() | Forall():
            return print_type(n)
        case _:
            return print_term(n)


def print_decl(d: Decl) -> str:
    match d:
        case DataDecl(name, kind):
            return f"data {name} : {print_kind(kind)};"
        case OpenTypeDecl(name, kind):
            return f"open {name} : {print_kind(kind)};"
        case CtorDecl(name, ty):
            return f"ctor {name} : {print_type(ty)};"
        case OpenCtorDecl(name, ty):
            return f"instance {name} : {print_type(ty)};"
        case MethodDecl(name, ty):
            return f"method {name} : {print_type(ty)};"
        case InstanceDecl(name, body):
            return f"instance {name} = {print_term(body)};"
        case LetDecl(name, ty, body):
            return f"let {name} : {print_type(ty)} = {print_term(body)};"
    raise TypeError(f"not a declaration: {d!r}")


def print_core(obj) -> str:
    """Print a node, a declaration, or a whole program."""
    if isinstance(obj, Decl):
        return print_decl(obj)
    if isinstance(obj, list):
        return "\n".join(print_decl(d) for d in obj) + ("\n" if obj else "")
    return print_node(obj)
