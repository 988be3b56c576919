"""Unified abstract syntax: kinds, types, terms (incl. coercions), patterns,
declarations, and environments.

One merged node family covers every syntactic category; which judgment a node
belongs to (kinding vs typing) is decided by the checker, not the grammar.
Variables bound by `Forall`/`Lam`/`TyLam`/`Univ` are de Bruijn indices into a
single shared telescope; declared constants (type constants, constructors,
open functions, lets) are strings resolved against the environment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union


class Node:
    """Base class for all syntax nodes."""

    __slots__ = ()


# ---------------------------------------------------------------- kinds

@dataclass(frozen=True)
class Star(Node):
    """Kind of inhabited types: `*`."""


@dataclass(frozen=True)
class KArr(Node):
    """Kind of type constructors: `k1 -> k2`."""

    left: Node
    right: Node


STAR = Star()


# ---------------------------------------------------------------- types

@dataclass(frozen=True)
class TVar(Node):
    """De Bruijn type variable."""

    index: int


@dataclass(frozen=True)
class TCon(Node):
    """Named type constant (closed or open)."""

    name: str


@dataclass(frozen=True)
class TApp(Node):
    """Type application. `a -> b` is sugar for `TApp(TApp(TCon('->'), a), b)`."""

    fun: Node
    arg: Node


@dataclass(frozen=True)
class EqTy(Node):
    """Coercion type `lhs ~[kind] rhs`."""

    lhs: Node
    rhs: Node
    kind: Node


@dataclass(frozen=True)
class Forall(Node):
    """Universally quantified type; binds one type variable."""

    kind: Node
    body: Node


ARROW = TCon("->")


def arrow(dom: Node, cod: Node) -> Node:
    return TApp(TApp(ARROW, dom), cod)


def un_arrow(ty: Node) -> Optional[tuple[Node, Node]]:
    """Return (dom, cod) when `ty` is arrow-sugar, else None."""
    match ty:
        case TApp(TApp(TCon("->"), dom), cod):
            return dom, cod
    return None


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class Var(Node):
    """De Bruijn term variable."""

    index: int


@dataclass(frozen=True)
class Con(Node):
    """Constructor constant (closed or open data)."""

    name: str


@dataclass(frozen=True)
class Ref(Node):
    """Reference to an open function or a let binding, by name."""

    name: str


@dataclass(frozen=True)
class Lam(Node):
    """Term abstraction; the annotation is the bound variable's type."""

    ann: Node
    body: Node


@dataclass(frozen=True)
class App(Node):
    fun: Node
    arg: Node


@dataclass(frozen=True)
class TyLam(Node):
    """Type abstraction; binds one type variable of the given kind."""

    kind: Node
    body: Node


@dataclass(frozen=True)
class TyApp(Node):
    """Type application of a term: `M [t]`."""

    fun: Node
    arg: Node


@dataclass(frozen=True)
class Cast(Node):
    """`M |> h` — cast the subject by a coercion."""

    subject: Node
    coercion: Node


@dataclass(frozen=True)
class Pattern:
    """Constructor pattern `K [t1] ... [tn]` (type arguments only)."""

    head: str
    type_args: tuple[Node, ...] = ()


@dataclass(frozen=True)
class If(Node):
    """Pattern match over a closed data type, with an else branch."""

    scrut: Node
    pat: Pattern
    cons: Node
    alt: Node


@dataclass(frozen=True)
class Guard(Node):
    """Pattern match over an open data type; a miss reduces to zero."""

    scrut: Node
    pat: Pattern
    cons: Node


@dataclass(frozen=True)
class Zero(Node):
    """The failure element; inhabits every type, never a value."""


@dataclass(frozen=True)
class Choice(Node):
    """Nondeterministic choice between two alternatives."""

    left: Node
    right: Node


ZERO = Zero()


# ------------------------------------------------------------- coercions

@dataclass(frozen=True)
class Refl(Node):
    """`refl(t)` — the only closed coercion value (up to choice trees)."""

    type: Node


@dataclass(frozen=True)
class Sym(Node):
    arg: Node


@dataclass(frozen=True)
class Trans(Node):
    """`h ;; k` — transitivity."""

    left: Node
    right: Node


@dataclass(frozen=True)
class CApp(Node):
    """`h @ k` — congruence at a type application."""

    left: Node
    right: Node


@dataclass(frozen=True)
class Fst(Node):
    """`h .1` — head projection of an application coercion."""

    arg: Node


@dataclass(frozen=True)
class Snd(Node):
    """`h .2` — argument projection of an application coercion."""

    arg: Node


@dataclass(frozen=True)
class Univ(Node):
    """`forallc t:k. h` — congruence under a quantifier; binds one type var."""

    kind: Node
    body: Node


@dataclass(frozen=True)
class CInst(Node):
    """`h @[t]` — instantiation of a quantified coercion."""

    coercion: Node
    type: Node


@dataclass(frozen=True)
class Sim(Node):
    """`sim(h, k)` — congruence at a coercion type."""

    left: Node
    right: Node


COERCION_FORMS = (Refl, Sym, Trans, CApp, Fst, Snd, Univ, CInst, Sim)


# ----------------------------------------------------------- declarations

class Decl:
    __slots__ = ()


@dataclass(frozen=True)
class DataDecl(Decl):
    name: str
    kind: Node


@dataclass(frozen=True)
class CtorDecl(Decl):
    name: str
    type: Node


@dataclass(frozen=True)
class OpenTypeDecl(Decl):
    name: str
    kind: Node


@dataclass(frozen=True)
class OpenCtorDecl(Decl):
    name: str
    type: Node


@dataclass(frozen=True)
class MethodDecl(Decl):
    name: str
    type: Node


@dataclass(frozen=True)
class InstanceDecl(Decl):
    """An instance of the open function `name`."""

    name: str
    body: Node


@dataclass(frozen=True)
class LetDecl(Decl):
    name: str
    type: Node
    body: Node


Program = list  # list[Decl]


# ----------------------------------------------------------- environments

@dataclass(frozen=True)
class TyVarBind:
    kind: Node


@dataclass(frozen=True)
class TmVarBind:
    type: Node


@dataclass(frozen=True)
class DataSig:
    name: str
    kind: Node


@dataclass(frozen=True)
class OpenSig:
    name: str
    kind: Node


@dataclass(frozen=True)
class CtorSig:
    name: str
    type: Node
    is_open: bool


@dataclass(frozen=True)
class MethodSig:
    name: str
    type: Node


@dataclass(frozen=True)
class InstanceDef:
    name: str
    body: Node


@dataclass(frozen=True)
class LetSig:
    name: str
    type: Node


@dataclass(frozen=True)
class LetDef:
    name: str
    body: Node


Entry = Union[
    TyVarBind, TmVarBind, DataSig, OpenSig, CtorSig, MethodSig,
    InstanceDef, LetSig, LetDef,
]

BINDERS = (TyVarBind, TmVarBind)

ARROW_KIND = KArr(STAR, KArr(STAR, STAR))


@dataclass(frozen=True)
class Env:
    """Ordered scope; `(->)` is pre-seeded in every environment.

    Immutable: `push` returns a new Env sharing nothing mutable, so
    environments are safe to use concurrently.
    """

    entries: tuple[Entry, ...] = field(default=(DataSig("->", ARROW_KIND),))

    def push(self, *new: Entry) -> "Env":
        return Env(self.entries + new)

    def __iter__(self) -> Iterator[Entry]:
        return iter(self.entries)

    # -- de Bruijn telescope (TyVarBind / TmVarBind entries only)

    def binder(self, index: int) -> Optional[Entry]:
        """The binder entry `index` steps in from the innermost end."""
        seen = 0
        for e in reversed(self.entries):
            if isinstance(e, BINDERS):
                if seen == index:
                    return e
                seen += 1
        return None

    def binder_depth(self) -> int:
        return sum(1 for e in self.entries if isinstance(e, BINDERS))

    # -- name lookups (names are unique per namespace)

    def type_sig(self, name: str):
        for e in reversed(self.entries):
            if isinstance(e, (DataSig, OpenSig)) and e.name == name:
                return e
        return None

    def ctor_sig(self, name: str) -> Optional[CtorSig]:
        for e in reversed(self.entries):
            if isinstance(e, CtorSig) and e.name == name:
                return e
        return None

    def method_sig(self, name: str) -> Optional[MethodSig]:
        for e in reversed(self.entries):
            if isinstance(e, MethodSig) and e.name == name:
                return e
        return None

    def let_sig(self, name: str) -> Optional[LetSig]:
        for e in reversed(self.entries):
            if isinstance(e, LetSig) and e.name == name:
                return e
        return None

    def let_def(self, name: str) -> Optional[LetDef]:
        for e in reversed(self.entries):
            if isinstance(e, LetDef) and e.name == name:
                return e
        return None

    def instance_defs(self, name: str) -> list[Node]:
        return [e.body for e in self.entries
                if isinstance(e, InstanceDef) and e.name == name]

    def ctors_of(self, type_name: str) -> list[CtorSig]:
        """Constructors whose declared codomain head is `type_name`."""
        out = []
        for e in self.entries:
            if isinstance(e, CtorSig):
                _, _, cod = split_ctor_type(e.type)
                head = spine_head(cod)
                if isinstance(head, TCon) and head.name == type_name:
                    out.append(e)
        return out

    def type_name_taken(self, name: str) -> bool:
        return self.type_sig(name) is not None

    def term_name_taken(self, name: str) -> bool:
        return (self.ctor_sig(name) is not None
                or self.method_sig(name) is not None
                or self.let_sig(name) is not None)

    def is_lambda_free(self) -> bool:
        """True when no entry is a bare term-variable binding."""
        return not any(isinstance(e, TmVarBind) for e in self.entries)


# ------------------------------------------------------------- utilities

def node_eq(a: Node, b: Node) -> bool:
    """Structural equality; alpha-equivalence is free under de Bruijn."""
    return a == b


def spine(term: Node) -> tuple[Node, list[tuple[bool, Node]]]:
    """Decompose nested applications into (head, args).

    Each arg is tagged (is_type, node); True marks a `[t]` type argument.
    """
    args: list[tuple[bool, Node]] = []
    while True:
        match term:
            case App(fun, arg):
                args.append((False, arg))
                term = fun
            case TyApp(fun, arg):
                args.append((True, arg))
                term = fun
            case _:
                args.reverse()
                return term, args


def plug_spine(head: Node, args: list[tuple[bool, Node]]) -> Node:
    for is_type, arg in args:
        head = TyApp(head, arg) if is_type else App(head, arg)
    return head


def type_spine(ty: Node) -> tuple[Node, list[Node]]:
    args: list[Node] = []
    while isinstance(ty, TApp):
        args.append(ty.arg)
        ty = ty.fun
    args.reverse()
    return ty, args


def spine_head(ty: Node) -> Node:
    while isinstance(ty, TApp):
        ty = ty.fun
    return ty


def split_ctor_type(ty: Node) -> tuple[list[Node], list[Node], Node]:
    """Split `forall t1..tn. a1 -> .. -> am -> cod` into (kinds, args, cod)."""
    kinds: list[Node] = []
    while isinstance(ty, Forall):
        kinds.append(ty.kind)
        ty = ty.body
    args: list[Node] = []
    while (ac := un_arrow(ty)) is not None:
        args.append(ac[0])
        ty = ac[1]
    return kinds, args, ty


def children(n: Node) -> list[Node]:
    """Immediate sub-nodes, patterns flattened to their type args."""
    match n:
        case Star() | TVar() | TCon() | Var() | Con() | Ref() | Zero():
            return []
        case KArr(l, r) | TApp(l, r) | App(l, r) | TyApp(l, r):
            return [l, r]
        case EqTy(l, r, k):
            return [l, r, k]
        case Forall(k, b) | TyLam(k, b) | Univ(k, b) | Lam(k, b):
            return [k, b]
        case Cast(s, c):
            return [s, c]
        case If(s, p, c, a):
            return [s, *p.type_args, c, a]
        case Guard(s, p, c):
            return [s, *p.type_args, c]
        case Choice(l, r) | Trans(l, r) | CApp(l, r) | Sim(l, r):
            return [l, r]
        case Refl(t):
            return [t]
        case Sym(a) | Fst(a) | Snd(a):
            return [a]
        case CInst(c, t):
            return [c, t]
    raise TypeError(f"not a syntax node: {n!r}")


def subnodes(n: Node) -> Iterator[Node]:
    """Preorder traversal of `n` and everything below it."""
    stack = [n]
    while stack:
        cur = stack.pop()
        yield cur
        stack.extend(reversed(children(cur)))


def map_children(n: Node, f) -> Node:
    """Rebuild `n` with every immediate sub-node passed through `f`."""
    match n:
        case Star() | TVar() | TCon() | Var() | Con() | Ref() | Zero():
            return n
        case KArr(l, r):
            return KArr(f(l), f(r))
        case TApp(l, r):
            return TApp(f(l), f(r))
        case App(l, r):
            return App(f(l), f(r))
        case TyApp(l, r):
            return TyApp(f(l), f(r))
        case EqTy(l, r, k):
            return EqTy(f(l), f(r), k)
        case Forall(k, b):
            return Forall(k, f(b))
        case TyLam(k, b):
            return TyLam(k, f(b))
        case Univ(k, b):
            return Univ(k, f(b))
        case Lam(a, b):
            return Lam(f(a), f(b))
        case Cast(s, c):
            return Cast(f(s), f(c))
        case If(s, p, c, a):
            pat = Pattern(p.head, tuple(f(t) for t in p.type_args))
            return If(f(s), pat, f(c), f(a))
        case Guard(s, p, c):
            pat = Pattern(p.head, tuple(f(t) for t in p.type_args))
            return Guard(f(s), pat, f(c))
        case Choice(l, r):
            return Choice(f(l), f(r))
        case Refl(t):
            return Refl(f(t))
        case Sym(a):
            return Sym(f(a))
        case Trans(l, r):
            return Trans(f(l), f(r))
        case CApp(l, r):
            return CApp(f(l), f(r))
        case Fst(a):
            return Fst(f(a))
        case Snd(a):
            return Snd(f(a))
        case CInst(c, t):
            return CInst(f(c), f(t))
        case Sim(l, r):
            return Sim(f(l), f(r))
    raise TypeError(f"not a syntax node: {n!r}")
