"""Generalized parallel substitution over the unified syntax.

A substitution is a total map from de Bruijn variables to actions: rename to
another index, or replace with a node. The representation is a finite prefix
of explicit actions plus a uniform tail shift, so substitutions compare equal
when (extensionally) equal on the prefix region and print usefully in test
failures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .syntax import (
    Node, Star, KArr, TVar, TCon, TApp, EqTy, Forall, Var, Con, Ref, Lam,
    App, TyLam, TyApp, Cast, Pattern, If, Guard, Zero, Choice, Refl, Sym,
    Trans, CApp, Fst, Snd, Univ, CInst, Sim, children,
)


@dataclass(frozen=True)
class Rename:
    index: int


@dataclass(frozen=True)
class Replace:
    node: Node


Action = Union[Rename, Replace]


@dataclass(frozen=True)
class Subst:
    """`prefix[i]` for i < len(prefix); index i maps to i + shift beyond."""

    prefix: tuple[Action, ...] = ()
    shift: int = 0

    def action(self, index: int) -> Action:
        if index < len(self.prefix):
            return self.prefix[index]
        return Rename(index + self.shift)


IDENTITY = Subst()


def shift_subst(amount: int) -> Subst:
    return Subst((), amount)


def singleton(node: Node) -> Subst:
    """[0 -> node], all other indices decremented: beta instantiation."""
    return Subst((Replace(node),), -1)


def _shift_action(a: Action) -> Action:
    match a:
        case Rename(i):
            return Rename(i + 1)
        case Replace(n):
            return Replace(shift(n, 1))
    raise TypeError(a)


def lift(s: Subst) -> Subst:
    """Adjust `s` for one extra enclosing binder: 0 stays, the rest shifts."""
    return Subst((Rename(0),) + tuple(_shift_action(a) for a in s.prefix),
                 s.shift)


def apply(s: Subst, n: Node) -> Node:
    if s == IDENTITY:
        return n
    return _apply(s, n)


def _resolve(s: Subst, index: int, make_var) -> Node:
    match s.action(index):
        case Rename(j):
            if j < 0:
                raise ValueError(f"substitution escapes scope at index {index}")
            return make_var(j)
        case Replace(node):
            return node
    raise TypeError


def _apply(s: Subst, n: Node) -> Node:
    match n:
        case Var(i):
            return _resolve(s, i, Var)
        case TVar(i):
            return _resolve(s, i, TVar)
        case Star() | KArr() | TCon() | Con() | Ref() | Zero():
            return n
        case TApp(f, a):
            return TApp(_apply(s, f), _apply(s, a))
        case EqTy(l, r, k):
            return EqTy(_apply(s, l), _apply(s, r), k)
        case Forall(k, b):
            return Forall(k, _apply(lift(s), b))
        case Lam(ann, b):
            return Lam(_apply(s, ann), _apply(lift(s), b))
        case App(f, a):
            return App(_apply(s, f), _apply(s, a))
        case TyLam(k, b):
            return TyLam(k, _apply(lift(s), b))
        case TyApp(f, a):
            return TyApp(_apply(s, f), _apply(s, a))
        case Cast(m, c):
            return Cast(_apply(s, m), _apply(s, c))
        case If(sc, p, c, a):
            return If(_apply(s, sc), _apply_pat(s, p), _apply(s, c), _apply(s, a))
        case Guard(sc, p, c):
            return Guard(_apply(s, sc), _apply_pat(s, p), _apply(s, c))
        case Choice(l, r):
            return Choice(_apply(s, l), _apply(s, r))
        case Refl(t):
            return Refl(_apply(s, t))
        case Sym(a):
            return Sym(_apply(s, a))
        case Trans(l, r):
            return Trans(_apply(s, l), _apply(s, r))
        case CApp(l, r):
            return CApp(_apply(s, l), _apply(s, r))
        case Fst(a):
            return Fst(_apply(s, a))
        case Snd(a):
            return Snd(_apply(s, a))
        case Univ(k, b):
            return Univ(k, _apply(lift(s), b))
        case CInst(c, t):
            return CInst(_apply(s, c), _apply(s, t))
        case Sim(l, r):
            return Sim(_apply(s, l), _apply(s, r))
    raise TypeError(f"not a syntax node: {n!r}")


def _apply_pat(s: Subst, p: Pattern) -> Pattern:
    return Pattern(p.head, tuple(_apply(s, t) for t in p.type_args))


def compose(s1: Subst, s2: Subst) -> Subst:
    """apply(compose(s1, s2), n) == apply(s2, apply(s1, n))."""
    length = max(len(s1.prefix), len(s2.prefix) - s1.shift, 0)
    prefix = []
    for i in range(length):
        match s1.action(i):
            case Rename(j):
                prefix.append(s2.action(j) if j >= 0 else Rename(j))
            case Replace(n):
                prefix.append(Replace(apply(s2, n)))
    return Subst(tuple(prefix), s1.shift + s2.shift)


def shift(n: Node, amount: int) -> Node:
    """Shift all free indices; negative amounts must not strand variables."""
    if amount == 0:
        return n
    return apply(shift_subst(amount), n)


def instantiate(body: Node, arg: Node) -> Node:
    """Substitute `arg` for index 0 of a binder body, closing the binder."""
    return apply(singleton(arg), body)


def min_free_index(n: Node) -> int:
    """Smallest free de Bruijn index in `n` (large sentinel when closed)."""
    best = 1 << 60

    def go(m: Node, depth: int) -> None:
        nonlocal best
        match m:
            case Var(i) | TVar(i):
                if i >= depth:
                    best = min(best, i - depth)
            case Forall(_, b) | TyLam(_, b) | Univ(_, b):
                go(b, depth + 1)
            case Lam(ann, b):
                go(ann, depth)
                go(b, depth + 1)
            case _:
                for c in children(m):
                    go(c, depth)

    go(n, 0)
    return best


def is_closed(n: Node) -> bool:
    return min_free_index(n) >= (1 << 60)


def try_unshift(n: Node, amount: int) -> Node | None:
    """Shift down by `amount`, or None when a free index would escape."""
    if amount == 0:
        return n
    if min_free_index(n) < amount:
        return None
    return shift(n, -amount)
