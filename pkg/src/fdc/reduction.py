"""Values, evaluation contexts, and the small-step reduction relation, with
an exhaustive successor enumerator and a deterministic driver.

Two context grammars matter: absorptive frames (function position of
applications, coercion position of casts, scrutinees, all coercion
combinator positions) through which `0` absorbs and choices distribute, and
full frames which additionally descend into both sides of a choice.
Argument positions of constructor spines are not contexts: evaluation is
lazy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

from .syntax import (
    Node, Star, KArr, TVar, TCon, TApp, EqTy, Forall, Con, Ref, Lam,
    App, TyLam, TyApp, Cast, Pattern, If, Guard, Choice, Refl, Sym,
    Trans, CApp, Fst, Snd, Univ, CInst, Sim, Env, ZERO, node_eq, spine,
    plug_spine,
)
from .subst import instantiate
from .typecheck import CheckError, kind_of


# ------------------------------------------------------------- outcomes

@dataclass(frozen=True)
class Stepped:
    node: Node


@dataclass(frozen=True)
class IsValue:
    pass


@dataclass(frozen=True)
class IsZero:
    pass


@dataclass(frozen=True)
class Stuck:
    reason: str


StepOutcome = Union[Stepped, IsValue, IsZero, Stuck]


@dataclass(frozen=True)
class Hit:
    args: tuple[tuple[bool, Node], ...]


@dataclass(frozen=True)
class Miss:
    pass


@dataclass(frozen=True)
class NotReady:
    pass


MISS = Miss()
NOT_READY = NotReady()


# ------------------------------------------------------------- values

def _const_head(term: Node) -> bool:
    while True:
        match term:
            case Con():
                return True
            case App(f, _) | TyApp(f, _):
                term = f
            case _:
                return False


def is_value(m: Node) -> bool:
    match m:
        case Con() | Lam() | TyLam() | Refl():
            return True
        case App() | TyApp():
            return _const_head(m)
        case Choice(l, r):
            return is_value(l) and is_value(r)
        # types and kinds never reduce
        case TVar() | TCon() | Forall() | Star() | KArr():
            return True
        case TApp(f, a):
            return is_value(f) and is_value(a)
        case EqTy(l, r, _):
            return is_value(l) and is_value(r)
    return False


# ---------------------------------------------------------- pattern hits

def match_pattern(scrut: Node, p: Pattern) -> Union[Hit, Miss, NotReady]:
    """Decide a guard/if against a scrutinee spine.

    NotReady while the scrutinee head is not a constant; otherwise Hit with
    the residual spine (extra type arguments, then term arguments) exactly
    when the heads agree and the leading type arguments match the pattern's.
    """
    head, args = spine(scrut)
    if not isinstance(head, Con):
        return NOT_READY
    if head.name != p.head:
        return MISS
    want = len(p.type_args)
    lead = 0
    while lead < len(args) and args[lead][0]:
        lead += 1
    if lead < want:
        return MISS
    for i in range(want):
        if not node_eq(args[i][1], p.type_args[i]):
            return MISS
    return Hit(tuple(args[want:]))


def _open_unfold(env: Env, name: str) -> Node:
    """`0 <+> (M1 <+> (... <+> Mk))` over the instances in scope order."""
    bodies = env.instance_defs(name)
    if not bodies:
        return ZERO
    tail = bodies[-1]
    for body in reversed(bodies[:-1]):
        tail = Choice(body, tail)
    return Choice(ZERO, tail)


# ------------------------------------------------------------- redexes

def top_redexes(env: Env, m: Node) -> list[tuple[str, Node]]:
    """Rule applications with the redex at the root of `m`."""
    out: list[tuple[str, Node]] = []
    match m:
        case App(Lam(_, body), arg):
            out.append(("β→", instantiate(body, arg)))
        case TyApp(TyLam(_, body), arg):
            out.append(("β∀", instantiate(body, arg)))
        case Sym(Refl(t)):
            out.append(("δ_refl", Refl(t)))
        case Trans(Refl(a), Refl(b)) if node_eq(a, b):
            out.append(("δ_;", Refl(a)))
        case CApp(Refl(a), Refl(b)):
            out.append(("δ_@", Refl(TApp(a, b))))
        case CInst(Refl(Forall(_, body)), t):
            out.append(("δ_@[]", Refl(instantiate(body, t))))
        case Fst(Refl(TApp(f, _))):
            out.append(("δ_fst", Refl(f)))
        case Snd(Refl(TApp(_, a))):
            out.append(("δ_snd", Refl(a)))
        case Sim(Refl(a), Refl(b)):
            try:
                k = kind_of(env, a)
            except CheckError:
                k = None
            if k is not None:
                out.append(("δ_~", Refl(EqTy(a, b, k))))
        case Univ(k, Refl(t)):
            out.append(("δ_∀", Refl(Forall(k, t))))
        case Cast(subj, Refl(_)):
            out.append(("δ_▷", subj))
        case Choice(left, right):
            if left == ZERO:
                out.append(("β_0-1", right))
            if right == ZERO:
                out.append(("β_0-2", left))
        case If(scrut, pat, cons, alt):
            match match_pattern(scrut, pat):
                case Hit(args):
                    out.append(("δ_if-1", plug_spine(cons, list(args))))
                case Miss():
                    out.append(("δ_if-2", alt))
        case Guard(scrut, pat, cons):
            match match_pattern(scrut, pat):
                case Hit(args):
                    out.append(("δ_guard-1", plug_spine(cons, list(args))))
                case Miss():
                    out.append(("δ_guard-2", ZERO))
        case Ref(name):
            if env.method_sig(name) is not None:
                out.append(("β_open", _open_unfold(env, name)))
            elif (ld := env.let_def(name)) is not None:
                out.append(("β_let", ld.body))
    return out


# ------------------------------------------------------------- contexts

Plug = Callable[[Node], Node]


def a_children(m: Node) -> list[tuple[Node, Plug]]:
    """Absorptive-frame children, in evaluation order."""
    match m:
        case App(f, a):
            return [(f, lambda x: App(x, a))]
        case TyApp(f, t):
            return [(f, lambda x: TyApp(x, t))]
        case Cast(subj, co):
            return [(co, lambda x: Cast(subj, x))]
        case If(s, p, c, alt):
            return [(s, lambda x: If(x, p, c, alt))]
        case Guard(s, p, c):
            return [(s, lambda x: Guard(x, p, c))]
        case Sym(a):
            return [(a, Sym)]
        case Trans(l, r):
            return [(l, lambda x: Trans(x, r)), (r, lambda x: Trans(l, x))]
        case CApp(l, r):
            return [(l, lambda x: CApp(x, r)), (r, lambda x: CApp(l, x))]
        case Fst(a):
            return [(a, Fst)]
        case Snd(a):
            return [(a, Snd)]
        case Univ(k, b):
            return [(b, lambda x: Univ(k, x))]
        case CInst(co, t):
            return [(co, lambda x: CInst(x, t))]
        case Sim(l, r):
            return [(l, lambda x: Sim(x, r)), (r, lambda x: Sim(l, x))]
    return []


def e_children(m: Node) -> list[tuple[Node, Plug]]:
    """Full-frame children: absorptive frames plus both choice sides."""
    match m:
        case Choice(l, r):
            return [(l, lambda x: Choice(x, r)), (r, lambda x: Choice(l, x))]
    return a_children(m)


# ------------------------------------------------------------- step_all

def step_all(env: Env, m: Node) -> list[Node]:
    """Every one-step successor derivable by the reduction relation."""
    out: list[Node] = []
    seen: set[Node] = set()

    def emit(n: Node) -> None:
        if n not in seen:
            seen.add(n)
            out.append(n)

    def absorb_scan(node: Node, replace: Plug, rebuild: Plug) -> None:
        # zeta collapses any nonempty A-path to a 0; kappa lifts a choice
        # over any nonempty A-path
        for child, plug in a_children(node):
            composed = lambda x, r=replace, p=plug: r(p(x))
            if child == ZERO:
                emit(rebuild(ZERO))
            if isinstance(child, Choice):
                emit(rebuild(Choice(composed(child.left),
                                    composed(child.right))))
            absorb_scan(child, composed, rebuild)

    def at_focus(focus: Node, rebuild: Plug) -> None:
        for _, contractum in top_redexes(env, focus):
            emit(rebuild(contractum))
        absorb_scan(focus, lambda x: x, rebuild)
        for child, plug in e_children(focus):
            at_focus(child, lambda x, p=plug: rebuild(p(x)))

    at_focus(m, lambda x: x)
    return out


# ------------------------------------------------------------- step_det

def _zeta_reachable(m: Node) -> bool:
    for child, _ in a_children(m):
        if child == ZERO or _zeta_reachable(child):
            return True
    return False


def _find_kappa(m: Node) -> Optional[tuple[Node, Node]]:
    """First value-choice under a nonempty absorptive path; returns the two
    distributed pluggings of the whole focus."""

    def go(node: Node, replace: Plug) -> Optional[tuple[Node, Node]]:
        for child, plug in a_children(node):
            composed = lambda x, r=replace, p=plug: r(p(x))
            if (isinstance(child, Choice) and is_value(child.left)
                    and is_value(child.right)):
                return composed(child.left), composed(child.right)
            found = go(child, composed)
            if found is not None:
                return found
        return None

    return go(m, lambda x: x)


def step_det_tagged(env: Env, m: Node) -> Optional[tuple[str, Node]]:
    """Leftmost-outermost strategy: redex, then zeta, then kappa, then
    descend into the first reducible evaluation frame."""
    redexes = top_redexes(env, m)
    if redexes:
        return redexes[0]
    if _zeta_reachable(m):
        return ("ζ", ZERO)
    kappa = _find_kappa(m)
    if kappa is not None:
        return ("κ", Choice(kappa[0], kappa[1]))
    for child, plug in e_children(m):
        inner = step_det_tagged(env, child)
        if inner is not None:
            return (inner[0], plug(inner[1]))
    return None


def step_det(env: Env, m: Node) -> StepOutcome:
    if is_value(m):
        return IsValue()
    if m == ZERO:
        return IsZero()
    stepped = step_det_tagged(env, m)
    if stepped is None:
        return Stuck("no rule applies to a non-value, non-zero term")
    return Stepped(stepped[1])


# ------------------------------------------------------------- drivers

@dataclass(frozen=True)
class Value:
    node: Node


@dataclass(frozen=True)
class ZeroResult:
    pass


@dataclass(frozen=True)
class OutOfFuel:
    node: Node


@dataclass(frozen=True)
class StuckResult:
    node: Node


WhnfResult = Union[Value, ZeroResult, OutOfFuel, StuckResult]

DEFAULT_FUEL = 100_000


def whnf(env: Env, m: Node, fuel: int = DEFAULT_FUEL,
         trace: Optional[Callable[[str, Node], None]] = None) -> WhnfResult:
    """Iterate the deterministic step at most `fuel` times."""
    current = m
    remaining = fuel
    while True:
        if is_value(current):
            return Value(current)
        if current == ZERO:
            return ZeroResult()
        if remaining <= 0:
            return OutOfFuel(current)
        stepped = step_det_tagged(env, current)
        if stepped is None:
            return StuckResult(current)
        if trace is not None:
            trace(stepped[0], stepped[1])
        current = stepped[1]
        remaining -= 1


def eval_all(env: Env, m: Node, fuel: int = DEFAULT_FUEL,
             ) -> tuple[list[Node], bool]:
    """Breadth-first enumeration of reachable terminal terms (values and
    zero), up to `fuel` node expansions; second component reports whether
    the frontier was exhausted."""
    from collections import deque

    seen = {m}
    queue = deque([m])
    terminals: list[Node] = []
    term_seen: set[Node] = set()
    budget = fuel
    while queue:
        if budget <= 0:
            return terminals, False
        budget -= 1
        current = queue.popleft()
        successors = step_all(env, current)
        if not successors:
            if current not in term_seen:
                term_seen.add(current)
                terminals.append(current)
            continue
        for nxt in successors:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return terminals, True
