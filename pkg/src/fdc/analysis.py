"""Static analyses over core programs: the three-condition discipline under
which open functions are statically determined, the saturation check, the
syntactic no-zero guarantee, and the specializer that eliminates guards,
zeros, and open-function references from concrete call sites.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .printer import print_node
from .reduction import (
    Hit, Miss, NotReady, match_pattern, top_redexes, _zeta_reachable,
    _find_kappa,
)
from .subst import instantiate
from .syntax import (
    Node, TCon, Var, Con, Ref, Lam, App, TyLam, TyApp, Cast, Pattern, If,
    Guard, Zero, Choice, Sym, Trans, CApp, Fst, Snd, Univ, CInst, Sim, Env,
    MethodSig, InstanceDef, LetDef, OpenSig, Decl, ZERO, spine, plug_spine,
    split_ctor_type, spine_head, subnodes, map_children, children,
)
from .typecheck import Diagnostic, check_program


class AnalysisError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        self.diagnostic = diagnostic
        super().__init__(str(diagnostic))


# --------------------------------------------------------------- reports

@dataclass(frozen=True)
class GuardPreamble:
    """The leading guards of an instance body, outermost first; extraction
    stops at the first node that is neither a guard nor a binder."""

    patterns: tuple[Pattern, ...]

    @property
    def heads(self) -> tuple[str, ...]:
        return tuple(p.head for p in self.patterns)


@dataclass
class FunctionReport:
    name: str
    condition1: list[str] = field(default_factory=list)
    condition2: list[str] = field(default_factory=list)
    condition3_missing: list[tuple[str, ...]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.condition1 or self.condition2
                    or self.condition3_missing)


@dataclass
class HssdiReport:
    functions: dict[str, FunctionReport] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(f.ok for f in self.functions.values())

    def to_records(self) -> list[dict]:
        out = []
        for name, rep in sorted(self.functions.items()):
            out.append({
                "function": name,
                "ok": rep.ok,
                "condition1": rep.condition1,
                "condition2": rep.condition2,
                "condition3_missing": [list(t) for t in
                                       rep.condition3_missing],
            })
        return out


# ---------------------------------------------------------- basic pieces

def extract_preamble(body: Node) -> GuardPreamble:
    patterns: list[Pattern] = []
    node = body
    while True:
        match node:
            case TyLam(_, inner) | Lam(_, inner):
                node = inner
            case Guard(_, pat, cons):
                patterns.append(pat)
                node = cons
            case _:
                return GuardPreamble(tuple(patterns))


def check_no_zero_syntactic(m: Node) -> bool:
    """No guards, zeros, or references to open functions / let bindings
    anywhere below `m`; such terms can never reduce to zero."""
    for sub in subnodes(m):
        if isinstance(sub, (Guard, Zero, Ref)):
            return False
    return True


def dict_param_positions(env: Env, method_type: Node) -> list[tuple[int, Node]]:
    """(term-argument ordinal, open type head) for every dictionary-typed
    parameter of an open function's declared type."""
    _, args, _ = split_ctor_type(method_type)
    out = []
    for i, a in enumerate(args):
        head = spine_head(a)
        if isinstance(head, TCon) and isinstance(env.type_sig(head.name),
                                                 OpenSig):
            out.append((i, head.name))
    return out


def _con_count(n: Node) -> int:
    return sum(1 for sub in subnodes(n) if isinstance(sub, Con))


def _peel_casts(n: Node) -> Node:
    while isinstance(n, Cast):
        n = n.subject
    return n


# ------------------------------------------------------------ conditions

def _check_condition3(env: Env, report: HssdiReport) -> None:
    """Every constructor tuple over an open function's dictionary parameters
    needs an instance whose guard preamble matches it exactly."""
    for entry in env.entries:
        if not isinstance(entry, MethodSig):
            continue
        rep = report.functions.setdefault(entry.name,
                                          FunctionReport(entry.name))
        positions = dict_param_positions(env, entry.type)
        if not positions:
            continue
        ctor_sets = []
        for _, open_ty in positions:
            ctor_sets.append(tuple(env.ctors_of(open_ty)))
        if any(not cs for cs in ctor_sets):
            continue  # no constructors: no permutations exist
        preambles = [extract_preamble(b).heads
                     for b in env.instance_defs(entry.name)]
        for combo in itertools.product(*ctor_sets):
            heads = tuple(c.name for c in combo)
            if heads not in preambles:
                rep.condition3_missing.append(heads)


def _guard_binder_tags(body: Node):
    """Yield (call-site spine, binder tag stack, enclosing guard count) for
    every applied open-function reference in an instance or let body."""
    sites = []

    def walk(node: Node, tags: tuple[str, ...], guards: int,
             pending_guard_binders: int) -> None:
        head, args = spine(node)
        if isinstance(head, Ref):
            sites.append((head, args, tags, guards))
            for is_ty, a in args:
                if not is_ty:
                    walk(a, tags, guards, 0)
            return
        match node:
            case Lam(_, inner) | TyLam(_, inner):
                tag = "guard" if pending_guard_binders > 0 else "lam"
                walk(inner, tags + (tag,), guards,
                     max(pending_guard_binders - 1, 0))
            case Guard(scrut, _, cons):
                walk(scrut, tags, guards, 0)
                walk(cons, tags, guards + 1, _binder_prefix_len(cons))
            case If(scrut, _, cons, alt):
                walk(scrut, tags, guards, 0)
                walk(cons, tags, guards, _binder_prefix_len(cons))
                walk(alt, tags, guards, 0)
            case _:
                for child in _term_children(node):
                    walk(child, tags, guards, 0)

    walk(body, (), 0, 0)
    return sites


def _binder_prefix_len(n: Node) -> int:
    count = 0
    while isinstance(n, (Lam, TyLam)):
        count += 1
        n = n.body
    return count


def _term_children(n: Node) -> list[Node]:
    match n:
        case App(f, a):
            return [f, a]
        case TyApp(f, _):
            return [f]
        case Cast(s, c):
            return [s, c]
        case Choice(l, r):
            return [l, r]
        case Trans(l, r) | CApp(l, r) | Sim(l, r):
            return [l, r]
        case Lam(_, b) | TyLam(_, b) | Univ(_, b):
            return [b]
        case Fst(a) | Snd(a) | Sym(a):
            return [a]
        case CInst(c, _):
            return [c]
    return []


def _check_calls(env: Env, owner: Optional[str], body: Node,
                 report: HssdiReport) -> None:
    """Conditions 1 and 2 for every open-function call site in `body`;
    `owner` names the open function when the body is one of its instances."""
    for head, args, tags, guards in _guard_binder_tags(body):
        sig = env.method_sig(head.name)
        if sig is None:
            continue
        rep = report.functions.setdefault(head.name,
                                          FunctionReport(head.name))
        positions = dict_param_positions(env, sig.type)
        term_args = [a for is_ty, a in args if not is_ty]
        evidence_size = 0
        for ordinal, _ in positions:
            if ordinal >= len(term_args):
                rep.condition2.append(
                    f"{head.name!r} is used without all of its evidence "
                    f"arguments")
                continue
            arg = _peel_casts(term_args[ordinal])
            evidence_size += _con_count(arg)
            arg_head, _ = spine(arg)
            # statically determined evidence: a constructor spine, a bound
            # dictionary variable, an applied open function (checked at its
            # own site), or a let reference (substituted before unfolding)
            if isinstance(arg_head, (Con, Ref)):
                continue
            if isinstance(arg_head, Var) and arg_head.index < len(tags):
                continue
            rep.condition2.append(
                f"call of {head.name!r} passes non-concrete evidence "
                f"{print_node(term_args[ordinal])}")
        if owner == head.name and evidence_size >= guards:
            rep.condition1.append(
                f"recursive call of {head.name!r} with evidence size "
                f"{evidence_size} under {guards} guard(s)")


def check_hssdi(program: list[Decl], env: Optional[Env] = None) -> HssdiReport:
    """Run all three conditions over a typechecked program."""
    base = env if env is not None else Env()
    full, diags = check_program(base, program)
    if diags:
        raise AnalysisError(diags[0])
    report = HssdiReport()
    for entry in full.entries:
        match entry:
            case MethodSig(name, _):
                report.functions.setdefault(name, FunctionReport(name))
            case InstanceDef(name, body):
                _check_calls(full, name, body, report)
            case LetDef(_, body):
                _check_calls(full, None, body, report)
    _check_condition3(full, report)
    return report


def check_saturation(program: list[Decl],
                     env: Optional[Env] = None) -> dict[str, list[tuple[str, ...]]]:
    """Condition three alone: per open function, the constructor tuples with
    no exactly-matching guard preamble."""
    base = env if env is not None else Env()
    full, diags = check_program(base, program)
    if diags:
        raise AnalysisError(diags[0])
    report = HssdiReport()
    for entry in full.entries:
        if isinstance(entry, MethodSig):
            report.functions.setdefault(entry.name,
                                        FunctionReport(entry.name))
    _check_condition3(full, report)
    return {name: rep.condition3_missing
            for name, rep in report.functions.items()}


# ------------------------------------------------------------ specializer

DEFAULT_SPECIALIZE_BUDGET = 200_000


def _subst_lets(env: Env, m: Node, active: frozenset[str] = frozenset()) -> Node:
    match m:
        case Ref(name):
            ld = env.let_def(name)
            if ld is None:
                return m
            if name in active:
                raise AnalysisError(Diagnostic(
                    "recursive-let", f"let {name!r} refers to itself"))
            return _subst_lets(env, ld.body, active | {name})
    return map_children(m, lambda c: _subst_lets(env, c, active))


def _admin_step(env: Env, m: Node) -> Optional[Node]:
    """One deterministic non-open reduction, applied anywhere in the term
    (including under binders)."""
    for tag, contractum in top_redexes(env, m):
        if tag not in ("β_open", "β_let"):
            return contractum
    if _zeta_reachable(m):
        return ZERO
    kappa = _find_kappa(m)
    if kappa is not None:
        return Choice(kappa[0], kappa[1])
    changed = False

    def visit(child: Node) -> Node:
        nonlocal changed
        if changed:
            return child
        stepped = _admin_step(env, child)
        if stepped is not None:
            changed = True
            return stepped
        return child

    rebuilt = map_children(m, visit)
    return rebuilt if changed else None


def _admin_normalize(env: Env, m: Node, budget: list[int]) -> Node:
    while budget[0] > 0:
        stepped = _admin_step(env, m)
        if stepped is None:
            return m
        m = stepped
        budget[0] -= 1
    raise AnalysisError(Diagnostic(
        "specialize-budget", "specialization did not terminate within budget"))


def _find_method_site(env: Env, m: Node,
                      in_spine_fun: bool = False) -> Optional[Node]:
    """Innermost maximal open-function spine, so evidence-computing calls
    unfold before any call that scrutinizes their result."""
    for i, child in enumerate(children(m)):
        child_in_fun = isinstance(m, (App, TyApp)) and i == 0
        found = _find_method_site(env, child, child_in_fun)
        if found is not None:
            return found
    if in_spine_fun:
        return None
    head, _ = spine(m)
    if isinstance(head, Ref) and env.method_sig(head.name) is not None:
        return m
    return None


def _apply_instance(env: Env, body: Node, args: list[tuple[bool, Node]],
                    budget: list[int]) -> Optional[Node]:
    """Apply an instance body to call-site arguments, resolving its guard
    preamble; None when a guard misses."""
    node = body
    remaining = list(args)
    while True:
        node = _resolve_preamble(env, node, budget)
        if node is None:
            return None
        match node:
            case TyLam(_, inner) if remaining and remaining[0][0]:
                node = instantiate(inner, remaining.pop(0)[1])
            case Lam(_, inner) if remaining and not remaining[0][0]:
                node = instantiate(inner, remaining.pop(0)[1])
            case _:
                break
    result = plug_spine(node, remaining)
    return _resolve_preamble(env, result, budget)


def _resolve_preamble(env: Env, node: Node,
                      budget: list[int]) -> Optional[Node]:
    while isinstance(node, Guard):
        scrut = _admin_normalize(env, node.scrut, budget)
        outcome = match_pattern(scrut, node.pat)
        match outcome:
            case Hit(residual):
                node = plug_spine(node.cons, list(residual))
            case Miss():
                return None
            case NotReady():
                raise AnalysisError(Diagnostic(
                    "not-hssdi",
                    f"guard scrutinee is not concrete evidence: "
                    f"{print_node(scrut)}"))
    return node


def specialize(env: Env, m: Node,
               budget: int = DEFAULT_SPECIALIZE_BUDGET) -> Node:
    """Substitute lets, unfold open functions at concrete evidence, resolve
    guard preambles, and eliminate zeros; the result is guard-, zero-, and
    reference-free and keeps the term's type."""
    if check_no_zero_syntactic(m):
        return m
    fuel = [budget]
    while True:
        m = _admin_normalize(env, _subst_lets(env, m), fuel)
        site = _find_method_site(env, m)
        if site is None:
            break
        head, args = spine(site)
        assert isinstance(head, Ref)
        sig = env.method_sig(head.name)
        positions = dict_param_positions(env, sig.type)
        term_args = [a for is_ty, a in args if not is_ty]
        if positions and (not term_args
                          or positions[-1][0] >= len(term_args)):
            raise AnalysisError(Diagnostic(
                "not-hssdi",
                f"open function {head.name!r} is not applied to all of its "
                f"evidence arguments"))
        survivors = []
        for body in env.instance_defs(head.name):
            reduced = _apply_instance(env, body, args, fuel)
            if reduced is not None:
                survivors.append(reduced)
        if not survivors:
            raise AnalysisError(Diagnostic(
                "unsaturated",
                f"no instance of {head.name!r} matches the call site "
                f"{print_node(site)}"))
        replacement = survivors[-1]
        for s in reversed(survivors[:-1]):
            replacement = Choice(s, replacement)
        m = _replace_once(m, site, replacement)
    return m


def _replace_once(m: Node, target: Node, new: Node) -> Node:
    done = False

    def go(n: Node) -> Node:
        nonlocal done
        if done:
            return n
        if n is target:
            done = True
            return new
        return map_children(n, go)

    out = go(m)
    assert done
    return out
