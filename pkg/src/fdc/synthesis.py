"""Instance resolution and coercion synthesis.

Coercions are found by depth-first search over a graph whose nodes are types
and whose edges come from: equality hypotheses in scope (both directions),
component projections of derivable equalities between type applications, and
improvement edges obtained by applying a functional-dependency witness to a
pair of dictionaries that share determiners. Structural congruence bridges
the remaining gaps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .syntax import (
    Node, TVar, TCon, TApp, EqTy, Forall, Var, Con, Ref, App, TyApp,
    Cast, Refl, Sym, Trans, CApp, Fst, Snd, Univ, Sim, Env, TyVarBind,
    TmVarBind, node_eq, type_spine, spine_head, un_arrow,
)
from .subst import Subst, Replace, Rename, apply, shift, instantiate
from .typecheck import Diagnostic


class SynthError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        self.diagnostic = diagnostic
        super().__init__(str(diagnostic))


@dataclass
class FundepInfo:
    name: str
    dets: tuple[int, ...]
    det: int


@dataclass
class ClassInfo:
    name: str
    param_kinds: tuple[Node, ...]
    methods: dict[str, Node] = field(default_factory=dict)
    supers: list[tuple[str, Node]] = field(default_factory=list)  # proj, pred
    fundeps: list[FundepInfo] = field(default_factory=list)


@dataclass
class InstanceInfo:
    class_name: str
    ctor_name: str
    var_kinds: tuple[Node, ...]
    head: tuple[Node, ...]     # class-parameter values over the instance vars
    context: tuple[Node, ...]  # predicates over the instance vars
    ctor_type: Node


@dataclass
class Registry:
    classes: dict[str, ClassInfo] = field(default_factory=dict)
    instances: dict[str, list[InstanceInfo]] = field(default_factory=dict)

    def class_of_type(self, ty: Node) -> Optional[ClassInfo]:
        head = spine_head(ty)
        if isinstance(head, TCon):
            return self.classes.get(head.name)
        return None


# --------------------------------------------------------------- matching

def match_type(pattern: Node, concrete: Node, n_vars: int,
               binding: dict[int, Node]) -> bool:
    """One-way structural match; indices < n_vars in `pattern` are match
    variables (the innermost telescope slots)."""
    match pattern:
        case TVar(i) if i < n_vars:
            if i in binding:
                return node_eq(binding[i], concrete)
            binding[i] = concrete
            return True
    match pattern, concrete:
        case (TVar(i), TVar(j)):
            return i == j
        case (TCon(a), TCon(b)):
            return a == b
        case (TApp(f1, a1), TApp(f2, a2)):
            return (match_type(f1, f2, n_vars, binding)
                    and match_type(a1, a2, n_vars, binding))
        case (EqTy(l1, r1, k1), EqTy(l2, r2, k2)):
            return (node_eq(k1, k2)
                    and match_type(l1, l2, n_vars, binding)
                    and match_type(r1, r2, n_vars, binding))
        case (Forall(k1, b1), Forall(k2, b2)):
            # match variables cannot occur under the extra binder soundly;
            # require exact equality there
            return node_eq(k1, k2) and node_eq(b1, b2)
    return False


def subst_match_vars(ty: Node, n_vars: int, binding: dict[int, Node]) -> Node:
    """Replace fully-bound match variables; binding values are expressed
    outside the match telescope, so indices beyond it drop by n_vars."""
    prefix = []
    for i in range(n_vars):
        if i in binding:
            prefix.append(Replace(binding[i]))
        else:
            prefix.append(Rename(i))  # left open: caller must reject
    return apply(Subst(tuple(prefix), -n_vars), ty)


# ---------------------------------------------------------- consistency

def _rigid_clash(a: Node, b: Node) -> bool:
    ha, _ = type_spine(a)
    hb, _ = type_spine(b)
    match ha, hb:
        case (TCon(x), TCon(y)):
            return x != y
        case (TCon(_), Forall(_, _)) | (Forall(_, _), TCon(_)):
            return True
        case (TCon(_), EqTy(_, _, _)) | (EqTy(_, _, _), TCon(_)):
            return True
    return False


def hyps_inconsistent(pairs: list[tuple[Node, Node]], limit: int = 200) -> bool:
    """Close equality hypotheses under symmetry, transitivity, and
    decomposition; report whether two rigidly distinct types get equated."""
    known: list[tuple[Node, Node]] = []

    def add(a: Node, b: Node) -> bool:
        if node_eq(a, b):
            return False
        for (x, y) in known:
            if node_eq(x, a) and node_eq(y, b):
                return False
        known.append((a, b))
        return True

    for a, b in pairs:
        add(a, b)
        add(b, a)
    changed = True
    while changed and len(known) < limit:
        changed = False
        for (a, b) in list(known):
            if isinstance(a, TApp) and isinstance(b, TApp):
                if add(a.fun, b.fun) or add(a.arg, b.arg):
                    changed = True
                if add(b.fun, a.fun) or add(b.arg, a.arg):
                    changed = True
            for (c, d) in list(known):
                if node_eq(b, c) and add(a, d):
                    changed = True
    return any(_rigid_clash(a, b) for a, b in known)


# ------------------------------------------------------------- resolver

@dataclass
class Resolver:
    env: Env
    names: list  # binder names (surface-visible ones); len == binder depth
    registry: Registry
    overlap: str = "reject"          # "reject" | "first"
    synth_depth: int = 64
    resolve_depth: int = 32

    # -- scope inspection

    def scope_entries(self) -> list[tuple[int, Node]]:
        """(index, type) for every term binder in scope, innermost first."""
        out = []
        depth = self.env.binder_depth()
        for i in range(depth):
            entry = self.env.binder(i)
            if isinstance(entry, TmVarBind):
                out.append((i, shift(entry.type, i + 1)))
        return out

    def hypotheses(self, exclude: frozenset[int]) -> list[tuple[Node, Node, Node]]:
        hyps = []
        for i, ty in self.scope_entries():
            if i in exclude:
                continue
            match ty:
                case EqTy(l, r, _):
                    hyps.append((l, r, Var(i)))
        return hyps

    def scope_dicts(self, exclude: frozenset[int]) -> list[tuple[Node, Node]]:
        """(term, type) pairs for class-typed binders, with superclass
        projections chased transitively."""
        out: list[tuple[Node, Node]] = []
        seen_types: list[Node] = []

        def push(term: Node, ty: Node) -> None:
            for t in seen_types:
                if node_eq(t, ty):
                    return
            seen_types.append(ty)
            out.append((term, ty))
            info = self.registry.class_of_type(ty)
            if info is None:
                return
            _, args = type_spine(ty)
            for proj, _pred in info.supers:
                sig = self.env.method_sig(proj)
                if sig is None:
                    continue
                super_ty = sig.type
                for a in args:
                    assert isinstance(super_ty, Forall)
                    super_ty = instantiate(super_ty.body, a)
                # the instantiated projection type is `C args -> S ...`
                arrow_parts = un_arrow(super_ty)
                if arrow_parts is None:
                    continue
                push(apply_projection(proj, args, term), arrow_parts[1])

        for i, ty in self.scope_entries():
            if i in exclude:
                continue
            if self.registry.class_of_type(ty) is not None:
                push(Var(i), ty)
        return out

    # -- instance resolution

    def resolve(self, goal: Node, depth: Optional[int] = None,
                exclude: frozenset[int] = frozenset()) -> Node:
        if depth is None:
            depth = self.resolve_depth
        if isinstance(goal, EqTy):
            eta = self.synth(goal.lhs, goal.rhs, exclude=exclude)
            return eta
        if depth <= 0:
            raise SynthError(Diagnostic(
                "no-instance", "instance search depth exhausted",
                found=_show(goal)))
        # 1. a local dictionary of exactly the goal type
        for i, ty in self.scope_entries():
            if i in exclude:
                continue
            if node_eq(ty, goal):
                return Var(i)
        head = spine_head(goal)
        _, goal_args = type_spine(goal)
        candidates: list[tuple[int, Node]] = []  # (specificity, term)
        if isinstance(head, TCon):
            for inst in self.registry.instances.get(head.name, []):
                term = self._try_instance(inst, goal_args, depth, exclude)
                if term is not None:
                    spec = sum(_size(h) for h in inst.head)
                    candidates.append((spec, term))
        if candidates:
            distinct = []
            for _, t in candidates:
                if not any(node_eq(t, u) for u in distinct):
                    distinct.append(t)
            if len(distinct) > 1 and self.overlap == "reject":
                raise SynthError(Diagnostic(
                    "ambiguous-instance",
                    f"{len(distinct)} instances satisfy the goal",
                    found=_show(goal)))
            best = max(range(len(candidates)),
                       key=lambda i: (candidates[i][0], -i))
            return candidates[best][1]
        # 3. superclass projections of resolvable dictionaries
        term = self._try_superclasses(goal, depth, exclude)
        if term is not None:
            return term
        raise SynthError(Diagnostic(
            "no-instance", "no instance or hypothesis matches the goal",
            found=_show(goal)))

    def _try_instance(self, inst: InstanceInfo, goal_args: list[Node],
                      depth: int, exclude: frozenset[int]) -> Optional[Node]:
        n_vars = len(inst.var_kinds)
        if len(goal_args) != len(inst.head):
            return None
        binding: dict[int, Node] = {}
        deferred: list[int] = []
        # premises are H_i ~ goal_i; structural matches bind instance vars,
        # the rest fall through to coercion synthesis
        pending = list(range(len(inst.head)))
        progress = True
        while pending and progress:
            progress = False
            for idx in list(pending):
                trial = dict(binding)
                if match_type(inst.head[idx], goal_args[idx], n_vars, trial):
                    binding.update(trial)
                    pending.remove(idx)
                    progress = True
        deferred = pending
        if len(binding) < n_vars:
            return None  # underdetermined instance variables
        inst_args = [binding[i] for i in range(n_vars)]
        premises: list[Node] = []
        for idx in range(len(inst.head)):
            concrete = subst_match_vars(inst.head[idx], n_vars, binding)
            if idx not in deferred and node_eq(concrete, goal_args[idx]):
                premises.append(Refl(goal_args[idx]))
                continue
            try:
                premises.append(self.synth(concrete, goal_args[idx],
                                           exclude=exclude))
            except SynthError:
                return None
        dicts: list[Node] = []
        for pred in inst.context:
            concrete = subst_match_vars(pred, n_vars, binding)
            try:
                dicts.append(self.resolve(concrete, depth - 1, exclude))
            except SynthError:
                return None
        term: Node = Con(inst.ctor_name)
        for a in goal_args:
            term = TyApp(term, a)
        # instance variables are quantified outermost-first after the params
        for i in reversed(range(n_vars)):
            term = TyApp(term, inst_args[i])
        for p in premises:
            term = App(term, p)
        for d in dicts:
            term = App(term, d)
        return term

    def _try_superclasses(self, goal: Node, depth: int,
                          exclude: frozenset[int]) -> Optional[Node]:
        for cname, info in self.registry.classes.items():
            for proj, pred in info.supers:
                n = len(info.param_kinds)
                binding: dict[int, Node] = {}
                if not match_type(pred, goal, n, binding):
                    continue
                if len(binding) < n:
                    continue
                params = [binding[n - 1 - pos] for pos in range(n)]
                # pred is expressed over the class params, innermost = last
                sub_goal: Node = TCon(cname)
                for p in params:
                    sub_goal = TApp(sub_goal, p)
                try:
                    dict_term = self.resolve(sub_goal, depth - 1, exclude)
                except SynthError:
                    continue
                return apply_projection(proj, params, dict_term)
        return None

    # -- coercion synthesis

    def synth(self, frm: Node, to: Node, depth: Optional[int] = None,
              exclude: frozenset[int] = frozenset()) -> Node:
        if depth is None:
            depth = self.synth_depth
        eta = self._synth(frm, to, depth, exclude, frozenset())
        if eta is None:
            raise SynthError(Diagnostic(
                "no-coercion", "no coercion path between the types",
                expected=_show(to), found=_show(frm)))
        return eta

    def _synth(self, frm: Node, to: Node, depth: int,
               exclude: frozenset[int],
               active: frozenset) -> Optional[Node]:
        if node_eq(frm, to):
            return Refl(frm)
        if depth <= 0:
            return None
        key = (frm, to)
        if key in active:
            return None
        active = active | {key}
        hyps = self.hypotheses(exclude)
        edges: list[tuple[Node, Node, Node]] = []
        for l, r, term in hyps:
            edges.append((l, r, term))
            edges.append((r, l, Sym(term)))
        nodeset: list[Node] = []
        for l, r, _ in hyps:
            _add_node(nodeset, l)
            _add_node(nodeset, r)
        _add_node(nodeset, frm)
        _add_node(nodeset, to)
        edges.extend(self._decomposition_edges(nodeset, edges))
        edges.extend(self._improvement_edges(hyps, depth, exclude, active))
        path = self._dfs(frm, to, edges, nodeset, depth, exclude, active)
        return path

    def _dfs(self, frm: Node, to: Node, edges, nodeset, depth,
             exclude, active) -> Optional[Node]:
        visited: list[Node] = []

        def seen(t: Node) -> bool:
            return any(node_eq(t, v) for v in visited)

        def walk(cur: Node) -> Optional[list[Node]]:
            if node_eq(cur, to):
                return []
            visited.append(cur)
            for (a, b, term) in edges:
                if node_eq(cur, a) and not seen(b):
                    rest = walk(b)
                    if rest is not None:
                        return [term] + rest
            # structural congruence, direct and via known nodes
            targets = [to] + [n for n in nodeset if not seen(n)
                              and not node_eq(n, to)]
            for target in targets:
                if node_eq(cur, target):
                    continue
                bridge = self._congruence(cur, target, depth - 1,
                                          exclude, active)
                if bridge is None:
                    continue
                if node_eq(target, to):
                    return [bridge]
                if not seen(target):
                    rest = walk(target)
                    if rest is not None:
                        return [bridge] + rest
            return None

        parts = walk(frm)
        if parts is None:
            return None
        if not parts:
            return Refl(frm)
        eta = parts[-1]
        for p in reversed(parts[:-1]):
            eta = Trans(p, eta)
        return eta

    def _congruence(self, a: Node, b: Node, depth: int, exclude,
                    active) -> Optional[Node]:
        match a, b:
            case (TApp(f1, a1), TApp(f2, a2)):
                ef = self._synth(f1, f2, depth, exclude, active)
                if ef is None:
                    return None
                ea = self._synth(a1, a2, depth, exclude, active)
                if ea is None:
                    return None
                return CApp(ef, ea)
            case (Forall(k1, b1), Forall(k2, b2)) if node_eq(k1, k2):
                inner = Resolver(self.env.push(TyVarBind(k1)),
                                 self.names + [None], self.registry,
                                 self.overlap, self.synth_depth,
                                 self.resolve_depth)
                shifted_exclude = frozenset(i + 1 for i in exclude)
                eb = inner._synth(b1, b2, depth, shifted_exclude, active)
                if eb is None:
                    return None
                return Univ(k1, eb)
            case (EqTy(l1, r1, k1), EqTy(l2, r2, k2)) if node_eq(k1, k2):
                el = self._synth(l1, l2, depth, exclude, active)
                if el is None:
                    return None
                er = self._synth(r1, r2, depth, exclude, active)
                if er is None:
                    return None
                return Sim(el, er)
        return None

    def _decomposition_edges(self, nodeset, hyp_edges):
        """Components of derivable equalities between type applications."""
        out = []
        apps = [n for n in nodeset if isinstance(n, TApp)]
        for i, a in enumerate(apps):
            for b in apps:
                if a is b or node_eq(a, b):
                    continue
                path = _hyp_path(a, b, hyp_edges)
                if path is None:
                    continue
                out.append((a.fun, b.fun, Fst(path)))
                out.append((a.arg, b.arg, Snd(path)))
        return out

    def _improvement_edges(self, hyps, depth, exclude, active):
        """fdFwd-style edges between determined parameters of dictionary
        pairs that share (or can be coerced to share) determiners."""
        edges = []
        dicts = self.scope_dicts(exclude)
        for term, ty in list(dicts):
            info = self.registry.class_of_type(ty)
            if info is None or not info.fundeps:
                continue
            _, args = type_spine(ty)
            for fd in info.fundeps:
                # pair with resolvable instances whose determiners match
                for inst in self.registry.instances.get(info.name, []):
                    got = self._instance_det_dict(inst, fd, args, depth,
                                                  exclude)
                    if got is None:
                        continue
                    inst_dict, inst_args = got
                    edge = self._fd_edge(info, fd, inst_dict, inst_args,
                                         term, args, depth, exclude, active)
                    if edge is not None:
                        edges.append(edge)
                # pair with other in-scope dictionaries
                for term2, ty2 in dicts:
                    if term2 is term:
                        continue
                    info2 = self.registry.class_of_type(ty2)
                    if info2 is None or info2.name != info.name:
                        continue
                    _, args2 = type_spine(ty2)
                    edge = self._fd_edge(info, fd, term, args, term2, args2,
                                         depth, exclude, active)
                    if edge is not None:
                        edges.append(edge)
        return edges

    def _instance_det_dict(self, inst: InstanceInfo, fd: FundepInfo,
                           args: list[Node], depth: int, exclude):
        """A dictionary for `inst` whose determiner positions equal the given
        argument list's, when the instance head allows it."""
        n_vars = len(inst.var_kinds)
        binding: dict[int, Node] = {}
        for i in fd.dets:
            if not match_type(inst.head[i], args[i], n_vars, binding):
                return None
        # every instance variable must be determined by the determiners
        for i in range(n_vars):
            if i not in binding:
                return None
        full_args = [subst_match_vars(inst.head[i], n_vars, binding)
                     for i in range(len(inst.head))]
        goal: Node = TCon(inst.class_name)
        for a in full_args:
            goal = TApp(goal, a)
        try:
            term = self.resolve(goal, depth - 1, exclude)
        except SynthError:
            return None
        return term, full_args

    def _fd_edge(self, info: ClassInfo, fd: FundepInfo,
                 d1: Node, args1: list[Node], d2: Node, args2: list[Node],
                 depth: int, exclude, active) -> Optional[tuple[Node, Node, Node]]:
        det_coercions: dict[int, Node] = {}
        for i in fd.dets:
            if node_eq(args1[i], args2[i]):
                continue
            eta = self._synth(args1[i], args2[i], depth - 1, exclude, active)
            if eta is None:
                return None
            det_coercions[i] = eta
        lhs_det = args1[fd.det]
        rhs_det = args2[fd.det]
        if node_eq(lhs_det, rhs_det):
            return None  # nothing to learn
        first = d1
        first_args = list(args1)
        if det_coercions:
            co: Node = Refl(TCon(info.name))
            for i in range(len(args1)):
                if i in det_coercions:
                    co = CApp(co, det_coercions[i])
                    first_args[i] = args2[i]
                else:
                    co = CApp(co, Refl(args1[i]))
            first = Cast(first, co)
        witness: Node = Ref(fd.name)
        for a in first_args:
            witness = TyApp(witness, a)
        nondets = [i for i in range(len(args2)) if i not in fd.dets]
        for i in nondets:
            witness = TyApp(witness, args2[i])
        witness = App(App(witness, first), d2)
        return (lhs_det, rhs_det, witness)


def apply_projection(name: str, type_args: list[Node], term_arg: Node) -> Node:
    out: Node = Ref(name)
    for t in type_args:
        out = TyApp(out, t)
    return App(out, term_arg)


def _hyp_path(frm: Node, to: Node, edges) -> Optional[Node]:
    """DFS over plain hypothesis edges only."""
    visited: list[Node] = []

    def seen(t: Node) -> bool:
        return any(node_eq(t, v) for v in visited)

    def walk(cur: Node) -> Optional[list[Node]]:
        if node_eq(cur, to):
            return []
        visited.append(cur)
        for (a, b, term) in edges:
            if node_eq(cur, a) and not seen(b):
                rest = walk(b)
                if rest is not None:
                    return [term] + rest
        return None

    parts = walk(frm)
    if parts is None or not parts:
        return None if parts is None else Refl(frm)
    eta = parts[-1]
    for p in reversed(parts[:-1]):
        eta = Trans(p, eta)
    return eta


def _add_node(nodeset: list[Node], n: Node) -> None:
    if not any(node_eq(n, m) for m in nodeset):
        nodeset.append(n)


def _size(t: Node) -> int:
    match t:
        case TVar(_):
            return 0
        case TCon(_):
            return 1
        case TApp(f, a):
            return _size(f) + _size(a)
        case Forall(_, b):
            return 1 + _size(b)
        case EqTy(l, r, _):
            return 1 + _size(l) + _size(r)
    return 1


def _show(t: Node) -> str:
    from .printer import print_node
    return print_node(t)
