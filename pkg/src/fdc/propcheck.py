"""Type-directed random generation of well-typed terms and executable
versions of the metatheory as property suites.

Generation inverts the typing rules: every production is type-correct by
construction, so the checker acts as an oracle over the generator's output
rather than a filter. Environments are built from bundled preludes and are
lambda-free, which is the premise of the progress suite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

from .corpus import prelude_env
from .printer import print_node, print_term, print_type
from .reduction import is_value, step_all, whnf, Value
from .subst import (
    IDENTITY, Rename, Replace, Subst, apply, compose, lift, shift,
)
from .syntax import (
    Node, Star, KArr, TVar, TCon, TApp, EqTy, Forall, Var, Con, Ref, Lam,
    App, TyLam, TyApp, Cast, Pattern, If, Guard, Zero, Choice, Refl, Sym,
    Trans, CApp, Fst, Snd, Univ, CInst, Sim, Env,
    CtorSig, LetSig, MethodSig, STAR, ZERO, arrow, node_eq, spine,
    split_ctor_type, type_spine, un_arrow,
)
from .typecheck import AnyType, CheckError, check_term, infer_term

PRELUDES = ("bool", "maybe", "eqord", "fundep")

_EQORD_SURFACE = """
class Eq a where { eq :: a -> a -> Bool; };
instance EqBool : Eq Bool where {
  eq = ((\\ b :: Bool. \\ c :: Bool. not (xor b c)) :: Bool -> Bool -> Bool);
};
class Eq a => Ord a where { lt :: a -> a -> Bool; };
instance OrdBool : Ord Bool where {
  lt = ((\\ b :: Bool. \\ c :: Bool. or (not b) c) :: Bool -> Bool -> Bool);
};
let lte :: forall a. Ord a => a -> a -> Bool
  = /\\ a. \\ d :: Ord a. \\ x :: a. \\ y :: a.
    or (lt [a] (_ :: Ord a) x y) (eq [a] (_ :: Eq a) x y);
"""

_FUNDEP_SURFACE = """
class F t u | t -> u, u -> t;
instance FIB : F Int Bool;
instance FMM : F a b => F (Maybe a) (Maybe b);
let f :: forall t. F Int t => t -> t = /\\ t. \\ d :: F Int t. not;
"""


@lru_cache(maxsize=None)
def prelude_for(name: str) -> Env:
    env = prelude_env()
    if name in ("bool", "maybe"):
        return env
    from .elaborate import elaborate_program
    from .surface import parse_surface
    from .typecheck import check_program
    text = _EQORD_SURFACE if name == "eqord" else _FUNDEP_SURFACE
    decls, diags = elaborate_program(parse_surface(text), env)
    if diags:
        raise RuntimeError(f"bundled prelude {name!r} failed: {diags[0]}")
    full, cdiags = check_program(env, decls)
    if cdiags:
        raise RuntimeError(f"bundled prelude {name!r} failed: {cdiags[0]}")
    return full


BOOL = TCon("Bool")


def _goal_pool(name: str) -> list[Node]:
    b = BOOL
    bb = arrow(b, b)
    pool = [b, bb, arrow(b, bb), EqTy(b, b, STAR),
            Forall(STAR, arrow(TVar(0), TVar(0)))]
    if name == "maybe":
        mb = TApp(TCon("Maybe"), b)
        pool += [mb, TApp(TCon("Maybe"), mb), arrow(mb, b),
                 EqTy(mb, mb, STAR),
                 Forall(STAR, arrow(TVar(0), TApp(TCon("Maybe"), TVar(0))))]
    if name == "eqord":
        pool += [TApp(TCon("Eq"), b), TApp(TCon("Ord"), b),
                 EqTy(b, b, STAR), arrow(TApp(TCon("Eq"), b), b)]
    if name == "fundep":
        fib = TApp(TApp(TCon("F"), TCon("Int")), b)
        pool += [fib, EqTy(b, b, STAR),
                 TApp(TCon("Maybe"), b), arrow(fib, b)]
    return pool


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    size: int = 30
    count: int = 100
    prelude: Optional[str] = None  # None cycles all bundled preludes
    weights: Optional[tuple[tuple[str, int], ...]] = None
    allow_zero: bool = True


@dataclass
class PropResult:
    name: str
    cases: int
    counterexample: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None

    def __str__(self) -> str:
        if self.ok:
            return f"{self.name}: pass ({self.cases} cases)"
        return f"{self.name}: FAIL after {self.cases} cases\n{self.counterexample}"


DEFAULT_WEIGHTS = {
    "canonical": 2,
    "lambda": 6,
    "spine": 5,
    "choice": 2,
    "zero_choice": 2,
    "cast": 2,
    "if": 3,
    "guard": 3,
    "app": 2,
    "coercion_ops": 4,
    "var": 4,
}


class GiveUp(Exception):
    pass


class Generator:
    """Builds well-typed closed terms against a lambda-free environment."""

    def __init__(self, env: Env, rng: random.Random,
                 weights: Optional[dict] = None, allow_zero: bool = True):
        self.env = env
        self.rng = rng
        self.weights = dict(DEFAULT_WEIGHTS)
        if weights:
            self.weights.update(weights)
        self.allow_zero = allow_zero
        self.callables = self._collect_callables()

    def _collect_callables(self):
        out = []
        for e in self.env.entries:
            match e:
                case CtorSig(name, ty, _):
                    out.append((Con(name), ty))
                case MethodSig(name, ty):
                    out.append((Ref(name), ty))
                case LetSig(name, ty):
                    out.append((Ref(name), ty))
        return out

    # -- scope helpers: the generator threads its own binder stack

    def term(self, scope: list[Node], goal: Node, size: int) -> Node:
        """A term of the goal type; scope holds binder types, innermost
        last, each expressed at its own binding point."""
        if size <= 0:
            return self.canonical(scope, goal)
        # weighted choice with fallback: failed productions defer to others
        attempts = self._productions(scope, goal, size)
        while attempts:
            total = sum(w for w, _ in attempts)
            pick = self.rng.randrange(total)
            acc = 0
            chosen = 0
            for i, (w, _) in enumerate(attempts):
                acc += w
                if pick < acc:
                    chosen = i
                    break
            _, fn = attempts.pop(chosen)
            try:
                return fn()
            except GiveUp:
                continue
        return self.canonical(scope, goal)

    def _productions(self, scope, goal, size):
        w = self.weights
        out = [(w["canonical"], lambda: self.canonical(scope, goal))]
        out.append((w["var"], lambda: self._scope_var(scope, goal)))
        out.append((w["spine"], lambda: self._spine(scope, goal, size)))
        out.append((w["choice"], lambda: Choice(
            self.term(scope, goal, size // 2),
            self.term(scope, goal, size // 2))))
        if self.allow_zero:
            out.append((w["zero_choice"], lambda: self._zero_choice(
                scope, goal, size)))
        out.append((w["cast"], lambda: Cast(
            self.term(scope, goal, size // 2),
            self.coercion(scope, goal, size // 2))))
        out.append((w["if"], lambda: self._if(scope, goal, size)))
        out.append((w["guard"], lambda: self._guard(scope, goal, size)))
        out.append((w["app"], lambda: self._app(scope, goal, size)))
        match goal:
            case TApp(TApp(TCon("->"), dom), cod):
                out.append((w["lambda"], lambda: Lam(
                    dom, self.term(scope + [dom], shift(cod, 1), size - 1))))
            case Forall(k, body):
                out.append((w["lambda"], lambda: TyLam(
                    k, self.term(scope + [k], body, size - 1))))
            case EqTy(l, r, _) if node_eq(l, r):
                out.append((w["coercion_ops"],
                            lambda: self.coercion_node(scope, l, size)))
        return out

    def _zero_choice(self, scope, goal, size):
        inhabited = self.term(scope, goal, size // 2)
        if self.rng.random() < 0.5:
            return Choice(ZERO, inhabited)
        return Choice(inhabited, ZERO)

    def _scope_var(self, scope, goal):
        hits = []
        depth = len(scope)
        for i in range(depth):
            ty = scope[depth - 1 - i]
            if isinstance(ty, (Star, KArr)):
                continue  # type binder
            if node_eq(shift(ty, i + 1), goal):
                hits.append(Var(i))
        if not hits:
            raise GiveUp
        return self.rng.choice(hits)

    def _spine(self, scope, goal, size):
        """A declared constructor, open function, or let applied to matching
        arguments."""
        from .synthesis import match_type
        options = []
        for head, ty in self.callables:
            kinds, args, cod = split_ctor_type(ty)
            binding: dict[int, Node] = {}
            if not match_type(cod, goal, len(kinds), binding):
                continue
            for i, k in enumerate(kinds):
                if i not in binding:
                    if not node_eq(k, STAR):
                        break
                    binding[i] = BOOL  # free quantifier: any * type works
            if len(binding) < len(kinds):
                continue
            options.append((head, kinds, args, binding))
        if not options:
            raise GiveUp
        head, kinds, args, binding = self.rng.choice(options)
        n = len(kinds)
        type_args = [binding[n - 1 - pos] for pos in range(n)]
        term: Node = head
        for t in type_args:
            term = TyApp(term, t)
        sub_prefix = tuple(Replace(binding[i]) for i in range(n))
        sub = Subst(sub_prefix, -n)
        budget = max(size - 1, 0) // max(len(args), 1)
        for a in args:
            concrete = apply(sub, a)
            term = App(term, self.term(scope, concrete, budget))
        return term

    def _app(self, scope, goal, size):
        dom = self.rng.choice([BOOL, arrow(BOOL, BOOL)])
        fun = self.term(scope, arrow(dom, goal), size // 2)
        arg = self.term(scope, dom, size // 2)
        return App(fun, arg)

    def _if(self, scope, goal, size):
        scrut_ty, pats = self._pattern_pool(open_types=False)
        scrut = self.term(scope, scrut_ty, size // 3)
        pat, res_kinds, arg_tys = self.rng.choice(pats)
        cons = self._consequent(scope, res_kinds, arg_tys, goal, size // 3)
        alt = self.term(scope, goal, size // 3)
        return If(scrut, pat, cons, alt)

    def _guard(self, scope, goal, size):
        got = self._pattern_pool(open_types=True)
        if got is None:
            raise GiveUp
        scrut_ty, pats = got
        scrut = self.term(scope, scrut_ty, size // 3)
        pat, res_kinds, arg_tys = self.rng.choice(pats)
        cons = self._consequent(scope, res_kinds, arg_tys, goal, size // 3)
        return Guard(scrut, pat, cons)

    def _consequent(self, scope, res_kinds, arg_tys, goal, size):
        inner_scope = list(scope) + list(res_kinds)
        shifted_goal = shift(goal, len(res_kinds))
        for i, t in enumerate(arg_tys):
            inner_scope.append(shift(t, i))
        shifted_goal = shift(shifted_goal, len(arg_tys))
        body = self.term(inner_scope, shifted_goal, size)
        for i in reversed(range(len(arg_tys))):
            body = Lam(shift(arg_tys[i], i), body)
        for k in reversed(res_kinds):
            body = TyLam(k, body)
        return body

    def _pattern_pool(self, open_types: bool):
        """A scrutinee type plus fully-instantiated patterns against it."""
        from .typecheck import pattern_type
        if not open_types:
            choices = [(TCon("Bool"),
                        ["True", "False"]),
                       (TApp(TCon("Maybe"), BOOL), ["Just", "Nothing"])]
            scrut_ty, ctors = self.rng.choice(choices)
        else:
            eq = self.env.type_sig("Eq")
            f = self.env.type_sig("F")
            options = []
            if eq is not None:
                options.append((TApp(TCon("Eq"), BOOL), ["EqBool"]))
                options.append((TApp(TCon("Ord"), BOOL), ["OrdBool"]))
            if f is not None:
                options.append((TApp(TApp(TCon("F"), TCon("Int")), BOOL),
                                ["FIB", "FMM"]))
            if not options:
                return None
            scrut_ty, ctors = self.rng.choice(options)
        pats = []
        for cname in ctors:
            sig = self.env.ctor_sig(cname)
            if sig is None:
                continue
            kinds, _, _ = split_ctor_type(sig.type)
            _, scrut_args = type_spine(scrut_ty)
            take = min(len(kinds), len(scrut_args))
            pat = Pattern(cname, tuple(scrut_args[:take]))
            try:
                res_kinds, arg_tys, _ = pattern_type(self.env, pat, scrut_ty)
            except CheckError:
                continue
            pats.append((pat, res_kinds, arg_tys))
        if not pats:
            raise GiveUp
        return scrut_ty, pats

    # -- coercions at reflexive goals

    def coercion(self, scope, ty: Node, size: int) -> Node:
        """A coercion term proving `ty ~ ty`."""
        return self.coercion_node(scope, ty, size)

    def coercion_node(self, scope, ty: Node, size: int) -> Node:
        if size <= 0:
            return Refl(ty)
        roll = self.rng.random()
        if roll < 0.3:
            return Refl(ty)
        if roll < 0.45:
            return Sym(self.coercion_node(scope, ty, size - 1))
        if roll < 0.6:
            return Trans(self.coercion_node(scope, ty, size // 2),
                         self.coercion_node(scope, ty, size // 2))
        if roll < 0.7 and isinstance(ty, TApp):
            return CApp(self.coercion_node(scope, ty.fun, size // 2),
                        self.coercion_node(scope, ty.arg, size // 2))
        if roll < 0.75 and isinstance(ty, EqTy):
            return Sim(self.coercion_node(scope, ty.lhs, size // 2),
                       self.coercion_node(scope, ty.rhs, size // 2))
        if roll < 0.8 and isinstance(ty, Forall):
            return Univ(ty.kind,
                        self.coercion_node(scope + [ty.kind], ty.body,
                                           size - 1))
        if roll < 0.9:
            return Choice(self.coercion_node(scope, ty, size // 2),
                          self.coercion_node(scope, ty, size // 2))
        return Refl(ty)

    # -- canonical small inhabitants

    def canonical(self, scope: list[Node], goal: Node) -> Node:
        depth = len(scope)
        for i in range(depth):
            ty = scope[depth - 1 - i]
            if isinstance(ty, (Star, KArr)):
                continue
            if node_eq(shift(ty, i + 1), goal):
                return Var(i)
        match goal:
            case TCon("Bool"):
                return Con("True")
            case TApp(TCon("Maybe"), t):
                return TyApp(Con("Nothing"), t)
            case TApp(TCon("Eq"), TCon("Bool")):
                return App(TyApp(Con("EqBool"), BOOL), Refl(BOOL))
            case TApp(TCon("Ord"), TCon("Bool")):
                return App(TyApp(Con("OrdBool"), BOOL), Refl(BOOL))
            case TApp(TApp(TCon("F"), TCon("Int")), TCon("Bool")):
                return App(App(TyApp(TyApp(Con("FIB"), TCon("Int")), BOOL),
                               Refl(TCon("Int"))), Refl(BOOL))
            case TApp(TApp(TCon("->"), dom), cod):
                return Lam(dom, self.canonical(scope + [dom], shift(cod, 1)))
            case Forall(k, body):
                return TyLam(k, self.canonical(scope + [k], body))
            case EqTy(l, r, _) if node_eq(l, r):
                return Refl(l)
        raise GiveUp


def gen_well_typed(cfg: GenConfig, case_index: int = 0,
                   ) -> tuple[Env, Node, Node]:
    """One generated (environment, term, type) triple; the environment is
    lambda-free and the term checks against the type."""
    names = PRELUDES if cfg.prelude is None else (cfg.prelude,)
    name = names[case_index % len(names)]
    env = prelude_for(name)
    rng = random.Random(cfg.seed * 1_000_003 + case_index)
    gen = Generator(env, rng, dict(cfg.weights) if cfg.weights else None,
                    cfg.allow_zero)
    pool = _goal_pool(name)
    for _ in range(20):
        goal = rng.choice(pool)
        try:
            term = gen.term([], goal, cfg.size)
        except GiveUp:
            continue
        return env, term, goal
    raise RuntimeError("generation retry budget exhausted")


# ----------------------------------------------------------- properties

def _is_refl_tree(v: Node) -> bool:
    match v:
        case Refl(_):
            return True
        case Choice(l, r):
            return _is_refl_tree(l) and _is_refl_tree(r)
    return False


def _is_function_canonical(v: Node) -> bool:
    match v:
        case Lam(_, _):
            return True
        case Choice(l, r):
            return _is_function_canonical(l) and _is_function_canonical(r)
    head, _ = spine(v)
    return isinstance(head, Con)


def _prop_progress(env, term, ty) -> Optional[str]:
    if not env.is_lambda_free():
        return "environment is not lambda-free"
    succs = step_all(env, term)
    facts = [is_value(term), term == ZERO, bool(succs)]
    if sum(facts) != 1:
        return (f"trichotomy violated: value={facts[0]} zero={facts[1]} "
                f"successors={len(succs)}")
    return None


def _prop_preservation(env, term, ty) -> Optional[str]:
    for succ in step_all(env, term):
        try:
            check_term(env, succ, ty)
        except CheckError as e:
            return (f"successor does not preserve the type:\n  "
                    f"{print_term(succ)}\n  {e.diagnostic}")
    return None


def _prop_value_soundness(env, term, ty) -> Optional[str]:
    candidates = [term]
    result = whnf(env, term, fuel=2000)
    if isinstance(result, Value):
        candidates.append(result.node)
    for v in candidates:
        if is_value(v):
            if v == ZERO:
                return "zero is classified as a value"
            succs = step_all(env, v)
            if succs:
                return (f"value steps: {print_term(v)} -> "
                        f"{print_term(succs[0])}")
    return None


def _prop_canonicity_coercion(env, term, ty) -> Optional[str]:
    if not isinstance(ty, EqTy):
        return None
    result = whnf(env, term, fuel=2000)
    if isinstance(result, Value) and not _is_refl_tree(result.node):
        return f"non-refl coercion value: {print_term(result.node)}"
    return None


def _prop_canonicity_function(env, term, ty) -> Optional[str]:
    if un_arrow(ty) is None:
        return None
    result = whnf(env, term, fuel=2000)
    if isinstance(result, Value) and not _is_function_canonical(result.node):
        return f"non-canonical function value: {print_term(result.node)}"
    return None


def _prop_uniqueness(env, term, ty) -> Optional[str]:
    if any(sub == ZERO for sub in _subnodes(term)):
        return None
    first = infer_term(env, term)
    second = infer_term(env, term)
    if isinstance(first, AnyType) or isinstance(second, AnyType):
        return f"zero-free term inferred AnyType: {print_term(term)}"
    if not node_eq(first.type, second.type):
        return "inference is not deterministic"
    if not node_eq(first.type, ty):
        return (f"inferred type differs from the generated type: "
                f"{print_type(first.type)} vs {print_type(ty)}")
    return None


def _subnodes(term):
    from .syntax import subnodes
    return subnodes(term)


def _prop_types_are_values(env, term, ty) -> Optional[str]:
    from .typecheck import kind_of
    kind_of(env, ty)
    if not is_value(ty):
        return f"well-kinded type is not a value: {print_type(ty)}"
    return None


PROPERTIES: dict[str, Callable] = {
    "progress": _prop_progress,
    "preservation": _prop_preservation,
    "value_soundness": _prop_value_soundness,
    "canonicity_coercion": _prop_canonicity_coercion,
    "canonicity_function": _prop_canonicity_function,
    "uniqueness_mod_zero": _prop_uniqueness,
    "types_are_values": _prop_types_are_values,
}


def _node_count(n: Node) -> int:
    from .syntax import subnodes
    return sum(1 for _ in subnodes(n))


def shrink(env: Env, term: Node, ty: Node, prop: Callable) -> Node:
    """Best-effort structural shrinking: replace the counterexample with any
    strictly smaller well-typed subterm of the same type that still fails."""
    from .syntax import subnodes
    current = term
    improved = True
    while improved:
        improved = False
        bound = _node_count(current)
        for sub in subnodes(current):
            if sub is current or _node_count(sub) >= bound:
                continue
            try:
                check_term(env, sub, ty)
            except CheckError:
                continue
            if prop(env, sub, ty) is not None:
                current = sub
                improved = True
                break
    return current


def run_property(name: str, cfg: GenConfig) -> PropResult:
    if name == "subst_laws":
        return run_subst_laws(cfg)
    prop = PROPERTIES[name]
    uniqueness = name == "uniqueness_mod_zero"
    if uniqueness and cfg.allow_zero:
        cfg = GenConfig(cfg.seed, cfg.size, cfg.count, cfg.prelude,
                        cfg.weights, allow_zero=False)
    for i in range(cfg.count):
        env, term, ty = gen_well_typed(cfg, i)
        failure = prop(env, term, ty)
        if failure is not None:
            small = shrink(env, term, ty, prop)
            detail = (f"seed={cfg.seed} case={i}\n"
                      f"term: {print_term(term)}\n"
                      f"type: {print_node(ty)}\n{failure}")
            if small is not term:
                detail += f"\nshrunk: {print_term(small)}"
            return PropResult(name, i + 1, detail)
    return PropResult(name, cfg.count)


# ------------------------------------------------------- substitution laws

def gen_type_node(rng: random.Random, size: int) -> Node:
    """An arbitrary type tree with free de Bruijn indices."""
    if size <= 0:
        return rng.choice([TVar(rng.randrange(4)), TCon("T"), TCon("Maybe")])
    half = size // 2
    builders = [
        lambda: TApp(gen_type_node(rng, half), gen_type_node(rng, half)),
        lambda: EqTy(gen_type_node(rng, half), gen_type_node(rng, half),
                     STAR),
        lambda: Forall(STAR, gen_type_node(rng, size - 1)),
        lambda: arrow(gen_type_node(rng, half), gen_type_node(rng, half)),
        lambda: gen_type_node(rng, 0),
    ]
    return rng.choice(builders)()


def gen_node(rng: random.Random, size: int) -> Node:
    """An arbitrary term tree (not necessarily well-typed) for the
    substitution laws, which are purely structural."""
    if size <= 0:
        return rng.choice([Var(rng.randrange(4)), Con("K"), ZERO,
                           Refl(gen_type_node(rng, 0)), Ref("k")])
    half = size // 2
    builders = [
        lambda: App(gen_node(rng, half), gen_node(rng, half)),
        lambda: TyApp(gen_node(rng, half), gen_type_node(rng, half)),
        lambda: Lam(gen_type_node(rng, half), gen_node(rng, half)),
        lambda: TyLam(STAR, gen_node(rng, size - 1)),
        lambda: Univ(STAR, gen_node(rng, size - 1)),
        lambda: Cast(gen_node(rng, half), gen_node(rng, half)),
        lambda: Choice(gen_node(rng, half), gen_node(rng, half)),
        lambda: Trans(gen_node(rng, half), gen_node(rng, half)),
        lambda: CApp(gen_node(rng, half), gen_node(rng, half)),
        lambda: Sym(gen_node(rng, size - 1)),
        lambda: Fst(gen_node(rng, size - 1)),
        lambda: Snd(gen_node(rng, size - 1)),
        lambda: Sim(gen_node(rng, half), gen_node(rng, half)),
        lambda: CInst(gen_node(rng, half), gen_type_node(rng, half)),
        lambda: Refl(gen_type_node(rng, size - 1)),
        lambda: If(gen_node(rng, half),
                   Pattern("K", (gen_type_node(rng, half),)),
                   gen_node(rng, half), gen_node(rng, half)),
        lambda: Guard(gen_node(rng, half), Pattern("K", ()),
                      gen_node(rng, half)),
        lambda: gen_node(rng, 0),
    ]
    return rng.choice(builders)()


def gen_subst(rng: random.Random, size: int) -> Subst:
    prefix = []
    for _ in range(rng.randrange(4)):
        if rng.random() < 0.5:
            prefix.append(Rename(rng.randrange(5)))
        else:
            prefix.append(Replace(gen_node(rng, max(size // 3, 1))))
    return Subst(tuple(prefix), rng.randrange(0, 3))


def run_subst_laws(cfg: GenConfig) -> PropResult:
    """Identity, composition, and lift/shift commutation, checked against
    direct sequential evaluation."""
    rng = random.Random(cfg.seed)
    for i in range(cfg.count):
        node = gen_node(rng, min(cfg.size, 12))
        s1 = gen_subst(rng, cfg.size)
        s2 = gen_subst(rng, cfg.size)
        if apply(IDENTITY, node) != node:
            return PropResult("subst_laws", i + 1,
                              f"identity law failed on {node!r}")
        composed = apply(compose(s1, s2), node)
        sequential = apply(s2, apply(s1, node))
        if composed != sequential:
            return PropResult(
                "subst_laws", i + 1,
                f"composition law failed:\n  s1={s1}\n  s2={s2}\n  "
                f"n={node!r}\n  composed={composed!r}\n  "
                f"sequential={sequential!r}")
        lifted = apply(lift(s1), shift(node, 1))
        shifted = shift(apply(s1, node), 1)
        if lifted != shifted:
            return PropResult(
                "subst_laws", i + 1,
                f"lift/shift commutation failed:\n  s={s1}\n  n={node!r}")
    return PropResult("subst_laws", cfg.count)


ALL_PROPERTIES = tuple(PROPERTIES) + ("subst_laws",)
