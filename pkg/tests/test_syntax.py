import random

import pytest

from fdc.parser import ParseError, parse_core, parse_kind, parse_term, parse_type
from fdc.printer import print_core, print_node, print_term, print_type
from fdc.propcheck import GenConfig, gen_node, gen_well_typed
from fdc.syntax import (
    App, CApp, Cast, Choice, CInst, Con, CtorSig, EqTy, Forall, Fst, Guard,
    If, KArr, Lam, OpenCtorDecl, OpenTypeDecl, Pattern, Ref, Refl, Sim, Snd,
    Star, Sym, TApp, TCon, Trans, TVar, TyApp, TyLam, Univ, Var, Zero, ZERO,
    STAR, arrow, node_eq,
)


def test_parse_open_type_decl():
    [decl] = parse_core("open Eq : * -> *;")
    assert decl == OpenTypeDecl("Eq", KArr(STAR, STAR))


def test_parse_polymorphic_identity_let():
    [decl] = parse_core("let id : forall t:*. t -> t = /\\t:*. \\x:t. x;")
    assert decl.type == Forall(STAR, arrow(TVar(0), TVar(0)))
    assert decl.body == TyLam(STAR, Lam(TVar(0), Var(0)))


def test_parse_instance_colon_is_open_ctor():
    [decl] = parse_core("instance EqBool : forall t:*. (Bool ~ t) -> Eq t;")
    assert isinstance(decl, OpenCtorDecl)
    assert decl.name == "EqBool"
    assert decl.type == Forall(
        STAR, arrow(EqTy(TCon("Bool"), TVar(0), STAR),
                    TApp(TCon("Eq"), TVar(0))))


def test_print_trivial_forms():
    assert print_term(ZERO) == "0"
    assert print_term(Refl(TCon("Bool"))) == "refl(Bool)"


def test_equality_kind_annotation_defaults_to_star():
    assert parse_type("Bool ~ Bool") == EqTy(TCon("Bool"), TCon("Bool"), STAR)
    annotated = parse_type("Maybe ~[* -> *] Maybe")
    assert annotated.kind == KArr(STAR, STAR)
    assert print_type(annotated) == "Maybe ~[* -> *] Maybe"


def test_arrow_sugar_and_constant():
    assert parse_type("(->)") == TCon("->")
    assert parse_type("Bool -> Bool") == arrow(TCon("Bool"), TCon("Bool"))
    partial = TApp(TCon("->"), TCon("Bool"))
    assert parse_type(print_type(partial)) == partial


def test_node_eq_alpha_equivalence_is_structural():
    a = parse_type("forall t:*. t -> t")
    b = parse_type("forall u:*. u -> u")
    assert node_eq(a, b)
    assert not node_eq(parse_type("Bool"), parse_type("Int"))
    eq = parse_type("Eq Bool ~ Eq Bool")
    assert node_eq(eq, eq)


def test_parse_error_position_and_expected():
    with pytest.raises(ParseError) as exc:
        parse_core("data : *;")
    assert exc.value.line == 1
    assert exc.value.col > 1


def test_reserved_binder_names_rejected():
    with pytest.raises(ParseError):
        parse_core("let x0 : Bool = True;")
    with pytest.raises(ParseError):
        parse_core("method t12 : Bool;")
    # the reserved shape is lowercase-only; uppercase names are fine
    parse_core("data T0 : *;")


def test_lowercase_type_constant_rejected():
    with pytest.raises(ParseError):
        parse_type("bool")


def test_precedence_application_capp_trans_choice():
    t = parse_term("a ;; b @ c <+> d".replace("a", "#0").replace(
        "b", "#1").replace("c", "#2").replace("d", "#3"))
    # <+> loosest, then ;;, then @
    assert t == Choice(Trans(Var(0), CApp(Var(1), Var(2))), Var(3))


def test_every_grammar_constructor_prints_and_reparses():
    b = TCon("Bool")
    samples = [
        STAR, KArr(STAR, STAR),
        TVar(0), b, TApp(TCon("Maybe"), b), EqTy(b, b, STAR),
        Forall(STAR, TVar(0)),
        Var(0), Con("True"), Ref("lte"),
        Lam(b, Var(0)), App(Con("Just"), Con("True")),
        TyLam(STAR, Con("True")), TyApp(Con("Nothing"), b),
        Cast(Con("True"), Refl(b)),
        If(Var(0), Pattern("True", ()), Con("False"), Con("True")),
        If(Var(0), Pattern("Just", (b,)), Lam(b, Var(0)), Con("True")),
        Guard(Var(0), Pattern("EqBool", (b,)), Lam(EqTy(b, b, STAR), Var(0))),
        ZERO, Choice(Con("True"), ZERO),
        Refl(b), Sym(Refl(b)), Trans(Refl(b), Refl(b)),
        CApp(Refl(TCon("Maybe")), Refl(b)),
        Fst(Refl(TApp(TCon("Maybe"), b))), Snd(Refl(TApp(TCon("Maybe"), b))),
        Univ(STAR, Refl(TVar(0))),
        CInst(Refl(Forall(STAR, TVar(0))), b),
        Sim(Refl(b), Refl(b)),
    ]
    for node in samples:
        printed = print_node(node)
        if isinstance(node, (Star, KArr)):
            assert parse_kind(printed) == node
        elif isinstance(node, (TVar, TCon, TApp, EqTy, Forall)):
            assert parse_type(printed) == node
        else:
            assert parse_term(printed) == node, printed


def test_round_trip_on_random_untyped_nodes():
    rng = random.Random(11)
    for _ in range(300):
        node = gen_node(rng, 10)
        assert parse_term(print_term(node)) == node


def test_round_trip_on_generated_well_typed_terms():
    cfg = GenConfig(seed=5, size=25)
    for i in range(200):
        _, term, ty = gen_well_typed(cfg, i)
        assert parse_term(print_term(term)) == term
        assert parse_type(print_type(ty)) == ty


def test_round_trip_whole_program(superclasses_core):
    printed = print_core(superclasses_core)
    assert parse_core(printed) == superclasses_core


def test_node_eq_equivalence_relation():
    cfg = GenConfig(seed=13, size=12)
    nodes = [gen_well_typed(cfg, i)[1] for i in range(30)]
    for n in nodes:
        assert node_eq(n, n)
    for a in nodes:
        for b in nodes:
            assert node_eq(a, b) == node_eq(b, a)
            if node_eq(a, b):
                for c in nodes:
                    if node_eq(b, c):
                        assert node_eq(a, c)


def test_free_indices_print_env_relative():
    # under one binder, index 1 escapes the term and prints as #0
    t = Lam(TCon("Bool"), Var(1))
    assert print_term(t) == "\\x0:Bool. #0"
    assert parse_term(print_term(t)) == t
