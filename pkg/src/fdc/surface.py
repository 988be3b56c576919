"""Surface language: explicit-polymorphism terms with holes and annotations;
data, class (superclasses, functional dependencies, methods), instance, and
let declarations.

Haskell-flavored concrete syntax without layout: bodies are brace/semicolon
delimited, `::` ascribes types, `(_ :: t)` is a hole for an instance
argument, and `C args => t` is sugar for the explicit dictionary arrow
`C args -> t`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .parser import ParseError, Token, tokenize, RESERVED_NAME
from .printer import print_kind
from .syntax import Node, KArr, STAR


# ---------------------------------------------------------------- types

class SType:
    __slots__ = ()


@dataclass(frozen=True)
class STVar(SType):
    name: str


@dataclass(frozen=True)
class STCon(SType):
    name: str


@dataclass(frozen=True)
class STApp(SType):
    fun: SType
    arg: SType


@dataclass(frozen=True)
class SArrow(SType):
    dom: SType
    cod: SType


@dataclass(frozen=True)
class SForall(SType):
    var: str
    kind: Node
    body: SType


def stype_head(t: SType) -> SType:
    while isinstance(t, STApp):
        t = t.fun
    return t


def stype_args(t: SType) -> list[SType]:
    args = []
    while isinstance(t, STApp):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return args


def stype_vars(t: SType, out: Optional[list[str]] = None) -> list[str]:
    """Free variable names in first-occurrence order."""
    if out is None:
        out = []
    match t:
        case STVar(name):
            if name not in out:
                out.append(name)
        case STApp(f, a):
            stype_vars(f, out)
            stype_vars(a, out)
        case SArrow(d, c):
            stype_vars(d, out)
            stype_vars(c, out)
        case SForall(var, _, body):
            inner: list[str] = []
            stype_vars(body, inner)
            for name in inner:
                if name != var and name not in out:
                    out.append(name)
    return out


# ---------------------------------------------------------------- terms

class STerm:
    __slots__ = ()


@dataclass(frozen=True)
class SVar(STerm):
    name: str


@dataclass(frozen=True)
class SCon(STerm):
    name: str


@dataclass(frozen=True)
class SLam(STerm):
    var: str
    ann: Optional[SType]
    body: STerm


@dataclass(frozen=True)
class STyLam(STerm):
    var: str
    kind: Node
    body: STerm


@dataclass(frozen=True)
class SApp(STerm):
    fun: STerm
    arg: STerm


@dataclass(frozen=True)
class STyApp(STerm):
    fun: STerm
    arg: SType


@dataclass(frozen=True)
class SPat:
    head: str
    type_args: tuple[SType, ...] = ()


@dataclass(frozen=True)
class SIf(STerm):
    scrut: STerm
    pat: SPat
    cons: STerm
    alt: STerm


@dataclass(frozen=True)
class SHole(STerm):
    type: SType


@dataclass(frozen=True)
class SAnnot(STerm):
    term: STerm
    type: SType


# ----------------------------------------------------------- declarations

class SDecl:
    __slots__ = ()


@dataclass(frozen=True)
class SDataDecl(SDecl):
    name: str
    kind: Node
    ctors: tuple[tuple[str, SType], ...]


@dataclass(frozen=True)
class SClassDecl(SDecl):
    name: str
    params: tuple[tuple[str, Node], ...]  # (name, kind)
    supers: tuple[SType, ...]
    fundeps: tuple[tuple[tuple[int, ...], int], ...]
    methods: tuple[tuple[str, SType], ...]

    @property
    def kind(self) -> Node:
        k: Node = STAR
        for _, pk in reversed(self.params):
            k = KArr(pk, k)
        return k


@dataclass(frozen=True)
class SInstanceDecl(SDecl):
    class_name: str
    ctor_name: Optional[str]
    context: tuple[SType, ...]
    head_args: tuple[SType, ...]
    methods: tuple[tuple[str, STerm], ...]


@dataclass(frozen=True)
class SLetDecl(SDecl):
    name: str
    type: SType
    body: STerm


SurfaceProgram = list  # list[SDecl]


# ---------------------------------------------------------------- parser

@dataclass
class SurfaceParser:
    tokens: list[Token]
    pos: int = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def at(self, *kinds: str) -> bool:
        return self.cur.kind in kinds

    def at_kw(self, *words: str) -> bool:
        # the core lexer is reused; surface keywords arrive as names or kws
        return ((self.cur.kind == "kw" or self.cur.kind == "name")
                and self.cur.text in words)

    def at_name(self) -> bool:
        return self.cur.kind == "name"

    def advance(self) -> Token:
        tok = self.cur
        self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        if self.cur.kind != kind:
            raise ParseError(f"unexpected {self.cur.text or 'end of input'!r}",
                             self.cur.line, self.cur.col, frozenset({kind}))
        return self.advance()

    def expect_dcolon(self) -> None:
        self.expect(":")
        self.expect(":")

    def at_dcolon(self) -> bool:
        return (self.cur.kind == ":" and self.tokens[self.pos + 1].kind == ":")

    def expect_kw(self, word: str) -> Token:
        if not self.at_kw(word):
            raise ParseError(f"unexpected {self.cur.text or 'end of input'!r}",
                             self.cur.line, self.cur.col, frozenset({word}))
        return self.advance()

    def fail(self, message: str, expected: frozenset[str] = frozenset()):
        raise ParseError(message, self.cur.line, self.cur.col, expected)

    def name(self, upper: Optional[bool] = None) -> str:
        tok = self.expect("name")
        text = tok.text
        if RESERVED_NAME.match(text):
            raise ParseError(f"{text!r} is reserved for generated binder names",
                             tok.line, tok.col)
        if upper is True and not text[0].isupper():
            raise ParseError(f"{text!r} must start uppercase", tok.line, tok.col)
        if upper is False and not (text[0].islower() or text[0] == "_"):
            raise ParseError(f"{text!r} must start lowercase", tok.line, tok.col)
        return text

    # ---- kinds (shared with the core grammar)

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

    # ---- types

    def type_(self) -> SType:
        if self.at_kw("forall"):
            self.advance()
            var, kind = self.binder_param()
            self.expect(".")
            return SForall(var, kind, self.type_())
        return self.ty_arrow()

    def binder_param(self) -> tuple[str, Node]:
        if self.at("("):
            self.advance()
            var = self.name()
            self.expect_dcolon()
            kind = self.kind()
            self.expect(")")
            return var, kind
        var = self.name()
        kind: Node = STAR
        if self.at_dcolon():
            self.expect_dcolon()
            kind = self.kind()
        return var, kind

    def ty_arrow(self) -> SType:
        left = self.ty_app()
        if self.at("->"):
            self.advance()
            return SArrow(left, self.type_())
        if self.at("="):  # `=>` sugar for a dictionary arrow
            if self.tokens[self.pos + 1].kind == ">":
                self.advance()
                self.advance()
                return SArrow(left, self.type_())
        return left

    def ty_app(self) -> SType:
        f = self.ty_atom()
        while self.at_name() or self.at("("):
            f = STApp(f, self.ty_atom())
        return f

    def ty_atom(self) -> SType:
        if self.at_name():
            tok = self.advance()
            if tok.text[0].isupper():
                return STCon(tok.text)
            return STVar(tok.text)
        if self.at("("):
            self.advance()
            if self.at("->"):
                self.advance()
                self.expect(")")
                return STCon("->")
            t = self.type_()
            self.expect(")")
            return t
        self.fail("expected a type", frozenset({"name", "("}))

    # ---- terms

    def term(self) -> STerm:
        if self.at("\\"):
            self.advance()
            var = self.name(upper=False)
            ann: Optional[SType] = None
            if self.at_dcolon():
                self.expect_dcolon()
                ann = self.type_()
            self.expect(".")
            return SLam(var, ann, self.term())
        if self.at("/\\"):
            self.advance()
            var = self.name(upper=False)
            kind: Node = STAR
            if self.at_dcolon():
                self.expect_dcolon()
                kind = self.kind()
            self.expect(".")
            return STyLam(var, kind, self.term())
        if self.at_kw("if"):
            self.advance()
            scrut = self.term()
            self.expect_kw("is")
            pat = self.pattern()
            self.expect_kw("then")
            cons = self.term()
            self.expect_kw("else")
            return SIf(scrut, pat, cons, self.term())
        return self.app()

    def app(self) -> STerm:
        f = self.atom()
        while True:
            if self.at("["):
                self.advance()
                t = self.type_()
                self.expect("]")
                f = STyApp(f, t)
            elif self.at_name() or self.at("("):
                f = SApp(f, self.atom())
            else:
                return f

    def atom(self) -> STerm:
        if self.at_name():
            tok = self.advance()
            if tok.text == "_":
                self.fail("holes must be written (_ :: type)")
            if tok.text[0].isupper():
                return SCon(tok.text)
            return SVar(tok.text)
        if self.at("("):
            self.advance()
            if self.at_name() and self.cur.text == "_":
                self.advance()
                self.expect_dcolon()
                t = self.type_()
                self.expect(")")
                return SHole(t)
            inner = self.term()
            if self.at_dcolon():
                self.expect_dcolon()
                t = self.type_()
                self.expect(")")
                return SAnnot(inner, t)
            self.expect(")")
            return inner
        self.fail("expected a term", frozenset({"name", "("}))

    def pattern(self) -> SPat:
        head = self.name(upper=True)
        args = []
        while self.at("["):
            self.advance()
            args.append(self.type_())
            self.expect("]")
        return SPat(head, tuple(args))

    # ---- declarations

    def braced(self, item) -> list:
        """`where { item; ... }` with the `where` already consumed."""
        self.expect("{")
        out = []
        while not self.at("}"):
            out.append(item())
            self.expect(";")
        self.expect("}")
        return out

    def context_then_head(self) -> tuple[list[SType], SType]:
        """Parse `[preds =>] head-application`, distinguishing the two by the
        `=>` lookahead."""
        preds: list[SType] = []
        first = self.ty_app()
        while self.at("=") and self.tokens[self.pos + 1].kind == ">":
            self.advance()
            self.advance()
            preds.append(first)
            first = self.ty_app()
        return preds, first

    def decl(self) -> SDecl:
        if self.at_kw("data"):
            self.advance()
            name = self.name(upper=True)
            self.expect_dcolon()
            kind = self.kind()
            ctors: list[tuple[str, SType]] = []
            if self.at_kw("where"):
                self.advance()
                ctors = self.braced(self._ctor_item)
            self.expect(";")
            return SDataDecl(name, kind, tuple(ctors))
        if self.at_kw("class"):
            self.advance()
            return self.class_decl()
        if self.at_kw("instance"):
            self.advance()
            return self.instance_decl()
        if self.at_kw("let"):
            self.advance()
            name = self.name(upper=False)
            self.expect_dcolon()
            t = self.type_()
            self.expect("=")
            body = self.term()
            self.expect(";")
            return SLetDecl(name, t, body)
        self.fail("expected a declaration",
                  frozenset({"data", "class", "instance", "let"}))

    def _ctor_item(self) -> tuple[str, SType]:
        name = self.name(upper=True)
        self.expect_dcolon()
        return name, self.type_()

    def _method_sig_item(self) -> tuple[str, SType]:
        name = self.name(upper=False)
        self.expect_dcolon()
        return name, self.type_()

    def _method_def_item(self) -> tuple[str, STerm]:
        name = self.name(upper=False)
        self.expect("=")
        return name, self.term()

    def class_decl(self) -> SDecl:
        supers: list[SType] = []
        # `class Super a => C a ...` or `class (S1 a, S2 a) => C a ...`
        if self.at("("):
            save = self.pos
            self.advance()
            try:
                preds = [self.ty_app()]
                while self.at(","):
                    self.advance()
                    preds.append(self.ty_app())
                self.expect(")")
                if self.at("=") and self.tokens[self.pos + 1].kind == ">":
                    self.advance()
                    self.advance()
                    supers = preds
                else:
                    self.pos = save
            except ParseError:
                self.pos = save
        if not supers:
            save = self.pos
            try:
                pred = self.ty_app()
                if self.at("=") and self.tokens[self.pos + 1].kind == ">":
                    self.advance()
                    self.advance()
                    supers = [pred]
                else:
                    self.pos = save
            except ParseError:
                self.pos = save
        name_tok = self.cur
        name = self.name(upper=True)
        params: list[tuple[str, Node]] = []
        while self.at_name() or self.at("("):
            params.append(self.binder_param())
        param_names = [p for p, _ in params]
        if len(set(param_names)) != len(param_names):
            raise ParseError(f"class {name!r} has repeated parameters",
                             name_tok.line, name_tok.col)
        return self._finish_class(name, params, supers)

    def _finish_class(self, name, params, supers) -> SDecl:
        fundeps: list[tuple[tuple[int, ...], int]] = []
        if self.at("|"):
            self.advance()
            while True:
                dets = [self._param_index(params)]
                while self.at_name():
                    dets.append(self._param_index(params))
                self.expect("->")
                determined = self._param_index(params)
                fundeps.append((tuple(dets), determined))
                if self.at(","):
                    self.advance()
                    continue
                break
        methods: list[tuple[str, SType]] = []
        if self.at_kw("where"):
            self.advance()
            methods = self.braced(self._method_sig_item)
        self.expect(";")
        return SClassDecl(name, tuple(params), tuple(supers),
                          tuple(fundeps), tuple(methods))

    def _param_index(self, params) -> int:
        tok = self.expect("name")
        for i, (p, _) in enumerate(params):
            if p == tok.text:
                return i
        raise ParseError(f"{tok.text!r} is not a class parameter",
                         tok.line, tok.col)

    def instance_decl(self) -> SDecl:
        ctor_name: Optional[str] = None
        if (self.at_name() and self.cur.text[0].isupper()
                and self.tokens[self.pos + 1].kind == ":"
                and self.tokens[self.pos + 2].kind != ":"):
            ctor_name = self.name(upper=True)
            self.expect(":")
        preds, head = self.context_then_head()
        head_con = stype_head(head)
        if not isinstance(head_con, STCon):
            self.fail("instance head must name a class")
        methods: list[tuple[str, STerm]] = []
        if self.at_kw("where"):
            self.advance()
            methods = self.braced(self._method_def_item)
        self.expect(";")
        return SInstanceDecl(head_con.name, ctor_name, tuple(preds),
                             tuple(stype_args(head)), tuple(methods))

    def program(self) -> list[SDecl]:
        decls = []
        while not self.at("eof"):
            decls.append(self.decl())
        return decls


def parse_surface(text: str) -> list[SDecl]:
    return SurfaceParser(tokenize(text)).program()


def parse_surface_term(text: str) -> STerm:
    p = SurfaceParser(tokenize(text))
    t = p.term()
    p.expect("eof")
    return t


# --------------------------------------------------------------- printer

def print_stype(t: SType, level: int = 0) -> str:
    # levels: 0 forall/arrow, 1 app, 2 atom
    match t:
        case STVar(name) | STCon(name):
            return "(->)" if name == "->" else name
        case SForall(var, kind, body):
            s = f"forall ({var} :: {print_kind(kind)}). {print_stype(body)}"
            return f"({s})" if level > 0 else s
        case SArrow(dom, cod):
            s = f"{print_stype(dom, 1)} -> {print_stype(cod)}"
            return f"({s})" if level > 0 else s
        case STApp(f, a):
            s = f"{print_stype(f, 1)} {print_stype(a, 2)}"
            return f"({s})" if level > 1 else s
    raise TypeError(f"not a surface type: {t!r}")


def print_sterm(m: STerm, level: int = 0) -> str:
    # levels: 0 binders, 1 app, 2 atom
    match m:
        case SVar(name) | SCon(name):
            return name
        case SLam(var, ann, body):
            annot = f" :: {print_stype(ann)}" if ann is not None else ""
            s = f"\\ {var}{annot}. {print_sterm(body)}"
            return f"({s})" if level > 0 else s
        case STyLam(var, kind, body):
            s = f"/\\ {var} :: {print_kind(kind)}. {print_sterm(body)}"
            return f"({s})" if level > 0 else s
        case SIf(scrut, pat, cons, alt):
            s = (f"if {print_sterm(scrut, 1)} is {print_spat(pat)} "
                 f"then {print_sterm(cons, 1)} else {print_sterm(alt)}")
            return f"({s})" if level > 0 else s
        case SApp(f, a):
            s = f"{print_sterm(f, 1)} {print_sterm(a, 2)}"
            return f"({s})" if level > 1 else s
        case STyApp(f, t):
            s = f"{print_sterm(f, 1)} [{print_stype(t)}]"
            return f"({s})" if level > 1 else s
        case SHole(t):
            return f"(_ :: {print_stype(t)})"
        case SAnnot(term, t):
            return f"({print_sterm(term)} :: {print_stype(t)})"
    raise TypeError(f"not a surface term: {m!r}")


def print_spat(p: SPat) -> str:
    return " ".join([p.head] + [f"[{print_stype(t)}]" for t in p.type_args])


def print_sdecl(d: SDecl) -> str:
    match d:
        case SDataDecl(name, kind, ctors):
            if not ctors:
                return f"data {name} :: {print_kind(kind)};"
            items = " ".join(f"{n} :: {print_stype(t)};" for n, t in ctors)
            return f"data {name} :: {print_kind(kind)} where {{ {items} }};"
        case SClassDecl(name, params, supers, fundeps, methods):
            parts = ["class"]
            if supers:
                ctx = ", ".join(print_stype(s, 1) for s in supers)
                parts.append(f"({ctx}) =>" if len(supers) > 1 else f"{ctx} =>")
            head = [name] + [f"({p} :: {print_kind(k)})" for p, k in params]
            parts.append(" ".join(head))
            if fundeps:
                clauses = ", ".join(
                    " ".join(params[i][0] for i in dets) + f" -> {params[det][0]}"
                    for dets, det in fundeps)
                parts.append(f"| {clauses}")
            if methods:
                items = " ".join(f"{n} :: {print_stype(t)};" for n, t in methods)
                parts.append(f"where {{ {items} }}")
            return " ".join(parts) + ";"
        case SInstanceDecl(class_name, ctor_name, context, head_args, methods):
            parts = ["instance"]
            if ctor_name:
                parts.append(f"{ctor_name} :")
            for pred in context:
                parts.append(f"{print_stype(pred, 1)} =>")
            head = " ".join([class_name]
                            + [print_stype(a, 2) for a in head_args])
            parts.append(head)
            if methods:
                items = " ".join(f"{n} = {print_sterm(t)};" for n, t in methods)
                parts.append(f"where {{ {items} }}")
            return " ".join(parts) + ";"
        case SLetDecl(name, t, body):
            return f"let {name} :: {print_stype(t)} = {print_sterm(body)};"
    raise TypeError(f"not a surface declaration: {d!r}")


def print_surface(program: list[SDecl]) -> str:
    return "\n".join(print_sdecl(d) for d in program) + ("\n" if program else "")


# ------------------------------------------------------------ validation

@dataclass(frozen=True)
class SurfaceIssue:
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


def _spine_head_term(t: STerm) -> STerm:
    while True:
        match t:
            case SApp(f, _) | STyApp(f, _):
                t = f
            case _:
                return t


def _check_annotations(t: STerm, issues: list[SurfaceIssue], where: str) -> None:
    match t:
        case SApp(_, _) | STyApp(_, _):
            head = _spine_head_term(t)
            if not isinstance(head, (SVar, SCon, SAnnot, SHole)):
                issues.append(SurfaceIssue(
                    "annotation-required",
                    f"{where}: non-variable application head must be annotated"))
            match t:
                case SApp(f, a):
                    _check_annotations(f, issues, where)
                    _check_annotations(a, issues, where)
                case STyApp(f, _):
                    _check_annotations(f, issues, where)
        case SLam(_, ann, body):
            if ann is None:
                issues.append(SurfaceIssue(
                    "annotation-required",
                    f"{where}: lambda binders must carry a type"))
            _check_annotations(body, issues, where)
        case STyLam(_, _, body):
            _check_annotations(body, issues, where)
        case SIf(scrut, _, cons, alt):
            if not isinstance(scrut, (SAnnot, SVar, SHole)):
                issues.append(SurfaceIssue(
                    "annotation-required",
                    f"{where}: if scrutinee must be annotated"))
            if not isinstance(cons, (SAnnot, SVar, SCon, SHole)):
                issues.append(SurfaceIssue(
                    "annotation-required",
                    f"{where}: if consequent must be annotated"))
            _check_annotations(scrut, issues, where)
            _check_annotations(cons, issues, where)
            _check_annotations(alt, issues, where)
        case SAnnot(term, _):
            _check_annotations(term, issues, where)
        case _:
            pass


def _eta_shape(t: SType, body: STerm, issues: list[SurfaceIssue],
               where: str) -> None:
    """Leading binders must track the declared type until the body stops
    being a binder at all (prefix discipline, not full eta length)."""
    ty, tm = t, body
    while True:
        match ty, tm:
            case (SForall(_, _, b), STyLam(_, _, tb)):
                ty, tm = b, tb
            case (SArrow(_, c), SLam(_, _, lb)):
                ty, tm = c, lb
            case (SForall(_, _, _), SLam(_, _, _)):
                issues.append(SurfaceIssue(
                    "eta-shape",
                    f"{where}: term binder where the type expects a type binder"))
                return
            case (SArrow(_, _), STyLam(_, _, _)):
                issues.append(SurfaceIssue(
                    "eta-shape",
                    f"{where}: type binder where the type expects a term binder"))
                return
            case (_, SLam(_, _, _)) | (_, STyLam(_, _, _)):
                issues.append(SurfaceIssue(
                    "eta-shape",
                    f"{where}: more binders than the declared type provides"))
                return
            case _:
                return


def _type_size(t: SType) -> int:
    """Constructor and variable occurrences, counting repetitions."""
    match t:
        case STVar(_) | STCon(_):
            return 1
        case STApp(f, a) | SArrow(f, a):
            return _type_size(f) + _type_size(a)
        case SForall(_, _, b):
            return 1 + _type_size(b)
    raise TypeError(t)


def _var_occurrences(t: SType, name: str) -> int:
    match t:
        case STVar(n):
            return 1 if n == name else 0
        case STCon(_):
            return 0
        case STApp(f, a) | SArrow(f, a):
            return _var_occurrences(f, name) + _var_occurrences(a, name)
        case SForall(v, _, b):
            return 0 if v == name else _var_occurrences(b, name)
    raise TypeError(t)


def validate_surface(program: list[SDecl]) -> list[SurfaceIssue]:
    """Annotation placement, binder shape, fundep index bounds, and the
    Paterson termination conditions on instance contexts."""
    issues: list[SurfaceIssue] = []
    for d in program:
        match d:
            case SClassDecl(name, params, _, fundeps, _):
                for dets, det in fundeps:
                    indices = set(dets) | {det}
                    if any(i >= len(params) or i < 0 for i in indices):
                        issues.append(SurfaceIssue(
                            "fundep-index",
                            f"class {name!r}: dependency index out of range"))
                    if det in dets:
                        issues.append(SurfaceIssue(
                            "fundep-index",
                            f"class {name!r}: determined parameter is also "
                            f"a determiner"))
            case SInstanceDecl(class_name, _, context, head_args, methods):
                where = f"instance {class_name}"
                head_size = sum(_type_size(a) for a in head_args)
                head_vars = []
                for a in head_args:
                    stype_vars(a, head_vars)
                for pred in context:
                    if _type_size(pred) - 1 >= head_size:
                        issues.append(SurfaceIssue(
                            "paterson",
                            f"{where}: context {print_stype(pred)} is not "
                            f"smaller than the instance head"))
                    for v in stype_vars(pred):
                        pred_occ = _var_occurrences(pred, v)
                        head_occ = sum(_var_occurrences(a, v)
                                       for a in head_args)
                        if pred_occ > head_occ:
                            issues.append(SurfaceIssue(
                                "paterson",
                                f"{where}: {v!r} occurs more often in the "
                                f"context than in the head"))
                for mname, body in methods:
                    mwhere = f"{where}.{mname}"
                    if not isinstance(body, SAnnot):
                        issues.append(SurfaceIssue(
                            "annotation-required",
                            f"{mwhere}: instance method bodies must be "
                            f"annotated"))
                    _check_annotations(body, issues, mwhere)
            case SLetDecl(name, t, body):
                _check_annotations(body, issues, f"let {name}")
                _eta_shape(t, body, issues, f"let {name}")
            case _:
                pass
    return issues
