"""Text formats: posets, functors, elements, formulas, models, sequents,
relations.  See docs/formats.md for the grammar.

Parsing happens in two steps.  The parser builds raw trees without
knowing the functor; ``resolve_*`` then checks shapes against the functor
and builds the library values.  Malformed text raises ParseError (exit
code 2 in the CLI); well-formed text of the wrong shape raises
ShapeError (exit code 3).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .functor import (Const, Dual, Exp, FunctorExpr, Id, Low, Prod, Sum, Up,
                      normalize_dual)
from .logic import Formula, Language, Sequent, language, show_value
from .model import Coalgebra, Model, valuation_from_sets
from .poset import FinPoset, Fn, Inj, PosetError
from .relation import MonotoneRel


class ParseError(ValueError):
    def __init__(self, msg, line=None):
        super().__init__(f"line {line}: {msg}" if line else msg)
        self.line = line


class ShapeError(ValueError):
    pass


KEYWORDS = {"and", "or", "nabla", "delta", "inl", "inr"}
_TOKEN = re.compile(r"\s*(?:(#[^\n]*)|(=>|->|[{}()\[\],:;<+*^=])|([A-Za-z0-9_.']+))")


@dataclass
class Tok:
    kind: str  # "sym" | "id" | "eof"
    text: str
    line: int


def tokenize(text: str) -> list:
    out = []
    pos = 0
    line = 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:].lstrip()
            if not rest:
                break
            line += text[pos:len(text) - len(rest)].count("\n")
            raise ParseError(f"unexpected character {rest[0]!r}", line)
        line += text[pos:m.start(m.lastindex)].count("\n") if m.lastindex else 0
        if m.group(2):
            out.append(Tok("sym", m.group(2), line))
        elif m.group(3):
            out.append(Tok("id", m.group(3), line))
        pos = m.end()
    out.append(Tok("eof", "", line))
    return out


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def peek(self, text) -> bool:
        return self.tok.text == text and self.tok.kind != "eof"

    def take(self, text=None) -> Tok:
        t = self.tok
        if text is not None and t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.line)
        if t.kind == "eof":
            raise ParseError("unexpected end of input", t.line)
        self.i += 1
        return t

    def ident(self) -> str:
        t = self.tok
        if t.kind != "id" or t.text in KEYWORDS:
            raise ParseError(f"expected a name, found {t.text or 'end of input'!r}", t.line)
        self.i += 1
        return t.text

    def at_end(self) -> bool:
        return self.tok.kind == "eof"

    def sep_list(self, item, close, sep=","):
        out = []
        if self.peek(close):
            return ()
        out.append(item())
        while self.peek(sep):
            self.take(sep)
            if self.peek(close):
                break
            out.append(item())
        return tuple(out)

    # raw elements and formulas

    def element(self):
        t = self.tok
        if t.text == "(" and t.kind == "sym":
            self.take("(")
            a = self.element()
            self.take(",")
            b = self.element()
            self.take(")")
            return ("pair", a, b)
        if t.text in ("inl", "inr"):
            self.take()
            self.take("(")
            a = self.element()
            self.take(")")
            return ("inj", 0 if t.text == "inl" else 1, a)
        if t.text == "{":
            self.take("{")
            items = self.sep_list(self.element, "}")
            self.take("}")
            return ("set", items)
        if t.text == "[":
            self.take("[")

            def entry():
                k = self.ident()
                self.take(":")
                return (k, self.element())

            items = self.sep_list(entry, "]")
            self.take("]")
            return ("fn", items)
        if t.text in ("and", "or"):
            self.take()
            self.take("(")
            items = self.sep_list(self.element, ")")
            self.take(")")
            return (t.text, items)
        if t.text in ("nabla", "delta"):
            self.take()
            return (t.text, self.element())
        return ("name", self.ident())

    def formula(self):
        t = self.tok
        if t.kind == "id" and (t.text in ("and", "or", "nabla", "delta") or t.text not in KEYWORDS):
            return self.element()
        raise ParseError(f"expected a formula, found {t.text or 'end of input'!r}", t.line)

    # functors

    def functor(self, posets: dict) -> FunctorExpr:
        f = self._fprod(posets)
        while self.peek("+"):
            self.take("+")
            f = Sum(f, self._fprod(posets))
        return f

    def _fprod(self, posets):
        f = self._fexp(posets)
        while self.peek("*"):
            self.take("*")
            f = Prod(f, self._fexp(posets))
        return f

    def _fexp(self, posets):
        f = self._fatom(posets)
        while self.peek("^"):
            self.take("^")
            f = Exp(f, self.poset_ref(posets))
        return f

    def _fatom(self, posets):
        t = self.tok
        if t.text == "(":
            self.take("(")
            f = self.functor(posets)
            self.take(")")
            return f
        if t.text == "id":
            self.take()
            return Id()
        if t.text == "const":
            self.take()
            self.take("(")
            p = self.poset_ref(posets)
            self.take(")")
            return Const(p)
        if t.text in ("dual", "low", "up"):
            self.take()
            self.take("(")
            f = self.functor(posets)
            self.take(")")
            return {"dual": Dual, "low": Low, "up": Up}[t.text](f)
        raise ParseError(f"expected a functor, found {t.text or 'end of input'!r}", t.line)

    def poset_ref(self, posets) -> FinPoset:
        t = self.tok
        if t.text == "op" and self.toks[self.i + 1].text == "(":
            self.take()
            self.take("(")
            p = self.poset_ref(posets)
            self.take(")")
            return p.opposite()
        name = self.ident()
        if name not in posets:
            raise ParseError(f"unknown poset {name!r}", t.line)
        return posets[name]

    # declarations

    def poset_decl(self) -> FinPoset:
        self.take("poset")
        name = self.ident()
        self.take("{")
        self.take("elems")
        self.take(":")
        elems = self.sep_list(self.ident, ";")
        self.take(";")
        self.take("leq")
        self.take(":")
        rel = []

        def chain_item():
            line = self.tok.line
            xs = [self.ident()]
            while self.peek("<"):
                self.take("<")
                xs.append(self.ident())
            if len(xs) < 2:
                raise ParseError("expected a comparison a < b", line)
            rel.extend(zip(xs, xs[1:]))

        self.sep_list(chain_item, "}")
        if self.peek(";"):
            self.take(";")
        self.take("}")
        try:
            return FinPoset(elems, rel, name=name)
        except PosetError as e:
            raise ParseError(str(e), self.tok.line)


@dataclass
class Workspace:
    posets: dict = field(default_factory=dict)
    functor: FunctorExpr | None = None
    atoms: FinPoset | None = None
    carrier: FinPoset | None = None
    structure: dict | None = None
    valuation: dict | None = None
    point: str | None = None
    sequent: tuple | None = None
    formulas: list = field(default_factory=list)
    relation: tuple | None = None
    element: object = None


def parse_workspace(text: str, functor_override: str | None = None) -> Workspace:
    p = Parser(text)
    ws = Workspace()
    while not p.at_end():
        t = p.tok
        if t.text == "poset":
            q = p.poset_decl()
            ws.posets[q.name] = q
        elif t.text == "functor":
            p.take()
            ws.functor = p.functor(ws.posets)
        elif t.text == "atoms":
            p.take()
            ws.atoms = p.poset_ref(ws.posets)
        elif t.text == "carrier":
            p.take()
            ws.carrier = p.poset_ref(ws.posets)
        elif t.text == "structure":
            p.take()
            p.take("{")

            def entry():
                line = p.tok.line
                s = p.ident()
                p.take("->")
                return (s, p.element(), line)

            ws.structure = {s: (e, line) for s, e, line in p.sep_list(entry, "}", ";")}
            if p.peek(";"):
                p.take(";")
            p.take("}")
        elif t.text == "valuation":
            p.take()
            p.take("{")

            def entry():
                a = p.ident()
                p.take(":")
                sts = p.sep_list(p.ident, ";") if not p.peek("}") else []
                return (a, sts)

            ws.valuation = dict(p.sep_list(entry, "}", ";"))
            if p.peek(";"):
                p.take(";")
            p.take("}")
        elif t.text == "point":
            p.take()
            ws.point = p.ident()
        elif t.text == "sequent":
            p.take()
            lhs = p.sep_list(p.formula, "=>")
            p.take("=>")
            rhs = [] if p.at_end() or p.tok.text in _DECL_WORDS else p.sep_list(p.formula, "\0")
            ws.sequent = (lhs, rhs)
        elif t.text == "formula":
            p.take()
            ws.formulas.append(p.formula())
        elif t.text == "relation":
            p.take()
            p.take("from")
            src = p.poset_ref(ws.posets)
            p.take("to")
            tgt = p.poset_ref(ws.posets)
            p.take("{")

            def entry():
                x = p.ident()
                p.take("->")
                return (p.ident(), x)

            pairs = p.sep_list(entry, "}", ";")
            if p.peek(";"):
                p.take(";")
            p.take("}")
            ws.relation = (src, tgt, pairs)
        elif t.text == "element":
            p.take()
            ws.element = p.element()
        else:
            raise ParseError(f"unexpected {t.text!r}", t.line)
    if functor_override is not None:
        ws.functor = parse_functor(functor_override, ws.posets)
    return ws


_DECL_WORDS = {"poset", "functor", "atoms", "carrier", "structure", "valuation", "point",
               "sequent", "formula", "relation", "element"}


def parse_functor(text: str, posets: dict) -> FunctorExpr:
    p = Parser(text)
    f = p.functor(posets)
    if not p.at_end():
        raise ParseError(f"trailing input {p.tok.text!r}", p.tok.line)
    return f


def parse_raw_element(text: str):
    p = Parser(text)
    e = p.element()
    if not p.at_end():
        raise ParseError(f"trailing input {p.tok.text!r}", p.tok.line)
    return e


# resolution

def resolve_element(f: FunctorExpr, raw, leaf):
    if isinstance(f, Id):
        return leaf(raw)
    kind = raw[0]
    if isinstance(f, Const):
        if kind != "name" or raw[1] not in f.poset:
            raise ShapeError(f"expected a point of the constant, found {_show_raw(raw)}")
        return raw[1]
    if isinstance(f, Prod):
        if kind != "pair":
            raise ShapeError(f"expected a pair, found {_show_raw(raw)}")
        return (resolve_element(f.left, raw[1], leaf), resolve_element(f.right, raw[2], leaf))
    if isinstance(f, Sum):
        if kind != "inj":
            raise ShapeError(f"expected inl(..) or inr(..), found {_show_raw(raw)}")
        return Inj(raw[1], resolve_element(f.left if raw[1] == 0 else f.right, raw[2], leaf))
    if isinstance(f, Exp):
        if kind != "fn":
            raise ShapeError(f"expected a table [i: ...], found {_show_raw(raw)}")
        got = dict(raw[1])
        if set(got) != set(f.index.elements) or len(got) != len(raw[1]):
            raise ShapeError("table must list every index exactly once")
        return Fn(tuple((e, resolve_element(f.body, got[e], leaf)) for e in f.index.elements))
    if isinstance(f, (Low, Up)):
        if kind != "set":
            raise ShapeError(f"expected a generator set {{...}}, found {_show_raw(raw)}")
        return frozenset(resolve_element(f.body, r, leaf) for r in raw[1])
    raise ShapeError("functor contains dual(); normalize it first")


def _show_raw(raw) -> str:
    kind = raw[0]
    if kind == "name":
        return raw[1]
    if kind == "pair":
        return f"({_show_raw(raw[1])}, {_show_raw(raw[2])})"
    if kind == "inj":
        return f"{'inl' if raw[1] == 0 else 'inr'}({_show_raw(raw[2])})"
    if kind in ("set",):
        return "{" + ", ".join(_show_raw(r) for r in raw[1]) + "}"
    if kind == "fn":
        return "[" + ", ".join(f"{k}: {_show_raw(v)}" for k, v in raw[1]) + "]"
    if kind in ("and", "or"):
        return f"{kind}(" + ", ".join(_show_raw(r) for r in raw[1]) + ")"
    return f"{kind} {_show_raw(raw[1])}"


def resolve_formula(raw, lang: Language) -> Formula:
    kind = raw[0]
    if kind == "name":
        if raw[1] not in lang.atoms:
            raise ShapeError(f"unknown atom {raw[1]!r}")
        return lang.atom(raw[1])
    if kind == "and":
        return lang.conj(resolve_formula(r, lang) for r in raw[1])
    if kind == "or":
        return lang.disj(resolve_formula(r, lang) for r in raw[1])
    if kind in ("nabla", "delta"):
        el = resolve_element(lang.dual, raw[1], lambda r: resolve_formula(r, lang))
        return lang.nabla(el) if kind == "nabla" else lang.delta(el)
    raise ShapeError(f"expected a formula, found {_show_raw(raw)}")


def raw_atoms(raw, dual_functor: FunctorExpr) -> set:
    """Atom names used by a raw formula (needs the functor to tell atoms
    from constant points inside modal arguments)."""
    out: set = set()

    def form(r):
        if r[0] == "name":
            out.add(r[1])
        elif r[0] in ("and", "or"):
            for x in r[1]:
                form(x)
        elif r[0] in ("nabla", "delta"):
            try:
                resolve_element(dual_functor, r[1], lambda x: form(x) or x)
            except ShapeError:
                pass
        return None

    form(raw)
    return out


def parse_formula(text: str, lang: Language) -> Formula:
    p = Parser(text)
    raw = p.formula()
    if not p.at_end():
        raise ParseError(f"trailing input {p.tok.text!r}", p.tok.line)
    return resolve_formula(raw, lang)


def workspace_language(ws: Workspace) -> Language:
    if ws.functor is None:
        raise ShapeError("no functor declared")
    f = normalize_dual(ws.functor)
    atoms = ws.atoms
    if atoms is None:
        names: set = set()
        raws = list(ws.formulas)
        if ws.sequent:
            raws += ws.sequent[0] + ws.sequent[1]
        d = normalize_dual(Dual(f))
        for r in raws:
            names |= raw_atoms(r, d)
        atoms = FinPoset(sorted(names), name="At")
    return language(atoms, f)


def workspace_sequent(ws: Workspace) -> tuple[Language, Sequent]:
    if ws.sequent is None:
        raise ShapeError("no sequent declared")
    lang = workspace_language(ws)
    lhs = [resolve_formula(r, lang) for r in ws.sequent[0]]
    rhs = [resolve_formula(r, lang) for r in ws.sequent[1]]
    return lang, lang.sequent(lhs, rhs)


def workspace_model(ws: Workspace) -> Model:
    if ws.functor is None or ws.carrier is None or ws.structure is None or ws.atoms is None:
        raise ShapeError("a model needs functor, atoms, carrier and structure")
    f = normalize_dual(ws.functor)
    x = ws.carrier
    structure = {}
    for s, (raw, line) in ws.structure.items():
        if s not in x:
            raise ShapeError(f"line {line}: unknown state {s!r}")

        def leaf(r, line=line):
            if r[0] != "name" or r[1] not in x:
                raise ShapeError(f"line {line}: expected a state, found {_show_raw(r)}")
            return r[1]

        try:
            el = resolve_element(f, raw, leaf)
        except ShapeError as e:
            raise ShapeError(f"line {line}: {e}") if not str(e).startswith("line") else e
        from .functor import normalize
        structure[s] = normalize(f, el, x.leq)
    missing = [s for s in x if s not in structure]
    if missing:
        raise ShapeError(f"no structure for state {missing[0]!r}")
    truths = {p: set() for p in ws.atoms}
    for a, sts in (ws.valuation or {}).items():
        if a not in ws.atoms:
            raise ShapeError(f"unknown atom {a!r}")
        truths[a] |= set(sts)
    try:
        return Model(Coalgebra(f, x, structure), ws.atoms, valuation_from_sets(ws.atoms, x, truths), ws.point)
    except ValueError as e:
        raise ShapeError(str(e))


def workspace_relation(ws: Workspace) -> MonotoneRel:
    if ws.relation is None:
        raise ShapeError("no relation declared")
    src, tgt, pairs = ws.relation
    for y, x in pairs:
        if y not in tgt or x not in src:
            raise ShapeError(f"pair {x} -> {y} is outside the carriers")
    return MonotoneRel.closure(src, tgt, pairs)


# printing

def show_poset(p: FinPoset, name: str | None = None) -> str:
    name = name or p.name
    if not name:
        raise ShapeError("cannot print an unnamed poset")
    covers = ", ".join(f"{a} < {b}" for a, b in sorted(p.covers(), key=lambda c: (str(c[0]), str(c[1]))))
    return f"poset {name} {{ elems: {', '.join(str(e) for e in p.elements)}; leq: {covers} }}"


def _poset_name(p: FinPoset) -> str:
    if not p.name:
        raise ShapeError("cannot print a functor over an unnamed poset")
    return p.name


def show_functor(f: FunctorExpr, prec: int = 0) -> str:
    if isinstance(f, Id):
        return "id"
    if isinstance(f, Const):
        return f"const({_poset_name(f.poset)})"
    if isinstance(f, Sum):
        s = f"{show_functor(f.left, 1)} + {show_functor(f.right, 1)}"
        return f"({s})" if prec > 1 else s
    if isinstance(f, Prod):
        s = f"{show_functor(f.left, 2)} * {show_functor(f.right, 3)}"
        return f"({s})" if prec > 2 else s
    if isinstance(f, Exp):
        return f"{show_functor(f.body, 3)} ^ {_poset_name(f.index)}"
    if isinstance(f, Dual):
        return f"dual({show_functor(f.body)})"
    if isinstance(f, Low):
        return f"low({show_functor(f.body)})"
    if isinstance(f, Up):
        return f"up({show_functor(f.body)})"
    raise TypeError(f)


def functor_posets(f: FunctorExpr) -> list:
    """Named posets a functor refers to (opposites resolved to their base)."""
    out: list = []

    def add(p):
        name = p.name or ""
        while name.startswith("op(") and name.endswith(")"):
            name = name[3:-1]
            p = p.opposite()
        if all(q.name != p.name for q in out):
            out.append(p)

    def go(g):
        if isinstance(g, Const):
            add(g.poset)
        elif isinstance(g, (Sum, Prod)):
            go(g.left)
            go(g.right)
        elif isinstance(g, Exp):
            add(g.index)
            go(g.body)
        elif isinstance(g, (Dual, Low, Up)):
            go(g.body)

    go(f)
    return out


def show_model(m: Model, carrier_name: str = "X", atoms_name: str | None = None) -> str:
    atoms_name = atoms_name or m.atoms.name or "At"
    lines = [show_poset(p) for p in functor_posets(m.functor)]
    lines.append(show_poset(m.atoms, atoms_name))
    lines.append(show_poset(m.carrier, carrier_name))
    lines.append(f"functor {show_functor(m.functor)}")
    lines.append(f"atoms {atoms_name}")
    lines.append(f"carrier {carrier_name}")
    lines.append("structure {")
    for s in m.states():
        lines.append(f"  {s} -> {show_value(m.coalgebra(s))};")
    lines.append("}")
    lines.append("valuation {")
    truths = m.truths()
    for p in m.atoms:
        sts = [s for s in m.states() if s in truths[p]]
        lines.append(f"  {p}: {', '.join(sts)};")
    lines.append("}")
    if m.point is not None:
        lines.append(f"point {m.point}")
    return "\n".join(lines) + "\n"


def show_sequent_file(lang: Language, s: Sequent, atoms_name: str | None = None) -> str:
    atoms_name = atoms_name or lang.atoms.name or "At"
    lines = [show_poset(p) for p in functor_posets(lang.functor)]
    lines.append(show_poset(lang.atoms, atoms_name))
    lines.append(f"functor {show_functor(lang.functor)}")
    lines.append(f"atoms {atoms_name}")
    lhs = ", ".join(lang.show(a) for a in lang.sorted(s.lhs))
    rhs = ", ".join(lang.show(b) for b in lang.sorted(s.rhs))
    lines.append(f"sequent {lhs} => {rhs}".rstrip())
    return "\n".join(lines) + "\n"


def show_relation(r: MonotoneRel) -> str:
    pairs = sorted(r.pairs, key=lambda p: (show_value(p[1]), show_value(p[0])))
    return "\n".join(f"{show_value(x)} -> {show_value(y)}" for y, x in pairs)


def model_to_json(m: Model) -> dict:
    return {
        "functor": show_functor(m.functor),
        "posets": [show_poset(p) for p in functor_posets(m.functor)],
        "atoms": {"elems": [str(p) for p in m.atoms], "covers": [list(c) for c in m.atoms.covers()]},
        "carrier": {"elems": list(m.states()), "covers": [list(c) for c in m.carrier.covers()]},
        "structure": {s: show_value(m.coalgebra(s)) for s in m.states()},
        "valuation": {p: sorted(v) for p, v in m.truths().items()},
        "point": m.point,
    }


# proofs as JSON

def language_header(lang: Language, atoms_name: str | None = None) -> str:
    atoms_name = atoms_name or lang.atoms.name or "At"
    lines = [show_poset(p) for p in functor_posets(lang.functor)]
    lines.append(show_poset(lang.atoms, atoms_name))
    lines.append(f"functor {show_functor(lang.functor)}")
    lines.append(f"atoms {atoms_name}")
    return "\n".join(lines) + "\n"


def proof_document(lang: Language, tree) -> dict:
    from .calculus import proof_to_json
    return {"language": language_header(lang), "proof": proof_to_json(lang, tree)}


def proof_from_document(doc: dict):
    """Inverse of proof_document: (language, ProofTree)."""
    from .calculus import ProofTree
    try:
        lang = workspace_language(parse_workspace(doc["language"]))
        root = doc["proof"]
    except (KeyError, TypeError) as e:
        raise ParseError(f"malformed proof document: {e}")

    def form(text):
        return parse_formula(text, lang)

    def gens(raw):
        if raw[0] != "set":
            raise ShapeError(f"expected a generator set, found {_show_raw(raw)}")
        return frozenset(resolve_formula(r, lang) for r in raw[1])

    def dec(d):
        try:
            rule = d["rule"]
            s = lang.sequent([form(a) for a in d["lhs"]], [form(b) for b in d["rhs"]])
            prem = tuple(dec(p) for p in d["premises"])
            principal = form(d["principal"]) if "principal" in d else None
            data: tuple = ()
            if rule == "Ax":
                data = tuple(form(a) for a in d["axiom"])
            elif rule == "nabla-delta":
                data = tuple((frozenset(form(a) for a in c["up"]), frozenset(form(b) for b in c["down"]))
                             for c in d["components"])
            elif rule in ("and-r", "or-l"):
                data = tuple(form(a) for a in d["index"])
            elif rule in ("nabla-r", "delta-l"):
                data = tuple(resolve_element(lang.dual, parse_raw_element(x), gens) for x in d["index"])
        except (KeyError, TypeError) as e:
            raise ParseError(f"malformed proof node: {e}")
        return ProofTree(s, rule, prem, principal, data)

    return lang, dec(root)
