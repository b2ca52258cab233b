"""Concrete syntax: processes, types, derivation literals and ``.sst`` files.

``-o`` binds loosest and associates to the right; ``*``, ``+`` and ``&``
bind tighter and associate to the left. This is what ``str`` on types
prints.

A derivation literal is an s-expression headed by a rule tag, with types
in square brackets::

    (cut y [1] (1R y) (1L y (1R x)))
    (!R x y (chans a) (b! a u [1] (1L u (1R y))) (mux m [1]))
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

from lark import Lark, Token, Transformer
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError

from . import calculus as pc
from . import derivation as dv
from .elaborator import Signature
from .types import ONE, Bang, Lolli, One, Plus, Tensor, With

__all__ = [
    "SstSyntaxError", "TypeDecl", "ProcessDecl", "DerivationDecl", "ComposeDecl",
    "AnalyzeDecl", "SourceFile", "parse", "parse_process", "parse_type",
    "parse_derivation", "pretty", "pretty_derivation",
]

GRAMMAR = r"""
start: decl*

?decl: type_decl | process_decl | derivation_decl | compose_decl | analyze_decl
type_decl: "type" NAME "=" type
process_decl: "process" NAME zone* "gives" NAME ":" type mode? "=" process
zone: ZONE binding ("," binding)*
binding: NAME ":" type
mode: "mode" MODE
derivation_decl: "derivation" NAME mode? "=" sexpr
compose_decl: "compose" NAME mode? "=" names "over" names
names: NAME ("," NAME)*
analyze_decl: "analyze" NAME "budget" INT

type: tbin (LOLLI type)?
tbin: tatom (TOP tatom)*
?tatom: "1" -> one
      | "!" tatom -> bang
      | "(" type ")"
      | NAME -> alias

process: pre ("|" pre)*
?pre: "0" -> nil
    | "new" NAME "." pre -> new
    | NAME "(" NAME ")" cont -> input
    | NAME "<" NAME ">" cont -> output
    | "!" NAME "(" NAME ")" cont -> repl
    | NAME "." "inl" sel -> inl
    | NAME "." "inr" sel -> inr
    | NAME "." "case" "(" process "," process ")" -> case
    | "(" process ")"
cont: ("." pre)?
sel: (";" pre)?

sexpr: "(" RULE sarg* ")"
?sarg: NAME -> sname
     | "[" type "]" -> stype
     | sexpr
     | "(" KW (NAME | "[" type "]")* ")" -> sgroup

ZONE: "linear" | "uses" | "aux" | "mux"
MODE: "dsll" | "dill"
TOP: "*" | "+" | "&"
LOLLI: "-o"
RULE.2: /(1R|1L|\*L|\*R|-oL|-oR|\+L|\+R1|\+R2|&L1|&L2|&R|b#|b!|!L#|!L!|!R|cut!|cut#|cut)(?=[\s()\[\]])/
KW.2: "aux" | "mux" | "chans"
NAME: /(?!(new|case|inl|inr|gives|over|budget|mode|process|type|derivation|compose|analyze)\b)[A-Za-z_%][A-Za-z0-9_#%']*/
COMMENT: /--[^\n]*/

%import common.INT
%import common.WS
%ignore WS
%ignore COMMENT
"""


class SstSyntaxError(ValueError):
    def __init__(self, message, line=None, column=None, expected=()):
        self.line = line
        self.column = column
        self.expected = sorted(expected)
        where = f"line {line}, column {column}: " if line is not None else ""
        extra = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(where + message + extra)


@dataclass
class TypeDecl:
    name: str
    type: object
    line: int = 0


@dataclass
class ProcessDecl:
    name: str
    signature: Signature
    process: pc.Process
    line: int = 0


@dataclass
class DerivationDecl:
    name: str
    derivation: object
    mode: str = "dsll"
    line: int = 0


@dataclass
class ComposeDecl:
    name: str
    parts: list
    channels: list
    mode: str | None = None
    line: int = 0


@dataclass
class AnalyzeDecl:
    name: str
    budget: int
    line: int = 0


@dataclass
class SourceFile:
    declarations: list = field(default_factory=list)

    def named(self, name):
        for d in self.declarations:
            if not isinstance(d, AnalyzeDecl) and d.name == name:
                return d
        raise KeyError(name)

    def definitions(self):
        return [d for d in self.declarations if isinstance(d, (ProcessDecl, DerivationDecl, ComposeDecl))]


_BINARY = {"*": Tensor, "-o": Lolli, "+": Plus, "&": With}
_ZONES = {"linear": "usesLinear", "uses": "usesLinear", "aux": "usesAux", "mux": "usesMux"}


class _Build(Transformer):
    def __init__(self):
        super().__init__()
        self.aliases = {}
        self.defined = set()

    # types
    def one(self, _):
        return ONE

    def bang(self, items):
        return Bang(items[0])

    def alias(self, items):
        (name,) = items
        if str(name) not in self.aliases:
            raise SstSyntaxError(f"unknown type {name}", name.line, name.column)
        return self.aliases[str(name)]

    def type(self, items):
        return Lolli(items[0], items[2]) if len(items) == 3 else items[0]

    def tbin(self, items):
        t = items[0]
        for op, rhs in zip(items[1::2], items[2::2]):
            t = _BINARY[str(op)](t, rhs)
        return t

    # processes
    def process(self, items):
        out = items[-1]
        for p in reversed(items[:-1]):
            out = pc.Par(p, out)
        return out

    def nil(self, _):
        return pc.NIL

    def new(self, items):
        return pc.Restrict(str(items[0]), items[1])

    def cont(self, items):
        return items[0] if items else pc.NIL

    sel = cont

    def input(self, items):
        return pc.Input(str(items[0]), str(items[1]), items[2])

    def output(self, items):
        return pc.Output(str(items[0]), str(items[1]), items[2])

    def repl(self, items):
        return pc.ReplInput(str(items[0]), str(items[1]), items[2])

    def inl(self, items):
        return pc.SelectLeft(str(items[0]), items[1])

    def inr(self, items):
        return pc.SelectRight(str(items[0]), items[1])

    def case(self, items):
        return pc.Case(str(items[0]), items[1], items[2])

    # derivation literals
    def sname(self, items):
        return str(items[0])

    def stype(self, items):
        return ("type", items[0])

    def sgroup(self, items):
        return ("group", str(items[0]), [str(x) if isinstance(x, Token) else ("type", x) for x in items[1:]])

    def sexpr(self, items):
        rule = items[0]
        try:
            return _node(str(rule), items[1:])
        except (TypeError, ValueError) as err:
            raise SstSyntaxError(f"malformed {rule} node: {err}", rule.line, rule.column) from None

    # declarations
    def binding(self, items):
        return str(items[0]), items[1]

    def zone(self, items):
        return _ZONES[str(items[0])], items[0], items[1:]

    def mode(self, items):
        return str(items[0])

    def type_decl(self, items):
        name, t = items
        self.aliases[str(name)] = t
        return TypeDecl(str(name), t, name.line)

    def process_decl(self, items):
        name = items[0]
        zones = {"usesLinear": {}, "usesAux": {}, "usesMux": {}}
        rest = list(items[1:])
        while rest and isinstance(rest[0], tuple):
            key, tok, binds = rest.pop(0)
            for c, t in binds:
                if any(c in z for z in zones.values()):
                    raise SstSyntaxError(f"channel {c} declared twice", tok.line, tok.column)
                zones[key][c] = t
        subj, gtype = str(rest[0]), rest[1]
        mode = rest[2] if len(rest) == 4 else "dsll"
        sig = Signature(str(name), (subj, gtype), mode=mode, **zones)
        self.define(name)
        return ProcessDecl(str(name), sig, rest[-1], name.line)

    def derivation_decl(self, items):
        name = items[0]
        mode = items[1] if len(items) == 3 else "dsll"
        self.define(name)
        return DerivationDecl(str(name), items[-1], mode, name.line)

    def names(self, items):
        return [str(t) for t in items]

    def compose_decl(self, items):
        name, *rest = items
        mode = rest.pop(0) if len(rest) == 3 else None
        parts, chans = rest
        for p in parts:
            if p not in self.defined:
                raise SstSyntaxError(f"{p} is used before it is defined", name.line, name.column)
        if len(chans) != len(parts) - 1:
            raise SstSyntaxError(f"{len(parts)} parts need {len(parts) - 1} cut channels", name.line, name.column)
        self.define(name)
        return ComposeDecl(str(name), parts, chans, mode, name.line)

    def define(self, name):
        if str(name) in self.defined:
            raise SstSyntaxError(f"{name} is defined twice", name.line, name.column)
        self.defined.add(str(name))

    def analyze_decl(self, items):
        if str(items[0]) not in self.defined:
            raise SstSyntaxError(f"{items[0]} is used before it is defined", items[0].line, items[0].column)
        return AnalyzeDecl(str(items[0]), int(items[1]), items[0].line)

    def start(self, items):
        return SourceFile(list(items))


def _node(rule, args):
    def name(i):
        v = args[i]
        if not isinstance(v, str):
            raise ValueError(f"argument {i + 1} should be a channel")
        return v

    def typ(i):
        v = args[i]
        if not (isinstance(v, tuple) and v[0] == "type"):
            raise ValueError(f"argument {i + 1} should be a [type]")
        return v[1]

    def der(i):
        v = args[i]
        if isinstance(v, (str, tuple)):
            raise ValueError(f"argument {i + 1} should be a derivation")
        return v

    def arity(*ns):
        if len(args) not in ns:
            raise ValueError(f"expected {' or '.join(map(str, ns))} arguments, got {len(args)}")

    def group(v, kw):
        if not (isinstance(v, tuple) and v[0] == "group" and v[1] == kw):
            raise ValueError(f"expected a ({kw} ...) group")
        return v[2]

    def bindings(v, kw):
        items = group(v, kw)
        if len(items) % 2 or not all(isinstance(c, str) for c in items[::2]):
            raise ValueError(f"({kw} ...) takes channel [type] pairs")
        return tuple((c, t[1]) for c, t in zip(items[::2], items[1::2]))

    match rule:
        case "1R":
            arity(1, 2, 3)
            aux, mux = (), ()
            for v in args[1:]:
                if isinstance(v, tuple) and v[0] == "group" and v[1] == "aux":
                    aux = bindings(v, "aux")
                else:
                    mux = bindings(v, "mux")
            return dv.OneR(name(0), aux, mux)
        case "1L" | "!L#" | "!L!":
            arity(2)
            cls = {"1L": dv.OneL, "!L#": dv.BangLSharp, "!L!": dv.BangLBang}[rule]
            return cls(name(0), der(1))
        case "*L" | "-oR" | "b#":
            arity(3)
            cls = {"*L": dv.TensorL, "-oR": dv.LolliR, "b#": dv.BSharp}[rule]
            return cls(name(0), name(1), der(2))
        case "*R" | "-oL":
            arity(4)
            cls = dv.TensorR if rule == "*R" else dv.LolliL
            return cls(name(0), name(1), der(2), der(3))
        case "+L" | "&R":
            arity(3)
            cls = dv.PlusL if rule == "+L" else dv.WithR
            return cls(name(0), der(1), der(2))
        case "+R1" | "+R2" | "&L1" | "&L2":
            arity(3)
            cls = {"+R1": dv.PlusR1, "+R2": dv.PlusR2, "&L1": dv.WithL1, "&L2": dv.WithL2}[rule]
            return cls(name(0), typ(1), der(2))
        case "b!":
            arity(4)
            return dv.BBang(name(0), name(1), typ(2), der(3))
        case "!R":
            arity(4, 5)
            chans = group(args[2], "chans")
            if not all(isinstance(c, str) for c in chans):
                raise ValueError("(chans ...) takes channel names")
            mux = bindings(args[4], "mux") if len(args) == 5 else ()
            return dv.BangR(name(0), name(1), tuple(chans), der(3), mux)
        case "cut" | "cut!" | "cut#":
            arity(4)
            cls = {"cut": dv.Cut, "cut!": dv.CutBang, "cut#": dv.CutSharp}[rule]
            return cls(name(0), typ(1), der(2), der(3))
    raise ValueError(f"unknown rule {rule}")


@functools.lru_cache(maxsize=None)
def _parser(start):
    return Lark(GRAMMAR, start=start, parser="lalr", propagate_positions=True, maybe_placeholders=False)


def _run(text, start):
    builder = _Build()
    try:
        tree = _parser(start).parse(text)
    except UnexpectedInput as err:
        raise _syntax_error(err, text) from None
    try:
        return builder.transform(tree)
    except VisitError as err:
        if isinstance(err.orig_exc, SstSyntaxError):
            raise err.orig_exc from None
        raise


def _syntax_error(err, text):
    match err:
        case UnexpectedEOF():
            lines = text.splitlines() or [""]
            return SstSyntaxError("unexpected end of input", len(lines), len(lines[-1]) + 1, _readable(err.expected))
        case UnexpectedToken() if err.token.type == "$END":
            lines = text.splitlines() or [""]
            return SstSyntaxError("unexpected end of input", len(lines), len(lines[-1]) + 1, _readable(err.expected))
        case UnexpectedToken():
            return SstSyntaxError(f"unexpected {str(err.token)!r}", err.line, err.column, _readable(err.expected))
        case UnexpectedCharacters():
            return SstSyntaxError(f"unexpected character {err.char!r}", err.line, err.column, err.allowed or ())
    return SstSyntaxError(str(err), getattr(err, "line", None), getattr(err, "column", None))


def _readable(names):
    terms = {t.name: t for t in _parser("start").terminals}
    out = set()
    for n in names:
        t = terms.get(n)
        if t is not None and t.pattern.type == "str":
            out.add(repr(t.pattern.value))
        else:
            out.add({"NAME": "name", "INT": "number"}.get(n, n.lower()))
    return out


def parse(source: str) -> SourceFile:
    """Parse a ``.sst`` file."""
    return _run(source, "start")


def parse_process(text: str) -> pc.Process:
    return _run(text, "process")


def parse_type(text: str):
    return _run(text, "type")


def parse_derivation(text: str):
    return _run(text, "sexpr")


# ----------------------------------------------------------------------------
# printing


def _bindings(zone):
    return ", ".join(f"{c}:{t}" for c, t in zone.items())


def _group(kw, pairs):
    return f"({kw} " + " ".join(f"{c} [{t}]" for c, t in pairs) + ")"


def pretty_derivation(d) -> str:
    tag = dv.RULE_NAMES[type(d)]
    match d:
        case dv.OneR(x, aux, mux):
            parts = [x] + ([_group("aux", aux)] if aux else []) + ([_group("mux", mux)] if mux else [])
        case dv.OneL(x, s) | dv.BangLSharp(x, s) | dv.BangLBang(x, s):
            parts = [x, pretty_derivation(s)]
        case dv.TensorL(x, y, s) | dv.LolliR(x, y, s) | dv.BSharp(x, y, s):
            parts = [x, y, pretty_derivation(s)]
        case dv.TensorR(x, y, f, g) | dv.LolliL(x, y, f, g):
            parts = [x, y, pretty_derivation(f), pretty_derivation(g)]
        case dv.PlusL(x, f, g) | dv.WithR(x, f, g):
            parts = [x, pretty_derivation(f), pretty_derivation(g)]
        case dv.PlusR1(x, t, s) | dv.PlusR2(x, t, s) | dv.WithL1(x, t, s) | dv.WithL2(x, t, s):
            parts = [x, f"[{t}]", pretty_derivation(s)]
        case dv.BBang(x, y, t, s):
            parts = [x, y, f"[{t}]", pretty_derivation(s)]
        case dv.BangR(x, y, chans, s, mux):
            parts = [x, y, "(chans" + "".join(f" {c}" for c in chans) + ")", pretty_derivation(s)]
            if mux:
                parts.append(_group("mux", mux))
        case dv.Cut(x, t, f, g) | dv.CutBang(x, t, f, g) | dv.CutSharp(x, t, f, g):
            parts = [x, f"[{t}]", pretty_derivation(f), pretty_derivation(g)]
        case _:
            raise TypeError(f"not a derivation node: {d!r}")
    return f"({tag} " + " ".join(parts) + ")"


def _pretty_decl(d) -> str:
    match d:
        case TypeDecl(name, t):
            return f"type {name} = {t}"
        case ProcessDecl(name, sig, p):
            zones = "".join(
                f" {kw} {_bindings(z)}"
                for kw, z in (("linear", sig.usesLinear), ("aux", sig.usesAux), ("mux", sig.usesMux)) if z
            )
            x, a = sig.gives
            return f"process {name}{zones} gives {x}:{a} mode {sig.mode} =\n  {p}"
        case DerivationDecl(name, der, mode):
            return f"derivation {name} mode {mode} =\n  {pretty_derivation(der)}"
        case ComposeDecl(name, parts, chans, mode):
            m = f" mode {mode}" if mode else ""
            return f"compose {name}{m} = {', '.join(parts)} over {', '.join(chans)}"
        case AnalyzeDecl(name, budget):
            return f"analyze {name} budget {budget}"
    raise TypeError(d)


def pretty(src: SourceFile) -> str:
    """Source text for a parsed file; type aliases are printed expanded."""
    return "\n\n".join(_pretty_decl(d) for d in src.declarations) + "\n"
