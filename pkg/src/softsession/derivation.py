"""Proof terms for the soft session type system and their kernel checker.

A derivation is a tree of rule nodes.  ``check_derivation`` synthesizes the
conclusion bottom-up.  Synthesis is minimal: leaves contribute only the
exponential channels they declare, the multiplexor zone is the union of the
premises' zones (weakening is admissible for it), and the auxiliary zone is
split exactly.  Every side condition failure raises ``CheckError``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Union

from . import calculus as pc
from .calculus import fresh_name
from .types import (
    Bang, ContextTriple, Judgment, Lolli, ONE, One, Plus, SessionType, Tensor, With,
)

__all__ = [
    "OneL", "OneR", "TensorL", "TensorR", "LolliL", "LolliR", "PlusL", "PlusR1",
    "PlusR2", "WithL1", "WithL2", "WithR", "BSharp", "BBang", "BangLSharp",
    "BangLBang", "BangR", "Cut", "CutBang", "CutSharp", "Derivation",
    "CheckError", "check_derivation", "erase", "is_normal", "weaken", "lift",
    "children", "with_children", "subterm", "replace_at", "positions",
    "rename", "freshen", "bound_names", "all_names", "derivation_alpha_eq",
    "node_count", "RULE_NAMES", "barendregt", "is_barendregt", "strip_mux", "subject_of",
]


# ----------------------------------------------------------------------------
# nodes


@dataclass(frozen=True)
class OneR:
    subject: str
    aux: tuple = ()
    mux: tuple = ()


@dataclass(frozen=True)
class OneL:
    chan: str
    sub: "Derivation"


@dataclass(frozen=True)
class TensorL:
    chan: str
    bound: str
    sub: "Derivation"


@dataclass(frozen=True)
class TensorR:
    subject: str
    bound: str
    left: "Derivation"
    right: "Derivation"


@dataclass(frozen=True)
class LolliL:
    chan: str
    bound: str
    left: "Derivation"
    right: "Derivation"


@dataclass(frozen=True)
class LolliR:
    subject: str
    bound: str
    sub: "Derivation"


@dataclass(frozen=True)
class PlusL:
    chan: str
    left: "Derivation"
    right: "Derivation"


@dataclass(frozen=True)
class PlusR1:
    subject: str
    other: SessionType
    sub: "Derivation"


@dataclass(frozen=True)
class PlusR2:
    subject: str
    other: SessionType
    sub: "Derivation"


@dataclass(frozen=True)
class WithL1:
    chan: str
    other: SessionType
    sub: "Derivation"


@dataclass(frozen=True)
class WithL2:
    chan: str
    other: SessionType
    sub: "Derivation"


@dataclass(frozen=True)
class WithR:
    subject: str
    left: "Derivation"
    right: "Derivation"


@dataclass(frozen=True)
class BSharp:
    chan: str
    bound: str
    sub: "Derivation"


@dataclass(frozen=True)
class BBang:
    chan: str
    bound: str
    type: SessionType
    sub: "Derivation"


@dataclass(frozen=True)
class BangLSharp:
    chan: str
    sub: "Derivation"


@dataclass(frozen=True)
class BangLBang:
    chan: str
    sub: "Derivation"


@dataclass(frozen=True)
class BangR:
    subject: str
    bound: str
    aux_chans: tuple
    sub: "Derivation"
    mux: tuple = ()


@dataclass(frozen=True)
class Cut:
    chan: str
    type: SessionType
    left: "Derivation"
    right: "Derivation"


@dataclass(frozen=True)
class CutBang:
    chan: str
    type: SessionType
    left: "Derivation"
    right: "Derivation"


@dataclass(frozen=True)
class CutSharp:
    chan: str
    type: SessionType
    left: "Derivation"
    right: "Derivation"


Derivation = Union[
    OneL, OneR, TensorL, TensorR, LolliL, LolliR, PlusL, PlusR1, PlusR2, WithL1,
    WithL2, WithR, BSharp, BBang, BangLSharp, BangLBang, BangR, Cut, CutBang, CutSharp,
]

RULE_NAMES = {
    OneL: "1L", OneR: "1R", TensorL: "*L", TensorR: "*R", LolliL: "-oL", LolliR: "-oR",
    PlusL: "+L", PlusR1: "+R1", PlusR2: "+R2", WithL1: "&L1", WithL2: "&L2", WithR: "&R",
    BSharp: "b#", BBang: "b!", BangLSharp: "!L#", BangLBang: "!L!", BangR: "!R",
    Cut: "cut", CutBang: "cut!", CutSharp: "cut#",
}
_CUTS = (Cut, CutBang, CutSharp)
_CHILD_FIELDS = ("sub", "left", "right")


# ----------------------------------------------------------------------------
# generic traversal


def children(d: Derivation) -> tuple:
    return tuple(getattr(d, f) for f in _CHILD_FIELDS if hasattr(d, f))


def with_children(d: Derivation, new) -> Derivation:
    names = [f for f in _CHILD_FIELDS if hasattr(d, f)]
    return dataclasses.replace(d, **dict(zip(names, new)))


def subterm(d: Derivation, path) -> Derivation:
    for i in path:
        d = children(d)[i]
    return d


def replace_at(d: Derivation, path, new: Derivation) -> Derivation:
    if not path:
        return new
    kids = list(children(d))
    kids[path[0]] = replace_at(kids[path[0]], path[1:], new)
    return with_children(d, kids)


def positions(d: Derivation, path=()):
    """All ``(path, node)`` pairs in pre-order."""
    yield path, d
    for i, c in enumerate(children(d)):
        yield from positions(c, path + (i,))


def node_count(d: Derivation) -> int:
    return 1 + sum(node_count(c) for c in children(d))


def is_normal(d: Derivation) -> bool:
    return not any(isinstance(n, _CUTS) for _, n in positions(d))


# ----------------------------------------------------------------------------
# names


def _binder_names(d):
    """Names bound at this node (visible only inside its premises)."""
    match d:
        case TensorL(bound=b) | TensorR(bound=b) | LolliL(bound=b) | LolliR(bound=b):
            return (b,)
        case BSharp(bound=b) | BBang(bound=b) | BangR(bound=b):
            return (b,)
        case Cut(chan=x):
            return (x,)
        case CutBang(chan=x, left=f) | CutSharp(chan=x, left=f):
            return (x, _subject(f))
    return ()


def _subject(d):
    """Subject channel of a derivation, read off without checking."""
    while True:
        match d:
            case OneR(subject=s) | TensorR(subject=s) | LolliR(subject=s) | WithR(subject=s):
                return s
            case PlusR1(subject=s) | PlusR2(subject=s) | BangR(subject=s):
                return s
            case Cut(right=r) | CutBang(right=r) | CutSharp(right=r) | LolliL(right=r):
                d = r
            case PlusL(left=l):
                d = l
            case _:
                d = d.sub


def bound_names(d: Derivation) -> list:
    out = []
    for _, n in positions(d):
        out.extend(_binder_names(n))
    return out


def all_names(d: Derivation) -> set:
    out = set()
    for _, n in positions(d):
        for f in dataclasses.fields(n):
            v = getattr(n, f.name)
            if f.name in ("chan", "subject", "bound"):
                out.add(v)
            elif f.name == "aux_chans":
                out.update(v)
            elif f.name in ("aux", "mux"):
                out.update(k for k, _ in v)
    return out


def rename(d: Derivation, mapping: dict) -> Derivation:
    """Rename every occurrence (free or bound) of the names in ``mapping``."""
    if not mapping:
        return d

    def m(x):
        return mapping.get(x, x)

    def go(n):
        changes = {}
        for f in dataclasses.fields(n):
            v = getattr(n, f.name)
            if f.name in ("chan", "subject", "bound"):
                changes[f.name] = m(v)
            elif f.name == "aux_chans":
                changes[f.name] = tuple(m(x) for x in v)
            elif f.name in ("aux", "mux"):
                changes[f.name] = tuple((m(k), t) for k, t in v)
            elif f.name in _CHILD_FIELDS:
                changes[f.name] = go(v)
        return dataclasses.replace(n, **changes)

    return go(d)


def freshen(d: Derivation) -> Derivation:
    """Rename every bound name of ``d`` to a fresh one."""
    return rename(d, {b: fresh_name(b) for b in dict.fromkeys(bound_names(d))})


def derivation_alpha_eq(d: Derivation, e: Derivation) -> bool:
    def canon(x):
        order = list(dict.fromkeys(bound_names(x)))
        return rename(x, {b: f"%{i}" for i, b in enumerate(order)})

    return canon(d) == canon(e)


# ----------------------------------------------------------------------------
# checking


class CheckError(Exception):
    """A failed side condition of a typing rule."""

    REASONS = (
        "zone-mismatch", "missing-channel", "type-mismatch",
        "nonempty-context-required-empty", "duplicate-channel", "subject-mismatch",
    )

    def __init__(self, rule: str, reason: str, location: tuple, message: str = ""):
        assert reason in self.REASONS, reason
        self.rule = rule
        self.reason = reason
        self.location = tuple(location)
        super().__init__(f"{rule} at {list(self.location)}: {reason}" + (f" ({message})" if message else ""))


@dataclass
class _Seq:
    aux: dict
    mux: dict
    lin: dict
    subject: str
    type: SessionType

    def channels(self):
        return set(self.aux) | set(self.mux) | set(self.lin) | {self.subject}


def check_derivation(d: Derivation, mode: str = "dsll") -> Judgment:
    """Synthesize the conclusion of ``d`` or raise ``CheckError``.

    ``mode="dill"`` checks the reference two-zone discipline: the auxiliary
    zone is never used, ``!R`` and ``cut#`` premises may use the multiplexor
    zone, and ``b!``, ``!L!`` and ``cut!`` are rejected.
    """
    if mode not in ("dsll", "dill"):
        raise ValueError(f"unknown mode {mode!r}")
    s = _check(d, (), mode)
    return Judgment(ContextTriple(s.aux, s.mux, s.lin), s.subject, s.type)


def _check(d, path, mode) -> _Seq:
    rule = RULE_NAMES.get(type(d))
    if rule is None:
        raise TypeError(f"not a derivation node: {d!r}")

    def fail(reason, msg=""):
        raise CheckError(rule, reason, path, msg)

    def take(zone, x, what):
        if x not in zone:
            fail("missing-channel", f"{x} not in the {what} zone")
        t = zone[x]
        rest = {k: v for k, v in zone.items() if k != x}
        return t, rest

    def join(a, b):
        clash = a.keys() & b.keys()
        if clash:
            fail("duplicate-channel", f"{sorted(clash)[0]} used by both premises")
        return {**a, **b}

    def share(a, b):
        for k in a.keys() & b.keys():
            if a[k] != b[k]:
                fail("type-mismatch", f"{k} has types {a[k]} and {b[k]}")
        return {**a, **b}

    def fresh_for(x, *seqs):
        for q in seqs:
            if x in q.channels():
                fail("duplicate-channel", f"{x} already in use")

    def sub(i, node):
        return _check(node, path + (i,), mode)

    if mode == "dill" and isinstance(d, (BBang, BangLBang, CutBang)):
        fail("zone-mismatch", "auxiliary-zone rules are not part of the reference mode")

    match d:
        case OneR(x, aux, mux):
            if mode == "dill" and aux:
                fail("zone-mismatch", "reference mode has no auxiliary zone")
            out = _Seq(dict(aux), dict(mux), {}, x, ONE)

        case OneL(x, s0):
            s = sub(0, s0)
            fresh_for(x, s)
            out = _Seq(s.aux, s.mux, {**s.lin, x: ONE}, s.subject, s.type)

        case TensorL(x, y, s0):
            s = sub(0, s0)
            a, lin = take(s.lin, y, "linear")
            b, lin = take(lin, x, "linear")
            if x == s.subject:
                fail("duplicate-channel", f"{x} is the subject")
            out = _Seq(s.aux, s.mux, {**lin, x: Tensor(a, b)}, s.subject, s.type)

        case TensorR(x, y, f0, g0):
            f, g = sub(0, f0), sub(1, g0)
            if f.subject != y or g.subject != x:
                fail("subject-mismatch", f"premises offer {f.subject}, {g.subject}; expected {y}, {x}")
            fresh_for(y, g)
            if x in f.channels():
                fail("duplicate-channel", f"{x} used by the sent channel's provider")
            out = _Seq(join(f.aux, g.aux), share(f.mux, g.mux), join(f.lin, g.lin), x, Tensor(f.type, g.type))

        case LolliL(x, y, f0, g0):
            f, g = sub(0, f0), sub(1, g0)
            if f.subject != y:
                fail("subject-mismatch", f"first premise offers {f.subject}, expected {y}")
            b, glin = take(g.lin, x, "linear")
            fresh_for(y, g)
            if x in f.channels():
                fail("duplicate-channel", f"{x} used by the sent channel's provider")
            lin = join(f.lin, glin)
            if x in lin:
                fail("duplicate-channel", f"{x} already in use")
            out = _Seq(join(f.aux, g.aux), share(f.mux, g.mux), {**lin, x: Lolli(f.type, b)}, g.subject, g.type)

        case LolliR(x, y, s0):
            s = sub(0, s0)
            if s.subject != x:
                fail("subject-mismatch", f"premise offers {s.subject}, expected {x}")
            a, lin = take(s.lin, y, "linear")
            out = _Seq(s.aux, s.mux, lin, x, Lolli(a, s.type))

        case PlusL(x, f0, g0):
            f, g = sub(0, f0), sub(1, g0)
            a, flin = take(f.lin, x, "linear")
            b, glin = take(g.lin, x, "linear")
            if f.aux != g.aux or flin != glin:
                fail("zone-mismatch", "case branches need the same auxiliary and linear zones")
            if f.subject != g.subject:
                fail("subject-mismatch", "case branches offer different channels")
            if f.type != g.type:
                fail("type-mismatch", "case branches offer different types")
            out = _Seq(f.aux, share(f.mux, g.mux), {**flin, x: Plus(a, b)}, f.subject, f.type)

        case PlusR1(x, other, s0) | PlusR2(x, other, s0):
            s = sub(0, s0)
            if s.subject != x:
                fail("subject-mismatch", f"premise offers {s.subject}, expected {x}")
            t = Plus(s.type, other) if isinstance(d, PlusR1) else Plus(other, s.type)
            out = _Seq(s.aux, s.mux, s.lin, x, t)

        case WithL1(x, other, s0) | WithL2(x, other, s0):
            s = sub(0, s0)
            a, lin = take(s.lin, x, "linear")
            t = With(a, other) if isinstance(d, WithL1) else With(other, a)
            out = _Seq(s.aux, s.mux, {**lin, x: t}, s.subject, s.type)

        case WithR(x, f0, g0):
            f, g = sub(0, f0), sub(1, g0)
            if f.subject != x or g.subject != x:
                fail("subject-mismatch", f"branches offer {f.subject}, {g.subject}; expected {x}")
            if f.aux != g.aux or f.lin != g.lin:
                fail("zone-mismatch", "case branches need the same auxiliary and linear zones")
            out = _Seq(f.aux, share(f.mux, g.mux), f.lin, x, With(f.type, g.type))

        case BSharp(x, y, s0):
            s = sub(0, s0)
            a, lin = take(s.lin, y, "linear")
            if x in s.aux or x in lin or x == s.subject:
                fail("zone-mismatch", f"{x} must be a multiplexor channel")
            if x in s.mux and s.mux[x] != a:
                fail("type-mismatch", f"{x} has type {s.mux[x]}, spawned session has {a}")
            out = _Seq(s.aux, {**s.mux, x: a}, lin, s.subject, s.type)

        case BBang(x, y, a0, s0):
            s = sub(0, s0)
            a, lin = take(s.lin, y, "linear")
            if a != a0:
                fail("type-mismatch", f"annotation {a0} but spawned session has {a}")
            if x in s.aux or x in s.mux or x in lin or x == s.subject:
                fail("duplicate-channel", f"auxiliary channel {x} used more than once")
            out = _Seq({**s.aux, x: a}, s.mux, lin, s.subject, s.type)

        case BangLSharp(x, s0):
            s = sub(0, s0)
            a, mux = take(s.mux, x, "multiplexor")
            out = _Seq(s.aux, mux, {**s.lin, x: Bang(a)}, s.subject, s.type)

        case BangLBang(x, s0):
            s = sub(0, s0)
            a, aux = take(s.aux, x, "auxiliary")
            out = _Seq(aux, s.mux, {**s.lin, x: Bang(a)}, s.subject, s.type)

        case BangR(x, y, chans, s0, mux):
            s = sub(0, s0)
            if s.subject != y:
                fail("subject-mismatch", f"server body offers {s.subject}, expected {y}")
            if s.lin:
                fail("nonempty-context-required-empty", "server body must have an empty linear zone")
            if mode == "dsll":
                if s.mux:
                    fail("nonempty-context-required-empty", "server body must have an empty multiplexor zone")
                if len(set(chans)) != len(chans) or set(chans) != set(s.aux):
                    fail("zone-mismatch", f"auxiliary channels {sorted(s.aux)} but node lists {list(chans)}")
                if x in chans:
                    fail("duplicate-channel", f"{x} is both subject and auxiliary")
                lin = {c: Bang(s.aux[c]) for c in chans}
                out = _Seq({}, dict(mux), lin, x, Bang(s.type))
            else:
                if s.aux or chans:
                    fail("zone-mismatch", "reference mode has no auxiliary zone")
                out = _Seq({}, share(s.mux, dict(mux)), {}, x, Bang(s.type))

        case Cut(x, a0, f0, g0):
            f, g = sub(0, f0), sub(1, g0)
            if f.subject != x:
                fail("subject-mismatch", f"left premise offers {f.subject}, expected {x}")
            if f.type != a0:
                fail("type-mismatch", f"left premise offers {f.type}, cut type is {a0}")
            b, glin = take(g.lin, x, "linear")
            if b != a0:
                fail("type-mismatch", f"right premise uses {x} at {b}, cut type is {a0}")
            if x in g.aux or x in g.mux or x == g.subject:
                fail("duplicate-channel", f"{x} occurs twice in the right premise")
            if x in f.aux or x in f.mux or x in f.lin:
                fail("duplicate-channel", f"{x} occurs in the left premise's context")
            out = _Seq(join(f.aux, g.aux), share(f.mux, g.mux), join(f.lin, glin), g.subject, g.type)

        case CutSharp(x, a0, f0, g0):
            f, g = sub(0, f0), sub(1, g0)
            if f.type != a0:
                fail("type-mismatch", f"server offers {f.type}, cut type is {a0}")
            if f.lin:
                fail("nonempty-context-required-empty", "server premise must have an empty linear zone")
            if mode == "dsll":
                if f.mux:
                    fail("nonempty-context-required-empty", "server premise must have an empty multiplexor zone")
                provided = f.aux
            else:
                if f.aux:
                    fail("zone-mismatch", "reference mode has no auxiliary zone")
                provided = f.mux
            if x in g.aux or x in g.lin or x == g.subject:
                fail("zone-mismatch", f"{x} must be a multiplexor channel of the right premise")
            if x in provided:
                fail("duplicate-channel", f"{x} used by its own server")
            gmux = dict(g.mux)
            if x in gmux:
                if gmux.pop(x) != a0:
                    fail("type-mismatch", f"right premise uses {x} at a different type")
            out = _Seq(g.aux, share(gmux, provided), g.lin, g.subject, g.type)

        case CutBang(x, a0, f0, g0):
            f, g = sub(0, f0), sub(1, g0)
            if f.type != a0:
                fail("type-mismatch", f"server offers {f.type}, cut type is {a0}")
            if f.mux or f.lin:
                fail("nonempty-context-required-empty", "server premise must have empty multiplexor and linear zones")
            if x in g.mux or x in g.lin or x == g.subject:
                fail("zone-mismatch", f"{x} must be an auxiliary channel of the right premise")
            if x in f.aux:
                fail("duplicate-channel", f"{x} used by its own server")
            gaux = dict(g.aux)
            if x in gaux:
                if gaux.pop(x) != a0:
                    fail("type-mismatch", f"right premise uses {x} at a different type")
            out = _Seq(join(f.aux, gaux), g.mux, g.lin, g.subject, g.type)

    zones = (out.aux, out.mux, out.lin)
    for i in range(3):
        for j in range(i + 1, 3):
            clash = zones[i].keys() & zones[j].keys()
            if clash:
                fail("duplicate-channel", f"{sorted(clash)[0]} occurs in two zones")
    if out.subject in out.aux or out.subject in out.mux or out.subject in out.lin:
        fail("duplicate-channel", f"subject {out.subject} also occurs in the context")
    return out


# ----------------------------------------------------------------------------
# erasure


def erase(d: Derivation) -> pc.Process:
    """The process typed by ``d``."""
    match d:
        case OneR():
            return pc.NIL
        case OneL(sub=s) | BangLSharp(sub=s) | BangLBang(sub=s):
            return erase(s)
        case TensorL(x, y, s) | LolliR(x, y, s):
            return pc.Input(x, y, erase(s))
        case TensorR(x, y, f, g) | LolliL(x, y, f, g):
            return pc.Output(x, y, pc.Par(erase(f), erase(g)))
        case PlusR1(x, _, s) | WithL1(x, _, s):
            return pc.SelectLeft(x, erase(s))
        case PlusR2(x, _, s) | WithL2(x, _, s):
            return pc.SelectRight(x, erase(s))
        case WithR(x, f, g) | PlusL(x, f, g):
            return pc.Case(x, erase(f), erase(g))
        case BSharp(x, y, s) | BBang(x, y, _, s):
            return pc.Output(x, y, erase(s))
        case BangR(x, y, _, s, _):
            return pc.ReplInput(x, y, erase(s))
        case Cut(x, _, f, g):
            return pc.Restrict(x, pc.Par(erase(f), erase(g)))
        case CutBang(x, _, f, g) | CutSharp(x, _, f, g):
            return pc.Restrict(x, pc.Par(pc.ReplInput(x, _subject(f), erase(f)), erase(g)))
    raise TypeError(f"not a derivation node: {d!r}")


# ----------------------------------------------------------------------------
# structural operations


def weaken(d: Derivation, extra: dict, mode: str = "dsll") -> Derivation:
    """Add ``extra`` to the multiplexor zone of ``d``'s conclusion."""
    if not extra:
        return d
    j = check_derivation(d, mode)
    taken = (j.contexts.channels() | {j.subject} | all_names(d)) - set(j.contexts.mux)
    for k, t in extra.items():
        if k in taken or (k in j.contexts.mux and j.contexts.mux[k] != t):
            raise CheckError("weaken", "duplicate-channel", (), f"{k} is not fresh for the derivation")
    items = tuple(extra.items())

    def add(existing):
        have = dict(existing)
        return existing + tuple((k, t) for k, t in items if k not in have)

    def go(n):
        match n:
            case OneR():
                return dataclasses.replace(n, mux=add(n.mux))
            case BangR():
                return dataclasses.replace(n, mux=add(n.mux))
            case CutBang() | CutSharp():
                return dataclasses.replace(n, right=go(n.right))
        return with_children(n, [go(c) for c in children(n)])

    return go(d)


def lift(d: Derivation) -> Derivation:
    """Move every auxiliary channel of the conclusion into the multiplexor zone.

    The erasure is unchanged: ``b!`` becomes ``b#``, ``!L!`` becomes ``!L#``
    and ``cut!`` becomes ``cut#``.
    """
    match d:
        case OneR(x, aux, mux):
            return OneR(x, (), mux + tuple(a for a in aux if a[0] not in dict(mux)))
        case BBang(x, y, _, s):
            return BSharp(x, y, lift(s))
        case BangLBang(x, s):
            return BangLSharp(x, lift(s))
        case CutBang(x, a, f, g):
            return CutSharp(x, a, f, lift(g))
        case CutSharp(x, a, f, g):
            return CutSharp(x, a, f, lift(g))
        case BangR():
            return d
    return with_children(d, [lift(c) for c in children(d)])


def barendregt(d: Derivation) -> Derivation:
    """Rename every binder occurrence to a fresh name, respecting scope."""

    def go(n, env):
        def m(x):
            return env.get(x, x)

        def bind(*names):
            new = dict(env)
            fresh = [fresh_name(_base(x)) for x in names]
            new.update(zip(names, fresh))
            return new, fresh

        match n:
            case OneR(x, aux, mux):
                return OneR(m(x), tuple((m(k), t) for k, t in aux), tuple((m(k), t) for k, t in mux))
            case OneL(x, s) | BangLSharp(x, s) | BangLBang(x, s):
                return type(n)(m(x), go(s, env))
            case TensorL(x, y, s) | LolliR(x, y, s):
                e, (y2,) = bind(y)
                return type(n)(m(x), y2, go(s, e))
            case TensorR(x, y, f, g) | LolliL(x, y, f, g):
                e, (y2,) = bind(y)
                return type(n)(m(x), y2, go(f, e), go(g, env))
            case PlusL(x, f, g) | WithR(x, f, g):
                return type(n)(m(x), go(f, env), go(g, env))
            case PlusR1(x, t, s) | PlusR2(x, t, s) | WithL1(x, t, s) | WithL2(x, t, s):
                return type(n)(m(x), t, go(s, env))
            case BSharp(x, y, s):
                e, (y2,) = bind(y)
                return BSharp(m(x), y2, go(s, e))
            case BBang(x, y, t, s):
                e, (y2,) = bind(y)
                return BBang(m(x), y2, t, go(s, e))
            case BangR(x, y, chans, s, mux):
                e, (y2,) = bind(y)
                return BangR(m(x), y2, tuple(m(c) for c in chans), go(s, e), tuple((m(k), t) for k, t in mux))
            case Cut(x, a, f, g):
                e, (x2,) = bind(x)
                return Cut(x2, a, go(f, e), go(g, e))
            case CutBang(x, a, f, g) | CutSharp(x, a, f, g):
                e, (x2,) = bind(x)
                ef, _ = bind(_subject(f))
                return type(n)(x2, a, go(f, ef), go(g, e))
        raise TypeError(f"not a derivation node: {n!r}")

    return go(d, {})


def _base(x: str) -> str:
    return x.split("#", 1)[0]


def is_barendregt(d: Derivation) -> bool:
    """Bound names pairwise distinct and distinct from the free ones."""
    bound = bound_names(d)
    if len(bound) != len(set(bound)):
        return False
    j = check_derivation(d)
    return not (set(bound) & (j.contexts.channels() | {j.subject}))


def strip_mux(d: Derivation, x: str) -> Derivation:
    """Remove weakening declarations of ``x`` from the leaves of ``d``."""

    def go(n):
        match n:
            case OneR(mux=mux) | BangR(mux=mux):
                return dataclasses.replace(n, mux=tuple(p for p in mux if p[0] != x))
        return with_children(n, [go(c) for c in children(n)])

    return go(d)


subject_of = _subject
