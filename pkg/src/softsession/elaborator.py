"""Reconstruct derivations from processes and declared signatures.

Rule selection is syntax directed. Search is over ``cut!`` against ``cut#``
for servers, ``!L!`` against ``!L#`` when a ``!``-typed linear channel is
first used, and, for a parallel group, which component ends up on the
subject side of each linear cut (disconnected clusters are detached on a
name used once, or on a fresh one). Types of restricted and received
channels are inferred by unification; anything left open defaults to ``1``.
"""

from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass, field

from . import calculus as pc
from .derivation import (
    BangLBang, BangLSharp, BangR, BBang, BSharp, CheckError, Cut, CutBang, CutSharp,
    LolliL, LolliR, OneL, OneR, PlusL, PlusR1, PlusR2, TensorL, TensorR, WithL1,
    WithL2, WithR, check_derivation, children, erase, with_children,
)
from .types import ONE, Bang, ContextTriple, Judgment, Lolli, One, Plus, Tensor, With

__all__ = ["Signature", "Diagnostic", "elaborate", "elaborate_composition"]

KINDS = (
    "unused-linear", "reused-auxiliary", "unsplittable", "prefix-mismatch",
    "server-body-context", "no-rule",
)


@dataclass
class Signature:
    name: str
    gives: tuple
    usesLinear: dict = field(default_factory=dict)
    usesAux: dict = field(default_factory=dict)
    usesMux: dict = field(default_factory=dict)
    mode: str = "dsll"

    def __post_init__(self):
        ContextTriple(self.usesAux, self.usesMux, self.usesLinear)
        if self.mode not in ("dsll", "dill"):
            raise ValueError(f"unknown mode {self.mode!r}")

    def judgment(self) -> Judgment:
        x, a = self.gives
        if self.mode == "dill":
            ctx = ContextTriple({}, {**self.usesAux, **self.usesMux}, dict(self.usesLinear))
        else:
            ctx = ContextTriple(dict(self.usesAux), dict(self.usesMux), dict(self.usesLinear))
        return Judgment(ctx, x, a)


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    channel: str
    position: tuple
    explanation: str
    count: int | None = None

    def __post_init__(self):
        assert self.kind in KINDS, self.kind

    def __str__(self):
        extra = f" (count {self.count})" if self.count is not None else ""
        return f"{self.kind} on {self.channel} at {list(self.position)}{extra}: {self.explanation}"


# ----------------------------------------------------------------------------
# metavariables

_ids = itertools.count()


@dataclass(frozen=True)
class Meta:
    id: int

    def __str__(self):
        return f"?{self.id}"


def _meta():
    return Meta(next(_ids))


class _Fail(Exception):
    def __init__(self, diag):
        super().__init__(str(diag))
        self.diag = diag


_SHAPES = {"tensor": Tensor, "lolli": Lolli, "plus": Plus, "with": With}


class _Elab:
    def __init__(self, mode):
        self.mode = mode
        self.subst = {}
        self.discardable = set()

    # -- unification

    def resolve(self, t):
        while isinstance(t, Meta) and t in self.subst:
            t = self.subst[t]
        return t

    def occurs(self, m, t):
        t = self.resolve(t)
        if t == m:
            return True
        return any(self.occurs(m, s) for s in _parts(t))

    def unify(self, a, b):
        a, b = self.resolve(a), self.resolve(b)
        if a == b:
            return True
        if isinstance(a, Meta):
            if self.occurs(a, b):
                return False
            self.subst[a] = b
            return True
        if isinstance(b, Meta):
            return self.unify(b, a)
        if type(a) is not type(b):
            return False
        return all(self.unify(x, y) for x, y in zip(_parts(a), _parts(b)))

    def zonk(self, t):
        t = self.resolve(t)
        if isinstance(t, Meta):
            self.subst[t] = ONE
            return ONE
        match t:
            case One():
                return t
            case Bang(a):
                return Bang(self.zonk(a))
        return type(t)(*(self.zonk(s) for s in _parts(t)))

    def fail(self, kind, chan, pos, text, count=None):
        raise _Fail(Diagnostic(kind, chan, tuple(pos), text, count))

    def expect(self, t, shape, chan, pos, what):
        """Force ``t`` into ``shape``; returns its components."""
        t = self.resolve(t)
        if isinstance(t, Meta) and t in self.discardable and shape != "bang":
            self.fail("unused-linear", chan, pos, f"{chan} is discarded elsewhere, so it cannot be used at a {shape} type")
        if isinstance(t, Meta):
            new = Bang(_meta()) if shape == "bang" else _SHAPES[shape](_meta(), _meta())
            self.subst[t] = new
            t = new
        want = Bang if shape == "bang" else _SHAPES[shape]
        if not isinstance(t, want):
            self.fail("prefix-mismatch", chan, pos, f"{what} needs {chan} at a {shape} type, found {self.show(t)}")
        return _parts(t)

    def show(self, t):
        return str(self._display(t))

    def _display(self, t):
        t = self.resolve(t)
        if isinstance(t, (Meta, One)):
            return t
        if isinstance(t, Bang):
            return Bang(self._display(t.inner))
        return type(t)(*(self._display(s) for s in _parts(t)))

    # -- search

    def choose(self, options):
        """Try thunks in order, restoring the substitution between attempts."""
        best = None
        for opt in options:
            saved = dict(self.subst)
            try:
                return opt()
            except _Fail as e:
                self.subst = saved
                if best is None or len(e.diag.position) > len(best.position):
                    best = e.diag
        raise _Fail(best)

    def el(self, p, subj, goal, lin, aux, mux, pos=()):
        names, comps = pc.standard_form(p)
        fns = [pc.free_names(c) for c in comps]
        live = [n for n in names if any(n in f for f in fns)]
        if live or len(comps) > 1:
            return self.group(live, comps, subj, goal, lin, aux, mux, pos)
        if not comps:
            return self.leaf(subj, goal, lin, aux, mux, pos)
        return self.prefix(comps[0], subj, goal, lin, aux, mux, pos)

    def leaf(self, subj, goal, lin, aux, mux, pos):
        if not self.unify(goal, ONE):
            self.fail("no-rule", subj, pos, f"0 cannot offer {subj} at {self.show(goal)}")
        if self.mode == "dsll" and aux:
            c = sorted(aux)[0]
            self.fail("unused-linear", c, pos, f"auxiliary channel {c} is never used")
        wraps, extra = self.discharge(lin, pos)
        return self.wrap(wraps, OneR(subj, (), tuple({**mux, **extra}.items())))

    def discharge(self, lin, pos):
        """Consume unused linear channels: ``1`` by 1L, ``!A`` by !L# plus weakening.

        Channels whose type is still open are decided when the derivation is finished.
        """
        wraps, extra = [], {}
        for c, t in lin.items():
            t = self.resolve(t)
            match t:
                case Meta():
                    self.discardable.add(t)
                    wraps.append(("?", c, t))
                    extra[c] = _Open(t)
                case One():
                    wraps.append(("1", c, t))
                case Bang(a):
                    wraps.append(("#", c, t))
                    extra[c] = a
                case _:
                    self.fail("unused-linear", c, pos, f"linear channel {c} : {self.show(t)} is never used")
        return wraps, extra

    @staticmethod
    def wrap(wraps, d):
        for kind, c, t in reversed(wraps):
            match kind:
                case "1":
                    d = OneL(c, d)
                case "#":
                    d = BangLSharp(c, d)
                case _:
                    d = _Discard(c, t, d)
        return d

    # -- lifting of !-typed linear channels

    def lift(self, c, p, k, lin, aux, mux, pos):
        """Move ``c`` from the linear zone to an exponential one, then continue with ``k``."""
        (a,) = self.expect(lin[c], "bang", c, pos, "lifting")
        rest = {n: t for n, t in lin.items() if n != c}
        opts = []
        if self.mode == "dsll" and pc.occurrences(c, p) <= 1:
            opts.append(lambda: BangLBang(c, k(rest, {**aux, c: a}, mux)))
        opts.append(lambda: BangLSharp(c, k(rest, aux, {**mux, c: a})))
        return self.choose(opts)

    # -- components

    def prefix(self, q, subj, goal, lin, aux, mux, pos):
        c = q.chan
        if c == subj:
            return self.right(q, subj, goal, lin, aux, mux, pos)
        if c in lin:
            t = self.resolve(lin[c])
            again = lambda l2, a2, m2: self.prefix(q, subj, goal, l2, a2, m2, pos)
            if isinstance(t, Bang):
                return self.lift(c, q, again, lin, aux, mux, pos)
            if isinstance(t, Meta) and isinstance(q, pc.Output):
                return self.choose([
                    lambda: self.left(q, subj, goal, lin, aux, mux, pos),
                    lambda: self.lift(c, q, again, lin, aux, mux, pos),
                ])
            return self.left(q, subj, goal, lin, aux, mux, pos)
        if c in aux or c in mux:
            if not isinstance(q, pc.Output):
                self.fail("prefix-mismatch", c, pos, f"exponential channel {c} only admits spawning outputs")
            y, body = q.bound, q.body
            if c in aux:
                n = pc.occurrences(c, q)
                if n > 1:
                    self.fail("reused-auxiliary", c, pos, f"auxiliary channel {c} occurs {n} times", n)
                a = aux[c]
                rest = {n2: t for n2, t in aux.items() if n2 != c}
                return BBang(c, y, a, self.el(body, subj, goal, {**lin, y: a}, rest, mux, pos + (0,)))
            return BSharp(c, y, self.el(body, subj, goal, {**lin, y: mux[c]}, aux, mux, pos + (0,)))
        self.fail("no-rule", c, pos, f"channel {c} is not in the context")

    def right(self, q, subj, goal, lin, aux, mux, pos):
        match q:
            case pc.Input(_, y, body):
                a, b = self.expect(goal, "lolli", subj, pos, "input on the subject")
                return LolliR(subj, y, self.el(body, subj, b, {**lin, y: a}, aux, mux, pos + (0,)))
            case pc.Output(_, y, body):
                a, b = self.expect(goal, "tensor", subj, pos, "output on the subject")
                return self.binary(TensorR, subj, y, body, (y, a), (subj, b), {}, lin, aux, mux, pos)
            case pc.Case(_, l, r):
                a, b = self.expect(goal, "with", subj, pos, "case on the subject")
                return WithR(subj, self.el(l, subj, a, lin, aux, mux, pos + (0,)),
                             self.el(r, subj, b, lin, aux, mux, pos + (1,)))
            case pc.SelectLeft(_, body):
                a, b = self.expect(goal, "plus", subj, pos, "left selection on the subject")
                return PlusR1(subj, b, self.el(body, subj, a, lin, aux, mux, pos + (0,)))
            case pc.SelectRight(_, body):
                a, b = self.expect(goal, "plus", subj, pos, "right selection on the subject")
                return PlusR2(subj, a, self.el(body, subj, b, lin, aux, mux, pos + (0,)))
            case pc.ReplInput(_, y, body):
                return self.server(q, subj, goal, lin, aux, mux, pos)
        raise TypeError(q)

    def server(self, q, subj, goal, lin, aux, mux, pos):
        (a,) = self.expect(goal, "bang", subj, pos, "replicated input on the subject")
        y, body = q.bound, q.body
        fn = pc.free_names(q)
        if aux:
            c = sorted(aux)[0]
            self.fail("server-body-context", c, pos, f"!R needs an empty auxiliary zone, {c} remains")
        wraps, extra = self.discharge({c: t for c, t in lin.items() if c not in fn}, pos)
        used = {c: t for c, t in lin.items() if c in fn}
        inner = {}
        for c, t in used.items():
            t = self.resolve(t)
            if isinstance(t, Meta):
                t = Bang(_meta())
                self.unify(lin[c], t)
            if not isinstance(t, Bang):
                self.fail("server-body-context", c, pos, f"server body uses linear channel {c} : {self.show(t)}")
            inner[c] = t.inner
        declared = {**mux, **extra}
        if self.mode == "dsll":
            s = self.el(body, y, a, {}, inner, {}, pos + (0,))
            return self.wrap(wraps, BangR(subj, y, tuple(inner), s, tuple(declared.items())))
        declared.update(inner)
        s = self.el(body, y, a, {}, {}, declared, pos + (0,))
        d = BangR(subj, y, (), s, tuple(declared.items()))
        return self.wrap(wraps + [("#", c, None) for c in inner], d)

    def left(self, q, subj, goal, lin, aux, mux, pos):
        c = q.chan
        rest = {n: t for n, t in lin.items() if n != c}
        match q:
            case pc.Input(_, y, body):
                a, b = self.expect(lin[c], "tensor", c, pos, "input on a context channel")
                return TensorL(c, y, self.el(body, subj, goal, {**rest, y: a, c: b}, aux, mux, pos + (0,)))
            case pc.Output(_, y, body):
                a, b = self.expect(lin[c], "lolli", c, pos, "output on a context channel")
                return self.binary(LolliL, c, y, body, (y, a), (subj, goal), {c: b}, rest, aux, mux, pos)
            case pc.Case(_, l, r):
                a, b = self.expect(lin[c], "plus", c, pos, "case on a context channel")
                return PlusL(c, self.el(l, subj, goal, {**rest, c: a}, aux, mux, pos + (0,)),
                             self.el(r, subj, goal, {**rest, c: b}, aux, mux, pos + (1,)))
            case pc.SelectLeft(_, body):
                a, b = self.expect(lin[c], "with", c, pos, "left selection on a context channel")
                return WithL1(c, b, self.el(body, subj, goal, {**rest, c: a}, aux, mux, pos + (0,)))
            case pc.SelectRight(_, body):
                a, b = self.expect(lin[c], "with", c, pos, "right selection on a context channel")
                return WithL2(c, a, self.el(body, subj, goal, {**rest, c: b}, aux, mux, pos + (0,)))
            case pc.ReplInput():
                self.fail("prefix-mismatch", c, pos, f"replicated input on context channel {c}")
        raise TypeError(q)

    def binary(self, node, chan, y, body, fgoal, ggoal, gextra, lin, aux, mux, pos):
        """Split the continuation of an output into the sent channel's provider and the rest."""
        names, comps = pc.standard_form(body)
        clusters = _clusters(names, comps)
        keep = set(gextra) | {ggoal[0]}
        fpart, gpart = [], []
        for cl in clusters:
            fn = set().union(*(pc.free_names(c) for c in cl[1]))
            (fpart if y in fn else gpart).append(cl)
        fproc, gproc = _assemble(fpart), _assemble(gpart)
        ffn = pc.free_names(fproc)
        for k in keep:
            if k in ffn:
                self.fail("unsplittable", k, pos, f"the provider of {y} also uses {k}")
        lf, lg = _split(lin, ffn)
        af, ag = _split(aux, ffn)
        self.check_aux(af, pc.free_names(gproc), body, pos)
        f = self.el(fproc, y, fgoal[1], lf, af, mux, pos + (0,))
        g = self.el(gproc, ggoal[0], ggoal[1], {**lg, **gextra}, ag, mux, pos + (1,))
        return node(chan, y, f, g)

    def check_aux(self, used, other_fn, whole, pos):
        for c in used:
            if c in other_fn:
                n = pc.occurrences(c, whole)
                self.fail("reused-auxiliary", c, pos, f"auxiliary channel {c} occurs {n} times", n)

    # -- restricted groups

    def group(self, names, comps, subj, goal, lin, aux, mux, pos):
        fns = [pc.free_names(c) for c in comps]
        whole = pc.par(*comps)
        # !-typed linear channels needed by a server or by several components are lifted first
        for c, t in lin.items():
            users = [i for i, f in enumerate(fns) if c in f]
            in_server = any(isinstance(comps[i], pc.ReplInput) and comps[i].chan in names for i in users)
            if len(users) > 1 or in_server:
                if not isinstance(self.resolve(t), (Bang, Meta)):
                    self.fail("unsplittable", c, pos, f"linear channel {c} is shared by several components")
                k = lambda l2, a2, m2: self.group(names, comps, subj, goal, l2, a2, m2, pos)
                return self.lift(c, whole, k, lin, aux, mux, pos)
        servers = [i for i, q in enumerate(comps) if isinstance(q, pc.ReplInput) and q.chan in names]
        for i in servers:
            q = comps[i]
            inner = fns[i] - {q.chan}
            if q.chan in pc.free_names(q.body) or not (inner & set(names)):
                return self.peel_server(i, names, comps, subj, goal, lin, aux, mux, pos)
        if servers:
            q = comps[servers[0]]
            self.fail("unsplittable", q.chan, pos, "servers depend on each other cyclically")
        return self.peel_linear(names, comps, fns, subj, goal, lin, aux, mux, pos)

    def peel_server(self, i, names, comps, subj, goal, lin, aux, mux, pos):
        q = comps[i]
        x, y, body = q.chan, q.bound, q.body
        spos = pos + (i,)
        if x in pc.free_names(body):
            self.fail("server-body-context", x, spos, f"server on {x} uses its own channel")
        rest = pc.restrict([n for n in names if n != x], pc.par(*comps[:i], *comps[i + 1:]))
        needs = pc.free_names(body) - {y}
        for c in needs:
            if c in lin:
                self.fail("server-body-context", c, spos, f"server body uses linear channel {c}")
        a = _meta()

        def bang():
            f = self.el(body, y, a, {}, {c: aux[c] for c in needs}, {}, spos + (0,))
            ag = {c: t for c, t in aux.items() if c not in needs}
            g = self.el(rest, subj, goal, lin, {**ag, x: a}, mux, pos)
            return CutBang(x, a, f, g)

        def sharp():
            if self.mode == "dsll":
                f = self.el(body, y, a, {}, {c: mux[c] for c in needs}, {}, spos + (0,))
            else:
                f = self.el(body, y, a, {}, {}, dict(mux), spos + (0,))
            g = self.el(rest, subj, goal, lin, aux, {**mux, x: a}, pos)
            return CutSharp(x, a, f, g)

        opts = []
        if self.mode == "dsll" and needs <= aux.keys() and pc.occurrences(x, rest) <= 1:
            opts.append(bang)
        if needs <= mux.keys():
            opts.append(sharp)
        if not opts:
            bad = sorted(needs - (aux.keys() if self.mode == "dsll" else set()) - mux.keys())
            c = bad[0] if bad else sorted(needs)[0] if needs else x
            self.fail("server-body-context", c, spos,
                      f"server body on {x} needs resources from a single exponential zone")
        return self.choose(opts)

    def peel_linear(self, names, comps, fns, subj, goal, lin, aux, mux, pos):
        clusters = _clusters(names, comps)
        opts = []
        if len(clusters) == 1:
            roots = [i for i, f in enumerate(fns) if subj in f]
            if len(roots) > 1:
                self.fail("unsplittable", subj, pos, "several components use the subject")
            for r in roots or range(len(comps)):
                opts.append(lambda r=r: self.cut_root(r, names, comps, fns, subj, goal, lin, aux, mux, pos))
        # a cluster not reaching the subject is cut in on a name nobody else uses
        for ns, cs in clusters:
            if any(subj in pc.free_names(c) for c in cs):
                continue
            for n in ns:
                if sum(n in pc.free_names(c) for c in cs) == 1:
                    opts.append(lambda n=n, ns=ns, cs=cs: self.detach(n, ns, cs, names, comps, subj, goal, lin, aux, mux, pos))
            # or on a fresh channel of type 1 that neither side mentions
            if len(clusters) > 1:
                opts.append(lambda ns=ns, cs=cs: self.detach(pc.fresh_name("u"), ns, cs, names, comps, subj, goal, lin, aux, mux, pos))
        if not opts:
            self.fail("unsplittable", subj, pos, "restricted components are disconnected from the subject")
        return self.choose(opts)

    def detach(self, n, ns, cs, names, comps, subj, goal, lin, aux, mux, pos):
        fproc = pc.restrict([m for m in ns if m != n], pc.par(*cs))
        gproc = pc.restrict([m for m in names if m not in ns], pc.par(*(c for c in comps if c not in cs)))
        return self.cut_on(n, fproc, gproc, subj, goal, lin, aux, mux, pos, pos, pos)

    def cut_root(self, r, names, comps, fns, subj, goal, lin, aux, mux, pos):
        edges = [n for n in names if n in fns[r]]
        if not edges:
            self.fail("unsplittable", subj, pos + (r,), "restricted components are disconnected from the root")
        x = edges[0]
        # components reachable from the root without crossing x stay on the user side
        seen, todo = {r}, [r]
        while todo:
            i = todo.pop()
            for j, f in enumerate(fns):
                if j not in seen and any(n != x and n in f and n in fns[i] for n in names):
                    seen.add(j)
                    todo.append(j)
        fside = [i for i in range(len(comps)) if i not in seen]
        if not any(x in fns[i] for i in fside):
            self.fail("unsplittable", x, pos, f"{x} connects components in a cycle")
        fnames = [n for n in names if n != x and any(n in fns[i] for i in fside)]
        gnames = [n for n in names if n != x and n not in fnames]
        fproc = pc.restrict(fnames, pc.par(*(comps[i] for i in fside)))
        gproc = pc.restrict(gnames, pc.par(*(comps[i] for i in sorted(seen))))
        return self.cut_on(x, fproc, gproc, subj, goal, lin, aux, mux, pos, pos + (fside[0],), pos + (r,))

    def cut_on(self, x, fproc, gproc, subj, goal, lin, aux, mux, pos, fpos, gpos):
        ffn = pc.free_names(fproc)
        if subj in ffn:
            self.fail("unsplittable", subj, fpos, f"the provider of {x} also uses the subject")
        lf, lg = _split(lin, ffn)
        af, ag = _split(aux, ffn)
        self.check_aux(af, pc.free_names(gproc), pc.par(fproc, gproc), pos)
        a = _meta()
        f = self.el(fproc, x, a, lf, af, mux, fpos)
        g = self.el(gproc, subj, goal, {**lg, x: a}, ag, mux, gpos)
        return Cut(x, a, f, g)

    # -- finishing

    def finish(self, d):
        if isinstance(d, _Discard):
            t = self.resolve(d.type)
            sub = self.finish(d.sub)
            if isinstance(t, Bang):
                return BangLSharp(d.chan, sub)
            if not self.unify(t, ONE):
                self.fail("unused-linear", d.chan, (), f"linear channel {d.chan} : {self.show(t)} is never used")
            return OneL(d.chan, sub)
        fields = {}
        for name in ("type", "other"):
            if hasattr(d, name):
                fields[name] = self.zonk(getattr(d, name))
        for name in ("aux", "mux"):
            v = getattr(d, name, None)
            if isinstance(v, tuple):
                fields[name] = tuple(self.zonk_entries(v))
        if fields:
            d = dataclasses.replace(d, **fields)
        kids = children(d)
        if kids:
            d = with_children(d, [self.finish(k) for k in kids])
        return d

    def zonk_entries(self, entries):
        for c, t in entries:
            if isinstance(t, _Open):
                r = self.resolve(t.type)
                if not isinstance(r, Bang):
                    continue
                t = r.inner
            yield c, self.zonk(t)


@dataclass(frozen=True)
class _Open:
    """A weakened channel whose discharge rule is not known yet."""

    type: object


@dataclass(frozen=True)
class _Discard:
    chan: str
    type: object
    sub: object


def _parts(t):
    match t:
        case Tensor(a, b) | Lolli(a, b) | Plus(a, b) | With(a, b):
            return (a, b)
        case Bang(a):
            return (a,)
    return ()


def _split(zone, fn):
    return ({c: t for c, t in zone.items() if c in fn}, {c: t for c, t in zone.items() if c not in fn})


def _clusters(names, comps):
    """Group components connected through restricted names; returns (names, comps) pairs."""
    parent = list(range(len(comps)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    fns = [pc.free_names(c) for c in comps]
    for n in names:
        idx = [i for i, f in enumerate(fns) if n in f]
        for j in idx[1:]:
            parent[find(j)] = find(idx[0])
    groups = {}
    for i in range(len(comps)):
        groups.setdefault(find(i), []).append(i)
    out = []
    for idx in groups.values():
        cs = [comps[i] for i in idx]
        ns = [n for n in names if any(n in fns[i] for i in idx)]
        out.append((ns, cs))
    return out


def _assemble(clusters):
    names = [n for ns, _ in clusters for n in ns]
    comps = [c for _, cs in clusters for c in cs]
    return pc.restrict(names, pc.par(*comps))


# ----------------------------------------------------------------------------
# entry points


def elaborate(p: pc.Process, sig: Signature):
    """A derivation of ``sig``'s judgment for ``p``, or a list of diagnostics."""
    p = pc.canonical_form(p)
    expected = sig.judgment()
    ctx = expected.contexts
    if sig.mode == "dsll":
        for c in ctx.aux:
            n = pc.occurrences(c, p)
            if n > 1:
                return [Diagnostic("reused-auxiliary", c, (), f"auxiliary channel {c} occurs {n} times", n)]
    e = _Elab(sig.mode)
    try:
        d = e.el(p, expected.subject, expected.type, dict(ctx.lin), dict(ctx.aux), dict(ctx.mux))
        d = e.finish(d)
    except _Fail as err:
        return [err.diag]
    _postcondition(d, expected, sig.mode, p)
    return d


def _postcondition(d, expected, mode, p):
    try:
        got = check_derivation(d, mode)
    except CheckError as err:
        raise AssertionError(f"elaborated derivation does not check: {err}") from err
    assert got == expected, f"elaborated judgment {got} differs from {expected}"
    assert pc.congruent(erase(d), p), "elaborated derivation types a different process"


def elaborate_composition(parts, cutChannels):
    """Elaborate each part, then join consecutive results by a cut on the given channel."""
    if len(cutChannels) != len(parts) - 1:
        raise ValueError("need one cut channel between each pair of consecutive parts")
    mode = parts[0][1].mode if parts else "dsll"
    derivs = []
    for p, sig in parts:
        d = elaborate(p, sig)
        if isinstance(d, list):
            return d
        derivs.append(d)
    acc = derivs[0]
    for c, nxt in zip(cutChannels, derivs[1:]):
        ja, jn = check_derivation(acc, mode), check_derivation(nxt, mode)
        if ja.subject == c:
            prov, jp, user, ju = acc, ja, nxt, jn
        elif jn.subject == c:
            prov, jp, user, ju = nxt, jn, acc, ja
        else:
            return [Diagnostic("unsplittable", c, (), f"no part offers {c}")]
        r = _join(c, prov, jp, user, ju)
        if isinstance(r, Diagnostic):
            return [r]
        acc = r
    check_derivation(acc, mode)
    return acc


def _join(c, prov, jp, user, ju):
    ctx = ju.contexts
    if c in ctx.lin:
        if ctx.lin[c] != jp.type:
            return Diagnostic("unsplittable", c, (), f"{c} is offered at {jp.type} but used at {ctx.lin[c]}")
        return Cut(c, jp.type, prov, user)
    zone = CutBang if c in ctx.aux else CutSharp if c in ctx.mux else None
    if zone is None:
        return Diagnostic("unsplittable", c, (), f"{c} is not used by the other part")
    want = ctx.aux.get(c, ctx.mux.get(c))
    if not isinstance(prov, BangR) or prov.aux_chans or jp.type != Bang(want):
        return Diagnostic("unsplittable", c, (), f"{c} is offered at {jp.type} but used at {want} as a server")
    return zone(c, want, prov.sub, user)
