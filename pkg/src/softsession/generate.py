"""Random well-typed derivations, for property testing.

The generator is goal directed: given a subject, a goal type and the three
zones, it picks a rule whose conclusion matches and recurses on premises.
Fuel bounds the number of optional cuts and spawns; once it runs out, the
remaining linear channels are consumed by left rules and the goal is built
by right rules.
"""

from __future__ import annotations

import random

from .derivation import (
    BangLBang, BangLSharp, BangR, BBang, BSharp, Cut, CutBang, CutSharp, LolliL,
    LolliR, OneL, OneR, PlusL, PlusR1, PlusR2, TensorL, TensorR, WithL1, WithL2,
    WithR, barendregt, check_derivation,
)
from .types import ONE, Bang, Lolli, One, Plus, Tensor, With

__all__ = ["random_type", "random_derivation", "population"]


def random_type(rng: random.Random, depth: int = 2):
    if depth <= 0 or rng.random() < 0.35:
        return ONE
    k = rng.choice(["tensor", "lolli", "plus", "with", "bang", "bang"])
    if k == "bang":
        return Bang(random_type(rng, depth - 1))
    a, b = random_type(rng, depth - 1), random_type(rng, depth - 1)
    return {"tensor": Tensor, "lolli": Lolli, "plus": Plus, "with": With}[k](a, b)


class _Gen:
    def __init__(self, rng, max_depth):
        self.rng = rng
        self.k = 0
        self.max_depth = max_depth

    def name(self, base):
        self.k += 1
        return f"{base}{self.k}"

    def split(self, zone):
        a, b = {}, {}
        for k, v in zone.items():
            (a if self.rng.random() < 0.5 else b)[k] = v
        return a, b

    def gen(self, subj, goal, lin, aux, mux, fuel, prefer=None):
        rng = self.rng
        if fuel > 0:
            r = rng.random()
            if r < 0.18:
                return self.cut(subj, goal, lin, aux, mux, fuel)
            if r < 0.26:
                return self.cut_bang(subj, goal, lin, aux, mux, fuel)
            if r < 0.34:
                return self.cut_sharp(subj, goal, lin, aux, mux, fuel)
            if r < 0.42 and mux:
                x = rng.choice(sorted(mux))
                y = self.name("u")
                return BSharp(x, y, self.gen(subj, goal, {**lin, y: mux[x]}, aux, mux, fuel - 1, prefer=y))
            if r < 0.47 and aux:
                x = rng.choice(sorted(aux))
                y = self.name("u")
                rest = {k: v for k, v in aux.items() if k != x}
                return BBang(x, y, aux[x], self.gen(subj, goal, {**lin, y: aux[x]}, rest, mux, fuel - 1, prefer=y))
        # left rules first for non-exponential channels, or on request
        pending = [c for c, t in lin.items() if not isinstance(t, Bang)]
        if prefer in lin and rng.random() < 0.6:
            return self.left(prefer, subj, goal, lin, aux, mux, fuel)
        if pending and (fuel <= 0 or isinstance(goal, Bang) or rng.random() < 0.5):
            return self.left(rng.choice(pending), subj, goal, lin, aux, mux, fuel)
        if lin and not isinstance(goal, Bang):
            return self.left(rng.choice(sorted(lin)), subj, goal, lin, aux, mux, fuel)
        if isinstance(goal, Bang) and aux:
            x = rng.choice(sorted(aux))
            y = self.name("u")
            rest = {k: v for k, v in aux.items() if k != x}
            return BBang(x, y, aux[x], self.gen(subj, goal, {**lin, y: aux[x]}, rest, mux, fuel - 1, prefer=y))
        return self.right(subj, goal, lin, aux, mux, fuel)

    def left(self, c, subj, goal, lin, aux, mux, fuel):
        rng = self.rng
        t = lin[c]
        rest = {k: v for k, v in lin.items() if k != c}
        match t:
            case One():
                return OneL(c, self.gen(subj, goal, rest, aux, mux, fuel))
            case Tensor(a, b):
                y = self.name("t")
                return TensorL(c, y, self.gen(subj, goal, {**rest, y: a, c: b}, aux, mux, fuel - 1))
            case Lolli(a, b):
                y = self.name("l")
                l1, l2 = self.split(rest)
                a1, a2 = self.split(aux)
                f = self.gen(y, a, l1, a1, mux, fuel // 2)
                g = self.gen(subj, goal, {**l2, c: b}, a2, mux, fuel // 2, prefer=c)
                return LolliL(c, y, f, g)
            case Plus(a, b):
                f = self.gen(subj, goal, {**rest, c: a}, aux, mux, fuel // 2, prefer=c)
                g = self.gen(subj, goal, {**rest, c: b}, aux, mux, fuel // 2, prefer=c)
                return PlusL(c, f, g)
            case With(a, b):
                if rng.random() < 0.5:
                    return WithL1(c, b, self.gen(subj, goal, {**rest, c: a}, aux, mux, fuel - 1, prefer=c))
                return WithL2(c, a, self.gen(subj, goal, {**rest, c: b}, aux, mux, fuel - 1, prefer=c))
            case Bang(a):
                if rng.random() < 0.5:
                    return BangLBang(c, self.gen(subj, goal, rest, {**aux, c: a}, mux, fuel))
                return BangLSharp(c, self.gen(subj, goal, rest, aux, {**mux, c: a}, fuel))
        raise AssertionError(t)

    def declared(self, mux):
        return tuple(mux.items())

    def right(self, subj, goal, lin, aux, mux, fuel):
        rng = self.rng
        match goal:
            case One():
                assert not lin
                return OneR(subj, tuple(aux.items()), self.declared(mux))
            case Tensor(a, b):
                y = self.name("t")
                l1, l2 = self.split(lin)
                a1, a2 = self.split(aux)
                return TensorR(subj, y, self.gen(y, a, l1, a1, mux, fuel // 2), self.gen(subj, b, l2, a2, mux, fuel // 2))
            case Lolli(a, b):
                y = self.name("l")
                return LolliR(subj, y, self.gen(subj, b, {**lin, y: a}, aux, mux, fuel - 1, prefer=y))
            case Plus(a, b):
                if rng.random() < 0.5:
                    return PlusR1(subj, b, self.gen(subj, a, lin, aux, mux, fuel - 1))
                return PlusR2(subj, a, self.gen(subj, b, lin, aux, mux, fuel - 1))
            case With(a, b):
                return WithR(subj, self.gen(subj, a, lin, aux, mux, fuel // 2), self.gen(subj, b, lin, aux, mux, fuel // 2))
            case Bang(a):
                assert not aux and all(isinstance(t, Bang) for t in lin.values())
                y = self.name("s")
                body = self.gen(y, a, {}, {c: t.inner for c, t in lin.items()}, {}, fuel - 1)
                return BangR(subj, y, tuple(lin), body, self.declared(mux))
        raise AssertionError(goal)

    def cut(self, subj, goal, lin, aux, mux, fuel):
        x = self.name("x")
        b = random_type(self.rng, self.max_depth)
        l1, l2 = self.split(lin)
        a1, a2 = self.split(aux)
        f = self.gen(x, b, l1, a1, mux, fuel // 2)
        g = self.gen(subj, goal, {**l2, x: b}, a2, mux, fuel // 2, prefer=x)
        return Cut(x, b, f, g)

    def cut_bang(self, subj, goal, lin, aux, mux, fuel):
        x = self.name("x")
        b = random_type(self.rng, self.max_depth)
        a1, a2 = self.split(aux)
        f = self.gen(self.name("s"), b, {}, a1, {}, fuel // 2)
        return CutBang(x, b, f, self.gen(subj, goal, lin, {**a2, x: b}, mux, fuel // 2))

    def cut_sharp(self, subj, goal, lin, aux, mux, fuel):
        x = self.name("x")
        b = random_type(self.rng, self.max_depth)
        used = {k: v for k, v in mux.items() if self.rng.random() < 0.4}
        f = self.gen(self.name("s"), b, {}, used, {}, fuel // 2)
        return CutSharp(x, b, f, self.gen(subj, goal, lin, aux, {**mux, x: b}, fuel // 2, prefer=None))


def random_derivation(rng: random.Random, fuel: int = 8, max_depth: int = 2, closed: bool = False):
    """A random derivation that passes ``check_derivation``."""
    g = _Gen(rng, max_depth)
    goal = random_type(rng, max_depth)
    lin, aux, mux = {}, {}, {}
    if not closed:
        for _ in range(rng.randint(0, 2)):
            lin[g.name("i")] = random_type(rng, max_depth)
        for _ in range(rng.randint(0, 1)):
            mux[g.name("m")] = random_type(rng, max_depth - 1)
        for _ in range(rng.randint(0, 1)):
            aux[g.name("a")] = random_type(rng, max_depth - 1)
    d = g.gen(g.name("z"), goal, lin, aux, mux, fuel)
    d = barendregt(d)
    check_derivation(d)
    return d


def population(count: int, seed: int = 0, fuel: int = 8, max_depth: int = 2, max_nodes: int = 400):
    """``count`` random derivations with bounded node count."""
    from .derivation import node_count

    rng = random.Random(seed)
    out = []
    while len(out) < count:
        d = random_derivation(rng, fuel, max_depth, closed=rng.random() < 0.5)
        if node_count(d) <= max_nodes:
            out.append(d)
    return out
