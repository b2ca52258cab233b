"""Virtual occurrences, duplicability and weight of derivations.

Duplicability at a ``!L`` node counts the occurrences of the lifted channel
itself in the premise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import calculus as pc
from .derivation import (
    BangLBang, BangLSharp, BangR, BBang, BSharp, Cut, CutBang, CutSharp, LolliL,
    LolliR, OneL, OneR, PlusL, PlusR1, PlusR2, TensorL, TensorR, WithL1, WithL2,
    WithR, check_derivation, erase, positions,
)

__all__ = [
    "MeasureError", "MeasureReport", "virtual_occurrences", "duplicability",
    "weight_n", "weight", "measure",
]


class MeasureError(ValueError):
    def __init__(self, reason, channel):
        super().__init__(f"{reason}: {channel}")
        self.reason = reason
        self.channel = channel


def _fo(x, d, cache):
    key = (x, id(d))
    if key in cache:
        return cache[key]
    match d:
        case OneR() | BangR():
            r = 0
        case BBang(c, y, _, s):
            r = 1 if c == x else (0 if y == x else _fo(x, s, cache))
        case BSharp(c, y, s):
            r = (1 if c == x else 0) + (0 if y == x else _fo(x, s, cache))
        case BangLSharp(c, s) | BangLBang(c, s) | OneL(c, s):
            r = 0 if c == x else _fo(x, s, cache)
        case TensorL(_, y, s) | LolliR(_, y, s):
            r = 0 if y == x else _fo(x, s, cache)
        case PlusR1(sub=s) | PlusR2(sub=s) | WithL1(sub=s) | WithL2(sub=s):
            r = _fo(x, s, cache)
        case TensorR(_, y, f, g) | LolliL(_, y, f, g):
            r = (0 if y == x else _fo(x, f, cache)) + _fo(x, g, cache)
        case WithR(_, f, g) | PlusL(_, f, g):
            r = max(_fo(x, f, cache), _fo(x, g, cache))
        case Cut(c, _, f, g):
            r = 0 if c == x else _fo(x, f, cache) + _fo(x, g, cache)
        case CutBang(c, _, f, g) | CutSharp(c, _, f, g):
            r = 0 if c == x else _fo(c, g, cache) * _fo(x, f, cache) + _fo(x, g, cache)
        case _:
            raise TypeError(f"not a derivation node: {d!r}")
    cache[key] = r
    return r


def virtual_occurrences(x: str, d, mode: str = "dsll") -> int:
    """Use count of the exponential channel ``x``, multiplied through exponential cuts."""
    j = check_derivation(d, mode)
    if x not in j.contexts.aux and x not in j.contexts.mux:
        raise MeasureError("unknown-channel", x)
    return _fo(x, d, {})


def _duplicability(d, cache):
    best = 1
    for _, n in positions(d):
        if isinstance(n, (BangLSharp, BangLBang)):
            best = max(best, _fo(n.chan, n.sub, cache))
    return best


def duplicability(d) -> int:
    return _duplicability(d, {})


def _weight(d, n, cache, wcache):
    k = id(d)
    if k in wcache:
        return wcache[k]

    def w(e):
        return _weight(e, n, cache, wcache)

    match d:
        case OneR():
            r = 0
        case OneL(sub=s) | BangLSharp(sub=s) | BangLBang(sub=s):
            r = w(s)
        case TensorL(sub=s) | LolliR(sub=s) | PlusR1(sub=s) | PlusR2(sub=s):
            r = 1 + w(s)
        case WithL1(sub=s) | WithL2(sub=s) | BSharp(sub=s) | BBang(sub=s):
            r = 1 + w(s)
        case TensorR(left=f, right=g) | LolliL(left=f, right=g):
            r = 1 + w(f) + w(g)
        case WithR(left=f, right=g) | PlusL(left=f, right=g):
            r = 1 + w(f) + w(g)
        case BangR(sub=s):
            r = n * (w(s) + 1)
        case Cut(left=f, right=g):
            r = w(f) + w(g)
        case CutBang(x, _, f, g):
            r = _fo(x, g, cache) * (w(f) + 1) + w(g)
        case CutSharp(x, _, f, g):
            r = _fo(x, g, cache) * w(f) + w(g)
        case _:
            raise TypeError(f"not a derivation node: {d!r}")
    wcache[k] = r
    return r


def weight_n(d, n: int) -> int:
    if n < 1:
        raise ValueError("weight parameter must be at least 1")
    return _weight(d, n, {}, {})


def weight(d) -> int:
    cache = {}
    return _weight(d, _duplicability(d, cache), cache, {})


@dataclass(frozen=True)
class MeasureReport:
    processSize: int
    boxDepth: int
    duplicability: int
    weight: int
    perChannelFO: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "processSize": self.processSize,
            "boxDepth": self.boxDepth,
            "duplicability": self.duplicability,
            "weight": self.weight,
            "perChannelFO": dict(self.perChannelFO),
        }


def measure(d, mode: str = "dsll") -> MeasureReport:
    j = check_derivation(d, mode)
    p = erase(d)
    cache = {}
    dup = _duplicability(d, cache)
    fo = {x: _fo(x, d, cache) for x in [*j.contexts.aux, *j.contexts.mux]}
    return MeasureReport(pc.size(p), pc.box_depth(p), dup, _weight(d, dup, cache, {}), fo)
