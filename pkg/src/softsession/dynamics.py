"""Rewriting of derivations: computational steps, box opening, commuting conversions.

``subject_reduce`` follows one process reduction at the level of proofs: the
cut binding the redex channel is pushed towards the two communicating rules
by conversions, boxes are opened, and the principal step fires.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import calculus as pc
from .calculus import fresh_name
from .derivation import (
    BangLBang, BangLSharp, BangR, BBang, BSharp, CheckError, Cut, CutBang, CutSharp,
    LolliL, LolliR, OneL, OneR, PlusL, PlusR1, PlusR2, TensorL, TensorR, WithL1,
    WithL2, WithR, barendregt, bound_names, check_derivation, derivation_alpha_eq,
    children, erase, with_children, is_barendregt, lift, node_count, positions, rename, replace_at,
    strip_mux, subject_of, subterm, weaken,
)
from .types import Bang

__all__ = [
    "RewriteStep", "NoWitness", "comp_steps", "shift_steps", "equiv_steps",
    "subject_reduce", "rewrite_to_normal", "RewriteResult",
]

_XCUTS = (CutBang, CutSharp)
_UNARY_LEFT = (OneL, BangLBang, BangLSharp)


@dataclass(frozen=True)
class RewriteStep:
    relation: str  # comp | shift | equiv
    rule: str
    position: tuple
    result: object


class NoWitness(RuntimeError):
    """The subject-reduction driver failed: a kernel bug, never a user error."""


def _judge(d):
    try:
        return check_derivation(d)
    except CheckError:
        return None


def _exp(j):
    return {**j.contexts.aux, **j.contexts.mux}


def _uses(d, x):
    """Does ``x`` occur free in the process typed by ``d``?"""
    return x in pc.free_names(erase(d))


def _server_copy(f):
    """A fresh copy of a server body, with a fresh subject."""
    g = barendregt(f)
    s = subject_of(g)
    return rename(g, {s: fresh_name(s.split("#", 1)[0])})


def _restore(original, result):
    """Weaken ``result`` so that no exponential channel of ``original`` is lost."""
    jo, jr = _judge(original), _judge(result)
    if jo is None or jr is None:
        return result
    have = _exp(jr)
    missing = {k: t for k, t in _exp(jo).items() if k not in have}
    return weaken(result, missing) if missing else result


# ----------------------------------------------------------------------------
# computational steps


def _comp(n):
    """The principal step at ``n``, as ``(rule, result)``, or None."""
    match n:
        case Cut(x, _, TensorR(x1, y, f, g), TensorL(x2, y2, h)) if x1 == x2 == x:
            a = check_derivation(f).type
            return "tensor", Cut(y, a, f, Cut(x, n.type.right, g, rename(h, {y2: y})))
        case Cut(x, _, LolliR(x1, y, f), LolliL(x2, y2, g, h)) if x1 == x2 == x:
            return "lolli", Cut(x, n.type.right, Cut(y, n.type.left, rename(g, {y2: y}), f), h)
        case Cut(x, _, WithR(x1, f, _), WithL1(x2, _, h)) if x1 == x2 == x:
            return "with1", Cut(x, n.type.left, f, h)
        case Cut(x, _, WithR(x1, _, g), WithL2(x2, _, h)) if x1 == x2 == x:
            return "with2", Cut(x, n.type.right, g, h)
        case Cut(x, _, PlusR1(x1, _, f), PlusL(x2, h, _)) if x1 == x2 == x:
            return "plus1", Cut(x, n.type.left, f, h)
        case Cut(x, _, PlusR2(x1, _, f), PlusL(x2, _, h)) if x1 == x2 == x:
            return "plus2", Cut(x, n.type.right, f, h)
        case CutBang(x, a, f, BBang(x2, y, _, g)) if x2 == x:
            copy = rename(barendregt(f), {subject_of(f): y})
            return "spawn!", Cut(y, a, lift(copy), CutSharp(x, a, f, lift(g)))
        case CutSharp(x, a, f, BSharp(x2, y, g)) if x2 == x:
            copy = rename(barendregt(f), {subject_of(f): y})
            return "spawn#", Cut(y, a, lift(copy), CutSharp(x, a, f, g))
    return None


def _shift(n):
    match n:
        case Cut(x, Bang(a), BangR(x1, _, chans, f, _), BangLBang(x2, g)) if x1 == x2 == x:
            out = CutBang(x, a, f, g)
            for c in reversed(chans):
                out = BangLBang(c, out)
            return "box!", out
        case Cut(x, Bang(a), BangR(x1, _, chans, f, _), BangLSharp(x2, g)) if x1 == x2 == x:
            out = CutSharp(x, a, f, g)
            for c in reversed(chans):
                out = BangLSharp(c, out)
            return "box#", out
        case Cut(x, _, OneR(x1, aux, _), OneL(x2, h)) if x1 == x2 == x and not aux:
            return "unit", h
    return None


def _plug(d, path, new):
    """Replace the subterm at ``path``, re-zoning enclosing rules.

    A spawn moves auxiliary channels into the multiplexor zone; an enclosing
    ``cut!`` or ``!L!`` on such a channel becomes ``cut#`` or ``!L#``.
    """
    cur = new
    for i in reversed(range(len(path))):
        anc = subterm(d, path[:i])
        kids = list(children(anc))
        kids[path[i]] = cur
        anc = with_children(anc, kids)
        match anc:
            case CutBang(w, a, f, g) if path[i] == 1:
                j = _judge(g)
                if j is not None and w in j.contexts.mux:
                    anc = CutSharp(w, a, f, g)
            case BangLBang(w, g):
                j = _judge(g)
                if j is not None and w in j.contexts.mux:
                    anc = BangLSharp(w, g)
        cur = anc
    return cur


def _unguarded(d, path=()):
    """Positions not inside a server body (a ``!R`` premise or a server of an exponential cut)."""
    yield path, d
    match d:
        case BangR():
            return
        case CutBang(right=g) | CutSharp(right=g):
            yield from _unguarded(g, path + (1,))
            return
    for i, c in enumerate(children(d)):
        yield from _unguarded(c, path + (i,))


def _steps(d, fn, relation, where=positions):
    out = []
    for path, n in where(d):
        r = fn(n)
        if r is None:
            continue
        rule, new = r
        e = _plug(d, path, _restore(n, new))
        if _judge(e) is not None:
            out.append(RewriteStep(relation, rule, path, e))
    return out


def comp_steps(d):
    """Every principal cut step outside server bodies whose contractum fits its context.

    Server bodies are left alone: a server nobody calls has weight zero, so a
    step inside it could not decrease the weight.
    """
    return _steps(d, _comp, "comp", _unguarded)


def shift_steps(d):
    return _steps(d, _shift, "shift")


# ----------------------------------------------------------------------------
# commuting conversions


def _dup_cut(x, a, f, y, b, g, h, keep):
    """``cut#(F, x.cut(G, y.H))`` as two servers; side ``keep`` retains ``x``."""
    x2 = fresh_name(x.split("#", 1)[0])
    f2 = _server_copy(f)
    if keep == "right":
        return Cut(y, b, CutSharp(x2, a, f2, rename(g, {x: x2})), CutSharp(x, a, f, h))
    return Cut(y, b, CutSharp(x, a, f, g), CutSharp(x2, a, f2, rename(h, {x: x2})))


def _dup_xcut(x, a, f, kind, y, b, g, h):
    """``cut#(F, x.cutY(G, y.H))`` with ``x`` in both: a fresh server for ``G``."""
    x2 = fresh_name(x.split("#", 1)[0])
    f2 = _server_copy(f)
    return CutSharp(x2, a, f2, kind(y, b, rename(g, {x: x2}), CutSharp(x, a, f, h)))


def _same_server(f, g):
    return derivation_alpha_eq(f, rename(g, {subject_of(g): subject_of(f)}))


def _equiv_candidates(n):
    out = []
    # cut against cut
    if isinstance(n, Cut) and isinstance(n.right, Cut):
        x, a, f, (y, b, g, h) = n.chan, n.type, n.left, _parts(n.right)
        out.append(("assoc", Cut(y, b, Cut(x, a, f, g), h)))
        out.append(("exchange", Cut(y, b, g, Cut(x, a, f, h))))
    if isinstance(n, Cut) and isinstance(n.left, Cut):
        y, b, (x, a, f, g), h = n.chan, n.type, _parts(n.left), n.right
        out.append(("assoc", Cut(x, a, f, Cut(y, b, g, h))))
    # cut against an exponential cut
    if isinstance(n, Cut) and isinstance(n.right, _XCUTS):
        x, a, f, (y, b, g, h) = n.chan, n.type, n.left, _parts(n.right)
        out.append(("cut/cutx", type(n.right)(y, b, g, Cut(x, a, f, h))))
    if isinstance(n, Cut) and isinstance(n.left, _XCUTS):
        x, a, (y, b, g, f), h = n.chan, n.type, _parts(n.left), n.right
        out.append(("cut/cutx", type(n.left)(y, b, g, Cut(x, a, f, h))))
    if isinstance(n, _XCUTS) and isinstance(n.right, Cut):
        kind, (y, b, g), (x, a, f, h) = type(n), _parts(n)[:3], _parts(n.right)
        out.append(("cut/cutx", Cut(x, a, strip_mux(f, y) if not _uses(f, y) else f, kind(y, b, g, h))))
        out.append(("cut/cutx", Cut(x, a, kind(y, b, g, f), strip_mux(h, y) if not _uses(h, y) else h)))
        if kind is CutSharp and _uses(f, y) and _uses(h, y):
            out.append(("dup", _dup_cut(y, b, g, x, a, f, h, "right")))
    if isinstance(n, Cut) and isinstance(n.left, CutSharp) and isinstance(n.right, CutSharp):
        y, b = n.chan, n.type
        x, a, f, g = _parts(n.left)
        x2, a2, f2, h = _parts(n.right)
        if a == a2 and _same_server(f, f2):
            out.append(("dup", CutSharp(x, a, f, Cut(y, b, g, rename(h, {x2: x})))))
    # exponential cut against exponential cut
    if isinstance(n, _XCUTS) and isinstance(n.right, _XCUTS):
        kx, (x, a, f, _) = type(n), _parts(n)
        ky, (y, b, g, h) = type(n.right), _parts(n.right)
        gg = strip_mux(g, x) if not _uses(g, x) else g
        out.append(("swap", ky(y, b, gg, kx(x, a, f, h))))
        if kx is CutBang:
            out.append(("cut!-in", ky(y, b, CutBang(x, a, f, g), h)))
        if kx is CutSharp and ky is CutSharp and _uses(g, x) and _uses(h, x):
            out.append(("dup", _dup_xcut(x, a, f, ky, y, b, g, h)))
    if isinstance(n, _XCUTS) and isinstance(n.left, CutBang):
        ky, (y, b, _, h) = type(n), _parts(n)
        x, a, f, g = _parts(n.left)
        out.append(("cut!-in", CutBang(x, a, f, ky(y, b, g, h))))
    if isinstance(n, CutSharp) and isinstance(n.right, CutSharp) and isinstance(n.right.right, CutSharp):
        x2, a2, f2, inner = _parts(n)
        y, b, g, (x, a, f, h) = *_parts(inner)[:3], _parts(inner.right)
        if a == a2 and _same_server(f, f2):
            out.append(("dup", CutSharp(x, a, f, CutSharp(y, b, rename(g, {x2: x}), h))))
    # cuts commute with 1L and !L
    if isinstance(n, (Cut, *_XCUTS)) and isinstance(n.right, _UNARY_LEFT) and n.right.chan != n.chan:
        u = n.right
        out.append(("commute", type(u)(u.chan, type(n)(n.chan, n.type, n.left, u.sub))))
    if isinstance(n, Cut) and isinstance(n.left, _UNARY_LEFT):
        u = n.left
        out.append(("commute", type(u)(u.chan, Cut(n.chan, n.type, u.sub, n.right))))
    if isinstance(n, _UNARY_LEFT) and isinstance(n.sub, (Cut, *_XCUTS)):
        c = n.sub
        u = type(n)
        out.append(("commute", type(c)(c.chan, c.type, c.left, u(n.chan, c.right))))
        if isinstance(c, Cut):
            out.append(("commute", Cut(c.chan, c.type, u(n.chan, c.left), c.right)))
    return out


def _parts(c):
    return c.chan, c.type, c.left, c.right


def equiv_steps(d):
    """One-step conversions in both directions that preserve the judgment."""
    out = []
    for path, n in positions(d):
        cands = _equiv_candidates(n)
        if not cands:
            continue
        j = _judge(n)
        for rule, new in cands:
            if new != n and _judge(new) == j:
                out.append(RewriteStep("equiv", rule, path, replace_at(d, path, new)))
    return out


# ----------------------------------------------------------------------------
# subject reduction


def _binder_path(d, c):
    for path, n in positions(d):
        if isinstance(n, (Cut, *_XCUTS)) and n.chan == c:
            return path, n
    return None, None


def _contains_bound(d, y):
    return y in bound_names(d)


def _principal_right(f, c):
    """Is ``f``'s last rule a right rule on ``c``?"""
    return isinstance(f, (OneR, TensorR, LolliR, WithR, PlusR1, PlusR2, BangR)) and f.subject == c


def _principal_left(g, c):
    return isinstance(g, (OneL, TensorL, LolliL, PlusL, WithL1, WithL2, BangLBang, BangLSharp)) and g.chan == c


def _drive(k, c, target):
    """One step moving cut ``k`` on ``c`` towards its principal configuration."""
    if isinstance(k, Cut):
        x, a, f, g = _parts(k)
        match f:
            case Cut(y, b, f1, f2):
                return "equiv", "assoc", Cut(y, b, f1, Cut(x, a, f2, g))
            case CutBang(y, b, f1, f2) | CutSharp(y, b, f1, f2):
                return "equiv", "cut/cutx", type(f)(y, b, f1, Cut(x, a, f2, g))
            case OneL(z, s) | BangLBang(z, s) | BangLSharp(z, s):
                return "equiv", "commute", type(f)(z, Cut(x, a, s, g))
        if not _principal_right(f, x):
            return None
        match g:
            case Cut(y, b, g1, g2):
                if x in check_derivation(g1).contexts.lin:
                    return "equiv", "assoc", Cut(y, b, Cut(x, a, f, g1), g2)
                return "equiv", "exchange", Cut(y, b, g1, Cut(x, a, f, g2))
            case CutBang(y, b, g1, g2) | CutSharp(y, b, g1, g2):
                return "equiv", "cut/cutx", type(g)(y, b, g1, Cut(x, a, f, g2))
            case OneL(z, s) | BangLBang(z, s) | BangLSharp(z, s) if z != x:
                return "equiv", "commute", type(g)(z, Cut(x, a, f, s))
        if not _principal_left(g, x):
            return None
        r = _shift(k)
        if r is not None:
            return "shift", r[0], r[1]
        r = _comp(k)
        return None if r is None else ("comp", *r)

    kind, (x, a, f, g) = type(k), _parts(k)
    match g:
        case Cut(y, b, g1, g2):
            on_left = _contains_bound(g1, target)
            tside, oside = (g1, g2) if on_left else (g2, g1)
            if kind is CutSharp and _uses(oside, x):
                return "equiv", "dup", _dup_cut(x, a, f, y, b, g1, g2, "left" if on_left else "right")
            oside = strip_mux(oside, x)
            if on_left:
                return "equiv", "cut/cutx", Cut(y, b, kind(x, a, f, g1), oside)
            return "equiv", "cut/cutx", Cut(y, b, oside, kind(x, a, f, g2))
        case CutBang(y, b, g1, g2) | CutSharp(y, b, g1, g2):
            if _uses(g1, x):
                if kind is CutSharp and type(g) is CutSharp:
                    return "equiv", "dup", _dup_xcut(x, a, f, type(g), y, b, g1, g2)
                return None
            return "equiv", "swap", type(g)(y, b, strip_mux(g1, x), kind(x, a, f, g2))
        case OneL(z, s) | BangLBang(z, s) | BangLSharp(z, s):
            return "equiv", "commute", type(g)(z, kind(x, a, f, s))
        case BBang(z, y, _, _) | BSharp(z, y, _) if z == x and y == target:
            r = _comp(k)
            return None if r is None else ("comp", *r)
    return None


def subject_reduce(d, r, budget=None):
    """Follow the process reduction ``r`` of ``erase(d)`` on the derivation.

    Returns ``(e, path)`` where ``path`` is the list of rewrite steps, of the
    shape conversions/shifts, one computational step, and ``e`` types the
    reduct.  ``d`` must use distinct bound names (see ``barendregt``).
    """
    if not is_barendregt(d):
        raise ValueError("derivation must have distinct bound names; apply barendregt() first")
    p = erase(d)
    _, comps = pc.standard_form(p)
    try:
        sender = comps[r.position[0]]
    except IndexError:
        raise pc.StaleRedex(f"redex {r} does not match the erasure") from None
    expected = pc.reduce_step(p, r)
    target = sender.bound if isinstance(sender, pc.Output) else None
    c = r.channel
    if budget is None:
        budget = 4 * node_count(d) ** 2 + 64
    steps = []
    for _ in range(budget):
        path, k = _binder_path(d, c)
        if k is None:
            raise NoWitness(f"no cut binds the redex channel {c}")
        move = _drive(k, c, target)
        if move is None:
            raise NoWitness(f"stuck at {type(k).__name__} on {c}")
        relation, rule, new = move
        if relation != "equiv":
            d = _plug(d, path, _restore(k, new))
        else:
            d = replace_at(d, path, new)
        steps.append(RewriteStep(relation, rule, path, d))
        if relation == "comp":
            if _judge(d) is None:
                raise NoWitness(f"contractum of {rule} does not check")
            if not pc.congruent(pc.server_normal_form(erase(d)), pc.server_normal_form(expected)):
                raise NoWitness(f"contractum of {rule} does not type the reduct")
            return d, steps
    raise NoWitness(f"no witness within {budget} rewrite steps")


@dataclass(frozen=True)
class RewriteResult:
    final: object
    compCount: int
    exhausted: bool
    sizes: list = field(default_factory=list)


def rewrite_to_normal(d, budget: int) -> RewriteResult:
    """Drive ``d`` along the leftmost reduction of its erasure."""
    d = barendregt(d)
    comp = 0
    sizes = []
    while True:
        p = erase(d)
        if comp:
            sizes.append(pc.size(p))
        rs = pc.find_redexes(p)
        if not rs:
            return RewriteResult(d, comp, False, sizes)
        if comp >= budget:
            return RewriteResult(d, comp, True, sizes)
        d, _ = subject_reduce(d, rs[0])
        comp += 1
