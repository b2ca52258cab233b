"""Processes of the name-passing pi-calculus used by the type system.

Names are plain strings.  Every output is a bound output ``(nu y) x<y>.P``,
so ``Output`` carries its own binder.  Generated names contain ``#`` and
canonical binders start with ``%``; neither character is produced by the
concrete-syntax parser, so they never clash with source names.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Union

__all__ = [
    "Nil", "Par", "Restrict", "Input", "Output", "ReplInput",
    "SelectLeft", "SelectRight", "Case", "Process", "Redex", "TraceResult",
    "StaleRedex", "fresh_name", "free_names", "substitute", "alpha_eq",
    "canonical_form", "congruent", "size", "box_depth", "find_redexes",
    "reduce_step", "reduce_trace", "par", "restrict", "standard_form",
    "garbage_collect", "server_normal_form", "occurrences",
]

_counter = itertools.count(1)


def fresh_name(base: str = "n") -> str:
    """Return a name distinct from every source name and every earlier fresh name."""
    base = base.split("#", 1)[0].lstrip("%")
    if not base or not (base[0].isalpha() or base[0] == "_"):
        base = "n" + base
    return f"{base}#{next(_counter)}"


@dataclass(frozen=True, slots=True)
class Nil:
    def __str__(self):
        return "0"


@dataclass(frozen=True, slots=True)
class Par:
    left: "Process"
    right: "Process"

    def __str__(self):
        return f"{_atom(self.left, par_ok=True)} | {_atom(self.right, par_ok=True)}"


@dataclass(frozen=True, slots=True)
class Restrict:
    name: str
    body: "Process"

    def __str__(self):
        return f"new {self.name}. {_atom(self.body)}"


@dataclass(frozen=True, slots=True)
class Input:
    chan: str
    bound: str
    body: "Process"

    def __str__(self):
        return f"{self.chan}({self.bound}){_cont(self.body)}"


@dataclass(frozen=True, slots=True)
class Output:
    chan: str
    bound: str
    body: "Process"

    def __str__(self):
        return f"{self.chan}<{self.bound}>{_cont(self.body)}"


@dataclass(frozen=True, slots=True)
class ReplInput:
    chan: str
    bound: str
    body: "Process"

    def __str__(self):
        return f"!{self.chan}({self.bound}){_cont(self.body)}"


@dataclass(frozen=True, slots=True)
class SelectLeft:
    chan: str
    body: "Process"

    def __str__(self):
        return f"{self.chan}.inl{_cont(self.body, sep='; ')}"


@dataclass(frozen=True, slots=True)
class SelectRight:
    chan: str
    body: "Process"

    def __str__(self):
        return f"{self.chan}.inr{_cont(self.body, sep='; ')}"


@dataclass(frozen=True, slots=True)
class Case:
    chan: str
    left: "Process"
    right: "Process"

    def __str__(self):
        return f"{self.chan}.case({self.left}, {self.right})"


Process = Union[Nil, Par, Restrict, Input, Output, ReplInput, SelectLeft, SelectRight, Case]
_PREFIXES = (Input, Output, ReplInput)
_GUARDED = (Input, Output, ReplInput, SelectLeft, SelectRight, Case)
NIL = Nil()


def _atom(p, par_ok=False):
    if isinstance(p, Par) and not par_ok:
        return f"({p})"
    if isinstance(p, Restrict) and par_ok:
        return f"({p})"
    return str(p)


def _cont(body, sep=". "):
    if isinstance(body, Nil):
        return ""
    return sep + _atom(body)


def par(*ps: Process) -> Process:
    """Parallel composition as a balanced tree; the empty composition is 0.

    Balancing keeps the nesting logarithmic, so the thousands of components
    of a long trace do not exhaust the recursion limit.
    """
    ps = [p for p in ps if not isinstance(p, Nil)]
    if not ps:
        return NIL

    def build(lo, hi):
        if hi - lo == 1:
            return ps[lo]
        mid = (lo + hi + 1) // 2
        return Par(build(lo, mid), build(mid, hi))

    return build(0, len(ps))


def restrict(names, body: Process) -> Process:
    for n in reversed(list(names)):
        body = Restrict(n, body)
    return body


# ----------------------------------------------------------------------------
# names and substitution


@functools.lru_cache(maxsize=1 << 16)
def free_names(p: Process) -> frozenset:
    match p:
        case Nil():
            return frozenset()
        case Par(l, r):
            return free_names(l) | free_names(r)
        case Restrict(x, body):
            return free_names(body) - {x}
        case Input(c, y, body) | Output(c, y, body) | ReplInput(c, y, body):
            return (free_names(body) - {y}) | {c}
        case SelectLeft(c, body) | SelectRight(c, body):
            return free_names(body) | {c}
        case Case(c, l, r):
            return free_names(l) | free_names(r) | {c}
    raise TypeError(f"not a process: {p!r}")


def occurrences(x: str, p: Process) -> int:
    """Free occurrences of ``x``, counting the two branches of a case as one."""
    match p:
        case Nil():
            return 0
        case Par(l, r):
            return occurrences(x, l) + occurrences(x, r)
        case Restrict(y, body):
            return 0 if y == x else occurrences(x, body)
        case Input(c, y, body) | Output(c, y, body) | ReplInput(c, y, body):
            return (c == x) + (0 if y == x else occurrences(x, body))
        case SelectLeft(c, body) | SelectRight(c, body):
            return (c == x) + occurrences(x, body)
        case Case(c, l, r):
            return (c == x) + max(occurrences(x, l), occurrences(x, r))
    raise TypeError(f"not a process: {p!r}")


def _binder(y, body, new, old):
    """Push ``{new/old}`` under a binder for ``y``; returns the new binder and body."""
    if y == old:
        return y, body
    if y == new:
        y2 = fresh_name(y)
        body = substitute(body, y2, y)
        return y2, substitute(body, new, old)
    return y, substitute(body, new, old)


def substitute(p: Process, new: str, old: str) -> Process:
    """Capture-avoiding substitution ``p{new/old}``."""
    if new == old or old not in free_names(p):
        return p

    def s(c):
        return new if c == old else c

    match p:
        case Par(l, r):
            return Par(substitute(l, new, old), substitute(r, new, old))
        case Restrict(x, body):
            x, body = _binder(x, body, new, old)
            return Restrict(x, body)
        case Input(c, y, body):
            y, body = _binder(y, body, new, old)
            return Input(s(c), y, body)
        case Output(c, y, body):
            y, body = _binder(y, body, new, old)
            return Output(s(c), y, body)
        case ReplInput(c, y, body):
            y, body = _binder(y, body, new, old)
            return ReplInput(s(c), y, body)
        case SelectLeft(c, body):
            return SelectLeft(s(c), substitute(body, new, old))
        case SelectRight(c, body):
            return SelectRight(s(c), substitute(body, new, old))
        case Case(c, l, r):
            return Case(s(c), substitute(l, new, old), substitute(r, new, old))
    return p


# ----------------------------------------------------------------------------
# alpha-equivalence


def _key(p: Process, env: dict, level: int):
    """Sortable nested-tuple key with binders named by de Bruijn level."""
    match p:
        case Nil():
            return ("0",)
        case Par(l, r):
            return ("|", _key(l, env, level), _key(r, env, level))
        case Restrict(x, body):
            return ("v", _key(body, {**env, x: f"%{level}"}, level + 1))
        case Input(c, y, body):
            return ("i", env.get(c, c), _key(body, {**env, y: f"%{level}"}, level + 1))
        case Output(c, y, body):
            return ("o", env.get(c, c), _key(body, {**env, y: f"%{level}"}, level + 1))
        case ReplInput(c, y, body):
            return ("!", env.get(c, c), _key(body, {**env, y: f"%{level}"}, level + 1))
        case SelectLeft(c, body):
            return ("l", env.get(c, c), _key(body, env, level))
        case SelectRight(c, body):
            return ("r", env.get(c, c), _key(body, env, level))
        case Case(c, l, r):
            return ("c", env.get(c, c), _key(l, env, level), _key(r, env, level))
    raise TypeError(f"not a process: {p!r}")


def alpha_eq(p: Process, q: Process) -> bool:
    return _key(p, {}, 0) == _key(q, {}, 0)


# ----------------------------------------------------------------------------
# structural congruence


def standard_form(p: Process):
    """Pull every top-level restriction out: ``p == (nu names)(comps)``.

    ``comps`` are guarded processes (prefixes, selections, cases).  Restricted
    names are kept when they are already distinct and do not clash with free
    names; otherwise they are renamed fresh.
    """
    names: list = []
    comps: list = []
    taken = set(free_names(p))

    def walk(q):
        match q:
            case Nil():
                return
            case Par(l, r):
                walk(l)
                walk(r)
            case Restrict(x, body):
                if x in taken:
                    x2 = fresh_name(x)
                    body = substitute(body, x2, x)
                    x = x2
                taken.add(x)
                names.append(x)
                walk(body)
            case _:
                comps.append(q)

    walk(p)
    return names, comps


def _canon(p: Process, env: dict, level: int) -> Process:
    """Canonical representative with de Bruijn-level binder names."""
    fn = free_names(p)
    return _canon_cached(p, tuple(sorted((k, v) for k, v in env.items() if k in fn)), level)


@functools.lru_cache(maxsize=1 << 16)
def _canon_cached(p: Process, env_items: tuple, level: int) -> Process:
    env = dict(env_items)
    match p:
        case Input(c, y, body):
            return Input(env.get(c, c), f"%{level}", _canon(body, {**env, y: f"%{level}"}, level + 1))
        case Output(c, y, body):
            return Output(env.get(c, c), f"%{level}", _canon(body, {**env, y: f"%{level}"}, level + 1))
        case ReplInput(c, y, body):
            return ReplInput(env.get(c, c), f"%{level}", _canon(body, {**env, y: f"%{level}"}, level + 1))
        case SelectLeft(c, body):
            return SelectLeft(env.get(c, c), _canon(body, env, level))
        case SelectRight(c, body):
            return SelectRight(env.get(c, c), _canon(body, env, level))
        case Case(c, l, r):
            return Case(env.get(c, c), _canon(l, env, level), _canon(r, env, level))
    return _canon_layer(p, env, level)


_TIE_LIMIT = 5040


def _canon_layer(p: Process, env: dict, level: int) -> Process:
    names, comps = [], []

    def walk(q):
        match q:
            case Nil():
                return
            case Par(l, r):
                walk(l)
                walk(r)
            case Restrict(x, body):
                x2 = fresh_name(x)
                names.append(x2)
                walk(substitute(body, x2, x))
            case _:
                comps.append(q)

    walk(p)
    fns = [free_names(c) for c in comps]
    live = set().union(*fns) if fns else set()
    names = [n for n in names if n in live]
    if not comps:
        return NIL
    k = len(names)
    inner = level + k
    star = {**env, **{n: "*" for n in names}}
    base = [_key(_canon(c, star, inner), {}, 0) for c in comps]
    nameset = set(names)
    sig = {n: tuple(sorted(base[i] for i, f in enumerate(fns) if n in f)) for n in names}
    refined = [
        (base[i], tuple(sorted(sig[n] for n in fns[i] & nameset)))
        for i in range(len(comps))
    ]
    order = sorted(range(len(comps)), key=lambda i: refined[i])
    marked = {**env, **{n: f"*{n}" for n in names}}
    occurrences = {i: _free_order(_canon(comps[i], marked, inner)) for i in order}

    def attempt(seq):
        # restricted names are numbered by first occurrence along seq
        numbering: dict = {}
        for i in seq:
            for tok in occurrences[i]:
                if tok.startswith("*") and tok[1:] in nameset and tok[1:] not in numbering:
                    numbering[tok[1:]] = f"%{level + len(numbering)}"
        final_env = {**env, **numbering}
        finals = {i: _canon(comps[i], final_env, inner) for i in seq}
        key = tuple(sorted((refined[i], _key(finals[i], {}, 0)) for i in seq))
        return key, numbering, finals

    # components with equal keys are interchangeable, so any order among
    # them is legitimate; the smallest outcome is the canonical one
    blocks = [list(g) for _, g in itertools.groupby(order, key=lambda i: refined[i])]
    choices = 1
    for b in blocks:
        if any(n in nameset for i in b for n in fns[i]):
            choices *= math.factorial(len(b))
    if 1 < choices <= _TIE_LIMIT:
        perms = [
            itertools.permutations(b) if any(n in nameset for i in b for n in fns[i]) else [tuple(b)]
            for b in blocks
        ]
        best = min(
            (attempt([i for b in combo for i in b]) for combo in itertools.product(*perms)),
            key=lambda t: t[0],
        )
    else:
        best = attempt(order)
    _, numbering, finals = best
    order.sort(key=lambda i: (refined[i], _key(finals[i], {}, 0)))

    # regroup: one restriction block per connected group of restricted names
    parent = {n: n for n in numbering}

    def find(n):
        while parent[n] != n:
            parent[n] = parent[parent[n]]
            n = parent[n]
        return n

    for i in order:
        ns = [n for n in fns[i] if n in numbering]
        for a, b in zip(ns, ns[1:]):
            parent[find(a)] = find(b)
    pieces, groups, where = [], {}, {}
    for i in order:
        ns = [n for n in fns[i] if n in numbering]
        if not ns:
            pieces.append(("c", finals[i]))
            continue
        root = find(ns[0])
        if root not in groups:
            groups[root] = []
            pieces.append(("g", root))
        groups[root].append(finals[i])
    out = []
    for kind, item in pieces:
        if kind == "c":
            out.append(item)
        else:
            gnames = sorted((numbering[n] for n in numbering if find(n) == item), key=lambda s: int(s[1:]))
            out.append(restrict(gnames, par(*groups[item])))
    return par(*out)


def _free_order(p: Process) -> list:
    """Free names in left-to-right traversal order (with repetitions)."""
    out = []

    def walk(q, bound):
        match q:
            case Nil():
                return
            case Par(l, r):
                walk(l, bound)
                walk(r, bound)
            case Restrict(x, body):
                walk(body, bound | {x})
            case Input(c, y, body) | Output(c, y, body) | ReplInput(c, y, body):
                if c not in bound:
                    out.append(c)
                walk(body, bound | {y})
            case SelectLeft(c, body) | SelectRight(c, body):
                if c not in bound:
                    out.append(c)
                walk(body, bound)
            case Case(c, l, r):
                if c not in bound:
                    out.append(c)
                walk(l, bound)
                walk(r, bound)

    walk(p, frozenset())
    return out


def _uniquify(p: Process) -> Process:
    """Rename every binder to ``%k`` with ``k`` counting binders in traversal order."""
    counter = itertools.count()

    def go(q, env):
        match q:
            case Nil():
                return q
            case Par(l, r):
                return Par(go(l, env), go(r, env))
            case Restrict(x, body):
                x2 = f"%{next(counter)}"
                return Restrict(x2, go(body, {**env, x: x2}))
            case Input(c, y, body):
                y2 = f"%{next(counter)}"
                return Input(env.get(c, c), y2, go(body, {**env, y: y2}))
            case Output(c, y, body):
                y2 = f"%{next(counter)}"
                return Output(env.get(c, c), y2, go(body, {**env, y: y2}))
            case ReplInput(c, y, body):
                y2 = f"%{next(counter)}"
                return ReplInput(env.get(c, c), y2, go(body, {**env, y: y2}))
            case SelectLeft(c, body):
                return SelectLeft(env.get(c, c), go(body, env))
            case SelectRight(c, body):
                return SelectRight(env.get(c, c), go(body, env))
            case Case(c, l, r):
                return Case(env.get(c, c), go(l, env), go(r, env))

    return go(p, {})


def canonical_form(p: Process) -> Process:
    """Normal form modulo structural congruence.

    Drops ``0`` units and dead restrictions, flattens parallel compositions
    into a sorted multiset, gathers each connected group of restricted names
    into one restriction block around exactly the components using them, and
    names every binder ``%k`` in traversal order (so binders are distinct).
    """
    return _uniquify(_canon(p, {}, 0))


def congruent(p: Process, q: Process) -> bool:
    return canonical_form(p) == canonical_form(q)


# ----------------------------------------------------------------------------
# measures on processes


def size(p: Process) -> int:
    match p:
        case Nil():
            return 0
        case Par(l, r):
            return size(l) + size(r)
        case Restrict(_, body):
            return size(body)
        case Input(_, _, body) | Output(_, _, body) | ReplInput(_, _, body):
            return size(body) + 1
        case SelectLeft(_, body) | SelectRight(_, body):
            return size(body) + 1
        case Case(_, l, r):
            return size(l) + size(r) + 1
    raise TypeError(f"not a process: {p!r}")


def box_depth(p: Process) -> int:
    match p:
        case Nil():
            return 0
        case Par(l, r) | Case(_, l, r):
            return max(box_depth(l), box_depth(r))
        case ReplInput(_, _, body):
            return box_depth(body) + 1
        case Restrict(_, body) | Input(_, _, body) | Output(_, _, body):
            return box_depth(body)
        case SelectLeft(_, body) | SelectRight(_, body):
            return box_depth(body)
    raise TypeError(f"not a process: {p!r}")


# ----------------------------------------------------------------------------
# reduction


class StaleRedex(ValueError):
    pass


class Redex(NamedTuple):
    """A communication between two components of ``standard_form(p)``.

    ``position`` is ``(sender, receiver)``: indices of the output (or
    selection) and of the input, replicated input or case.
    """

    kind: str  # linear-comm | replicated-comm | select-left | select-right
    channel: str
    position: tuple


def find_redexes(p: Process) -> list:
    _, comps = standard_form(p)
    senders, receivers = {}, {}
    for i, c in enumerate(comps):
        if isinstance(c, (Output, SelectLeft, SelectRight)):
            senders.setdefault(c.chan, []).append(i)
        elif isinstance(c, (Input, ReplInput, Case)):
            receivers.setdefault(c.chan, []).append(i)
    out = []
    for chan, ss in senders.items():
        for i in ss:
            for j in receivers.get(chan, ()):
                kind = _redex_kind(comps[i], comps[j])
                if kind:
                    out.append(Redex(kind, chan, (i, j)))
    out.sort(key=lambda r: (min(r.position), max(r.position)))
    return out


def _redex_kind(s, r):
    match s, r:
        case Output(), Input():
            return "linear-comm"
        case Output(), ReplInput():
            return "replicated-comm"
        case SelectLeft(), Case():
            return "select-left"
        case SelectRight(), Case():
            return "select-right"
    return None


def contract(sender: Process, receiver: Process) -> list:
    """The components replacing a communicating pair."""
    match sender, receiver:
        case Output(x, y, p), Input(_, z, q):
            return [Restrict(y, Par(p, substitute(q, y, z)))]
        case Output(x, y, p), ReplInput(_, z, q):
            return [Restrict(y, Par(p, substitute(q, y, z))), receiver]
        case SelectLeft(_, p), Case(_, q, _):
            return [p, q]
        case SelectRight(_, p), Case(_, _, r):
            return [p, r]
    raise StaleRedex(f"no communication between {sender} and {receiver}")


def _step_raw(p: Process, r: Redex) -> Process:
    names, comps = standard_form(p)
    i, j = r.position
    if not (0 <= i < len(comps) and 0 <= j < len(comps)) or i == j:
        raise StaleRedex(f"redex position {r.position} out of range")
    s, q = comps[i], comps[j]
    if _redex_kind(s, q) != r.kind or s.chan != r.channel or q.chan != r.channel:
        raise StaleRedex(f"redex {r} does not match {s} / {q}")
    rest = [c for k, c in enumerate(comps) if k not in (i, j)]
    return restrict(names, par(*contract(s, q), *rest))


def reduce_step(p: Process, r: Redex) -> Process:
    """Fire ``r`` (found on ``p``) and return the canonical contractum."""
    return canonical_form(_step_raw(p, r))


class TraceResult(NamedTuple):
    steps: int
    sizes: list
    final: Process
    exhausted: bool


def reduce_trace(p: Process, budget: int, strategy: str = "rounds", collect: bool = True) -> TraceResult:
    """Reduce ``p`` for at most ``budget`` single steps.

    ``strategy="leftmost"`` always fires the first redex of the canonical form.
    ``strategy="rounds"`` fires, in each round, a maximal set of independent
    redexes in leftmost order (a breadth-first interleaving of single steps;
    a replicated server may serve several clients in one round).

    ``sizes[k]`` is the size after step ``k + 1``.  When ``collect`` is set,
    the returned final process has unreachable replicated servers removed.
    """
    if strategy not in ("leftmost", "rounds"):
        raise ValueError(f"unknown strategy {strategy!r}")
    p = canonical_form(p)
    sizes = []
    steps = 0
    redexes = find_redexes(p)
    while redexes and steps < budget:
        if strategy == "leftmost":
            p = reduce_step(p, redexes[0])
            steps += 1
            sizes.append(size(p))
        else:
            p, fired = _fire_round(p, redexes, budget - steps, sizes)
            steps += fired
        redexes = find_redexes(p)
    final = garbage_collect(p) if collect else p
    return TraceResult(steps, sizes, final, bool(redexes))


def _fire_round(p, redexes, limit, sizes):
    names, comps = standard_form(p)
    used, chosen = set(), []
    for r in redexes:
        if len(chosen) == limit:
            break
        i, j = r.position
        if i in used or (j in used and r.kind != "replicated-comm"):
            continue
        if r.kind != "replicated-comm" and j in {c[1] for c in chosen}:
            continue
        used.add(i)
        if r.kind != "replicated-comm":
            used.add(j)
        chosen.append((i, j))
    current = sum(size(c) for c in comps)
    new = []
    for i, j in chosen:
        pieces = contract(comps[i], comps[j])
        if isinstance(comps[j], ReplInput):
            pieces = pieces[:-1]
            current += sum(size(x) for x in pieces) - size(comps[i])
        else:
            current += sum(size(x) for x in pieces) - size(comps[i]) - size(comps[j])
        sizes.append(current)
        new.extend(pieces)
    rest = [c for k, c in enumerate(comps) if k not in used]
    return canonical_form(restrict(names, par(*new, *rest))), len(chosen)


def garbage_collect(p: Process) -> Process:
    """Drop restricted replicated servers whose channel nobody else mentions."""
    names, comps = standard_form(p)
    changed = True
    while changed:
        changed = False
        for i, c in enumerate(comps):
            if isinstance(c, ReplInput) and c.chan in names:
                others = set().union(*(free_names(d) for k, d in enumerate(comps) if k != i)) if len(comps) > 1 else set()
                if c.chan not in others and c.chan not in free_names(c.body):
                    comps = comps[:i] + comps[i + 1:]
                    changed = True
                    break
    return canonical_form(restrict(names, par(*comps)))


def server_normal_form(p: Process) -> Process:
    """Identify duplicate restricted servers and collect dead ones.

    Two restricted servers ``!a(y).P`` and ``!b(y).P`` with alpha-equivalent
    bodies behave identically, so ``b`` is renamed to ``a`` and one copy is
    dropped.  This is a bisimulation, not a structural congruence.
    """
    p = garbage_collect(p)
    while True:
        names, comps = standard_form(p)
        merged = None
        servers = [(i, c) for i, c in enumerate(comps) if isinstance(c, ReplInput) and c.chan in names]
        for (i, a), (j, b) in itertools.combinations(servers, 2):
            if a.chan != b.chan and alpha_eq(ReplInput("*", a.bound, a.body), ReplInput("*", b.bound, b.body)):
                if a.chan not in free_names(a.body) and b.chan not in free_names(b.body):
                    merged = (j, b.chan, a.chan)
                    break
        if merged is None:
            return p
        j, old, new = merged
        rest = [substitute(c, new, old) for k, c in enumerate(comps) if k != j]
        p = garbage_collect(restrict([n for n in names if n != old], par(*rest)))
