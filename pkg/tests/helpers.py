"""Shared builders for the test-suite."""

from pathlib import Path

from softsession import calculus as pc
from softsession.derivation import check_derivation
from softsession.generate import population
from softsession.program import load, resolve
from softsession.syntax import parse_process

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"


def dupser(i):
    return f"!x{i}(y{i}). x{i + 1}<z{i}>. x{i + 1}<w{i}>"


def mulser_system(n):
    """(new x0 .. xn)(sink on xn | dupser_(n-1) | ... | dupser_0 | dupclient)."""
    news = "".join(f"new x{i}. " for i in range(n + 1))
    parts = [f"!x{n}(s)", *(dupser(i) for i in reversed(range(n))), "x0<y>"]
    return parse_process(news + "(" + " | ".join(parts) + ")")


def corpus_resolved(mode=None):
    """Every definition of the corpus that resolves, as (file, Resolved)."""
    out = []
    for path in sorted(CORPUS.glob("*.sst")):
        src = load(path)
        for d in src.definitions():
            r = resolve(src, d.name, mode)
            if r.ok:
                out.append((path.name, r))
    return out


def corpus_dsll():
    return [r.derivation for _, r in corpus_resolved() if r.mode == "dsll"]


_POP = {}


def derivation_population(n=500, seed=7):
    """Generated derivations plus every dsll derivation of the corpus."""
    key = (n, seed)
    if key not in _POP:
        pop = [*population(n, seed=seed), *corpus_dsll()]
        for d in pop:
            check_derivation(d)
        _POP[key] = pop
    return _POP[key]


def size(p):
    return pc.size(p)


def mulser(n):
    """(new x1 .. x(n-1))(dupser_(n-1) | ... | dupser_0): offers x0, needs xn."""
    news = "".join(f"new x{i}. " for i in range(1, n))
    body = " | ".join(dupser(i) for i in reversed(range(n)))
    return parse_process(news + (f"({body})" if n > 1 else body))


# random processes and structural-congruence moves

from softsession.calculus import (  # noqa: E402
    Case, Input, Nil, Output, Par, ReplInput, Restrict, SelectLeft, SelectRight,
    fresh_name, free_names, substitute,
)

NAMES = ["a", "b", "c", "x", "y"]


def random_process(rng, depth=4):
    if depth <= 0:
        return Nil()
    k = rng.randrange(9)
    sub = lambda: random_process(rng, depth - 1)  # noqa: E731
    c = rng.choice(NAMES)
    match k:
        case 0:
            return Nil()
        case 1 | 2:
            return Par(sub(), sub())
        case 3:
            return Restrict(rng.choice(NAMES), sub())
        case 4:
            return Input(c, rng.choice(NAMES), sub())
        case 5:
            return Output(c, rng.choice(NAMES), sub())
        case 6:
            return ReplInput(c, rng.choice(NAMES), sub())
        case 7:
            return rng.choice([SelectLeft, SelectRight])(c, sub())
        case _:
            return Case(c, sub(), sub())


def _congruence_moves(p):
    """Processes reachable from p by one structural-congruence axiom at the root."""
    out = [Par(p, Nil()), Par(Nil(), p)]
    fresh = fresh_name("v")
    out.append(Restrict(fresh, p))
    match p:
        case Par(l, r):
            out.append(Par(r, l))
            if isinstance(l, Par):
                out.append(Par(l.left, Par(l.right, r)))
            if isinstance(r, Par):
                out.append(Par(Par(l, r.left), r.right))
            if isinstance(r, Nil):
                out.append(l)
        case Restrict(x, body):
            y = fresh_name(x)
            out.append(Restrict(y, substitute(body, y, x)))
            if x not in free_names(body):
                out.append(body)
            match body:
                case Restrict(z, inner):
                    out.append(Restrict(z, Restrict(x, inner)))
                case Par(l, r) if x not in free_names(r):
                    out.append(Par(Restrict(x, l), r))
                case Par(l, r) if x not in free_names(l):
                    out.append(Par(l, Restrict(x, r)))
        case Input(c, y, body) | Output(c, y, body) | ReplInput(c, y, body):
            z = fresh_name(y)
            out.append(type(p)(c, z, substitute(body, z, y)))
    return out


def _subterms(p):
    yield p, lambda q: q
    match p:
        case Par(l, r) | Case(_, l, r):
            for s, plug in _subterms(l):
                yield s, (lambda q, plug=plug: _rebuild(p, plug(q), r))
            for s, plug in _subterms(r):
                yield s, (lambda q, plug=plug: _rebuild(p, l, plug(q)))
        case Restrict(x, b):
            for s, plug in _subterms(b):
                yield s, (lambda q, plug=plug: Restrict(x, plug(q)))
        case Input(c, y, b) | Output(c, y, b) | ReplInput(c, y, b):
            for s, plug in _subterms(b):
                yield s, (lambda q, plug=plug: type(p)(c, y, plug(q)))
        case SelectLeft(c, b) | SelectRight(c, b):
            for s, plug in _subterms(b):
                yield s, (lambda q, plug=plug: type(p)(c, plug(q)))


def _rebuild(p, l, r):
    return Par(l, r) if isinstance(p, Par) else Case(p.chan, l, r)


def congruent_variant(p, rng, moves=4):
    """Apply a few random congruence axioms at random positions inside p."""
    for _ in range(moves):
        sites = list(_subterms(p))
        s, plug = rng.choice(sites)
        p = plug(rng.choice(_congruence_moves(s)))
    return p
