import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import congruent_variant, mulser, mulser_system, random_process

from softsession import calculus as pc
from softsession.calculus import Input, Nil, Output, Par, ReplInput, Restrict
from softsession.syntax import parse_process as pp

DUPCLIENT = pp("x0<y>")
DUPSER = pp("!x1(y). x2<z>. x2<w>")


def test_free_names():
    assert pc.free_names(Nil()) == set()
    assert pc.free_names(DUPCLIENT) == {"x0"}
    assert pc.free_names(DUPSER) == {"x1", "x2"}
    assert pc.free_names(pp("new a. (a(b). b.inl | c<d>)")) == {"c"}


def test_substitute_simple_and_identity():
    assert pc.substitute(pp("x(y). 0"), "z", "x") == pp("z(y). 0")
    p = pp("x(y). y<w>")
    assert pc.alpha_eq(pc.substitute(p, "x", "x"), p)


def test_substitute_avoids_capture():
    q = pc.substitute(pp("x(y). x<w>"), "y", "x")
    assert isinstance(q, Input) and q.chan == "y"
    assert q.bound != "y"
    assert pc.free_names(q) == {"y"}
    assert pc.alpha_eq(q, pp("y(k). y<w>"))


def test_alpha_eq():
    assert pc.alpha_eq(pp("x(y). 0"), pp("x(z). 0"))
    assert not pc.alpha_eq(pp("x(y). 0"), pp("z(y). 0"))
    assert pc.alpha_eq(pp("new a. new b. (a(c) | b(d))"), pp("new p. new q. (p(r) | q(s))"))


def test_canonical_form_axioms():
    p = pp("x(y). y.inl")
    assert pc.canonical_form(Par(p, Nil())) == pc.canonical_form(p)
    assert pc.canonical_form(pp("new x. 0")) == Nil()
    q = pp("a<b>")
    assert pc.congruent(Par(Restrict("x", p), q), Restrict("x", Par(p, q)))


def test_congruence_examples():
    p, q, r = pp("a(b)"), pp("c<d>"), pp("e.inr")
    assert pc.congruent(Par(p, Par(q, r)), Par(Par(p, q), r))
    assert pc.congruent(pp("new x. new y. (x(a) | y<b>)"), pp("new y. new x. (x(a) | y<b>)"))
    assert not pc.congruent(pp("x(y)"), pp("x<y>"))


def test_congruence_with_interchangeable_components():
    a = pp("new a. new b. (a.case(0, 0) | b.case(0, 0) | a.inl; b.inr)")
    b = pp("new a. new b. (a.case(0, 0) | b.case(0, 0) | b.inl; a.inr)")
    c = pp("new a. new b. (a.case(0, 0) | b.case(0, 0) | a.inr; b.inl)")
    assert pc.congruent(a, b)
    assert not pc.congruent(a, c)


def test_size():
    assert pc.size(Nil()) == 0
    assert pc.size(DUPSER) == 3
    p = pp("x(y). (y.inl | y.case(0, z<w>))")
    for n in range(11):
        assert pc.size(p) == 4
        p = Restrict("x", p)


def test_box_depth():
    assert pc.box_depth(pp("!x(y). !z(w). 0")) == 2
    assert pc.box_depth(pp("new x. y<z>")) == 0
    for n in range(1, 5):
        assert pc.box_depth(mulser(n)) == 1


def test_find_redexes():
    assert pc.find_redexes(Nil()) == []
    rs = pc.find_redexes(pp("new x0. (!x0(y0). x1<z0>. x1<w0> | x0<y>)"))
    assert [(r.kind, r.channel) for r in rs] == [("replicated-comm", "x0")]
    rs = pc.find_redexes(pp("x.inl; 0 | x.case(0, 0)"))
    assert [(r.kind, r.channel) for r in rs] == [("select-left", "x")]


def test_reduce_step():
    p = pp("new x. (x<y>. 0 | x(z). 0)")
    (r,) = pc.find_redexes(p)
    assert pc.congruent(pc.reduce_step(p, r), Nil())


def test_first_mulser_step():
    n = 3
    p = pp("new x0. new x1. new x2. (!x3(s) | "
           + " | ".join(f"!x{i}(y{i}). x{i + 1}<z{i}>. x{i + 1}<w{i}>" for i in reversed(range(n)))
           + " | x0<y>)")
    (r,) = pc.find_redexes(p)
    q = pc.reduce_step(p, r)
    want = pp("new x0. new x1. new x2. (!x3(s) | "
              + " | ".join(f"!x{i}(y{i}). x{i + 1}<z{i}>. x{i + 1}<w{i}>" for i in reversed(range(n)))
              + " | x1<a>. x1<b>)")
    assert pc.congruent(q, want)


def test_stale_redex():
    p = pp("new x. (x<y>. 0 | x(z). 0)")
    (r,) = pc.find_redexes(p)
    with pytest.raises(pc.StaleRedex):
        pc.reduce_step(pc.reduce_step(p, r), r)


def test_reduce_trace_budget_and_termination():
    t = pc.reduce_trace(Nil(), 5)
    assert (t.steps, t.sizes, t.final, t.exhausted) == (0, [], Nil(), False)
    two = pp("new x. (x<y>. y<z> | x(a). a(b))")
    assert pc.reduce_trace(two, 1).exhausted
    done = pc.reduce_trace(two, 10)
    assert (done.steps, done.final, done.exhausted) == (2, Nil(), False)
    t3 = pc.reduce_trace(mulser_system(3), 10**6)
    assert t3.final == Nil() and t3.steps == 15


def test_strategies_agree_on_step_count():
    for n in (1, 2, 3, 4):
        p = mulser_system(n)
        assert pc.reduce_trace(p, 10**5, "leftmost").steps == pc.reduce_trace(p, 10**5).steps


def test_fresh_names_are_distinct():
    names = {pc.fresh_name("x") for _ in range(100)}
    assert len(names) == 100
    assert pc.fresh_name("%3")[0].isalpha()


def test_server_normal_form_merges_copies():
    p = pp("new a. new b. (!a(y). y.inl | !b(y). y.inl | a<u>. b<v>)")
    q = pp("new a. (!a(y). y.inl | a<u>. a<v>)")
    assert pc.congruent(pc.server_normal_form(p), pc.server_normal_form(q))


def test_garbage_collect_drops_dead_servers():
    p = pp("new a. !a(y). y.inl | z<w>")
    assert pc.congruent(pc.garbage_collect(p), pp("z<w>"))


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_congruence_moves_keep_size_and_class(seed):
    rng = random.Random(seed)
    p = random_process(rng)
    q = congruent_variant(p, rng, moves=6)
    assert pc.size(p) == pc.size(q)
    assert pc.box_depth(p) == pc.box_depth(q)
    assert pc.congruent(p, q)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_canonical_form_is_idempotent(seed):
    p = random_process(random.Random(seed))
    c = pc.canonical_form(p)
    assert pc.canonical_form(c) == c
    assert pc.free_names(c) <= pc.free_names(p)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_reduction_respects_congruence(seed):
    rng = random.Random(seed)
    p = random_process(rng)
    rs = pc.find_redexes(p)
    q = congruent_variant(p, rng)
    assert len(pc.find_redexes(q)) == len(rs)


def test_constructors_are_values():
    assert Output("x", "y", Nil()) == Output("x", "y", Nil())
    assert hash(ReplInput("x", "y", Nil())) == hash(ReplInput("x", "y", Nil()))


def test_long_trace_stays_within_the_recursion_limit():
    t = pc.reduce_trace(mulser_system(11), 10**5)
    assert t.steps == 2 ** 12 - 1 and t.final == Nil()
