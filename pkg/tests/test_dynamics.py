import pytest

from helpers import CORPUS

from softsession import calculus as pc
from softsession.derivation import (
    BangLSharp, BangR, BBang, BSharp, Cut, CutBang, CutSharp, OneL, OneR, TensorL,
    TensorR, barendregt, check_derivation, erase,
)
from softsession.dynamics import (
    NoWitness, comp_steps, equiv_steps, rewrite_to_normal, shift_steps, subject_reduce,
)
from softsession.measures import duplicability, weight
from softsession.program import load, resolve
from softsession.types import ONE, Bang, Tensor

TENSOR_CUT = Cut(
    "x", Tensor(ONE, ONE),
    TensorR("x", "y", OneR("y"), OneR("x")),
    TensorL("x", "y2", OneL("y2", OneL("x", OneR("z")))),
)


def _leaves(d):
    return sorted(repr(n) for n in (d.left, d.right)) if isinstance(d, Cut) else [repr(d)]


def test_tensor_principal_cut():
    (s,) = comp_steps(TENSOR_CUT)
    assert (s.relation, s.rule) == ("comp", "tensor")
    e = s.result
    assert isinstance(e, Cut) and isinstance(e.right, Cut) and e.right.chan == "x"
    assert check_derivation(e) == check_derivation(TENSOR_CUT)
    assert weight(e) < weight(TENSOR_CUT)


def test_unit_cut_is_a_shift():
    d = Cut("x", ONE, OneR("x"), OneL("x", OneR("z")))
    assert comp_steps(d) == []
    (s,) = shift_steps(d)
    assert (s.rule, s.result) == ("unit", OneR("z"))


def test_bang_spawn():
    g = BBang("x", "u", ONE, OneL("u", OneR("z")))
    d = CutBang("x", ONE, OneR("s"), g)
    (s,) = comp_steps(d)
    assert s.rule == "spawn!"
    e = s.result
    assert isinstance(e, Cut) and isinstance(e.right, CutSharp)
    assert check_derivation(e) == check_derivation(d)


def test_sharp_spawn():
    g = BSharp("x", "u1", OneL("u1", BSharp("x", "u2", OneL("u2", OneR("z")))))
    d = CutSharp("x", ONE, OneR("s"), g)
    (s,) = comp_steps(d)
    assert s.rule == "spawn#" and weight(s.result) < weight(d)


def test_shift_opens_a_box():
    g = BSharp("b", "u", OneL("u", OneR("z")))
    d = Cut("b", Bang(ONE), BangR("b", "s", (), OneR("s")), BangLSharp("b", g))
    (s,) = shift_steps(d)
    assert s.relation == "shift" and isinstance(s.result, CutSharp)
    assert pc.congruent(erase(s.result), erase(d))
    assert weight(s.result) <= weight(d)


def test_equiv_assoc_round_trip():
    d = Cut("y", ONE, OneR("y"), Cut("w", ONE, OneR("w"), OneL("w", OneL("y", OneR("z")))))
    steps = equiv_steps(d)
    assert steps
    j = check_derivation(d)
    for s in steps:
        assert check_derivation(s.result) == j
        assert weight(s.result) == weight(d)
        assert duplicability(s.result) == duplicability(d)
        assert pc.congruent(erase(s.result), erase(d))
        back = [t.result for t in equiv_steps(s.result)]
        assert d in back


def test_subject_reduce_single_comp():
    d = barendregt(TENSOR_CUT)
    (r,) = pc.find_redexes(erase(d))
    e, path = subject_reduce(d, r)
    assert [s.relation for s in path] == ["comp"]
    assert pc.congruent(erase(e), pc.reduce_step(erase(d), r))


def test_subject_reduce_behind_an_outer_cut():
    inner = TensorL("x", "y2", OneL("y2", OneL("x", OneL("q", OneR("z")))))
    d = barendregt(Cut("q", ONE, OneR("q"), Cut("x", Tensor(ONE, ONE), TensorR("x", "y", OneR("y"), OneR("x")), inner)))
    rs = [r for r in pc.find_redexes(erase(d)) if r.kind == "linear-comm"]
    e, path = subject_reduce(d, rs[0])
    assert path[-1].relation == "comp"
    check_derivation(e)


def test_subject_reduce_needs_distinct_binders():
    d = Cut("x", ONE, OneR("x"), Cut("x", ONE, OneR("x"), OneL("x", OneL("x", OneR("z")))))
    with pytest.raises(ValueError):
        subject_reduce(d, pc.Redex("linear-comm", "x", (0, 1)))


def test_rewrite_to_normal():
    r = rewrite_to_normal(OneR("x"), 10)
    assert (r.final, r.compCount, r.exhausted) == (OneR("x"), 0, False)
    assert rewrite_to_normal(TENSOR_CUT, 0).exhausted


def test_shop_composition_matches_process_trace():
    src = load(CORPUS / "shop.sst")
    for name in ("composed", "purchase"):
        d = resolve(src, name).derivation
        r = rewrite_to_normal(d, 1000)
        t = pc.reduce_trace(erase(d), 1000)
        assert not r.exhausted and r.compCount == t.steps
        assert r.compCount <= weight(d)


def test_no_witness_is_an_error_type():
    assert issubclass(NoWitness, Exception)
