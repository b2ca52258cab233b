import pytest

from softsession.types import (
    ONE, Bang, ContextError, ContextTriple, Judgment, Lolli, Plus, Tensor, With,
    context_depth, type_depth, type_equal,
)


def test_type_depth():
    assert type_depth(ONE) == 0
    assert type_depth(Bang(ONE)) == 1
    assert type_depth(Lolli(Bang(Tensor(Bang(ONE), ONE)), Bang(Bang(ONE)))) == 2
    assert type_depth(With(ONE, Plus(ONE, Bang(Bang(Bang(ONE)))))) == 3


def test_context_depth():
    assert context_depth(ContextTriple()) == 0
    assert context_depth(ContextTriple({"x": Bang(ONE)}, {}, {})) == 1
    assert context_depth(ContextTriple({}, {}, {"x": ONE, "y": Tensor(ONE, ONE)})) == 0
    assert context_depth(ContextTriple({"a": ONE}, {"b": Bang(Bang(ONE))}, {"c": Bang(ONE)})) == 2


def test_type_equal():
    assert type_equal(ONE, ONE)
    assert not type_equal(Tensor(ONE, Bang(ONE)), Tensor(Bang(ONE), ONE))
    assert type_equal(Bang(ONE), Bang(ONE))


def test_zones_are_disjoint():
    with pytest.raises(ContextError):
        ContextTriple({"x": ONE}, {"x": ONE}, {})
    with pytest.raises(ContextError):
        ContextTriple({}, {"y": ONE}, {"y": ONE})


def test_subject_outside_the_contexts():
    with pytest.raises(ContextError):
        Judgment(ContextTriple({}, {}, {"x": ONE}), "x", ONE)


def test_printing():
    assert str(Lolli(ONE, Lolli(ONE, ONE))) == "1 -o 1 -o 1"
    assert str(Lolli(Lolli(ONE, ONE), ONE)) == "(1 -o 1) -o 1"
    j = Judgment(ContextTriple({}, {"x": Bang(ONE)}, {}), "z", ONE)
    assert str(j) == ".; x:!1; . |- z : 1"
