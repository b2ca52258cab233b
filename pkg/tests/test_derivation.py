import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import CORPUS

from softsession import calculus as pc
from softsession.derivation import (
    BangLSharp, BangR, BBang, BSharp, CheckError, Cut, CutSharp, OneL, OneR,
    TensorL, TensorR, barendregt, check_derivation, derivation_alpha_eq, erase,
    is_barendregt, is_normal, lift, weaken,
)
from softsession.generate import random_derivation
from softsession.program import load
from softsession.syntax import DerivationDecl, parse_derivation, parse_process as pp
from softsession.types import ONE, Bang, Tensor


def test_unit_right():
    j = check_derivation(OneR("x"))
    assert (j.subject, j.type) == ("x", ONE)
    assert not j.contexts.aux and not j.contexts.mux and not j.contexts.lin
    assert erase(OneR("x")) == pc.Nil()


def test_cut_joins_contexts():
    left = OneL("a", OneR("x"))
    right = OneL("x", OneL("b", OneR("z")))
    j = check_derivation(Cut("x", ONE, left, right))
    assert set(j.contexts.lin) == {"a", "b"} and j.subject == "z"


def test_cut_type_mismatch_is_rejected():
    with pytest.raises(CheckError):
        check_derivation(Cut("x", Bang(ONE), OneR("x"), OneL("x", OneR("z"))))


def test_bang_right_needs_empty_multiplexor():
    body = OneR("y", mux=(("m", ONE),))
    with pytest.raises(CheckError) as err:
        check_derivation(BangR("x", "y", (), body))
    assert err.value.rule == "!R"


def test_tensor_erasure():
    d = TensorR("x", "y", OneR("y"), OneR("x"))
    assert erase(d) == pp("x<y>. (0 | 0)")
    assert check_derivation(d).type == Tensor(ONE, ONE)


def test_cut_sharp_erasure():
    d = CutSharp("x", ONE, OneR("s"), BSharp("x", "u", OneL("u", OneR("z"))))
    assert pc.congruent(erase(d), pp("new x. (!x(s). 0 | x<u>. 0)"))


def test_is_normal():
    assert is_normal(OneR("x"))
    assert not is_normal(Cut("x", ONE, OneR("x"), OneL("x", OneR("z"))))
    assert is_normal(BangR("x", "y", (), OneR("y")))


def test_weaken():
    d = weaken(OneR("x"), {"w": ONE})
    assert dict(check_derivation(d).contexts.mux) == {"w": ONE}
    assert weaken(OneR("x"), {}) == OneR("x")


def test_lift_moves_auxiliary_uses_to_the_multiplexor():
    d = BBang("s", "a", ONE, OneL("a", OneR("z")))
    assert dict(check_derivation(d).contexts.aux) == {"s": ONE}
    e = lift(d)
    assert isinstance(e, BSharp)
    j = check_derivation(e)
    assert not j.contexts.aux and dict(j.contexts.mux) == {"s": ONE}
    assert erase(e) == erase(d)
    assert lift(OneR("x")) == OneR("x")


def test_dill_mode_allows_reuse():
    d = parse_derivation("(!L# x1 (!R x0 y (chans) (b# x1 z (b# x1 w (1L w (1L z (1R y (mux x1 [1])))))) (mux x1 [1])))")
    j = check_derivation(d, "dill")
    assert dict(j.contexts.lin) == {"x1": Bang(ONE)}
    with pytest.raises(CheckError):
        check_derivation(BangR("x0", "y", ("x1",), BBang("x1", "z", ONE, BBang("x1", "w", ONE, OneL("w", OneL("z", OneR("y")))))))


def test_box_lifted_channel_used_through_bang_left():
    d = Cut("b", Bang(ONE), BangR("b", "s", (), OneR("s")), BangLSharp("b", BSharp("b", "u", OneL("u", OneR("z")))))
    assert not check_derivation(d).contexts.lin


def test_tensor_left_binds_the_received_channel():
    d = TensorL("x", "y", OneL("y", OneL("x", OneR("z"))))
    assert dict(check_derivation(d).contexts.lin) == {"x": Tensor(ONE, ONE)}


def test_corpus_literals_check():
    src = load(CORPUS / "kernel.sst")
    lits = [d for d in src.declarations if isinstance(d, DerivationDecl)]
    assert len(lits) >= 9
    for d in lits:
        check_derivation(d.derivation, d.mode)


def test_check_error_has_location():
    bad = parse_derivation("(cut y [1] (1R y) (1L y (1L q (1R x))))")
    check_derivation(bad)
    bad = Cut("y", ONE, OneR("y"), OneL("y", OneL("y", OneR("x"))))
    with pytest.raises(CheckError) as err:
        check_derivation(bad)
    assert isinstance(err.value.location, tuple)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_barendregt_keeps_judgment_and_erasure(seed):
    import random
    d = random_derivation(random.Random(seed))
    e = barendregt(d)
    assert is_barendregt(e)
    assert check_derivation(e) == check_derivation(d)
    assert pc.congruent(erase(e), erase(d))
    assert derivation_alpha_eq(d, e)
