import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import CORPUS, random_process

from softsession import calculus as pc
from softsession.derivation import derivation_alpha_eq
from softsession.generate import random_derivation, random_type
from softsession.syntax import (
    AnalyzeDecl, ComposeDecl, DerivationDecl, ProcessDecl, SstSyntaxError, TypeDecl,
    parse, parse_derivation, parse_process, parse_type, pretty, pretty_derivation,
)
from softsession.types import ONE, Bang, Lolli, Plus, Tensor, With


def test_single_definition():
    src = parse("process d gives x:1 = 0")
    (d,) = src.definitions()
    assert isinstance(d, ProcessDecl) and d.process == pc.Nil()
    assert d.signature.gives == ("x", ONE)


def test_dupser_corpus_has_n_plus_two_definitions():
    src = parse((CORPUS / "dupser.sst").read_text())
    assert len(src.definitions()) == 8 + 2


def test_every_corpus_file_parses():
    for f in CORPUS.glob("*.sst"):
        parse(f.read_text())


def test_unbalanced_parenthesis():
    with pytest.raises(SstSyntaxError) as err:
        parse("process d gives x:1 =\n  (x<y>. 0")
    assert err.value.line == 2 and err.value.column is not None
    assert str(err.value).startswith("line 2, column")


def test_type_precedence():
    assert parse_type("1 -o 1 -o 1") == Lolli(ONE, Lolli(ONE, ONE))
    assert parse_type("1 * 1 + 1") == Plus(Tensor(ONE, ONE), ONE)
    assert parse_type("!1 & 1 -o !!1") == Lolli(With(Bang(ONE), ONE), Bang(Bang(ONE)))


def test_process_syntax():
    assert parse_process("x<y>") == pc.Output("x", "y", pc.Nil())
    p = parse_process("new x. x(y). y.inl; 0 | !z(w). w.case(0, 0)")
    assert isinstance(p, pc.Par)
    assert isinstance(p.left, pc.Restrict)


def test_aliases_and_zones():
    src = parse(
        "type B = 1 + 1\n"
        "process p linear a:B uses b:!1 aux c:1 mux d:1 gives x:B -o 1 = x(y). 0\n"
    )
    (t, p) = src.declarations
    assert isinstance(t, TypeDecl)
    sig = p.signature
    assert sig.usesLinear == {"a": Plus(ONE, ONE), "b": Bang(ONE)}
    assert sig.gives == ("x", Lolli(Plus(ONE, ONE), ONE))
    assert sig.usesAux == {"c": ONE} and sig.usesMux == {"d": ONE}


def test_compose_and_analyze():
    src = parse(
        "process a gives x:1 = 0\n"
        "process b linear x:1 gives z:1 = 0\n"
        "compose ab = a, b over x\n"
        "analyze ab budget 7\n"
    )
    c, an = src.declarations[2:]
    assert isinstance(c, ComposeDecl) and c.parts == ["a", "b"] and c.channels == ["x"]
    assert isinstance(an, AnalyzeDecl) and an.budget == 7


def test_use_before_definition_is_an_error():
    with pytest.raises(SstSyntaxError):
        parse("compose ab = a, b over x\nprocess a gives x:1 = 0\nprocess b gives z:1 = 0\n")
    with pytest.raises(SstSyntaxError):
        parse("process a gives x:1 = 0\nprocess a gives x:1 = 0\n")


def test_derivation_literal():
    d = parse_derivation("(cut y [1] (1R y) (1L y (1R x)))")
    src = parse("derivation u mode dill = (1R x)")
    (u,) = src.definitions()
    assert isinstance(u, DerivationDecl) and u.mode == "dill"
    assert derivation_alpha_eq(parse_derivation(pretty_derivation(d)), d)


def test_pretty_round_trip_on_the_corpus():
    for f in CORPUS.glob("*.sst"):
        src = parse(f.read_text())
        again = parse(pretty(src))
        assert [d.name for d in again.definitions()] == [d.name for d in src.definitions()]


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_process_print_parse(seed):
    p = random_process(random.Random(seed))
    q = parse_process(str(p))
    assert str(q) == str(p)
    assert pc.congruent(q, p) and pc.size(q) == pc.size(p)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_type_print_parse(seed):
    a = random_type(random.Random(seed), 4)
    assert parse_type(str(a)) == a


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_derivation_print_parse(seed):
    d = random_derivation(random.Random(seed))
    assert derivation_alpha_eq(parse_derivation(pretty_derivation(d)), d)
