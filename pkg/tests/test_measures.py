import pytest

from helpers import CORPUS, corpus_dsll, derivation_population

from softsession import calculus as pc
from softsession.derivation import (
    BangLBang, BangR, BBang, BSharp, Cut, CutBang, CutSharp, LolliL, LolliR, OneL,
    OneR, TensorR, WithL2, erase, is_normal,
)
from softsession.measures import (
    MeasureError, duplicability, measure, virtual_occurrences, weight, weight_n,
)
from softsession.program import load, resolve
from softsession.types import ONE, Bang, Lolli, With


def _client(k):
    """Use the multiplexed server x of type 1 -o 1 k times."""
    d = OneR("z")
    for i in reversed(range(1, k + 1)):
        d = BSharp("x", f"y{i}", LolliL(f"y{i}", f"v{i}", OneR(f"v{i}"), OneL(f"y{i}", d)))
    return d


SERVER = LolliR("s", "u", OneL("u", OneR("s")))


def test_unit():
    rep = measure(OneR("x"))
    assert (rep.processSize, rep.boxDepth, rep.duplicability, rep.weight) == (0, 0, 1, 0)


def test_spawn_counts_once():
    d = BBang("x", "y", ONE, OneL("y", OneR("z")))
    assert virtual_occurrences("x", d) == 1


def test_multiplexed_uses_add_up():
    assert virtual_occurrences("x", _client(3)) == 3


def test_exponential_cut_multiplies():
    # the server body uses w once and the client spawns the server twice
    body = BBang("w", "q", ONE, OneL("q", OneR("s")))
    client = BSharp("x", "a", OneL("a", BSharp("x", "b", OneL("b", OneR("z")))))
    d = CutSharp("x", ONE, body, client)
    assert virtual_occurrences("w", d) == 2 * 1 + 0


def test_tensor_sums():
    d = TensorR("x", "y", BSharp("w", "a", OneL("a", OneR("y"))), BSharp("w", "b", OneL("b", OneR("x"))))
    assert virtual_occurrences("w", d) == 2


def test_unknown_channel():
    with pytest.raises(MeasureError):
        virtual_occurrences("nope", OneR("x"))


def test_duplicability():
    assert duplicability(OneR("x")) == 1
    d = Cut("b", Bang(ONE), BangR("b", "s", (), OneR("s")), BangLBang("b", BBang("b", "u", ONE, OneL("u", OneR("z")))))
    assert duplicability(d) == 1


def test_weight_clauses():
    inner = OneL("y", OneR("z"))
    assert weight_n(WithL2("x", ONE, inner), 3) == 1 + weight_n(inner, 3)
    box = BangR("x", "y", (), LolliR("y", "u", OneL("u", OneR("y"))))
    for n in (1, 2, 5):
        assert weight_n(box, n) == n * (1 + 1)
    g = _client(3)
    d = CutSharp("x", Lolli(ONE, ONE), SERVER, g)
    assert weight_n(d, 2) == 3 * weight_n(SERVER, 2) + weight_n(g, 2)
    with pytest.raises(ValueError):
        weight_n(d, 0)


def test_weight_of_cut_free_equals_size():
    for d in derivation_population():
        if is_normal(d) and duplicability(d) == 1 and "BangR" not in repr(d):
            assert weight(d) == pc.size(erase(d))


def test_weight_covers_size_on_corpus():
    for d in corpus_dsll():
        p = erase(d)
        s, b = max(1, pc.size(p)), pc.box_depth(p)
        assert weight(d) >= pc.size(p) or not is_normal(d)
        assert weight(d) <= s ** (b + 2)


def test_dupclient_size():
    r = resolve(load(CORPUS / "dupser.sst"), "dupclient", "dill")
    assert measure(r.derivation, "dill").processSize == 1


def test_multiplexor_cut_outgrows_the_size_bound_at_parameter_d():
    # k >= 3 uses of a cut# server: W_1 = 3k, |P| * 1^(B+1) = 2k + 2
    for k in (1, 2, 3, 4, 5):
        d = CutSharp("x", Lolli(ONE, ONE), SERVER, _client(k))
        s = pc.size(erase(d))
        assert duplicability(d) == 1 and pc.box_depth(erase(d)) == 1
        assert (weight_n(d, 1), s) == (3 * k, 2 * k + 2)
        assert weight_n(d, 2) <= s * 2 ** 2


def test_thrice_in_the_corpus():
    r = resolve(load(CORPUS / "servers.sst"), "thrice")
    rep = measure(r.derivation)
    assert (rep.processSize, rep.duplicability, rep.weight) == (8, 1, 9)


def test_report_dict():
    r = resolve(load(CORPUS / "servers.sst"), "once")
    rep = measure(r.derivation).as_dict()
    assert set(rep) == {"processSize", "boxDepth", "duplicability", "weight", "perChannelFO"}
    assert rep["perChannelFO"] == {}
    assert isinstance(With(ONE, ONE), With)
