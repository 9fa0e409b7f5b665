import pytest

from ftctl.lts import (
    Lts, LtsError, failure_trace, failure_traces, fin, ft_preorder_bounded,
    initials, is_stable, make_lts, parse_lts, print_lts, refuses,
    stable_failures, tau_closure, weak_reach,
)


def test_weak_reach_epsilon_reflexive(b1):
    assert "r" in weak_reach(b1, "r", [])


def test_weak_reach_coin_branches(b1):
    assert weak_reach(b1, "r", ["coin"]) == {"u1", "u2"}


def test_weak_reach_skips_tau():
    lts = make_lts("a", [("s", "tau", "u"), ("u", "a", "v")], "s")
    assert weak_reach(lts, "s", ["a"]) == {"v"}


def test_weak_reach_unknown_action(b1):
    with pytest.raises(LtsError):
        weak_reach(b1, "r", ["espresso"])


def test_initials(b1):
    assert initials(b1, "r") == {"coin"}
    assert initials(b1, "m1") == frozenset()


def test_initials_through_tau():
    lts = make_lts("a", [("s", "tau", "u"), ("u", "a", "v")], "s")
    assert initials(lts, "s") == {"a"}


def test_is_stable():
    lts = make_lts("a", [("s", "tau", "s"), ("u", "a", "v")], "s")
    assert not is_stable(lts, "s")
    assert is_stable(lts, "u")
    assert is_stable(lts, "v")


def test_refuses_after_coin(b1, b2):
    # first coin branch of b1 offers only tea/bang, so it refuses coffee
    assert refuses(b1, "u1", {"coffee"})
    assert not refuses(b2, "u2", {"coffee"})
    assert refuses(b1, "u1", frozenset())


def test_refuses_by_proxy():
    lts = make_lts("ab", [("s", "tau", "u"), ("s", "a", "w"), ("u", "b", "v")], "s")
    # s is unstable but can internally become u, which refuses {a}
    assert refuses(lts, "s", {"a"})
    assert not refuses(lts, "s", {"b"})


def test_failure_traces_distinguish(b1, b2):
    f = failure_trace([set(), {"coffee"}, set(), set()], ["coin", "bang", "coffee"])
    assert failure_traces(b1, "r", 3).contains(f)
    assert not failure_traces(b2, "r", 3).contains(f)


def test_trivial_trace_everywhere(b1):
    trivial = failure_trace([set()], [])
    assert failure_traces(b1, "r", 0).contains(trivial)
    divergent = make_lts("a", [("s", "tau", "s")], "s")
    assert failure_traces(divergent, "s", 0).contains(trivial)


def test_failure_trace_shape_checked():
    with pytest.raises(LtsError):
        failure_trace([set()], ["a"])


def test_unstable_positions_refuse_nothing():
    lts = make_lts("ab", [("s", "tau", "u"), ("s", "a", "w"), ("u", "b", "v")], "s")
    traces = failure_traces(lts, "s", 1)
    # a is taken from the unstable s, so its position must carry an empty set
    assert traces.contains(failure_trace([set(), set()], ["a"]))
    assert not traces.contains(failure_trace([{"b"}, set()], ["a"]))


def test_stable_failures(b1):
    sf = stable_failures(b1, "r", 1)
    assert any(s.trace == ("coin",) and "coffee" in s.refusal for s in sf)
    assert any(s.trace == () for s in sf)


def test_fin(b1):
    words = fin(b1, "r", 2)
    assert {(), ("coin",), ("coin", "tea"), ("coin", "coffee"),
            ("coin", "bang")} <= words


def test_ft_preorder_reflexive(b1, b2):
    assert ft_preorder_bounded(b1, b1, 3)
    assert ft_preorder_bounded(b2, b2, 3)


def test_ft_preorder_distinguishes(b1, b2):
    assert not ft_preorder_bounded(b1, b2, 3)


def test_ft_preorder_stop_process(b1):
    stop = Lts(frozenset(["z"]), b1.alphabet, frozenset(), "z")
    assert ft_preorder_bounded(stop, stop, 2)


def test_ft_preorder_alphabet_mismatch(b1):
    other = make_lts("xy", [("s", "x", "t")], "s")
    with pytest.raises(LtsError):
        ft_preorder_bounded(b1, other, 2)


def test_lts_validation():
    with pytest.raises(LtsError):
        make_lts(["tau"], [], "s")
    with pytest.raises(LtsError):
        make_lts("a", [("s", "b", "t")], "s")
    with pytest.raises(LtsError):
        make_lts("a", [("s", "a", "t")], "missing")


def test_parse_print_roundtrip(b1):
    text = print_lts(b1)
    again = parse_lts(text)
    assert again.states == b1.states
    assert again.transitions == b1.transitions
    assert again.alphabet == b1.alphabet
    assert again.initial == b1.initial
    assert print_lts(again) == text


def test_parse_comments_and_errors():
    lts = parse_lts("# coffee\nalphabet: a b\ninit: s\ns a t # step\n")
    assert lts.initial == "s"
    with pytest.raises(LtsError):
        parse_lts("init: s\ns a t\n")
    with pytest.raises(LtsError):
        parse_lts("alphabet: a\ninit: s\ns a\n")
