import pytest

from ftctl import ctl
from ftctl.convert import split_kripke
from ftctl.kripke import (
    DELTA, Kripke, KripkeError, check_delta, check_set, check_set_breakdown,
    check_state, check_state_paths, delta_transform, kripke_to_dot,
    make_kripke, make_total, parse_kripke, print_kripke,
)


@pytest.fixture
def single_loop():
    return make_kripke(["s"], ["s"], [("s", "s")], {"s": {"a"}}, ["a", "b"])


def test_check_state_basics(single_loop):
    assert check_state(single_loop, "s", ctl.Atom("a"))
    assert check_state(single_loop, "s", ctl.EG(ctl.Atom("a")))
    assert not check_state(single_loop, "s", ctl.AF(ctl.Atom("b")))


def test_check_state_coffee(b1, b2):
    phi = ctl.parse_ctl("coin & E X (coffee | !coffee & bang & E X coffee)")
    k1, q1 = split_kripke(b1)
    k2, q2 = split_kripke(b2)
    assert sum(check_state(k1, s, phi) for s in q1) == 2
    assert sum(check_state(k2, s, phi) for s in q2) == 1
    breakdown = check_set_breakdown(k2, q2, phi)
    assert sorted(breakdown.values()) == [False, True]


def test_check_state_unknown_atom(single_loop):
    with pytest.raises(KripkeError):
        check_state(single_loop, "s", ctl.Atom("zzz"))


def test_check_state_requires_total():
    k = make_kripke(["s", "t"], ["s"], [("s", "t")], {}, ["a"])
    with pytest.raises(KripkeError):
        check_state(k, "s", ctl.TRUE)
    assert check_state(make_total(k), "s", ctl.TRUE)


def test_check_set_true_and_negation(single_loop):
    assert check_set(single_loop, {"s"}, ctl.TRUE)
    assert not check_set(single_loop, {"s"}, ctl.Not(ctl.Atom("a")))


def test_check_set_conjunction_across_members(fig_lts):
    # a holds at one initial split state, b at the other; the set judgment
    # joins them even though no single state carries both
    k, q = split_kripke(fig_lts)
    assert check_set(k, q, ctl.parse_ctl("a & b"))
    assert not any(check_state(k, s, ctl.parse_ctl("a & b")) for s in q)


def test_check_set_validates_members(single_loop):
    with pytest.raises(KripkeError):
        check_set(single_loop, {"nope"}, ctl.TRUE)


def test_make_total_idempotent(single_loop):
    assert make_total(single_loop) == single_loop
    k = make_kripke(["s", "d"], ["s"], [("s", "d")], {}, ["a"])
    total = make_total(k)
    assert ("d", "d") in total.transitions
    assert make_total(total) == total


def test_delta_transform_clauses():
    a = ctl.Atom("a")
    d = ctl.Atom(DELTA)
    assert delta_transform(ctl.TRUE) == ctl.TRUE
    assert delta_transform(a) == ctl.EU(d, a)
    assert delta_transform(ctl.EG(a)) == ctl.EG(ctl.Or(d, ctl.EU(d, a)))
    assert delta_transform(ctl.EX(a)) == ctl.EX(ctl.EU(d, ctl.EU(d, a)))
    f = ctl.parse_ctl("a & !b")
    assert delta_transform(f) == ctl.And(
        ctl.EU(d, a), ctl.Not(ctl.EU(d, ctl.Atom("b"))))


def test_delta_transform_rejects_delta():
    with pytest.raises(KripkeError):
        delta_transform(ctl.Atom(DELTA))


def test_delta_only_label_invariant():
    with pytest.raises(KripkeError):
        make_kripke(["s"], ["s"], [("s", "s")], {"s": {DELTA, "a"}}, [DELTA, "a"])


def test_check_delta_terminal(b1):
    k = make_kripke(["s"], ["s"], [("s", "s")], {"s": {DELTA}}, ["a", DELTA])
    assert check_delta(k, "s", ctl.TRUE)


def test_parse_print_roundtrip(single_loop):
    text = print_kripke(single_loop)
    again = parse_kripke(text)
    assert again == single_loop
    assert print_kripke(again) == text


def test_parse_kripke_errors():
    with pytest.raises(KripkeError):
        parse_kripke("init: s\ntrans s s\n")
    with pytest.raises(KripkeError):
        parse_kripke("props: a\ntrans s s\n")
    with pytest.raises(KripkeError):
        parse_kripke("props: a\ninit: s\nlabel s a\n")


def test_dot_export(single_loop):
    dot = kripke_to_dot(single_loop)
    assert dot.startswith("digraph")
    assert "->" in dot and dot.rstrip().endswith("}")


def test_paths_oracle_matches_on_duals(single_loop):
    for text in ("A G a", "A[a U b]", "E[a R a]", "A F !a", "E G (a | b)"):
        f = ctl.parse_ctl(text)
        assert check_state(single_loop, "s", f) == check_state_paths(
            single_loop, "s", f)
