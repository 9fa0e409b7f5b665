import pytest

from ftctl import ctl
from ftctl.convert import (
    delta_kripke, lts_to_dot, process_sat, split_kripke, start_prop,
)
from ftctl.kripke import DELTA, check_delta, check_set, check_state
from ftctl.lts import Lts, make_lts


def test_split_figure_counts(fig_lts):
    k, q = split_kripke(fig_lts)
    assert len(k.states) == 8
    assert len(q) == 2 and q == k.initials
    label_multiset = sorted(",".join(sorted(k.label(s))) for s in k.states)
    assert label_multiset == ["", "", "", "a", "b", "c", "d", "e"]
    # empty-labeled states carry exactly a self-loop
    for s in k.states:
        if not k.label(s):
            assert k.successors(s) == [s]
        else:
            assert len(k.label(s)) == 1


def test_split_single_dead_state():
    p = Lts(frozenset(["z"]), frozenset("a"), frozenset(), "z")
    k, q = split_kripke(p)
    assert len(k.states) == 1
    (s,) = k.states
    assert k.label(s) == frozenset() and k.successors(s) == [s]


def test_split_coffee_initials(b1):
    k, q = split_kripke(b1)
    assert len(q) == 2
    assert all(k.label(s) == {"coin"} for s in q)


def test_split_marked(b1):
    k, q = split_kripke(b1, marked_action="coin")
    assert all(k.label(s) == {"coin", start_prop("coin")} for s in q)
    assert start_prop("coin") in k.props


def test_delta_figure_counts(fig_lts):
    k, s0 = delta_kripke(fig_lts)
    assert len(k.states) == 11
    delta_states = {s for s in k.states if DELTA in k.label(s)}
    action_states = k.states - delta_states
    assert len(delta_states) == 6 and len(action_states) == 5
    for s in action_states:
        succs = k.successors(s)
        assert len(k.label(s)) == 1
        assert succs and all(DELTA in k.label(t) for t in succs)
    # every action state has a Delta predecessor
    preds = {t: [s for s in k.states if t in k.successors(s)] for t in k.states}
    assert all(any(DELTA in k.label(p) for p in preds[s]) for s in action_states)


def test_delta_simple_chain():
    p = make_lts("ab", [("s0", "a", "s1")], "s0")
    k, s0 = delta_kripke(p)
    assert len(k.states) == 3
    assert check_delta(k, s0, ctl.Atom("a"))
    assert not check_delta(k, s0, ctl.Atom("b"))


def test_delta_tau_edge():
    p = make_lts("a", [("s", "tau", "u")], "s")
    k, _ = delta_kripke(p)
    assert ("s", "u") in k.transitions
    assert len(k.states) == 2


def test_process_sat_matches_split_checker(b1, b2, fig_lts):
    for p in (b1, b2, fig_lts):
        k, q = split_kripke(p)
        for text in ("a" if "a" in p.alphabet else "coin",
                     "E X true", "E G true", "E[true U false]"):
            f = ctl.parse_ctl(text)
            if not ctl.atoms(f) <= p.alphabet:
                continue
            assert check_set(k, q, f) == process_sat(p, p.initial, f)


def test_lts_dot(fig_lts):
    dot = lts_to_dot(fig_lts)
    assert dot.startswith("digraph") and "label=\"a\"" in dot
