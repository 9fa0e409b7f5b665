import pytest

from ftctl.harness import SUCCESS, compose_step, may, must, obs, verdict
from ftctl.lts import Lts, LtsError, make_lts
from ftctl.tlotos import GAMMA, THETA, parse_test


def stop_lts(alphabet="ab"):
    return Lts(frozenset(["z"]), frozenset(alphabet), frozenset(), "z")


def test_compose_gamma():
    p = stop_lts()
    t = parse_test("pass")
    assert compose_step(p, "z", t, t.root) == [(GAMMA, SUCCESS)]


def test_theta_suppressed_by_sync():
    p = make_lts(["coffee", "tea"], [("s", "coffee", "d")], "s")
    t = parse_test("coffee; pass [] theta; tea; pass")
    steps = compose_step(p, "s", t, t.root)
    assert all(label != THETA for label, _ in steps)
    assert any(label == "coffee" for label, _ in steps)


def test_theta_fires_when_stuck():
    p = make_lts(["coffee", "tea"], [("s", "tea", "d")], "s")
    t = parse_test("coffee; pass [] theta; tea; pass")
    steps = compose_step(p, "s", t, t.root)
    assert [label for label, _ in steps] == [THETA]


def test_theta_suppressed_by_tau():
    p = make_lts(["a"], [("s", "tau", "u")], "s")
    t = parse_test("theta; pass")
    steps = compose_step(p, "s", t, t.root)
    assert all(label != THETA for label, _ in steps)


def test_may_pass_always(b1):
    assert may(b1, parse_test("pass"))
    assert may(stop_lts(), parse_test("pass"))


def test_may_coffee_machines(b1, b2):
    t = parse_test("coin; (coffee; stop [] theta; bang; coffee; pass)")
    assert may(b1, t)
    assert not may(b2, t)


def test_may_alphabet_mismatch(b1):
    with pytest.raises(LtsError):
        may(b1, parse_test("espresso; pass"))


def test_may_cyclic_test(b1):
    t = parse_test("rec X. (coffee; pass [] sum{coin; X, tea; X, bang; X, coffee; X})")
    assert may(b1, t)  # coffee reachable after coin


def test_must_pass(b1):
    assert must(b1, parse_test("pass"))


def test_must_fails_on_infinite_run():
    p = make_lts("ab", [("s", "a", "s"), ("s", "b", "d")], "s")
    t = parse_test("rec X. (a; X [] b; pass)")
    assert may(p, t)
    assert not must(p, t)  # the a-loop never reaches gamma


def test_must_deadlock_failure(b1):
    t = parse_test("coin; coin; pass")
    assert not must(b1, t)


def test_must_straight_line():
    p = make_lts("a", [("s", "a", "d")], "s")
    assert must(p, parse_test("a; pass"))
    assert verdict(p, parse_test("a; pass")) .may


def test_obs_bounded(b1):
    t = parse_test("coin; (coffee; pass [] theta; bang; coffee; pass)")
    outcomes = obs(b1, t, 10)
    assert outcomes == {True, False}
    # too small a bound shows nothing finished
    assert obs(b1, t, 0) == frozenset()


def test_obs_divergent_composition():
    p = make_lts("a", [("s", "tau", "s")], "s")
    assert obs(p, parse_test("a; pass"), 5) == frozenset()
    assert obs(p, parse_test("pass"), 5) == {True}
