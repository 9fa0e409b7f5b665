import pytest

from ftctl.lts import failure_trace
from ftctl.tlotos import (
    GAMMA, I, THETA, Choice, Pass, Prefix, Stop, TestError, TestSyntaxError,
    ftr_of, graphs_isomorphic, has_top_gamma, init_test, is_cyclic,
    is_sequential, parse_test, print_test, st_of, test_step,
)


def test_parse_pass():
    g = parse_test("pass")
    assert isinstance(g.payload(g.root), Pass)
    assert len(g) == 1


def test_parse_coffee_test():
    g = parse_test("coin; (coffee; pass [] theta; bang; coffee; pass)")
    root = g.payload(g.root)
    assert isinstance(root, Prefix) and root.label == "coin"
    choice = g.payload(root.next)
    assert isinstance(choice, Choice) and len(choice.branches) == 2


def test_parse_rec_loop():
    g = parse_test("rec X. a; X")
    root = g.payload(g.root)
    assert isinstance(root, Prefix) and root.next == g.root
    assert is_cyclic(g)


def test_parse_errors():
    with pytest.raises(TestSyntaxError):
        parse_test("a;")
    with pytest.raises(TestSyntaxError):
        parse_test("X")  # unbound
    with pytest.raises(TestSyntaxError):
        parse_test("pass pass")


def test_theta_branches_merged():
    g = parse_test("theta; a; pass [] theta; b; pass [] c; stop")
    _, choice = g.root, g.payload(g.root)
    thetas = [b for b in choice.branches
              if isinstance(g.payload(b), Prefix) and g.payload(b).label == THETA]
    assert len(thetas) == 1


def test_test_step_rules():
    g = parse_test("pass")
    assert test_step(g, g.root) == [(GAMMA, None)]
    g2 = parse_test("a; stop [] theta; pass")
    labels = {label for label, _ in test_step(g2, g2.root)}
    assert labels == {"a", THETA}
    g3 = parse_test("stop")
    assert test_step(g3, g3.root) == []


def test_init_test():
    g = parse_test("a; stop [] theta; pass")
    assert init_test(g) == {"a"}
    g2 = parse_test("i; b; stop")
    assert init_test(g2) == {"b"}
    g3 = parse_test("bang; tea; pass [] coin; (coffee; stop [] theta; pass)")
    assert init_test(g3) == {"coin", "bang"}


def test_has_top_gamma():
    assert has_top_gamma(parse_test("pass [] a; stop"))
    assert has_top_gamma(parse_test("i; pass"))
    assert not has_top_gamma(parse_test("a; pass"))
    assert not has_top_gamma(parse_test("theta; pass"))


def test_st_of_spec_example():
    f = failure_trace([set(), {"coffee"}, set(), set()],
                      ["coin", "bang", "coffee"])
    g = st_of(f, ["coin", "coffee", "tea", "bang"])
    expected = parse_test("coin; (coffee; stop [] theta; bang; coffee; pass)")
    assert graphs_isomorphic(g, expected)


def test_ftr_of_pass():
    f = ftr_of(parse_test("pass"))
    assert f == failure_trace([set()], [])


def test_bijection_round_trips():
    f = failure_trace([{"a"}, set(), {"b", "c"}], ["b", "a"])
    g = st_of(f, "abc")
    assert is_sequential(g)
    assert ftr_of(g) == f
    # and back from the graph side
    g2 = st_of(ftr_of(g), "abc")
    assert graphs_isomorphic(g, g2)


def test_is_sequential_rejects():
    assert not is_sequential(parse_test("a; pass [] b; pass"))
    assert not is_sequential(parse_test("stop"))
    assert not is_sequential(parse_test("i; pass"))
    assert is_sequential(parse_test("a; b; pass"))


def test_print_parse_roundtrip_cyclic():
    g = parse_test("rec X. a; (b; pass [] X)")
    text = print_test(g)
    again = parse_test(text)
    assert graphs_isomorphic(g, again)


def test_print_parse_roundtrip_shared_loop_target():
    # one loop reachable along two different branches
    g = parse_test("rec X. a; (c; X [] b; X)")
    assert graphs_isomorphic(g, parse_test(print_test(g)))


@pytest.mark.parametrize("text", [
    "stop",
    "pass",
    "a; b; pass",
    "sum{a; stop, b; pass, theta; stop}",
    "a; (b; stop [] theta; pass)",
    "rec X. a; X",
    "i; a; pass",
])
def test_print_parse_roundtrip(text):
    g = parse_test(text)
    assert graphs_isomorphic(g, parse_test(print_test(g)))


def test_isomorphism_is_order_insensitive():
    assert graphs_isomorphic(parse_test("a; stop [] b; pass"),
                             parse_test("b; pass [] a; stop"))
    assert not graphs_isomorphic(parse_test("a; stop"), parse_test("a; pass"))
