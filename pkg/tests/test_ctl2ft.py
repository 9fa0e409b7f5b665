import pytest

from ftctl import ctl
from ftctl.ctl2ft import (
    AlgebraError, and_test, ctltoft, neg_test, normalize_top, or_test,
    prune_test, restrict,
)
from ftctl.harness import may
from ftctl.lts import make_lts
from ftctl.tlotos import graphs_isomorphic, parse_test, print_test

C = ["coin", "tea", "bang", "coffee"]


def iso(g, text):
    return graphs_isomorphic(g, parse_test(text))


def test_normalize_top_simple():
    view = normalize_top(parse_test("a; pass [] theta; b; stop"))
    assert set(view.branches) == {"a"}
    assert view.theta_branch is not None
    assert not view.has_gamma


def test_normalize_top_two_branches():
    view = normalize_top(parse_test("a; pass [] b; stop"))
    assert set(view.branches) == {"a", "b"}
    assert view.theta_branch is None


def test_normalize_top_unfolds_i():
    view = normalize_top(parse_test("i; (a; pass [] b; stop) [] c; stop"))
    assert set(view.branches) == {"a", "b", "c"}


def test_normalize_top_disjunction_example():
    t2 = parse_test(
        "coin; pass [] nudge; stop [] theta; (bang; water; pass [] turn; stop)")
    view = normalize_top(t2)
    assert set(view.branches) == {"coin", "nudge"}
    assert view.theta_branch is not None


def test_neg_pass_stop():
    assert iso(neg_test(parse_test("pass")), "stop")
    # stop gains a theta;pass branch, which always succeeds on stable processes
    assert iso(neg_test(parse_test("stop")), "theta; pass")


def test_neg_prefix_paper_example():
    assert iso(neg_test(parse_test("bang; pass")), "bang; stop [] theta; pass")


def test_neg_figure_example():
    t = parse_test("sum{coin; w, tea; w, bang; w, coffee; w} "
                   .replace("w", "(coffee; pass [] bang; coffee; pass)"))
    n = neg_test(t)
    expected = parse_test(
        "sum{coin; w, tea; w, bang; w, coffee; w} [] theta; pass"
        .replace("w", "(coffee; stop [] bang; (coffee; stop [] theta; pass) [] theta; pass)"))
    assert graphs_isomorphic(n, expected)


def test_neg_contract_examples(b1, b2):
    t = parse_test("coin; (coffee; stop [] theta; bang; coffee; pass)")
    n = neg_test(t)
    assert may(b1, n) == (not may(b1, t))
    assert may(b2, n) == (not may(b2, t))


def test_restrict_clauses():
    assert iso(restrict(parse_test("stop"), "b"), "stop")
    assert iso(restrict(parse_test("pass"), "b"), "pass")
    assert iso(restrict(parse_test("b; a; pass"), "b"), "a; pass")
    assert iso(restrict(parse_test("a; pass"), "b"), "stop")
    assert iso(restrict(parse_test("i; b; pass"), "b"), "pass")
    assert iso(restrict(parse_test("a; pass [] b; stop"), "a"), "pass")
    assert iso(restrict(parse_test("b; tea; pass [] theta; stop"), "b"), "tea; pass")
    assert iso(restrict(parse_test("a; pass [] theta; b; c; pass"), "b"), "c; pass")


def test_restrict_disjunction_example():
    tn2 = parse_test("bang; water; pass [] turn; stop")
    assert iso(restrict(tn2, "bang"), "water; pass")


def test_or_base_cases():
    t = parse_test("a; pass")
    assert iso(or_test(parse_test("stop"), t), "a; pass")
    assert iso(or_test(t, parse_test("stop")), "a; pass")
    assert iso(or_test(parse_test("pass"), t), "pass")


def test_or_disjunction_example():
    t1 = parse_test("bang; tea; pass [] coin; (coffee; stop [] theta; pass)")
    t2 = parse_test(
        "coin; pass [] nudge; stop [] theta; (bang; water; pass [] turn; stop)")
    result = or_test(t1, t2)
    assert iso(result,
               "coin; pass [] bang; (tea; pass [] water; pass) [] nudge; stop "
               "[] theta; (bang; water; pass [] turn; stop)")


def test_and_pass_pass():
    p = make_lts("ab", [("s", "a", "t")], "s")
    t = and_test(parse_test("pass"), parse_test("pass"))
    assert may(p, t)


def test_and_contract_on_sequential(b1):
    t1 = parse_test("coin; pass")
    t2 = parse_test("coin; (coffee; stop [] theta; bang; coffee; pass)")
    both = and_test(t1, t2)
    assert may(b1, both) == (may(b1, t1) and may(b1, t2))


def test_ctltoft_atoms():
    assert iso(ctltoft(ctl.TRUE, C), "pass")
    assert iso(ctltoft(ctl.FALSE, C), "stop")
    assert iso(ctltoft(ctl.Atom("coin"), C), "coin; pass")


def test_ctltoft_rejects_unnormalized():
    with pytest.raises(AlgebraError):
        ctltoft(ctl.AX(ctl.Atom("coin")), C)
    with pytest.raises(AlgebraError):
        ctltoft(ctl.Atom("espresso"), C)
    with pytest.raises(AlgebraError):
        ctltoft(ctl.TRUE, [])


def test_ctltoft_ex():
    t = ctltoft(ctl.to_existential(ctl.parse_ctl("E X coffee")), C)
    assert iso(t, "sum{coin; coffee; pass, tea; coffee; pass, "
                  "bang; coffee; pass, coffee; coffee; pass}")


def test_ctltoft_paper_subformula():
    phi = ctl.to_existential(ctl.parse_ctl("coffee | !coffee & bang & E X coffee"))
    assert iso(prune_test(ctltoft(phi, C)), "coffee; pass [] bang; coffee; pass")


def test_ctltoft_paper_formula():
    phi = ctl.to_existential(
        ctl.parse_ctl("coin & E X (coffee | !coffee & bang & E X coffee)"))
    assert iso(ctltoft(phi, C), "coin; (coffee; pass [] bang; coffee; pass)")


def test_ctltoft_eg_ef_eu_terminate():
    for text in ("E G coffee", "E[true U coffee]", "E[coffee U tea]",
                 "E G E[coin U !coffee]"):
        f = ctl.to_existential(ctl.parse_ctl(text))
        t = ctltoft(f, C)
        assert len(t) < 3000


def test_ctltoft_equivalence_spot(b1, b2):
    from ftctl.convert import split_kripke
    from ftctl.kripke import check_set

    phi = ctl.to_existential(
        ctl.parse_ctl("coin & E X (coffee | !coffee & bang & E X coffee)"))
    for p in (b1, b2):
        k, q = split_kripke(p)
        assert check_set(k, q, phi) == may(p, ctltoft(phi, p.alphabet))
