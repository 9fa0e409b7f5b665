import pytest

from ftctl import ctl
from ftctl.ctl import (
    AX, EF, EG, EU, EX, And, Atom, CtlSyntaxError, FALSE, Not, Or, TRUE,
    atoms, is_existential, parse_ctl, parse_ctl_file, print_ctl, simplify,
    size, to_existential,
)


def test_parse_coffee_formula():
    f = parse_ctl("coin & E X (coffee | !coffee & bang & E X coffee)")
    assert f == And(
        Atom("coin"),
        EX(Or(Atom("coffee"),
              And(Not(Atom("coffee")), And(Atom("bang"), EX(Atom("coffee")))))),
    )


def test_parse_true():
    assert parse_ctl("true") == TRUE


def test_roundtrip_until():
    assert print_ctl(parse_ctl("E[a U b]")) == "E[a U b]"


@pytest.mark.parametrize("text", [
    "a & b | c",
    "!a",
    "E X (a | b)",
    "A[a U b & c]",
    "E[a R b] | A G !c",
    "A F (a & !b)",
    "E G (a | false)",
])
def test_roundtrip_stable(text):
    f = parse_ctl(text)
    assert parse_ctl(print_ctl(f)) == f


def test_syntax_error_position():
    with pytest.raises(CtlSyntaxError):
        parse_ctl("a & & b")
    with pytest.raises(CtlSyntaxError):
        parse_ctl("E[a U")


def test_parse_file_comments():
    out = parse_ctl_file("# comment\n a \n\n b & c # trailing\n")
    assert out == [Atom("a"), And(Atom("b"), Atom("c"))]


def test_to_existential_ax():
    assert to_existential(AX(Atom("a"))) == Not(EX(Not(Atom("a"))))


def test_to_existential_ef():
    assert to_existential(EF(Atom("a"))) == EU(TRUE, Atom("a"))


def test_to_existential_only_existential_ops():
    f = parse_ctl("A[a U b] | E[a R b] & A G (c | A F a)")
    g = to_existential(f)
    assert is_existential(g)
    assert atoms(g) == atoms(f)


def test_to_existential_idempotent():
    f = parse_ctl("A[a U b] | E[!a R b]")
    g = to_existential(f)
    assert to_existential(g) == g


def test_simplify_absorption():
    f = parse_ctl("a & true | false")
    assert simplify(f) == Atom("a")
    assert simplify(Not(Not(Atom("a")))) == Atom("a")
    assert simplify(EX(TRUE)) == TRUE
    assert simplify(And(Atom("a"), Atom("a"))) == Atom("a")


def test_size():
    assert size(parse_ctl("a & E X b")) == 4
