"""CTL abstract syntax, concrete syntax, and normalization.

The checker and the test compiler both consume formulas normalized into the
existential fragment {EX, EU, EG} (plus booleans), so dualities live here and
nowhere else.
"""

from __future__ import annotations

from dataclasses import dataclass


class CtlError(ValueError):
    pass


class CtlSyntaxError(CtlError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at column {pos + 1})")
        self.pos = pos


@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class FalseF(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class EX(Formula):
    sub: Formula


@dataclass(frozen=True)
class AX(Formula):
    sub: Formula


@dataclass(frozen=True)
class EF(Formula):
    sub: Formula


@dataclass(frozen=True)
class AF(Formula):
    sub: Formula


@dataclass(frozen=True)
class EG(Formula):
    sub: Formula


@dataclass(frozen=True)
class AG(Formula):
    sub: Formula


@dataclass(frozen=True)
class EU(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class AU(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ER(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class AR(Formula):
    left: Formula
    right: Formula


TRUE = TrueF()
FALSE = FalseF()

_UNARY = {"EX": EX, "AX": AX, "EF": EF, "AF": AF, "EG": EG, "AG": AG}
_BRACKET = {("E", "U"): EU, ("A", "U"): AU, ("E", "R"): ER, ("A", "R"): AR}


def atoms(f: Formula) -> frozenset[str]:
    """All atomic proposition names occurring in f."""
    if isinstance(f, Atom):
        return frozenset([f.name])
    if isinstance(f, (TrueF, FalseF)):
        return frozenset()
    if isinstance(f, (Not, EX, AX, EF, AF, EG, AG)):
        return atoms(f.sub)
    if isinstance(f, (And, Or, EU, AU, ER, AR)):
        return atoms(f.left) | atoms(f.right)
    raise CtlError(f"unknown formula node: {f!r}")


# --- parser ----------------------------------------------------------------
#
# Grammar (| is alternation in this comment, '|' the operator in the input):
#   formula := or
#   or      := and ('|' and)*               (right associative)
#   and     := unary ('&' unary)*           (right associative)
#   unary   := '!' unary | 'E'/'A' temporal | atom-ish
#   temporal:= 'X'|'F'|'G' unary | '[' formula ('U'|'R') formula ']'
#   atom-ish:= 'true' | 'false' | ident | '(' formula ')'


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> CtlSyntaxError:
        return CtlSyntaxError(message, min(self.pos, len(self.text)))

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        if start == self.pos:
            raise self.error("expected identifier")
        return self.text[start:self.pos]

    def formula(self) -> Formula:
        return self.or_()

    def or_(self) -> Formula:
        left = self.and_()
        if self.peek() == "|":
            self.eat("|")
            return Or(left, self.or_())
        return left

    def and_(self) -> Formula:
        left = self.unary()
        if self.peek() == "&":
            self.eat("&")
            return And(left, self.and_())
        return left

    def unary(self) -> Formula:
        ch = self.peek()
        if ch == "!":
            self.eat("!")
            return Not(self.unary())
        if ch == "(":
            self.eat("(")
            f = self.formula()
            self.eat(")")
            return f
        name = self.ident()
        if name in ("E", "A"):
            return self.temporal(name)
        if name == "true":
            return TRUE
        if name == "false":
            return FALSE
        return Atom(name)

    def temporal(self, quant: str) -> Formula:
        if self.peek() == "[":
            self.eat("[")
            left = self.formula()
            op = self.ident()
            if op not in ("U", "R"):
                raise self.error("expected U or R")
            right = self.formula()
            self.eat("]")
            return _BRACKET[(quant, op)](left, right)
        op = self.ident()
        if op not in ("X", "F", "G"):
            raise self.error("expected X, F, G or [")
        return _UNARY[quant + op](self.unary())


def parse_ctl(text: str) -> Formula:
    """Parse one formula; raises CtlSyntaxError with a column on bad input."""
    p = _Parser(text)
    f = p.formula()
    p.skip_ws()
    if p.pos != len(text):
        raise p.error("trailing input")
    return f


def parse_ctl_file(text: str) -> list[Formula]:
    """One formula per line; '#' starts a comment."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_ctl(line))
    return out


def print_ctl(f: Formula) -> str:
    return _print(f, 0)


# precedence levels: 0 = or, 1 = and, 2 = unary/atom
def _print(f: Formula, level: int) -> str:
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return "!" + _print(f.sub, 2)
    if isinstance(f, Or):
        s = f"{_print(f.left, 1)} | {_print(f.right, 0)}"
        return f"({s})" if level > 0 else s
    if isinstance(f, And):
        s = f"{_print(f.left, 2)} & {_print(f.right, 1)}"
        return f"({s})" if level > 1 else s
    if isinstance(f, (EX, AX, EF, AF, EG, AG)):
        op = type(f).__name__
        return f"{op[0]} {op[1]} {_print(f.sub, 2)}"
    if isinstance(f, (EU, AU, ER, AR)):
        op = type(f).__name__
        return f"{op[0]}[{_print(f.left, 0)} {op[1]} {_print(f.right, 0)}]"
    raise CtlError(f"unknown formula node: {f!r}")


# --- normalization ---------------------------------------------------------


def to_existential(f: Formula) -> Formula:
    """Rewrite into the {EX, EU, EG} fragment (booleans untouched).

    EF f     -> E[true U f]
    AX f     -> !EX !f
    AG f     -> !E[true U !f]
    AF f     -> !EG !f
    A[f U g] -> !E[!g U (!f & !g)] & !EG !g
    E[f R g] -> expansion of !A[!f U !g]
    A[f R g] -> !E[!f U !g]
    """
    if isinstance(f, (TrueF, FalseF, Atom)):
        return f
    if isinstance(f, Not):
        return Not(to_existential(f.sub))
    if isinstance(f, And):
        return And(to_existential(f.left), to_existential(f.right))
    if isinstance(f, Or):
        return Or(to_existential(f.left), to_existential(f.right))
    if isinstance(f, EX):
        return EX(to_existential(f.sub))
    if isinstance(f, EG):
        return EG(to_existential(f.sub))
    if isinstance(f, EU):
        return EU(to_existential(f.left), to_existential(f.right))
    if isinstance(f, EF):
        return EU(TRUE, to_existential(f.sub))
    if isinstance(f, AX):
        return Not(EX(Not(to_existential(f.sub))))
    if isinstance(f, AG):
        return Not(EU(TRUE, Not(to_existential(f.sub))))
    if isinstance(f, AF):
        return Not(EG(Not(to_existential(f.sub))))
    if isinstance(f, AU):
        left = to_existential(f.left)
        right = to_existential(f.right)
        return And(
            Not(EU(Not(right), And(Not(left), Not(right)))),
            Not(EG(Not(right))),
        )
    if isinstance(f, AR):
        return Not(EU(Not(to_existential(f.left)), Not(to_existential(f.right))))
    if isinstance(f, ER):
        # E[f R g] = !A[!f U !g], then expand the AU dual.
        return to_existential(Not(AU(Not(f.left), Not(f.right))))
    raise CtlError(f"unknown formula node: {f!r}")


def is_existential(f: Formula) -> bool:
    if isinstance(f, (TrueF, FalseF, Atom)):
        return True
    if isinstance(f, (Not, EX, EG)):
        return is_existential(f.sub)
    if isinstance(f, (And, Or, EU)):
        return is_existential(f.left) and is_existential(f.right)
    return False


def simplify(f: Formula) -> Formula:
    """Constant absorption, double negation, EX true -> true.

    EX true = true relies on the transition relation being total, which
    every Kripke structure in this package guarantees.
    """
    if isinstance(f, Not):
        s = simplify(f.sub)
        if isinstance(s, TrueF):
            return FALSE
        if isinstance(s, FalseF):
            return TRUE
        if isinstance(s, Not):
            return s.sub
        return Not(s)
    if isinstance(f, And):
        a, b = simplify(f.left), simplify(f.right)
        if isinstance(a, FalseF) or isinstance(b, FalseF):
            return FALSE
        if isinstance(a, TrueF):
            return b
        if isinstance(b, TrueF):
            return a
        if a == b:
            return a
        return And(a, b)
    if isinstance(f, Or):
        a, b = simplify(f.left), simplify(f.right)
        if isinstance(a, TrueF) or isinstance(b, TrueF):
            return TRUE
        if isinstance(a, FalseF):
            return b
        if isinstance(b, FalseF):
            return a
        if a == b:
            return a
        return Or(a, b)
    if isinstance(f, EX):
        s = simplify(f.sub)
        if isinstance(s, TrueF):
            return TRUE
        if isinstance(s, FalseF):
            return FALSE
        return EX(s)
    if isinstance(f, (AX, EF, AF, EG, AG)):
        return type(f)(simplify(f.sub))
    if isinstance(f, (EU, AU, ER, AR)):
        return type(f)(simplify(f.left), simplify(f.right))
    return f


def size(f: Formula) -> int:
    """Number of AST nodes."""
    if isinstance(f, (TrueF, FalseF, Atom)):
        return 1
    if isinstance(f, (Not, EX, AX, EF, AF, EG, AG)):
        return 1 + size(f.sub)
    if isinstance(f, (And, Or, EU, AU, ER, AR)):
        return 1 + size(f.left) + size(f.right)
    raise CtlError(f"unknown formula node: {f!r}")
