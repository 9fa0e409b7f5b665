import pytest

from ftctl.lts import make_lts

COFFEE_ALPHABET = ("coin", "coffee", "tea", "bang")


@pytest.fixture(scope="session")
def b1():
    """coin;(tea [] bang;coffee) [] coin;(coffee [] bang;tea)"""
    return make_lts(COFFEE_ALPHABET, [
        ("r", "coin", "u1"), ("r", "coin", "u2"),
        ("u1", "tea", "m1"), ("u1", "bang", "l1"), ("l1", "coffee", "e1"),
        ("u2", "coffee", "m2"), ("u2", "bang", "l2"), ("l2", "tea", "e2"),
    ], "r")


@pytest.fixture(scope="session")
def b2():
    """coin;(tea [] bang;tea) [] coin;(coffee [] bang;coffee)"""
    return make_lts(COFFEE_ALPHABET, [
        ("r", "coin", "u1"), ("r", "coin", "u2"),
        ("u1", "tea", "m1"), ("u1", "bang", "l1"), ("l1", "tea", "e1"),
        ("u2", "coffee", "m2"), ("u2", "bang", "l2"), ("l2", "coffee", "e2"),
    ], "r")


@pytest.fixture(scope="session")
def fig_lts():
    """p-a->q, p-b->t, q-c->r, q-d->s, t-e->u (the split/delta figure)."""
    return make_lts("abcde", [
        ("p", "a", "q"), ("p", "b", "t"),
        ("q", "c", "r"), ("q", "d", "s"), ("t", "e", "u"),
    ], "p")
