"""Seeded random generators for processes, tests, formulas, and traces.

Everything is driven by random.Random(seed), so identical seeds give
identical artifacts byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import ctl
from .lts import TAU, FailureTrace, Lts, failure_trace, make_lts
from .tlotos import I, THETA, Choice, GraphBuilder, NodeId, Prefix, TestGraph, st_of


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    alphabet_size: int = 3
    max_states: int = 6
    max_test_depth: int = 5
    theta_density: float = 0.3
    tau_density: float = 0.0
    gamma_density: float = 0.5

    def __post_init__(self):
        if not (1 <= self.alphabet_size <= 4):
            raise ValueError("alphabet_size must be in 1..4")
        if not (1 <= self.max_states <= 8):
            raise ValueError("max_states must be in 1..8")
        if not (1 <= self.max_test_depth <= 6):
            raise ValueError("max_test_depth must be in 1..6")
        for p in (self.theta_density, self.tau_density, self.gamma_density):
            if not (0.0 <= p <= 1.0):
                raise ValueError("densities must be probabilities")

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple("abcd"[: self.alphabet_size])


def rng_for(cfg: GenConfig, index: int) -> random.Random:
    return random.Random((cfg.seed, index))


def gen_lts(cfg: GenConfig, rng: random.Random) -> Lts:
    """A random connected LTS rooted at s0."""
    n = rng.randint(1, cfg.max_states)
    states = [f"s{i}" for i in range(n)]
    transitions = set()
    # spanning edges keep every state reachable
    for i in range(1, n):
        src = states[rng.randrange(i)]
        transitions.add((src, _gen_action(cfg, rng), states[i]))
    extra = rng.randint(0, n)
    for _ in range(extra):
        src = rng.choice(states)
        dst = rng.choice(states)
        transitions.add((src, _gen_action(cfg, rng), dst))
    return make_lts(cfg.alphabet, transitions, "s0")


def _gen_action(cfg: GenConfig, rng: random.Random) -> str:
    if rng.random() < cfg.tau_density:
        return TAU
    return rng.choice(cfg.alphabet)


def gen_test(cfg: GenConfig, rng: random.Random, depth: int | None = None) -> TestGraph:
    """A random acyclic test of bounded depth."""
    b = GraphBuilder()

    def leaf() -> NodeId:
        if rng.random() < cfg.gamma_density:
            return b.passed()
        return b.stop()

    def go(d: int) -> NodeId:
        if d <= 0:
            return leaf()
        kind = rng.random()
        if kind < 0.15:
            return leaf()
        if kind < 0.55:
            label = rng.choice(cfg.alphabet) if rng.random() > 0.1 else I
            return b.prefix(label, go(d - 1))
        width = rng.randint(2, 3)
        branches = [
            b.prefix(rng.choice(cfg.alphabet), go(d - 1)) for _ in range(width)
        ]
        if rng.random() < cfg.theta_density:
            branches.append(b.prefix(THETA, go(d - 1)))
        return b.choice(branches)

    root = go(depth if depth is not None else cfg.max_test_depth)
    return b.graph(root)


def gen_loop_test(cfg: GenConfig, rng: random.Random, n_actions: int) -> TestGraph:
    """A canonical loop test a0;(t0 [] a1;(t1 [] ... [] <loop>)) with
    theta-free acyclic exits."""
    b = GraphBuilder()
    head = b.reserve()
    cur = head
    for i in range(n_actions):
        action = rng.choice(cfg.alphabet)
        exits = []
        for _ in range(rng.randint(1, 2)):
            exits.append(_acyclic_theta_free(cfg, rng, b, rng.randint(1, 2)))
        nxt = head if i == n_actions - 1 else b.reserve()
        choice = b.add(Choice(tuple(exits + [nxt])))
        b.set(cur, Prefix(action, choice))
        cur = nxt
    return b.graph(head)


def _acyclic_theta_free(cfg: GenConfig, rng: random.Random, b: GraphBuilder,
                        depth: int) -> NodeId:
    if depth <= 0:
        return b.passed() if rng.random() < 0.7 else b.stop()
    return b.prefix(
        rng.choice(cfg.alphabet), _acyclic_theta_free(cfg, rng, b, depth - 1)
    )


def gen_formula(cfg: GenConfig, rng: random.Random, depth: int,
                existential: bool = True) -> ctl.Formula:
    """A random formula over the alphabet; existential=True draws from the
    {EX, EU, EG} fragment directly."""
    def atom() -> ctl.Formula:
        r = rng.random()
        if r < 0.1:
            return ctl.TRUE
        if r < 0.15:
            return ctl.FALSE
        return ctl.Atom(rng.choice(cfg.alphabet))

    def go(d: int) -> ctl.Formula:
        if d <= 0:
            return atom()
        ops = ["not", "and", "or", "ex", "eg", "eu", "atom"]
        if not existential:
            ops += ["ax", "ef", "af", "ag", "au", "er", "ar"]
        op = rng.choice(ops)
        if op == "atom":
            return atom()
        if op == "not":
            return ctl.Not(go(d - 1))
        if op == "and":
            return ctl.And(go(d - 1), go(d - 1))
        if op == "or":
            return ctl.Or(go(d - 1), go(d - 1))
        if op == "ex":
            return ctl.EX(go(d - 1))
        if op == "eg":
            return ctl.EG(go(d - 1))
        if op == "eu":
            return ctl.EU(go(d - 1), go(d - 1))
        if op == "ax":
            return ctl.AX(go(d - 1))
        if op == "ef":
            return ctl.EF(go(d - 1))
        if op == "af":
            return ctl.AF(go(d - 1))
        if op == "ag":
            return ctl.AG(go(d - 1))
        if op == "au":
            return ctl.AU(go(d - 1), go(d - 1))
        if op == "er":
            return ctl.ER(go(d - 1), go(d - 1))
        return ctl.AR(go(d - 1), go(d - 1))

    return go(depth)


def gen_failure_trace(cfg: GenConfig, rng: random.Random,
                      max_actions: int) -> FailureTrace:
    n = rng.randint(0, max_actions)
    actions = [rng.choice(cfg.alphabet) for _ in range(n)]
    refusals = []
    for _ in range(n + 1):
        refusals.append(
            frozenset(a for a in cfg.alphabet if rng.random() < 0.4)
        )
    return failure_trace(refusals, actions)


def gen_sequential_test(cfg: GenConfig, rng: random.Random,
                        max_actions: int) -> TestGraph:
    return st_of(gen_failure_trace(cfg, rng, max_actions), cfg.alphabet)


def gen_kripke(cfg: GenConfig, rng: random.Random, n_props: int = 1):
    """A random total Kripke structure (for the checker oracle suite)."""
    from .kripke import make_kripke

    n = rng.randint(1, cfg.max_states)
    states = [f"k{i}" for i in range(n)]
    props = [f"p{i}" for i in range(n_props)]
    transitions = set()
    for s in states:
        succs = rng.sample(states, rng.randint(1, n))
        transitions.update((s, t) for t in succs)
    labeling = {
        s: frozenset(p for p in props if rng.random() < 0.5) for s in states
    }
    initials = {rng.choice(states)}
    return make_kripke(states, initials, transitions, labeling, props)
