"""Synchronous execution of a process against a test under theta-priority.

may/must verdicts are computed exactly on the finite product graph
(reachability + cycle analysis), so cyclic tests are handled without
unrolling. Pure functions over immutable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lts import TAU, Lts, LtsError, StateId
from .tlotos import GAMMA, I, THETA, NodeId, TestGraph, test_step

SUCCESS = "SUCCESS"

Config = tuple[StateId, NodeId]


@dataclass(frozen=True)
class Verdict:
    may: bool
    must: bool


def compose_step(lts: Lts, p: StateId, graph: TestGraph, n: NodeId):
    """One-step derivatives of the composition p ||theta n.

    Five rules: the process moves alone on tau; the test moves alone on i;
    gamma ends the run in SUCCESS; visible actions synchronize; theta moves
    the test alone and only when no other composite step exists.
    """
    steps: list[tuple[str, object]] = []
    for act, dst in lts.steps(p):
        if act == TAU:
            steps.append((TAU, (dst, n)))
    test_steps = test_step(graph, n)
    for label, target in test_steps:
        if label == I:
            steps.append((I, (p, target)))
        elif label == GAMMA:
            steps.append((GAMMA, SUCCESS))
    enabled = lts._succ[p] if p in lts._succ else []
    for label, target in test_steps:
        if label in (I, THETA, GAMMA):
            continue
        for act, dst in enabled:
            if act == label:
                steps.append((label, (dst, target)))
    if not steps:
        for label, target in test_steps:
            if label == THETA:
                steps.append((THETA, (p, target)))
    return steps


def _check_inputs(lts: Lts, graph: TestGraph) -> None:
    for nid in graph.nodes:
        for label, _ in test_step(graph, nid):
            if label not in (I, THETA, GAMMA) and label not in lts.alphabet:
                raise LtsError(f"test action {label!r} not in the process alphabet")


def _reachable(lts: Lts, graph: TestGraph):
    start: Config = (lts.initial, graph.root)
    seen = {start}
    succ: dict[object, list[object]] = {}
    stack = [start]
    success_reachable = False
    while stack:
        cur = stack.pop()
        nexts = []
        for _, target in compose_step(lts, cur[0], graph, cur[1]):
            nexts.append(target)
            if target == SUCCESS:
                success_reachable = True
            elif target not in seen:
                seen.add(target)
                stack.append(target)
        succ[cur] = nexts
    return start, succ, success_reachable


def may(lts: Lts, graph: TestGraph) -> bool:
    """True iff a successful run exists (SUCCESS reachable in the product)."""
    _check_inputs(lts, graph)
    _, _, ok = _reachable(lts, graph)
    return ok


def must(lts: Lts, graph: TestGraph) -> bool:
    """True iff every maximal run succeeds.

    Failing runs are (a) finite runs ending in a deadlocked non-success
    configuration and (b) infinite runs, which never end in gamma; any
    reachable cycle yields one.
    """
    _check_inputs(lts, graph)
    start, succ, _ = _reachable(lts, graph)
    for cfg, nexts in succ.items():
        if not nexts:
            return False  # deadlock without gamma
    # cycle detection over the reachable product
    WHITE, GREY, BLACK = 0, 1, 2
    color: dict[object, int] = {}
    stack = [(start, iter(succ.get(start, ())))]
    color[start] = GREY
    while stack:
        node, it = stack[-1]
        advanced = False
        for nxt in it:
            if nxt == SUCCESS:
                continue
            c = color.get(nxt, WHITE)
            if c == GREY:
                return False  # reachable cycle: infinite failing run
            if c == WHITE:
                color[nxt] = GREY
                stack.append((nxt, iter(succ.get(nxt, ()))))
                advanced = True
                break
        if not advanced:
            color[node] = BLACK
            stack.pop()
    return True


def verdict(lts: Lts, graph: TestGraph) -> Verdict:
    return Verdict(may=may(lts, graph), must=must(lts, graph))


def obs(lts: Lts, graph: TestGraph, bound: int):
    """Outcomes of runs terminating within `bound` steps.

    Returns a subset of {True, False}: True for runs ending in gamma, False
    for runs ending deadlocked. Runs still unfinished at the bound contribute
    nothing (divergent compositions have infinitely many of those).
    """
    _check_inputs(lts, graph)
    outcomes: set[bool] = set()
    start: Config = (lts.initial, graph.root)
    frontier: set[object] = {start}
    # depth-bounded exploration; dedup per level keeps this linear-ish
    for _ in range(bound + 1):
        nxt: set[object] = set()
        for cfg in frontier:
            if cfg == SUCCESS:
                outcomes.add(True)
                continue
            steps = compose_step(lts, cfg[0], graph, cfg[1])
            if not steps:
                outcomes.add(False)
                continue
            for _, target in steps:
                nxt.add(target)
        frontier = nxt
        if not frontier:
            break
    for cfg in frontier:
        if cfg == SUCCESS:
            outcomes.add(True)
    return frozenset(outcomes)
