"""Compile failure trace tests into CTL formulas.

fttoctl_split / fttoctl_delta handle acyclic tests by structural recursion;
tests with loops go through detect_loops + compile_loop, which emits the
finite cycle/exit/count formula family (with the marked loop-entry action
surfacing as a start_<a> proposition in the marked conversions).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import ctl
from .convert import start_prop
from .tlotos import (
    I,
    THETA,
    Choice,
    NodeId,
    Pass,
    Prefix,
    Stop,
    TestGraph,
    init_test,
    is_cyclic,
)


class CompileError(ValueError):
    pass


class CyclicTestError(CompileError):
    """Raised when the plain conversion meets a loop; use compile_compact."""


class UnsupportedLoopError(CompileError):
    pass


def _or_all(formulas: list[ctl.Formula]) -> ctl.Formula:
    if not formulas:
        return ctl.FALSE
    out = formulas[-1]
    for f in reversed(formulas[:-1]):
        out = ctl.Or(f, out)
    return out


def _split_prefix(action: str, cont: ctl.Formula) -> ctl.Formula:
    return ctl.And(ctl.Atom(action), ctl.EX(cont))


def _delta_prefix(action: str, cont: ctl.Formula) -> ctl.Formula:
    walk = ctl.And(ctl.Atom(action), ctl.AX(ctl.Not(ctl.Atom(action))))
    return ctl.And(ctl.EU(walk, cont), ctl.EX(cont))


def _collect_choice(graph: TestGraph, branches) -> tuple[bool, list[NodeId], list[NodeId]]:
    """Flatten nested choices into (gamma-capable, plain branches, theta targets)."""
    has_pass = False
    plain: list[NodeId] = []
    thetas: list[NodeId] = []
    stack = list(branches)
    seen = set()
    while stack:
        cur = stack.pop()
        if cur in seen:
            continue
        seen.add(cur)
        payload = graph.payload(cur)
        if isinstance(payload, Choice):
            stack.extend(payload.branches)
        elif isinstance(payload, Pass):
            has_pass = True
        elif isinstance(payload, Prefix) and payload.label == THETA:
            thetas.append(payload.next)
        elif isinstance(payload, Stop):
            pass
        else:
            plain.append(cur)
    return has_pass, sorted(plain), sorted(thetas)


def _init_disjunction(graph: TestGraph, branches: list[NodeId]) -> ctl.Formula:
    acts: set[str] = set()
    for b in branches:
        acts |= init_test(graph, b)
    return _or_all([ctl.Atom(a) for a in sorted(acts)])


class _Compiler:
    def __init__(self, graph: TestGraph, target: str, compact: bool):
        if target not in ("split", "delta"):
            raise CompileError(f"unknown target {target!r}")
        self.graph = graph
        self.prefix_clause = _split_prefix if target == "split" else _delta_prefix
        self.target = target
        self.compact = compact
        self.memo: dict[NodeId, ctl.Formula] = {}
        self.loop_heads: dict[NodeId, frozenset[NodeId]] = {}
        if compact:
            for comp in _sccs(graph):
                if len(comp) > 1 or _self_loop(graph, comp):
                    head = _loop_entry(graph, comp)
                    self.loop_heads[head] = comp

    def compile(self, nid: NodeId) -> ctl.Formula:
        if nid in self.memo:
            return self.memo[nid]
        if self.compact and nid in self.loop_heads:
            d = decompose_loop(self.graph, self.loop_heads[nid])
            out = self._loop(d)
        else:
            out = self._node(nid)
        self.memo[nid] = out
        return out

    def _node(self, nid: NodeId) -> ctl.Formula:
        payload = self.graph.payload(nid)
        if isinstance(payload, Pass):
            return ctl.TRUE
        if isinstance(payload, Stop):
            return ctl.FALSE
        if isinstance(payload, Prefix):
            if payload.label in (I, THETA):
                # i;t compiles to t; a bare theta prefix is the theta clause
                # with an empty choice on the left
                return self.compile(payload.next)
            return self.prefix_clause(payload.label, self.compile(payload.next))
        return self.choice(payload.branches)

    def choice(self, branches) -> ctl.Formula:
        has_pass, plain, thetas = _collect_choice(self.graph, branches)
        parts: list[ctl.Formula] = []
        if has_pass:
            parts.append(ctl.TRUE)
        branch_formulas = [self.compile(b) for b in plain]
        if thetas:
            theta_formula = _or_all([self.compile(t) for t in thetas])
            guard = _init_disjunction(self.graph, plain)
            parts.append(
                ctl.Or(
                    ctl.And(guard, _or_all(branch_formulas)),
                    ctl.And(ctl.Not(guard), theta_formula),
                )
            )
        else:
            parts.extend(branch_formulas)
        return _or_all(parts)

    # --- the compact loop formula -------------------------------------------

    def _loop(self, d: LoopDecomposition) -> ctl.Formula:
        graph = self.graph
        n = len(d.cycle_actions)
        acts = d.cycle_actions
        if acts[d.entry_marker] == THETA:
            raise UnsupportedLoopError("marked entry action cannot be theta")

        exit_formula = [self.choice(d.exit_nodes[i]) for i in range(n)]
        exit_init = [
            frozenset().union(
                *[init_test(graph, b) for b in d.exit_nodes[i]]
            ) if d.exit_nodes[i] else frozenset()
            for i in range(n)
        ]
        theta_cont = []
        for i in range(n):
            targets = [
                graph.payload(b).next
                for b in d.exit_nodes[i]
                if isinstance(graph.payload(b), Prefix)
                and graph.payload(b).label == THETA
            ]
            theta_cont.append(
                _or_all([self.compile(t) for t in targets]) if targets else None
            )

        def not_exit_init(i: int) -> ctl.Formula:
            disj = _or_all([ctl.Atom(b) for b in sorted(exit_init[i])])
            return ctl.Not(disj)

        def chain(items: list[ctl.Formula], final: ctl.Formula) -> ctl.Formula:
            # a1 & EX (a2 & EX (... & EX final))
            out = final
            for item in reversed(items):
                out = ctl.And(item, ctl.EX(out))
            return out

        def c_term(i: int) -> ctl.Formula:
            items: list[ctl.Formula] = []
            for k in range(n):
                pos = (i + k) % n
                if acts[pos] == THETA:
                    continue  # theta consumes no state; see the guard below
                item: ctl.Formula = ctl.Atom(acts[pos])
                if acts[(pos - 1) % n] == THETA:
                    # case 1/3: the preceding theta step asserts that the
                    # alternate exit's actions are unavailable
                    item = ctl.And(not_exit_init((pos - 1) % n), item)
                items.append(item)
            if not items:
                raise UnsupportedLoopError("cycle of only theta actions")
            return ctl.EG(chain(items[:-1], items[-1]))

        def e_term(i: int) -> ctl.Formula:
            start = ctl.EG(ctl.Atom(start_prop(acts[d.entry_marker])))
            counted = [
                ctl.Atom(acts[k]) for k in range(1, i + 1) if acts[k] != THETA
            ]
            if acts[i] == THETA:
                # theta exits consume no input: no trailing EX (case 1/3)
                body = ctl.And(not_exit_init((i - 1) % n), exit_formula[i])
                if counted:
                    inner = chain(counted[:-1], ctl.And(counted[-1], body))
                    return ctl.And(start, ctl.EX(inner))
                return ctl.And(start, body)
            if theta_cont[i] is not None:
                # case 2/3: available exit actions beat the theta branch
                avail = _or_all([ctl.Atom(b) for b in sorted(exit_init[i])])
                nxt = acts[(i + 1) % n]
                blocked = ctl.Not(avail)
                if nxt != THETA:
                    blocked = ctl.And(ctl.Not(ctl.Atom(nxt)), blocked)
                body = ctl.Or(
                    ctl.And(avail, exit_formula[i]),
                    ctl.And(blocked, theta_cont[i]),
                )
            else:
                body = exit_formula[i]
            return ctl.And(start, ctl.EX(chain(counted, body)))

        c_all = _or_all([c_term(i) for i in range(n)])
        e_all = _or_all([e_term(i) for i in range(n)])
        return ctl.Or(ctl.EU(c_all, e_all), exit_formula[0])


def fttoctl_split(graph: TestGraph) -> ctl.Formula:
    """pass -> true; stop -> false; a;t -> a & EX fttoctl(t); sums become
    disjunctions; t1 [] theta;t branches on the init guard of t1."""
    if is_cyclic(graph):
        raise CyclicTestError("cyclic test: use compile_compact")
    return _Compiler(graph, "split", compact=False).compile(graph.root)


def fttoctl_delta(graph: TestGraph) -> ctl.Formula:
    """Same recursion with a;t -> E[(a & AX !a) U fttoctl(t)] & EX fttoctl(t)."""
    if is_cyclic(graph):
        raise CyclicTestError("cyclic test: use compile_compact")
    return _Compiler(graph, "delta", compact=False).compile(graph.root)


def compile_compact(graph: TestGraph, target: str = "split") -> ctl.Formula:
    """fttoctl with loop compaction: finite formulas for looping tests."""
    return _Compiler(graph, target, compact=True).compile(graph.root)


# --- loop detection -----------------------------------------------------------


@dataclass(frozen=True)
class LoopDecomposition:
    """A simple cycle a0;(t0 [] a1;(t1 [] ... a_{n-1};(t_{n-1} [] <head>)))."""

    head: NodeId
    cycle_actions: tuple[str, ...]  # visible actions or THETA
    exit_nodes: tuple[tuple[NodeId, ...], ...]  # per position, possibly empty
    entry_marker: int = 0


def _children(graph: TestGraph, n: NodeId):
    payload = graph.payload(n)
    if isinstance(payload, Prefix):
        return (payload.next,)
    if isinstance(payload, Choice):
        return payload.branches
    return ()


def _sccs(graph: TestGraph) -> list[frozenset[NodeId]]:
    index: dict[NodeId, int] = {}
    low: dict[NodeId, int] = {}
    on_stack: set[NodeId] = set()
    stack: list[NodeId] = []
    out: list[frozenset[NodeId]] = []
    counter = [0]

    def strongconnect(v: NodeId):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on_stack.add(v)
        for w in _children(graph, v):
            if w not in index:
                strongconnect(w)
                low[v] = min(low[v], low[w])
            elif w in on_stack:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = set()
            while True:
                w = stack.pop()
                on_stack.discard(w)
                comp.add(w)
                if w == v:
                    break
            out.append(frozenset(comp))

    for n in sorted(graph.nodes):
        if n not in index:
            strongconnect(n)
    return out


def _self_loop(graph: TestGraph, comp: frozenset[NodeId]) -> bool:
    if len(comp) != 1:
        return False
    (n,) = comp
    return n in _children(graph, n)


def _loop_entry(graph: TestGraph, comp: frozenset[NodeId]) -> NodeId:
    entries = set()
    for n in graph.nodes:
        if n in comp:
            continue
        entries.update(t for t in _children(graph, n) if t in comp)
    if graph.root in comp:
        entries.add(graph.root)
    if len(entries) != 1:
        raise UnsupportedLoopError(
            f"loop with {len(entries)} entry points is not in canonical form"
        )
    return entries.pop()


def decompose_loop(graph: TestGraph, comp: frozenset[NodeId]) -> LoopDecomposition:
    """Check the canonical loop shape and extract actions and exit tests."""
    head = _loop_entry(graph, comp)
    if not isinstance(graph.payload(head), Prefix):
        raise UnsupportedLoopError("loop entry must be an action prefix")
    actions: list[str] = []
    exits: list[tuple[NodeId, ...]] = []
    cur = head
    while True:
        payload = graph.payload(cur)
        if not isinstance(payload, Prefix):
            raise UnsupportedLoopError("cycle positions must be action prefixes")
        if payload.label == I:
            raise UnsupportedLoopError("internal actions in the cycle are not supported")
        actions.append(payload.label)
        nxt = payload.next
        if nxt == head:
            exits.append(())
            break
        if nxt not in comp:
            raise UnsupportedLoopError("cycle does not close")
        nxt_payload = graph.payload(nxt)
        if isinstance(nxt_payload, Choice):
            in_comp = [b for b in nxt_payload.branches if b in comp]
            out_comp = [b for b in nxt_payload.branches if b not in comp]
            if any(isinstance(graph.payload(b), Pass) for b in nxt_payload.branches):
                raise UnsupportedLoopError("gamma on the cycle is not supported")
            if len(in_comp) != 1:
                raise UnsupportedLoopError("cycle branches are not a simple cycle")
            exits.append(tuple(sorted(out_comp)))
            cur = in_comp[0]
            if cur == head:
                break
        else:
            exits.append(())
            cur = nxt
    return LoopDecomposition(
        head=head, cycle_actions=tuple(actions), exit_nodes=tuple(exits)
    )


def detect_loops(graph: TestGraph) -> list[LoopDecomposition]:
    """Simple cycles with their exit tests, innermost-first.

    Raises UnsupportedLoopError for strongly connected components that are
    not a single alternating prefix/choice cycle and for gamma-capable
    states on a cycle.
    """
    out = []
    for comp in _sccs(graph):  # Tarjan emits leaf-ward components first
        if len(comp) > 1 or _self_loop(graph, comp):
            out.append(decompose_loop(graph, comp))
    return out


def marked_entry_action(graph: TestGraph) -> str | None:
    """The marked entry action of the first loop, if any."""
    for d in detect_loops(graph):
        if d.cycle_actions[d.entry_marker] != THETA:
            return d.cycle_actions[d.entry_marker]
    return None
