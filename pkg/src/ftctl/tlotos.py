"""TLOTOS test terms as rooted (possibly cyclic) graphs.

Grammar:  stop | pass | a; t | i; t | theta; t | t [] t | sum{t, ...}
          | rec X. t | X
';' is right associative, '[]' binds loosest. Recursion via rec binders
turns into back-edges, so a TestGraph is a finite rooted graph.

Node labels in step results: a visible action name, "i" (internal), "theta",
or "gamma" (only ever emitted by pass).
"""

from __future__ import annotations

from dataclasses import dataclass

from .lts import FailureTrace, LtsError, failure_trace

I = "i"
THETA = "theta"
GAMMA = "gamma"

NodeId = int


class TestError(ValueError):
    __test__ = False  # not a pytest class

    pass


class TestSyntaxError(TestError):
    __test__ = False

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at column {pos + 1})")
        self.pos = pos


@dataclass(frozen=True)
class Stop:
    pass


@dataclass(frozen=True)
class Pass:
    pass


@dataclass(frozen=True)
class Prefix:
    label: str  # visible action, I, or THETA
    next: NodeId


@dataclass(frozen=True)
class Choice:
    branches: tuple[NodeId, ...]


Payload = Stop | Pass | Prefix | Choice

STOP = Stop()
PASS = Pass()


class TestGraph:
    """Rooted test graph; immutable by convention after construction."""

    def __init__(self, nodes: dict[NodeId, Payload], root: NodeId):
        self.nodes = dict(nodes)
        self.root = root
        self._validate()

    def _validate(self):
        for nid, payload in self.nodes.items():
            for child in _children(payload):
                if child not in self.nodes:
                    raise TestError(f"node {nid} points to missing node {child}")
        if self.root not in self.nodes:
            raise TestError("root missing")
        # drop unreachable nodes
        reach = self.reachable(self.root)
        self.nodes = {n: p for n, p in self.nodes.items() if n in reach}

    def payload(self, nid: NodeId) -> Payload:
        return self.nodes[nid]

    def reachable(self, start: NodeId) -> set[NodeId]:
        seen = {start}
        stack = [start]
        while stack:
            cur = stack.pop()
            for child in _children(self.nodes[cur]):
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
        return seen

    def __len__(self):
        return len(self.nodes)


def _children(payload: Payload) -> tuple[NodeId, ...]:
    if isinstance(payload, Prefix):
        return (payload.next,)
    if isinstance(payload, Choice):
        return payload.branches
    return ()


class GraphBuilder:
    """Mutable builder used by parsers and the test algebra."""

    def __init__(self):
        self.nodes: dict[NodeId, Payload] = {}
        self._next = 0

    def add(self, payload: Payload) -> NodeId:
        nid = self._next
        self._next += 1
        self.nodes[nid] = payload
        return nid

    def reserve(self) -> NodeId:
        return self.add(STOP)

    def set(self, nid: NodeId, payload: Payload) -> None:
        self.nodes[nid] = payload

    def stop(self) -> NodeId:
        return self.add(STOP)

    def passed(self) -> NodeId:
        return self.add(PASS)

    def prefix(self, label: str, nxt: NodeId) -> NodeId:
        return self.add(Prefix(label, nxt))

    def choice(self, branches: list[NodeId]) -> NodeId:
        merged = self._merge_thetas(branches)
        if len(merged) == 1:
            return merged[0]
        return self.add(Choice(tuple(merged)))

    def _merge_thetas(self, branches: list[NodeId]) -> list[NodeId]:
        # theta;t1 [] theta;t2 == theta;(t1 [] t2): keep at most one theta branch
        thetas = [
            b for b in branches
            if isinstance(self.nodes[b], Prefix) and self.nodes[b].label == THETA
        ]
        if len(thetas) <= 1:
            return branches
        rest = [b for b in branches if b not in thetas]
        inner = self.choice([self.nodes[b].next for b in thetas])
        return rest + [self.prefix(THETA, inner)]

    def graph(self, root: NodeId) -> TestGraph:
        return TestGraph(self.nodes, root)


def copy_into(builder: GraphBuilder, graph: TestGraph, start: NodeId | None = None,
              mapping: dict[NodeId, NodeId] | None = None) -> NodeId:
    """Copy (the reachable part of) a test graph into builder, cycles kept."""
    start = graph.root if start is None else start
    mapping = {} if mapping is None else mapping

    def go(nid: NodeId) -> NodeId:
        if nid in mapping:
            return mapping[nid]
        fresh = builder.reserve()
        mapping[nid] = fresh
        payload = graph.payload(nid)
        if isinstance(payload, Prefix):
            builder.set(fresh, Prefix(payload.label, go(payload.next)))
        elif isinstance(payload, Choice):
            builder.set(fresh, Choice(tuple(go(b) for b in payload.branches)))
        else:
            builder.set(fresh, payload)
        return fresh

    return go(start)


# --- operational view --------------------------------------------------------


def test_step(graph: TestGraph, nid: NodeId) -> list[tuple[str, NodeId | None]]:
    """One-step derivatives of a node under the TLOTOS rules.

    gamma steps carry None as target (pass --gamma--> stop; the target is
    terminal and irrelevant). Choice and generalized choice lift the steps
    of their branches.
    """
    payload = graph.payload(nid)
    if isinstance(payload, Stop):
        return []
    if isinstance(payload, Pass):
        return [(GAMMA, None)]
    if isinstance(payload, Prefix):
        return [(payload.label, payload.next)]
    out = []
    for b in payload.branches:
        out.extend(test_step(graph, b))
    return out


def init_test(graph: TestGraph, nid: NodeId | None = None) -> frozenset[str]:
    """Visible actions enabled at nid after closing under internal (i) steps."""
    nid = graph.root if nid is None else nid
    seen = set()
    out = set()
    stack = [nid]
    while stack:
        cur = stack.pop()
        if cur in seen:
            continue
        seen.add(cur)
        for label, target in test_step(graph, cur):
            if label == I:
                stack.append(target)
            elif label not in (THETA, GAMMA):
                out.add(label)
    return frozenset(out)


def has_top_gamma(graph: TestGraph, nid: NodeId | None = None) -> bool:
    """True iff a gamma step is enabled at nid after i-closure."""
    nid = graph.root if nid is None else nid
    seen = set()
    stack = [nid]
    while stack:
        cur = stack.pop()
        if cur in seen:
            continue
        seen.add(cur)
        for label, target in test_step(graph, cur):
            if label == GAMMA:
                return True
            if label == I:
                stack.append(target)
    return False


def is_cyclic(graph: TestGraph) -> bool:
    WHITE, GREY, BLACK = 0, 1, 2
    color = {n: WHITE for n in graph.nodes}

    def visit(n: NodeId) -> bool:
        color[n] = GREY
        for c in _children(graph.payload(n)):
            if color[c] == GREY:
                return True
            if color[c] == WHITE and visit(c):
                return True
        color[n] = BLACK
        return False

    return visit(graph.root)


# --- parser ------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.builder = GraphBuilder()
        self.env: dict[str, NodeId] = {}

    def error(self, message: str) -> TestSyntaxError:
        return TestSyntaxError(message, min(self.pos, len(self.text)))

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, k: int = 1) -> str:
        self.skip_ws()
        return self.text[self.pos:self.pos + k]

    def eat(self, token: str):
        if self.peek(len(token)) != token:
            raise self.error(f"expected {token!r}")
        self.pos += len(token)

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

    def term(self) -> NodeId:
        branches = [self.seq()]
        while self.peek(2) == "[]":
            self.eat("[]")
            branches.append(self.seq())
        if len(branches) == 1:
            return branches[0]
        return self.builder.choice(branches)

    def seq(self) -> NodeId:
        ch = self.peek()
        if ch == "(":
            self.eat("(")
            t = self.term()
            self.eat(")")
            return t
        if self.peek(4) == "sum{":
            self.eat("sum{")
            branches = [self.term()]
            while self.peek() == ",":
                self.eat(",")
                branches.append(self.term())
            self.eat("}")
            if not branches:
                raise self.error("empty sum")
            return self.builder.choice(branches)
        name = self.ident()
        if name == "stop":
            return self.builder.stop()
        if name == "pass":
            return self.builder.passed()
        if name == "rec":
            var = self.ident()
            self.eat(".")
            hole = self.builder.reserve()
            outer = self.env.get(var)
            self.env[var] = hole
            body = self.seq_or_term_after_rec()
            if outer is None:
                del self.env[var]
            else:
                self.env[var] = outer
            # rec X. t: the binder node IS the body; redirect the hole
            self.builder.set(hole, self.builder.nodes[body])
            return hole
        if self.peek() == ";":
            self.eat(";")
            label = TAU_MAP.get(name, name)
            return self.builder.prefix(label, self.seq())
        if name in self.env:
            return self.env[name]
        raise self.error(f"unbound name {name!r} (recursion variables must be rec-bound)")

    def seq_or_term_after_rec(self) -> NodeId:
        # rec body extends to the end of the current choice: parse a term
        return self.term()


TAU_MAP = {"i": I, "theta": THETA, "tau": I}


def parse_test(text: str) -> TestGraph:
    p = _Parser(text)
    root = p.term()
    p.skip_ws()
    if p.pos != len(text):
        raise p.error("trailing input")
    return p.builder.graph(root)


def print_test(graph: TestGraph) -> str:
    """Canonical concrete syntax; back-edges become rec binders.

    Nodes shared across branches (not on the current path) are re-expanded,
    so the printed term denotes the same behaviour up to node duplication.
    """
    state: dict[NodeId, int] = {}
    loops: set[NodeId] = set()

    def scan(n: NodeId):
        if state.get(n) == 1:
            loops.add(n)
            return
        if state.get(n) == 2:
            return
        state[n] = 1
        for c in _children(graph.payload(n)):
            scan(c)
        state[n] = 2

    scan(graph.root)
    counter = [0]

    def render(n: NodeId, level: int, bound: dict[NodeId, str]) -> str:
        if n in bound:
            return bound[n]
        prefix = ""
        if n in loops:
            name = f"X{counter[0]}"
            counter[0] += 1
            bound = {**bound, n: name}
            prefix = f"rec {name}. "
        body = render_payload(graph.payload(n), 0 if prefix else level, bound)
        if prefix and level > 0:
            return f"({prefix}{body})"
        return prefix + body

    def render_payload(payload: Payload, level: int, bound: dict[NodeId, str]) -> str:
        if isinstance(payload, Stop):
            return "stop"
        if isinstance(payload, Pass):
            return "pass"
        if isinstance(payload, Prefix):
            return f"{payload.label}; {render(payload.next, 1, bound)}"
        parts = [render(b, 1, bound) for b in payload.branches]
        body = " [] ".join(parts)
        return f"({body})" if level > 0 else body

    return render(graph.root, 0, {})


# --- sequential tests and the ftr/st bijection -------------------------------


def st_of(f: FailureTrace, alphabet=None) -> TestGraph:
    """Sequential test of a failure trace.

    st(empty) = pass, st(a f) = a; st(f), st(A f) = sum{a;stop: a in A} [] theta; st(f).
    Empty refusal sets contribute no guard: a sum over nothing leaves a bare
    theta, which would force stabilization where the trace allows an unstable
    state with an empty refusal.
    """
    if alphabet is not None:
        alphabet = frozenset(alphabet)
        for r in f.refusals:
            if not r <= alphabet:
                raise LtsError("refusal outside alphabet")
        for a in f.actions:
            if a not in alphabet:
                raise LtsError("action outside alphabet")
    b = GraphBuilder()

    def build(i: int) -> NodeId:
        # position i: refusal f.refusals[i], then (if any) action f.actions[i]
        if i == len(f.actions):
            cont = b.passed()
        else:
            cont = b.prefix(f.actions[i], build(i + 1))
        refusal = f.refusals[i]
        if not refusal:
            return cont
        branches = [b.prefix(a, b.stop()) for a in sorted(refusal)]
        branches.append(b.prefix(THETA, cont))
        return b.choice(branches)

    return b.graph(build(0))


def is_sequential(graph: TestGraph, nid: NodeId | None = None) -> bool:
    """Recognizes the canonical image of st_of."""
    try:
        _ftr_items(graph, graph.root if nid is None else nid)
        return True
    except TestError:
        return False


def _ftr_items(graph: TestGraph, nid: NodeId) -> list:
    """Returns the string of refusal sets and actions denoted by a sequential
    test, most general shape: guard? (action ...)* pass."""
    payload = graph.payload(nid)
    if isinstance(payload, Pass):
        return []
    if isinstance(payload, Prefix):
        if payload.label in (THETA, I):
            raise TestError("bare theta/i prefix is not sequential")
        return [payload.label] + _ftr_items(graph, payload.next)
    if isinstance(payload, Choice):
        refusal = set()
        cont: NodeId | None = None
        for b in payload.branches:
            sub = graph.payload(b)
            if not isinstance(sub, Prefix):
                raise TestError("sequential choice branches must be prefixes")
            if sub.label == THETA:
                if cont is not None:
                    raise TestError("two theta branches")
                cont = sub.next
            elif sub.label == I:
                raise TestError("internal action in sequential test")
            else:
                if not isinstance(graph.payload(sub.next), Stop):
                    raise TestError("refusal branch must lead to stop")
                refusal.add(sub.label)
        if cont is None:
            raise TestError("refusal guard without theta branch")
        if not refusal:
            raise TestError("empty refusal guard is not canonical")
        after = _ftr_items(graph, cont)
        if after and isinstance(after[0], frozenset):
            raise TestError("adjacent refusal guards are not canonical")
        return [frozenset(refusal)] + after
    raise TestError("stop is not a sequential test")


def ftr_of(graph: TestGraph, nid: NodeId | None = None) -> FailureTrace:
    """Failure trace of a sequential test (inverse of st_of), in the
    canonical alternating form (empty refusals inserted where the test has
    no guard)."""
    items = _ftr_items(graph, graph.root if nid is None else nid)
    refusals: list[frozenset[str]] = []
    actions: list[str] = []
    expecting_refusal = True
    for item in items:
        if isinstance(item, frozenset):
            refusals.append(item)
            expecting_refusal = False
        else:
            if expecting_refusal:
                refusals.append(frozenset())
            actions.append(item)
            expecting_refusal = True
    if expecting_refusal:
        refusals.append(frozenset())
    return failure_trace(refusals, actions)


# --- graph isomorphism (rooted, ordered by construction) ---------------------


def graphs_isomorphic(g1: TestGraph, g2: TestGraph) -> bool:
    """Rooted isomorphism with choice branches treated as multisets."""

    def canon(graph: TestGraph, nid: NodeId, on_path: dict[NodeId, int], depth: int):
        if nid in on_path:
            return ("loop", depth - on_path[nid])
        payload = graph.payload(nid)
        if isinstance(payload, Stop):
            return ("stop",)
        if isinstance(payload, Pass):
            return ("pass",)
        on_path = {**on_path, nid: depth}
        if isinstance(payload, Prefix):
            return ("prefix", payload.label, canon(graph, payload.next, on_path, depth + 1))
        parts = sorted(
            repr(canon(graph, b, on_path, depth + 1)) for b in payload.branches
        )
        return ("choice", tuple(parts))

    return canon(g1, g1.root, {}, 0) == canon(g2, g2.root, {}, 0)
