"""CTL formulas to failure trace tests, on top of a test algebra.

The algebra (negation, disjunction with restriction, De Morgan conjunction)
runs inside a single workspace. Boolean combinations of tests are kept in a
canonical disjunctive normal form over "literal" nodes (plain test nodes and
their memoized negation stubs), so the mutually recursive definitions that
arise when cyclic EG/EU tests feed back into the algebra close over a finite
space instead of unrolling. DNF nodes are real test-graph nodes whose
payloads realize the eq-ft-or construction clause by clause.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import ctl
from .tlotos import (
    I,
    THETA,
    Choice,
    GraphBuilder,
    NodeId,
    Pass,
    Prefix,
    Stop,
    TestGraph,
    copy_into,
)

Clause = frozenset  # of literal NodeIds
Dnf = frozenset  # of Clauses


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class TopNormalTest:
    """sum{b; t(b) : b in B} [] theta; tN, plus a gamma flag."""

    branches: dict
    theta_branch: NodeId | None
    has_gamma: bool


class _Workspace:
    def __init__(self, alphabet):
        self.b = GraphBuilder()
        self.alphabet = tuple(sorted(alphabet))
        self.neg_link: dict[NodeId, NodeId] = {}
        self.dnfdefs: dict[NodeId, Dnf] = {}
        self.dnf_memo: dict[Dnf, NodeId] = {}
        self.restrict_memo: dict[tuple[NodeId, str], NodeId] = {}
        self.theta_merge: dict[frozenset, NodeId] = {}
        self.pending: set[NodeId] = set()
        self.queue: list[tuple] = []

    def reserve_pending(self) -> NodeId:
        n = self.b.reserve()
        self.pending.add(n)
        return n

    def fill(self, n: NodeId, payload) -> None:
        self.b.set(n, payload)
        self.pending.discard(n)

    def payload(self, n: NodeId):
        return self.b.nodes[n]

    # --- views -----------------------------------------------------------------

    def top_normal(self, n: NodeId, structural: bool = False) -> TopNormalTest:
        """Flatten choices and merge theta branches; unless structural,
        top-level i prefixes are unfolded into the view."""
        has_gamma = False
        branches: dict[str, list[NodeId]] = {}
        thetas: list[NodeId] = []
        seen: set[NodeId] = set()
        stack = [n]
        while stack:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            if cur in self.pending:
                raise AlgebraError("pending node reached normalization")
            payload = self.payload(cur)
            if isinstance(payload, Pass):
                has_gamma = True
            elif isinstance(payload, Stop):
                pass
            elif isinstance(payload, Choice):
                stack.extend(payload.branches)
            elif payload.label == I and not structural:
                stack.append(payload.next)
            elif payload.label == THETA:
                thetas.append(payload.next)
            else:
                branches.setdefault(payload.label, []).append(payload.next)
        return TopNormalTest(
            branches={a: tuple(v) for a, v in sorted(branches.items())},
            theta_branch=self._merge_theta(thetas),
            has_gamma=has_gamma,
        )

    def _merge_theta(self, thetas: list[NodeId]) -> NodeId | None:
        if not thetas:
            return None
        key = frozenset(thetas)
        if len(key) == 1:
            return thetas[0]
        if key not in self.theta_merge:
            self.theta_merge[key] = self.b.choice(sorted(key))
        return self.theta_merge[key]

    def can_view(self, n: NodeId) -> bool:
        if n in self.pending:
            return False
        try:
            self.top_normal(n)
            return True
        except AlgebraError:
            return False

    def effectively_true(self, n: NodeId) -> bool:
        """True iff every tau-free process may-passes this test: gamma is
        reachable through i steps and theta steps that offer nothing else.
        Pending nodes report False (content unknown)."""
        seen = set()
        cur = n
        while cur not in seen:
            seen.add(cur)
            if cur in self.pending or not self.can_view(cur):
                return False
            view = self.top_normal(cur)
            if view.has_gamma:
                return True
            if view.branches or view.theta_branch is None:
                return False
            cur = view.theta_branch
        return False

    def is_dead(self, n: NodeId) -> bool:
        """No gamma anywhere reachable: the test can never succeed.
        Pending nodes count as live (their content is not known yet)."""
        seen = {n}
        stack = [n]
        while stack:
            cur = stack.pop()
            if cur in self.pending:
                return False
            payload = self.b.nodes[cur]
            if isinstance(payload, Pass):
                return False
            children = ()
            if isinstance(payload, Prefix):
                children = (payload.next,)
            elif isinstance(payload, Choice):
                children = payload.branches
            for c in children:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return True

    # --- the DNF layer -----------------------------------------------------------

    def to_dnf(self, n: NodeId, _seen: frozenset = frozenset()) -> Dnf:
        if n in _seen:
            return frozenset()  # an i-cycle never succeeds: empty disjunction
        if n in self.dnfdefs:
            return self.dnfdefs[n]
        payload = self.b.nodes.get(n)
        if isinstance(payload, Prefix) and payload.label == I and n not in self.pending:
            return self.to_dnf(payload.next, _seen | {n})
        if isinstance(payload, Choice) and self.pure_i_choice(payload):
            out: set[Clause] = set()
            for br in payload.branches:
                sub = self.payload(br)
                if isinstance(sub, Prefix) and sub.label == I:
                    out |= self.to_dnf(sub.next, _seen | {n})
            return frozenset(out)
        return frozenset([frozenset([n])])

    def pure_i_choice(self, payload: Choice) -> bool:
        """i-guarded branches plus possibly a dead theta;pass: such a choice
        is a plain may-disjunction of the i targets."""
        has_i = False
        for br in payload.branches:
            sub = self.payload(br)
            if not isinstance(sub, Prefix):
                return False
            if sub.label == I:
                has_i = True
            elif sub.label == THETA:
                if not isinstance(self.payload(sub.next), Pass):
                    return False
            else:
                return False
        return has_i

    def _canon(self, clauses) -> Dnf | bool:
        """Simplify a clause set; True/False for trivial outcomes."""
        out: set[Clause] = set()
        for clause in clauses:
            lits = set()
            dead = False
            for lit in clause:
                if self.effectively_true(lit):
                    continue  # a conjunct that always passes adds nothing
                if lit not in self.pending and self.is_dead(lit):
                    dead = True
                    break
                if self.neg_link.get(lit) in clause:
                    dead = True  # x and not-x together never both pass
                    break
                lits.add(lit)
            if dead:
                continue
            if not lits:
                return True
            out.add(frozenset(lits))
        if not out:
            return False
        # absorption: a clause subsuming another is redundant
        minimal = {
            c for c in out if not any(o < c for o in out)
        }
        return frozenset(minimal)

    def dnf_node(self, clauses) -> NodeId:
        canon = self._canon(clauses)
        if canon is True:
            return self.b.passed()
        if canon is False:
            return self.b.stop()
        if len(canon) == 1 and len(next(iter(canon))) == 1:
            return next(iter(next(iter(canon))))
        if canon in self.dnf_memo:
            return self.dnf_memo[canon]
        if len(self.b.nodes) > 500_000:
            raise AlgebraError("test algebra workspace exceeded its size budget")
        out = self.reserve_pending()
        self.dnf_memo[canon] = out
        self.dnfdefs[out] = canon
        self.queue.append(("dnf", out, canon))
        return out

    def or_(self, nodes) -> NodeId:
        clauses: set[Clause] = set()
        for n in nodes:
            clauses |= self.to_dnf(n)
        return self.dnf_node(clauses)

    def and_(self, n1: NodeId, n2: NodeId) -> NodeId:
        return self.and_set([n1, n2])

    def and_set(self, nodes) -> NodeId:
        product: set[Clause] = {frozenset()}
        for n in nodes:
            dnf = self.to_dnf(n)
            product = {c1 | c2 for c1 in product for c2 in dnf}
        return self.dnf_node(product)

    def neg(self, n: NodeId) -> NodeId:
        if n in self.neg_link:
            return self.neg_link[n]
        if n in self.dnfdefs or (
            isinstance(self.b.nodes.get(n), Choice)
            and self.pure_i_choice(self.b.nodes[n])
        ):
            # De Morgan over the clause structure: pick one negated literal
            # from every clause, in all combinations
            dnf = self.to_dnf(n)
            picks: set[Clause] = {frozenset()}
            for clause in dnf:
                neglits = [self.neg(lit) for lit in sorted(clause)]
                picks = {p | {nl} for p in picks for nl in neglits}
            out = self.dnf_node(picks)
            self.neg_link.setdefault(n, out)
            return out
        if n in self.pending:
            out = self.reserve_pending()
            self.link(n, out)
            self.queue.append(("neg", n, out))
            return out
        out = self.reserve_pending()
        self.link(n, out)
        self.fill(out, self.neg_payload(n))
        return out

    def link(self, n: NodeId, out: NodeId) -> None:
        self.neg_link[n] = out
        self.neg_link[out] = n

    # --- negation of plain nodes --------------------------------------------------

    def neg_payload(self, n: NodeId):
        """Success states deadlock, deadlock-by-theta states succeed.

        gamma-capable states negate to stop; theta branches to pure success
        are dropped; theta-less states gain a theta;pass branch; an existing
        theta continuation is negated recursively.
        """
        view = self.top_normal(n, structural=True)
        if view.has_gamma:
            return Stop()
        parts: list[NodeId] = []
        for label, conts in sorted(view.branches.items()):
            # several branches with one action offer their continuations
            # disjunctively, so the negation conjoins the negations
            negs = [self.neg(cont) for cont in conts]
            target = negs[0] if len(negs) == 1 else self.and_set(negs)
            parts.append(self.b.prefix(label, target))
        if view.theta_branch is None:
            parts.append(self.b.prefix(THETA, self.b.passed()))
        elif not self.effectively_true(view.theta_branch):
            parts.append(self.b.prefix(THETA, self.neg(view.theta_branch)))
        if not parts:
            return Stop()
        if len(parts) == 1:
            return self.payload(parts[0])
        return Choice(tuple(parts))

    # --- restriction ----------------------------------------------------------------

    def restrict(self, n: NodeId, action: str) -> NodeId:
        """t|b: t restricted to performing b as its first action.

        Recursion through theta branches may close a cycle; the result is
        then itself cyclic (a loop that never performs b contributes stop).
        """
        key = (n, action)
        if key in self.restrict_memo:
            return self.restrict_memo[key]
        out = self.reserve_pending()
        self.restrict_memo[key] = out
        if self.can_view(n):
            self._fill_restrict(out, n, action)
        else:
            self.queue.append(("restrict", n, action, out))
        return out

    def _fill_restrict(self, out: NodeId, n: NodeId, action: str) -> None:
        view = self.top_normal(n)
        parts: list[NodeId] = []
        if view.has_gamma:
            parts.append(self.b.passed())
        if view.theta_branch is not None:
            if action in view.branches:
                parts.extend(view.branches[action])
            else:
                parts.append(self.restrict(view.theta_branch, action))
        else:
            parts.extend(view.branches.get(action, ()))
        parts = [p for p in parts if not isinstance(self.b.nodes.get(p), Stop)
                 or p in self.pending]
        if not parts:
            self.fill(out, Stop())
        elif len(parts) == 1 and parts[0] not in self.pending and parts[0] != out:
            self.fill(out, self.payload(parts[0]))
        else:
            self.fill(out, Prefix(I, parts[0]) if len(parts) == 1
                      else Choice(tuple(parts)))

    # --- filling DNF nodes ------------------------------------------------------------

    def _clause_view(self, clause: Clause):
        """The conjunction's behaviour, by De Morgan composition of the
        literal views: an action branch needs every conjunct to follow (via
        its branch or, failing that, the complement of its restricted
        negated theta continuation), the theta branch needs every conjunct
        to own one."""
        views = {
            lit: self.top_normal(lit)
            for lit in sorted(clause)
        }
        # gamma-capable conjuncts always pass and constrain nothing
        views = {lit: v for lit, v in views.items() if not v.has_gamma}
        if not views:
            return True, {}, None
        actions = sorted({a for v in views.values() for a in v.branches})
        branches: dict[str, NodeId] = {}
        for action in actions:
            conjuncts: list[NodeId] = []
            feasible = True
            for lit, view in views.items():
                if action in view.branches:
                    if len(view.branches[action]) == 1:
                        conjuncts.append(view.branches[action][0])
                    else:
                        conjuncts.append(self.or_(view.branches[action]))
                elif view.theta_branch is not None:
                    blocked = self.restrict(self.neg(view.theta_branch), action)
                    conjuncts.append(self.neg(blocked))
                else:
                    feasible = False
                    break
            if feasible:
                branches[action] = self.and_set(conjuncts)
        theta = None
        theta_parts = []
        for lit, view in views.items():
            if view.theta_branch is None:
                theta_parts = None
                break
            theta_parts.append(view.theta_branch)
        if theta_parts:
            theta = self.and_set(theta_parts)
        return False, branches, theta

    def _fill_dnf(self, out: NodeId, clauses: Dnf) -> None:
        """eq-ft-or over the clause behaviours: common actions join the
        continuations disjunctively, absent actions fall back to the
        restricted theta continuation, theta branches merge."""
        clause_views = [self._clause_view(c) for c in sorted(clauses, key=sorted)]
        parts: list[NodeId] = []
        if any(gamma for gamma, _, _ in clause_views):
            parts.append(self.b.passed())
        all_actions = sorted({a for _, branches, _ in clause_views for a in branches})
        for action in all_actions:
            contribs: list[NodeId] = []
            for gamma, branches, theta in clause_views:
                if action in branches:
                    contribs.append(branches[action])
                elif theta is not None:
                    contribs.append(self.restrict(theta, action))
            parts.append(self.b.prefix(action, self.or_(contribs)))
        theta_targets = [
            theta for _, _, theta in clause_views if theta is not None
        ]
        if theta_targets:
            parts.append(self.b.prefix(THETA, self.or_(theta_targets)))
        if not parts:
            self.fill(out, Stop())
        elif len(parts) == 1:
            self.fill(out, self.payload(parts[0]))
        else:
            self.fill(out, Choice(tuple(parts)))

    # --- worklist ------------------------------------------------------------------

    def drain(self) -> None:
        """Fill deferred nodes once their inputs become viewable."""
        while self.queue:
            progressed = False
            rest = []
            for entry in self.queue:
                kind = entry[0]
                if kind == "dnf":
                    _, out, clauses = entry
                    lits = {lit for c in clauses for lit in c}
                    if all(self.can_view(lit) for lit in lits):
                        self._fill_dnf(out, clauses)
                        progressed = True
                    else:
                        rest.append(entry)
                elif kind == "neg":
                    _, src, out = entry
                    if self.can_view(src):
                        self.fill(out, self.neg_payload(src))
                        progressed = True
                    else:
                        rest.append(entry)
                else:  # restrict
                    _, src, action, out = entry
                    if self.can_view(src):
                        self._fill_restrict(out, src, action)
                        progressed = True
                    else:
                        rest.append(entry)
            self.queue = rest
            if self.queue and not progressed:
                raise AlgebraError("deferred algebra operations cannot resolve")

    # --- the compiler ----------------------------------------------------------------

    def sigma_all(self, target: NodeId) -> list[NodeId]:
        return [self.b.prefix(a, target) for a in self.alphabet]

    def compile(self, f: ctl.Formula) -> NodeId:
        if isinstance(f, ctl.TrueF):
            return self.b.passed()
        if isinstance(f, ctl.FalseF):
            return self.b.stop()
        if isinstance(f, ctl.Atom):
            if f.name not in self.alphabet:
                raise AlgebraError(f"atom {f.name!r} not in the alphabet")
            return self.b.prefix(f.name, self.b.passed())
        if isinstance(f, ctl.Not):
            return self.neg(self.compile(f.sub))
        if isinstance(f, ctl.Or):
            return self.or_([self.compile(f.left), self.compile(f.right)])
        if isinstance(f, ctl.And):
            return self.and_set([self.compile(f.left), self.compile(f.right)])
        if isinstance(f, ctl.EX):
            sub = self.compile(f.sub)
            return self.b.choice(self.sigma_all(sub))
        if isinstance(f, ctl.EF):
            # rec T. i;ctltoft(f) [] sum{a; T}; kept for direct use, though
            # normalization rewrites EF into EU
            sub = self.compile(f.sub)
            root = self.b.reserve()
            branches = [self.b.prefix(I, sub)] + self.sigma_all(root)
            self.b.set(root, Choice(tuple(branches)))
            return root
        if isinstance(f, ctl.EG):
            return self.compile_eg(self.compile(f.sub))
        if isinstance(f, ctl.EU):
            return self.compile_eu(self.compile(f.left), f.right)
        raise AlgebraError(
            f"operator {type(f).__name__} must be normalized away (to_existential)"
        )

    def compile_eg(self, sub: NodeId) -> NodeId:
        """rec T. sub AND (sum{a; T} [] theta;pass): T is the conjunction
        node itself, tied through the DNF table before it is filled."""
        result = self.reserve_pending()
        loop = self.b.choice(
            self.sigma_all(result) + [self.b.prefix(THETA, self.b.passed())]
        )
        key = frozenset([frozenset([sub, loop])])
        canon = self._canon(key)
        if canon is True:
            self.fill(result, Pass())
            return result
        if canon is False:
            self.fill(result, Stop())
            return result
        if canon in self.dnf_memo:
            self.fill(result, Prefix(I, self.dnf_memo[canon]))
            return result
        self.dnf_memo[canon] = result
        self.dnfdefs[result] = canon
        self.queue.append(("dnf", result, canon))
        return result

    def compile_eu(self, left: NodeId, right_formula: ctl.Formula) -> NodeId:
        """(i; left AND (sum{a; T1} [] theta;pass)) [] (i; EG-test of right),
        T1 the until-test itself; both branches i-guarded so their theta
        machinery stays independent."""
        g2 = self.compile_eg(self.compile(right_formula))
        and1 = self.reserve_pending()
        root = self.b.reserve()
        loop = self.b.choice(
            self.sigma_all(root) + [self.b.prefix(THETA, self.b.passed())]
        )
        self.b.set(
            root, Choice((self.b.prefix(I, and1), self.b.prefix(I, g2)))
        )
        key = frozenset([frozenset([left, loop])])
        canon = self._canon(key)
        if canon is True:
            self.fill(and1, Pass())
        elif canon is False:
            self.fill(and1, Stop())
        elif canon in self.dnf_memo:
            self.fill(and1, Prefix(I, self.dnf_memo[canon]))
        else:
            self.dnf_memo[canon] = and1
            self.dnfdefs[and1] = canon
            self.queue.append(("dnf", and1, canon))
        return root


# --- public surface -----------------------------------------------------------


def _alphabet_of(graphs) -> set[str]:
    out: set[str] = set()
    for g in graphs:
        for nid in g.nodes:
            payload = g.payload(nid)
            if isinstance(payload, Prefix) and payload.label not in (I, THETA):
                out.add(payload.label)
    return out


def normalize_top(graph: TestGraph, nid: NodeId | None = None) -> TopNormalTest:
    """Top-level normal form of a test: branch map, theta branch, gamma flag."""
    ws = _Workspace(_alphabet_of([graph]))
    root = copy_into(ws.b, graph, graph.root if nid is None else nid)
    return ws.top_normal(root)


def _finish(ws: _Workspace, root: NodeId) -> TestGraph:
    ws.drain()
    graph = ws.b.graph(root)
    leftover = ws.pending & set(graph.nodes)
    if leftover:
        raise AlgebraError(f"unresolved nodes after drain: {sorted(leftover)}")
    return graph


def neg_test(graph: TestGraph) -> TestGraph:
    """may(p, neg_test(t)) is intended to complement may(p, t); see the
    module tests for where the underlying construction can and cannot do so."""
    ws = _Workspace(_alphabet_of([graph]))
    root = copy_into(ws.b, graph)
    return _finish(ws, ws.neg(root))


def restrict(graph: TestGraph, action: str) -> TestGraph:
    ws = _Workspace(_alphabet_of([graph]) | {action})
    root = copy_into(ws.b, graph)
    return _finish(ws, ws.restrict(root, action))


def or_test(g1: TestGraph, g2: TestGraph) -> TestGraph:
    ws = _Workspace(_alphabet_of([g1, g2]))
    r1 = copy_into(ws.b, g1)
    r2 = copy_into(ws.b, g2)
    return _finish(ws, ws.or_([r1, r2]))


def and_test(g1: TestGraph, g2: TestGraph) -> TestGraph:
    ws = _Workspace(_alphabet_of([g1, g2]))
    r1 = copy_into(ws.b, g1)
    r2 = copy_into(ws.b, g2)
    return _finish(ws, ws.and_set([r1, r2]))


def prune_test(graph: TestGraph) -> TestGraph:
    """Drop may-dead branches (no success reachable) from theta-free choices.

    Dead branches never contribute a successful run, but next to a theta
    branch they still suppress it, so those are kept. i branches likewise
    keep their structure (their steps also suppress theta).
    """
    rev: dict[NodeId, set[NodeId]] = {n: set() for n in graph.nodes}
    for nid in graph.nodes:
        payload = graph.payload(nid)
        children = ()
        if isinstance(payload, Prefix):
            children = (payload.next,)
        elif isinstance(payload, Choice):
            children = payload.branches
        for c in children:
            rev[c].add(nid)
    stack = [n for n in graph.nodes if isinstance(graph.payload(n), Pass)]
    alive = set(stack)
    while stack:
        cur = stack.pop()
        for p in rev[cur]:
            if p not in alive:
                alive.add(p)
                stack.append(p)

    b = GraphBuilder()
    memo: dict[NodeId, NodeId] = {}

    def flat(nid: NodeId, seen: set[NodeId]):
        """Structural choice flattening: (gamma, [(label, target)...])."""
        if nid in seen:
            return False, []
        seen.add(nid)
        payload = graph.payload(nid)
        if isinstance(payload, Pass):
            return True, []
        if isinstance(payload, Stop):
            return False, []
        if isinstance(payload, Prefix):
            return False, [(payload.label, payload.next)]
        gamma = False
        items: list[tuple[str, NodeId]] = []
        for br in payload.branches:
            g, sub = flat(br, seen)
            gamma = gamma or g
            items.extend(sub)
        return gamma, items

    def rebuild(nid: NodeId) -> NodeId:
        if nid in memo:
            return memo[nid]
        out = b.reserve()
        memo[nid] = out
        gamma, items = flat(nid, set())
        has_theta = any(label == THETA for label, _ in items)
        kept = []
        for label, target in items:
            if not has_theta and label != THETA and target not in alive:
                continue
            kept.append((label, target))
        parts = []
        if gamma:
            parts.append(b.passed())
        for label, target in kept:
            parts.append(b.prefix(label, rebuild(target)))
        if not parts:
            b.set(out, Stop())
        elif len(parts) == 1:
            b.set(out, b.nodes[parts[0]])
        else:
            b.set(out, Choice(tuple(parts)))
        return out

    return b.graph(rebuild(graph.root))


def ctltoft(f: ctl.Formula, alphabet) -> TestGraph:
    """Compile an existential-normalized formula into a failure trace test."""
    alphabet = sorted(set(alphabet))
    if not alphabet:
        raise AlgebraError("alphabet must be nonempty")
    if not ctl.is_existential(f):
        raise AlgebraError("formula must be normalized by to_existential first")
    ws = _Workspace(alphabet)
    return prune_test(_finish(ws, ws.compile(f)))
