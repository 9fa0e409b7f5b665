"""Kripke structures and the three CTL satisfaction regimes.

check_state  -- standard per-state CTL via the labeling algorithm.
check_set    -- satisfaction over a set of states: atoms are existential
                over the set, boolean connectives combine whole judgments,
                and path operators descend through successor fans.
check_delta  -- per-state checking of the Delta-aware transform.

check_state_paths is an independent path-unrolling evaluator (lasso
complete) used as the oracle for the labeling algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import ctl
from .ctl import Formula

DELTA = "Delta"


class KripkeError(ValueError):
    pass


@dataclass(frozen=True)
class Kripke:
    states: frozenset[str]
    initials: frozenset[str]
    transitions: frozenset[tuple[str, str]]
    labeling: dict  # state -> frozenset of proposition names
    props: frozenset[str]
    _succ: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.initials:
            raise KripkeError("at least one initial state required")
        if not self.initials <= self.states:
            raise KripkeError("initial states must be states")
        succ: dict[str, list[str]] = {s: [] for s in self.states}
        for src, dst in self.transitions:
            if src not in self.states or dst not in self.states:
                raise KripkeError(f"transition endpoint missing: {(src, dst)!r}")
            succ[src].append(dst)
        for s, props in self.labeling.items():
            if s not in self.states:
                raise KripkeError(f"labeled state {s!r} missing")
            if not frozenset(props) <= self.props:
                raise KripkeError(f"labels of {s!r} outside props")
            if DELTA in props and len(props) > 1:
                raise KripkeError(f"Delta must be the only label on {s!r}")
        for s in succ:
            succ[s].sort()
        object.__setattr__(self, "_succ", succ)

    def label(self, s: str) -> frozenset[str]:
        return frozenset(self.labeling.get(s, frozenset()))

    def successors(self, s: str) -> list[str]:
        return self._succ[s]

    def is_total(self) -> bool:
        return all(self._succ[s] for s in self.states)


def make_kripke(states, initials, transitions, labeling, props) -> Kripke:
    return Kripke(
        states=frozenset(states),
        initials=frozenset(initials),
        transitions=frozenset(transitions),
        labeling={s: frozenset(v) for s, v in labeling.items()},
        props=frozenset(props),
    )


def make_total(k: Kripke) -> Kripke:
    """Add a self-loop to every successor-less state; idempotent."""
    extra = {(s, s) for s in k.states if not k.successors(s)}
    if not extra:
        return k
    return Kripke(
        states=k.states,
        initials=k.initials,
        transitions=k.transitions | extra,
        labeling=k.labeling,
        props=k.props,
    )


def _require_total(k: Kripke) -> None:
    if not k.is_total():
        raise KripkeError("transition relation must be total (use make_total)")


def _check_atoms(k: Kripke, f: Formula) -> None:
    unknown = ctl.atoms(f) - k.props
    if unknown:
        raise KripkeError(f"unknown atomic propositions: {sorted(unknown)}")


# --- standard per-state checking (labeling algorithm) ------------------------


def sat_states(k: Kripke, f: Formula) -> frozenset[str]:
    """States satisfying f, computed bottom-up on the existential fragment."""
    _require_total(k)
    _check_atoms(k, f)
    return _sat(k, ctl.to_existential(f), {})


def _sat(k: Kripke, f: Formula, memo: dict) -> frozenset[str]:
    if f in memo:
        return memo[f]
    if isinstance(f, ctl.TrueF):
        out = k.states
    elif isinstance(f, ctl.FalseF):
        out = frozenset()
    elif isinstance(f, ctl.Atom):
        out = frozenset(s for s in k.states if f.name in k.label(s))
    elif isinstance(f, ctl.Not):
        out = k.states - _sat(k, f.sub, memo)
    elif isinstance(f, ctl.And):
        out = _sat(k, f.left, memo) & _sat(k, f.right, memo)
    elif isinstance(f, ctl.Or):
        out = _sat(k, f.left, memo) | _sat(k, f.right, memo)
    elif isinstance(f, ctl.EX):
        target = _sat(k, f.sub, memo)
        out = frozenset(s for s in k.states if any(t in target for t in k.successors(s)))
    elif isinstance(f, ctl.EU):
        lhs = _sat(k, f.left, memo)
        current = set(_sat(k, f.right, memo))
        changed = True
        while changed:
            changed = False
            for s in k.states:
                if s not in current and s in lhs and any(
                    t in current for t in k.successors(s)
                ):
                    current.add(s)
                    changed = True
        out = frozenset(current)
    elif isinstance(f, ctl.EG):
        current = set(_sat(k, f.sub, memo))
        changed = True
        while changed:
            changed = False
            for s in list(current):
                if not any(t in current for t in k.successors(s)):
                    current.discard(s)
                    changed = True
        out = frozenset(current)
    else:
        raise KripkeError(f"non-existential operator reached the checker: {f!r}")
    memo[f] = out
    return out


def check_state(k: Kripke, s: str, f: Formula) -> bool:
    """Standard CTL satisfaction at one state."""
    if s not in k.states:
        raise KripkeError(f"unknown state {s!r}")
    return s in sat_states(k, f)


# --- independent oracle: explicit path unrolling with lasso detection --------


def check_state_paths(k: Kripke, s: str, f: Formula) -> bool:
    """Path-semantics evaluator used as an oracle for check_state.

    E/A path formulas are decided by depth-first search over explicit paths;
    repetition of a state along the current path closes a lasso.
    """
    _require_total(k)
    _check_atoms(k, f)
    if s not in k.states:
        raise KripkeError(f"unknown state {s!r}")
    return _peval(k, s, f)


def _peval(k: Kripke, s: str, f: Formula) -> bool:
    if isinstance(f, ctl.TrueF):
        return True
    if isinstance(f, ctl.FalseF):
        return False
    if isinstance(f, ctl.Atom):
        return f.name in k.label(s)
    if isinstance(f, ctl.Not):
        return not _peval(k, s, f.sub)
    if isinstance(f, ctl.And):
        return _peval(k, s, f.left) and _peval(k, s, f.right)
    if isinstance(f, ctl.Or):
        return _peval(k, s, f.left) or _peval(k, s, f.right)
    if isinstance(f, ctl.EX):
        return any(_peval(k, t, f.sub) for t in k.successors(s))
    if isinstance(f, ctl.AX):
        return all(_peval(k, t, f.sub) for t in k.successors(s))
    if isinstance(f, ctl.EF):
        return _peval(k, s, ctl.EU(ctl.TRUE, f.sub))
    if isinstance(f, ctl.AF):
        return not _exists_g_path(k, s, lambda t: not _peval(k, t, f.sub))
    if isinstance(f, ctl.EG):
        return _exists_g_path(k, s, lambda t: _peval(k, t, f.sub))
    if isinstance(f, ctl.AG):
        return not _peval(k, s, ctl.EU(ctl.TRUE, ctl.Not(f.sub)))
    if isinstance(f, ctl.EU):
        return _exists_u_path(
            k, s,
            hold=lambda t: _peval(k, t, f.left),
            goal=lambda t: _peval(k, t, f.right),
        )
    if isinstance(f, ctl.AU):
        # violation: a path where the goal never arrives properly
        hold = lambda t: _peval(k, t, f.left)
        goal = lambda t: _peval(k, t, f.right)
        return not _exists_u_violation(k, s, hold, goal)
    if isinstance(f, ctl.ER):
        # some path along which right holds up to and including the first
        # left-state, or right holds forever
        left = lambda t: _peval(k, t, f.left)
        right = lambda t: _peval(k, t, f.right)
        return _exists_r_path(k, s, left, right)
    if isinstance(f, ctl.AR):
        # violation: a path with right failing before any left releases it
        left = lambda t: _peval(k, t, f.left)
        right = lambda t: _peval(k, t, f.right)
        return not _exists_u_path(
            k, s,
            hold=lambda t: not left(t),
            goal=lambda t: not right(t),
        )
    raise KripkeError(f"unknown formula node: {f!r}")


def _exists_u_path(k, s, hold, goal) -> bool:
    """A path with goal at some point and hold strictly before it."""
    seen = set()
    stack = [s]
    while stack:
        cur = stack.pop()
        if cur in seen:
            continue
        seen.add(cur)
        if goal(cur):
            return True
        if hold(cur):
            stack.extend(k.successors(cur))
    return False


def _exists_g_path(k, s, hold) -> bool:
    """An infinite path with hold everywhere: a lasso inside hold-states.

    Finite structure, so an infinite hold-path exists iff a cycle of
    hold-states is reachable from s through hold-states.
    """
    if not hold(s):
        return False
    WHITE, GREY, BLACK = 0, 1, 2
    color: dict[str, int] = {}

    def dfs(u: str) -> bool:
        color[u] = GREY
        for t in k.successors(u):
            if hold(t):
                c = color.get(t, WHITE)
                if c == GREY:
                    return True
                if c == WHITE and dfs(t):
                    return True
        color[u] = BLACK
        return False

    return dfs(s)


def _exists_u_violation(k, s, hold, goal) -> bool:
    """A path violating hold-U-goal: goal stays false up to a point where
    hold also fails, or goal stays false forever."""
    if _exists_u_path(k, s, hold=lambda t: not goal(t),
                      goal=lambda t: not goal(t) and not hold(t)):
        return True
    return _exists_g_path(k, s, hold=lambda t: not goal(t))


def _exists_r_path(k, s, left, right) -> bool:
    """A path where right holds until (and including) a left-state, or
    right holds forever."""
    if _exists_u_path(k, s, hold=lambda t: right(t) and not left(t),
                      goal=lambda t: right(t) and left(t)):
        return True
    return _exists_g_path(k, s, hold=right)


# --- satisfaction over sets of states ----------------------------------------


def _is_sink(k: Kripke, s: str) -> bool:
    """Image of a deadlocked process state: empty label, self-loop only."""
    return not k.label(s) and k.successors(s) == [s]


def check_set(k: Kripke, q, f: Formula) -> bool:
    """Satisfaction of f by the set of states q.

    Atoms hold iff some member is labeled with them; negation complements the
    whole judgment; conjunction and disjunction combine judgments.  EX holds
    iff some member's successor fan satisfies the subformula as a set; EU/EG
    are least fixpoints over fans, with deadlock images (sink states) ending
    a path the way theta;pass ends a run.
    """
    q = frozenset(q)
    if not q <= k.states:
        raise KripkeError("set members must be states")
    _require_total(k)
    _check_atoms(k, f)
    return _seval(k, q, ctl.to_existential(f), {})


def _fan(k: Kripke, s: str) -> frozenset[str]:
    return frozenset(k.successors(s))


def _seval(k: Kripke, q: frozenset, f: Formula, memo: dict) -> bool:
    key = (q, f)
    if key in memo:
        return memo[key]
    if isinstance(f, ctl.TrueF):
        out = True
    elif isinstance(f, ctl.FalseF):
        out = False
    elif isinstance(f, ctl.Atom):
        out = any(f.name in k.label(s) for s in q)
    elif isinstance(f, ctl.Not):
        out = not _seval(k, q, f.sub, memo)
    elif isinstance(f, ctl.And):
        out = _seval(k, q, f.left, memo) and _seval(k, q, f.right, memo)
    elif isinstance(f, ctl.Or):
        out = _seval(k, q, f.left, memo) or _seval(k, q, f.right, memo)
    elif isinstance(f, ctl.EX):
        # a sink's self-loop restores totality but is not a process step
        out = any(
            _seval(k, _fan(k, s), f.sub, memo) for s in q if not _is_sink(k, s)
        )
    elif isinstance(f, ctl.EG):
        out = _seg(k, q, f.sub, memo, {})
    elif isinstance(f, ctl.EU):
        out = _seu(k, q, f.left, f.right, memo, {})
    else:
        raise KripkeError(f"non-existential operator reached the checker: {f!r}")
    memo[key] = out
    return out


def _seg(k, q, f, memo, visiting) -> bool:
    """lfp: f holds of the set and either the set is a deadlock image or some
    member's fan satisfies EG f again."""
    if q in visiting:
        return False
    if not _seval(k, q, f, memo):
        return False
    if any(_is_sink(k, s) for s in q):
        return True
    visiting = {**visiting, q: True}
    return any(
        _seg(k, _fan(k, s), f, memo, visiting) for s in q if not _is_sink(k, s)
    )


def _seu(k, q, f, g, memo, visiting) -> bool:
    """lfp mirroring the compiled until-test: switch to EG g now, or hold f
    and step (a deadlock image ends the f-phase successfully)."""
    if _seg(k, q, g, memo, {}):
        return True
    if q in visiting:
        return False
    if not _seval(k, q, f, memo):
        return False
    if any(_is_sink(k, s) for s in q):
        return True
    visiting = {**visiting, q: True}
    return any(
        _seu(k, _fan(k, s), f, g, memo, visiting) for s in q if not _is_sink(k, s)
    )


def check_set_breakdown(k: Kripke, q, f: Formula) -> dict[str, bool]:
    """Per-state standard verdicts for the members of q."""
    return {s: check_state(k, s, f) for s in sorted(q)}


# --- Delta-aware satisfaction -------------------------------------------------


def delta_transform(f: Formula) -> Formula:
    """The syntactic transform D making Delta-interleaved structures
    transparent: atoms become E(Delta U a), next-steps re-anchor through
    Delta chains, and invariants tolerate Delta states."""
    if DELTA in ctl.atoms(f):
        raise KripkeError("Delta is reserved and cannot appear in the input")
    return _dt(f)


def _delta_until(g: Formula) -> Formula:
    return ctl.EU(ctl.Atom(DELTA), g)


def _dt(f: Formula) -> Formula:
    if isinstance(f, (ctl.TrueF, ctl.FalseF)):
        return f
    if isinstance(f, ctl.Atom):
        return _delta_until(f)
    if isinstance(f, ctl.Not):
        return ctl.Not(_dt(f.sub))
    if isinstance(f, ctl.And):
        return ctl.And(_dt(f.left), _dt(f.right))
    if isinstance(f, ctl.Or):
        return ctl.Or(_dt(f.left), _dt(f.right))
    if isinstance(f, ctl.EX):
        return ctl.EX(_delta_until(_dt(f.sub)))
    if isinstance(f, ctl.AX):
        return ctl.AX(ctl.AU(ctl.Atom(DELTA), _dt(f.sub)))
    if isinstance(f, ctl.EF):
        return ctl.EF(_dt(f.sub))
    if isinstance(f, ctl.AF):
        return ctl.AF(_dt(f.sub))
    if isinstance(f, ctl.EG):
        return ctl.EG(ctl.Or(ctl.Atom(DELTA), _dt(f.sub)))
    if isinstance(f, ctl.AG):
        return ctl.AG(ctl.Or(ctl.Atom(DELTA), _dt(f.sub)))
    if isinstance(f, ctl.EU):
        return ctl.EU(ctl.Or(ctl.Atom(DELTA), _dt(f.left)), _dt(f.right))
    if isinstance(f, ctl.AU):
        return ctl.AU(ctl.Or(ctl.Atom(DELTA), _dt(f.left)), _dt(f.right))
    if isinstance(f, ctl.ER):
        return ctl.ER(_dt(f.left), ctl.Or(ctl.Atom(DELTA), _dt(f.right)))
    if isinstance(f, ctl.AR):
        return ctl.AR(_dt(f.left), ctl.Or(ctl.Atom(DELTA), _dt(f.right)))
    raise KripkeError(f"unknown formula node: {f!r}")


def check_delta(k: Kripke, s: str, f: Formula) -> bool:
    """check_state after the Delta transform."""
    return check_state(k, s, delta_transform(f))


# --- text format and DOT -----------------------------------------------------
#
# .kr files:
#   props: a b Delta
#   init: s0 s1
#   label s0 {a,b}
#   trans s0 s1


def parse_kripke(text: str) -> Kripke:
    props: list[str] | None = None
    initials: list[str] = []
    labeling: dict[str, frozenset[str]] = {}
    transitions: list[tuple[str, str]] = []
    states: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("props:"):
            props = line[len("props:"):].split()
            continue
        if line.startswith("init:"):
            initials.extend(line[len("init:"):].split())
            states.update(initials)
            continue
        parts = line.split(None, 2)
        if parts[0] == "label" and len(parts) == 3:
            state, body = parts[1], parts[2].strip()
            if not (body.startswith("{") and body.endswith("}")):
                raise KripkeError(f"line {lineno}: labels must be {{a,b}}")
            inner = body[1:-1].strip()
            labeling[state] = frozenset(
                p.strip() for p in inner.split(",") if p.strip()
            )
            states.add(state)
            continue
        if parts[0] == "trans" and len(parts) == 3:
            src, dst = parts[1], parts[2].strip()
            transitions.append((src, dst))
            states.update((src, dst))
            continue
        raise KripkeError(f"line {lineno}: cannot parse {raw!r}")
    if props is None:
        raise KripkeError("missing 'props:' line")
    if not initials:
        raise KripkeError("missing 'init:' line")
    return make_kripke(states, initials, transitions, labeling, props)


def print_kripke(k: Kripke) -> str:
    lines = ["props: " + " ".join(sorted(k.props))]
    lines.append("init: " + " ".join(sorted(k.initials)))
    for s in sorted(k.states):
        lines.append(f"label {s} {{{','.join(sorted(k.label(s)))}}}")
    for src, dst in sorted(k.transitions):
        lines.append(f"trans {src} {dst}")
    return "\n".join(lines) + "\n"


def kripke_to_dot(k: Kripke, name: str = "kripke") -> str:
    lines = [f"digraph {name} {{"]
    ids = {s: f"n{i}" for i, s in enumerate(sorted(k.states))}
    for s in sorted(k.states):
        label = ",".join(sorted(k.label(s))) or "∅"
        shape = "doublecircle" if s in k.initials else "circle"
        lines.append(f'  {ids[s]} [label="{label}" shape={shape}];')
    for src, dst in sorted(k.transitions):
        lines.append(f"  {ids[src]} -> {ids[dst]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
