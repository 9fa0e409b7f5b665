"""The two equivalence-preserving LTS -> Kripke conversions.

split_kripke: one Kripke state per (state, action, weak derivative) triple,
labeled with the action; action-less states become empty-labeled self-loop
states. delta_kripke: Delta-labeled copies of the LTS states interleaved
with one action-labeled state per visible transition.

Marked variants add a start_<a> proposition next to <a> on the states
generated by <a>-transitions (used by the loop-compaction formulas).
"""

from __future__ import annotations

from .kripke import DELTA, Kripke, make_kripke, make_total
from .lts import TAU, Lts, StateId, initials, weak_reach


def start_prop(action: str) -> str:
    return f"start_{action}"


def _split_states(lts: Lts, s: StateId) -> list[str]:
    """Kripke state names for the split images of LTS state s."""
    acts = initials(lts, s)
    if not acts:
        return [f"{s}:-"]
    out = []
    for a in sorted(acts):
        for t in sorted(weak_reach(lts, s, [a])):
            out.append(f"{s}:{a}:{t}")
    return out


def split_kripke(lts: Lts, marked_action: str | None = None) -> tuple[Kripke, frozenset[str]]:
    """Compact conversion; returns (structure, set Q of initial states).

    A state <s,{a},t> holds proposition a and steps to the split images of t;
    <s,emptyset> states carry a self-loop so the relation stays total.
    """
    states: set[str] = set()
    labeling: dict[str, frozenset[str]] = {}
    transitions: set[tuple[str, str]] = set()
    images: dict[StateId, list[str]] = {}
    for s in sorted(lts.states):
        images[s] = _split_states(lts, s)
        states.update(images[s])
    for s in sorted(lts.states):
        for name in images[s]:
            if name.endswith(":-"):
                labeling[name] = frozenset()
                transitions.add((name, name))
            else:
                _, a, t = name.split(":")
                label = {a}
                if marked_action == a:
                    label.add(start_prop(a))
                labeling[name] = frozenset(label)
                for target in images[t]:
                    transitions.add((name, target))
    props = set(lts.alphabet)
    if marked_action is not None:
        props.add(start_prop(marked_action))
    q = frozenset(images[lts.initial])
    k = make_kripke(states, q, transitions, labeling, props)
    return make_total(k), q


def delta_kripke(lts: Lts, marked_action: str | None = None) -> tuple[Kripke, str]:
    """Delta-interleaving conversion; returns (structure, initial state).

    LTS states become Delta-labeled states; every visible transition r -a-> s
    becomes an a-labeled state between r and s; tau transitions connect Delta
    states directly. Terminal Delta states get self-loops via make_total.
    """
    states: set[str] = set(lts.states)
    labeling: dict[str, frozenset[str]] = {s: frozenset([DELTA]) for s in lts.states}
    transitions: set[tuple[str, str]] = set()
    for src, act, dst in sorted(lts.transitions):
        if act == TAU:
            transitions.add((src, dst))
        else:
            mid = f"{src}:{act}:{dst}"
            states.add(mid)
            label = {act}
            if marked_action == act:
                label.add(start_prop(act))
            labeling[mid] = frozenset(label)
            transitions.add((src, mid))
            transitions.add((mid, dst))
    props = set(lts.alphabet) | {DELTA}
    if marked_action is not None:
        props.add(start_prop(marked_action))
    k = make_kripke(states, {lts.initial}, transitions, labeling, props)
    return make_total(k), lts.initial


def process_sat(lts: Lts, s: StateId, f) -> bool:
    """Satisfaction of an existential-fragment formula directly over the LTS.

    Atoms read weak enabledness, EX steps through weak derivatives, EG/EU are
    least fixpoints where deadlocked states end a path. Independent of the
    Kripke constructions; used to cross-check them.
    """
    from . import ctl

    g = ctl.to_existential(f)

    def dead(q: StateId) -> bool:
        return not initials(lts, q) and not any(
            act == TAU for act, _ in lts.steps(q)
        )

    def derivs(q: StateId):
        for a in sorted(initials(lts, q)):
            for r in sorted(weak_reach(lts, q, [a])):
                yield r

    def ev(q: StateId, node) -> bool:
        if isinstance(node, ctl.TrueF):
            return True
        if isinstance(node, ctl.FalseF):
            return False
        if isinstance(node, ctl.Atom):
            return node.name in initials(lts, q)
        if isinstance(node, ctl.Not):
            return not ev(q, node.sub)
        if isinstance(node, ctl.And):
            return ev(q, node.left) and ev(q, node.right)
        if isinstance(node, ctl.Or):
            return ev(q, node.left) or ev(q, node.right)
        if isinstance(node, ctl.EX):
            return any(ev(r, node.sub) for r in derivs(q))
        if isinstance(node, ctl.EG):
            return eg(q, node.sub, frozenset())
        if isinstance(node, ctl.EU):
            return eu(q, node.left, node.right, frozenset())
        raise ValueError(f"unexpected node {node!r}")

    def eg(q: StateId, body, on_path) -> bool:
        if q in on_path or not ev(q, body):
            return False
        if dead(q):
            return True
        return any(eg(r, body, on_path | {q}) for r in derivs(q))

    def eu(q: StateId, left, right, on_path) -> bool:
        if eg(q, right, frozenset()):
            return True
        if q in on_path or not ev(q, left):
            return False
        if dead(q):
            return True
        return any(eu(r, left, right, on_path | {q}) for r in derivs(q))

    return ev(s, g)


def lts_to_dot(lts: Lts, name: str = "lts") -> str:
    lines = [f"digraph {name} {{"]
    ids = {s: f"n{i}" for i, s in enumerate(sorted(lts.states))}
    for s in sorted(lts.states):
        shape = "doublecircle" if s == lts.initial else "circle"
        lines.append(f'  {ids[s]} [label="{s}" shape={shape}];')
    for src, act, dst in sorted(lts.transitions):
        label = "τ" if act == TAU else act
        lines.append(f'  {ids[src]} -> {ids[dst]} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
