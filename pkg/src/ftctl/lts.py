"""Finite labelled transition systems and their failure-trace behaviour.

Visible actions are plain strings drawn from a declared finite alphabet; the
internal action is the reserved name "tau" and never belongs to the alphabet.
All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

TAU = "tau"

StateId = str
Transition = tuple[StateId, str, StateId]


class LtsError(ValueError):
    pass


def _check_name(name: str, what: str) -> None:
    if not name or any(c.isspace() for c in name) or ":" in name or "#" in name:
        raise LtsError(f"bad {what} {name!r}: must be a nonempty token without ':' or '#'")


@dataclass(frozen=True)
class Lts:
    states: frozenset[StateId]
    alphabet: frozenset[str]
    transitions: frozenset[Transition]
    initial: StateId
    _succ: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if TAU in self.alphabet:
            raise LtsError("tau cannot be declared in the alphabet")
        for s in self.states:
            _check_name(s, "state id")
        for a in self.alphabet:
            _check_name(a, "action")
        if self.initial not in self.states:
            raise LtsError(f"initial state {self.initial!r} not among states")
        succ: dict[StateId, list[tuple[str, StateId]]] = {s: [] for s in self.states}
        for src, act, dst in self.transitions:
            if src not in self.states or dst not in self.states:
                raise LtsError(f"transition endpoint missing: {(src, act, dst)!r}")
            if act != TAU and act not in self.alphabet:
                raise LtsError(f"transition label {act!r} not in alphabet")
            succ[src].append((act, dst))
        for s in succ:
            succ[s].sort()
        object.__setattr__(self, "_succ", succ)

    def steps(self, s: StateId) -> list[tuple[str, StateId]]:
        self._require(s)
        return self._succ[s]

    def _require(self, s: StateId) -> None:
        if s not in self.states:
            raise LtsError(f"unknown state {s!r}")


def make_lts(alphabet, transitions, initial) -> Lts:
    """Convenience constructor: states are inferred from transitions + initial."""
    states = {initial}
    for src, _, dst in transitions:
        states.add(src)
        states.add(dst)
    return Lts(
        states=frozenset(states),
        alphabet=frozenset(alphabet),
        transitions=frozenset(transitions),
        initial=initial,
    )


def tau_closure(lts: Lts, s: StateId) -> frozenset[StateId]:
    """All states reachable from s via zero or more tau steps (includes s)."""
    lts._require(s)
    seen = {s}
    stack = [s]
    while stack:
        cur = stack.pop()
        for act, dst in lts.steps(cur):
            if act == TAU and dst not in seen:
                seen.add(dst)
                stack.append(dst)
    return frozenset(seen)


def weak_reach(lts: Lts, start: StateId, word: list[str]) -> frozenset[StateId]:
    """States q with start ==word==> q (tau-closure interleaved)."""
    for a in word:
        if a not in lts.alphabet:
            raise LtsError(f"unknown action {a!r}")
    current = tau_closure(lts, start)
    for a in word:
        after = set()
        for s in current:
            for act, dst in lts.steps(s):
                if act == a:
                    after.update(tau_closure(lts, dst))
        current = frozenset(after)
        if not current:
            break
    return frozenset(current)


def initials(lts: Lts, s: StateId) -> frozenset[str]:
    """init(s): visible actions a with s ==a==> (weak enabledness)."""
    out = set()
    for t in tau_closure(lts, s):
        for act, _ in lts.steps(t):
            if act != TAU:
                out.add(act)
    return frozenset(out)


def strong_enabled(lts: Lts, s: StateId) -> frozenset[str]:
    """Visible actions with a one-step transition from s."""
    return frozenset(act for act, _ in lts.steps(s) if act != TAU)


def is_stable(lts: Lts, s: StateId) -> bool:
    """True iff s has no outgoing tau transition."""
    return all(act != TAU for act, _ in lts.steps(s))


def refuses(lts: Lts, s: StateId, refused: frozenset[str] | set[str]) -> bool:
    """p ref X: some stable state in the tau-closure of s enables no a in X.

    Enabledness at the stable witness is strong (one-step), per the defining
    formula; init stays weak elsewhere.
    """
    bad = set(refused) - set(lts.alphabet)
    if bad:
        raise LtsError(f"refused actions not in alphabet: {sorted(bad)}")
    for t in tau_closure(lts, s):
        if is_stable(lts, t) and not (set(refused) & strong_enabled(lts, t)):
            return True
    return False


def max_refusal(lts: Lts, s: StateId) -> frozenset[str]:
    """Largest refusal set allowed AT position s: A \\ init(s) when s is
    stable, the empty set when unstable."""
    if is_stable(lts, s):
        return frozenset(lts.alphabet) - initials(lts, s)
    return frozenset()


@dataclass(frozen=True)
class FailureTrace:
    """Alternating refusal sets and actions: A0 a1 A1 ... an An."""

    refusals: tuple[frozenset[str], ...]
    actions: tuple[str, ...]

    def __post_init__(self):
        if len(self.refusals) != len(self.actions) + 1:
            raise LtsError("failure trace needs len(refusals) == len(actions) + 1")

    def __str__(self):
        parts = []
        for i, refusal in enumerate(self.refusals):
            parts.append("{" + ",".join(sorted(refusal)) + "}")
            if i < len(self.actions):
                parts.append(self.actions[i])
        return " ".join(parts)


def failure_trace(refusals, actions) -> FailureTrace:
    return FailureTrace(
        tuple(frozenset(r) for r in refusals), tuple(actions)
    )


@dataclass(frozen=True)
class StableFailure:
    trace: tuple[str, ...]
    refusal: frozenset[str]


@dataclass(frozen=True)
class FailureTraceSet:
    """Failure traces represented by maximal refusal sets.

    The set is implicitly closed under shrinking refusal sets; `contains`
    applies the subset closure.
    """

    maximal: frozenset[FailureTrace]
    subset_closed: bool = True

    def contains(self, f: FailureTrace) -> bool:
        for m in self.maximal:
            if m.actions == f.actions and all(
                a <= b for a, b in zip(f.refusals, m.refusals)
            ):
                return True
        return False

    def __len__(self):
        return len(self.maximal)


def _run_positions(lts: Lts, s: StateId, max_actions: int):
    """Yield (state, refusal tuple, action tuple) for every run prefix with
    at most max_actions visible actions; refusals are the per-position
    maximal ones."""
    frontier = [(t, (max_refusal(lts, t),), ()) for t in sorted(tau_closure(lts, s))]
    seen = set()
    while frontier:
        state, refs, acts = frontier.pop()
        key = (state, refs, acts)
        if key in seen:
            continue
        seen.add(key)
        yield state, refs, acts
        if len(acts) >= max_actions:
            continue
        for act in sorted(initials(lts, state)):
            for nxt in sorted(weak_reach(lts, state, [act])):
                frontier.append(
                    (nxt, refs + (max_refusal(lts, nxt),), acts + (act,))
                )


def failure_traces(lts: Lts, s: StateId, max_actions: int) -> FailureTraceSet:
    """All failure traces of s with at most max_actions actions.

    Refusal positions carry A \\ init at stable states and the empty set at
    unstable ones; the result is canonical (maximal refusals, subset-closed).
    """
    if max_actions < 0:
        raise LtsError("max_actions must be >= 0")
    lts._require(s)
    traces = set()
    for _, refs, acts in _run_positions(lts, s, max_actions):
        traces.add(FailureTrace(refs, acts))
    return FailureTraceSet(frozenset(traces))


def fin(lts: Lts, s: StateId, max_len: int) -> frozenset[tuple[str, ...]]:
    """Finite traces of s of length at most max_len."""
    ftr = failure_traces(lts, s, max_len)
    return frozenset(f.actions for f in ftr.maximal)


def stable_failures(lts: Lts, s: StateId, max_len: int) -> frozenset[StableFailure]:
    """Stable failures (w, X) with |w| <= max_len, X maximal per witness."""
    out = set()
    for state, _, acts in _run_positions(lts, s, max_len):
        if is_stable(lts, state):
            out.add(StableFailure(acts, frozenset(lts.alphabet) - initials(lts, state)))
    return frozenset(out)


def ft_preorder_bounded(p: Lts, q: Lts, max_actions: int) -> bool:
    """True iff every failure trace of p within the bound is one of q."""
    if p.alphabet != q.alphabet:
        raise LtsError("failure-trace preorder needs matching alphabets")
    p_traces = failure_traces(p, p.initial, max_actions)
    q_traces = failure_traces(q, q.initial, max_actions)
    return all(q_traces.contains(f) for f in p_traces.maximal)


# --- text format -------------------------------------------------------------
#
# .lts files:
#   alphabet: a b c
#   init: s0
#   s0 a s1
#   s1 tau s2
# '#' starts a comment.


def parse_lts(text: str) -> Lts:
    alphabet: list[str] | None = None
    initial: str | None = None
    transitions: list[Transition] = []
    states: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("alphabet:"):
            alphabet = line[len("alphabet:"):].split()
            continue
        if line.startswith("init:"):
            parts = line[len("init:"):].split()
            if len(parts) != 1:
                raise LtsError(f"line {lineno}: init wants exactly one state")
            initial = parts[0]
            states.add(initial)
            continue
        parts = line.split()
        if len(parts) != 3:
            raise LtsError(f"line {lineno}: expected 'src act dst'")
        src, act, dst = parts
        transitions.append((src, act, dst))
        states.add(src)
        states.add(dst)
    if alphabet is None:
        raise LtsError("missing 'alphabet:' line")
    if initial is None:
        raise LtsError("missing 'init:' line")
    return Lts(
        states=frozenset(states),
        alphabet=frozenset(alphabet),
        transitions=frozenset(transitions),
        initial=initial,
    )


def print_lts(lts: Lts) -> str:
    lines = [
        "alphabet: " + " ".join(sorted(lts.alphabet)),
        "init: " + lts.initial,
    ]
    for src, act, dst in sorted(lts.transitions):
        lines.append(f"{src} {act} {dst}")
    return "\n".join(lines) + "\n"
