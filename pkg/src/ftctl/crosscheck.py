"""Cross-validation of the conversions against the operational oracle.

ft2ctl instances compare may(p, t) against the checked conversion of t;
ctl2ft instances compare check_set(split(p), Q, f) against may(p, ctltoft(f)).
Mismatches are shrunk by greedy deletion of LTS transitions and test branches
before reporting.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import ctl
from .convert import delta_kripke, split_kripke
from .ctl2ft import ctltoft
from .ft2ctl import fttoctl_delta, fttoctl_split
from .gen import GenConfig, gen_formula, gen_lts, gen_test, rng_for
from .harness import may
from .kripke import check_delta, check_set
from .lts import Lts, print_lts
from .tlotos import Choice, TestGraph, print_test


@dataclass(frozen=True)
class Mismatch:
    index: int
    mode: str
    lts_text: str
    artifact_text: str
    oracle: bool
    checked: bool


@dataclass
class CrosscheckReport:
    total: int = 0
    agreements: int = 0
    mismatches: list[Mismatch] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        lines = [
            f"total: {self.total}",
            f"agreements: {self.agreements}",
            f"mismatches: {len(self.mismatches)}",
        ]
        for m in self.mismatches:
            lines.append(
                f"-- instance {m.index} mode={m.mode} "
                f"oracle={m.oracle} checked={m.checked}"
            )
            lines.append("   process: " + "; ".join(m.lts_text.splitlines()))
            lines.append("   artifact: " + m.artifact_text)
        return "\n".join(lines)


def _check_ft2ctl(lts: Lts, test: TestGraph, mode: str) -> tuple[bool, bool]:
    oracle = may(lts, test)
    if mode == "split":
        k, q = split_kripke(lts)
        checked = check_set(k, q, fttoctl_split(test))
    else:
        k, s0 = delta_kripke(lts)
        checked = check_delta(k, s0, fttoctl_delta(test))
    return oracle, checked


def _check_ctl2ft(lts: Lts, f: ctl.Formula) -> tuple[bool, bool]:
    k, q = split_kripke(lts)
    oracle = check_set(k, q, f)
    checked = may(lts, ctltoft(f, lts.alphabet))
    return oracle, checked


def _lts_variants(lts: Lts):
    """Smaller processes: drop one transition at a time."""
    for t in sorted(lts.transitions):
        rest = lts.transitions - {t}
        states = {lts.initial}
        for src, _, dst in rest:
            states.update((src, dst))
        if all(src in states for src, _, _ in rest):
            try:
                yield Lts(frozenset(states), lts.alphabet, rest, lts.initial)
            except Exception:
                continue


def _test_variants(graph: TestGraph):
    """Smaller tests: drop one branch of some choice."""
    for nid in sorted(graph.nodes):
        payload = graph.payload(nid)
        if not isinstance(payload, Choice):
            continue
        for k in range(len(payload.branches)):
            branches = payload.branches[:k] + payload.branches[k + 1:]
            if not branches:
                continue
            nodes = dict(graph.nodes)
            nodes[nid] = Choice(branches)
            try:
                yield TestGraph(nodes, graph.root)
            except Exception:
                continue


def _shrink_ft2ctl(lts: Lts, test: TestGraph, mode: str):
    changed = True
    while changed:
        changed = False
        for smaller in _lts_variants(lts):
            oracle, checked = _safe(_check_ft2ctl, smaller, test, mode)
            if oracle is not None and oracle != checked:
                lts = smaller
                changed = True
                break
        if changed:
            continue
        for smaller in _test_variants(test):
            oracle, checked = _safe(_check_ft2ctl, lts, smaller, mode)
            if oracle is not None and oracle != checked:
                test = smaller
                changed = True
                break
    return lts, test


def _safe(fn, *args):
    try:
        return fn(*args)
    except Exception:
        return None, None


def run_crosscheck(cfg: GenConfig, total: int, direction: str = "ft2ctl",
                   mode: str = "split") -> CrosscheckReport:
    """Generate `total` instances and compare oracle vs checker.

    direction: ft2ctl | ctl2ft | both; mode: split | delta | both.
    """
    directions = ["ft2ctl", "ctl2ft"] if direction == "both" else [direction]
    modes = ["split", "delta"] if mode == "both" else [mode]
    report = CrosscheckReport()
    for i in range(total):
        rng = rng_for(cfg, i)
        lts = gen_lts(cfg, rng)
        for d in directions:
            if d == "ft2ctl":
                test = gen_test(cfg, rng)
                for m in modes:
                    report.total += 1
                    oracle, checked = _check_ft2ctl(lts, test, m)
                    if oracle == checked:
                        report.agreements += 1
                    else:
                        small_l, small_t = _shrink_ft2ctl(lts, test, m)
                        o2, c2 = _check_ft2ctl(small_l, small_t, m)
                        report.mismatches.append(Mismatch(
                            index=i, mode=f"ft2ctl/{m}",
                            lts_text=print_lts(small_l),
                            artifact_text=print_test(small_t),
                            oracle=o2, checked=c2,
                        ))
            else:
                f = gen_formula(cfg, rng, depth=3, existential=True)
                report.total += 1
                oracle, checked = _check_ctl2ft(lts, f)
                if oracle == checked:
                    report.agreements += 1
                else:
                    small = _shrink_ctl2ft(lts, f)
                    o2, c2 = _check_ctl2ft(small, f)
                    report.mismatches.append(Mismatch(
                        index=i, mode="ctl2ft/split",
                        lts_text=print_lts(small),
                        artifact_text=ctl.print_ctl(f),
                        oracle=o2, checked=c2,
                    ))
    report.mismatches.sort(key=lambda m: m.index)
    return report


def _shrink_ctl2ft(lts: Lts, f: ctl.Formula) -> Lts:
    changed = True
    while changed:
        changed = False
        for smaller in _lts_variants(lts):
            oracle, checked = _safe(_check_ctl2ft, smaller, f)
            if oracle is not None and oracle != checked:
                lts = smaller
                changed = True
                break
    return lts
