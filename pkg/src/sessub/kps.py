"""Subtyping via term automata and product-automaton emptiness."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .budget import Budget, tick
from .lts import build_lts
from .types import Action, Choice, Kind, SessionType


@dataclass(frozen=True)
class Constructor:
    """``end`` (``kind is None``) or a choice constructor over a set of actions."""

    kind: Kind | None
    actions: frozenset[Action] = frozenset()
    # display order only (branch order of the source type)
    shown: tuple[Action, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.kind is not None and not self.actions:
            raise ValueError("choice constructor needs at least one action")

    def __str__(self) -> str:
        if self.kind is None:
            return "end"
        acts = ",".join(map(str, self.shown or sorted(self.actions, key=str)))
        sym = "⊕" if self.kind is Kind.INTERNAL else "&"
        return f"{sym}{{{acts}}}"


END_C = Constructor(None)


def constructor_leq(c1: Constructor, c2: Constructor) -> bool:
    if c1.kind is None or c2.kind is None:
        return c1.kind is None and c2.kind is None
    if c1.kind is not c2.kind:
        return False
    if c1.kind is Kind.INTERNAL:
        return c1.actions <= c2.actions
    return c2.actions <= c1.actions


@dataclass
class TermAutomaton:
    states: list
    initial: int
    delta: list[dict[Action, int]]
    labels: list[Constructor]


def to_term_automaton(t: SessionType, budget: Budget | None = None) -> TermAutomaton:
    lts = build_lts(t, budget)
    labels = []
    for s in lts.states:
        if isinstance(s, Choice):
            acts = tuple(s.actions())
            labels.append(Constructor(s.kind, frozenset(acts), acts))
        else:
            labels.append(END_C)
    return TermAutomaton(lts.states, lts.initial, lts.succ, labels)


@dataclass
class ProductAutomaton:
    states: list[tuple[int, int]]
    initial: tuple[int, int]
    delta: dict[tuple[int, int], dict[Action, tuple[int, int]]]
    accepting: set[tuple[int, int]]
    # BFS tree, for counterexample traces
    parent: dict[tuple[int, int], tuple[tuple[int, int], Action] | None]
    left: TermAutomaton
    right: TermAutomaton

    def label(self, p: tuple[int, int]) -> str:
        c1, c2 = self.left.labels[p[0]], self.right.labels[p[1]]
        rel = "⊑" if constructor_leq(c1, c2) else "⋢"
        return f"{c1} {rel} {c2}"


def product(m: TermAutomaton, n: TermAutomaton, budget: Budget | None = None) -> ProductAutomaton:
    """Reachable part of the synchronous product, found breadth-first."""
    p0 = (m.initial, n.initial)
    states = [p0]
    parent: dict = {p0: None}
    delta: dict = {}
    accepting: set = set()
    queue = deque([p0])
    while queue:
        p = queue.popleft()
        q1, q2 = p
        if not constructor_leq(m.labels[q1], n.labels[q2]):
            accepting.add(p)
        out: dict = {}
        d2 = n.delta[q2]
        for a, r1 in m.delta[q1].items():
            r2 = d2.get(a)
            if r2 is None:
                continue
            tick(budget)
            nxt = (r1, r2)
            out[a] = nxt
            if nxt not in parent:
                parent[nxt] = (p, a)
                states.append(nxt)
                queue.append(nxt)
        delta[p] = out
    return ProductAutomaton(states, p0, delta, accepting, parent, m, n)


def language_empty(p: ProductAutomaton) -> bool:
    return not p.accepting


def counterexample(p: ProductAutomaton) -> list[Action] | None:
    """Shortest action sequence reaching an accepting state, or ``None``."""
    if not p.accepting:
        return None
    # states are stored in BFS order, so the first accepting one is nearest
    target = next(s for s in p.states if s in p.accepting)
    trace: list[Action] = []
    while p.parent[target] is not None:
        target, a = p.parent[target]
        trace.append(a)
    return trace[::-1]


def subtype_kps(t: SessionType, u: SessionType, budget: Budget | None = None) -> bool:
    return language_empty(product(to_term_automaton(t, budget), to_term_automaton(u, budget), budget))
