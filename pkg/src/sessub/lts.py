"""Finite labelled transition systems induced by closed types."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Generic, Hashable, Iterable, TypeVar

from .budget import Budget, tick
from .types import Action, Choice, SessionType, unfold_top

S = TypeVar("S", bound=Hashable)


@dataclass
class Lts(Generic[S]):
    """States are canonical terms indexed by position; ``succ[i]`` maps action to target id."""

    states: list[S]
    initial: int
    succ: list[dict] = field(repr=False)

    @property
    def edges(self) -> list[tuple[int, object, int]]:
        return [(i, a, j) for i, out in enumerate(self.succ) for a, j in out.items()]

    def __len__(self) -> int:
        return len(self.states)

    def actions(self) -> set:
        return {a for out in self.succ for a in out}

    def transitions(self, i: int) -> dict:
        return self.succ[i]


def explore(
    start: S,
    step: Callable[[S], Iterable[tuple[object, S]]],
    budget: Budget | None = None,
) -> Lts[S]:
    """Breadth-first construction from ``start``; states are merged by ``==``."""
    index: dict[S, int] = {start: 0}
    states = [start]
    succ: list[dict] = []
    queue = deque([0])
    while queue:
        i = queue.popleft()
        out: dict = {}
        for action, target in step(states[i]):
            tick(budget)
            j = index.get(target)
            if j is None:
                j = index[target] = len(states)
                states.append(target)
                queue.append(j)
            out[action] = j
        # FIFO order means ids are expanded in increasing order
        succ.append(out)
    return Lts(states, 0, succ)


def type_step(t: SessionType):
    """Outgoing transitions of a canonical (top-unfolded) closed type."""
    if isinstance(t, Choice):
        d = t.kind.direction
        for lab, cont in t.branches:
            yield Action(d, lab), unfold_top(cont)


def build_lts(t: SessionType, budget: Budget | None = None) -> Lts[SessionType]:
    """LTS of a closed contractive type; state identity is equality of canonical forms."""
    return explore(unfold_top(t), type_step, budget)


def isomorphic(a: Lts, b: Lts, relabel: Callable = lambda x: x) -> bool:
    """Check that two deterministic LTSs are isomorphic from their initial states.

    ``relabel`` is applied to the actions of ``a`` before matching.
    """
    if len(a) != len(b):
        return False
    iso = {a.initial: b.initial}
    queue = deque([a.initial])
    while queue:
        i = queue.popleft()
        j = iso[i]
        out_a = {relabel(act): k for act, k in a.succ[i].items()}
        out_b = b.succ[j]
        if out_a.keys() != out_b.keys():
            return False
        for act, k in out_a.items():
            m = out_b[act]
            if k in iso:
                if iso[k] != m:
                    return False
            else:
                iso[k] = m
                queue.append(k)
    return len(set(iso.values())) == len(iso) == len(a)
