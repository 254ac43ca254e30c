"""Synchronous composition of two session types and safety checking."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from .charform import Mode, char_formula, subtype_cf_sub
from .gh import subtype_gh
from .kps import subtype_kps
from .lts import build_lts
from .mucalc import models
from .types import Alphabet, Choice, End, Kind, SessionType, dual_type, unfold_top


@dataclass(frozen=True)
class System:
    left: SessionType
    right: SessionType

    @classmethod
    def of(cls, left: SessionType, right: SessionType) -> System:
        return cls(unfold_top(left), unfold_top(right))

    def __str__(self) -> str:
        return f"{self.left} || {self.right}"


class ErrorKind(Enum):
    SameDirection = "SameDirection"
    MissingLabel = "MissingLabel"
    EndMismatch = "EndMismatch"


def sync_step(s: System) -> list[tuple[str, System]]:
    """Successors under the synchronous rule: one side sends ``a``, the other receives it.

    Returns ``(label, successor)`` pairs; successors are canonicalised.
    """
    l, r = unfold_top(s.left), unfold_top(s.right)
    if not (isinstance(l, Choice) and isinstance(r, Choice)) or l.kind is r.kind:
        return []
    out = []
    for lab, cont in l.branches:
        other = r.branch(lab)
        if other is not None:
            out.append((lab, System(unfold_top(cont), unfold_top(other))))
    return out


def is_error(s: System) -> ErrorKind | None:
    l, r = unfold_top(s.left), unfold_top(s.right)
    match l, r:
        case End(), End():
            return None
        case (End(), Choice()) | (Choice(), End()):
            return ErrorKind.EndMismatch
        case Choice(), Choice():
            if l.kind is r.kind:
                return ErrorKind.SameDirection
            sender, receiver = (l, r) if l.kind is Kind.INTERNAL else (r, l)
            if not sender.labels <= receiver.labels:
                return ErrorKind.MissingLabel
    return None


@dataclass
class SafetyResult:
    safe: bool
    # synchronised labels from the initial system to the first error found
    trace: list[str] = field(default_factory=list)
    error: ErrorKind | None = None
    explored: int = 0

    def __bool__(self) -> bool:
        return self.safe

    def format_trace(self) -> str:
        lines = [f"⟨{lab}⟩" for lab in self.trace]
        if self.error is not None:
            lines.append(self.error.name)
        return "\n".join(lines)


def safe_explore(t: SessionType, u: SessionType) -> SafetyResult:
    """Breadth-first search of reachable systems; errors include the initial system."""
    start = System.of(t, u)
    parent: dict[System, tuple[System, str] | None] = {start: None}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        err = is_error(s)
        if err is not None:
            trace = []
            cur = s
            while parent[cur] is not None:
                cur, lab = parent[cur]
                trace.append(lab)
            return SafetyResult(False, trace[::-1], err, len(parent))
        for lab, nxt in sync_step(s):
            if nxt not in parent:
                parent[nxt] = (s, lab)
                queue.append(nxt)
    return SafetyResult(True, [], None, len(parent))


def sync_run(s: System, labels: list[str]) -> list[System]:
    """Replay a label sequence; returns the visited systems (the step relation is deterministic)."""
    out = [System.of(s.left, s.right)]
    for lab in labels:
        nxt = dict(sync_step(out[-1])).get(lab)
        if nxt is None:
            raise ValueError(f"no synchronisation on {lab!r} from {out[-1]}")
        out.append(nxt)
    return out


SUBTYPE_ALGOS: dict[str, Callable[[SessionType, SessionType], bool]] = {
    "gh": subtype_gh,
    "kps": subtype_kps,
    "cf": subtype_cf_sub,
}


def safe_by_subtyping(t: SessionType, u: SessionType, algo: str = "cf", literal: bool = False) -> bool:
    """``t <= dual(u)  or  u <= dual(t)``.

    The two disjuncts are equivalent (duality reverses subtyping); both are
    evaluated so each algorithm runs in both orientations. ``literal=True``
    uses ``dual(t) <= u`` as the second disjunct instead, which is unsound:
    ``&{?a.end} || +{!a.end, !b.end}`` is unsafe yet ``!a.end <= +{!a.end, !b.end}``.
    """
    sub = SUBTYPE_ALGOS[algo]
    if sub(t, dual_type(u)):
        return True
    if literal:
        return sub(dual_type(t), u)
    return sub(u, dual_type(t))


def _sat(model: SessionType, of: SessionType, mode: Mode, alpha: Alphabet) -> bool:
    return models(build_lts(model), char_formula(of, mode, alpha))


def safe_by_formula(t: SessionType, u: SessionType, form: str, literal: bool = False) -> bool:
    """Model-checking characterisations of safety, ``form`` in ``b``..``e``.

    The first disjunct of each form checks ``t <= dual(u)`` (or the
    equivalent ``u <= dual(t)``) through one of the two formula modes:

    * b: ``dual(u) |= F(t, SUB)``  or  ``dual(t) |= F(u, SUB)``
    * c: ``t |= F(dual(u), SUP)``  or  ``u |= F(dual(t), SUP)``
    * d: ``u |= F(dual(t), SUP)``  or  ``t |= F(dual(u), SUP)``
    * e: ``dual(t) |= F(u, SUB)``  or  ``dual(u) |= F(t, SUB)``

    ``literal=True`` swaps in the second disjuncts that check
    ``dual(t) <= u`` / ``dual(u) <= t``, which admit unsafe systems.
    """
    dt, du = dual_type(t), dual_type(u)
    alpha = Alphabet.of(t, u, dt, du)
    sub, sup = Mode.SUB, Mode.SUP
    match form, literal:
        case "b", False:
            return _sat(du, t, sub, alpha) or _sat(dt, u, sub, alpha)
        case "b", True:
            return _sat(du, t, sub, alpha) or _sat(u, dt, sub, alpha)
        case "c", False:
            return _sat(t, du, sup, alpha) or _sat(u, dt, sup, alpha)
        case "c", True:
            return _sat(t, du, sup, alpha) or _sat(dt, u, sup, alpha)
        case "d", False:
            return _sat(u, dt, sup, alpha) or _sat(t, du, sup, alpha)
        case "d", True:
            return _sat(u, dt, sup, alpha) or _sat(du, t, sup, alpha)
        case "e", False:
            return _sat(dt, u, sub, alpha) or _sat(du, t, sub, alpha)
        case "e", True:
            return _sat(dt, u, sub, alpha) or _sat(t, du, sub, alpha)
    raise ValueError(f"unknown form {form!r}")
