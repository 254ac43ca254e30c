"""Gay-Hole algorithmic subtyping with explicit unfolding and assumption sets."""

from __future__ import annotations

from .budget import Budget, tick
from .types import Choice, End, Kind, Rec, SessionType


def subtype_gh(t: SessionType, u: SessionType, budget: Budget | None = None) -> bool:
    """Decide ``t <= u`` by searching for a derivation of ``{} |- t <= u``.

    Rules are tried in the order Assump, RL, RR, then End/Sel/Bra. Every
    premise inherits the assumption set of its conclusion, so sibling
    subderivations do not share assumptions (the source of the exponential
    worst case). The search is iterative; ``budget`` counts rule applications
    and raises :class:`~sessub.budget.BudgetExceeded` when exhausted.
    """
    stack: list[tuple[SessionType, SessionType, frozenset]] = [(t, u, frozenset())]
    while stack:
        t, u, gamma = stack.pop()
        tick(budget)
        if (t, u) in gamma:
            continue
        if isinstance(t, Rec):
            stack.append((t.unfold_once(), u, gamma | {(t, u)}))
            continue
        if isinstance(u, Rec):
            stack.append((t, u.unfold_once(), gamma | {(t, u)}))
            continue
        match t, u:
            case End(), End():
                continue
            case Choice(k1, br_t), Choice(k2, br_u) if k1 is k2:
                if k1 is Kind.INTERNAL:
                    # Sel: every label t may send must be accepted by u
                    small, big, pairs = t, u, ((c, u.branch(lab)) for lab, c in br_t)
                else:
                    # Bra: t must accept every label u may receive
                    small, big, pairs = u, t, ((t.branch(lab), c) for lab, c in br_u)
                if not small.labels <= big.labels:
                    return False
                stack.extend((a, b, gamma) for a, b in pairs)
            case _:
                return False
    return True
