"""Characteristic formulae of session types and subtyping by model checking."""

from __future__ import annotations

import itertools
from enum import Enum

from .budget import Budget
from .lts import build_lts
from .mucalc import (
    FALSE,
    TRUE,
    Box,
    Diamond,
    FVar,
    Formula,
    Nu,
    box_all,
    conj,
    disj,
    models,
)
from .types import Alphabet, Choice, End, Kind, Rec, SessionType, Var


class Mode(Enum):
    """Which relation the formula characterises.

    ``SUB``: the formula of ``t`` holds exactly in the supertypes of ``t``
    (internal choices are mandatory). ``SUP``: it holds exactly in the
    subtypes of ``t`` (external choices are mandatory).
    """

    SUB = "sub"
    SUP = "sup"

    @property
    def kind(self) -> Kind:
        return Kind.INTERNAL if self is Mode.SUB else Kind.EXTERNAL

    @property
    def dual(self) -> Mode:
        return Mode.SUP if self is Mode.SUB else Mode.SUB


def char_formula(
    t: SessionType,
    mode: Mode,
    alphabet: Alphabet,
    dummy_fixpoints: bool = False,
) -> Formula:
    """Characteristic formula of ``t``.

    Choices of the mode's kind become a conjunction of diamonds; choices of
    the other kind become boxes, a disjunction of diamonds and a box on the
    complement of their actions. With ``dummy_fixpoints`` each modality body
    is wrapped in a fixpoint on a fresh unused variable.
    """
    fresh = (f"_d{i}" for i in itertools.count())
    memo: dict[int, Formula] = {}

    def modal(ctor, a, body: Formula) -> Formula:
        if dummy_fixpoints:
            body = Nu(next(fresh), body)
        return ctor(a, body)

    def go(t: SessionType) -> Formula:
        if not dummy_fixpoints:
            hit = memo.get(id(t))
            if hit is not None:
                return hit
        match t:
            case End():
                r = box_all(alphabet, FALSE)
            case Var(name):
                r = FVar(name)
            case Rec(var, body):
                r = Nu(var, go(body))
            case Choice(kind, branches):
                acts = t.actions()
                if kind is mode.kind:
                    r = conj(modal(Diamond, a, go(c)) for a, (_, c) in zip(acts, branches))
                else:
                    boxes = [modal(Box, a, go(c)) for a, (_, c) in zip(acts, branches)]
                    some = disj(modal(Diamond, a, TRUE) for a in acts)
                    rest = [modal(Box, a, FALSE) for a in alphabet.without(acts)]
                    r = conj([*boxes, some, *rest])
            case _:
                raise TypeError(f"not a session type: {t!r}")
        if not dummy_fixpoints:
            memo[id(t)] = r
        return r

    return go(t)


def subtype_cf_sub(
    t: SessionType, u: SessionType, budget: Budget | None = None, dummy_fixpoints: bool = False
) -> bool:
    """``t <= u`` decided as ``u |= F(t, SUB)``."""
    alpha = Alphabet.of(t, u)
    phi = char_formula(t, Mode.SUB, alpha, dummy_fixpoints)
    return models(build_lts(u, budget), phi, budget)


def subtype_cf_sup(
    t: SessionType, u: SessionType, budget: Budget | None = None, dummy_fixpoints: bool = False
) -> bool:
    """``t <= u`` decided as ``t |= F(u, SUP)``."""
    alpha = Alphabet.of(t, u)
    phi = char_formula(u, Mode.SUP, alpha, dummy_fixpoints)
    return models(build_lts(t, budget), phi, budget)
