"""Greatest-fixpoint fragment of the modal mu-calculus and a model checker for it.

Formulae are immutable trees (possibly DAGs, e.g. fixpoint approximants).
Modalities carry an arbitrary hashable action, so the same evaluator serves
session-type LTSs and the lambda-type LTSs in :mod:`sessub.lam`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable

from .budget import Budget, tick
from .lts import Lts
from .types import Action


class Formula:
    __slots__ = ()

    @cached_property
    def free_vars(self) -> frozenset[str]:
        match self:
            case FVar(name):
                return frozenset((name,))
            case And(l, r) | Or(l, r):
                return l.free_vars | r.free_vars
            case Box(_, b) | Diamond(_, b):
                return b.free_vars
            case Nu(x, b):
                return b.free_vars - {x}
        return frozenset()

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __str__(self) -> str:
        return print_formula(self)


# ``cached_property`` needs an instance ``__dict__``, so the node classes are
# plain frozen dataclasses (no slots).


@dataclass(frozen=True)
class TT(Formula):
    pass


@dataclass(frozen=True)
class FF(Formula):
    pass


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Box(Formula):
    action: Hashable
    body: Formula


@dataclass(frozen=True)
class Diamond(Formula):
    action: Hashable
    body: Formula


@dataclass(frozen=True)
class Nu(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class FVar(Formula):
    name: str


TRUE = TT()
FALSE = FF()


def conj(parts: Iterable[Formula]) -> Formula:
    """Right-nested conjunction in the given order; ``tt`` when empty."""
    parts = list(parts)
    if not parts:
        return TRUE
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def disj(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return FALSE
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Or(p, out)
    return out


def box_all(actions: Iterable[Hashable], body: Formula) -> Formula:
    """``[A]body`` as the conjunction of single-action boxes."""
    return conj(Box(a, body) for a in actions)


# --- model checking -------------------------------------------------------------


class Checker:
    """Bitset evaluator over one LTS.

    State sets are Python ints (bit ``i`` set iff state ``i`` is a member).
    Closed subformulae are cached by identity, which keeps approximant DAGs
    linear to evaluate.
    """

    def __init__(self, lts: Lts, budget: Budget | None = None, record: bool = False):
        self.lts = lts
        self.n = len(lts.states)
        self.full = (1 << self.n) - 1
        self.budget = budget
        self.edges: dict[Hashable, list[tuple[int, int]]] = {}
        for s, out in enumerate(lts.succ):
            for a, t in out.items():
                self.edges.setdefault(a, []).append((s, t))
        self.has: dict[Hashable, int] = {
            a: _mask(s for s, _ in es) for a, es in self.edges.items()
        }
        self._closed: dict[int, int] = {}
        self.record = record
        # (variable, list of iterates) per completed fixpoint computation
        self.iterations: list[tuple[str, list[int]]] = []

    def eval(self, phi: Formula, env: dict[str, int]) -> int:
        closed = not phi.free_vars
        if closed:
            hit = self._closed.get(id(phi))
            if hit is not None:
                return hit
        tick(self.budget)
        match phi:
            case TT():
                r = self.full
            case FF():
                r = 0
            case And(l, rr):
                r = self.eval(l, env)
                if r:
                    r &= self.eval(rr, env)
            case Or(l, rr):
                r = self.eval(l, env)
                if r != self.full:
                    r |= self.eval(rr, env)
            case Box(a, b):
                edges = self.edges.get(a)
                if not edges:
                    r = self.full
                else:
                    sb = self.eval(b, env)
                    r = self.full & ~self.has[a]
                    for s, t in edges:
                        if sb >> t & 1:
                            r |= 1 << s
            case Diamond(a, b):
                edges = self.edges.get(a)
                r = 0
                if edges:
                    sb = self.eval(b, env)
                    for s, t in edges:
                        if sb >> t & 1:
                            r |= 1 << s
            case FVar(name):
                r = env[name]
            case Nu(x, b):
                r = self._nu(x, b, env)
            case _:
                raise TypeError(f"not a formula: {phi!r}")
        if closed:
            self._closed[id(phi)] = r
        return r

    def _nu(self, x: str, body: Formula, env: dict[str, int]) -> int:
        cur = self.full
        trail = [cur] if self.record else None
        inner = dict(env)
        while True:
            inner[x] = cur
            nxt = self.eval(body, inner)
            if trail is not None:
                trail.append(nxt)
            if nxt == cur:
                break
            cur = nxt
        if trail is not None:
            self.iterations.append((x, trail))
        return cur


def _mask(ids: Iterable[int]) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


def eval_states(
    lts: Lts, phi: Formula, env: dict[str, Iterable[int]] | None = None
) -> frozenset[int]:
    """Set of state ids satisfying ``phi`` under ``env`` (free variable -> state ids)."""
    chk = Checker(lts)
    bits = chk.eval(phi, {k: _mask(v) for k, v in (env or {}).items()})
    return frozenset(i for i in range(chk.n) if bits >> i & 1)


def models(lts: Lts, phi: Formula, budget: Budget | None = None) -> bool:
    """Does the initial state of ``lts`` satisfy the closed formula ``phi``?"""
    if phi.free_vars:
        raise ValueError(f"formula has free variables {sorted(phi.free_vars)}")
    chk = Checker(lts, budget)
    return bool(chk.eval(phi, {}) >> lts.initial & 1)


# --- syntactic operations ---------------------------------------------------------


def substitute_formula(phi: Formula, x: str, psi: Formula) -> Formula:
    """Replace free ``x`` in ``phi`` by ``psi``; shares ``psi`` and untouched subtrees."""
    memo: dict[int, Formula] = {}

    def go(phi: Formula) -> Formula:
        if x not in phi.free_vars:
            return phi
        hit = memo.get(id(phi))
        if hit is not None:
            return hit
        match phi:
            case FVar():
                r = psi
            case And(l, rr):
                r = And(go(l), go(rr))
            case Or(l, rr):
                r = Or(go(l), go(rr))
            case Box(a, b):
                r = Box(a, go(b))
            case Diamond(a, b):
                r = Diamond(a, go(b))
            case Nu(y, b):
                r = Nu(y, go(b))
        memo[id(phi)] = r
        return r

    return go(phi)


def approximate(phi: Nu, n: int) -> Formula:
    """``n``-th approximant: ``tt`` at 0, then the body with ``x`` replaced by the previous one."""
    if not isinstance(phi, Nu):
        raise TypeError("approximate expects a fixpoint formula")
    cur: Formula = TRUE
    for _ in range(n):
        cur = substitute_formula(phi.body, phi.var, cur)
    return cur


def map_actions(phi: Formula, f: Callable[[Hashable], Hashable]) -> Formula:
    memo: dict[int, Formula] = {}

    def go(phi: Formula) -> Formula:
        hit = memo.get(id(phi))
        if hit is not None:
            return hit
        match phi:
            case And(l, r):
                out = And(go(l), go(r))
            case Or(l, r):
                out = Or(go(l), go(r))
            case Box(a, b):
                out = Box(f(a), go(b))
            case Diamond(a, b):
                out = Diamond(f(a), go(b))
            case Nu(x, b):
                out = Nu(x, go(b))
            case _:
                out = phi
        memo[id(phi)] = out
        return out

    return go(phi)


def dual_formula(phi: Formula) -> Formula:
    """Flip the direction of every modality's action."""
    return map_actions(phi, lambda a: a.dual)


def formula_size(phi: Formula) -> int:
    match phi:
        case And(l, r) | Or(l, r):
            return 1 + formula_size(l) + formula_size(r)
        case Box(_, b) | Diamond(_, b) | Nu(_, b):
            return 1 + formula_size(b)
    return 1


def nu_subformulas(phi: Formula) -> list[Nu]:
    out: list[Nu] = []
    stack = [phi]
    while stack:
        f = stack.pop()
        match f:
            case Nu(_, b):
                out.append(f)
                stack.append(b)
            case And(l, r) | Or(l, r):
                stack.extend((r, l))
            case Box(_, b) | Diamond(_, b):
                stack.append(b)
    return out


# --- printing ---------------------------------------------------------------------

_NU, _OR, _AND, _PREFIX = 0, 1, 2, 3


def print_formula(phi: Formula, style: str = "native") -> str:
    """Render ``phi``; ``style`` is ``native`` (re-parseable) or ``mcrl2`` (output only)."""
    if style not in ("native", "mcrl2"):
        raise ValueError(f"unknown style {style!r}")
    mc = style == "mcrl2"

    def act(a) -> str:
        if mc:
            if isinstance(a, Action):
                return ("snd_" if a.direction.value == "!" else "rcv_") + a.label
            return f"l_{a}"
        return str(a)

    def var(x: str) -> str:
        return "X_" + x if mc else x

    def go(phi: Formula, ctx: int) -> str:
        match phi:
            case TT():
                return "true" if mc else "tt"
            case FF():
                return "false" if mc else "ff"
            case FVar(name):
                return var(name)
            case Box(a, b):
                return f"[{act(a)}]" + go(b, _PREFIX)
            case Diamond(a, b):
                return f"<{act(a)}>" + go(b, _PREFIX)
            case And(l, r):
                s = f"{go(l, _PREFIX)} && {go(r, _AND)}"
                return f"({s})" if ctx > _AND else s
            case Or(l, r):
                s = f"{go(l, _AND)} || {go(r, _OR)}"
                return f"({s})" if ctx > _OR else s
            case Nu(x, b):
                s = f"nu {var(x)} . {go(b, _NU)}"
                return f"({s})" if ctx > _NU else s
        raise TypeError(f"not a formula: {phi!r}")

    return go(phi, _NU)


# --- parsing (native style) ---------------------------------------------------------

_FTOKEN = re.compile(r"\s*(?:(&&|\|\||[\[\]<>().!?])|([A-Za-z0-9_]+))")


class FormulaSyntaxError(ValueError):
    pass


def parse_formula(text: str, action: Callable[[str], Hashable] = Action.parse) -> Formula:
    """Parse the native syntax produced by :func:`print_formula`.

    ``action`` turns the text between ``[``/``]`` or ``<``/``>`` into an action.
    """
    toks: list[str] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _FTOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected input at {pos}: {text[pos:pos + 10]!r}")
        toks.append(m.group(1) or m.group(2))
        pos = m.end()
    i = 0

    def peek() -> str | None:
        return toks[i] if i < len(toks) else None

    def take(expected: str | None = None) -> str:
        nonlocal i
        if i >= len(toks):
            raise FormulaSyntaxError("unexpected end of formula")
        t = toks[i]
        if expected is not None and t != expected:
            raise FormulaSyntaxError(f"expected {expected!r}, found {t!r}")
        i += 1
        return t

    def level_nu() -> Formula:
        if peek() == "nu":
            take()
            x = take()
            take(".")
            return Nu(x, level_nu())
        return level_or()

    def level_or() -> Formula:
        left = level_and()
        if peek() == "||":
            take()
            return Or(left, level_or())
        return left

    def level_and() -> Formula:
        left = level_prefix()
        if peek() == "&&":
            take()
            return And(left, level_and())
        return left

    def modal_action(close: str) -> Hashable:
        parts = []
        while peek() != close:
            parts.append(take())
        take(close)
        return action("".join(parts))

    def level_prefix() -> Formula:
        t = peek()
        if t == "[":
            take()
            a = modal_action("]")
            return Box(a, level_prefix())
        if t == "<":
            take()
            a = modal_action(">")
            return Diamond(a, level_prefix())
        if t == "(":
            take()
            inner = level_nu()
            take(")")
            return inner
        t = take()
        if t == "tt":
            return TRUE
        if t == "ff":
            return FALSE
        if t == "nu":
            raise FormulaSyntaxError("unparenthesised 'nu' in operand position")
        return FVar(t)

    out = level_nu()
    if i != len(toks):
        raise FormulaSyntaxError(f"trailing input {toks[i]!r}")
    return out
