"""Seeded generation of well-formed session types and benchmark families.

Defaults (``max_branching=4``, ``rec_probability=0.25``, ``label_pool=8``)
are this package's choice, not values taken from any published experiment.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .types import Choice, END, Kind, Rec, SessionType, Var, substitute


@dataclass(frozen=True)
class GenParams:
    target_size: int = 10
    max_branching: int = 4
    rec_probability: float = 0.25
    label_pool: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.target_size < 0:
            raise ValueError("target_size must be >= 0")
        if self.max_branching < 1:
            raise ValueError("max_branching must be >= 1")
        if self.label_pool < self.max_branching:
            raise ValueError("label_pool must be >= max_branching")
        if not 0.0 <= self.rec_probability <= 1.0:
            raise ValueError("rec_probability must lie in [0, 1]")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def _split(rng: random.Random, total: int, parts: int) -> list[int]:
    cuts = sorted(rng.randint(0, total) for _ in range(parts - 1))
    bounds = [0, *cuts, total]
    return [b - a for a, b in zip(bounds, bounds[1:])]


class _Gen:
    def __init__(self, p: GenParams, var_leaf_probability: float = 0.5):
        self.p = p
        self.rng = random.Random(p.seed)
        self.labels = [f"a{i}" for i in range(p.label_pool)]
        self.fresh = 0
        self.var_leaf_probability = var_leaf_probability

    def new_var(self) -> str:
        name = f"x{self.fresh}"
        self.fresh += 1
        return name

    def leaf(self, scope: list[str]) -> SessionType:
        if scope and self.rng.random() < self.var_leaf_probability:
            return Var(self.rng.choice(scope))
        return END

    def choice(self, budget: int, scope: list[str], leaf) -> Choice:
        rng = self.rng
        k = rng.randint(1, min(self.p.max_branching, budget))
        kind = rng.choice((Kind.INTERNAL, Kind.EXTERNAL))
        labels = rng.sample(self.labels, k)
        sizes = _split(rng, budget - k, k)
        return Choice(kind, [(lab, self.node(n, scope, leaf)) for lab, n in zip(labels, sizes)])

    def node(self, budget: int, scope: list[str], leaf) -> SessionType:
        if budget <= 0:
            return leaf(scope)
        # a rec is always followed directly by a choice, so its variable is guarded
        if self.rng.random() < self.p.rec_probability:
            x = self.new_var()
            return Rec(x, self.choice(budget, [*scope, x], leaf))
        return self.choice(budget, scope, leaf)


def gen_random(p: GenParams) -> SessionType:
    """Closed contractive type with exactly ``p.target_size`` messages."""
    g = _Gen(p)
    return g.node(p.target_size, [], g.leaf)


def gen_open(p: GenParams, free: tuple[str, ...] = ("x",)) -> SessionType:
    """Contractive type whose free variables are among ``free`` (used under a choice only)."""
    g = _Gen(p)
    if p.target_size <= 0:
        return END
    return g.choice(p.target_size, list(free), g.leaf)


def gen_norec(p: GenParams) -> SessionType:
    return gen_random(replace(p, rec_probability=0.0))


def gen_super(k: int, kind: Kind = Kind.INTERNAL) -> SessionType:
    """``rec x1 . *a1 ... rec xk . *ak . {*_i ai . {*_j aj . xj}}`` with ``*`` set by ``kind``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    inner = Choice(kind, [(f"a{j}", Var(f"x{j}")) for j in range(1, k + 1)])
    t: SessionType = Choice(kind, [(f"a{i}", inner) for i in range(1, k + 1)])
    for i in range(k, 0, -1):
        t = Rec(f"x{i}", Choice(kind, [(f"a{i}", t)]))
    return t


def gen_unfolded_body(p: GenParams, var: str = "x") -> SessionType:
    """Open body built from choices and ``var`` only (at least one choice)."""
    g = _Gen(replace(p, rec_probability=0.0))
    return g.choice(max(1, p.target_size), [var], lambda scope: Var(var))


def gen_unfolded_pair(p: GenParams) -> tuple[SessionType, SessionType]:
    """``(rec x.V, rec x.V[V/x])``: equal as infinite trees, different in size."""
    body = gen_unfolded_body(p)
    return Rec("x", body), Rec("x", substitute(body, "x", body))


def gen_variant(t: SessionType, seed: int, label_pool: int = 8, towards: str = "sub") -> SessionType:
    """Syntactic variant of ``t`` sharing its recursion structure.

    ``towards="sub"`` only drops internal branches and adds external ones,
    so the result is a subtype of ``t``; ``"super"`` does the reverse;
    ``"any"`` also relabels branches and swaps choice kinds, so the result
    may be unrelated to ``t``.
    """
    rng = random.Random(seed)
    pool = [f"a{i}" for i in range(label_pool)]

    def grow(kind: Kind) -> bool:
        if towards == "any":
            return rng.random() < 0.5
        return (kind is Kind.EXTERNAL) == (towards == "sub")

    def go(t: SessionType) -> SessionType:
        match t:
            case Rec(x, body):
                return Rec(x, go(body))
            case Choice(kind, branches):
                branches = [(lab, go(c)) for lab, c in branches]
                if rng.random() < 0.3:
                    if grow(kind):
                        free = [lab for lab in pool if lab not in {b[0] for b in branches}]
                        if free:
                            branches.append((rng.choice(free), END))
                    elif len(branches) > 1:
                        branches.pop(rng.randrange(len(branches)))
                if towards == "any" and rng.random() < 0.1:
                    kind = kind.dual
                return Choice(kind, branches)
        return t

    return go(t)
