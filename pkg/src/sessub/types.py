"""Session type AST, substitution/unfolding, duality, validation and size metrics.

Terms are immutable and hash-consed lazily: every node caches its structural
hash and free-variable set at construction, so the DAGs produced by repeated
unfolding share structure and compare in near-constant time when identical.
Branch order inside a choice is kept for printing but ignored by ``==``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class Dir(Enum):
    SEND = "!"
    RECV = "?"

    @property
    def dual(self) -> Dir:
        return Dir.RECV if self is Dir.SEND else Dir.SEND


class Kind(Enum):
    INTERNAL = "+"
    EXTERNAL = "&"

    @property
    def dual(self) -> Kind:
        return Kind.EXTERNAL if self is Kind.INTERNAL else Kind.INTERNAL

    @property
    def direction(self) -> Dir:
        # internal choice selects by sending, external choice offers receives
        return Dir.SEND if self is Kind.INTERNAL else Dir.RECV


@dataclass(frozen=True)
class Action:
    direction: Dir
    label: str

    @property
    def dual(self) -> Action:
        return Action(self.direction.dual, self.label)

    def __str__(self) -> str:
        return f"{self.direction.value}{self.label}"

    @staticmethod
    def parse(text: str) -> Action:
        text = text.strip()
        if len(text) < 2 or text[0] not in "!?" or not IDENT.match(text[1:]):
            raise ValueError(f"not an action: {text!r}")
        return Action(Dir(text[0]), text[1:])


def send(label: str) -> Action:
    return Action(Dir.SEND, label)


def recv(label: str) -> Action:
    return Action(Dir.RECV, label)


class SessionType:
    """Base class of the four node kinds. Do not instantiate directly."""

    __slots__ = ("_hash", "free_vars")

    def __hash__(self) -> int:
        return self._hash

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __repr__(self) -> str:
        from .syntax import print_type

        return f"<{type(self).__name__} {print_type(self)}>"

    def __str__(self) -> str:
        from .syntax import print_type

        return print_type(self)

    @property
    def is_closed(self) -> bool:
        return not self.free_vars


def _init(obj, **fields) -> None:
    for k, v in fields.items():
        object.__setattr__(obj, k, v)


class End(SessionType):
    __hash__ = SessionType.__hash__
    __slots__ = ()
    __match_args__ = ()

    def __init__(self):
        _init(self, _hash=hash("end"), free_vars=frozenset())

    def __eq__(self, other) -> bool:
        return isinstance(other, End)


class Var(SessionType):
    __hash__ = SessionType.__hash__
    __slots__ = ("name",)
    __match_args__ = ("name",)

    def __init__(self, name: str):
        _init(self, name=name, _hash=hash(("var", name)), free_vars=frozenset((name,)))

    def __eq__(self, other) -> bool:
        return self is other or (isinstance(other, Var) and other.name == self.name)


class Rec(SessionType):
    __hash__ = SessionType.__hash__
    __slots__ = ("var", "body", "_unfolded")
    __match_args__ = ("var", "body")

    def __init__(self, var: str, body: SessionType):
        _init(
            self,
            var=var,
            body=body,
            _unfolded=None,
            _hash=hash(("rec", var, body._hash)),
            free_vars=body.free_vars - {var},
        )

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, Rec)
            and self._hash == other._hash
            and self.var == other.var
            and self.body == other.body
        )

    def unfold_once(self) -> SessionType:
        """``body[self/var]``, memoised on the node."""
        if self._unfolded is None:
            object.__setattr__(self, "_unfolded", substitute(self.body, self.var, self))
        return self._unfolded


class Choice(SessionType):
    __hash__ = SessionType.__hash__
    __slots__ = ("kind", "branches", "_map")
    __match_args__ = ("kind", "branches")

    def __init__(self, kind: Kind, branches: Iterable[tuple[str, SessionType]]):
        branches = tuple(branches)
        fv: frozenset[str] = frozenset()
        for _, cont in branches:
            if cont.free_vars:
                fv = fv | cont.free_vars
        _init(
            self,
            kind=kind,
            branches=branches,
            _map=dict(branches),
            _hash=hash(("choice", kind, frozenset((lab, c._hash) for lab, c in branches))),
            free_vars=fv,
        )

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, Choice)
            and self._hash == other._hash
            and self.kind is other.kind
            and len(self.branches) == len(other.branches)
            and self._map == other._map
        )

    @property
    def labels(self) -> frozenset[str]:
        return frozenset(self._map)

    def branch(self, label: str) -> SessionType | None:
        return self._map.get(label)

    def actions(self) -> list[Action]:
        d = self.kind.direction
        return [Action(d, lab) for lab, _ in self.branches]


END = End()


def internal(*branches: tuple[str, SessionType]) -> Choice:
    return Choice(Kind.INTERNAL, branches)


def external(*branches: tuple[str, SessionType]) -> Choice:
    return Choice(Kind.EXTERNAL, branches)


# --- substitution and unfolding -------------------------------------------


def substitute(t: SessionType, x: str, u: SessionType) -> SessionType:
    """Replace every free occurrence of ``x`` in ``t`` by ``u``.

    Assumes binders are apart from the free variables of ``u``. Subterms in
    which ``x`` is not free are returned as-is, so the result shares them.
    """
    memo: dict[int, SessionType] = {}

    def go(t: SessionType) -> SessionType:
        if x not in t.free_vars:
            return t
        key = id(t)
        hit = memo.get(key)
        if hit is not None:
            return hit
        match t:
            case Var():
                r = u
            case Rec(var, body):
                r = Rec(var, go(body))
            case Choice(kind, branches):
                r = Choice(kind, [(lab, go(c)) for lab, c in branches])
            case _:
                r = t
        memo[key] = r
        return r

    return go(t)


def unfold_top(t: SessionType) -> SessionType:
    """Unfold top-level ``rec`` binders until the head is ``end``, a choice or a variable."""
    while isinstance(t, Rec):
        t = t.unfold_once()
    return t


# --- duality ----------------------------------------------------------------


def dual_type(t: SessionType) -> SessionType:
    memo: dict[int, SessionType] = {}

    def go(t: SessionType) -> SessionType:
        hit = memo.get(id(t))
        if hit is not None:
            return hit
        match t:
            case Choice(kind, branches):
                r = Choice(kind.dual, [(lab, go(c)) for lab, c in branches])
            case Rec(var, body):
                r = Rec(var, go(body))
            case _:
                r = t
        memo[id(t)] = r
        return r

    return go(t)


# --- traversal helpers ---------------------------------------------------------


def subterms(t: SessionType) -> Iterator[SessionType]:
    """Pre-order walk of the syntax tree (shared nodes are visited once)."""
    seen: set[int] = set()
    stack = [t]
    while stack:
        s = stack.pop()
        if id(s) in seen:
            continue
        seen.add(id(s))
        yield s
        match s:
            case Rec(_, body):
                stack.append(body)
            case Choice(_, branches):
                stack.extend(c for _, c in reversed(branches))


def actions_of(t: SessionType) -> list[Action]:
    """Actions occurring in ``t``, in order of first occurrence."""
    out: dict[Action, None] = {}
    for s in subterms(t):
        if isinstance(s, Choice):
            for a in s.actions():
                out.setdefault(a, None)
    return list(out)


def bound_vars(t: SessionType) -> list[str]:
    return [s.var for s in subterms(t) if isinstance(s, Rec)]


def size(t: SessionType) -> int:
    """Number of nodes in the syntax tree."""
    match t:
        case Rec(_, body):
            return 1 + size(body)
        case Choice(_, branches):
            return 1 + sum(size(c) for _, c in branches)
        case _:
            return 1


class Alphabet:
    """Ordered, duplicate-free set of actions.

    The order only affects how boxes over action sets are laid out in
    generated formulae; it is chosen so that ``dual`` commutes with it.
    """

    __slots__ = ("actions", "_set")

    def __init__(self, actions: Iterable[Action] = ()):
        acts = tuple(dict.fromkeys(actions))
        object.__setattr__(self, "actions", acts)
        object.__setattr__(self, "_set", frozenset(acts))

    def __setattr__(self, name, value):
        raise AttributeError("Alphabet is immutable")

    @classmethod
    def of(cls, *types: SessionType) -> Alphabet:
        acts: list[Action] = []
        for t in types:
            acts.extend(actions_of(t))
        return cls(acts)

    def __iter__(self) -> Iterator[Action]:
        return iter(self.actions)

    def __len__(self) -> int:
        return len(self.actions)

    def __contains__(self, a) -> bool:
        return a in self._set

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.actions == other.actions

    def __hash__(self) -> int:
        return hash(self.actions)

    def __repr__(self) -> str:
        return "Alphabet({" + ", ".join(map(str, self.actions)) + "})"

    def without(self, drop: Iterable[Action]) -> list[Action]:
        drop = set(drop)
        return [a for a in self.actions if a not in drop]

    def dual(self) -> Alphabet:
        return Alphabet(a.dual for a in self.actions)


# --- validation ---------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str  # free-variable | duplicate-label | non-contractive | empty-choice | bad-label | rebound-variable
    message: str


def validate_type(t: SessionType, require_closed: bool = True) -> list[Violation]:
    """Return every well-formedness violation in ``t``; empty means ok."""
    out: list[Violation] = []
    binders: set[str] = set()

    def go(t: SessionType, scope: frozenset[str], unguarded: frozenset[str]) -> None:
        match t:
            case Var(name):
                if name not in scope:
                    if require_closed:
                        out.append(Violation("free-variable", f"free variable {name}"))
                elif name in unguarded:
                    out.append(
                        Violation("non-contractive", f"variable {name} is not guarded by a choice")
                    )
            case Rec(var, body):
                if var in binders or var in scope:
                    out.append(Violation("rebound-variable", f"variable {var} bound twice"))
                binders.add(var)
                go(body, scope | {var}, unguarded | {var})
            case Choice(kind, branches):
                if not branches:
                    out.append(Violation("empty-choice", f"empty {kind.value}{{}}"))
                seen: set[str] = set()
                for lab, cont in branches:
                    if not IDENT.match(lab):
                        out.append(Violation("bad-label", f"invalid label {lab!r}"))
                    if lab in seen:
                        out.append(Violation("duplicate-label", f"label {lab} repeated"))
                    seen.add(lab)
                    go(cont, scope, frozenset())

    go(t, frozenset(), frozenset())
    return out


class InvalidType(ValueError):
    def __init__(self, violations: list[Violation]):
        super().__init__("; ".join(v.message for v in violations))
        self.violations = violations


def check_type(t: SessionType, require_closed: bool = True) -> SessionType:
    errs = validate_type(t, require_closed)
    if errs:
        raise InvalidType(errs)
    return t


# --- alpha-equivalence --------------------------------------------------------


def alpha_equal(t: SessionType, u: SessionType) -> bool:
    """Structural equality up to the choice of bound names."""

    def go(t, u, env_t: dict[str, int], env_u: dict[str, int], depth: int) -> bool:
        match t, u:
            case End(), End():
                return True
            case Var(a), Var(b):
                if a in env_t or b in env_u:
                    return env_t.get(a) == env_u.get(b)
                return a == b
            case Rec(x, bt), Rec(y, bu):
                return go(bt, bu, {**env_t, x: depth}, {**env_u, y: depth}, depth + 1)
            case Choice(k1, br1), Choice(k2, br2):
                if k1 is not k2 or len(br1) != len(br2):
                    return False
                m2 = dict(br2)
                if len(m2) != len(br2):
                    return False
                for lab, c in br1:
                    if lab not in m2 or not go(c, m2[lab], env_t, env_u, depth):
                        return False
                return True
        return False

    return go(t, u, {}, {}, 0)


# --- size metrics -------------------------------------------------------------


def nummsg(t: SessionType) -> int:
    """Number of messages: every choice contributes its branch count."""
    match t:
        case Rec(_, body):
            return nummsg(body)
        case Choice(_, branches):
            return len(branches) + sum(nummsg(c) for _, c in branches)
    return 0


def varocc(t: SessionType, x: str) -> int:
    """Count free occurrences of ``x`` in ``t``."""
    if x not in t.free_vars:
        return 0
    match t:
        case Var():
            return 1
        case Rec(_, body):
            return varocc(body, x)
        case Choice(_, branches):
            return sum(varocc(c, x) for _, c in branches)
    return 0


def unfold_measure(t: SessionType) -> int:
    """Messages in the one-step unfolding of every recursion."""
    match t:
        case Rec(x, body):
            return (1 + varocc(body, x)) * unfold_measure(body)
        case Choice(_, branches):
            return len(branches) + sum(unfold_measure(c) for _, c in branches)
    return 0
