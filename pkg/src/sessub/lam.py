"""Recursive lambda-calculus types: LTS, coinductive subtyping and characteristic formulae.

Syntax: ``top``, ``bot``, ``t1 -> t2`` (right-associative), ``rec v . t``,
variables, parentheses.
"""

from __future__ import annotations

import random
from enum import Enum

from .lts import Lts, explore
from .mucalc import TRUE, And, Diamond, FVar, Formula, Nu, Or, models
from .syntax import ParseError, TokenStream


class LAction(Enum):
    ZERO = "0"
    ONE = "1"
    TOP = "top"
    BOT = "bot"

    def __str__(self) -> str:
        return self.value

    @staticmethod
    def parse(text: str) -> LAction:
        return LAction(text.strip())


class LType:
    __slots__ = ("_hash", "free_vars")

    def __hash__(self) -> int:
        return self._hash

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __str__(self) -> str:
        return print_ltype(self)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {print_ltype(self)}>"


def _init(obj, **fields) -> None:
    for k, v in fields.items():
        object.__setattr__(obj, k, v)


class Top(LType):
    __hash__ = LType.__hash__
    __slots__ = ()
    __match_args__ = ()

    def __init__(self):
        _init(self, _hash=hash("top"), free_vars=frozenset())

    def __eq__(self, other) -> bool:
        return isinstance(other, Top)


class Bot(LType):
    __hash__ = LType.__hash__
    __slots__ = ()
    __match_args__ = ()

    def __init__(self):
        _init(self, _hash=hash("bot"), free_vars=frozenset())

    def __eq__(self, other) -> bool:
        return isinstance(other, Bot)


class Arrow(LType):
    __hash__ = LType.__hash__
    __slots__ = ("dom", "cod")
    __match_args__ = ("dom", "cod")

    def __init__(self, dom: LType, cod: LType):
        _init(
            self,
            dom=dom,
            cod=cod,
            _hash=hash(("->", dom._hash, cod._hash)),
            free_vars=dom.free_vars | cod.free_vars,
        )

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, Arrow)
            and self._hash == other._hash
            and self.dom == other.dom
            and self.cod == other.cod
        )


class LVar(LType):
    __hash__ = LType.__hash__
    __slots__ = ("name",)
    __match_args__ = ("name",)

    def __init__(self, name: str):
        _init(self, name=name, _hash=hash(("lvar", name)), free_vars=frozenset((name,)))

    def __eq__(self, other) -> bool:
        return isinstance(other, LVar) and other.name == self.name


class LRec(LType):
    __hash__ = LType.__hash__
    __slots__ = ("var", "body", "_unfolded")
    __match_args__ = ("var", "body")

    def __init__(self, var: str, body: LType):
        _init(
            self,
            var=var,
            body=body,
            _unfolded=None,
            _hash=hash(("lrec", var, body._hash)),
            free_vars=body.free_vars - {var},
        )

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, LRec)
            and self._hash == other._hash
            and self.var == other.var
            and self.body == other.body
        )

    def unfold_once(self) -> LType:
        if self._unfolded is None:
            object.__setattr__(self, "_unfolded", lsubstitute(self.body, self.var, self))
        return self._unfolded


TOP = Top()
BOT = Bot()


def lsubstitute(t: LType, x: str, u: LType) -> LType:
    memo: dict[int, LType] = {}

    def go(t: LType) -> LType:
        if x not in t.free_vars:
            return t
        hit = memo.get(id(t))
        if hit is not None:
            return hit
        match t:
            case LVar():
                r = u
            case Arrow(a, b):
                r = Arrow(go(a), go(b))
            case LRec(v, body):
                r = LRec(v, go(body))
        memo[id(t)] = r
        return r

    return go(t)


def lunfold(t: LType) -> LType:
    while isinstance(t, LRec):
        t = t.unfold_once()
    return t


# --- syntax ---------------------------------------------------------------------


def _parse(ts: TokenStream) -> LType:
    if ts.peek.text == "rec":
        ts.next()
        v = ts.ident()
        ts.expect(".")
        return LRec(v, _parse(ts))
    left = _atom(ts)
    if ts.peek.text == "->":
        ts.next()
        return Arrow(left, _parse(ts))
    return left


def _atom(ts: TokenStream) -> LType:
    tok = ts.next()
    if tok.text == "(":
        inner = _parse(ts)
        ts.expect(")")
        return inner
    if tok.kind != "ident":
        raise ts.error(f"expected a type, found {tok.text or 'end of input'!r}", tok)
    if tok.text == "top":
        return TOP
    if tok.text == "bot":
        return BOT
    if tok.text == "rec":
        raise ts.error("parenthesise 'rec' on the left of '->'", tok)
    return LVar(tok.text)


def validate_ltype(t: LType, require_closed: bool = True) -> list[str]:
    out: list[str] = []

    def go(t: LType, scope: frozenset[str], unguarded: frozenset[str]) -> None:
        match t:
            case LVar(v):
                if v not in scope:
                    if require_closed:
                        out.append(f"free variable {v}")
                elif v in unguarded:
                    out.append(f"variable {v} is not guarded by an arrow")
            case LRec(v, body):
                go(body, scope | {v}, unguarded | {v})
            case Arrow(a, b):
                go(a, scope, frozenset())
                go(b, scope, frozenset())

    go(t, frozenset(), frozenset())
    return out


def _rename_apart(t: LType) -> LType:
    taken = set(t.free_vars)

    def fresh(v: str) -> str:
        if v not in taken:
            return v
        i = 1
        while f"{v}_{i}" in taken:
            i += 1
        return f"{v}_{i}"

    def go(t: LType, env: dict[str, str]) -> LType:
        match t:
            case LVar(v):
                return LVar(env.get(v, v))
            case LRec(v, body):
                new = fresh(v)
                taken.add(new)
                return LRec(new, go(body, {**env, v: new}))
            case Arrow(a, b):
                return Arrow(go(a, env), go(b, env))
        return t

    return go(t, {})


def parse_ltype(text: str, require_closed: bool = True) -> LType:
    ts = TokenStream(text)
    t = _parse(ts)
    if ts.peek.kind != "eof":
        raise ts.error(f"trailing input {ts.peek.text!r}")
    t = _rename_apart(t)
    errs = validate_ltype(t, require_closed)
    if errs:
        raise ValueError("; ".join(errs))
    return t


def print_ltype(t: LType) -> str:
    match t:
        case Top():
            return "top"
        case Bot():
            return "bot"
        case LVar(v):
            return v
        case LRec(v, body):
            return f"rec {v} . {print_ltype(body)}"
        case Arrow(a, b):
            left = print_ltype(a)
            if isinstance(a, (Arrow, LRec)):
                left = f"({left})"
            return f"{left} -> {print_ltype(b)}"
    raise TypeError(f"not a lambda type: {t!r}")


# --- semantics --------------------------------------------------------------------


def _lstep(t: LType):
    match t:
        case Top():
            yield LAction.TOP, TOP
        case Bot():
            yield LAction.BOT, TOP
        case Arrow(a, b):
            yield LAction.ZERO, lunfold(a)
            yield LAction.ONE, lunfold(b)


def build_llts(t: LType) -> Lts[LType]:
    return explore(lunfold(t), _lstep)


def lsubtype_direct(t: LType, u: LType) -> bool:
    """Coinductive check; assumed pairs are kept for the whole run."""
    assumed: set[tuple[LType, LType]] = set()
    stack = [(lunfold(t), lunfold(u))]
    while stack:
        t, u = stack.pop()
        if (t, u) in assumed:
            continue
        assumed.add((t, u))
        if isinstance(t, Bot) or isinstance(u, Top):
            continue
        if isinstance(t, Arrow) and isinstance(u, Arrow):
            stack.append((lunfold(u.dom), lunfold(t.dom)))
            stack.append((lunfold(t.cod), lunfold(u.cod)))
            continue
        return False
    return True


def _flip(d: LAction) -> LAction:
    return LAction.BOT if d is LAction.TOP else LAction.TOP


def _other(d: LAction) -> type:
    return Bot if d is LAction.TOP else Top


def lchar_formula_literal(t: LType, delta: LAction) -> Formula:
    """The five-case table exactly as usually stated.

    Incomplete: it misses ``u = top`` below an arrow (via ``top``) and
    ``t = bot`` below an arrow (via ``bot``), and binds every occurrence of
    a recursion variable to the polarity of its binder. Kept for comparison;
    use :func:`lchar_formula`.
    """

    def go(t: LType, d: LAction) -> Formula:
        match t:
            case Top() | Bot() if t == (TOP if d is LAction.TOP else BOT):
                return Diamond(d, TRUE)
            case Top() | Bot():
                return TRUE
            case Arrow(a, b):
                return And(Diamond(LAction.ZERO, go(a, _flip(d))), Diamond(LAction.ONE, go(b, d)))
            case LRec(v, body):
                return Nu(v, go(body, d))
            case LVar(v):
                return FVar(v)
        raise TypeError(f"not a lambda type: {t!r}")

    return go(t, delta)


def lchar_formula(t: LType, delta: LAction) -> Formula:
    """Formula satisfied exactly by the supertypes (``top``) or subtypes (``bot``) of ``t``.

    Differs from the five-case table in two places: an arrow also admits the
    extreme type of its polarity (``... or <delta>tt``), and a recursion
    variable met at the opposite polarity of its binder opens a new fixpoint
    over the binder's body at that polarity.
    """
    used: set[str] = set()
    bodies: dict[str, LType] = {}

    def collect(t: LType) -> None:
        match t:
            case LVar(v):
                used.add(v)
            case LRec(v, body):
                used.add(v)
                collect(body)
            case Arrow(a, b):
                collect(a)
                collect(b)

    collect(t)

    def fresh(base: str) -> str:
        name, i = base, 1
        while name in used:
            name = f"{base}_{i}"
            i += 1
        used.add(name)
        return name

    first_binding: set[str] = set()

    def bind(v: str) -> str:
        if v not in first_binding:
            first_binding.add(v)
            return v
        return fresh(v)

    def go(t: LType, d: LAction, env: dict[tuple[str, LAction], str]) -> Formula:
        match t:
            case Top() | Bot() if t == (TOP if d is LAction.TOP else BOT):
                return Diamond(d, TRUE)
            case Top() | Bot():
                return TRUE
            case Arrow(a, b):
                both = And(
                    Diamond(LAction.ZERO, go(a, _flip(d), env)),
                    Diamond(LAction.ONE, go(b, d, env)),
                )
                return Or(both, Diamond(d, TRUE))
            case LRec(v, body):
                bodies[v] = body
                name = bind(v)
                return Nu(name, go(body, d, {**env, (v, d): name}))
            case LVar(v):
                name = env.get((v, d))
                if name is not None:
                    return FVar(name)
                name = fresh(f"{v}_{d.value}")
                return Nu(name, go(bodies[v], d, {**env, (v, d): name}))
        raise TypeError(f"not a lambda type: {t!r}")

    return go(t, delta, {})


def lsubtype_cf(t: LType, u: LType, mode: str = "via_top") -> bool:
    """``via_top``: ``u |= L(t, top)``; ``via_bot``: ``t |= L(u, bot)``."""
    if mode == "via_top":
        return models(build_llts(u), lchar_formula(t, LAction.TOP))
    if mode == "via_bot":
        return models(build_llts(t), lchar_formula(u, LAction.BOT))
    raise ValueError(f"unknown mode {mode!r}")


def gen_ltype(seed: int, size: int = 8, rec_probability: float = 0.3, var_probability: float = 0.5) -> LType:
    """Random closed contractive type with ``size`` arrow nodes."""
    rng = random.Random(seed)
    counter = 0

    def node(budget: int, scope: list[str], guarded: bool) -> LType:
        nonlocal counter
        if budget <= 0:
            if guarded and scope and rng.random() < var_probability:
                return LVar(rng.choice(scope))
            return rng.choice((TOP, BOT))
        if rng.random() < rec_probability:
            v = f"v{counter}"
            counter += 1
            return LRec(v, arrow(budget, [*scope, v]))
        return arrow(budget, scope)

    def arrow(budget: int, scope: list[str]) -> LType:
        left = rng.randint(0, budget - 1)
        return Arrow(node(left, scope, True), node(budget - 1 - left, scope, True))

    return node(size, [], False)


__all__ = [
    "Arrow",
    "BOT",
    "Bot",
    "LAction",
    "LRec",
    "LType",
    "LVar",
    "ParseError",
    "TOP",
    "Top",
    "build_llts",
    "gen_ltype",
    "lchar_formula",
    "lchar_formula_literal",
    "lsubtype_cf",
    "lsubtype_direct",
    "parse_ltype",
    "print_ltype",
    "validate_ltype",
]
