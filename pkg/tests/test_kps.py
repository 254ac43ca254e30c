import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import oracle_subtype, random_pair, random_type
from sessub.generator import GenParams, gen_norec
from sessub.kps import (
    END_C,
    Constructor,
    ProductAutomaton,
    constructor_leq,
    counterexample,
    language_empty,
    product,
    subtype_kps,
    to_term_automaton,
)
from sessub.syntax import parse_type
from sessub.types import END, Kind, recv, send

T1 = parse_type("?request . !ok . end")
U1 = parse_type("rec x . ?request . +{ !ok . end, !ko . x }")


def plus(*labels):
    return Constructor(Kind.INTERNAL, frozenset(send(a) for a in labels))


def amp(*labels):
    return Constructor(Kind.EXTERNAL, frozenset(recv(a) for a in labels))


class TestConstructorOrder:
    def test_end(self):
        assert constructor_leq(END_C, END_C)

    def test_internal_covariant_in_labels(self):
        assert constructor_leq(plus("ok"), plus("ok", "ko"))
        assert not constructor_leq(plus("ok", "ko"), plus("ok"))

    def test_external_contravariant_in_labels(self):
        assert constructor_leq(amp("ok", "ko"), amp("ok"))
        assert not constructor_leq(amp("ok"), amp("ok", "ko"))

    def test_mixed(self):
        assert not constructor_leq(END_C, plus("a"))
        assert not constructor_leq(plus("a"), END_C)
        assert not constructor_leq(plus("a"), amp("a"))

    def test_choice_needs_actions(self):
        with pytest.raises(ValueError):
            Constructor(Kind.INTERNAL, frozenset())


class TestTermAutomaton:
    def test_end(self):
        m = to_term_automaton(END)
        assert m.labels == [END_C] and m.delta == [{}]

    def test_t1(self):
        m = to_term_automaton(T1)
        assert m.labels == [amp("request"), plus("ok"), END_C]

    def test_u1(self):
        m = to_term_automaton(U1)
        assert m.labels == [amp("request"), plus("ok", "ko"), END_C]
        assert m.delta[1][send("ko")] == 0

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**32))
    def test_delta_matches_labels(self, seed):
        m = to_term_automaton(random_type(seed))
        for q, c in enumerate(m.labels):
            assert set(m.delta[q]) == set(c.actions)


class TestProduct:
    def test_t1_u1(self):
        p = product(to_term_automaton(T1), to_term_automaton(U1))
        assert len(p.states) == 3
        assert p.accepting == set()
        assert language_empty(p)
        assert counterexample(p) is None

    def test_u1_t1(self):
        p = product(to_term_automaton(U1), to_term_automaton(T1))
        assert len(p.accepting) == 1
        (state,) = p.accepting
        assert p.label(state) == "⊕{!ok,!ko} ⋢ ⊕{!ok}"
        assert not language_empty(p)
        assert counterexample(p) == [recv("request")]

    def test_self_product_is_diagonal(self):
        m = to_term_automaton(U1)
        p = product(m, m)
        assert all(a == b for a, b in p.states) and not p.accepting

    def test_trivial_empty(self):
        m = to_term_automaton(END)
        p = ProductAutomaton([(0, 0)], (0, 0), {(0, 0): {}}, set(), {(0, 0): None}, m, m)
        assert language_empty(p)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 10**6))
    def test_quadratic_bound_and_delta(self, i):
        t, u = random_pair(i)
        m, n = to_term_automaton(t), to_term_automaton(u)
        p = product(m, n)
        assert len(p.states) <= len(m.states) * len(n.states)
        for (q1, q2), out in p.delta.items():
            assert set(out) == set(m.delta[q1]) & set(n.delta[q2])
        assert p.accepting == {s for s in p.states if not constructor_leq(m.labels[s[0]], n.labels[s[1]])}

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**32), st.integers(0, 25))
    def test_acyclic_without_recursion(self, seed, n):
        t = gen_norec(GenParams(target_size=n, seed=seed))
        u = gen_norec(GenParams(target_size=n, seed=seed + 1))
        p = product(to_term_automaton(t), to_term_automaton(u))
        order = {s: i for i, s in enumerate(p.states)}
        for s, out in p.delta.items():
            assert all(order[nxt] > order[s] for nxt in out.values())

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 10**6))
    def test_counterexample_reaches_accepting(self, i):
        t, u = random_pair(i)
        p = product(to_term_automaton(t), to_term_automaton(u))
        trace = counterexample(p)
        if trace is None:
            assert language_empty(p)
            return
        s = p.initial
        for a in trace:
            s = p.delta[s][a]
        assert s in p.accepting


def test_subtype_examples():
    assert subtype_kps(T1, U1)
    assert not subtype_kps(U1, T1)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_reflexive(seed):
    t = random_type(seed)
    assert subtype_kps(t, t)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**6))
def test_matches_oracle(i):
    t, u = random_pair(i)
    assert subtype_kps(t, u) == oracle_subtype(t, u)
