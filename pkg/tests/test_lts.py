from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_type
from sessub.lts import build_lts, isomorphic
from sessub.syntax import parse_type
from sessub.types import END, Choice, End, dual_type, recv, send, unfold_top

U1 = "rec x . ?request . +{ !ok . end, !ko . x }"
seeds = st.integers(0, 2**32)


def test_end():
    lts = build_lts(END)
    assert len(lts) == 1 and lts.edges == []


def test_t1():
    lts = build_lts(parse_type("?request . !ok . end"))
    assert len(lts) == 3
    assert lts.edges == [(0, recv("request"), 1), (1, send("ok"), 2)]
    assert isinstance(lts.states[2], End)


def test_u1_back_edge():
    lts = build_lts(parse_type(U1))
    assert len(lts) == 3
    assert (1, send("ko"), 0) in lts.edges
    assert lts.transitions(1)[send("ok")] == 2
    assert lts.actions() == {recv("request"), send("ok"), send("ko")}


def test_states_are_canonical():
    lts = build_lts(parse_type("rec x . rec y . !a . +{ !b . x, !c . y }"))
    assert all(isinstance(s, Choice | End) for s in lts.states)


def test_end_has_no_edges():
    lts = build_lts(parse_type("+{ !a . end, !b . rec x . ?c . x }"))
    for i, s in enumerate(lts.states):
        if isinstance(s, End):
            assert lts.succ[i] == {}


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_reachable_and_deterministic(seed):
    lts = build_lts(random_type(seed))
    seen, stack = {lts.initial}, [lts.initial]
    while stack:
        for j in lts.succ[stack.pop()].values():
            if j not in seen:
                seen.add(j)
                stack.append(j)
    assert seen == set(range(len(lts)))
    # one target per (state, action): successors are dicts keyed by action,
    # and each key matches a distinct branch of the canonical state
    for i, s in enumerate(lts.states):
        if isinstance(s, Choice):
            assert len(lts.succ[i]) == len(s.branches)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_dual_flips_labels_only(seed):
    t = random_type(seed)
    assert isomorphic(build_lts(dual_type(t)), build_lts(t), relabel=lambda a: a.dual)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_unfold_top_preserves_lts(seed):
    t = random_type(seed)
    assert isomorphic(build_lts(t), build_lts(unfold_top(t)))


def test_isomorphic_detects_difference():
    a = build_lts(parse_type("!a . end"))
    b = build_lts(parse_type("!b . end"))
    assert not isomorphic(a, b)
