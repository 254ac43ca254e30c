import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import oracle_safe, random_pair, random_type
from sessub.safety import (
    ErrorKind,
    System,
    is_error,
    safe_by_formula,
    safe_by_subtyping,
    safe_explore,
    sync_run,
    sync_step,
)
from sessub.syntax import parse_type
from sessub.types import END, Choice, dual_type, external

T1 = parse_type("?request . !ok . end")
U1 = parse_type("rec x . ?request . +{ !ok . end, !ko . x }")
U2 = parse_type("rec x . !request . &{ ?ok . end, ?ko . x }")
P = parse_type


def safety_pair(i: int):
    t, u = random_pair(i, 15)
    # half the corpus is composed against a (possibly perturbed) dual, so
    # both safe and unsafe systems occur often
    return (t, dual_type(u)) if i % 2 else (t, u)


class TestSyncStep:
    def test_first_step(self):
        [(lab, nxt)] = sync_step(System.of(T1, U2))
        assert lab == "request"
        assert nxt == System(P("!ok . end"), external(("ok", END), ("ko", U2)))

    def test_end_end(self):
        assert sync_step(System.of(END, END)) == []

    def test_same_direction(self):
        assert sync_step(System.of(P("!a . end"), P("!a . end"))) == []

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 10**6))
    def test_bounded_by_branching(self, i):
        t, u = safety_pair(i)
        s = System.of(t, u)
        succ = sync_step(s)
        widths = [len(x.branches) if isinstance(x, Choice) else 0 for x in (s.left, s.right)]
        assert len(succ) <= min(widths)


class TestWorkedTrace:
    def test_trace(self):
        run = sync_run(System(T1, U2), ["request", "ok"])
        assert [str(s) for s in run] == [
            "?request . !ok . end || !request . &{ ?ok . end, ?ko . rec x . !request . &{ ?ok . end, ?ko . x } }",
            "!ok . end || &{ ?ok . end, ?ko . rec x . !request . &{ ?ok . end, ?ko . x } }",
            "end || end",
        ]
        assert all(is_error(s) is None for s in run)

    def test_wrong_label(self):
        with pytest.raises(ValueError):
            sync_run(System(T1, U2), ["ok"])


class TestIsError:
    def test_same_direction(self):
        assert is_error(System.of(P("!a . end"), P("!a . end"))) is ErrorKind.SameDirection

    def test_missing_label(self):
        assert is_error(System.of(P("+{ !a . end, !b . end }"), P("?a . end"))) is ErrorKind.MissingLabel
        assert is_error(System.of(P("?a . end"), P("+{ !a . end, !b . end }"))) is ErrorKind.MissingLabel

    def test_end_mismatch(self):
        assert is_error(System.of(END, P("?a . end"))) is ErrorKind.EndMismatch
        assert is_error(System.of(P("!a . end"), END)) is ErrorKind.EndMismatch

    def test_none(self):
        assert is_error(System.of(END, END)) is None
        assert is_error(System.of(P("!a . end"), P("&{ ?a . end, ?b . end }"))) is None


class TestExplore:
    def test_worked_pair_safe(self):
        assert safe_explore(T1, U2).safe

    def test_end(self):
        assert safe_explore(END, END)

    def test_initial_error(self):
        res = safe_explore(P("!a . end"), P("?b . end"))
        assert not res.safe and res.trace == [] and res.error is ErrorKind.MissingLabel
        assert res.format_trace() == "MissingLabel"

    def test_trace_format(self):
        res = safe_explore(P("!a . !b . end"), P("?a . ?c . end"))
        assert res.format_trace() == "⟨a⟩\nMissingLabel"

    def test_recursive_error_found(self):
        res = safe_explore(U1, P("rec y . !request . &{ ?ok . end, ?ko . !request . &{ ?ok . end, ?ko . y } }"))
        assert res.safe
        res = safe_explore(U1, P("rec y . !request . ?ok . y"))
        assert not res.safe and res.trace == ["request"] and res.error is ErrorKind.MissingLabel
        res = safe_explore(U1, P("rec y . !request . &{ ?ok . !request . end, ?ko . y }"))
        assert not res.safe and res.trace == ["request", "ok"] and res.error is ErrorKind.EndMismatch


class TestBySubtyping:
    @pytest.mark.parametrize("algo", ["gh", "kps", "cf"])
    def test_worked_pair(self, algo):
        assert safe_by_subtyping(T1, U2, algo)
        assert safe_by_subtyping(END, END, algo)

    def test_literal_second_disjunct_is_unsound(self):
        t, u = P("?a . end"), P("+{ !a . end, !b . end }")
        assert not safe_explore(t, u).safe
        assert safe_by_subtyping(t, u, "cf", literal=True)
        assert not safe_by_subtyping(t, u, "cf")

    @pytest.mark.parametrize("form", "bcde")
    def test_literal_forms_are_unsound(self, form):
        t, u = P("?a . end"), P("+{ !a . end, !b . end }")
        # the two orientations are both unsafe; each literal form accepts one of them
        accepted = [safe_by_formula(t, u, form, literal=True), safe_by_formula(u, t, form, literal=True)]
        assert any(accepted)
        assert not safe_by_formula(t, u, form) and not safe_by_formula(u, t, form)

    def test_unknown_form(self):
        with pytest.raises(ValueError):
            safe_by_formula(END, END, "a")


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**6))
def test_all_characterisations_agree(i):
    t, u = safety_pair(i)
    expected = oracle_safe(t, u)
    assert safe_explore(t, u).safe == expected
    for algo in ("gh", "kps", "cf"):
        assert safe_by_subtyping(t, u, algo) == expected
    for form in "bcde":
        assert safe_by_formula(t, u, form) == expected


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_dual_is_safe(seed):
    t = random_type(seed)
    assert safe_explore(t, dual_type(t)).safe
