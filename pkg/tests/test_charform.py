from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import oracle_subtype, random_pair, random_type
from sessub.charform import Mode, char_formula, subtype_cf_sub, subtype_cf_sup
from sessub.generator import GenParams, gen_open
from sessub.mucalc import (
    FALSE,
    TRUE,
    And,
    Box,
    Diamond,
    Nu,
    Or,
    box_all,
    dual_formula,
    formula_size,
    print_formula,
    substitute_formula,
)
from sessub.syntax import parse_type
from sessub.types import END, Alphabet, dual_type, recv, send, size, substitute

T1 = parse_type("?request . !ok . end")
U1 = parse_type("rec x . ?request . +{ !ok . end, !ko . x }")
T2 = parse_type("rec x . !request . &{ ?ok . end, ?ko . x, ?error . end }")
U2 = parse_type("rec x . !request . &{ ?ok . end, ?ko . x }")
ALPHA = Alphabet([recv("request"), send("ok"), send("ko")])
seeds = st.integers(0, 2**32)


class TestWorkedFormulae:
    def test_t1_sub(self):
        end_f = box_all(ALPHA, FALSE)
        expected = And(
            Box(recv("request"), Diamond(send("ok"), end_f)),
            And(Diamond(recv("request"), TRUE), box_all([send("ok"), send("ko")], FALSE)),
        )
        assert char_formula(T1, Mode.SUB, ALPHA) == expected

    def test_u1_sup(self):
        text = print_formula(char_formula(U1, Mode.SUP, ALPHA))
        assert text == (
            "nu x . <?request>([!ok]([?request]ff && [!ok]ff && [!ko]ff)"
            " && [!ko]x && (<!ok>tt || <!ko>tt) && [?request]ff)"
        )

    def test_verdicts(self):
        assert subtype_cf_sub(T1, U1)
        assert subtype_cf_sup(T1, U1)


def test_end():
    assert char_formula(END, Mode.SUB, ALPHA) == box_all(ALPHA, FALSE)
    assert char_formula(END, Mode.SUP, Alphabet()) == TRUE


def test_singleton_disjunct_has_no_or():
    phi = char_formula(parse_type("?a . end"), Mode.SUB, Alphabet([recv("a")]))
    assert phi == And(Box(recv("a"), box_all([recv("a")], FALSE)), Diamond(recv("a"), TRUE))


def test_empty_complement_is_omitted():
    alpha = Alphabet([recv("a"), recv("b")])
    phi = char_formula(parse_type("&{ ?a . end, ?b . end }"), Mode.SUB, alpha)
    end_f = box_all(alpha, FALSE)
    some = Or(Diamond(recv("a"), TRUE), Diamond(recv("b"), TRUE))
    assert phi == And(Box(recv("a"), end_f), And(Box(recv("b"), end_f), some))


def test_dummy_fixpoints_wrap_modalities():
    phi = char_formula(parse_type("!a . end"), Mode.SUB, Alphabet([send("a")]), dummy_fixpoints=True)
    assert isinstance(phi, Diamond) and isinstance(phi.body, Nu)
    assert phi.body.var not in phi.body.body.free_vars


class TestSubtyping:
    def test_worked_pairs(self):
        for f in (subtype_cf_sub, subtype_cf_sup):
            assert f(T1, U1) and f(T2, U2)
            assert not f(U1, T1) and not f(U2, T2)

    def test_end(self):
        assert subtype_cf_sub(END, END) and subtype_cf_sup(END, END)

    def test_end_vs_choice(self):
        assert not subtype_cf_sub(END, T1) and not subtype_cf_sup(T1, END)

    def test_width(self):
        narrow, wide = parse_type("!a . end"), parse_type("+{ !a . end, !b . end }")
        assert subtype_cf_sub(narrow, wide) and not subtype_cf_sub(wide, narrow)
        narrow, wide = dual_type(narrow), dual_type(wide)
        assert subtype_cf_sup(wide, narrow) and not subtype_cf_sup(narrow, wide)

    @settings(max_examples=300, deadline=None)
    @given(st.integers(0, 10**6))
    def test_matches_oracle(self, i):
        t, u = random_pair(i)
        expected = oracle_subtype(t, u)
        assert subtype_cf_sub(t, u) == expected
        assert subtype_cf_sup(t, u) == expected

    @settings(max_examples=300, deadline=None)
    @given(st.integers(0, 10**6))
    def test_dummy_fixpoints_never_change_verdicts(self, i):
        t, u = random_pair(i, 20)
        assert subtype_cf_sub(t, u, dummy_fixpoints=True) == subtype_cf_sub(t, u)
        assert subtype_cf_sup(t, u, dummy_fixpoints=True) == subtype_cf_sup(t, u)


@settings(max_examples=200, deadline=None)
@given(seeds, st.sampled_from(list(Mode)), st.integers(1, 20), st.integers(0, 20))
def test_compositionality(seed, mode, n, m):
    t = gen_open(GenParams(target_size=n, seed=seed), ("x",))
    u = random_type(seed + 1, m)
    alpha = Alphabet.of(t, u)
    lhs = char_formula(substitute(t, "x", u), mode, alpha)
    rhs = substitute_formula(char_formula(t, mode, alpha), "x", char_formula(u, mode, alpha))
    assert lhs == rhs


@settings(max_examples=200, deadline=None)
@given(seeds, st.sampled_from(list(Mode)))
def test_duality_transport(seed, mode):
    t = random_type(seed)
    alpha = Alphabet.of(t)
    assert dual_formula(char_formula(t, mode, alpha)) == char_formula(dual_type(t), mode.dual, alpha.dual())


@settings(max_examples=200, deadline=None)
@given(seeds, st.sampled_from(list(Mode)))
def test_size_linear(seed, mode):
    t = random_type(seed)
    alpha = Alphabet.of(t)
    assert formula_size(char_formula(t, mode, alpha)) <= (4 * len(alpha) + 8) * size(t)
