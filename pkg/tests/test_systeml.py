import pytest
from hypothesis import given, strategies as st

from polcheck.driver import check_elaborated, check_query
from polcheck.errors import CheckError, MergeConflict, PolcheckError, ScopeError
from polcheck.kernel import (
    BOT, CARTESIAN, LINEAR, LNL_BANG, LNL_FULL, NEG, ONE, POS, PRESETS, Atom, Par, TEntry, Tensor, With,
    recording, show_type,
)
from polcheck.oracle import derive_all, generate_queries
from polcheck.scope import elaborate
from polcheck.surface import AtomDecl, parse_program, parse_term, parse_type
from polcheck.systeml import (
    LChecker, check_coexpr, check_command, check_expr, dual_ctx, dualize, synth_copattern, synth_pattern,
)

from conftest import CORPUS, queries, run

Pp, Qp = Atom("P", POS), Atom("Q", POS)
N, M = Atom("N", NEG), Atom("M", NEG)


def oracle_confirms(text, calculus="pol", preset=None):
    q = queries(text, calculus)[-1]
    el, (ty, ctx) = check_query(q, calculus, preset)
    assert derive_all(el).contains(ty, ctx)


class TestExpressions:
    def test_tensor(self):
        text = "expr [] (a, b) : P * Q;"
        assert run(text) == (None, ["a : P", "b : Q"])
        oracle_confirms(text)

    def test_unit(self):
        assert run("expr [] () : I;") == (None, [])

    def test_down_of_bottom_comatch(self):
        text = "expr [k : I] down (comatch { < () | k > => [] }) : down bot;"
        assert run(text) == (None, [])
        oracle_confirms(text)

    def test_down_intro_uses_subtype(self):
        # the found type is a subtype of the expected one through a dropped binder
        assert run("expr [k : I] down (mu- x. < () | k >) : down N;", "pol", "cartesian") == (None, [])

    def test_direct_entry_point(self):
        el = elaborate(queries("expr [] () : I;")[0], LINEAR, "pol")
        assert check_expr((), parse_type("I"), el.root, LINEAR) == ()


class TestPatterns:
    def test_covariable(self):
        assert run("pattern [k : P] k;") == ("P", [])

    def test_mu_tilde(self):
        text = "pattern [k : P] mut+ x. < x | k >;"
        assert run(text) == ("P", [])
        oracle_confirms(text)

    def test_down_match(self):
        text = "pattern [] match { down(x : bot) => < [] | x > };"
        assert run(text) == ("down bot", [])
        oracle_confirms(text)

    def test_nullary_match_is_zero(self):
        assert run("pattern [] match { };") == ("0", [])

    def test_sum_match_meets_shared_sigma(self):
        text = "pattern [k : P * P, j : P * P] match { inl x => < (x, a) | k >; inr y => < (y, a) | j > };"
        assert run(text, "pol", "cartesian") == ("P + P", ["a : P"])

    def test_sum_match_conflict(self):
        text = "pattern [k : P * P, j : P * Q] match { inl x => < (x, a) | k >; inr y => < (y, a) | j > };"
        with pytest.raises(MergeConflict):
            run(text, "pol", "cartesian")

    def test_direct_entry_point(self):
        el = elaborate(queries("pattern [k : P] k;")[0], LINEAR, "pol")
        assert synth_pattern((TEntry("k", POS, Pp),), el.root, LINEAR) == (Pp, ())


class TestCopatterns:
    def test_variable(self):
        assert run("copattern [x : N] x;") == ("N", [])

    def test_lnl_up_cointro(self):
        text = "copattern [] Up(a : P);"
        assert run(text, "lnl") == ("Up P", ["a : P"])
        oracle_confirms(text, "lnl")

    def test_up_comatch(self):
        text = "copattern [] comatch { < () | k > => up(k : I) };"
        assert run(text) == ("up I", [])
        oracle_confirms(text)

    def test_nullary_comatch_is_one(self):
        assert run("copattern [] comatch { };") == ("1", [])

    def test_direct_entry_point(self):
        el = elaborate(queries("copattern [x : N] x;")[0], LINEAR, "pol")
        assert synth_copattern((TEntry("x", NEG, N),), el.root, LINEAR) == (N, ())


class TestCoexpressions:
    def test_counit(self):
        assert run("coexpr [] [] : bot;") == (None, [])

    def test_projection(self):
        text = "coexpr [] pi1 x : N & M;"
        assert run(text) == (None, ["x : N"])
        oracle_confirms(text)

    def test_cotuple(self):
        text = "coexpr [] [x, y] : N par M;"
        assert run(text) == (None, ["x : N", "y : M"])
        oracle_confirms(text)

    def test_direct_entry_point(self):
        el = elaborate(queries("coexpr [] [] : bot;")[0], LINEAR, "pol")
        assert check_coexpr((), BOT, el.root, LINEAR) == ()


class TestCommands:
    def test_positive_cut(self):
        text = "command [k : P] < x | k >;"
        assert run(text) == (None, ["x : P"])
        oracle_confirms(text)

    def test_negative_cut(self):
        text = "command [y : N] < x | y >;"
        assert run(text) == (None, ["x : N"])
        oracle_confirms(text)

    def test_unit_against_atom(self):
        with pytest.raises(CheckError) as err:
            run("command [k : P] < () | k >;")
        assert err.value.code == "mismatch"
        el = elaborate(queries("command [k : P] < () | k >;")[0], LINEAR, "pol")
        assert derive_all(el).is_empty()

    def test_direct_entry_point(self):
        el = elaborate(queries("command [k : P] < x | k >;")[0], LINEAR, "pol")
        assert check_command((TEntry("k", POS, Pp),), el.root, LINEAR) == (TEntry("x", POS, Pp),)
        assert LChecker(LINEAR).check_command((TEntry("k", POS, Pp),), el.root) == (TEntry("x", POS, Pp),)


class TestPresetGating:
    @pytest.mark.parametrize("preset", ["linear", "cartesian"])
    def test_lnl_forms_need_an_lnl_preset(self, preset):
        for text in ("copattern [] Up(a : P);", "pattern [] Down(a : N);"):
            with pytest.raises(CheckError) as err:
                run(text, "lnl", preset)
            assert err.value.code == "preset-violation"

    def test_down_needs_full_lnl(self):
        assert run("pattern [] Down(a : N);", "lnl", "lnl-full") == ("Down N", ["a : N"])
        with pytest.raises(CheckError):
            run("pattern [] Down(a : N);", "lnl", "lnl-bang")

    @pytest.mark.parametrize("preset", sorted(PRESETS))
    def test_negative_input_duplication(self, preset):
        text = "command [f : N] < pi1 x | comatch { < a | f > => pi1 a; < b | f > => pi2 b } >;"
        if PRESETS[preset].gamma_neg:
            assert run(text, "lnl", preset) == (None, ["x : N"])
        else:
            with pytest.raises(ScopeError):
                run(text, "lnl", preset)


class TestDuality:
    def test_type_table(self):
        assert dualize(Tensor(Pp, Qp)) == Par(Atom("P", NEG), Atom("Q", NEG))

    def test_match_pair_becomes_comatch_par(self):
        t = parse_term("match { (x, y) => < x | k > }")
        assert dualize(t) == parse_term("comatch { < x | k > => [x, y] }")

    def test_atom_declaration(self):
        assert dualize(AtomDecl("P", POS)).polarity is NEG

    def test_lambda_has_no_dual(self):
        with pytest.raises(ValueError):
            dualize(queries("lambda-synth [x : P] x;")[0])

    @given(st.integers(0, 10_000), st.sampled_from(["command", "expr", "pattern", "copattern", "coexpr"]))
    def test_involution(self, seed, cls):
        for q in generate_queries(seed, 8, cls, LNL_FULL, "lnl", count=10):
            assert dualize(dualize(q)) == q

    @given(st.integers(0, 10_000), st.sampled_from(["command", "expr", "pattern", "copattern", "coexpr"]))
    def test_verdicts_transport(self, seed, cls):
        for q in generate_queries(seed, 8, cls, LINEAR, "pol", count=10):
            assert _transports(q, LINEAR)

    def test_dropped_binder_breaks_transport_under_cartesian(self):
        # down-intro accepts N below Top-, but its dual would need Top+ below the dual of N
        q = queries("expr [k : I] down (mu- x. < () | k >) : down N;")[0]
        assert not _transports(q, CARTESIAN)


def _verdict(q, cfg):
    try:
        return check_elaborated(elaborate(q, cfg, "lnl"))
    except PolcheckError:
        return None


def _transports(q, cfg):
    v, d = _verdict(q, cfg), _verdict(dualize(q), cfg.dual())
    if v is None or d is None:
        return v is None and d is None
    ty, ctx = v
    return d == (None if ty is None else dualize(ty), dual_ctx(ctx))


def _corpus_queries(name, calculus):
    return [d for d in parse_program((CORPUS / name).read_text(), calculus) if not isinstance(d, AtomDecl)]


class TestInstrumentation:
    @pytest.mark.parametrize("name,calculus", [("positive.pl0", "pos"), ("negative.pl0", "neg")])
    def test_fragments_need_no_real_subtyping(self, name, calculus):
        with recording() as stats:
            for q in _corpus_queries(name, calculus):
                check_query(q, calculus)
        assert stats["subtype_nontrivial"] == 0

    @given(st.integers(0, 10_000), st.sampled_from(["command", "pattern", "copattern"]))
    def test_annotations_read_only_by_annotated_rules(self, seed, cls):
        with recording() as stats:
            for q in generate_queries(seed, 8, cls, LNL_FULL, "lnl", count=10):
                _verdict(q, LNL_FULL)
        kinds = {k.split(":", 1)[1] for k in stats if k.startswith("annotation:")}
        assert kinds <= {"match-down", "comatch-up", "Up", "Down"}

    @given(st.integers(0, 10_000), st.sampled_from(["command", "expr", "coexpr"]))
    def test_sigma_fidelity(self, seed, cls):
        for q in generate_queries(seed, 8, cls, CARTESIAN, "pol", count=10):
            el = elaborate(q, CARTESIAN, "pol")
            try:
                _, ctx = check_elaborated(el)
            except PolcheckError:
                continue
            assert [(e.name, e.pol) for e in ctx] == [(e.name, e.pol) for e in el.sigma]
