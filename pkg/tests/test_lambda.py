import pytest
from hypothesis import given, strategies as st

from polcheck.driver import check_query
from polcheck.errors import CheckError, MergeConflict, PolcheckError, ScopeError
from polcheck.kernel import CARTESIAN, LINEAR, PLAIN, TOP, Arrow, Atom, Con, LTensor, Lolli, TEntry, recording
from polcheck.lam import check_cocontextual, check_standard, run_lambda, synth_cocontextual, synth_standard
from polcheck.oracle import derive_all, generate_queries
from polcheck.scope import elaborate
from polcheck.surface import CtxEntry, Query, Term, iter_terms

from conftest import queries, run

P, Q = Atom("P", PLAIN), Atom("Q", PLAIN)


def elab(text, calculus, cfg):
    return elaborate(queries(text, calculus)[-1], cfg, calculus)


def oracle_agrees(text, calculus, preset=None):
    """The checker's result is derivable, and is the only judgement the oracle finds."""
    q = queries(text, calculus)[-1]
    el, (ty, ctx) = check_query(q, calculus, preset)
    js = derive_all(el)
    assert js.contains(ty, ctx)
    members = list(js.members())
    assert members == [(ty, ctx)], members


class TestStandard:
    def test_identity(self):
        assert run("lambda-check [] \\x. x : P -> P;", "stlc") == (None, None)

    def test_k_combinator(self):
        text = "lambda-check [] \\x. \\y. x : P -> (Q -> P);"
        assert run(text, "stlc") == (None, None)
        el = elab(text, "stlc", CARTESIAN)
        assert not derive_all(el).is_empty()

    def test_lambda_at_atom(self):
        with pytest.raises(CheckError) as err:
            run("lambda-check [] \\x. x : P;", "stlc")
        assert err.value.code == "not-a-function"

    def test_var(self):
        assert run("lambda-synth [x : P] x;", "stlc") == ("P", None)

    def test_application(self):
        text = "lambda-synth [f : P -> Q, x : P] f x;"
        assert run(text, "stlc") == ("Q", None)
        oracle_agrees(text, "stlc")

    def test_second_projection(self):
        assert run("lambda-synth [p : P & Q] pi2 p;", "stlc") == ("Q", None)

    def test_projection_of_non_product(self):
        with pytest.raises(CheckError) as err:
            run("lambda-synth [p : P] pi1 p;", "stlc")
        assert err.value.code == "not-a-product"

    def test_case_and_sums(self):
        text = "lambda-check [s : P + Q] case s of { inl a => inr a; inr b => inl b } : Q + P;"
        assert run(text, "stlc") == (None, None)

    def test_absurd(self):
        assert run("lambda-check [v : 0] absurd v : P;", "stlc") == (None, None)

    def test_direct_entry_points(self):
        el = elab("lambda-check [x : P] x : P;", "stlc", CARTESIAN)
        check_standard([TEntry("x", PLAIN, P)], P, el.root)
        el = elab("lambda-synth [x : P] x;", "stlc", CARTESIAN)
        assert synth_standard({"x": P}, el.root) == P


class TestCocontextual:
    def test_var_synthesises_singleton_context(self):
        el = elab("lambda-check [x] x : P;", "lin", LINEAR)
        assert check_cocontextual(el.sigma, P, el.root, LINEAR) == (TEntry("x", PLAIN, P),)

    def test_application(self):
        text = "lambda-check [f, x] f (x : P) : Q;"
        assert run(text, "lin", "linear") == (None, ["f : P -o Q", "x : P"])
        oracle_agrees(text, "lin", "linear")

    def test_merge_conflict(self):
        with pytest.raises(MergeConflict):
            run("lambda-synth [a] ((a : P), (a : Q));", "cdb")

    def test_identity(self):
        text = "lambda-synth [] \\x. (x : P);"
        assert run(text, "lin", "linear") == ("P -o P", [])
        oracle_agrees(text, "lin", "linear")

    def test_drop_gives_top_domain(self):
        assert run("lambda-synth [] \\x. \\y. (x : P);", "cdb") == ("P -> (Top -> P)", [])

    def test_tensor(self):
        text = "lambda-synth [a, b] ((a : P), (b : Q));"
        assert run(text, "lin", "linear") == ("P * Q", ["a : P", "b : Q"])
        oracle_agrees(text, "lin", "linear")

    def test_unused_root_entry_gets_top(self):
        assert run("lambda-synth [a, b] (a : P);", "cdb") == ("P", ["a : P", "b : Top"])

    def test_let_forms(self):
        assert run("lambda-synth [p] let (x, y) = p in ((y : Q), (x : P));", "lin", "linear") == (
            "Q * P", ["p : P * Q"])
        assert run("lambda-synth [u, a] let () = u in (a : P);", "lin", "linear") == ("P", ["u : I", "a : P"])

    def test_synth_entry_point(self):
        el = elab("lambda-synth [] \\x. (x : P);", "lin", LINEAR)
        assert synth_cocontextual((), el.root, LINEAR) == (Lolli(P, P), ())


def _generated(seed, calculus, cfg, count=15):
    return generate_queries(seed, 8, "lambda", cfg, calculus, count=count)


class TestNestedTopMeets:
    def test_copied_scrutinee_meets_a_type_mentioning_top(self):
        # the let discards both components, so the scrutinee's two uses disagree below the root
        text = "lambda-synth [a] let (x, y) = a in (a : P * P);"
        q = queries(text, "cdb")[0]
        with recording() as stats:
            el, (ty, ctx) = check_query(q, "cdb", "cartesian")
        assert stats["meet_top"] == 1 and stats["meet_top_arg"] == 0
        assert run(text, "cdb", "cartesian") == ("P * P", ["a : P * P"])
        assert derive_all(el).contains(ty, ctx)


class TestProperties:
    @given(st.integers(0, 10_000), st.sampled_from([("lin", LINEAR), ("cdb", CARTESIAN)]))
    def test_context_fidelity(self, seed, setup):
        calculus, cfg = setup
        for q in _generated(seed, calculus, cfg):
            el = elaborate(q, cfg, calculus)
            try:
                _, ctx = run_lambda(el)
            except PolcheckError:
                continue
            assert tuple((e.name, e.pol) for e in ctx) == tuple((e.name, e.pol) for e in el.sigma)
            assert [e.name for e in ctx] == [e.name for e in q.ctx]

    @given(st.integers(0, 10_000))
    def test_closed_terms_agree_with_standard_checker(self, seed):
        for q in _generated(seed, "cdb", CARTESIAN, count=30):
            if q.ctx or any(s.kind in ("letunit", "letpair") for s in iter_terms(q.term)):
                continue
            el = elaborate(q, CARTESIAN, "cdb")
            try:
                ty, _ = run_lambda(el)
            except PolcheckError:
                continue
            target = _to_standard(q.ty if ty is None else ty)
            std = Query("lambda-check", (), _standard_term(q.term), target, "stlc")
            try:
                el_std = elaborate(std, CARTESIAN, "stlc")
            except ScopeError:
                continue  # a redex head needs an annotation the cocontextual term never had
            run_lambda(el_std)


_CONNECTIVE_MAP = {"lolli": "arrow", "ltensor": "prod", "lunit": "unit1"}


def _to_standard(t):
    if isinstance(t, Atom):
        return t
    return Con(_CONNECTIVE_MAP.get(t.op, t.op), tuple(_to_standard(a) for a in t.args))


def _standard_term(t: Term) -> Term:
    return Term(t.kind, tuple(_standard_term(c) for c in t.children), t.names,
                None if t.ty is None else _to_standard(t.ty))
