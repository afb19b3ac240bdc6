import pytest
from hypothesis import given, strategies as st

from polcheck.errors import IllFormedQuery, MergeConflict
from polcheck.kernel import (
    BOT, CARTESIAN, I, LINEAR, LNL_BANG, LNL_FULL, NEG, ONE, PLAIN, POS, PRESETS, TOP, TOP_NEG, TOP_POS,
    UNIT1, Arrow, Atom, DownShift, Entry, Par, Prod, Sum, TEntry, Tensor, UUp, With, contains_top, dual_type,
    erase, extend_typed, illegal_cover_entry, illegal_thinning_entry, join, meet, merge_scoped, merge_typed,
    polarity_of, recording, restrict, show_type, split, subtype, thinning_between,
)
from polcheck.oracle.universe import TypeUniverse, enumerate_types

P, Q = Atom("P", PLAIN), Atom("Q", PLAIN)
Pp, Qp = Atom("P", POS), Atom("Q", POS)
N, M = Atom("N", NEG), Atom("M", NEG)

LAMBDA_TWO_ATOMS = TypeUniverse(depth=2, ops=("arrow", "prod", "unit1"))
SMALL = list(enumerate_types(LAMBDA_TWO_ATOMS.with_depth(1), PLAIN, with_top=True))


def lambda_types(max_leaves=6):
    leaf = st.sampled_from([P, Q, TOP, UNIT1])
    return st.recursive(
        leaf,
        lambda inner: st.one_of(
            st.builds(Arrow, inner, inner), st.builds(Prod, inner, inner), st.builds(Sum, inner, inner)
        ),
        max_leaves=max_leaves,
    )


def positive_types():
    return st.recursive(
        st.sampled_from([Pp, Qp, I]),
        lambda inner: st.one_of(st.builds(Tensor, inner, inner), st.builds(lambda a: DownShift(Par(dual_type(a), BOT)), inner)),
        max_leaves=5,
    )


class TestPolarity:
    def test_tensor_is_positive(self):
        assert polarity_of(Tensor(Pp, Qp)) is POS

    def test_with_is_negative(self):
        assert polarity_of(With(N, M)) is NEG

    def test_top_is_unpolarised(self):
        assert polarity_of(TOP) is PLAIN

    def test_per_polarity_tops(self):
        assert polarity_of(TOP_POS) is POS and polarity_of(TOP_NEG) is NEG


class TestSubtype:
    def test_reflexive_on_atom(self):
        assert subtype(P, P)

    def test_top_is_maximal(self):
        assert subtype(P, TOP)
        assert not subtype(TOP, P)

    def test_function_domain_is_contravariant(self):
        assert subtype(Arrow(TOP, P), Arrow(P, P))
        assert not subtype(Arrow(P, P), Arrow(TOP, P))

    def test_distinct_atoms_unrelated(self):
        assert not subtype(P, Q)

    def test_mixed_families_are_ill_formed(self):
        with pytest.raises(IllFormedQuery):
            subtype(P, Pp)

    def test_across_polarities_is_ill_formed(self):
        with pytest.raises(IllFormedQuery):
            subtype(Pp, N)

    def test_shift_argument_is_covariant(self):
        assert subtype(DownShift(N), DownShift(TOP_NEG))

    @given(lambda_types())
    def test_reflexive(self, a):
        assert subtype(a, a)

    @given(lambda_types(), lambda_types())
    def test_antisymmetric(self, a, b):
        if subtype(a, b) and subtype(b, a):
            assert a == b

    @given(lambda_types(4), lambda_types(4), lambda_types(4))
    def test_transitive(self, a, b, c):
        if subtype(a, b) and subtype(b, c):
            assert subtype(a, c)

    def test_partial_order_exhaustively_on_depth_one(self):
        for a in SMALL:
            assert subtype(a, a)
            for b in SMALL:
                ab = subtype(a, b)
                if ab and subtype(b, a):
                    assert a == b
                if ab:
                    for c in SMALL:
                        if subtype(b, c):
                            assert subtype(a, c)


def _brute_glb(a, b, universe):
    lower = [t for t in universe if subtype(t, a) and subtype(t, b)]
    tops = [t for t in lower if all(subtype(u, t) for u in lower)]
    return tops[0] if tops else None


def _brute_lub(a, b, universe):
    upper = [t for t in universe if subtype(a, t) and subtype(b, t)]
    least = [t for t in upper if all(subtype(t, u) for u in upper)]
    return least[0] if least else None


ARROWS_DEPTH_TWO = [t for t in enumerate_types(TypeUniverse(depth=2, ops=("arrow",)), PLAIN, with_top=True)]


class TestMeetJoin:
    def test_meet_of_equal_atoms(self):
        assert meet(P, P) == P

    def test_meet_with_top(self):
        assert meet(TOP, Arrow(P, Q)) == Arrow(P, Q)
        assert meet(Arrow(P, Q), TOP) == Arrow(P, Q)

    def test_meet_of_distinct_atoms_is_missing(self):
        assert meet(P, Q) is None

    def test_meet_joins_function_domains(self):
        expected = _brute_glb(Arrow(TOP, P), Arrow(P, P), ARROWS_DEPTH_TWO)
        assert expected == Arrow(TOP, P)
        assert meet(Arrow(TOP, P), Arrow(P, P)) == expected

    def test_join_examples(self):
        assert join(P, TOP) == TOP
        assert join(P, P) == P
        expected = _brute_lub(Arrow(TOP, P), Arrow(P, P), ARROWS_DEPTH_TWO)
        assert expected == Arrow(P, P)
        assert join(Arrow(TOP, P), Arrow(P, P)) == expected

    def test_meet_is_the_greatest_lower_bound_on_depth_one(self):
        for a in SMALL:
            for b in SMALL:
                assert meet(a, b) == _brute_glb(a, b, SMALL)

    @given(lambda_types(), lambda_types())
    def test_meet_is_a_lower_bound(self, a, b):
        r = meet(a, b)
        if r is not None:
            assert subtype(r, a) and subtype(r, b)

    @given(lambda_types(), lambda_types())
    def test_join_is_an_upper_bound(self, a, b):
        r = join(a, b)
        assert subtype(a, r) and subtype(b, r)

    def test_recording_counts_top_meets(self):
        with recording() as stats:
            meet(TOP, P)
            meet(P, P)
            meet(Arrow(TOP, P), Arrow(TOP, P))
        assert stats["meet"] == 3 and stats["meet_top_arg"] == 1 and stats["meet_top"] == 2


class TestCovers:
    def test_split_left_right(self):
        assert split("LR", ["x", "y"]) == (("x",), ("y",))

    def test_split_both(self):
        assert split("B", ["x"]) == (("x",), ("x",))

    def test_split_empty(self):
        assert split("", []) == ((), ())

    def test_split_length_mismatch(self):
        with pytest.raises(IllFormedQuery):
            split("L", [])

    @given(st.lists(st.sampled_from("LRB"), max_size=8))
    def test_split_counts(self, steps):
        cover = "".join(steps)
        ctx = [Entry(f"v{i}", POS) for i in range(len(cover))]
        left, right = split(cover, ctx)
        assert len(left) == cover.count("L") + cover.count("B")
        assert len(right) == cover.count("R") + cover.count("B")
        assert merge_scoped(cover, left, right) == tuple(ctx)

    def test_merge_typed_left(self):
        assert merge_typed("L", [TEntry("x", PLAIN, P)], []) == (TEntry("x", PLAIN, P),)

    def test_merge_typed_both_equal(self):
        x = TEntry("x", PLAIN, P)
        assert merge_typed("B", [x], [x]) == (x,)

    def test_merge_typed_both_conflict(self):
        with pytest.raises(MergeConflict):
            merge_typed("B", [TEntry("x", PLAIN, P)], [TEntry("x", PLAIN, Q)])

    def test_merge_typed_both_takes_meet(self):
        merged = merge_typed("B", [TEntry("x", PLAIN, TOP)], [TEntry("x", PLAIN, P)])
        assert merged == (TEntry("x", PLAIN, P),)

    @given(st.lists(st.sampled_from("LRB"), max_size=8))
    def test_merge_after_split_is_identity(self, steps):
        cover = "".join(steps)
        ctx = tuple(TEntry(f"v{i}", PLAIN, P) for i in range(len(cover)))
        assert merge_typed(cover, *split(cover, ctx)) == ctx


class TestThinnings:
    def test_restrict(self):
        assert restrict("KD", ["x", "y"]) == ("x",)
        assert restrict("K", ["x"]) == ("x",)
        assert restrict("", []) == ()

    def test_extend_typed_inserts_top(self):
        out = extend_typed("KD", [TEntry("x", PLAIN, P)], [Entry("x", PLAIN), Entry("y", PLAIN)])
        assert out == (TEntry("x", PLAIN, P), TEntry("y", PLAIN, TOP))

    def test_extend_typed_identity(self):
        assert extend_typed("K", [TEntry("x", PLAIN, P)], [Entry("x", PLAIN)]) == (TEntry("x", PLAIN, P),)

    def test_extend_typed_negative_top(self):
        assert extend_typed("D", [], [Entry("z", NEG)]) == (TEntry("z", NEG, TOP_NEG),)

    def test_extend_typed_arity_mismatch(self):
        with pytest.raises(IllFormedQuery):
            extend_typed("K", [], [Entry("x", PLAIN)])

    def test_thinning_between(self):
        small = [Entry("y", POS)]
        big = [Entry("x", POS), Entry("y", POS)]
        assert thinning_between(small, big) == "DK"

    def test_erase(self):
        assert erase([TEntry("x", POS, Pp)]) == (Entry("x", POS),)


class TestStructConfig:
    def test_presets(self):
        assert PRESETS == {"linear": LINEAR, "cartesian": CARTESIAN, "lnl-bang": LNL_BANG, "lnl-full": LNL_FULL}
        flags = lambda c: (c.gamma_pos, c.delta_pos, c.gamma_neg, c.delta_neg)  # noqa: E731
        assert flags(LINEAR) == (False, False, False, False)
        assert flags(CARTESIAN) == (True, True, True, True)
        assert flags(LNL_BANG) == (False, False, True, False)
        assert flags(LNL_FULL) == (False, True, True, False)

    def test_linear_rejects_both_and_drop(self):
        ctx = [Entry("x", POS)]
        assert illegal_cover_entry("B", ctx, LINEAR, "sigma") == ctx[0]
        assert illegal_thinning_entry("D", ctx, LINEAR, "sigma") == ctx[0]
        assert illegal_cover_entry("L", ctx, LINEAR, "sigma") is None
        assert illegal_cover_entry("B", ctx, CARTESIAN, "sigma") is None

    def test_dual_config_swaps_flags(self):
        assert LNL_FULL.dual().dual() == LNL_FULL


class TestTypes:
    def test_show_type(self):
        assert show_type(Arrow(P, Arrow(TOP, P))) == "P -> (Top -> P)"
        assert show_type(DownShift(UUp(Pp))) == "down (Up P)"

    def test_contains_top(self):
        assert contains_top(Arrow(TOP, P)) and not contains_top(Arrow(P, P))

    @given(positive_types())
    def test_dual_is_an_involution(self, t):
        assert dual_type(dual_type(t)) == t
        assert polarity_of(dual_type(t)) is NEG

    def test_duals_of_units(self):
        assert dual_type(I) == BOT and dual_type(ONE).op == "zero"
