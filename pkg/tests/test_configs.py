import pytest

from twodist import catalog
from twodist.coloring import canonicalize, letters_from_mask, mask_from_letters
from twodist.configs import (
    COLORABLE_SHAPES,
    ConfigPattern,
    PatternError,
    all_tails,
    build_fragment,
    check_122,
    check_lemma33,
    check_reducible,
    check_restriction_property,
    dedupe_expansions,
    expand_pattern,
    fragment_conflicts,
    load_catalog,
    parse_pattern,
    verify_fragment,
    verify_fragment_exhaustive,
    verify_layer,
    verify_layer_exhaustive,
)


def sizes_by_label(frag):
    return {
        frag.labels[v]: s for v, s in zip(frag.interior, frag.min_sizes)
    }


class TestPatterns:
    def test_dsl_round_trip(self):
        for dsl in (
            "single 3 3 3",
            "path 6",
            "pair 4+ 3+ 0 - 0 2+ 4+",
            "triple 5+ 5+ 0 - 0 2+ 0 - 0 4+ 5+",
        ):
            assert parse_pattern(dsl).dsl() == dsl

    def test_shared_coordinates_must_agree(self):
        with pytest.raises(PatternError):
            parse_pattern("pair 4 3 0 - 1 2 4")
        with pytest.raises(PatternError):
            parse_pattern("pair 4 3 0+ - 0 2 4")

    def test_expansion_counts(self):
        # bounded coordinates range to the chain cap of 5
        pair = parse_pattern("pair 4+ 3+ 0 - 0 2+ 4+")
        assert len(expand_pattern(pair)) == 2 * 3 * 4 * 2 == 48
        assert len(dedupe_expansions(expand_pattern(pair))) == 25
        assert expand_pattern(parse_pattern("single 3 3 3")) == [
            parse_pattern("single 3 3 3")
        ]
        triple = parse_pattern("triple 5 5 0 - 0 2 0 - 0 4 5")
        assert expand_pattern(triple) == [triple]

    def test_expansion_caps_at_five(self):
        single = parse_pattern("single 1+ 4+ 5+")
        exps = expand_pattern(single)
        assert len(exps) == 5 * 2 * 1
        assert all(
            b.length <= 5 for e in exps for grp in e.outer for b in grp
        )


class TestFragments:
    def test_pair_430_024(self):
        frag = build_fragment(parse_pattern("pair 4 3 0 - 0 2 4"))
        assert len(frag.interior) == 11
        sizes = sizes_by_label(frag)
        # outermost kept interior of the length-4 chain sees two exteriors
        assert sizes["u.0.3"] == 2
        assert sizes["u.0.2"] == 3
        assert sizes["u.0.1"] == 4
        assert sizes["u"] == 4
        assert sizes["v"] == 3

    def test_path_6(self):
        frag = build_fragment(parse_pattern("path 6"))
        assert frag.min_sizes == (1, 3, 4, 4, 3, 1)

    def test_single_145(self):
        frag = build_fragment(parse_pattern("single 1 4 5"))
        sizes = sizes_by_label(frag)
        assert sizes["u"] == 2  # the length-1 chain leaves two exteriors in sight
        assert all(s >= 1 for s in frag.min_sizes)

    def test_fragment_is_tree(self):
        for dsl in ("single 2 3 4", "pair 3 3 2 - 2 3 3", "triple 4 2 0 - 0 3 1 - 1 3 4"):
            frag = build_fragment(parse_pattern(dsl))
            g = frag.graph
            from twodist.graphs import girth, is_connected

            assert is_connected(g)
            assert girth(g) == float("inf")
            assert g.m == g.n - 1

    def test_deep_interiors_keep_full_lists(self):
        from twodist.graphs import bfs_distances

        frag = build_fragment(parse_pattern("pair 5 5 0 - 0 5 5"))
        interior = set(frag.interior)
        for v, s in zip(frag.interior, frag.min_sizes):
            dist = bfs_distances(frag.graph, v, cutoff=2)
            near_ext = [
                u for u in range(frag.graph.n) if u != v and u not in interior and dist[u] <= 2
            ]
            assert s == 4 - len(near_ext)
            assert 1 <= s <= 4
            if not near_ext:
                assert s == 4

    def test_concrete_required(self):
        with pytest.raises(PatternError):
            build_fragment(parse_pattern("pair 4+ 3+ 0 - 0 2+ 4+"))


class TestEngine:
    def test_covering_matches_exhaustive_phi(self):
        for dsl in ("path 6", "single 1 4 5", "single 2 3 4", "pair 3 3 0 - 0 4 5"):
            frag = build_fragment(parse_pattern(dsl))
            n1, bad1, status = verify_fragment(frag)
            n2, bad2 = verify_fragment_exhaustive(frag)
            assert status == "done" and bad1 is None and bad2 is None
            assert n1 == n2

    def test_layer_covering_matches_exhaustive(self):
        frag = build_fragment(parse_pattern("single 2 3 4"))
        adj = fragment_conflicts(frag)
        n1, bad1, status = verify_layer(adj, frag.min_sizes)
        n2, bad2 = verify_layer_exhaustive(adj, frag.min_sizes)
        assert status == "done" and bad1 is None and bad2 is None and n1 == n2

    def test_forced_triangle_counterexample(self):
        # three mutually conflicting vertices at sizes (1,2,2): the layer
        # model finds the forced two-color lists
        adj = [(1, 2), (0, 2), (0, 1)]
        layer, bad, status = verify_layer(adj, (1, 2, 2))
        assert layer == 4 * 6 * 6
        assert status == "counterexample"
        canon = canonicalize(bad)
        assert [letters_from_mask(m) for m in canon] == ["a", "ab", "ab"]

    def test_check_reducible_known_pair(self):
        v = check_reducible(parse_pattern("pair 4+ 3+ 0 - 0 2+ 4+"))
        assert v.is_reducible
        assert v.expansions == 25
        assert v.assignments > 0 and v.solver_calls > 0

    def test_check_reducible_triple_exact(self):
        v = check_reducible(parse_pattern("triple 5 5 0 - 0 2 0 - 0 4 5"))
        assert v.is_reducible and v.expansions == 1

    def test_budget_abort(self):
        v = check_reducible(parse_pattern("pair 4+ 3+ 0 - 0 2+ 4+"), budget=50)
        assert v.status == "aborted"

    def test_reversal_and_branch_swap_invariance(self):
        a = check_reducible(parse_pattern("pair 4+ 3+ 0 - 0 2+ 4+"))
        b = check_reducible(parse_pattern("pair 3+ 4+ 0 - 0 4+ 2+"))
        c = check_reducible(parse_pattern("pair 4+ 2+ 0 - 0 3+ 4+"))  # reversed
        assert a.status == b.status == c.status == "reducible"
        assert a.assignments == b.assignments == c.assignments


class TestCatalog:
    def test_counts_by_group(self):
        cat = load_catalog()
        groups = {}
        for e in cat:
            groups[e.group] = groups.get(e.group, 0) + 1
        assert groups == {"inherited": 6, "pair": 7, "triple": 19}
        assert len({e.claim for e in cat}) == 32

    def test_patterns_round_trip_and_outer_bounds(self):
        for e in load_catalog():
            p = e.pattern
            assert parse_pattern(p.dsl()) == p
            if p.kind in ("pair", "triple"):
                assert p.shared  # shared coordinates are exact by construction
                assert all(b.at_least for grp in p.outer for b in grp)


class TestHelperLemmas:
    def test_122_characterization(self):
        assert check_122()

    def test_122_branches(self):
        from twodist.coloring import solve

        g = catalog.path(3)
        ab = mask_from_letters("ab")
        assert solve(g, [mask_from_letters("a"), ab, ab]).is_unsat
        assert solve(g, [mask_from_letters("c"), ab, ab]).is_sat

    @pytest.mark.parametrize("shape_id", sorted(COLORABLE_SHAPES))
    def test_colorable_shapes(self, shape_id):
        assert check_lemma33(shape_id)

    def test_unknown_shape_id(self):
        with pytest.raises(PatternError):
            check_lemma33("z")

    def test_shape_tables_match_described_sizes(self):
        # spot checks of the encoded shapes
        a = COLORABLE_SHAPES["a"]
        assert a.floors == (2, 2, 3, 2) and not a.pendants
        d = COLORABLE_SHAPES["d"]
        assert d.floors == (2, 3, 4, 3, 2)
        assert d.pendants == ((2, (2,)),)
        assert set(d.inclusions) == {("u1", "u2"), ("u5", "u4")}
        l = COLORABLE_SHAPES["l"]
        assert l.floors == (2, 2, 4, 4, 3, 4, 3)
        assert l.inclusions == (("u'5", "u5"),)


class TestRestriction:
    def test_single_vertex_tail(self):
        from twodist.graphs import Graph

        tail = Graph.from_edges(1, [])
        assert check_restriction_property(tail) is True

    def test_p3_tail(self):
        from twodist.graphs import Graph

        tail = Graph.from_edges(3, [(0, 1), (1, 2)])
        assert check_restriction_property(tail) is True

    def test_weakened_second_size_fails(self):
        from twodist.graphs import Graph

        tail = Graph.from_edges(1, [])
        assert check_restriction_property(tail, u2_size=2) is False

    def test_not_applicable_when_list_exceeds_palette(self):
        from twodist.graphs import Graph

        star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
        assert check_restriction_property(star) is None

    def test_all_tails_enumeration(self):
        tails = all_tails(4)
        assert len(tails) == 16
        assert sorted(t.n for t in tails) == [1, 2, 3, 3, 3] + [4] * 11
