import itertools

import pytest

from twodist.discharging import (
    ForbiddenDB,
    RuleTable,
    UncertifiedError,
    admissible_types,
    all_types,
    audit_all,
    audit_center,
    charge_str,
    default_rules,
    face_charge,
    is_feasible_context,
    mu_star,
    parse_charge,
    parse_rules,
    transfer_amount,
    vertex_charge,
    ChargeError,
)

TEN_ZERO_CENTERS = [
    (0, 5, 5),
    (0, 4, 5),
    (0, 3, 5),
    (0, 4, 4),
    (1, 3, 5),
    (1, 4, 4),
    (1, 3, 4),
    (2, 2, 5),
    (2, 2, 4),
    (2, 3, 3),
]


@pytest.fixture(scope="module")
def rules():
    return default_rules()


@pytest.fixture(scope="module")
def db():
    return ForbiddenDB.standard()


class TestCharges:
    def test_initial_vertex_charges(self):
        assert vertex_charge(3) == 30  # 15/2
        assert vertex_charge(2) == -8  # -2
        with pytest.raises(ChargeError):
            vertex_charge(1)
        with pytest.raises(ChargeError):
            vertex_charge(4)

    def test_face_charges(self):
        assert face_charge(21) == 0
        assert all(face_charge(d) >= 0 for d in range(21, 60))
        assert face_charge(20) < 0

    def test_charge_strings(self):
        assert charge_str(30) == "15/2"
        assert charge_str(-8) == "-2"
        assert charge_str(1) == "1/4"
        assert charge_str(3) == "3/4"
        assert charge_str(0) == "0"
        assert parse_charge("5/2") == 10
        assert parse_charge("-2") == -8
        with pytest.raises(ChargeError):
            parse_charge("1/3")


class TestRuleTable:
    def test_round_trip(self, rules):
        again = parse_rules(rules.serialize())
        assert again == rules

    def test_all_amounts_are_quarter_multiples(self, rules):
        for c in rules.cases:
            assert isinstance(c.amount, int)
        assert {charge_str(c.amount) for c in rules.cases} == {
            "5/2",
            "3/2",
            "1/2",
            "1/4",
            "3/4",
        }

    def test_receiver_patterns_disjoint_per_length(self, rules):
        seen = set()
        for c in rules.cases:
            key = (c.m, c.others)
            assert key not in seen
            seen.add(key)

    def test_mutation(self, rules):
        m = rules.mutate("R0(i)", -1)
        assert m.amount_for(0, (5, 5)) == 9  # 9/4
        assert rules.amount_for(0, (5, 5)) == 10
        r3 = rules.mutate("R3", 1)
        assert r3.r3_unit == 5
        with pytest.raises(ChargeError):
            rules.mutate("R9(x)", 1)


class TestTransfer:
    def test_named_cases(self, rules):
        assert transfer_amount(0, (3, 3, 0), (0, 5, 5), rules) == parse_charge("5/2")
        assert transfer_amount(0, (3, 3, 0), (0, 4, 5), rules) == parse_charge("3/2")
        assert transfer_amount(0, (3, 3, 0), (0, 3, 5), rules) == parse_charge("1/2")
        assert transfer_amount(0, (3, 3, 0), (0, 2, 5), rules) == parse_charge("1/4")
        assert transfer_amount(1, (1, 2, 3), (1, 3, 5), rules) == parse_charge("3/2")
        assert transfer_amount(2, (2, 2, 2), (2, 2, 5), rules) == parse_charge("3/4")
        assert transfer_amount(2, (2, 2, 2), (2, 2, 4), rules) == parse_charge("1/4")

    def test_no_matching_case_gives_zero(self, rules):
        assert transfer_amount(1, (1, 2, 3), (1, 2, 3), rules) == 0
        assert transfer_amount(3, (3, 2, 2), (3, 1, 1), rules) == 0

    def test_ineligible_giver_gives_zero(self, rules):
        assert transfer_amount(0, (5, 4, 0), (0, 5, 5), rules) == 0
        assert transfer_amount(2, (2, 2, 5), (2, 2, 5), rules) == 0

    def test_eligibility_scan(self, rules):
        # givers past the sum bound never send anything
        for giver in all_types():
            if sum(giver) <= 7:
                continue
            for m in set(giver):
                for recv in all_types():
                    if m in recv:
                        assert transfer_amount(m, giver, recv, rules) == 0

    def test_anchored_matching_unordered_others(self, rules):
        assert transfer_amount(0, (0, 0, 0), (0, 5, 4), rules) == transfer_amount(
            0, (0, 0, 0), (0, 4, 5), rules
        )

    def test_shared_length_must_be_present(self, rules):
        with pytest.raises(ChargeError):
            transfer_amount(1, (0, 2, 3), (1, 2, 3), rules)


class TestMatching:
    def test_singles(self, db):
        assert db.single_blocked((2, 3, 4)) == "no-single-234"
        assert db.single_blocked((4, 5, 1)) == "no-single-145"
        assert db.single_blocked((3, 4, 5)) is not None
        assert db.single_blocked((1, 2, 4)) is None
        assert db.single_blocked((0, 5, 5)) is None

    def test_pairs_both_orientations(self, db):
        # (5,5,0) with (0,3,5) embeds two forbidden pairs, one per reading
        # direction; either claim justifies the prune
        assert db.pair_blocked((5, 5, 0), 0, (0, 3, 5)) in (
            "no-pair-430-024",
            "no-pair-330-045",
        )
        assert db.pair_blocked((5, 5, 0), 0, (0, 2, 4)) == "no-pair-430-024"
        assert db.pair_blocked((0, 2, 4), 0, (5, 5, 0)) == "no-pair-430-024"
        assert db.pair_blocked((3, 0, 3), 0, (0, 2, 2)) is None

    def test_triples_with_middle_and_reversal(self, db):
        assert (
            db.triple_blocked((0, 5, 5), 0, (0, 2, 0), 0, (0, 4, 5))
            == "no-triple-550-020-045"
        )
        assert (
            db.triple_blocked((0, 4, 5), 0, (0, 2, 0), 0, (0, 5, 5))
            == "no-triple-550-020-045"
        )
        assert db.triple_blocked((0, 0, 0), 0, (0, 2, 0), 0, (0, 4, 5)) is None

    def test_admissible_type_count_matches_structure(self, db):
        # sorted coordinate triples in 0..5, minus the three bounded singles'
        # expansions
        assert len(all_types()) == 56
        admissible = admissible_types(db)
        assert len(admissible) == 39
        assert (5, 5, 5) not in admissible
        assert (0, 5, 5) in admissible


class TestFeasibility:
    def test_spec_contexts(self, db):
        assert not is_feasible_context((4, 3, 0), [(4, 0, 0), (3, 0, 0), (0, 2, 4)], db)
        assert not is_feasible_context((0, 2, 0), [(0, 5, 5), (2, 0, 0), (0, 4, 5)], db)
        assert is_feasible_context((3, 0, 3), [(3, 0, 0), (0, 2, 2), (3, 0, 0)], db)

    def test_neighbor_anchoring_enforced(self, db):
        with pytest.raises(ChargeError):
            is_feasible_context((1, 2, 3), [(0, 0, 0), (2, 0, 0), (3, 0, 0)], db)

    def test_prune_counting(self, db):
        counts: dict[str, int] = {}
        is_feasible_context((4, 3, 0), [(4, 0, 0), (3, 0, 0), (0, 2, 4)], db, counts)
        assert counts.get("no-pair-430-024") == 1


class TestMuStar:
    def test_worked_equalities(self, rules):
        # eligible givers have coordinate sums at most 7
        assert mu_star((5, 5, 0), [(5, 0, 0), (5, 0, 0), (0, 0, 0)], rules) == 0
        assert mu_star((4, 4, 0), [(4, 0, 0), (4, 0, 0), (0, 0, 0)], rules) == 0
        assert mu_star((5, 2, 2), [(5, 0, 0), (2, 0, 0), (2, 0, 0)], rules) == 0
        v = mu_star((3, 0, 3), [(3, 0, 0), (0, 0, 0), (3, 0, 0)], rules)
        assert v == parse_charge("3/2")  # no matching transfer at all

    def test_exactness_everything_is_integer_quarters(self, rules):
        ctx = [(0, 0, 0), (3, 0, 0), (5, 0, 0)]
        assert isinstance(mu_star((0, 3, 5), ctx, rules), int)


class TestAudit:
    def test_refuses_uncertified(self, rules):
        with pytest.raises(UncertifiedError):
            audit_all(rules, ForbiddenDB.standard({}))
        partial = {e.claim: "reducible" for e in ForbiddenDB.standard().entries}
        partial.pop("no-pair-430-024")
        with pytest.raises(UncertifiedError):
            audit_all(rules, ForbiddenDB.standard(partial))

    def test_full_audit(self, rules, certified_db):
        report = audit_all(rules, certified_db)
        assert report.ok
        assert report.two_vertex_final == 0
        assert report.pruning_depth == 1
        for center in TEN_ZERO_CENTERS:
            assert report.minimum_for(center) == 0, center
        assert report.minimum_for((0, 3, 4)) == parse_charge("1/2")
        assert report.minimum_for((0, 3, 3)) >= parse_charge("1")
        assert len(report.centers) == 39

    def test_audit_center_infeasible_center_is_none(self, rules, certified_db):
        # a center matching a bounded single has no feasible context
        assert audit_center((5, 5, 5), rules, certified_db) is None

    def test_mutation_drops_below_zero(self, rules, certified_db):
        mutated = rules.mutate("R0(i)", -1)  # 5/2 -> 9/4
        report = audit_all(mutated, certified_db)
        assert not report.ok
        assert any(c.center == (0, 5, 5) and c.minimum == -1 for c in report.negative)

    def test_report_json_shape(self, rules, certified_db):
        payload = audit_all(rules, certified_db).to_json()
        assert payload["two_vertex_final"] == "0"
        assert payload["all_nonnegative"] is True
        assert all("/" not in c["minimum"] or c["minimum"][-1] in "24" for c in payload["centers"])
