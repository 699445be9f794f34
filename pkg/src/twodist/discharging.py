"""Exact charge bookkeeping and the local audit of the transfer rules.

Charges are integers counting quarter units, so all arithmetic is exact.  A
3-vertex is typed by the lengths (k,l,m) of its three incident chains of
2-vertices.  The transfer rules move charge between 3-vertices along a
shared chain, keyed by the chain length and the receiver's other two
coordinates; a giver participates only when its own coordinates sum to at
most 7.  Every 3-vertex additionally pays one unit to each 2-vertex on its
chains.

The audit enumerates every admissible center type together with all
type-assignments to its chain-sharing neighbors, prunes the combinations
that embed a certified-forbidden configuration, and reports the exact
minimum of the final charge per center.  Soundness of the pruning rests on
the configuration catalog having been certified reducible first; the audit
refuses to run against an uncertified database.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .configs import Branch, CatalogEntry, ConfigPattern, load_catalog

QUARTER = 1  # charges are ints in quarter units
UNIT = 4

MAX_COORD = 5  # chain lengths above 5 are excluded by the no-path-6 claim
GIVER_SUM_MAX = 7

VertexType = tuple[int, int, int]


class ChargeError(ValueError):
    pass


class UncertifiedError(RuntimeError):
    """Audit requested against a configuration database without certificates."""


def vertex_charge(degree: int) -> int:
    """Initial vertex charge 19/2*d - 21 in quarter units; degrees 2 and 3 only."""
    if degree not in (2, 3):
        raise ChargeError(f"vertex degree {degree} out of range (subcubic, min degree 2)")
    return 38 * degree - 84


def face_charge(face_degree: int) -> int:
    """Initial face charge d - 21 in quarter units."""
    if face_degree < 1:
        raise ChargeError("face degree must be positive")
    return 4 * (face_degree - 21)


def charge_str(quarters: int) -> str:
    """Exact rendering of a quarter-unit charge, e.g. 10 -> "5/2"."""
    sign = "-" if quarters < 0 else ""
    q = abs(quarters)
    if q % 4 == 0:
        return f"{sign}{q // 4}"
    if q % 2 == 0:
        return f"{sign}{q // 2}/2"
    return f"{sign}{q}/4"


def parse_charge(text: str) -> int:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        num_i, den_i = int(num), int(den)
        if den_i not in (1, 2, 4) or (4 * num_i) % den_i:
            raise ChargeError(f"charge {text!r} is not a quarter multiple")
        return 4 * num_i // den_i
    return 4 * int(text)


# ---------------------------------------------------------------------------
# Rule table
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RuleCase:
    rule: str  # "R0".."R2"
    case: str  # "i".."iv"
    m: int  # shared chain length
    others: tuple[int, int]  # receiver's other two coordinates, sorted
    amount: int  # quarter units

    @property
    def name(self) -> str:
        return f"{self.rule}({self.case})"


@dataclass(frozen=True)
class RuleTable:
    """Transfer cases plus the per-2-vertex unit of the unconditional rule.

    Within one shared length every receiver pattern appears once, so at most
    one case ever fires for a (length, receiver) query.
    """

    cases: tuple[RuleCase, ...]
    r3_unit: int = UNIT
    giver_sum_max: int = GIVER_SUM_MAX

    def __post_init__(self) -> None:
        seen = set()
        for c in self.cases:
            key = (c.m, c.others)
            if key in seen:
                raise ChargeError(f"overlapping receiver pattern {key}")
            seen.add(key)

    def amount_for(self, m: int, receiver_others: tuple[int, int]) -> int:
        for c in self.cases:
            if c.m == m and c.others == receiver_others:
                return c.amount
        return 0

    def case_names(self) -> list[str]:
        return sorted({c.name for c in self.cases}) + ["R3"]

    def mutate(self, name: str, delta_quarters: int) -> "RuleTable":
        """A copy with one rule amount shifted; `name` like "R0(i)" or "R3"."""
        if name == "R3":
            return RuleTable(self.cases, self.r3_unit + delta_quarters, self.giver_sum_max)
        if not any(c.name == name for c in self.cases):
            raise ChargeError(f"unknown rule case {name}")
        cases = tuple(
            RuleCase(c.rule, c.case, c.m, c.others, c.amount + delta_quarters)
            if c.name == name
            else c
            for c in self.cases
        )
        return RuleTable(cases, self.r3_unit, self.giver_sum_max)

    def serialize(self) -> str:
        lines = [
            "# transfer cases: receiver=m,n,p anchored on the shared length m;",
            "# a 3-vertex gives through these only when its coordinates sum to",
            f"# at most {self.giver_sum_max}.  R3 is the unconditional per-2-vertex unit.",
        ]
        for c in self.cases:
            lines.append(
                f"{c.rule} {c.case} receiver={c.m},{c.others[0]},{c.others[1]} "
                f"amount={charge_str(c.amount)}"
            )
        lines.append(f"R3 unit amount={charge_str(self.r3_unit)}")
        return "\n".join(lines) + "\n"


def parse_rules(text: str) -> RuleTable:
    cases = []
    r3 = UNIT
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 4 and not (toks[0] == "R3" and len(toks) == 3):
            raise ChargeError(f"bad rule line: {raw!r}")
        if toks[0] == "R3":
            r3 = parse_charge(toks[2].split("=", 1)[1])
            continue
        rule, case = toks[0], toks[1]
        recv = toks[2].split("=", 1)[1].split(",")
        amount = parse_charge(toks[3].split("=", 1)[1])
        m, a, b = (int(x) for x in recv)
        cases.append(RuleCase(rule, case, m, tuple(sorted((a, b))), amount))
    return RuleTable(tuple(cases), r3)


def default_rules() -> RuleTable:
    from importlib.resources import files

    return parse_rules(files("twodist.data").joinpath("rules.txt").read_text())


def _others(t: VertexType, shared: int) -> tuple[int, int]:
    """The two coordinates of `t` besides one occurrence of `shared`."""
    rest = list(t)
    rest.remove(shared)
    return (min(rest), max(rest))


def transfer_amount(m: int, giver: VertexType, receiver: VertexType, rules: RuleTable) -> int:
    """Charge the giver sends the receiver along a shared m-chain, in quarters.

    Zero when no case matches or when the giver's coordinates sum past the
    eligibility bound.  Both types must contain the shared length.
    """
    if m not in giver or m not in receiver:
        raise ChargeError(f"types {giver}/{receiver} do not share a {m}-chain")
    if sum(giver) > rules.giver_sum_max:
        return 0
    return rules.amount_for(m, _others(receiver, m))


# ---------------------------------------------------------------------------
# Forbidden-configuration database
# ---------------------------------------------------------------------------


def _coords_match(values: Sequence[int], pattern: Sequence[Branch]) -> bool:
    """Unordered match of coordinates against bounded pattern coordinates."""
    if len(values) != len(pattern):
        return False
    for perm in itertools.permutations(values):
        if all(
            (v >= b.length if b.at_least else v == b.length)
            for v, b in zip(perm, pattern)
        ):
            return True
    return False


class ForbiddenDB:
    """Pattern catalog with reducibility certificates.

    `certificates` maps claim ids to the verdict status; the audit only
    trusts a database whose every entry is certified "reducible".  Matching
    queries are memoized, since vertex types take few values.
    """

    def __init__(
        self,
        entries: Sequence[CatalogEntry],
        certificates: Mapping[str, str] | None = None,
    ):
        self.entries = tuple(entries)
        self.certificates = dict(certificates or {})
        self._singles = [e for e in self.entries if e.pattern.kind == "single"]
        self._pairs = [e for e in self.entries if e.pattern.kind == "pair"]
        self._triples = [e for e in self.entries if e.pattern.kind == "triple"]
        self._single_cache: dict[VertexType, str | None] = {}
        self._pair_cache: dict[tuple, str | None] = {}
        self._triple_cache: dict[tuple, str | None] = {}
        self._types_with: dict[int, list[VertexType]] = {}
        self._completion_cache: dict[tuple, bool] = {}

    @classmethod
    def standard(cls, certificates: Mapping[str, str] | None = None) -> "ForbiddenDB":
        return cls(load_catalog(), certificates)

    @property
    def certified(self) -> bool:
        return all(
            self.certificates.get(e.claim) == "reducible" for e in self.entries
        )

    def uncertified_claims(self) -> list[str]:
        return [
            e.claim for e in self.entries if self.certificates.get(e.claim) != "reducible"
        ]

    def single_blocked(self, t: VertexType) -> str | None:
        """Claim id of a single pattern matching `t`, if any."""
        key = tuple(sorted(t))
        try:
            return self._single_cache[key]
        except KeyError:
            pass
        claim = None
        for e in self._singles:
            if _coords_match(key, e.pattern.outer[0]):
                claim = e.claim
                break
        self._single_cache[key] = claim
        return claim

    def pair_blocked(self, a: VertexType, m: int, b: VertexType) -> str | None:
        """Claim id forbidding types a,b joined by an m-chain, if any."""
        ea, eb = _others(a, m), _others(b, m)
        key = (m, *sorted((ea, eb)))
        try:
            return self._pair_cache[key]
        except KeyError:
            pass
        claim = None
        for e in self._pairs:
            if e.pattern.shared[0] != m:
                continue
            pu, pv = e.pattern.outer
            if (_coords_match(ea, pu) and _coords_match(eb, pv)) or (
                _coords_match(eb, pu) and _coords_match(ea, pv)
            ):
                claim = e.claim
                break
        self._pair_cache[key] = claim
        return claim

    def triple_blocked(
        self, a: VertexType, m: int, b: VertexType, p: int, c: VertexType
    ) -> str | None:
        """Claim id forbidding the chain a -(m)- b -(p)- c, if any."""
        ea, ec = _others(a, m), _others(c, p)
        mid = list(b)
        mid.remove(m)
        mid.remove(p)
        eb = (mid[0],)
        key = (m, p, ea, eb, ec)
        try:
            return self._triple_cache[key]
        except KeyError:
            pass
        claim = None
        for e in self._triples:
            pu, (pn,), pw = e.pattern.outer
            if e.pattern.shared == (m, p):
                if (
                    _coords_match(ea, pu)
                    and _coords_match(eb, (pn,))
                    and _coords_match(ec, pw)
                ):
                    claim = e.claim
                    break
            if e.pattern.shared == (p, m):
                if (
                    _coords_match(ec, pu)
                    and _coords_match(eb, (pn,))
                    and _coords_match(ea, pw)
                ):
                    claim = e.claim
                    break
        self._triple_cache[key] = claim
        return claim

    def types_with(self, anchor: int) -> list[VertexType]:
        """Admissible neighbor types across a chain of length `anchor`."""
        try:
            return self._types_with[anchor]
        except KeyError:
            pass
        out = []
        for a in range(MAX_COORD + 1):
            for b in range(a, MAX_COORD + 1):
                if self.single_blocked((anchor, a, b)) is None:
                    out.append((anchor, a, b))
        self._types_with[anchor] = out
        return out


def all_types() -> list[VertexType]:
    """All 3-vertex types with coordinates 0..5, sorted ascending."""
    return [
        (a, b, c)
        for a in range(MAX_COORD + 1)
        for b in range(a, MAX_COORD + 1)
        for c in range(b, MAX_COORD + 1)
    ]


def admissible_types(db: ForbiddenDB) -> list[VertexType]:
    return [t for t in all_types() if db.single_blocked(t) is None]


def types_with(anchor: int, db: ForbiddenDB) -> list[VertexType]:
    return db.types_with(anchor)


# ---------------------------------------------------------------------------
# Feasibility and the final-charge audit
# ---------------------------------------------------------------------------


def is_feasible_context(
    center: VertexType,
    neighbors: Sequence[VertexType],
    db: ForbiddenDB,
    counts: dict[str, int] | None = None,
) -> bool:
    """Whether a center and its chain-sharing neighbor types can coexist.

    Each neighbor is given as (shared_length, other, other) aligned with the
    center's coordinates.  The context is infeasible when the center or a
    neighbor matches a forbidden single, a (center, neighbor) pair or a
    neighbor-center-neighbor chain matches a forbidden pair/triple, or some
    neighbor's remaining chains admit no far-endpoint type keeping every
    center-neighbor-endpoint chain unforbidden.
    """
    if len(neighbors) != 3:
        raise ChargeError("a 3-vertex context takes exactly three neighbors")

    def hit(claim: str | None) -> bool:
        if claim is None:
            return False
        if counts is not None:
            counts[claim] = counts.get(claim, 0) + 1
        return True

    if hit(db.single_blocked(center)):
        return False
    for m, nbr in zip(center, neighbors):
        if nbr[0] != m:
            raise ChargeError(f"neighbor {nbr} not anchored on chain length {m}")
        if hit(db.single_blocked(tuple(sorted(nbr)))):
            return False
        if hit(db.pair_blocked(center, m, nbr)):
            return False
    for (m1, n1), (m2, n2) in itertools.combinations(zip(center, neighbors), 2):
        if hit(db.triple_blocked(n1, m1, center, m2, n2)):
            return False
    for m, nbr in zip(center, neighbors):
        for b in _others(nbr, m):
            if not _completion_exists(center, m, nbr, b, db):
                if counts is not None:
                    counts["no-completion"] = counts.get("no-completion", 0) + 1
                return False
    return True


def _completion_exists(
    center: VertexType, m: int, nbr: VertexType, branch: int, db: ForbiddenDB
) -> bool:
    """Some admissible far endpoint across `branch` keeps the chain
    center -(m)- nbr -(branch)- endpoint unforbidden."""
    mid = list(nbr)
    mid.remove(m)
    mid.remove(branch)
    key = (m, _others(center, m), mid[0], branch)
    cache = db._completion_cache
    try:
        return cache[key]
    except KeyError:
        pass
    ok = False
    for x in db.types_with(branch):
        if db.triple_blocked(center, m, nbr, branch, x) is None:
            ok = True
            break
    cache[key] = ok
    return ok


def _neighbor_context_exists(
    center: VertexType, m: int, nbr: VertexType, db: ForbiddenDB
) -> bool:
    """Deeper pruning layer: the neighbor itself admits a fully feasible
    context in which the center sits across their shared chain."""
    b1, b2 = _others(nbr, m)
    center_anchored = (m,) + _others(center, m)
    for x1 in types_with(b1, db):
        for x2 in types_with(b2, db):
            if is_feasible_context((m, b1, b2), [center_anchored, x1, x2], db):
                return True
    return False


def mu_star(
    center: VertexType,
    neighbors: Sequence[VertexType],
    rules: RuleTable,
) -> int:
    """Final charge of the center in quarter units.

    Initial charge, minus one unit per 2-vertex on its chains, minus what it
    sends each neighbor, plus what each neighbor sends it.
    """
    total = vertex_charge(3)
    for m, nbr in zip(center, neighbors):
        total -= rules.r3_unit * m
        nbr_sorted = tuple(sorted(nbr))
        total -= transfer_amount(m, center, nbr_sorted, rules)
        total += transfer_amount(m, nbr_sorted, center, rules)
    return total


@dataclass(frozen=True)
class CenterAudit:
    center: VertexType
    minimum: int  # quarters
    witness: tuple[VertexType, ...]
    feasible_contexts: int


@dataclass(frozen=True)
class AuditReport:
    centers: tuple[CenterAudit, ...]
    prune_counts: dict[str, int]
    two_vertex_final: int  # quarters; must be exactly 0
    pruning_depth: int

    @property
    def negative(self) -> list[CenterAudit]:
        return [c for c in self.centers if c.minimum < 0]

    @property
    def ok(self) -> bool:
        return not self.negative and self.two_vertex_final == 0

    def minimum_for(self, center: VertexType) -> int:
        key = tuple(sorted(center))
        for c in self.centers:
            if c.center == key:
                return c.minimum
        raise KeyError(center)

    def to_json(self) -> dict:
        return {
            "two_vertex_final": charge_str(self.two_vertex_final),
            "pruning_depth": self.pruning_depth,
            "all_nonnegative": not self.negative,
            "ok": self.ok,
            "prune_counts": dict(sorted(self.prune_counts.items())),
            "centers": [
                {
                    "center": list(c.center),
                    "minimum": charge_str(c.minimum),
                    "witness_neighbors": [list(w) for w in c.witness],
                    "feasible_contexts": c.feasible_contexts,
                }
                for c in self.centers
            ],
        }


def audit_center(
    center: VertexType,
    rules: RuleTable,
    db: ForbiddenDB,
    deep: bool = False,
    counts: dict[str, int] | None = None,
) -> CenterAudit | None:
    """Exact minimum of the final charge over all feasible neighbor contexts.

    None when the center admits no feasible context at all.  With `deep`,
    contexts additionally require every neighbor to have a feasible context
    of its own (a strictly smaller feasible set, hence a sound retry when a
    minimum comes out negative).
    """
    candidates = [types_with(m, db) for m in center]
    best: int | None = None
    witness: tuple[VertexType, ...] = ()
    feasible = 0
    for ctx in itertools.product(*candidates):
        if not is_feasible_context(center, ctx, db, counts):
            continue
        if deep and not all(
            _neighbor_context_exists(center, m, nbr, db)
            for m, nbr in zip(center, ctx)
        ):
            continue
        feasible += 1
        value = mu_star(center, ctx, rules)
        if best is None or value < best:
            best = value
            witness = ctx
    if best is None:
        return None
    return CenterAudit(center, best, witness, feasible)


def audit_all(rules: RuleTable, db: ForbiddenDB) -> AuditReport:
    """Audit every admissible center type against the certified catalog.

    Refuses to run when the database lacks reducibility certificates.  Any
    center whose minimum comes out negative is retried once with the deeper
    neighbor-context pruning before being reported; a remaining negative is
    a first-class result, reported rather than raised.
    """
    if not db.certified:
        raise UncertifiedError(
            "configuration database lacks certificates for: "
            + ", ".join(db.uncertified_claims())
        )
    counts: dict[str, int] = {}
    results = []
    depth = 1
    for center in admissible_types(db):
        audit = audit_center(center, rules, db, deep=False, counts=counts)
        if audit is not None and audit.minimum < 0:
            retry = audit_center(center, rules, db, deep=True)
            depth = 2
            if retry is not None:
                audit = retry
        if audit is not None:
            results.append(audit)
    two_vertex = vertex_charge(2) + 2 * rules.r3_unit
    return AuditReport(tuple(results), counts, two_vertex, depth)
