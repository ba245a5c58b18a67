"""Set-theoretic (clans) and relational (abstract points) embeddings."""
from __future__ import annotations

from dataclasses import dataclass, field

from .clans import (
    RegionSet,
    clan_decomposition,
    enumerate_abstract_points,
    enumerate_clans,
    enumerate_prime_ideals,
    find_clan,
    separating_prime_ideal,
)
from .structures import ConstructionError, FiniteJoinStructure, PreconditionError, is_cjs, is_dcjs


@dataclass
class Embedding:
    """Map from carrier elements to sets of representation points.

    ``relation`` is None for the set-theoretic target (contact = overlap) and a
    set of unordered point pairs for the relational one.
    """
    points: tuple[str, ...]
    mapping: dict[str, frozenset[str]]
    relation: frozenset[tuple[str, str]] | None = None
    point_sets: dict[str, RegionSet] = field(default_factory=dict)
    witnesses: dict[tuple[str, str], tuple[str, str]] = field(default_factory=dict)

    def related(self, p: str, q: str) -> bool:
        return (p, q) in self.relation or (q, p) in self.relation

    def target_contact(self, A: frozenset[str], B: frozenset[str]) -> bool:
        if self.relation is None:
            return bool(A & B)
        return any(self.related(p, q) for p in A for q in B)

    def to_dict(self, S: FiniteJoinStructure) -> dict:
        order = {p: i for i, p in enumerate(self.points)}
        out = {"points": list(self.points)}
        if self.relation is not None:
            out["relation"] = [list(pq) for pq in sorted(self.relation, key=lambda pq: (order[pq[0]], order[pq[1]]))]
        out["map"] = {a: sorted(self.mapping[a], key=order.__getitem__) for a in S.elements}
        return out


def _build(S: FiniteJoinStructure, prefix: str, regions: list[RegionSet]) -> tuple[tuple[str, ...], dict]:
    names = tuple(f"{prefix}{k}" for k in range(len(regions)))
    mapping = {a: frozenset(p for p, r in zip(names, regions) if a in r) for a in S.elements}
    return names, mapping


def set_representation(S: FiniteJoinStructure, check: bool = True) -> Embedding:
    """Points are the clans; an element goes to the clans containing it."""
    if check and not is_cjs(S):
        raise PreconditionError("structure is not a CJS")
    clans = enumerate_clans(S)
    names, mapping = _build(S, "G", clans)
    return Embedding(names, mapping, None, dict(zip(names, clans)))


def relational_representation(S: FiniteJoinStructure, strategy: str = "clan", check: bool = True) -> Embedding:
    """Points are the abstract points, related when all their members touch.

    Both strategies produce the same points and relation and differ in how a
    contact ``aCb`` is witnessed by related points ``U ∋ a``, ``V ∋ b``:

    * ``clan``: a clan holding a and b, split into abstract points;
    * ``prime-ideal``: points are complements of prime ideals, and the
      witnesses come from separating ``{x : not xCb}`` from ``[a)`` and then
      ``{x : x misses some member of F}`` from ``[b)``.
    """
    if check and not is_dcjs(S):
        raise PreconditionError("structure is not a DCJS")
    n = len(S)
    if strategy == "clan":
        points = enumerate_abstract_points(S)
    elif strategy == "prime-ideal":
        full = frozenset(S.elements)
        points = []
        for P in enumerate_prime_ideals(S):
            if S.elements[S.zero] in P and S.elements[S.one] not in P:
                points.append(RegionSet(full - P.members, frozenset({"abstract-point"})))
        points.sort(key=lambda r: sorted(S.idx(x) for x in r.members))
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    names, mapping = _build(S, "U", points)
    by_members = {r.members: p for p, r in zip(names, points)}
    rel = set()
    for i, (p, U) in enumerate(zip(names, points)):
        for q, V in list(zip(names, points))[i:]:
            if all(S.touches(x, y) for x in U.members for y in V.members):
                rel.add((p, q))
    E = Embedding(names, mapping, frozenset(rel), dict(zip(names, points)))
    for a in range(n):
        for b in range(a, n):
            if not S.contact_matrix[a][b]:
                continue
            x, y = S.elements[a], S.elements[b]
            if strategy == "clan":
                U, V = _clan_witness(S, x, y)
            else:
                U, V = _ideal_witness(S, x, y)
            try:
                pu, pv = by_members[U.members], by_members[V.members]
            except KeyError:
                raise ConstructionError(f"witness for {x} C {y} is not an abstract point") from None
            if not E.related(pu, pv):
                raise ConstructionError(f"witness points for {x} C {y} are not related")
            E.witnesses[(x, y)] = (pu, pv)
    return E


def _clan_witness(S, a: str, b: str) -> tuple[RegionSet, RegionSet]:
    G = find_clan(S, contains=(a, b))
    sigma = clan_decomposition(S, G)
    U = next(r for r in sigma if a in r)
    V = next(r for r in sigma if b in r)
    return U, V


def _ideal_witness(S, a: str, b: str) -> tuple[RegionSet, RegionSet]:
    full = frozenset(S.elements)
    P = [x for x in S.elements if not S.touches(x, b)]
    above_a = [x for x in S.elements if S.le(a, x)]
    P1 = separating_prime_ideal(S, P, above_a)
    if P1 is None:
        raise ConstructionError(f"no prime ideal extends the non-contacts of {b} avoiding [{a})")
    F = full - P1.members
    I = [x for x in S.elements if any(not S.touches(x, y) for y in F)]
    above_b = [x for x in S.elements if S.le(b, x)]
    I1 = separating_prime_ideal(S, I, above_b)
    if I1 is None:
        raise ConstructionError(f"no prime ideal extends I avoiding [{b})")
    F1 = full - I1.members
    kind = frozenset({"abstract-point"})
    return RegionSet(F, kind), RegionSet(F1, kind)


@dataclass
class EmbeddingReport:
    clauses: dict[str, bool] = field(default_factory=dict)
    witnesses: dict[str, tuple] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.clauses.values())


def verify_embedding(S: FiniteJoinStructure, E: Embedding) -> EmbeddingReport:
    """Check every clause of an isomorphic embedding, with a witness per failure."""
    rep = EmbeddingReport()
    h = E.mapping
    el = S.elements
    W = frozenset(E.points)

    def clause(name, bad):
        rep.clauses[name] = bad is None
        if bad is not None:
            rep.witnesses[name] = bad

    seen = {}
    bad = None
    for a in el:
        if h[a] in seen:
            bad = (seen[h[a]], a)
            break
        seen[h[a]] = a
    clause("injective", bad)

    bad = None
    if h[el[S.zero]]:
        bad = (el[S.zero],)
    elif h[el[S.one]] != W:
        bad = (el[S.one],)
    clause("bounds", bad)

    clause("join", next(((a, b) for a in el for b in el if h[S.joins(a, b)] != h[a] | h[b]), None))
    clause("order", next(((a, b) for a in el for b in el if S.le(a, b) != (h[a] <= h[b])), None))
    clause("contact", next(((a, b) for a in el for b in el
                            if S.touches(a, b) != E.target_contact(h[a], h[b])), None))
    if E.relation is not None:
        bad = next(((p,) for p in E.points if not E.related(p, p)), None)
        if bad is None:
            bad = next(((p, q) for p, q in E.relation if p not in W or q not in W), None)
        clause("relation", bad)
    return rep
