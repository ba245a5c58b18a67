"""Generators for the standard set, relational and topological examples."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

from .structures import FiniteJoinStructure, StructureError, is_dcjs, make_structure


def set_name(block: Iterable, order: Sequence) -> str:
    pos = {p: i for i, p in enumerate(order)}
    return "{" + ",".join(str(p) for p in sorted(block, key=pos.__getitem__)) + "}"


def _powerset(points: Sequence) -> list[frozenset]:
    return [frozenset(c) for r in range(len(points) + 1) for c in combinations(points, r)]


def _family_structure(W: Sequence, B: Sequence[frozenset], touch) -> FiniteJoinStructure:
    W = list(W)
    fam = [frozenset(b) for b in B]
    if len(set(fam)) != len(fam):
        raise StructureError("family has repeated sets", "family")
    pos = {b: i for i, b in enumerate(fam)}
    full = frozenset(W)
    for b in fam:
        if not b <= full:
            raise StructureError(f"{set(b)} is not a subset of W", "family", (b,))
    if frozenset() not in pos or full not in pos:
        raise StructureError("family must contain the empty set and W", "family")
    table = []
    for a in fam:
        row = []
        for b in fam:
            if a | b not in pos:
                raise StructureError("family not closed under union", "family",
                                     (set_name(a, W), set_name(b, W)))
            row.append(pos[a | b])
        table.append(row)
    contact = [(i, j) for i in range(len(fam)) for j in range(i, len(fam)) if touch(fam[i], fam[j])]
    return make_structure([set_name(b, W) for b in fam], pos[frozenset()], pos[full], table, contact)


def family_cjs(W: Sequence, B: Iterable[Iterable]) -> FiniteJoinStructure:
    """Union-closed family of subsets of ``W`` with overlap contact."""
    return _family_structure(W, [frozenset(b) for b in B], lambda a, b: bool(a & b))


def powerset_structure(W: Sequence) -> FiniteJoinStructure:
    return family_cjs(W, _powerset(list(W)))


def _check_relation(W: Sequence, R: Iterable[tuple]) -> set[tuple]:
    rel = {(p, q) for p, q in R}
    for p, q in rel:
        if p not in W or q not in W:
            raise StructureError("relation mentions a point outside W", "relation", (p, q))
    for p in W:
        if (p, p) not in rel:
            raise StructureError("relation is not reflexive", "relation", (p,))
    for p, q in rel:
        if (q, p) not in rel:
            raise StructureError("relation is not symmetric", "relation", (p, q))
    return rel


def relational_structure(W: Sequence, R: Iterable[tuple], B: Iterable[Iterable] | None = None
                         ) -> FiniteJoinStructure:
    """Union-closed family with ``aCb`` iff some point of a is R-related to one of b.

    ``B`` defaults to the full powerset.  Whether the result is a DCJS depends
    on (ad), which callers check separately.
    """
    W = list(W)
    rel = _check_relation(W, R)
    fam = _powerset(W) if B is None else [frozenset(b) for b in B]
    return _family_structure(W, fam, lambda a, b: any((p, q) in rel for p in a for q in b))


PR2NN_POINTS = (1, 2, 3, 4)
PR2NN_FAMILY = ((), (1, 2, 3, 4), (1, 3), (2, 4), (1, 2), (1, 2, 3), (1, 2, 4))


def fixture_pr2nn() -> FiniteJoinStructure:
    """Seven subsets of {1,2,3,4}: a CJS that fails (ad) at {1,2} <= {1,3}+{2,4}."""
    return family_cjs(PR2NN_POINTS, PR2NN_FAMILY)


# ---------------------------------------------------------------------------
# contact algebras


@dataclass(frozen=True)
class ContactAlgebraStructure:
    structure: FiniteJoinStructure
    meet: tuple[tuple[int, ...], ...]
    complement: tuple[int, ...]


def relational_contact_algebra(W: Sequence, R: Iterable[tuple]) -> ContactAlgebraStructure:
    S = relational_structure(W, R)
    sets = [_parse_name(x, W) for x in S.elements]
    pos = {s: i for i, s in enumerate(sets)}
    full = frozenset(W)
    meet = tuple(tuple(pos[a & b] for b in sets) for a in sets)
    comp = tuple(pos[full - a] for a in sets)
    return ContactAlgebraStructure(S, meet, comp)


def _parse_name(name: str, W: Sequence) -> frozenset:
    lookup = {str(p): p for p in W}
    body = name.strip("{}")
    return frozenset(lookup[t] for t in body.split(",") if t)


@dataclass(frozen=True)
class FiniteTopology:
    points: tuple
    opens: frozenset[frozenset]

    def __post_init__(self):
        full = frozenset(self.points)
        if frozenset() not in self.opens or full not in self.opens:
            raise StructureError("opens must contain the empty set and the whole space", "opens")
        for o in self.opens:
            if not o <= full:
                raise StructureError("open set outside the space", "opens", (set(o),))
        for a in self.opens:
            for b in self.opens:
                if a | b not in self.opens or a & b not in self.opens:
                    raise StructureError("opens not closed under union/intersection", "opens",
                                         (sorted(a, key=str), sorted(b, key=str)))

    @classmethod
    def from_dict(cls, raw: Mapping) -> "FiniteTopology":
        if "points" not in raw or "opens" not in raw:
            raise StructureError("topology needs 'points' and 'opens'", "points")
        pts = tuple(raw["points"])
        return cls(pts, frozenset(frozenset(o) for o in raw["opens"]))

    def interior(self, a: frozenset) -> frozenset:
        out = frozenset()
        for o in self.opens:
            if o <= a:
                out |= o
        return out

    def closure(self, a: frozenset) -> frozenset:
        full = frozenset(self.points)
        return full - self.interior(full - a)


def regular_closed_sets(T: FiniteTopology) -> list[frozenset]:
    sets = [s for s in _powerset(list(T.points)) if T.closure(T.interior(s)) == s]
    pos = {p: i for i, p in enumerate(T.points)}
    return sorted(sets, key=lambda s: (len(s), sorted(pos[p] for p in s)))


def finite_topology_rc(T: FiniteTopology) -> ContactAlgebraStructure:
    """Regular closed sets of a finite space with overlap contact."""
    rc = regular_closed_sets(T)
    S = family_cjs(T.points, rc)
    pos = {s: i for i, s in enumerate(rc)}
    full = frozenset(T.points)
    meet = tuple(tuple(pos[T.closure(T.interior(a & b))] for b in rc) for a in rc)
    comp = tuple(pos[T.closure(full - a)] for a in rc)
    return ContactAlgebraStructure(S, meet, comp)


def enumerate_topologies(points: Sequence) -> Iterator[FiniteTopology]:
    """Every topology on a small labelled point set (exhaustive over families)."""
    pts = tuple(points)
    full = frozenset(pts)
    middle = [s for s in _powerset(list(pts)) if s and s != full]
    for bits in range(1 << len(middle)):
        fam = {frozenset(), full} | {middle[k] for k in range(len(middle)) if bits >> k & 1}
        if all(a | b in fam and a & b in fam for a in fam for b in fam):
            yield FiniteTopology(pts, frozenset(fam))


def check_contact_algebra(A: ContactAlgebraStructure) -> dict[str, bool]:
    """Boolean-algebra laws, (C1)-(C5), and whether the meet-free reduct is a DCJS."""
    S = A.structure
    n = len(S)
    J, M, c, le = S.join, A.meet, A.complement, S.leq
    C = S.contact_matrix
    z, o = S.zero, S.one
    rng = range(n)
    out = {}
    out["meet_glb"] = all(le[M[a][b]][a] and le[M[a][b]][b] and
                          all(not (le[d][a] and le[d][b]) or le[d][M[a][b]] for d in rng)
                          for a in rng for b in rng)
    out["distributive"] = all(M[a][J[b][d]] == J[M[a][b]][M[a][d]] for a in rng for b in rng for d in rng)
    out["complement"] = all(J[a][c[a]] == o and M[a][c[a]] == z for a in rng)
    out["C1"] = all(not C[a][b] or a != z for a in rng for b in rng)
    out["C2"] = all(not (C[a][b] and le[a][x] and le[b][y]) or C[x][y]
                    for a in rng for b in rng for x in rng for y in rng)
    out["C3"] = all(not C[a][J[b][d]] or C[a][b] or C[a][d] for a in rng for b in rng for d in rng)
    out["C4"] = all(not C[a][b] or C[b][a] for a in rng for b in rng)
    out["C5"] = all(a == z or C[a][a] for a in rng)
    out["reduct_dcjs"] = is_dcjs(S)
    return out
