"""Finite bounded join-semilattices carrying a contact relation.

A structure is stored by its join table; the order is always derived from it
(``a <= b`` iff ``a + b == b``).  Elements are addressed by name in the public
functions of this module and by integer index internally.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Sequence


class StructureError(ValueError):
    """Raised when a raw description is not a bounded join-semilattice."""

    def __init__(self, message: str, field: str | None = None, witness: tuple = ()):
        super().__init__(message)
        self.field = field
        self.witness = tuple(witness)


class PreconditionError(ValueError):
    pass


class ConstructionError(RuntimeError):
    """A construction that is guaranteed for DCJS failed on this structure."""


@dataclass(frozen=True)
class FiniteJoinStructure:
    elements: tuple[str, ...]
    zero: int
    one: int
    join: tuple[tuple[int, ...], ...]
    contact: frozenset[tuple[int, int]]  # unordered pairs stored as (i, j) with i <= j

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        pairs = sorted(self.contact)
        return (f"FiniteJoinStructure({list(self.elements)}, "
                f"contact={[(self.elements[i], self.elements[j]) for i, j in pairs]})")

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.elements)}

    @cached_property
    def leq(self) -> tuple[tuple[bool, ...], ...]:
        n = len(self.elements)
        return tuple(tuple(self.join[a][b] == b for b in range(n)) for a in range(n))

    @cached_property
    def contact_matrix(self) -> tuple[tuple[bool, ...], ...]:
        n = len(self.elements)
        m = [[False] * n for _ in range(n)]
        for i, j in self.contact:
            m[i][j] = m[j][i] = True
        return tuple(tuple(row) for row in m)

    @cached_property
    def up_mask(self) -> tuple[int, ...]:
        """Bitmask of the principal filter [a) for every a."""
        n = len(self.elements)
        return tuple(sum(1 << b for b in range(n) if self.leq[a][b]) for a in range(n))

    @cached_property
    def down_mask(self) -> tuple[int, ...]:
        n = len(self.elements)
        return tuple(sum(1 << b for b in range(n) if self.leq[b][a]) for a in range(n))

    @cached_property
    def contact_mask(self) -> tuple[int, ...]:
        n = len(self.elements)
        return tuple(sum(1 << b for b in range(n) if self.contact_matrix[a][b]) for a in range(n))

    def idx(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise KeyError(f"unknown element {name!r}") from None

    def name(self, i: int) -> str:
        return self.elements[i]

    def le(self, a: str, b: str) -> bool:
        return self.leq[self.idx(a)][self.idx(b)]

    def joins(self, a: str, b: str) -> str:
        return self.elements[self.join[self.idx(a)][self.idx(b)]]

    def touches(self, a: str, b: str) -> bool:
        return self.contact_matrix[self.idx(a)][self.idx(b)]

    def join_all(self, items: Iterable[int]) -> int:
        """Left fold of the binary join; the empty join is zero."""
        acc = self.zero
        for i in items:
            acc = self.join[acc][i]
        return acc

    def with_contact(self, pairs: Iterable[tuple[int, int]]) -> "FiniteJoinStructure":
        return FiniteJoinStructure(self.elements, self.zero, self.one, self.join,
                                   frozenset((min(i, j), max(i, j)) for i, j in pairs))

    def to_dict(self) -> dict:
        n = len(self.elements)
        e = self.elements
        return {
            "elements": list(e),
            "zero": e[self.zero],
            "one": e[self.one],
            "join": [[e[a], e[b], e[self.join[a][b]]] for a in range(n) for b in range(a + 1, n)],
            "contact": [[e[i], e[j]] for i, j in sorted(self.contact)],
        }


def _fail(message, field, *witness):
    raise StructureError(message + (f": {witness}" if witness else ""), field, witness)


def validate_structure(raw: Mapping) -> FiniteJoinStructure:
    """Validate a raw description and return the structure.

    ``raw`` follows the structure file layout (``elements``, ``zero``, ``one``,
    ``join`` as ``[a, b, result]`` triples, ``contact`` as pairs).  Join
    entries may omit symmetric duplicates and idempotent pairs.  Unknown keys
    are ignored so that counterexample documents load as well.
    """
    for key in ("elements", "zero", "one", "join"):
        if key not in raw:
            _fail(f"missing field {key!r}", key)
    names = raw["elements"]
    if not isinstance(names, (list, tuple)) or not names:
        _fail("elements must be a nonempty list", "elements")
    names = [str(x) for x in names]
    if len(set(names)) != len(names):
        dup = next(x for x in names if names.count(x) > 1)
        _fail("duplicate element", "elements", dup)
    index = {x: i for i, x in enumerate(names)}

    def lookup(x, fld):
        if str(x) not in index:
            _fail("unknown element", fld, x)
        return index[str(x)]

    zero = lookup(raw["zero"], "zero")
    one = lookup(raw["one"], "one")
    n = len(names)
    table: list[list[int | None]] = [[None] * n for _ in range(n)]
    for entry in raw["join"]:
        if not isinstance(entry, (list, tuple)) or len(entry) != 3:
            _fail("join entries must be [a, b, result]", "join", entry)
        a, b, r = (lookup(x, "join") for x in entry)
        for p, q in ((a, b), (b, a)):
            if table[p][q] is not None and table[p][q] != r:
                _fail("conflicting join entries", "join", names[p], names[q])
            table[p][q] = r
    for a in range(n):
        if table[a][a] is None:
            table[a][a] = a
    missing = [(names[a], names[b]) for a in range(n) for b in range(n) if table[a][b] is None]
    if missing:
        _fail("missing join entry", "join", *missing[0])
    contact = set()
    for entry in raw.get("contact", []):
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            _fail("contact entries must be [a, b]", "contact", entry)
        a, b = (lookup(x, "contact") for x in entry)
        contact.add((min(a, b), max(a, b)))
    return make_structure(names, zero, one, table, contact)


def make_structure(names: Sequence[str], zero: int, one: int,
                   table: Sequence[Sequence[int]], contact: Iterable[tuple[int, int]] = ()
                   ) -> FiniteJoinStructure:
    """Build from a complete index table, checking the bounded join-semilattice laws."""
    n = len(names)
    j = tuple(tuple(int(x) for x in row) for row in table)
    e = list(names)
    for a in range(n):
        if j[a][a] != a:
            _fail("join not idempotent", "join", e[a])
    for a in range(n):
        for b in range(n):
            if j[a][b] != j[b][a]:
                _fail("join not commutative", "join", e[a], e[b])
    leq = [[j[a][b] == b for b in range(n)] for a in range(n)]
    # antisymmetry holds automatically under commutativity; transitivity does not
    for a in range(n):
        for b in range(n):
            if not leq[a][b]:
                continue
            for c in range(n):
                if leq[b][c] and not leq[a][c]:
                    _fail("derived order not transitive", "join", e[a], e[b], e[c])
    for a in range(n):
        for b in range(n):
            s = j[a][b]
            if not (leq[a][s] and leq[b][s]):
                _fail("join not an upper bound", "join", e[a], e[b])
            for c in range(n):
                if leq[a][c] and leq[b][c] and not leq[s][c]:
                    _fail("join not least upper bound", "join", e[a], e[b], e[c])
    for a in range(n):
        if not leq[zero][a]:
            _fail("zero is not the bottom", "zero", e[zero], e[a])
        if not leq[a][one]:
            _fail("one is not the top", "one", e[a], e[one])
    pairs = frozenset((min(a, b), max(a, b)) for a, b in contact)
    return FiniteJoinStructure(tuple(e), zero, one, j, pairs)


# ---------------------------------------------------------------------------
# contact axioms


@dataclass
class AxiomReport:
    verdicts: dict[str, bool] = field(default_factory=dict)
    witnesses: dict[str, tuple[str, ...]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    def failed(self) -> list[str]:
        return [k for k, v in self.verdicts.items() if not v]


CONTACT_AXIOMS = ("no-zero-contact", "symmetry", "join-distribution", "monotonicity", "reflexivity")


def axiom_holds(S: FiniteJoinStructure, axiom: str, witness: Sequence[str]) -> bool:
    """Evaluate one instance of a named contact axiom at the given elements."""
    w = [S.idx(x) for x in witness]
    C, le, J = S.contact_matrix, S.leq, S.join
    if axiom == "no-zero-contact":
        x, y = w
        return not C[x][y] or x != S.zero
    if axiom == "symmetry":
        x, y = w
        return not C[x][y] or C[y][x]
    if axiom == "join-distribution":
        x, y, z = w
        return not C[x][J[y][z]] or C[x][y] or C[x][z]
    if axiom == "monotonicity":
        x, y, y2 = w
        return not (C[x][y] and le[y][y2]) or C[x][y2]
    if axiom == "reflexivity":
        (x,) = w
        return x == S.zero or C[x][x]
    raise ValueError(f"unknown contact axiom {axiom!r}")


_ARITY = {"no-zero-contact": 2, "symmetry": 2, "join-distribution": 3, "monotonicity": 3, "reflexivity": 1}


def check_contact_axioms(S: FiniteJoinStructure, axioms: Sequence[str] = CONTACT_AXIOMS) -> AxiomReport:
    report = AxiomReport()
    n = len(S)
    for ax in axioms:
        report.verdicts[ax] = True
        for w in product(range(n), repeat=_ARITY[ax]):
            names = tuple(S.elements[i] for i in w)
            if not axiom_holds(S, ax, names):
                report.verdicts[ax] = False
                report.witnesses[ax] = names
                break
    return report


# ---------------------------------------------------------------------------
# (ad) and its n-ary consequences


def _decompose(S: FiniteJoinStructure, x: int, parts: Sequence[int]) -> list[int] | None:
    # every a_k' must lie below x as well as below a_k
    cands = [[c for c in range(len(S)) if S.leq[c][parts[k]] and S.leq[c][x]]
             for k in range(len(parts))]
    out: list[int] = []

    def go(k: int, acc: int) -> bool:
        if k == len(parts):
            return acc == x
        for c in cands[k]:
            out.append(c)
            if go(k + 1, S.join[acc][c]):
                return True
            out.pop()
        return False

    return out if go(0, S.zero) else None


def check_ad(S: FiniteJoinStructure) -> tuple[str, str, str] | None:
    """Return the first ``(x, a, b)`` violating (ad), or None when it holds."""
    n = len(S)
    for x in range(n):
        for a in range(n):
            for b in range(n):
                if S.leq[x][S.join[a][b]] and _decompose(S, x, (a, b)) is None:
                    return S.elements[x], S.elements[a], S.elements[b]
    return None


def ad_decompose(S: FiniteJoinStructure, x: str, parts: Sequence[str]) -> list[str] | None:
    """Find ``a_k' <= a_k`` with ``x = a_1' + ... + a_n'`` by exhaustive search.

    Returns None when no decomposition exists, which can only happen when
    ``S`` violates (ad).
    """
    xi = S.idx(x)
    pi = [S.idx(p) for p in parts]
    if not pi:
        raise PreconditionError("parts must be nonempty")
    if not S.leq[xi][S.join_all(pi)]:
        raise PreconditionError(f"{x} is not below the join of {list(parts)}")
    found = _decompose(S, xi, pi)
    return None if found is None else [S.elements[i] for i in found]


def refine_presentations(S: FiniteJoinStructure, x: str,
                         presentations: Sequence[Sequence[str]]) -> list[str] | None:
    """Common refinement of several presentations of ``x``.

    Returns ``t_1..t_n`` joining to ``x`` such that each ``t_j`` lies below
    some summand of every presentation.  Built by induction on the number of
    presentations: every current piece is decomposed along the next
    presentation.  Zero pieces and repeats are dropped.
    """
    xi = S.idx(x)
    pres = [[S.idx(s) for s in p] for p in presentations]
    if not pres:
        raise PreconditionError("at least one presentation is required")
    for p in pres:
        if not p or S.join_all(p) != xi:
            raise PreconditionError(f"presentation {[S.elements[i] for i in p]} does not join to {x}")
    pieces = _dedupe(pres[0], S.zero)
    for p in pres[1:]:
        nxt: list[int] = []
        for t in pieces:
            parts = _decompose(S, t, p)
            if parts is None:
                return None
            nxt.extend(parts)
        pieces = _dedupe(nxt, S.zero)
    return [S.elements[i] for i in pieces]


def _dedupe(items: Iterable[int], zero: int) -> list[int]:
    out = []
    for i in items:
        if i != zero and i not in out:
            out.append(i)
    return out or [zero]


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Classification:
    is_join_semilattice: bool
    satisfies_contact_axioms: bool
    satisfies_ad: bool
    is_cjs: bool
    is_dcjs: bool
    contact_report: AxiomReport | None = None
    ad_witness: tuple[str, str, str] | None = None
    schema_a1_witness: tuple[str, str] | None = None
    schema_a_witness: tuple[str, str] | None = None


def classify(S: FiniteJoinStructure) -> Classification:
    from .clans import check_schema_A, check_schema_A1

    report = check_contact_axioms(S)
    ad = check_ad(S)
    base_ok = report.verdicts["no-zero-contact"] and report.verdicts["symmetry"]
    a1 = a = None
    if base_ok:
        a1 = check_schema_A1(S)
        a = check_schema_A(S)
    is_cjs = base_ok and a1 is None and a is None
    return Classification(
        is_join_semilattice=True,
        satisfies_contact_axioms=report.ok,
        satisfies_ad=ad is None,
        is_cjs=is_cjs,
        is_dcjs=report.ok and ad is None,
        contact_report=report,
        ad_witness=ad,
        schema_a1_witness=a1,
        schema_a_witness=a,
    )


def is_dcjs(S: FiniteJoinStructure) -> bool:
    return check_contact_axioms(S).ok and check_ad(S) is None


def is_cjs(S: FiniteJoinStructure) -> bool:
    from .clans import check_schema_A, check_schema_A1

    r = check_contact_axioms(S, ("no-zero-contact", "symmetry"))
    return r.ok and check_schema_A1(S) is None and check_schema_A(S) is None
