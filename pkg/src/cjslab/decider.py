"""Validity of quantifier-free formulas over all CJS, via small models.

A formula with n variables is valid in every CJS iff it holds in every CJS
with at most 2**n + 1 elements, and the latter are enumerable.  Two search
strategies are provided:

* ``reference``: every CJS up to the size bound, up to isomorphism, under
  every valuation;
* ``generated``: only structures generated by the n variable values
  together with 0 and 1, i.e. quotients of the skeleton
  ``{0} ∪ {nonempty subsets of the variables} ∪ {1}`` by a join-congruence,
  each tested under its generator valuation.

``auto`` uses the reference search while the bound stays within
``max_reference_size`` and the generated search beyond it.
"""
from __future__ import annotations

import random
import string
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterator, Sequence

from .logic import (
    And, Atom, Formula, Iff, Implies, Join, Not, One, Or, Var, Zero, compile_formula, parse_formula, variables,
)
from .structures import FiniteJoinStructure, check_ad, check_contact_axioms, is_cjs, is_dcjs

KINDS = ("cjs", "dcjs", "raw-semilattice")


# ---------------------------------------------------------------------------
# canonical forms


def _inner_names(k: int) -> list[str]:
    letters = string.ascii_lowercase
    return [letters[i] if i < len(letters) else f"e{i}" for i in range(k)]


def _invariant(S: FiniteJoinStructure, a: int) -> tuple:
    n = len(S)
    below = sum(S.leq[b][a] for b in range(n))
    above = sum(S.leq[a][b] for b in range(n))
    touch = sum(S.contact_matrix[a][b] for b in range(n))
    return below, above, S.contact_matrix[a][a], touch


def _labelings(S: FiniteJoinStructure) -> Iterator[list[int]]:
    """Candidate orderings (new position -> old index) fixing 0 first and 1 last.

    Inner elements are grouped by an isomorphism invariant; only orderings
    that list the groups in invariant order are produced, which keeps the
    minimum over labelings canonical.
    """
    n = len(S)
    if n == 1:
        yield [0]
        return
    inner = [a for a in range(n) if a not in (S.zero, S.one)]
    groups: dict[tuple, list[int]] = {}
    for a in inner:
        groups.setdefault(_invariant(S, a), []).append(a)
    blocks = [groups[k] for k in sorted(groups)]
    for combo in product(*(permutations(b) for b in blocks)):
        yield [S.zero] + [a for blk in combo for a in blk] + [S.one]


def _encode(S: FiniteJoinStructure, order: Sequence[int]) -> tuple:
    n = len(order)
    pos = [0] * n
    for new, old in enumerate(order):
        pos[old] = new
    J, C = S.join, S.contact_matrix
    table = tuple(pos[J[order[a]][order[b]]] for a in range(n) for b in range(a + 1, n))
    touch = tuple(C[order[a]][order[b]] for a in range(n) for b in range(a, n))
    return (n, table, touch)


def canonical_form(S: FiniteJoinStructure) -> tuple:
    """Relabeling-invariant encoding: equal iff the structures are isomorphic."""
    return min(_encode(S, o) for o in _labelings(S))


def _relabel(S: FiniteJoinStructure, order: Sequence[int]) -> FiniteJoinStructure:
    n = len(order)
    if n == 1:
        names = ["0"]
    else:
        names = ["0"] + _inner_names(n - 2) + ["1"]
    pos = [0] * n
    for new, old in enumerate(order):
        pos[old] = new
    table = tuple(tuple(pos[S.join[order[a]][order[b]]] for b in range(n)) for a in range(n))
    contact = frozenset((min(pos[i], pos[j]), max(pos[i], pos[j])) for i, j in S.contact)
    return FiniteJoinStructure(tuple(names), 0, n - 1, table, contact)


def canonical_structure(S: FiniteJoinStructure) -> tuple[tuple, FiniteJoinStructure]:
    best = min(_labelings(S), key=lambda o: _encode(S, o))
    return _encode(S, best), _relabel(S, best)


# ---------------------------------------------------------------------------
# lattice enumeration


_LATTICES: dict[int, list[FiniteJoinStructure]] = {}


def _natural_posets(m: int) -> Iterator[list[list[bool]]]:
    """Transitive relations r[i][j] (i < j) on m points; every naturally labelled poset once."""
    r = [[False] * m for _ in range(m)]
    pairs = [(i, j) for j in range(m) for i in range(j - 1, -1, -1)]

    def go(k: int):
        if k == len(pairs):
            yield r
            return
        i, j = pairs[k]
        forced = any(r[i][t] and r[t][j] for t in range(i + 1, j))
        for val in ((True,) if forced else (False, True)):
            r[i][j] = val
            yield from go(k + 1)
        r[i][j] = False

    yield from go(0)


def lattices(k: int) -> list[FiniteJoinStructure]:
    """Every bounded lattice with k elements up to isomorphism, empty contact."""
    if k in _LATTICES:
        return _LATTICES[k]
    if k == 1:
        out = [FiniteJoinStructure(("0",), 0, 0, ((0,),), frozenset())]
    elif k == 2:
        out = [FiniteJoinStructure(("0", "1"), 0, 1, ((0, 1), (1, 1)), frozenset())]
    else:
        m = k - 2
        seen = {}
        for r in _natural_posets(m):
            # 0 is index 0, inner points 1..m, top is k-1
            le = [[False] * k for _ in range(k)]
            for a in range(k):
                le[0][a] = le[a][k - 1] = le[a][a] = True
            for i in range(m):
                for j in range(i + 1, m):
                    if r[i][j]:
                        le[i + 1][j + 1] = True
            table = _joins(le, k)
            if table is None:
                continue
            S = FiniteJoinStructure(tuple(str(a) for a in range(k)), 0, k - 1, table, frozenset())
            code, canon = canonical_structure(S)
            seen.setdefault(code, canon)
        out = [seen[c] for c in sorted(seen)]
    _LATTICES[k] = out
    return out


def _joins(le: list[list[bool]], k: int) -> tuple | None:
    table = [[0] * k for _ in range(k)]
    for a in range(k):
        for b in range(a, k):
            ub = [c for c in range(k) if le[a][c] and le[b][c]]
            least = [c for c in ub if all(le[c][d] for d in ub)]
            if not least:
                return None
            table[a][b] = table[b][a] = least[0]
    return tuple(tuple(row) for row in table)


# ---------------------------------------------------------------------------
# contacts


def _contact_candidates(L: FiniteJoinStructure, kind: str) -> Iterator[FiniteJoinStructure]:
    n = len(L)
    nz = [a for a in range(n) if a != L.zero]
    pairs = [(a, b) for i, a in enumerate(nz) for b in nz[i:]]
    if kind == "raw-semilattice":
        for bits in range(1 << len(pairs)):
            yield L.with_contact(p for k, p in enumerate(pairs) if bits >> k & 1)
        return
    # in a CJS every comparable nonzero pair touches (reflexivity + monotonicity)
    forced = [(a, b) for a, b in pairs if L.leq[a][b] or L.leq[b][a]]
    free = [(a, b) for a, b in pairs if not (L.leq[a][b] or L.leq[b][a])]
    for bits in range(1 << len(free)):
        S = L.with_contact(forced + [p for k, p in enumerate(free) if bits >> k & 1])
        if check_contact_axioms(S, ("join-distribution", "monotonicity")).ok:
            yield S


def _accepts(S: FiniteJoinStructure, kind: str) -> bool:
    if kind == "cjs":
        return is_cjs(S)
    if kind == "dcjs":
        return is_dcjs(S)
    if kind == "raw-semilattice":
        return check_contact_axioms(S, ("no-zero-contact", "symmetry")).ok
    raise ValueError(f"unknown kind {kind!r}")


_STRUCTURES: dict[tuple[int, str], list[FiniteJoinStructure]] = {}


def structures_of_size(k: int, kind: str) -> list[FiniteJoinStructure]:
    """All structures with exactly k elements of the given kind, canonical order."""
    key = (k, kind)
    if key not in _STRUCTURES:
        if kind not in KINDS:
            raise ValueError(f"unknown kind {kind!r}")
        found = {}
        for L in lattices(k):
            for S in _contact_candidates(L, kind):
                if _accepts(S, kind):
                    code, canon = canonical_structure(S)
                    found.setdefault(code, canon)
        _STRUCTURES[key] = [found[c] for c in sorted(found)]
    return _STRUCTURES[key]


@dataclass(frozen=True)
class EnumerationCursor:
    size: int
    kind: str = "cjs"
    exact: bool = False


def enumerate_structures(size: int | EnumerationCursor, kind: str = "cjs",
                         exact: bool = False) -> Iterator[FiniteJoinStructure]:
    """One structure per isomorphism class, by size then canonical encoding."""
    cur = size if isinstance(size, EnumerationCursor) else EnumerationCursor(size, kind, exact)
    if cur.size < 1:
        raise ValueError("size bound must be at least 1")
    lo = cur.size if cur.exact else 1
    for k in range(lo, cur.size + 1):
        yield from structures_of_size(k, cur.kind)


# ---------------------------------------------------------------------------
# random structures


def random_structure(size: int, seed: int, kind: str = "cjs", budget: int = 20000) -> FiniteJoinStructure:
    """Rejection sampler: random lattice, random contact, keep if ``kind`` accepts it."""
    if size < 1:
        raise ValueError("size must be at least 1")
    rng = random.Random(f"{size}/{seed}/{kind}")
    for _ in range(budget):
        if size == 1:
            L = lattices(1)[0]
        else:
            m = size - 2
            le = [[False] * size for _ in range(size)]
            for a in range(size):
                le[0][a] = le[a][size - 1] = le[a][a] = True
            for j in range(m):
                for i in range(j - 1, -1, -1):
                    forced = any(le[i + 1][t + 1] and le[t + 1][j + 1] for t in range(i + 1, j))
                    if forced or rng.random() < 0.35:
                        le[i + 1][j + 1] = True
            table = _joins(le, size)
            if table is None:
                continue
            names = ("0",) + tuple(_inner_names(m)) + ("1",)
            L = FiniteJoinStructure(names, 0, size - 1, table, frozenset())
        nz = [a for a in range(size) if a != L.zero]
        pairs = [(a, b) for i, a in enumerate(nz) for b in nz[i:]]
        if kind == "raw-semilattice":
            chosen = [p for p in pairs if rng.random() < 0.5]
        else:
            chosen = [p for p in pairs if L.leq[p[0]][p[1]] or L.leq[p[1]][p[0]] or rng.random() < 0.5]
        S = L.with_contact(chosen)
        if _accepts(S, kind):
            return S
    raise RuntimeError(f"no {kind} structure of size {size} found within {budget} samples")


# ---------------------------------------------------------------------------
# generated models


def _skeleton(n: int) -> tuple[int, int, list[list[int]]]:
    """Free join-semilattice on n generators with 0 and a new top adjoined."""
    top = 1 << n
    N = top + 1
    J = [[0] * N for _ in range(N)]
    for a in range(N):
        for b in range(N):
            J[a][b] = top if top in (a, b) else a | b
    return N, top, J


def _congruences(N: int, J: list[list[int]]) -> Iterator[list[int]]:
    """Join-congruences of the skeleton as restricted growth strings."""
    cls = [-1] * N

    def consistent(upto: int) -> bool:
        for a in range(upto + 1):
            for b in range(a + 1, upto + 1):
                if cls[a] != cls[b]:
                    continue
                for c in range(upto + 1):
                    x, y = J[a][c], J[b][c]
                    if x <= upto and y <= upto and cls[x] != cls[y]:
                        return False
        return True

    def go(i: int, nxt: int):
        if i == N:
            yield list(cls)
            return
        for c in range(nxt + 1):
            cls[i] = c
            if consistent(i):
                yield from go(i + 1, max(nxt, c + 1))
        cls[i] = -1

    yield from go(0, 0)


@dataclass(frozen=True)
class GeneratedModel:
    key: tuple
    structure: FiniteJoinStructure
    values: tuple[int, ...]


_GENERATED: dict[tuple[int, str], list[GeneratedModel]] = {}


def generated_models(n: int, kind: str = "cjs") -> list[GeneratedModel]:
    """Every structure generated by n valued generators plus 0 and 1, with that valuation."""
    cache_key = (n, kind)
    if cache_key in _GENERATED:
        return _GENERATED[cache_key]
    N, top, J = _skeleton(n)
    models: dict[tuple, GeneratedModel] = {}
    for cls in _congruences(N, J):
        k = max(cls) + 1
        rep = [cls.index(c) for c in range(k)]
        table = tuple(tuple(cls[J[rep[a]][rep[b]]] for b in range(k)) for a in range(k))
        Q = FiniteJoinStructure(tuple(str(a) for a in range(k)), cls[0], cls[top], table, frozenset())
        gens = tuple(cls[1 << g] for g in range(n))
        for S in _contact_candidates(Q, kind):
            if not _accepts(S, kind):
                continue
            best = None
            for o in _labelings(S):
                pos = {old: new for new, old in enumerate(o)}
                cand = (_encode(S, o), tuple(pos[g] for g in gens), o)
                if best is None or cand[:2] < best[:2]:
                    best = cand
            code, vals, order = best
            key = (len(S), code, vals)
            if key not in models:
                models[key] = GeneratedModel(key, _relabel(S, order), vals)
    out = [models[k] for k in sorted(models)]
    _GENERATED[cache_key] = out
    return out


# ---------------------------------------------------------------------------
# deciding


@dataclass
class Counterexample:
    structure: FiniteJoinStructure
    valuation: dict[str, str]

    def to_dict(self) -> dict:
        d = self.structure.to_dict()
        d["valuation"] = dict(self.valuation)
        return d


@dataclass
class DecisionResult:
    verdict: str  # "valid", "invalid" or "inconclusive"
    counterexample: Counterexample | None = None
    structures_examined: int = 0
    work: int = 0
    mode: str = ""
    bound: int = 0
    note: str = ""
    stats: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.verdict == "valid"


def _as_formula(phi: Formula | str) -> Formula:
    return parse_formula(phi) if isinstance(phi, str) else phi


def decide(phi: Formula | str, mode: str = "auto", kind: str = "cjs",
           max_reference_size: int = 7, max_work: int | None = None) -> DecisionResult:
    """Decide whether ``phi`` holds in every structure of ``kind`` (default: every CJS).

    Caps never produce a verdict: exceeding ``max_reference_size`` in
    reference mode or ``max_work`` evaluations yields ``inconclusive``.
    """
    f = _as_formula(phi)
    names = variables(f)
    n = len(names)
    bound = 2 ** n + 1
    if mode == "auto":
        mode = "reference" if bound <= max_reference_size else "generated"
    g = compile_formula(f, names)
    res = DecisionResult("valid", mode=mode, bound=bound)
    if mode == "reference":
        if bound > max_reference_size:
            res.verdict = "inconclusive"
            res.note = f"size bound {bound} exceeds reference cap {max_reference_size}"
            return res
        for S in enumerate_structures(bound, kind):
            res.structures_examined += 1
            for vals in product(range(len(S)), repeat=n):
                res.work += 1
                if max_work is not None and res.work > max_work:
                    res.verdict, res.note = "inconclusive", f"work cap {max_work} reached"
                    return res
                if not g(S, vals):
                    res.verdict = "invalid"
                    res.counterexample = Counterexample(S, {x: S.elements[v] for x, v in zip(names, vals)})
                    return res
        return res
    if mode == "generated":
        for M in generated_models(n, kind):
            res.structures_examined += 1
            res.work += 1
            if max_work is not None and res.work > max_work:
                res.verdict, res.note = "inconclusive", f"work cap {max_work} reached"
                return res
            if not g(M.structure, M.values):
                res.verdict = "invalid"
                S = M.structure
                res.counterexample = Counterexample(S, {x: S.elements[v] for x, v in zip(names, M.values)})
                return res
        return res
    raise ValueError(f"unknown mode {mode!r}")


def decide_restricted_dcjs(phi: Formula | str, mode: str = "auto", **kw) -> DecisionResult:
    """The same search over DCJS only; kept for cross-checking :func:`decide`."""
    return decide(phi, mode=mode, kind="dcjs", **kw)


# ---------------------------------------------------------------------------
# formula corpora


AXIOMS = {
    "order-reflexive": "x <= x",
    "order-antisymmetric": "x <= y & y <= x -> x = y",
    "order-transitive": "x <= y & y <= z -> x <= z",
    "join-commutative": "x + y = y + x",
    "join-upper-bound": "x <= x + y",
    "join-least": "x <= z & y <= z -> x + y <= z",
    "bottom": "0 <= x",
    "top": "x <= 1",
    "no-zero-contact": "x C y -> ~(x = 0)",
    "symmetry": "x C y -> y C x",
    "join-distribution": "x C (y + z) -> x C y | x C z",
    "monotonicity": "x C y & y <= z -> x C z",
    "reflexivity": "~(x = 0) -> x C x",
}


def small_terms(names: Sequence[str]) -> list:
    base = [Zero(), One()] + [Var(x) for x in names]
    joins = [Join(Var(a), Var(b)) for i, a in enumerate(names) for b in names[i + 1:]]
    return base + joins


def small_corpus(names: Sequence[str] = ("x", "y")) -> list[Formula]:
    """Every atom over small terms, its negation, and implications between variable atoms."""
    terms = small_terms(names)
    atoms = [Atom(a, r, b) for a in terms for r in ("<=", "C", "=") for b in terms]
    vterms = [t for t in terms if not isinstance(t, (Zero, One))]
    vatoms = [Atom(a, r, b) for a in vterms for r in ("<=", "C") for b in vterms if a != b]
    out = list(atoms) + [Not(a) for a in atoms]
    out += [Implies(p, q) for p in vatoms for q in vatoms if p != q]
    return out


def random_term(rng: random.Random, names: Sequence[str], depth: int):
    if depth <= 0 or rng.random() < 0.4:
        r = rng.random()
        if r < 0.1:
            return Zero()
        if r < 0.2:
            return One()
        return Var(rng.choice(list(names)))
    return Join(random_term(rng, names, depth - 1), random_term(rng, names, depth - 1))


def random_formula(rng: random.Random, names: Sequence[str] = ("x", "y"), depth: int = 3) -> Formula:
    if depth <= 0 or rng.random() < 0.3:
        return Atom(random_term(rng, names, 2), rng.choice(("<=", "C", "C", "=")), random_term(rng, names, 2))
    op = rng.choice((Not, And, Or, Implies, Implies, Iff))
    if op is Not:
        return Not(random_formula(rng, names, depth - 1))
    return op(random_formula(rng, names, depth - 1), random_formula(rng, names, depth - 1))
