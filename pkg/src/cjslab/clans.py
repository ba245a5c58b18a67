"""Presentations, the choice schemas A1 and A, clans, ideals and abstract points.

Everything here works on bitmasks over element indices; public functions take
and return element names.  In a finite join-semilattice every ideal is
principal, so a set satisfying the clan conditions 1, 2, 3 and 5 is exactly
the complement of a down-set ``(m]`` with ``m != 1``; the clan and
abstract-point enumerations use this directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .structures import ConstructionError, FiniteJoinStructure, PreconditionError, check_contact_axioms


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _mask(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << i
    return m


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class Presentation:
    target: str
    summands: frozenset[str]


def _presentation_masks(S: FiniteJoinStructure, s: int) -> list[int]:
    if s == S.zero:
        return [1 << S.zero]
    below = [c for c in range(len(S)) if c != S.zero and S.leq[c][s]]
    out = []
    for bits in range(1, 1 << len(below)):
        chosen = [below[k] for k in range(len(below)) if bits >> k & 1]
        if S.join_all(chosen) == s:
            out.append(_mask(chosen))
    return out


def presentations(S: FiniteJoinStructure, s: str) -> list[Presentation]:
    """All ways of writing ``s`` as a join of nonzero elements (``{0}`` for zero)."""
    masks = _presentation_masks(S, S.idx(s))
    masks.sort(key=lambda m: (bin(m).count("1"), _bits(m)))
    return [Presentation(s, frozenset(S.elements[i] for i in _bits(m))) for m in masks]


def minimal_presentations(S: FiniteJoinStructure, s: int) -> tuple[int, ...]:
    """Inclusion-minimal presentations of ``s`` as bitmasks.

    Any choice hitting these hits every presentation, since each presentation
    contains a minimal one.
    """
    cache = S.__dict__.setdefault("_minpres", {})
    if s in cache:
        return cache[s]
    if s == S.zero:
        cache[s] = (1 << S.zero,)
        return cache[s]
    below = [c for c in range(len(S)) if c != S.zero and S.leq[c][s]]
    found: list[int] = []

    def go(start: int, chosen: list[int], acc: int) -> None:
        for k in range(start, len(below)):
            c = below[k]
            if any(S.leq[c][d] or S.leq[d][c] for d in chosen):
                continue
            nxt = S.join[acc][c]
            if nxt == acc:
                continue
            chosen.append(c)
            if nxt == s:
                found.append(list(chosen))
            else:
                go(k + 1, chosen, nxt)
            chosen.pop()

    go(0, [], S.zero)
    minimal = []
    for p in found:
        if all(S.join_all(q for q in p if q != r) != s for r in p):
            minimal.append(_mask(p))
    cache[s] = tuple(sorted(set(minimal)))
    return cache[s]


# ---------------------------------------------------------------------------
# choice systems


def _hitting_clique(S: FiniteJoinStructure, sets: Iterable[int], allowed: int) -> int | None:
    """Find Q, pairwise in contact (self-contact included), meeting every set.

    Only elements of ``allowed`` may be chosen.  Exhaustive backtracking,
    branching on the unhit set with the fewest viable candidates.
    """
    cm = S.contact_mask
    for i in _bits(allowed):
        if not cm[i] >> i & 1:
            allowed &= ~(1 << i)
    todo = sorted(set(sets), key=lambda m: bin(m).count("1"))

    def go(chosen: int, compat: int) -> int | None:
        best = None
        best_opts = 0
        for m in todo:
            if m & chosen:
                continue
            opts = m & compat
            if not opts:
                return None
            if best is None or bin(opts).count("1") < bin(best_opts).count("1"):
                best, best_opts = m, opts
                if best_opts & (best_opts - 1) == 0:
                    break
        if best is None:
            return chosen
        for c in _bits(best_opts):
            r = go(chosen | (1 << c), compat & cm[c])
            if r is not None:
                return r
        return None

    return go(0, allowed)


def _system_for(S: FiniteJoinStructure, tops: int) -> list[int]:
    sets = []
    for s in _bits(tops):
        sets.extend(minimal_presentations(S, s))
    return sets


def solve_choice_system(S: FiniteJoinStructure, groups: Sequence[Presentation],
                        not_below: str | None = None) -> list[str] | None:
    """Pick one summand from every presentation so that all picks touch.

    Chosen elements must be pairwise in contact, each with itself as well;
    with ``not_below=u`` every pick must also satisfy ``pick ≰ u``.  Returns
    the picks aligned with ``groups``, or None when no choice exists.
    """
    n = len(S)
    allowed = (1 << n) - 1
    if not_below is not None:
        u = S.idx(not_below)
        allowed &= ~S.down_mask[u]
    sets = [_mask(S.idx(x) for x in g.summands) for g in groups]
    q = _hitting_clique(S, sets, allowed)
    if q is None:
        return None
    return [S.elements[min(_bits(m & q))] for m in sets]


def _require_base(S: FiniteJoinStructure) -> None:
    r = check_contact_axioms(S, ("no-zero-contact", "symmetry"))
    if not r.ok:
        raise PreconditionError(f"contact must avoid 0 and be symmetric: {r.witnesses}")


def schema_A1_holds_for(S: FiniteJoinStructure, x: str, y: str) -> bool:
    """The full choice system of A^1 for one contact pair (x, y)."""
    xi, yi = S.idx(x), S.idx(y)
    return _a1_pair(S, xi, yi)


def _a1_pair(S, x, y) -> bool:
    tops = S.up_mask[x] | S.up_mask[y]
    return _hitting_clique(S, _system_for(S, tops), (1 << len(S)) - 1) is not None


def _a_pair(S, t, u) -> bool:
    allowed = ((1 << len(S)) - 1) & ~S.down_mask[u]
    return _hitting_clique(S, _system_for(S, S.up_mask[t]), allowed) is not None


def schema_A_holds_for(S: FiniteJoinStructure, t: str, u: str) -> bool:
    return _a_pair(S, S.idx(t), S.idx(u))


def check_schema_A1(S: FiniteJoinStructure) -> tuple[str, str] | None:
    """Decide the whole schema family A1 by one maximal choice system per contact pair.

    Returns the first contact pair whose system is unsatisfiable.
    """
    _require_base(S)
    n = len(S)
    for x in range(n):
        for y in range(x, n):
            if S.contact_matrix[x][y] and not _a1_pair(S, x, y):
                return S.elements[x], S.elements[y]
    return None


def check_schema_A(S: FiniteJoinStructure) -> tuple[str, str] | None:
    _require_base(S)
    n = len(S)
    for t in range(n):
        for u in range(n):
            if not S.leq[t][u] and not _a_pair(S, t, u):
                return S.elements[t], S.elements[u]
    return None


# ---------------------------------------------------------------------------
# region sets


KINDS = ("abstract-point", "clan", "prime-ideal", "ideal", "dual-ideal")


@dataclass(frozen=True)
class RegionSet:
    members: frozenset[str]
    kinds: frozenset[str] = frozenset()

    @property
    def kind(self) -> str:
        for k in KINDS:
            if k in self.kinds:
                return k
        return "unclassified"

    def __contains__(self, x: str) -> bool:
        return x in self.members

    def sorted_members(self, S: FiniteJoinStructure) -> list[str]:
        return sorted(self.members, key=S.idx)

    def to_dict(self, S: FiniteJoinStructure) -> dict:
        return {"kind": self.kind, "members": self.sorted_members(S)}


def _is_ideal(S, m: int) -> bool:
    if not m:
        return False
    n = len(S)
    for a in range(n):
        for b in range(n):
            if bool(m >> S.join[a][b] & 1) != bool(m >> a & 1 and m >> b & 1):
                return False
    return True


def _is_up_closed(S, m: int) -> bool:
    return all(S.up_mask[a] & ~m == 0 for a in _bits(m))


def _has_lower_bounds(S, m: int) -> bool:
    """a, b in m imply some d in m below both."""
    mem = _bits(m)
    return all(S.down_mask[a] & S.down_mask[b] & m for a in mem for b in mem)


def _is_dual_ideal(S, m: int) -> bool:
    return _is_up_closed(S, m) and _has_lower_bounds(S, m)


def _is_prime_ideal(S, m: int) -> bool:
    full = (1 << len(S)) - 1
    return _is_ideal(S, m) and m != full and _is_dual_ideal(S, full & ~m)


def _prime_upset(S, m: int) -> bool:
    """Clan conditions 1, 2, 3 and 5."""
    if not (m >> S.one & 1) or m >> S.zero & 1 or not _is_up_closed(S, m):
        return False
    n = len(S)
    return all(not (m >> S.join[a][b] & 1) or m >> a & 1 or m >> b & 1
               for a in range(n) for b in range(n))


def _pairwise_contact(S, m: int) -> bool:
    cm = S.contact_mask
    return all(cm[a] & m == m for a in _bits(m))


def _is_clan(S, m: int) -> bool:
    return _prime_upset(S, m) and _pairwise_contact(S, m)


def _is_abstract_point(S, m: int) -> bool:
    return _prime_upset(S, m) and _has_lower_bounds(S, m)


_TESTS = {
    "ideal": _is_ideal,
    "dual-ideal": _is_dual_ideal,
    "prime-ideal": _is_prime_ideal,
    "clan": _is_clan,
    "abstract-point": _is_abstract_point,
}


def _region(S, m: int, kinds: Iterable[str] | None = None) -> RegionSet:
    if kinds is None:
        kinds = [k for k, f in _TESTS.items() if f(S, m)]
    return RegionSet(frozenset(S.elements[i] for i in _bits(m)), frozenset(kinds))


def _mask_of(S, names: Iterable[str] | RegionSet) -> int:
    if isinstance(names, RegionSet):
        names = names.members
    return _mask(S.idx(x) for x in names)


def classify_subset(S: FiniteJoinStructure, A: Iterable[str]) -> RegionSet:
    return _region(S, _mask_of(S, A))


def is_clan(S: FiniteJoinStructure, A: Iterable[str] | RegionSet) -> bool:
    return _is_clan(S, _mask_of(S, A))


def is_abstract_point(S: FiniteJoinStructure, A: Iterable[str] | RegionSet) -> bool:
    return _is_abstract_point(S, _mask_of(S, A))


def _canonical(S, masks: Iterable[int]) -> list[int]:
    return sorted(set(masks), key=_bits)


def _complements_of_principal_ideals(S) -> list[int]:
    full = (1 << len(S)) - 1
    return [full & ~S.down_mask[m] for m in range(len(S)) if m != S.one]


def enumerate_clans(S: FiniteJoinStructure) -> list[RegionSet]:
    masks = [m for m in _complements_of_principal_ideals(S) if _pairwise_contact(S, m)]
    return [_region(S, m) for m in _canonical(S, masks)]


def enumerate_abstract_points(S: FiniteJoinStructure) -> list[RegionSet]:
    masks = [m for m in _complements_of_principal_ideals(S) if _has_lower_bounds(S, m)]
    return [_region(S, m) for m in _canonical(S, masks)]


def enumerate_prime_ideals(S: FiniteJoinStructure) -> list[RegionSet]:
    masks = [S.down_mask[m] for m in range(len(S)) if _is_prime_ideal(S, S.down_mask[m])]
    return [_region(S, m) for m in _canonical(S, masks)]


# ---------------------------------------------------------------------------
# existence results, made constructive


def _star(S, P: int, not_below: int | None) -> bool:
    """Every presentation of every member admits a touching choice."""
    allowed = (1 << len(S)) - 1
    if not_below is not None:
        allowed &= ~S.down_mask[not_below]
    return _hitting_clique(S, _system_for(S, P), allowed) is not None


def _grow(S, P: int, not_below: int | None) -> int:
    # extend along split joins until condition 5 holds; one side always works in a CJS
    n = len(S)
    while True:
        split = None
        for z in _bits(P):
            for a in range(n):
                for b in range(n):
                    if S.join[a][b] == z and not (P >> a & 1) and not (P >> b & 1):
                        split = (a, b)
                        break
                if split:
                    break
            if split:
                break
        if split is None:
            return P
        for side in split:
            cand = P | S.up_mask[side]
            if _star(S, cand, not_below):
                P = cand
                break
        else:
            raise ConstructionError("neither side of a split join extends the set; schemas fail")


def find_clan(S: FiniteJoinStructure, contains: tuple[str, str] | None = None,
              separates: tuple[str, str] | None = None, strategy: str = "greedy") -> RegionSet:
    """A clan holding both of ``contains``, or holding t but not u for ``separates=(t, u)``.

    ``greedy`` starts from the upward closure of the seeds and adds principal
    filters while the choice property survives, which is the finite
    counterpart of taking a maximal element.  ``search`` filters the full
    clan enumeration.
    """
    if (contains is None) == (separates is None):
        raise ValueError("give exactly one of contains / separates")
    if contains is not None:
        t, t1 = (S.idx(x) for x in contains)
        if not S.contact_matrix[t][t1]:
            raise PreconditionError(f"{contains[0]} and {contains[1]} are not in contact")
        seed, nb = S.up_mask[t] | S.up_mask[t1], None
        want_in, want_out = (1 << t) | (1 << t1), 0
    else:
        t, u = (S.idx(x) for x in separates)
        if S.leq[t][u]:
            raise PreconditionError(f"{separates[0]} <= {separates[1]}; no clan separates them")
        seed, nb = S.up_mask[t], u
        want_in, want_out = 1 << t, 1 << u
    if strategy == "search":
        for c in enumerate_clans(S):
            m = _mask_of(S, c)
            if m & want_in == want_in and not m & want_out:
                return c
        raise ConstructionError("no clan meets the goal")
    if strategy != "greedy":
        raise ValueError(f"unknown strategy {strategy!r}")
    if not _star(S, seed, nb):
        raise ConstructionError("seed set has no touching choice; schemas fail")
    P = _grow(S, seed, nb)
    if not _is_clan(S, P):
        raise ConstructionError("greedy extension did not reach a clan")
    return _region(S, P)


def _ideal_disjoint(S, ideal_top: int, F: int) -> bool:
    return not S.down_mask[ideal_top] & F


def separating_prime_ideal(S: FiniteJoinStructure, I: Iterable[str] | RegionSet,
                           F: Iterable[str] | RegionSet) -> RegionSet | None:
    """A prime ideal containing ``I`` and missing the dual ideal ``F``.

    Grows ``I`` greedily into a maximal ideal disjoint from ``F`` (prime
    whenever (ad) holds), then falls back to exhaustive search.  None means
    no such ideal exists, which needs a non-distributive structure.
    """
    Im, Fm = _mask_of(S, I), _mask_of(S, F)
    if not _is_ideal(S, Im):
        raise PreconditionError("I is not an ideal")
    if not Fm or not _is_dual_ideal(S, Fm):
        raise PreconditionError("F is not a nonvoid dual ideal")
    if Im & Fm:
        raise PreconditionError("I and F intersect")
    top = S.join_all(_bits(Im))
    for z in range(len(S)):
        if Fm >> z & 1 or S.down_mask[top] >> z & 1:
            continue
        cand = S.join[top][z]
        if _ideal_disjoint(S, cand, Fm):
            top = cand
    if _is_prime_ideal(S, S.down_mask[top]):
        return _region(S, S.down_mask[top])
    for m in range(len(S)):
        P = S.down_mask[m]
        if P & Im == Im and not P & Fm and _is_prime_ideal(S, P):
            return _region(S, P)
    return None


def point_inside_clan(S: FiniteJoinStructure, clan: Iterable[str] | RegionSet, a: str) -> RegionSet:
    G = _mask_of(S, clan)
    ai = S.idx(a)
    if not _is_clan(S, G):
        raise PreconditionError("not a clan")
    if not G >> ai & 1:
        raise PreconditionError(f"{a} is not in the clan")
    full = (1 << len(S)) - 1
    I = [S.elements[i] for i in _bits(full & ~G)]
    F = [S.elements[i] for i in _bits(S.up_mask[ai])]
    P = separating_prime_ideal(S, I, F)
    if P is None:
        raise ConstructionError(f"no prime ideal separates the clan complement from [{a})")
    U = full & ~_mask_of(S, P)
    if not _is_abstract_point(S, U) or U & ~G or not U >> ai & 1:
        raise ConstructionError("complement of the prime ideal is not a point inside the clan")
    return _region(S, U)


def clan_decomposition(S: FiniteJoinStructure, clan: Iterable[str] | RegionSet) -> list[RegionSet]:
    """Abstract points covering the clan, every two of them mutually in contact."""
    G = _mask_of(S, clan)
    pts = {}
    for a in _bits(G):
        U = point_inside_clan(S, clan, S.elements[a])
        pts[_mask_of(S, U)] = U
    if _mask(i for m in pts for i in _bits(m)) != G:
        raise ConstructionError("points do not cover the clan")
    return [pts[m] for m in _canonical(S, pts)]


# ---------------------------------------------------------------------------
# brute-force oracles (kept independent of the shortcuts above)


def raw_subsets(S: FiniteJoinStructure, predicate: str) -> list[RegionSet]:
    """Every subset of the carrier satisfying a literal definition, by enumeration."""
    test = {"clan": _literal_clan, "abstract-point": _literal_point}[predicate]
    n = len(S)
    out = []
    for m in range(1 << n):
        members = [i for i in range(n) if m >> i & 1]
        if test(S, set(members)):
            out.append(m)
    return [_region(S, m) for m in _canonical(S, out)]


def _literal_common(S, G: set[int]) -> bool:
    n = len(S)
    if S.one not in G or S.zero in G:
        return False
    if any(x in G and S.leq[x][y] and y not in G for x in range(n) for y in range(n)):
        return False
    return all(S.join[x][y] not in G or x in G or y in G for x in range(n) for y in range(n))


def _literal_clan(S, G):
    return _literal_common(S, G) and all(S.contact_matrix[x][y] for x in G for y in G)


def _literal_point(S, G):
    n = len(S)
    return _literal_common(S, G) and all(
        any(z in G and S.leq[z][x] and S.leq[z][y] for z in range(n)) for x in G for y in G)
