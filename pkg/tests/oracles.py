"""Brute-force reference implementations, deliberately independent of cjslab internals.

Only the raw tables of a structure (join, contact, order) are used here.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations, combinations_with_replacement, product


def _touch(S, picks) -> bool:
    C = S.contact_matrix
    return all(C[p][q] for p in picks for q in picks)


def _fold(S, items) -> int:
    acc = S.zero
    for x in items:
        acc = S.join[acc][x]
    return acc


# ---------------------------------------------------------------------------
# literal schema instances


def _padded_groups(S, lo: int, width: int) -> list[tuple[int, ...]]:
    """Every ``width``-tuple (0 and repeats allowed, sorted) joining to an upper bound of ``lo``."""
    n = len(S)
    return [tup for tup in combinations_with_replacement(range(n), width)
            if S.leq[lo][_fold(S, tup)]]


def _satisfiable(S, groups, allowed) -> bool:
    """One pick per group, picks pairwise (and self) in contact, all in ``allowed``.

    Plain DFS; the memo key is the set of picks so far, which is all the
    remaining constraints depend on.
    """
    groups = tuple(tuple(sorted(set(g))) for g in groups)

    @lru_cache(maxsize=None)
    def go(k: int, chosen: frozenset) -> bool:
        if k == len(groups):
            return True
        for p in groups[k]:
            if p in allowed and _touch(S, chosen | {p}):
                if go(k + 1, chosen | {p}):
                    return True
        return False

    return go(0, frozenset())


def literal_A1_instance_ok(S, x: int, y: int, width: int | None = None) -> bool:
    """The largest padded instance of A1 for the contact pair (x, y)."""
    width = len(S) if width is None else width
    groups = _padded_groups(S, x, width) + _padded_groups(S, y, width)
    return _satisfiable(S, groups, frozenset(range(len(S))))


def literal_A_instance_ok(S, t: int, u: int, width: int | None = None) -> bool:
    width = len(S) if width is None else width
    allowed = frozenset(p for p in range(len(S)) if not S.leq[p][u])
    return _satisfiable(S, _padded_groups(S, t, width), allowed)


def _small_A1(S, x: int, y: int) -> bool:
    n = len(S)
    pairs_x = [(a, b) for a, b in product(range(n), repeat=2) if S.leq[x][S.join[a][b]]]
    pairs_y = [(a, b) for a, b in product(range(n), repeat=2) if S.leq[y][S.join[a][b]]]
    # m = 1, i = 2
    for sx in pairs_x:
        for ty in pairs_y:
            if not any(_touch(S, (p, q)) for p in sx for q in ty):
                return False
    # m = 2, i = 1
    ups_x = [s for s in range(n) if S.leq[x][s]]
    ups_y = [t for t in range(n) if S.leq[y][t]]
    for s1, s2 in product(ups_x, repeat=2):
        for t1, t2 in product(ups_y, repeat=2):
            if not _touch(S, (s1, s2, t1, t2)):
                return False
    return True


def _small_A(S, t: int, u: int) -> bool:
    n = len(S)
    ok = [p for p in range(n) if not S.leq[p][u]]
    for a, b in product(range(n), repeat=2):
        if S.leq[t][S.join[a][b]] and not any(p in ok and _touch(S, (p,)) for p in (a, b)):
            return False
    ups = [s for s in range(n) if S.leq[t][s]]
    for s1, s2 in product(ups, repeat=2):
        if not (s1 in ok and s2 in ok and _touch(S, (s1, s2))):
            return False
    return True


def literal_schema_A1(S) -> bool:
    n = len(S)
    return all(_small_A1(S, x, y) and literal_A1_instance_ok(S, x, y)
               for x in range(n) for y in range(n) if S.contact_matrix[x][y])


def literal_schema_A(S) -> bool:
    n = len(S)
    return all(_small_A(S, t, u) and literal_A_instance_ok(S, t, u)
               for t in range(n) for u in range(n) if not S.leq[t][u])


# ---------------------------------------------------------------------------
# clans and friends, straight from the definitions


def literal_clans(S) -> list[frozenset[int]]:
    n = len(S)
    out = []
    for r in range(n + 1):
        for G in combinations(range(n), r):
            G = frozenset(G)
            if S.one not in G or S.zero in G:
                continue
            if any(S.leq[a][b] and b not in G for a in G for b in range(n)):
                continue
            if not _touch(S, G):
                continue
            if any(S.join[a][b] in G and a not in G and b not in G for a in range(n) for b in range(n)):
                continue
            out.append(G)
    return out


def clan_characterization(S) -> tuple[bool, bool]:
    """(every contact pair lies in a clan, every t not below u is split by a clan)."""
    clans = literal_clans(S)
    n = len(S)
    a1 = all(any(x in G and y in G for G in clans)
             for x in range(n) for y in range(n) if S.contact_matrix[x][y])
    a = all(any(t in G and u not in G for G in clans)
            for t in range(n) for u in range(n) if not S.leq[t][u])
    return a1, a


def brute_ad(S):
    n = len(S)
    for x in range(n):
        for a in range(n):
            for b in range(n):
                if S.leq[x][S.join[a][b]] and not any(
                        S.leq[a1][a] and S.leq[b1][b] and S.join[a1][b1] == x
                        for a1 in range(n) for b1 in range(n)):
                    return x, a, b
    return None


def brute_refinement(S, x: int, pres: list[list[int]]) -> bool:
    """Whether some set of elements joins to x with each member below a summand of every presentation."""
    n = len(S)
    good = [t for t in range(n)
            if all(any(S.leq[t][s] for s in p) for p in pres) and S.leq[t][x]]
    return _fold(S, good) == x

