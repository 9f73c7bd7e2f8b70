"""Exact minimum-cardinality hitting sets over collections of clause-id sets.

The optimum is computed by depth-first search with four exact reductions:
singleton sets force their element, disjoint groups of sets are solved
independently (their optima add), supersets of other members are dropped,
and a greedy disjoint-packing bound prunes branches.  Solved subproblems
are memoized on the instance, so the incremental use pattern — add one set,
re-solve — reuses earlier work.  Among equal-cardinality optima the solver
returns the lexicographically smallest by sorted element order, so repeated
runs are byte-for-byte reproducible.
"""

from __future__ import annotations

from typing import Callable, Iterable

Cancel = Callable[[], None]

SetsKey = tuple[tuple[int, ...], ...]


class HittingSetInstance:
    """Growing collection of nonempty element sets."""

    def __init__(self, sets: Iterable[Iterable[int]] = ()):
        self.universe: set[int] = set()
        self.sets: list[frozenset[int]] = []
        self._memo: dict[SetsKey, int] = {}
        for s in sets:
            self.add_set(s)

    def add_set(self, elements: Iterable[int]) -> None:
        fs = frozenset(elements)
        if not fs:
            raise ValueError("an empty set admits no hitting set")
        self.universe |= fs
        self.sets.append(fs)

    def __len__(self) -> int:
        return len(self.sets)


def _minimal_sets(sets: Iterable[frozenset[int]]) -> list[frozenset[int]]:
    """Drop supersets of other members; hitting sets are unchanged."""
    kept: list[frozenset[int]] = []
    for s in sorted(set(sets), key=lambda x: (len(x), sorted(x))):
        if not any(k <= s for k in kept):
            kept.append(s)
    return kept


def _components(sets: list[frozenset[int]]) -> list[list[frozenset[int]]]:
    """Group sets into element-connected components (union-find)."""
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s in sets:
        items = sorted(s)
        for e in items:
            parent.setdefault(e, e)
        for e in items[1:]:
            parent[find(items[0])] = find(e)
    groups: dict[int, list[frozenset[int]]] = {}
    for s in sets:
        groups.setdefault(find(next(iter(s))), []).append(s)
    return [groups[root] for root in sorted(groups)]


def _packing_bound(sets: list[frozenset[int]]) -> int:
    """Number of pairwise-disjoint sets found greedily (smallest first):
    each needs its own hitting element, so this lower-bounds the optimum."""
    used: set[int] = set()
    count = 0
    for s in sorted(sets, key=len):
        if not (s & used):
            count += 1
            used |= s
    return count


def _forced_units(sets: list[frozenset[int]]) -> tuple[set[int], list[frozenset[int]]]:
    """Elements of singleton sets belong to every hitting set.  Returns the
    forced elements and the sets still uncovered after taking them."""
    forced: set[int] = set()
    work = sets
    while True:
        units = {next(iter(s)) for s in work if len(s) == 1}
        if not units:
            return forced, work
        forced |= units
        work = [s for s in work if not (s & units)]


def _sets_key(sets: list[frozenset[int]]) -> SetsKey:
    return tuple(sorted(tuple(sorted(s)) for s in sets))


def _optimum(
    sets: list[frozenset[int]],
    memo: dict[SetsKey, int],
    cancel: Cancel | None,
) -> int:
    """Exact minimum hitting-set size for an arbitrary collection."""
    if not sets:
        return 0
    if cancel is not None:
        cancel()
    forced, rest = _forced_units(sets)
    if forced:
        return len(forced) + _optimum(rest, memo, cancel)
    components = _components(rest)
    if len(components) > 1:
        return sum(_optimum(c, memo, cancel) for c in components)
    key = _sets_key(rest)
    cached = memo.get(key)
    if cached is not None:
        return cached
    lower = _packing_bound(rest)
    occurrence: dict[int, int] = {}
    for s in rest:
        for e in s:
            occurrence[e] = occurrence.get(e, 0) + 1
    target = min(rest, key=lambda s: (len(s), sorted(s)))
    best = len(rest)  # one element per set always suffices
    for e in sorted(target, key=lambda x: (-occurrence[x], x)):
        value = 1 + _optimum([s for s in rest if e not in s], memo, cancel)
        if value < best:
            best = value
            if best == lower:
                break
    memo[key] = best
    return best


def _lex_reconstruct(
    sets: list[frozenset[int]],
    memo: dict[SetsKey, int],
    cancel: Cancel | None,
) -> list[int]:
    """Lexicographically smallest optimum: grow the answer in ascending
    element order, keeping each candidate that still allows an optimal
    completion of what remains."""
    chosen: list[int] = []
    remaining = sets
    need = _optimum(sets, memo, cancel)
    floor: int | None = None
    while remaining:
        candidates = sorted(
            e for e in set().union(*remaining) if floor is None or e > floor
        )
        for e in candidates:
            rest = [s for s in remaining if e not in s]
            if _optimum(rest, memo, cancel) == need - len(chosen) - 1:
                chosen.append(e)
                remaining = rest
                floor = e
                break
        else:  # pragma: no cover - the optimum guarantees progress
            raise AssertionError("lexicographic reconstruction failed")
    return chosen


def min_hitting_set(
    instance: HittingSetInstance, *, cancel: Cancel | None = None
) -> frozenset[int]:
    """Minimum-cardinality hitting set; lexicographically smallest optimum.

    The lexicographic order is over the sorted element tuples of the
    equal-size optima.  Deterministic for identical instances; `cancel`
    (a callable raising to abort) is polled between search nodes.
    """
    sets = _minimal_sets(instance.sets)
    if not sets:
        return frozenset()
    chosen: set[int] = set()
    forced, rest = _forced_units(sets)
    chosen |= forced
    for component in _components(rest):
        chosen.update(_lex_reconstruct(component, instance._memo, cancel))
    return frozenset(chosen)
