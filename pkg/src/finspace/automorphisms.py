"""Automorphism search for finite posets.

The enumerator is exact: point classes produced by iterated neighborhood
refinement only prune the backtracking, they never decide membership.
Every permutation that comes out is re-checked against the full cover
set, and a brute-force filter over all permutations doubles as an
independent oracle for small inputs.

Also here: beat points, iterated beat-point removal (the core), and the
self-equivalence group represented as the automorphisms of the core.
"""

from __future__ import annotations

import os
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import permutations as all_permutations
from typing import NamedTuple

from .poset import Poset, PosetError, iter_bits

Permutation = tuple[int, ...]


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Apply q first, then p."""
    return tuple(p[q[i]] for i in range(len(q)))


def invert(p: Permutation) -> Permutation:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def perm_order(p: Permutation) -> int:
    ident = tuple(range(len(p)))
    k, q = 1, p
    while q != ident:
        q = compose(q, p)
        k += 1
    return k


class PermSet:
    """Explicit sorted set of permutations in image-array form."""

    def __init__(self, perms):
        self.perms: list[Permutation] = sorted({tuple(p) for p in perms})
        if self.perms:
            width = len(self.perms[0])
            if any(len(p) != width for p in self.perms):
                raise ValueError("permutations of mixed degree")

    def __len__(self) -> int:
        return len(self.perms)

    def __iter__(self):
        return iter(self.perms)

    def __contains__(self, p) -> bool:
        return tuple(p) in set(self.perms)

    def __eq__(self, other) -> bool:
        return isinstance(other, PermSet) and self.perms == other.perms

    def __repr__(self) -> str:
        return f"PermSet(order={len(self.perms)})"

    def degree(self) -> int:
        return len(self.perms[0]) if self.perms else 0

    def is_group(self) -> bool:
        if not self.perms:
            return False
        members = set(self.perms)
        ident = tuple(range(self.degree()))
        if ident not in members:
            return False
        for p in self.perms:
            if invert(p) not in members:
                return False
            for q in self.perms:
                if compose(p, q) not in members:
                    return False
        return True

    def require_group(self) -> "PermSet":
        if not self.is_group():
            raise PosetError("internal: enumerated permutations do not form a group")
        return self

    def element_order_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(perm_order(p) for p in self.perms).items()))

    def to_dict(self) -> dict:
        return {
            "order": len(self.perms),
            "element_order_histogram": {str(k): v for k, v in
                                        self.element_order_histogram().items()},
            "perms": [list(p) for p in self.perms],
        }


def is_poset_automorphism(poset: Poset, perm) -> bool:
    """Bijection sending every cover to a cover; by counting, such a map
    is automatically an order automorphism."""
    n = len(poset)
    perm = tuple(perm)
    if len(perm) != n or sorted(perm) != list(range(n)):
        return False
    coverset = frozenset(poset.covers)
    return all((perm[a], perm[b]) in coverset for a, b in poset.covers)


# -- invariant refinement -----------------------------------------------------

class Signature(NamedTuple):
    down_size: int    # size of the point's minimal open set
    up_size: int      # size of the point's closure
    height: int
    class_id: int


def _normalize(keys) -> list[int]:
    ids = {key: i for i, key in enumerate(sorted(set(keys)))}
    return [ids[key] for key in keys]


def signatures(poset: Poset) -> list[Signature]:
    """Seed every point with (|open set|, |closure|, height), then refine
    by the multisets of neighbor classes among upper and lower covers
    until the partition stops splitting.  Automorphisms preserve all of
    these, so equal signatures are a sound pruning relation (classes may
    still be coarser than orbits)."""
    n = len(poset)
    base = [(len(poset.down_set(x)), len(poset.up_set(x)), poset.height_of_point(x))
            for x in range(n)]
    colors = _normalize(base)
    while True:
        keys = [
            (colors[x],
             tuple(sorted(colors[z] for z in poset.upper_covers(x))),
             tuple(sorted(colors[z] for z in poset.lower_covers(x))))
            for x in range(n)
        ]
        fresh = _normalize(keys)
        if len(set(fresh)) == len(set(colors)):
            colors = fresh
            break
        colors = fresh
    return [Signature(base[x][0], base[x][1], base[x][2], colors[x]) for x in range(n)]


# -- exhaustive enumeration ---------------------------------------------------

@dataclass(frozen=True)
class _SearchState:
    n: int
    order: tuple[int, ...]
    cons: tuple[tuple[tuple[int, bool], ...], ...]
    class_of: tuple[int, ...]
    class_mask: dict
    up_mask: tuple[int, ...]
    down_mask: tuple[int, ...]
    covers: tuple[tuple[int, int], ...]
    coverset: frozenset


def _search_order(poset: Poset, class_of) -> tuple[int, ...]:
    """Visit points breadth-first from the most constrained class, so
    almost every point is placed while at least one neighbor is already
    mapped.  Falls back to fresh seeds for disconnected remainders."""
    n = len(poset)
    size = Counter(class_of)

    def key(x):
        return (size[class_of[x]], x)

    neighbors = [sorted(set(poset.lower_covers(x)) | set(poset.upper_covers(x)), key=key)
                 for x in range(n)]
    seen = [False] * n
    order: list[int] = []
    for seed in sorted(range(n), key=key):
        if seen[seed]:
            continue
        seen[seed] = True
        queue = deque([seed])
        while queue:
            x = queue.popleft()
            order.append(x)
            for z in neighbors[x]:
                if not seen[z]:
                    seen[z] = True
                    queue.append(z)
    return tuple(order)


def _prepare(poset: Poset) -> _SearchState:
    n = len(poset)
    class_of = tuple(s.class_id for s in signatures(poset))
    class_mask: dict[int, int] = {}
    for x, c in enumerate(class_of):
        class_mask[c] = class_mask.get(c, 0) | (1 << x)
    up_mask = [0] * n
    down_mask = [0] * n
    for lo, hi in poset.covers:
        up_mask[lo] |= 1 << hi
        down_mask[hi] |= 1 << lo
    order = _search_order(poset, class_of)
    pos_of = {x: p for p, x in enumerate(order)}
    cons = []
    for p, x in enumerate(order):
        rules = [(z, True) for z in poset.lower_covers(x) if pos_of[z] < p]
        rules += [(z, False) for z in poset.upper_covers(x) if pos_of[z] < p]
        cons.append(tuple(rules))
    return _SearchState(n=n, order=order, cons=tuple(cons), class_of=class_of,
                        class_mask=class_mask, up_mask=tuple(up_mask),
                        down_mask=tuple(down_mask), covers=poset.covers,
                        coverset=frozenset(poset.covers))


def _run_search(state: _SearchState, forced: int | None = None) -> list[Permutation]:
    n = state.n
    if n == 0:
        return [()]
    order, cons = state.order, state.cons
    class_mask, class_of = state.class_mask, state.class_of
    up_mask, down_mask = state.up_mask, state.down_mask
    f = [-1] * n
    used = 0
    results: list[Permutation] = []

    def candidates(pos: int) -> int:
        x = order[pos]
        mask = class_mask[class_of[x]] & ~used
        for z, z_below in cons[pos]:
            mask &= up_mask[f[z]] if z_below else down_mask[f[z]]
        return mask

    masks = [0] * n
    depth = 0
    masks[0] = candidates(0)
    if forced is not None:
        masks[0] &= 1 << forced
    while depth >= 0:
        mask = masks[depth]
        if mask == 0:
            depth -= 1
            if depth >= 0:
                x = order[depth]
                used ^= 1 << f[x]
                f[x] = -1
            continue
        low = mask & -mask
        masks[depth] = mask ^ low
        y = low.bit_length() - 1
        x = order[depth]
        f[x] = y
        used |= low
        if depth + 1 == n:
            perm = tuple(f)
            if all((perm[a], perm[b]) in state.coverset for a, b in state.covers):
                results.append(perm)
            f[x] = -1
            used ^= low
        else:
            depth += 1
            masks[depth] = candidates(depth)
    return results


def _branch_worker(payload) -> list[Permutation]:
    points, covers, forced = payload
    poset = Poset(points, covers)
    return _run_search(_prepare(poset), forced=forced)


def _worker_count(explicit: int | None) -> int:
    if explicit is not None:
        return max(1, int(explicit))
    env = os.environ.get("REALIZE_THREADS", "")
    if not env:
        return 1
    return max(1, int(env))


def enumerate_automorphisms(poset: Poset, workers: int | None = None) -> PermSet:
    """All order automorphisms, by class-pruned backtracking.

    Output is sorted and checked to satisfy the group axioms.  With more
    than one worker (argument or REALIZE_THREADS), the choices for the
    first search point are split across processes; results are merged
    and sorted, so the answer is identical to a single-threaded run."""
    if len(poset) == 0:
        return PermSet([()])
    state = _prepare(poset)
    first = state.order[0]
    top_level = list(iter_bits(state.class_mask[state.class_of[first]]))
    w = min(_worker_count(workers), len(top_level))
    if w > 1:
        payloads = [(list(poset.points), [list(c) for c in poset.covers], cand)
                    for cand in top_level]
        perms: list[Permutation] = []
        with ProcessPoolExecutor(max_workers=w) as pool:
            for chunk in pool.map(_branch_worker, payloads):
                perms.extend(chunk)
    else:
        perms = _run_search(state)
    return PermSet(perms).require_group()


def automorphisms_naive(poset: Poset) -> PermSet:
    """Brute-force oracle: filter every permutation of the points by
    cover preservation.  Only for tiny inputs."""
    n = len(poset)
    if n > 10:
        raise PosetError("brute-force automorphism search is limited to 10 points")
    coverset = frozenset(poset.covers)
    found = [p for p in all_permutations(range(n))
             if all((p[a], p[b]) in coverset for a, b in poset.covers)]
    return PermSet(found).require_group()


# -- beat points and cores ----------------------------------------------------

def beat_points(poset: Poset) -> list[tuple[int, str]]:
    """Points whose deleted open set has a maximum ("down") or whose
    deleted closure has a minimum ("up").  Distinct lower covers of a
    point are incomparable, so the deleted open set has a maximum exactly
    when there is a single lower cover; dually for upper covers."""
    out = []
    for x in range(len(poset)):
        if len(poset.lower_covers(x)) == 1:
            out.append((x, "down"))
        if len(poset.upper_covers(x)) == 1:
            out.append((x, "up"))
    return out


def core(poset: Poset) -> tuple[Poset, tuple[tuple[str, str], ...]]:
    """Remove beat points one at a time (lowest index first) until none
    remain.  Returns the minimal subposet and the removal trace as
    (label, kind) pairs."""
    trace: list[tuple[str, str]] = []
    current = poset
    while True:
        bps = beat_points(current)
        if not bps:
            return current, tuple(trace)
        idx, kind = bps[0]
        trace.append((current.points[idx], kind))
        current = current.induced_subposet(
            [x for x in range(len(current)) if x != idx])


def self_equivalences(poset: Poset, workers: int | None = None) -> PermSet:
    """The self-equivalence group, represented as the automorphisms of
    the core.  On a minimal poset this is literally the automorphism
    group; in general it rests on the classical beat-point theory."""
    minimal, _ = core(poset)
    return enumerate_automorphisms(minimal, workers)


# -- random instances ---------------------------------------------------------

def random_poset(rng, max_points: int = 8) -> Poset:
    """Small random poset from random strict-order assertions; used by
    the oracle-equivalence suite."""
    n = rng.randint(1, max_points)
    density = rng.choice((0.1, 0.25, 0.4))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < density]
    return Poset.from_relation([f"p{i}" for i in range(n)], pairs)
