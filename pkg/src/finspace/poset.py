"""Finite posets stored as labelled points plus Hasse covers.

A finite T0 topology and a finite partial order carry the same data, so a
single immutable structure serves as the carrier for everything else in
this package: order queries, minimal open sets and closures, heights,
connectivity, fences, induced subposets, JSON and DOT output.

Order queries are answered from per-point reachability bitsets (one
Python int per point), which keeps the whole module dependency free and
fast enough for spaces well beyond the few hundred points we build.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from functools import cached_property


class PosetError(Exception):
    """A poset operation was asked of data that cannot support it."""


def iter_bits(mask: int):
    """Yield the set-bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Poset:
    """Immutable finite poset.

    ``points`` are opaque, pairwise distinct label strings.  ``covers``
    holds the Hasse diagram as ``(lower, upper)`` index pairs, kept
    sorted and deduplicated so that equal posets compare equal and all
    serialized output is canonical.

    Construction only checks index ranges; semantic problems (cycles,
    transitive covers, duplicate labels) are reported by ``validate`` so
    that malformed input can be diagnosed instead of half-rejected.
    """

    points: tuple[str, ...]
    covers: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pts = tuple(str(p) for p in self.points)
        n = len(pts)
        seen = set()
        for lo, hi in self.covers:
            lo, hi = int(lo), int(hi)
            if not (0 <= lo < n and 0 <= hi < n):
                raise PosetError(f"cover ({lo},{hi}) out of range for {n} points")
            seen.add((lo, hi))
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "covers", tuple(sorted(seen)))

    def __len__(self) -> int:
        return len(self.points)

    def _check(self, x: int) -> int:
        if not 0 <= x < len(self.points):
            raise PosetError(f"point index {x} out of range for {len(self.points)} points")
        return x

    # -- derived structure ------------------------------------------------

    @cached_property
    def _adj(self) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
        down = [[] for _ in self.points]
        up = [[] for _ in self.points]
        for lo, hi in self.covers:
            down[hi].append(lo)
            up[lo].append(hi)
        return (tuple(tuple(sorted(d)) for d in down),
                tuple(tuple(sorted(u)) for u in up))

    def lower_covers(self, x: int) -> tuple[int, ...]:
        return self._adj[0][self._check(x)]

    def upper_covers(self, x: int) -> tuple[int, ...]:
        return self._adj[1][self._check(x)]

    def _kahn(self) -> tuple[list[int], list[int] | None]:
        """Topological order of the cover digraph, or a witness cycle."""
        n = len(self.points)
        down, up = self._adj
        indeg = [len(down[x]) for x in range(n)]
        ready = [x for x in range(n) if indeg[x] == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            x = heapq.heappop(ready)
            order.append(x)
            for z in up[x]:
                indeg[z] -= 1
                if indeg[z] == 0:
                    heapq.heappush(ready, z)
        if len(order) == n:
            return order, None
        left = set(range(n)) - set(order)
        cur = min(left)
        path, pos = [cur], {cur: 0}
        while True:
            cur = min(z for z in down[cur] if z in left)
            if cur in pos:
                return order, path[pos[cur]:][::-1] + [cur]
            pos[cur] = len(path)
            path.append(cur)

    @cached_property
    def _topo(self) -> tuple[int, ...]:
        order, cycle = self._kahn()
        if cycle is not None:
            names = " < ".join(self.points[x] for x in cycle)
            raise PosetError(f"cover relation contains a cycle: {names}")
        return tuple(order)

    @cached_property
    def _below(self) -> tuple[int, ...]:
        """Per point x, the bitmask of {y : y <= x}."""
        down = self._adj[0]
        below = [0] * len(self.points)
        for x in self._topo:
            mask = 1 << x
            for z in down[x]:
                mask |= below[z]
            below[x] = mask
        return tuple(below)

    @cached_property
    def _above(self) -> tuple[int, ...]:
        """Per point x, the bitmask of {y : y >= x}."""
        up = self._adj[1]
        above = [0] * len(self.points)
        for x in reversed(self._topo):
            mask = 1 << x
            for z in up[x]:
                mask |= above[z]
            above[x] = mask
        return tuple(above)

    @cached_property
    def _heights(self) -> tuple[int, ...]:
        down = self._adj[0]
        ht = [0] * len(self.points)
        for x in self._topo:
            if down[x]:
                ht[x] = 1 + max(ht[z] for z in down[x])
        return tuple(ht)

    # -- validation --------------------------------------------------------

    def validate(self) -> str | None:
        """Return None if this is a well-formed Hasse diagram, else the
        first violation found: duplicate label, cycle, or a cover pair
        already implied by a longer path."""
        seen: dict[str, int] = {}
        for i, p in enumerate(self.points):
            if p in seen:
                return f"duplicate label {p!r} at indices {seen[p]} and {i}"
            seen[p] = i
        _, cycle = self._kahn()
        if cycle is not None:
            names = " < ".join(self.points[x] for x in cycle)
            return f"cycle in cover relation: {names}"
        down = self._adj[0]
        for lo, hi in self.covers:
            for z in down[hi]:
                if z != lo and self.leq(lo, z):
                    return (f"transitive cover ({self.points[lo]}, {self.points[hi]}) "
                            f"implied via {self.points[z]}")
        return None

    def require_valid(self) -> "Poset":
        msg = self.validate()
        if msg is not None:
            raise PosetError(msg)
        return self

    # -- order queries -----------------------------------------------------

    def leq(self, x: int, y: int) -> bool:
        self._check(x)
        self._check(y)
        return (self._below[y] >> x) & 1 == 1

    def down_set(self, x: int) -> list[int]:
        """The minimal open set of x: every y with y <= x, including x."""
        return list(iter_bits(self._below[self._check(x)]))

    def up_set(self, x: int) -> list[int]:
        """The closure of x: every y with y >= x, including x."""
        return list(iter_bits(self._above[self._check(x)]))

    def height_of_point(self, x: int) -> int:
        return self._heights[self._check(x)]

    def height(self) -> int:
        if not self.points:
            raise PosetError("height of an empty poset is undefined")
        return max(self._heights)

    def is_connected(self) -> bool:
        """Connectivity of the comparability graph."""
        n = len(self.points)
        if n == 0:
            raise PosetError("connectivity of an empty poset is undefined")
        down, up = self._adj
        seen = [False] * n
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            x = stack.pop()
            for z in down[x] + up[x]:
                if not seen[z]:
                    seen[z] = True
                    count += 1
                    stack.append(z)
        return count == n

    def is_fence(self, seq) -> bool:
        """True if consecutive entries of ``seq`` are comparable."""
        seq = [self._check(x) for x in seq]
        return all(self.leq(a, b) or self.leq(b, a) for a, b in zip(seq, seq[1:]))

    # -- constructions -----------------------------------------------------

    def induced_subposet(self, subset) -> "Poset":
        """Restrict the order to ``subset`` and recompute the covers.

        Covers are rebuilt from the restricted order, not inherited: when
        an intermediate point is dropped, a previously non-cover pair can
        become a cover.
        """
        keep = sorted({self._check(x) for x in subset})
        keep_mask = 0
        for x in keep:
            keep_mask |= 1 << x
        reindex = {x: i for i, x in enumerate(keep)}
        covers = []
        for a in keep:
            strict_above = self._above[a] & keep_mask & ~(1 << a)
            for b in iter_bits(strict_above):
                between = self._above[a] & self._below[b] & keep_mask
                between &= ~(1 << a) & ~(1 << b)
                if between == 0:
                    covers.append((reindex[a], reindex[b]))
        return Poset(tuple(self.points[x] for x in keep), covers)

    @classmethod
    def from_relation(cls, points, pairs) -> "Poset":
        """Build a poset from arbitrary strict-order assertions ``a < b``
        (given as index pairs), taking the transitive closure and then
        reducing to covers.  Raises if the assertions are cyclic."""
        n = len(points)
        succ = [0] * n
        for a, b in pairs:
            if not (0 <= a < n and 0 <= b < n):
                raise PosetError(f"relation pair ({a},{b}) out of range for {n} points")
            if a == b:
                raise PosetError(f"reflexive relation pair ({a},{a})")
            succ[a] |= 1 << b
        reach = list(succ)
        changed = True
        while changed:
            changed = False
            for x in range(n):
                mask = reach[x]
                for y in iter_bits(mask):
                    if reach[y] & ~mask:
                        mask |= reach[y]
                if mask != reach[x]:
                    reach[x] = mask
                    changed = True
        for x in range(n):
            if (reach[x] >> x) & 1:
                raise PosetError(f"relation contains a cycle through point {x}")
        covers = []
        for a in range(n):
            for b in iter_bits(reach[a]):
                between = False
                for z in iter_bits(reach[a]):
                    if z != b and (reach[z] >> b) & 1:
                        between = True
                        break
                if not between:
                    covers.append((a, b))
        return cls(tuple(str(p) for p in points), covers)

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {"points": list(self.points),
                "covers": [[lo, hi] for lo, hi in self.covers]}

    @classmethod
    def from_dict(cls, data) -> "Poset":
        if not isinstance(data, dict):
            raise PosetError("poset data must be a JSON object")
        points = data.get("points")
        covers = data.get("covers")
        if not isinstance(points, list) or not all(isinstance(p, str) for p in points):
            raise PosetError('poset data needs a "points" list of strings')
        if not isinstance(covers, list):
            raise PosetError('poset data needs a "covers" list of index pairs')
        pairs = []
        for c in covers:
            if (not isinstance(c, (list, tuple)) or len(c) != 2
                    or not all(isinstance(v, int) for v in c)):
                raise PosetError(f"malformed cover entry {c!r}")
            pairs.append((c[0], c[1]))
        return cls(tuple(points), pairs)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Poset":
        try:
            data = json.loads(text)
        except ValueError as exc:
            raise PosetError(f"malformed poset JSON: {exc}") from exc
        return cls.from_dict(data)

    def to_dot(self, graph_name: str = "poset") -> str:
        """Graphviz rendering: one rank per height level, edges drawn
        upward, everything ordered by label so output is reproducible."""
        def quote(s: str) -> str:
            return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'

        lines = [f"digraph {graph_name} {{", "  rankdir=BT;", "  node [shape=box];"]
        levels: dict[int, list[str]] = {}
        for x in range(len(self.points)):
            levels.setdefault(self._heights[x], []).append(self.points[x])
        for h in sorted(levels):
            inner = " ".join(f"{quote(label)};" for label in sorted(levels[h]))
            lines.append(f"  {{ rank=same; {inner} }}")
        edges = sorted((self.points[lo], self.points[hi]) for lo, hi in self.covers)
        for lo, hi in edges:
            lines.append(f"  {quote(lo)} -> {quote(hi)};")
        lines.append("}")
        return "\n".join(lines) + "\n"
