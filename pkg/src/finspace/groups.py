"""Finite groups as validated multiplication tables.

Everything downstream works with element indices 0..n-1.  A retraction
onto a subgroup is stored as an idempotent endomorphism of one group;
its image plays the role of the target subgroup and the endomorphism
restricted to the image is the section.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations


class GroupError(Exception):
    """Invalid group data or an unsupported group operation."""


@dataclass(frozen=True)
class FiniteGroup:
    table: tuple[tuple[int, ...], ...]
    identity: int
    spec: str = "table"

    def __len__(self) -> int:
        return len(self.table)

    @property
    def order(self) -> int:
        return len(self.table)

    def _check(self, x: int) -> int:
        if not 0 <= x < len(self.table):
            raise GroupError(f"element index {x} out of range for order {len(self.table)}")
        return x

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def _inverses(self) -> tuple[int, ...]:
        n = len(self.table)
        inv = [0] * n
        for a in range(n):
            for b in range(n):
                if self.table[a][b] == self.identity:
                    inv[a] = b
                    break
        return tuple(inv)

    def inv(self, a: int) -> int:
        return self._inverses[self._check(a)]

    def element_order(self, a: int) -> int:
        self._check(a)
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def elements(self) -> range:
        return range(len(self.table))

    @classmethod
    def from_table(cls, rows, spec: str = "table") -> "FiniteGroup":
        """Validate and wrap a multiplication table.

        Checks: squareness, entry ranges, existence of a two-sided
        identity, Latin-square rows and columns, and full associativity.
        """
        table = tuple(tuple(int(v) for v in row) for row in rows)
        n = len(table)
        if n == 0:
            raise GroupError("group table is empty")
        for i, row in enumerate(table):
            if len(row) != n:
                raise GroupError(f"group table is not square: row {i} has {len(row)} entries")
            for v in row:
                if not 0 <= v < n:
                    raise GroupError(f"table entry {v} out of range in row {i}")
        identity = None
        for e in range(n):
            if all(table[e][x] == x == table[x][e] for x in range(n)):
                identity = e
                break
        if identity is None:
            raise GroupError("table has no two-sided identity element")
        full = list(range(n))
        for i in range(n):
            if sorted(table[i]) != full:
                raise GroupError(f"row {i} is not a permutation (not a Latin square)")
        for j in range(n):
            if sorted(table[i][j] for i in range(n)) != full:
                raise GroupError(f"column {j} is not a permutation (not a Latin square)")
        for a in range(n):
            for b in range(n):
                ab = table[a][b]
                row_a = table[a]
                for c in range(n):
                    if table[ab][c] != row_a[table[b][c]]:
                        raise GroupError(f"associativity fails at ({a},{b},{c})")
        return cls(table=table, identity=identity, spec=spec)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic group order must be at least 1")
    rows = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup.from_table(rows, spec=f"cyclic:{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon, order 2n.  Index k < n is the
    rotation by k steps; index n + k is the reflection s composed with
    that rotation."""
    if n < 1:
        raise GroupError("dihedral parameter must be at least 1")
    rows = []
    for x in range(2 * n):
        f1, k1 = (1, x - n) if x >= n else (0, x)
        row = []
        for y in range(2 * n):
            f2, k2 = (1, y - n) if y >= n else (0, y)
            f = (f1 + f2) % 2
            k = (-k1 if f2 else k1) + k2
            row.append(f * n + k % n)
        rows.append(row)
    return FiniteGroup.from_table(rows, spec=f"dihedral:{n}")


def symmetric(k: int) -> FiniteGroup:
    """Permutations of k symbols in lexicographic order; index 0 is the
    identity.  Product pq acts as q first, then p."""
    if k < 1:
        raise GroupError("symmetric group parameter must be at least 1")
    elems = list(permutations(range(k)))
    index = {p: i for i, p in enumerate(elems)}
    rows = [[index[tuple(p[q[x]] for x in range(k))] for q in elems] for p in elems]
    return FiniteGroup.from_table(rows, spec=f"symmetric:{k}")


def product(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    n1, n2 = len(g1), len(g2)
    rows = []
    for a1 in range(n1):
        for a2 in range(n2):
            row = []
            for b1 in range(n1):
                for b2 in range(n2):
                    row.append(g1.mul(a1, b1) * n2 + g2.mul(a2, b2))
            rows.append(row)
    return FiniteGroup.from_table(rows, spec=f"product:{g1.spec},{g2.spec}")


def group_from_file(path: str) -> FiniteGroup:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except ValueError as exc:
            raise GroupError(f"malformed group file {path}: {exc}") from exc
    if not isinstance(data, dict) or "table" not in data:
        raise GroupError(f'group file {path} needs a "table" key')
    group = FiniteGroup.from_table(data["table"], spec=f"table:{path}")
    if "order" in data and data["order"] != len(group):
        raise GroupError(f"group file {path}: declared order {data['order']} "
                         f"does not match table size {len(group)}")
    return group


def make_group(spec: str) -> FiniteGroup:
    """Build a group from a spec string: ``cyclic:6``, ``dihedral:4``,
    ``symmetric:3``, ``product:cyclic:2,cyclic:2`` or ``table:FILE``."""
    spec = spec.strip()
    kind, _, rest = spec.partition(":")

    def positive(text):
        try:
            value = int(text)
        except ValueError:
            raise GroupError(f"bad numeric argument in group spec {spec!r}") from None
        if value < 1:
            raise GroupError(f"group spec {spec!r} needs a positive argument")
        return value

    if kind == "cyclic":
        return cyclic(positive(rest))
    if kind == "dihedral":
        return dihedral(positive(rest))
    if kind == "symmetric":
        return symmetric(positive(rest))
    if kind == "product":
        parts = [p for p in rest.split(",") if p]
        if len(parts) < 2:
            raise GroupError("product spec needs at least two factors, "
                             "e.g. product:cyclic:2,cyclic:2")
        grp = make_group(parts[0])
        for part in parts[1:]:
            grp = product(grp, make_group(part))
        return grp
    if kind == "table":
        return group_from_file(rest)
    raise GroupError(f"unknown group spec {spec!r}")


# -- subgroups and retractions ---------------------------------------------

def subgroup_closure(group: FiniteGroup, seed) -> set[int]:
    """Smallest subgroup containing ``seed``: fixpoint of products (in a
    finite group, inverses come along as powers)."""
    members = {group.identity}
    for x in seed:
        members.add(group._check(x))
    changed = True
    while changed:
        changed = False
        current = sorted(members)
        for a in current:
            for b in current:
                c = group.mul(a, b)
                if c not in members:
                    members.add(c)
                    changed = True
    return members


def subgroup_as_group(group: FiniteGroup, members, spec: str = "") -> tuple[FiniteGroup, list[int]]:
    """Reindex a subgroup as a standalone group; returns it together with
    the list mapping new indices to the original element indices."""
    mem = sorted({group._check(x) for x in members})
    index = {x: i for i, x in enumerate(mem)}
    rows = []
    for a in mem:
        row = []
        for b in mem:
            c = group.mul(a, b)
            if c not in index:
                raise GroupError(f"element set is not closed: {a}*{b}={c} is outside")
            row.append(index[c])
        rows.append(row)
    return FiniteGroup.from_table(rows, spec=spec or f"subgroup-of:{group.spec}"), mem


@dataclass(frozen=True)
class Retraction:
    """An idempotent endomorphism of ``group``.  Its image is the retract
    subgroup and the endomorphism is the retraction followed by the
    inclusion, so kernel and image intersect only in the identity."""

    group: FiniteGroup
    endo: tuple[int, ...]

    def apply(self, g: int) -> int:
        return self.endo[self.group._check(g)]

    def kernel(self) -> list[int]:
        e = self.group.identity
        return [g for g in self.group.elements() if self.endo[g] == e]

    def image(self) -> list[int]:
        return sorted(set(self.endo))


def make_retraction(group: FiniteGroup, endo) -> Retraction:
    endo = tuple(int(v) for v in endo)
    n = len(group)
    if len(endo) != n:
        raise GroupError(f"endomorphism has {len(endo)} entries for a group of order {n}")
    for g, img in enumerate(endo):
        if not 0 <= img < n:
            raise GroupError(f"endomorphism image {img} of element {g} out of range")
    for a in range(n):
        for b in range(n):
            if endo[group.mul(a, b)] != group.mul(endo[a], endo[b]):
                raise GroupError(f"not a homomorphism: fails at pair ({a},{b})")
    for g in range(n):
        if endo[endo[g]] != endo[g]:
            raise GroupError(f"not idempotent: element {g} maps to {endo[g]} "
                             f"then to {endo[endo[g]]}")
    return Retraction(group=group, endo=endo)


def identity_retraction(group: FiniteGroup) -> Retraction:
    return Retraction(group=group, endo=tuple(range(len(group))))


def trivial_retraction(group: FiniteGroup) -> Retraction:
    return Retraction(group=group, endo=tuple([group.identity] * len(group)))


def retraction_from_spec(group: FiniteGroup, spec: str) -> Retraction:
    """``identity``, ``trivial``, or ``file:PATH`` where the file holds
    ``{"endo": [...]}``."""
    spec = spec.strip()
    if spec == "identity":
        return identity_retraction(group)
    if spec == "trivial":
        return trivial_retraction(group)
    if spec.startswith("file:"):
        path = spec[len("file:"):]
        with open(path, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except ValueError as exc:
                raise GroupError(f"malformed retraction file {path}: {exc}") from exc
        if not isinstance(data, dict) or "endo" not in data:
            raise GroupError(f'retraction file {path} needs an "endo" key')
        return make_retraction(group, data["endo"])
    raise GroupError(f"unknown retraction spec {spec!r}")


def decomposition_check(retraction: Retraction) -> bool:
    """Every element factors as kernel * image element, and the two
    subgroups meet only in the identity."""
    group = retraction.group
    ker = set(retraction.kernel())
    img = set(retraction.image())
    if ker & img != {group.identity}:
        return False
    if len(ker) * len(img) != len(group):
        return False
    prods = {group.mul(k, h) for k in ker for h in img}
    return prods == set(group.elements())


# -- generating systems -----------------------------------------------------

@dataclass(frozen=True)
class GeneratorSpec:
    """Ordered generators: ``s1`` for the kernel, ``s2`` for the image.
    The concatenation indexes the arms of the built space, so order is
    significant and the identity is never allowed in."""

    s1: tuple[int, ...]
    s2: tuple[int, ...]

    @property
    def s(self) -> tuple[int, ...]:
        return self.s1 + self.s2

    @property
    def m(self) -> int:
        return len(self.s1) + len(self.s2)


def generator_spec(retraction: Retraction, s1, s2) -> GeneratorSpec:
    group = retraction.group
    s1 = tuple(group._check(int(x)) for x in s1)
    s2 = tuple(group._check(int(x)) for x in s2)
    combined = s1 + s2
    if group.identity in combined:
        raise GroupError("the identity element is not allowed as a generator")
    if len(set(combined)) != len(combined):
        raise GroupError("generator entries must be pairwise distinct")
    if subgroup_closure(group, s1) != set(retraction.kernel()):
        raise GroupError("first generator list does not generate the kernel")
    if subgroup_closure(group, s2) != set(retraction.image()):
        raise GroupError("second generator list does not generate the image")
    if subgroup_closure(group, combined) != set(group.elements()):
        raise GroupError("generators do not generate the whole group")
    return GeneratorSpec(s1=s1, s2=s2)


def _greedy_generators(group: FiniteGroup, target: set[int]) -> tuple[int, ...]:
    chosen: list[int] = []
    closure = {group.identity}
    while closure != target:
        candidates = sorted(target - closure,
                            key=lambda x: (-group.element_order(x), x))
        chosen.append(candidates[0])
        closure = subgroup_closure(group, chosen)
    return tuple(chosen)


def default_generators(retraction: Retraction, strategy: str = "greedy") -> GeneratorSpec:
    """Pick generators for kernel and image.  ``greedy`` adds the highest
    order element still outside the running closure (ties to the smallest
    index); ``all`` takes every non-identity element."""
    group = retraction.group
    ker = set(retraction.kernel())
    img = set(retraction.image())
    if strategy == "greedy":
        s1 = _greedy_generators(group, ker)
        s2 = _greedy_generators(group, img)
    elif strategy == "all":
        s1 = tuple(sorted(ker - {group.identity}))
        s2 = tuple(sorted(img - {group.identity}))
    else:
        raise GroupError(f"unknown generator strategy {strategy!r}")
    return generator_spec(retraction, s1, s2)


def generators_from_spec(retraction: Retraction, spec: str) -> GeneratorSpec:
    """``greedy`` (alias ``auto``), ``all``, or explicit lists written as
    ``S1/S2`` with comma separated element indices, e.g. ``3/2`` or ``/1``."""
    spec = spec.strip()
    if spec in ("greedy", "auto"):
        return default_generators(retraction, "greedy")
    if spec == "all":
        return default_generators(retraction, "all")
    if "/" in spec:
        left, _, right = spec.partition("/")

        def parse(text):
            try:
                return tuple(int(tok) for tok in text.split(",") if tok != "")
            except ValueError:
                raise GroupError(f"bad generator list {text!r}") from None

        return generator_spec(retraction, parse(left), parse(right))
    raise GroupError(f"unknown generator spec {spec!r}; use greedy, all, or S1/S2 lists")


# -- isomorphism testing -----------------------------------------------------

def groups_isomorphic(g1: FiniteGroup, g2: FiniteGroup, bound: int = 16) -> bool:
    """Backtracking search for an isomorphism, mapping a generating
    sequence of g1 onto same-order elements of g2 and extending by
    right multiplication.  Only intended for small orders."""
    n = len(g1)
    if len(g2) != n:
        return False
    if n > bound:
        raise GroupError(f"isomorphism search bound exceeded: order {n} > {bound}")
    orders1 = sorted(g1.element_order(x) for x in range(n))
    orders2 = sorted(g2.element_order(x) for x in range(n))
    if orders1 != orders2:
        return False
    gens = _greedy_generators(g1, set(range(n)))
    if not gens:
        return True

    def close(imgs):
        """Partial map on the subgroup generated by the assigned
        generators; None when inconsistent or non-injective."""
        phi = {g1.identity: g2.identity}
        frontier = [g1.identity]
        while frontier:
            fresh = []
            for a in frontier:
                for s, t in zip(gens, imgs):
                    b = g1.mul(a, s)
                    q = g2.mul(phi[a], t)
                    if b in phi:
                        if phi[b] != q:
                            return None
                    else:
                        phi[b] = q
                        fresh.append(b)
            frontier = fresh
        if len(set(phi.values())) != len(phi):
            return None
        return phi

    candidate_pools = [
        [y for y in range(n) if g2.element_order(y) == g1.element_order(x)]
        for x in gens
    ]

    def extend(imgs):
        if close(imgs) is None:
            return False
        if len(imgs) == len(gens):
            phi = close(imgs)
            if len(phi) != n:
                return False
            return all(phi[g1.mul(a, b)] == g2.mul(phi[a], phi[b])
                       for a in range(n) for b in range(n))
        return any(extend(imgs + [c]) for c in candidate_pools[len(imgs)])

    return extend([])
