"""Height-1 gadget components and the glued realization space.

Every group element g owns one component.  A component consists of:

* a spine of alternating minimal "star" points and maximal "top" points,
  with tops indexed -1, 0, 1..m and stars indexed 0..m;
* one zigzag arm per generator, hanging under top i.  Arm i carries the
  points (g,i,0..i+8) plus two parity-oriented chords, so every arm has a
  different length and no two arms can be swapped by an automorphism;
* a fixed marker arm of seven points under top -1, with its own chords,
  which pins down the -1 end of the spine;
* the star hub (g,*0) sits under both ends of the spine and under every
  arm top, which makes it the unique point with a large closure.

Components are glued by pointing arm i of component g at the star hub of
component g*s_i (right multiplication), so left translation by any group
element permutes the components while preserving all covers.  The space
is built so that these translations are its only automorphisms; the
verification module confirms that on every instance by exhaustive search
rather than trusting the construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groups import (FiniteGroup, GeneratorSpec, GroupError, Retraction,
                     default_generators, generator_spec)
from .poset import Poset, PosetError


class RealizationError(Exception):
    """The built space violates one of its structural guarantees."""


TOP = "top"
STAR = "star"
ARM = "arm"
NEG = "neg"


def top(g: int, k: int) -> tuple:
    return (TOP, g, k)


def star(g: int, i: int) -> tuple:
    return (STAR, g, i)


def arm(g: int, i: int, j: int) -> tuple:
    return (ARM, g, i, j)


def neg(g: int, t: int) -> tuple:
    return (NEG, g, t)


def label_str(label: tuple) -> str:
    """Canonical rendering used for point names in files and diagrams:
    ``g:k`` for tops, ``g:*i`` for stars, ``g:i:j`` for arm points and
    ``g:-1:t`` for marker-arm points."""
    tag, g = label[0], label[1]
    if tag == TOP:
        return f"{g}:{label[2]}"
    if tag == STAR:
        return f"{g}:*{label[2]}"
    if tag == ARM:
        return f"{g}:{label[2]}:{label[3]}"
    if tag == NEG:
        return f"{g}:-1:{label[2]}"
    raise ValueError(f"unknown label {label!r}")


def component_size(arm_count: int) -> int:
    """Point count of one component: tops and stars of the spine, the
    graded arms (arm i has i+9 points), and the 7-point marker arm."""
    m = arm_count
    if m < 0:
        raise ValueError("arm count must be non-negative")
    return m * (m + 1) // 2 + 11 * m + 10


def component_labels(g: int, arm_count: int) -> list[tuple]:
    m = arm_count
    labels = [top(g, k) for k in range(-1, m + 1)]
    labels += [star(g, i) for i in range(m + 1)]
    for i in range(1, m + 1):
        labels += [arm(g, i, j) for j in range(i + 9)]
    labels += [neg(g, t) for t in range(7)]
    return labels


def build_component(g: int, arm_count: int) -> tuple[list[tuple], list[tuple[tuple, tuple]]]:
    """Labels and covers (as label pairs) of the component owned by g."""
    m = arm_count
    if m < 0:
        raise ValueError("arm count must be non-negative")
    covers: list[tuple[tuple, tuple]] = []

    # spine: hub under both leftmost tops, then one star between each
    # consecutive pair of tops
    covers.append((star(g, 0), top(g, -1)))
    covers.append((star(g, 0), top(g, 0)))
    for i in range(1, m + 1):
        covers.append((star(g, i), top(g, i - 1)))
        covers.append((star(g, i), top(g, i)))

    # hub under every arm top
    for i in range(1, m + 1):
        covers.append((star(g, 0), top(g, i)))

    # graded arms: a zigzag path (even positions minimal, odd maximal)
    # plus two chords; each chord joins positions of opposite parity and
    # is oriented with the even position below
    for i in range(1, m + 1):
        covers.append((arm(g, i, 0), top(g, i)))
        for j in range(i + 8):
            a, b = arm(g, i, j), arm(g, i, j + 1)
            covers.append((a, b) if j % 2 == 0 else (b, a))
        for pair in ((i + 5, i + 8), (i + 1, i + 6)):
            lo, hi = pair if pair[0] % 2 == 0 else (pair[1], pair[0])
            covers.append((arm(g, i, lo), arm(g, i, hi)))

    # marker arm under top -1, with its two fixed chords
    covers.append((neg(g, 0), top(g, -1)))
    for t in range(6):
        a, b = neg(g, t), neg(g, t + 1)
        covers.append((a, b) if t % 2 == 0 else (b, a))
    covers.append((neg(g, 4), top(g, -1)))
    covers.append((neg(g, 6), neg(g, 3)))

    return component_labels(g, m), covers


@dataclass(frozen=True, eq=False)
class RealizationSpace:
    """The glued space plus everything needed to act on it."""

    poset: Poset
    group: FiniteGroup
    retraction: Retraction
    gens: GeneratorSpec
    labels: tuple[tuple, ...]
    index: dict

    @property
    def cardinality(self) -> int:
        return len(self.poset)

    @property
    def arm_count(self) -> int:
        return self.gens.m


def build_space(retraction: Retraction, gens: GeneratorSpec | None = None) -> RealizationSpace:
    """Assemble one component per group element and glue arm i of
    component g to the star hub of component g*s_i.  The result is
    checked against its structural guarantees before being returned."""
    group = retraction.group
    if gens is None:
        gens = default_generators(retraction)
    else:
        gens = generator_spec(retraction, gens.s1, gens.s2)
    n = len(group)
    m = gens.m

    labels: list[tuple] = []
    cover_labels: list[tuple[tuple, tuple]] = []
    for g in range(n):
        ls, cs = build_component(g, m)
        labels.extend(ls)
        cover_labels.extend(cs)
    for g in range(n):
        for pos, s in enumerate(gens.s, start=1):
            cover_labels.append((star(group.mul(g, s), 0), top(g, pos)))

    index = {lab: i for i, lab in enumerate(labels)}
    covers = [(index[a], index[b]) for a, b in cover_labels]
    poset = Poset(tuple(label_str(lab) for lab in labels), covers)

    msg = poset.validate()
    if msg is not None:
        raise RealizationError(f"internal: built space is not a valid poset: {msg}")
    if poset.height() != 1:
        raise RealizationError(f"internal: built space has height {poset.height()}, expected 1")
    expected = n * component_size(m)
    if len(poset) != expected:
        raise RealizationError(f"internal: built space has {len(poset)} points, expected {expected}")
    if not poset.is_connected():
        raise RealizationError("internal: built space is not connected")

    return RealizationSpace(poset=poset, group=group, retraction=retraction,
                            gens=gens, labels=tuple(labels), index=index)


def translation(space: RealizationSpace, g: int) -> tuple[int, ...]:
    """The permutation moving every point of component h to the same
    slot of component g*h (left multiplication on first coordinates)."""
    group = space.group
    group._check(g)
    return tuple(space.index[(lab[0], group.mul(g, lab[1]), *lab[2:])]
                 for lab in space.labels)


def retraction_map(space: RealizationSpace) -> tuple[int, ...]:
    """Apply the group endomorphism to first coordinates.  The result is
    checked to be order preserving, idempotent, and the identity on its
    fixed points; a failure indicates a construction bug."""
    endo = space.retraction.endo
    rmap = tuple(space.index[(lab[0], endo[lab[1]], *lab[2:])]
                 for lab in space.labels)
    poset = space.poset
    for lo, hi in poset.covers:
        if not poset.leq(rmap[lo], rmap[hi]):
            raise RealizationError(
                "internal: induced retraction is not order preserving on "
                f"({poset.points[lo]}, {poset.points[hi]})")
    for x in range(len(rmap)):
        if rmap[rmap[x]] != rmap[x]:
            raise RealizationError(
                f"internal: induced retraction is not idempotent at {poset.points[x]}")
    return rmap


def image_space(space: RealizationSpace, rmap: tuple[int, ...]) -> tuple[Poset, tuple[int, ...]]:
    """Induced subposet on the fixed points of ``rmap`` plus the
    inclusion (new index -> original index).

    The fixed points are exactly the components owned by image elements.
    Cross-component covers of the result must follow the gluing rule
    transported by the endomorphism: star hub of g*endo(s_i) under arm
    top i of g, and only when that lands in a different component.
    Component-internal covers must survive unchanged."""
    fixed = [x for x in range(len(space.poset)) if rmap[x] == x]
    sub = space.poset.induced_subposet(fixed)
    incl = tuple(fixed)

    group = space.group
    endo = space.retraction.endo
    image_elems = space.retraction.image()
    y_index = {space.labels[x]: yi for yi, x in enumerate(incl)}

    expected_cross = set()
    for g in image_elems:
        for pos, s in enumerate(space.gens.s, start=1):
            h = group.mul(g, endo[s])
            if h != g:
                expected_cross.add((y_index[star(h, 0)], y_index[top(g, pos)]))
    actual_cross = set()
    actual_internal = set()
    for lo, hi in sub.covers:
        if space.labels[incl[lo]][1] == space.labels[incl[hi]][1]:
            actual_internal.add((incl[lo], incl[hi]))
        else:
            actual_cross.add((lo, hi))
    if actual_cross != expected_cross:
        raise RealizationError("internal: image space gluing does not follow "
                               "the endomorphism-transported rule")
    fixed_set = set(fixed)
    expected_internal = {
        (lo, hi) for lo, hi in space.poset.covers
        if lo in fixed_set and hi in fixed_set
        and space.labels[lo][1] == space.labels[hi][1]
    }
    if actual_internal != expected_internal:
        raise RealizationError("internal: image space altered component-internal covers")

    return sub, incl


def manifest(space: RealizationSpace) -> dict:
    """Sidecar data that makes a build reproducible from files alone."""
    return {
        "group": space.group.spec,
        "order": len(space.group),
        "table": [list(row) for row in space.group.table],
        "endo": list(space.retraction.endo),
        "S1": list(space.gens.s1),
        "S2": list(space.gens.s2),
        "m": space.gens.m,
        "cardinality": space.cardinality,
    }
