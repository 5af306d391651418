"""Machine verification of the realization properties of built spaces.

Each check becomes a clause in a structured report; failures are report
entries with witnesses, never exceptions.  The checks deliberately take
the expensive route (full automorphism enumeration, setwise comparison)
instead of replaying any by-hand argument: the point of the pipeline is
to certify instances, not to be clever.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from math import factorial

from .automorphisms import (PermSet, compose, core, beat_points,
                            enumerate_automorphisms, is_poset_automorphism)
from .groups import (FiniteGroup, GeneratorSpec, GroupError, Retraction,
                     default_generators, groups_isomorphic,
                     identity_retraction, subgroup_as_group)
from .poset import Poset, PosetError
from .realize import (RealizationError, build_space, image_space,
                      component_size, retraction_map, star, top, translation)


@dataclass
class ClauseResult:
    clause: str
    description: str
    passed: bool
    witness: dict

    def to_dict(self) -> dict:
        return {"clause": self.clause, "description": self.description,
                "passed": self.passed, "witness": self.witness}


@dataclass
class VerificationReport:
    title: str
    context: dict
    clauses: list[ClauseResult] = field(default_factory=list)
    elapsed_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.clauses) and all(c.passed for c in self.clauses)

    def add(self, clause: str, description: str, passed: bool, **witness) -> ClauseResult:
        result = ClauseResult(clause=clause, description=description,
                              passed=bool(passed), witness=witness)
        self.clauses.append(result)
        return result

    def clause(self, name: str) -> ClauseResult:
        for c in self.clauses:
            if c.clause == name:
                return c
        raise KeyError(name)

    def to_dict(self, include_timing: bool = False) -> dict:
        data = {
            "title": self.title,
            "context": self.context,
            "clauses": [c.to_dict() for c in self.clauses],
            "verdict": "PASS" if self.passed else "FAIL",
        }
        if include_timing:
            data["elapsed_seconds"] = self.elapsed_seconds
        return data

    def to_json(self, include_timing: bool = False) -> str:
        # timing stays out of the default rendering so identical inputs
        # give byte-identical reports
        return json.dumps(self.to_dict(include_timing), sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        lines = [f"verification report: {self.title}"]
        for key in sorted(self.context):
            lines.append(f"  {key} = {json.dumps(self.context[key], sort_keys=True)}")
        for c in self.clauses:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"[{mark}] {c.clause}: {c.description}")
            lines.append(f"       witness: {json.dumps(c.witness, sort_keys=True)}")
        good = sum(1 for c in self.clauses if c.passed)
        lines.append(f"verdict: {'PASS' if self.passed else 'FAIL'} "
                     f"({good}/{len(self.clauses)} clauses)")
        return "\n".join(lines) + "\n"


def _image_translations(space, incl) -> dict[int, tuple[int, ...]]:
    """Left translations by image elements, as permutations of the image
    subposet's own index space."""
    group = space.group
    y_labels = [space.labels[x] for x in incl]
    y_index = {lab: yi for yi, lab in enumerate(y_labels)}
    return {
        h: tuple(y_index[(lab[0], group.mul(h, lab[1]), *lab[2:])] for lab in y_labels)
        for h in space.retraction.image()
    }


_DESCRIPTIONS = {
    "structure": "carrier is a valid, connected, height-1 poset of the expected size",
    "translation_action": "left translations are automorphisms and compose like the group",
    "aut_equals_translations": "the automorphism group is exactly the set of left translations",
    "retraction_map": "the induced self-map is order preserving, idempotent, and fixes its image",
    "image_aut": "the image space has exactly the image-subgroup translations as automorphisms",
    "realizes_retraction": "restricting each translation to the image reproduces the group retraction",
    "minimality": "no beat points anywhere, and self-equivalences coincide with automorphisms",
    "iso_type": "abstract isomorphism types of the automorphism groups match the groups",
}


def verify_theorem(retraction: Retraction, gens: GeneratorSpec | None = None, *,
                   iso_bound: int = 16, workers: int | None = None,
                   title: str | None = None) -> VerificationReport:
    """Run the full clause pipeline for one retraction instance."""
    t0 = time.monotonic()
    group = retraction.group
    if gens is None:
        gens = default_generators(retraction)
    n = len(group)
    m = gens.m
    report = VerificationReport(
        title=title or f"retraction realization check: {group.spec}",
        context={
            "group": group.spec,
            "order": n,
            "endo": list(retraction.endo),
            "S1": list(gens.s1),
            "S2": list(gens.s2),
            "m": m,
            "expected_points": n * component_size(m),
        },
    )

    def abort(reason: str, done: set[str]) -> VerificationReport:
        for name, descr in _DESCRIPTIONS.items():
            if name not in done:
                report.add(name, descr, False, skipped=f"not evaluated: {reason}")
        report.elapsed_seconds = time.monotonic() - t0
        return report

    # structure
    try:
        space = build_space(retraction, gens)
    except (RealizationError, PosetError, GroupError) as exc:
        report.add("structure", _DESCRIPTIONS["structure"], False, error=str(exc))
        return abort("space construction failed", {"structure"})
    poset = space.poset
    validation = poset.validate()
    observed = {
        "closure_size_star_hub": len(poset.up_set(space.index[star(0, 0)])),
        "open_set_size_top_minus1": len(poset.down_set(space.index[top(0, -1)])),
        "open_set_size_top_0": len(poset.down_set(space.index[top(0, 0)])),
    }
    if m >= 1:
        observed["open_set_size_top_last"] = len(poset.down_set(space.index[top(0, m)]))
    report.add(
        "structure", _DESCRIPTIONS["structure"],
        validation is None and poset.height() == 1 and poset.is_connected()
        and len(poset) == n * component_size(m),
        points=len(poset), height=poset.height(), connected=poset.is_connected(),
        valid=validation is None, expected_points=n * component_size(m),
        observed_counts=observed, hub_closure_expected=2 * m + 3,
    )

    # translation_action
    trans = {g: translation(space, g) for g in range(n)}
    bad_pairs = [(g, h) for g in range(n) for h in range(n)
                 if compose(trans[g], trans[h]) != trans[group.mul(g, h)]]
    all_autos = all(is_poset_automorphism(poset, trans[g]) for g in range(n))
    injective = len(set(trans.values())) == n
    report.add(
        "translation_action", _DESCRIPTIONS["translation_action"],
        all_autos and not bad_pairs and injective,
        order_preserving=all_autos, injective=injective,
        failing_pairs=bad_pairs[:3],
    )

    # aut_equals_translations
    aut = enumerate_automorphisms(poset, workers)
    translation_set = set(trans.values())
    extra = sorted(set(aut.perms) - translation_set)
    missing = sorted(translation_set - set(aut.perms))
    report.add(
        "aut_equals_translations", _DESCRIPTIONS["aut_equals_translations"],
        not extra and not missing,
        aut_order=len(aut), group_order=n,
        extra_example=list(extra[0]) if extra else None,
        missing_example=list(missing[0]) if missing else None,
    )

    # retraction_map
    try:
        rmap = retraction_map(space)
    except RealizationError as exc:
        report.add("retraction_map", _DESCRIPTIONS["retraction_map"], False, error=str(exc))
        return abort("retraction map construction failed",
                     {"structure", "translation_action", "aut_equals_translations",
                      "retraction_map"})
    monotone = all(poset.leq(rmap[lo], rmap[hi]) for lo, hi in poset.covers)
    idempotent = all(rmap[rmap[x]] == rmap[x] for x in range(len(rmap)))
    fixed = [x for x in range(len(rmap)) if rmap[x] == x]
    fixes_image = all(rmap[y] == y for y in set(rmap))
    report.add(
        "retraction_map", _DESCRIPTIONS["retraction_map"],
        monotone and idempotent and fixes_image,
        order_preserving=monotone, idempotent=idempotent,
        identity_on_image=fixes_image, fixed_points=len(fixed),
    )

    # image_aut
    try:
        sub, incl = image_space(space, rmap)
    except RealizationError as exc:
        report.add("image_aut", _DESCRIPTIONS["image_aut"], False, error=str(exc))
        return abort("image space construction failed",
                     {"structure", "translation_action", "aut_equals_translations",
                      "retraction_map", "image_aut"})
    image_elems = space.retraction.image()
    t_image = _image_translations(space, incl)
    aut_image = enumerate_automorphisms(sub, workers)
    image_translation_set = set(t_image.values())
    report.add(
        "image_aut", _DESCRIPTIONS["image_aut"],
        set(aut_image.perms) == image_translation_set,
        image_points=len(sub), aut_order=len(aut_image),
        subgroup_order=len(image_elems),
    )

    # realizes_retraction
    x_to_y = {x: yi for yi, x in enumerate(incl)}
    failures = []
    for g in range(n):
        induced = tuple(x_to_y[rmap[trans[g][incl[yi]]]] for yi in range(len(incl)))
        if induced != t_image[retraction.endo[g]]:
            failures.append(g)
    report.add(
        "realizes_retraction", _DESCRIPTIONS["realizes_retraction"],
        not failures, checked_elements=n, failing_elements=failures[:3],
    )

    # minimality
    bp_space = beat_points(poset)
    bp_image = beat_points(sub)
    minimal = not bp_space and not bp_image
    witness = {
        "beat_points_space": [[poset.points[x], kind] for x, kind in bp_space[:5]],
        "beat_points_image": [[sub.points[x], kind] for x, kind in bp_image[:5]],
    }
    se_match = False
    if minimal:
        core_space, _ = core(poset)
        core_image, _ = core(sub)
        se_space = enumerate_automorphisms(core_space, workers)
        se_image = enumerate_automorphisms(core_image, workers)
        se_match = (set(se_space.perms) == set(aut.perms)
                    and set(se_image.perms) == set(aut_image.perms))
        witness["self_equivalence_order_space"] = len(se_space)
        witness["self_equivalence_order_image"] = len(se_image)
    report.add("minimality", _DESCRIPTIONS["minimality"], minimal and se_match, **witness)

    # iso_type
    if n <= iso_bound:
        image_group, _ = subgroup_as_group(group, image_elems)
        ok_space = isomorphism_type_check(aut, group, bound=iso_bound)
        ok_image = isomorphism_type_check(aut_image, image_group, bound=iso_bound)
        report.add("iso_type", _DESCRIPTIONS["iso_type"], ok_space and ok_image,
                   space_matches=ok_space, image_matches=ok_image)
    else:
        report.add("iso_type", _DESCRIPTIONS["iso_type"], True,
                   skipped=f"group order {n} exceeds isomorphism bound {iso_bound}; "
                           "setwise equality with the translations already "
                           "certifies the type")

    report.elapsed_seconds = time.monotonic() - t0
    return report


def verify_corollary(group: FiniteGroup, gens: GeneratorSpec | None = None, *,
                     iso_bound: int = 16, workers: int | None = None) -> VerificationReport:
    """The identity-retraction instance: the whole group is realized and
    the image checks collapse onto the space itself."""
    return verify_theorem(identity_retraction(group), gens,
                          iso_bound=iso_bound, workers=workers,
                          title=f"group realization check (identity retraction): {group.spec}")


def verify_height0(n: int, workers: int | None = None) -> VerificationReport:
    """Height-0 spaces are antichains with the discrete topology, so the
    full symmetric group acts; check that exactly n! automorphisms exist
    and that the space is already minimal."""
    if not 1 <= n <= 5:
        raise ValueError("antichain size must be between 1 and 5")
    t0 = time.monotonic()
    poset = Poset(tuple(f"x{i}" for i in range(n)), [])
    report = VerificationReport(
        title=f"discrete antichain check: {n} points",
        context={"points": n, "expected_aut_order": factorial(n)},
    )
    report.add(
        "discrete", "the space is an antichain: no covers, height 0",
        len(poset.covers) == 0 and poset.height() == 0,
        covers=len(poset.covers), height=poset.height(),
    )
    aut = enumerate_automorphisms(poset, workers)
    report.add(
        "full_symmetry", "every bijection is an automorphism",
        len(aut) == factorial(n) and aut.is_group(),
        aut_order=len(aut), expected=factorial(n),
    )
    bps = beat_points(poset)
    core_poset, _ = core(poset)
    se = enumerate_automorphisms(core_poset, workers)
    report.add(
        "minimality", "no beat points; self-equivalences coincide with automorphisms",
        not bps and set(se.perms) == set(aut.perms),
        beat_points=len(bps), self_equivalence_order=len(se),
    )
    report.elapsed_seconds = time.monotonic() - t0
    return report


def isomorphism_type_check(aut: PermSet, expected: FiniteGroup, bound: int = 16) -> bool:
    """Build the abstract group of a permutation set under composition
    and search for an isomorphism with ``expected``.  Independent of how
    the permutations were produced."""
    perms = aut.perms
    if len(perms) != len(expected):
        return False
    index = {p: i for i, p in enumerate(perms)}
    try:
        rows = [[index[compose(p, q)] for q in perms] for p in perms]
    except KeyError:
        raise GroupError("permutation set is not closed under composition") from None
    abstract = FiniteGroup.from_table(rows, spec="permutation-set")
    return groups_isomorphic(abstract, expected, bound=bound)
