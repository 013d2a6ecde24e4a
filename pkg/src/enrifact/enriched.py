"""Enriched categories over a finite base, with two interchangeable backends.

``TableEnriched`` stores hom-objects as IDs into a validated monoidal
closed category V and checks everything by table lookups in V.  It hosts
quantale-enriched preorders, where enriched and ordinary notions genuinely
diverge.

``SetEnriched`` wraps a finite category whose hom-sets are taken literally
as the hom-objects of an enrichment in (untruncated) finite sets, with
composition as the enriched composition.  It hosts the truncated
finite-set instance, whose internal homs outgrow any fixed truncation and
so cannot be a table-backed V, together with its formal opposite.

A plain ``FinCategory`` is accepted wherever an enriched category is
expected and is read with set semantics: hom-sets are their own
hom-objects, so the enriched predicates collapse to the ordinary ones
(representable functors detect limits and monos).  This makes the
ordinary mode a degenerate instance of the same interface.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

from .errors import (
    DanglingID,
    DanglingVRef,
    EnrichedAssocViolation,
    EnrichedUnitViolation,
    FamilyNotMono,
    NotACone,
    NotIso,
    NaturalityViolation,
    NoVLimit,
    SchemaError,
)
from . import fincat
from .fincat import (
    Cone,
    Diagram,
    FinCategory,
    Verdict,
    build_category,
    classify_morphism,
    cones_with_apex,
    iso_inverse,
    limit_cone,
    validate_category,
)
from .monoidal import MonoidalClosedStructure, apply_hom, validate_monoidal_closed


# -- hom actions ---------------------------------------------------------------


@dataclass(frozen=True)
class VMorArrow:
    """Hom action in a table backend: a morphism of the enriching category."""

    mor: str


@dataclass(frozen=True)
class SetMapArrow:
    """Hom action with set semantics: an explicit map between hom-sets."""

    src: tuple
    dst: tuple
    mapping: tuple

    def apply(self, x: str) -> str:
        for a, b in self.mapping:
            if a == x:
                return b
        raise DanglingID(f"element {x!r} not in the map's source")

    def is_injective(self) -> bool:
        seen = set()
        for _, b in self.mapping:
            if b in seen:
                return False
            seen.add(b)
        return True


# -- table backend -------------------------------------------------------------


class TableEnriched:
    """Category enriched in a table-backed monoidal closed V."""

    backend = "table"

    def __init__(self, v, objects, hom, comp, ids, _validated=False):
        if not _validated:
            raise TypeError("construct via validate_enriched()")
        self.v: MonoidalClosedStructure = v
        self.objects: tuple[str, ...] = tuple(sorted(objects))
        self.hom: dict = dict(hom)
        self.comp: dict = dict(comp)
        self.ids: dict = dict(ids)
        self._underlying: Optional[FinCategory] = None
        self._info: dict = {}
        self._point_lookup: dict = {}
        self._hash: Optional[str] = None
        self.vflag_cache: dict = {}
        self._kp_cache = None
        self._tensor_data = None
        self._cotensor_data = None

    def underlying(self) -> FinCategory:
        if self._underlying is not None:
            return self._underlying
        vcat = self.v.base
        unit = self.v.unit
        morphisms = {}
        for a in self.objects:
            for c in self.objects:
                for p in vcat.hom(unit, self.hom[(a, c)]):
                    mid = f"m:{a}:{c}:{p}"
                    morphisms[mid] = (a, c)
                    self._info[mid] = (a, c, p)
                    self._point_lookup[(a, c, p)] = mid
        identity = {a: self._point_lookup[(a, a, self.ids[a])] for a in self.objects}
        compose = {}
        for g, (gb, gc, pg) in self._info.items():
            for f, (fa, fb, pf) in self._info.items():
                if fb != gb:
                    continue
                r = vcat.compose(
                    self.comp[(fa, fb, gc)], self.v.tensor_mor(pg, pf)
                )
                compose[(g, f)] = self._point_lookup[(fa, gc, r)]
        self._underlying = build_category(self.objects, morphisms, identity, compose)
        return self._underlying

    def point_of(self, f: str):
        self.underlying()
        if f not in self._info:
            raise DanglingID(f"unknown morphism ID {f!r}", morphism=f)
        return self._info[f]

    def morphism_for_point(self, a: str, c: str, p: str) -> str:
        self.underlying()
        key = (a, c, p)
        if key not in self._point_lookup:
            raise DanglingVRef(f"no morphism point {p!r} from {a!r} to {c!r}")
        return self._point_lookup[key]

    def action_co(self, a_obj: str, f: str) -> str:
        """V-morphism hom(A, dom f) -> hom(A, cod f), post-composition by f."""
        fa, fc, pf = self.point_of(f)
        vcat = self.v.base
        return vcat.compose(
            self.comp[(a_obj, fa, fc)],
            self.v.tensor_mor(pf, vcat.id_of(self.hom[(a_obj, fa)])),
        )

    def action_contra(self, f: str, a_obj: str) -> str:
        """V-morphism hom(cod f, A) -> hom(dom f, A), pre-composition by f."""
        fa, fc, pf = self.point_of(f)
        vcat = self.v.base
        return vcat.compose(
            self.comp[(fa, fc, a_obj)],
            self.v.tensor_mor(vcat.id_of(self.hom[(fc, a_obj)]), pf),
        )

    def opposite(self) -> "TableEnriched":
        vcat = self.v.base
        hom = {(a, c): self.hom[(c, a)] for (a, c) in self.hom}
        comp = {}
        for a in self.objects:
            for c in self.objects:
                for d in self.objects:
                    comp[(a, c, d)] = vcat.compose(
                        self.comp[(d, c, a)],
                        self.v.sym(self.hom[(d, c)], self.hom[(c, a)]),
                    )
        return validate_table_enriched(self.v, self.objects, hom, comp, self.ids)

    def canonical_body(self) -> dict:
        return {
            "backend": "table",
            "v": self.v.canonical_body(),
            "objects": list(self.objects),
            "hom": [[a, c, o] for (a, c), o in sorted(self.hom.items())],
            "comp": [[a, c, d, m] for (a, c, d), m in sorted(self.comp.items())],
            "ids": [[a, m] for a, m in sorted(self.ids.items())],
        }

    @property
    def content_hash(self) -> str:
        if self._hash is None:
            blob = json.dumps(self.canonical_body(), sort_keys=True, separators=(",", ":"))
            self._hash = hashlib.sha256(blob.encode()).hexdigest()
        return self._hash


def validate_table_enriched(v, objects, hom, comp, ids) -> TableEnriched:
    """Check typing and the enriched associativity and unit laws exhaustively."""
    vcat = v.base
    objects = tuple(sorted(objects))
    for a in objects:
        for c in objects:
            if (a, c) not in hom:
                raise DanglingVRef(f"hom missing entry ({a!r}, {c!r})")
            if hom[(a, c)] not in vcat.identity:
                raise DanglingVRef(f"hom({a!r}, {c!r}) names unknown V-object")
    for a in objects:
        for c in objects:
            for d in objects:
                if (a, c, d) not in comp:
                    raise EnrichedAssocViolation(
                        f"no composition morphism for ({a!r}, {c!r}, {d!r})",
                        triple=[a, c, d],
                    )
                m = comp[(a, c, d)]
                if not vcat.has_morphism(m):
                    raise DanglingVRef(f"comp({a!r}, {c!r}, {d!r}) names unknown V-morphism")
                want = (v.tensor_obj(hom[(c, d)], hom[(a, c)]), hom[(a, d)])
                if (vcat.dom(m), vcat.cod(m)) != want:
                    raise DanglingVRef(
                        f"comp({a!r}, {c!r}, {d!r}) has wrong endpoints", morphism=m
                    )
    for a in objects:
        if a not in ids:
            raise EnrichedUnitViolation(f"no identity element for {a!r}", object=a)
        m = ids[a]
        if not vcat.has_morphism(m):
            raise DanglingVRef(f"ids({a!r}) names unknown V-morphism")
        if (vcat.dom(m), vcat.cod(m)) != (v.unit, hom[(a, a)]):
            raise DanglingVRef(f"ids({a!r}) has wrong endpoints", morphism=m)

    # associativity: both evaluation orders of a triple of hom-objects agree
    for a in objects:
        for c in objects:
            for d in objects:
                for e in objects:
                    lhs = vcat.compose(
                        comp[(a, c, e)],
                        v.tensor_mor(comp[(c, d, e)], vcat.id_of(hom[(a, c)])),
                    )
                    rhs = vcat.compose(
                        comp[(a, d, e)],
                        v.tensor_mor(vcat.id_of(hom[(d, e)]), comp[(a, c, d)]),
                    )
                    if lhs != rhs:
                        raise EnrichedAssocViolation(
                            "enriched associativity fails",
                            quadruple=[a, c, d, e],
                        )
    # unit laws on the nose (strict V)
    for a in objects:
        for c in objects:
            h = vcat.id_of(hom[(a, c)])
            if vcat.compose(comp[(a, a, c)], v.tensor_mor(h, ids[a])) != h:
                raise EnrichedUnitViolation(
                    "right unit law fails", pair=[a, c]
                )
            if vcat.compose(comp[(a, c, c)], v.tensor_mor(ids[c], h)) != h:
                raise EnrichedUnitViolation(
                    "left unit law fails", pair=[a, c]
                )
    b = TableEnriched(v, objects, hom, comp, ids, _validated=True)
    b.underlying()
    return b


def build_thin_enriched(v: MonoidalClosedStructure, objects, hom) -> TableEnriched:
    """Enrichment of a preorder-like category in a thin V.

    Composition and identity elements are forced: each is the unique
    V-morphism with the right endpoints when one exists.  A missing
    composition arrow means the hom table breaks transitivity.
    """
    vcat = v.base

    def unique_arrow(x, y):
        arr = vcat.hom(x, y)
        return arr[0] if len(arr) == 1 else None

    comp = {}
    for a in objects:
        for c in objects:
            for d in objects:
                src = v.tensor_obj(hom[(c, d)], hom[(a, c)])
                m = unique_arrow(src, hom[(a, d)])
                if m is None:
                    raise EnrichedAssocViolation(
                        f"no composition arrow {src!r} -> {hom[(a, d)]!r}",
                        triple=[a, c, d],
                    )
                comp[(a, c, d)] = m
    ids = {}
    for a in objects:
        m = unique_arrow(v.unit, hom[(a, a)])
        if m is None:
            raise EnrichedUnitViolation(
                f"no identity arrow into hom({a!r}, {a!r})", object=a
            )
        ids[a] = m
    return validate_table_enriched(v, objects, hom, comp, ids)


# -- set backend ----------------------------------------------------------------


def finset_encode(a: int, b: int, vals: Sequence[int]) -> str:
    return f"f:{a}:{b}:{''.join(str(x) for x in vals)}"


def finset_decode(mid: str):
    parts = mid.split(":")
    if len(parts) != 4 or parts[0] != "f":
        raise DanglingID(f"not a finite-set morphism ID: {mid!r}", morphism=mid)
    a, b = int(parts[1]), int(parts[2])
    return a, b, tuple(int(ch) for ch in parts[3])


def _all_functions(a: int, b: int):
    if a == 0:
        yield ()
        return
    if b == 0:
        return
    vals = [1] * a
    while True:
        yield tuple(vals)
        i = a - 1
        while i >= 0 and vals[i] == b:
            vals[i] = 1
            i -= 1
        if i < 0:
            return
        vals[i] += 1


def _build_finset_category(max_size: int) -> FinCategory:
    objects = [str(k) for k in range(max_size + 1)]
    morphisms = {}
    for a in range(max_size + 1):
        for b in range(max_size + 1):
            for vals in _all_functions(a, b):
                morphisms[finset_encode(a, b, vals)] = (str(a), str(b))
    identity = {
        str(a): finset_encode(a, a, tuple(range(1, a + 1)))
        for a in range(max_size + 1)
    }
    compose = {}
    decoded = {m: finset_decode(m) for m in morphisms}
    for g, (gb, gc, gvals) in decoded.items():
        for f, (fa, fb, fvals) in decoded.items():
            if fb != gb:
                continue
            compose[(g, f)] = finset_encode(
                fa, gc, tuple(gvals[v - 1] for v in fvals)
            )
    return build_category(objects, morphisms, identity, compose)


class SetEnriched:
    """Category enriched in finite sets with literal hom-sets.

    Monos, epis, limits, and hom-square pullbacks are decided by direct
    set computations on the hom-sets; the enriching category is never
    materialized, so the internal homs may outgrow the object truncation.
    The ``op`` flag marks the formal opposite of the generating instance;
    morphism IDs keep their original encodings there.
    """

    backend = "set"

    def __init__(self, cat: FinCategory, max_size: int, op: bool = False):
        self.cat = cat
        self.objects = cat.objects
        self.max_size = max_size
        self.op = op
        self._hash: Optional[str] = None
        self.vflag_cache: dict = {}
        self._kp_cache = None
        self._tensor_data = None
        self._cotensor_data = None

    def underlying(self) -> FinCategory:
        return self.cat

    def action_co(self, a_obj: str, f: str) -> SetMapArrow:
        cat = self.cat
        d, c = cat.dom(f), cat.cod(f)
        return SetMapArrow(
            (a_obj, d),
            (a_obj, c),
            tuple((x, cat.compose(f, x)) for x in cat.hom(a_obj, d)),
        )

    def action_contra(self, f: str, a_obj: str) -> SetMapArrow:
        cat = self.cat
        d, c = cat.dom(f), cat.cod(f)
        return SetMapArrow(
            (c, a_obj),
            (d, a_obj),
            tuple((x, cat.compose(x, f)) for x in cat.hom(c, a_obj)),
        )

    def opposite(self) -> "SetEnriched":
        return SetEnriched(self.cat.opposite(), self.max_size, not self.op)

    def size_of(self, obj: str) -> int:
        return int(obj)

    def canonical_body(self) -> dict:
        return {"backend": "finset", "max_size": self.max_size, "op": self.op}

    @property
    def content_hash(self) -> str:
        if self._hash is None:
            blob = json.dumps(
                {"body": self.canonical_body(), "cat": self.cat.canonical_body()},
                sort_keys=True,
                separators=(",", ":"),
            )
            self._hash = hashlib.sha256(blob.encode()).hexdigest()
        return self._hash


def build_finset(max_size: int, op: bool = False) -> SetEnriched:
    # single-digit element encoding keeps morphism IDs canonical
    if not 1 <= max_size <= 9:
        raise SchemaError("finset backend needs 1 <= max_size <= 9")
    cat = _build_finset_category(max_size)
    if op:
        cat = cat.opposite()
    b = SetEnriched(cat, max_size, op)
    _spot_check_enriched_laws(b)
    return b


def _spot_check_enriched_laws(b: SetEnriched, samples: int = 200) -> None:
    # associativity and identity hold by construction; sample-assert anyway
    cat = b.cat
    rng = random.Random(1729)
    pairs = cat.composable_pairs()
    if not pairs:
        return
    for _ in range(samples):
        g, f = pairs[rng.randrange(len(pairs))]
        gf = cat.compose(g, f)
        for h in cat.hom(cat.cod(g), cat.objects[rng.randrange(len(cat.objects))]):
            if cat.compose(h, gf) != cat.compose(cat.compose(h, g), f):
                raise EnrichedAssocViolation(
                    "composition spot-check failed", triple=[h, g, f]
                )
            break


EnrichedLike = Union[FinCategory, TableEnriched, SetEnriched]


# -- generic dispatch ------------------------------------------------------------


def validate_enriched(raw: Mapping) -> EnrichedLike:
    """Build an enriched category from a document body, checking all laws."""
    backend = raw.get("backend")
    if backend == "finset":
        return build_finset(int(raw["max_size"]), bool(raw.get("op", False)))
    if backend != "table":
        raise SchemaError(f"unknown enriched backend {backend!r}")
    vbody = raw["v"]
    vcat = validate_category(vbody["category"])
    v = validate_monoidal_closed(vcat, vbody)
    hom = {(a, c): o for a, c, o in raw["hom"]}
    comp = {(a, c, d): m for a, c, d, m in raw["comp"]}
    ids = {a: m for a, m in raw["ids"]}
    return validate_table_enriched(v, list(raw["objects"]), hom, comp, ids)


def underlying(b: EnrichedLike) -> FinCategory:
    if isinstance(b, FinCategory):
        return b
    return b.underlying()


def content_hash_of(b: EnrichedLike) -> str:
    return b.content_hash


def opposite_enriched(b: EnrichedLike) -> EnrichedLike:
    return b.opposite()


def hom_action(b: EnrichedLike, a_obj: str, f: str, variance: str):
    """B(A, f) for variance "co", B(f, A) for variance "contra"."""
    cat = underlying(b)
    cat.require(f)
    if a_obj not in cat.identity:
        raise DanglingID(f"unknown object ID {a_obj!r}", object=a_obj)
    if variance not in ("co", "contra"):
        raise SchemaError(f"variance must be co or contra, got {variance!r}")
    if isinstance(b, TableEnriched):
        mor = b.action_co(a_obj, f) if variance == "co" else b.action_contra(f, a_obj)
        return VMorArrow(mor)
    src = b if isinstance(b, SetEnriched) else _as_set_backend(b)
    return src.action_co(a_obj, f) if variance == "co" else src.action_contra(f, a_obj)


def _as_set_backend(cat: FinCategory) -> SetEnriched:
    # plain categories read with set semantics; sizes are never consulted
    return SetEnriched(cat, 0, False)


def _is_v_mono(b: EnrichedLike, f: str) -> bool:
    cat = underlying(b)
    if isinstance(b, TableEnriched):
        return all(
            "mono" in classify_morphism(b.v.base, b.action_co(a, f))
            for a in b.objects
        )
    # set semantics: post-composition injective for every source object
    return "mono" in classify_morphism(cat, f)


def _is_v_epi(b: EnrichedLike, f: str) -> bool:
    cat = underlying(b)
    if isinstance(b, TableEnriched):
        return all(
            "mono" in classify_morphism(b.v.base, b.action_contra(f, a))
            for a in b.objects
        )
    return "epi" in classify_morphism(cat, f)


# -- enriched limits --------------------------------------------------------------


def _set_preservation_failure(cat: FinCategory, diagram: Diagram, cone: Cone):
    """Direct limit-of-sets check of the image cone under each hom functor.

    Matching families of the image diagram at A are exactly the cones with
    apex A; the canonical comparison out of hom(A, apex) must be bijective.
    Returns the first failing object with its family or collision.
    """
    legs = cone.legs
    for a in cat.objects:
        families = {
            tuple(m for _, m in c.legs) for c in cones_with_apex(cat, diagram, a)
        }
        mapped = {}
        for u in cat.hom(a, cone.apex):
            key = tuple(cat.compose(m, u) for _, m in legs)
            if key in mapped:
                return {"object": a, "collision": sorted([mapped[key], u]), "family": list(key)}
            mapped[key] = u
        missing = families - set(mapped)
        if missing:
            return {"object": a, "family": list(sorted(missing)[0])}
    return None


def _image_diagram_and_cone(b: TableEnriched, diagram: Diagram, cone: Cone, a_obj: str):
    vcat = b.v.base
    nodes = {n: b.hom[(a_obj, obj)] for n, obj in diagram.nodes}
    edges = [(s, t, b.action_co(a_obj, m)) for s, t, m in diagram.edges]
    image = Diagram.build(vcat, nodes, edges)
    legs = tuple(sorted((n, b.action_co(a_obj, m)) for n, m in cone.legs))
    return image, Cone(b.hom[(a_obj, cone.apex)], legs)


def is_v_limit(b: EnrichedLike, diagram: Diagram, cone: Cone) -> Verdict:
    """Is the cone a limit preserved by every covariant hom functor?

    Table backend: the image cone must be terminal in V for every source
    object.  Set semantics: the limit-of-sets comparison is checked
    directly for every source object.
    """
    cat = underlying(b)
    if not fincat.is_cone(cat, diagram, cone):
        raise NotACone("not a cone over the diagram", cone=cone.to_json())
    term = fincat.is_terminal_cone(cat, diagram, cone)
    if not term.holds:
        return Verdict(False, "v-limit:not-a-limit", counterexample=term.counterexample)
    if isinstance(b, TableEnriched):
        for a in b.objects:
            image, image_cone = _image_diagram_and_cone(b, diagram, cone, a)
            v_term = fincat.is_terminal_cone(b.v.base, image, image_cone)
            if not v_term.holds:
                return Verdict(
                    False,
                    "v-limit:not-preserved",
                    counterexample={"object": a, "failure": v_term.counterexample},
                )
        return Verdict(True, "v-limit:verified")
    failure = _set_preservation_failure(cat, diagram, cone)
    if failure is not None:
        return Verdict(False, "v-limit:not-preserved", counterexample=failure)
    return Verdict(True, "v-limit:verified")


def has_all_v_kernel_pairs(b: EnrichedLike):
    """Do all kernel pairs exist as enriched limits?  Cached with witness."""
    if b._kp_cache is not None:
        return b._kp_cache
    cat = underlying(b)
    result = (True, None)
    for f in cat.morphism_ids:
        cone = fincat.kernel_pair(cat, f)
        if cone is None:
            result = (False, {"morphism": f, "missing": "kernel-pair"})
            break
        diagram = Diagram.build(
            cat,
            {"p1": cat.dom(f), "p2": cat.dom(f), "t": cat.cod(f)},
            [("p1", "t", f), ("p2", "t", f)],
        )
        verdict = is_v_limit(b, diagram, cone)
        if not verdict.holds:
            result = (False, {"morphism": f, "missing": "preservation"})
            break
    b._kp_cache = result
    return result


# -- regular monos and epis --------------------------------------------------------


def _finset_equalizer_filter(b: SetEnriched, f: str, g: str, h: str) -> bool:
    # in sets, the equalizer of (g, h) is the subset where they agree
    _, _, fvals = finset_decode(f)
    _, _, gvals = finset_decode(g)
    _, _, hvals = finset_decode(h)
    agree = {i + 1 for i in range(len(gvals)) if gvals[i] == hvals[i]}
    return agree == set(fvals)


def _finset_coequalizer_filter(b: SetEnriched, f: str, g: str, h: str) -> bool:
    # f must identify exactly the equivalence closure of g(x) ~ h(x)
    fa, _, fvals = finset_decode(f)
    _, _, gvals = finset_decode(g)
    _, _, hvals = finset_decode(h)
    parent = list(range(fa + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in zip(gvals, hvals):
        parent[find(x)] = find(y)
    if len(set(fvals)) != len({find(x) for x in range(1, fa + 1)}):
        return False
    return all(
        (fvals[x - 1] == fvals[y - 1]) == (find(x) == find(y))
        for x in range(1, fa + 1)
        for y in range(1, fa + 1)
    )


def _regular_mono_pre_filter(b: EnrichedLike):
    if isinstance(b, SetEnriched) and b.max_size > 0:
        if b.op:
            # an equalizer in the opposite is a coequalizer of the base data
            return lambda f, g, h: _finset_coequalizer_filter(b, f, g, h)
        return lambda f, g, h: _finset_equalizer_filter(b, f, g, h)
    return None


def _regular_epi_pre_filter(b: EnrichedLike):
    if isinstance(b, SetEnriched) and b.max_size > 0:
        if b.op:
            return lambda f, g, h: _finset_equalizer_filter(b, f, g, h)
        return lambda f, g, h: _finset_coequalizer_filter(b, f, g, h)
    return None


def _is_v_regular_mono(b: EnrichedLike, f: str):
    """Search all parallel pairs for one with f as an enriched equalizer."""
    cat = underlying(b)
    if "mono" not in classify_morphism(cat, f):
        return None
    pre = _regular_mono_pre_filter(b)
    c = cat.cod(f)
    for d in cat.objects:
        arr = cat.hom(c, d)
        for g in arr:
            gf = cat.compose(g, f)
            for h in arr:
                if h < g or cat.compose(h, f) != gf:
                    continue
                if pre is not None and not pre(f, g, h):
                    continue
                diagram = Diagram.parallel_pair(cat, g, h)
                cone = Cone(cat.dom(f), (("a", f), ("b", gf)))
                if is_v_limit(b, diagram, cone).holds:
                    return (g, h)
    return None


def _is_v_regular_epi(b: EnrichedLike, f: str):
    """Search parallel pairs for one with f as an enriched coequalizer."""
    cat = underlying(b)
    if "epi" not in classify_morphism(cat, f):
        return None
    pre = _regular_epi_pre_filter(b)
    a = cat.dom(f)
    for d in cat.objects:
        arr = cat.hom(d, a)
        for g in arr:
            fg = cat.compose(f, g)
            for h in arr:
                if h < g or cat.compose(f, h) != fg:
                    continue
                if pre is not None and not pre(f, g, h):
                    continue
                if _coequalizes(b, f, g, h):
                    return (g, h)
    return None


def _coequalizes(b: EnrichedLike, f: str, g: str, h: str) -> bool:
    cat = underlying(b)
    a, c = cat.dom(f), cat.cod(f)
    # couniversal property in the underlying category
    for w in cat.objects:
        fibers: dict[str, int] = {}
        for u in cat.hom(c, w):
            uf = cat.compose(u, f)
            fibers[uf] = fibers.get(uf, 0) + 1
        for x in cat.hom(a, w):
            if cat.compose(x, g) != cat.compose(x, h):
                continue
            if fibers.get(x, 0) != 1:
                return False
    if isinstance(b, TableEnriched):
        # contravariant image must be an equalizer fork in V
        vcat = b.v.base
        for obj in b.objects:
            bg = b.action_contra(g, obj)
            bh = b.action_contra(h, obj)
            diagram = Diagram.parallel_pair(vcat, bg, bh)
            bf = b.action_contra(f, obj)
            cone = Cone(b.hom[(c, obj)], (("a", bf), ("b", vcat.compose(bg, bf))))
            if not fincat.is_cone(vcat, diagram, cone):
                return False
            if not fincat.is_terminal_cone(vcat, diagram, cone).holds:
                return False
        return True
    # set semantics: precomposition by f is a bijection onto the equalizing part
    for obj in cat.objects:
        seen = set()
        for u in cat.hom(c, obj):
            uf = cat.compose(u, f)
            if uf in seen:
                return False
            seen.add(uf)
        for x in cat.hom(a, obj):
            if cat.compose(x, g) == cat.compose(x, h) and x not in seen:
                return False
    return True


def v_classify(b: EnrichedLike, f: str) -> frozenset:
    """Flags from {v_mono, v_epi, v_regular_mono, v_regular_epi}."""
    cache = b.vflag_cache
    got = cache.get(f)
    if got is not None:
        return got
    underlying(b).require(f)
    flags = set()
    if _is_v_mono(b, f):
        flags.add("v_mono")
    if _is_v_epi(b, f):
        flags.add("v_epi")
    if _is_v_regular_mono(b, f) is not None:
        flags.add("v_regular_mono")
    if _is_v_regular_epi(b, f) is not None:
        flags.add("v_regular_epi")
    result = frozenset(flags)
    cache[f] = result
    return result


# -- enriched intersections ---------------------------------------------------------


def v_intersection(
    b: EnrichedLike,
    family: Sequence[str],
    codomain: Optional[str] = None,
    want_cone: bool = False,
):
    """Wide enriched fibre product of a family of enriched monos into one object.

    Returns the induced morphism into the codomain (always itself an
    enriched mono), or None when the underlying category has no such wide
    fibre product.  An ordinary fibre product that fails preservation
    raises NoVLimit, reported distinctly from plain absence.  The empty
    family yields the identity of the codomain.
    """
    cat = underlying(b)
    family = sorted(set(family))
    if not family:
        if codomain is None:
            raise SchemaError("empty family needs an explicit codomain")
        result = cat.id_of(codomain)
        return (result, None, None) if want_cone else result
    cods = {cat.cod(m) for m in family}
    if codomain is not None:
        cods.add(codomain)
    if len(cods) != 1:
        raise FamilyNotMono("family members land in different objects", family=family)
    codomain = next(iter(cods))
    for m in family:
        if "v_mono" not in v_classify(b, m):
            raise FamilyNotMono(
                f"family member {m!r} is not an enriched mono", morphism=m
            )
    diagram = Diagram.wide_cospan(cat, family, codomain)
    cone = limit_cone(cat, diagram)
    if cone is None:
        return (None, None, diagram) if want_cone else None
    verdict = is_v_limit(b, diagram, cone)
    if not verdict.holds:
        raise NoVLimit(
            "wide fibre product exists but is not an enriched limit",
            family=family,
            failure=verdict.counterexample,
        )
    result = cone.leg("t")
    if "v_mono" not in v_classify(b, result):
        raise FamilyNotMono(
            "intersection failed to be an enriched mono", morphism=result
        )
    return (result, cone, diagram) if want_cone else result


# -- tensor and cotensor data ----------------------------------------------------------


@dataclass(frozen=True)
class TensorData:
    """Claimed (co)tensors with their defining natural isomorphism tables.

    Coverage may be partial; closure claims downstream are always relative
    to the recorded pairs.  ``entries`` maps (V-object, B-object) pairs to
    a target object and one iso table per probe object.
    """

    side: str
    entries: tuple

    def get(self, v_obj: str, b_obj: str):
        for (vo, bo), target, isos in self.entries:
            if (vo, bo) == (v_obj, b_obj):
                return target, dict(isos)
        return None

    def covered(self):
        return tuple(sorted((vo, bo) for (vo, bo), _, _ in self.entries))

    def to_json(self):
        return {
            "side": self.side,
            "covered": [list(p) for p in self.covered()],
            "targets": {
                f"{vo}|{bo}": target for (vo, bo), target, _ in sorted(self.entries)
            },
        }


def _derive_table_data(b: TableEnriched, side: str) -> TensorData:
    vcat = b.v.base
    entries = []
    for vo in vcat.objects:
        for bo in b.objects:
            target = None
            for t in b.objects:
                if side == "tensor":
                    ok = all(
                        b.hom[(t, x)] == b.v.hom_obj(vo, b.hom[(bo, x)])
                        for x in b.objects
                    )
                else:
                    ok = all(
                        b.hom[(x, t)] == b.v.hom_obj(vo, b.hom[(x, bo)])
                        for x in b.objects
                    )
                if ok:
                    target = t
                    break
            if target is None:
                continue
            if side == "tensor":
                isos = tuple(
                    (x, vcat.id_of(b.hom[(target, x)])) for x in b.objects
                )
            else:
                isos = tuple(
                    (x, vcat.id_of(b.hom[(x, target)])) for x in b.objects
                )
            entries.append(((vo, bo), target, isos))
    return TensorData(side, tuple(entries))


def _function_space_decode(index: int, v_size: int, b_size: int):
    # element of b^v as a value tuple, big-endian in the v coordinate
    vals = []
    index -= 1
    for pos in range(v_size):
        power = b_size ** (v_size - 1 - pos)
        vals.append(index // power + 1)
        index %= power
    return tuple(vals)


def _function_space_encode(vals: Sequence[int], b_size: int) -> int:
    index = 0
    for x in vals:
        index = index * b_size + (x - 1)
    return index + 1


def _derive_finset_data(b: SetEnriched, side: str) -> TensorData:
    if b.op:
        base = SetEnriched(b.cat.opposite(), b.max_size, False)
        flipped = _derive_finset_data(base, "cotensor" if side == "tensor" else "tensor")
        return TensorData(side, flipped.entries)
    n = b.max_size
    cat = b.cat
    entries = []
    for vo in cat.objects:
        sv = int(vo)
        for bo in cat.objects:
            sb = int(bo)
            if side == "tensor":
                size = sv * sb
                if size > n:
                    continue
                target = str(size)
                isos = []
                for x in cat.objects:
                    table = []
                    for m in cat.hom(target, x):
                        _, _, mvals = finset_decode(m)
                        parts = tuple(
                            finset_encode(
                                sb, int(x), tuple(mvals[(i - 1) * sb + j - 1] for j in range(1, sb + 1))
                            )
                            for i in range(1, sv + 1)
                        )
                        table.append((m, parts))
                    isos.append((x, tuple(table)))
                entries.append(((vo, bo), target, tuple(isos)))
            else:
                size = sb ** sv
                if size > n:
                    continue
                target = str(size)
                isos = []
                for x in cat.objects:
                    sx = int(x)
                    table = []
                    for m in cat.hom(x, target):
                        _, _, mvals = finset_decode(m)
                        comps = []
                        for i in range(1, sv + 1):
                            comp_vals = tuple(
                                _function_space_decode(mvals[e - 1], sv, sb)[i - 1]
                                for e in range(1, sx + 1)
                            )
                            comps.append(finset_encode(sx, sb, comp_vals))
                        table.append((m, tuple(comps)))
                    isos.append((x, tuple(table)))
                entries.append(((vo, bo), target, tuple(isos)))
    return TensorData(side, tuple(entries))


def derive_tensor_data(b: EnrichedLike) -> TensorData:
    if isinstance(b, FinCategory):
        return TensorData("tensor", ())
    if b._tensor_data is None:
        b._tensor_data = (
            _derive_table_data(b, "tensor")
            if isinstance(b, TableEnriched)
            else _derive_finset_data(b, "tensor")
        )
    return b._tensor_data


def derive_cotensor_data(b: EnrichedLike) -> TensorData:
    if isinstance(b, FinCategory):
        return TensorData("cotensor", ())
    if b._cotensor_data is None:
        b._cotensor_data = (
            _derive_table_data(b, "cotensor")
            if isinstance(b, TableEnriched)
            else _derive_finset_data(b, "cotensor")
        )
    return b._cotensor_data


def _check_table_entry(b: TableEnriched, side, vo, bo, target, isos):
    vcat = b.v.base
    if set(isos) != set(b.objects):
        raise NotIso("iso tables must cover every probe object", pair=[vo, bo])
    for x, iso in sorted(isos.items()):
        hom_here = b.hom[(target, x)] if side == "tensor" else b.hom[(x, target)]
        inner = b.hom[(bo, x)] if side == "tensor" else b.hom[(x, bo)]
        want = (hom_here, b.v.hom_obj(vo, inner))
        if not vcat.has_morphism(iso) or (vcat.dom(iso), vcat.cod(iso)) != want:
            raise NotIso(
                "iso table entry has wrong endpoints", pair=[vo, bo], probe=x
            )
        if iso_inverse(vcat, iso) is None:
            raise NotIso("claimed iso is not invertible", pair=[vo, bo], probe=x)
    for f in underlying(b).morphism_ids:
        cat = underlying(b)
        x, x2 = cat.dom(f), cat.cod(f)
        if side == "tensor":
            lhs = vcat.compose(
                apply_hom(b.v, vcat.id_of(vo), b.action_co(bo, f)), isos[x]
            )
            rhs = vcat.compose(isos[x2], b.action_co(target, f))
        else:
            # contravariant in the probe object
            lhs = vcat.compose(
                apply_hom(b.v, vcat.id_of(vo), b.action_contra(f, bo)), isos[x2]
            )
            rhs = vcat.compose(isos[x], b.action_contra(f, target))
        if lhs != rhs:
            raise NaturalityViolation(
                "tensor data not natural", pair=[vo, bo], morphism=f
            )


def _check_set_entry(b: SetEnriched, side, vo, bo, target, isos):
    cat = b.cat
    sv = int(vo)
    if set(isos) != set(cat.objects):
        raise NotIso("iso tables must cover every probe object", pair=[vo, bo])
    for x, table in sorted(isos.items()):
        table = dict(table)
        source = cat.hom(target, x) if side == "tensor" else cat.hom(x, target)
        inner = cat.hom(bo, x) if side == "tensor" else cat.hom(x, bo)
        if set(table) != set(source):
            raise NotIso("iso table does not cover its source", pair=[vo, bo], probe=x)
        values = list(table.values())
        if len(set(values)) != len(values):
            raise NotIso("iso table is not injective", pair=[vo, bo], probe=x)
        for parts in values:
            if len(parts) != sv or any(p not in inner for p in parts):
                raise NotIso("iso table value malformed", pair=[vo, bo], probe=x)
        if len(values) != len(inner) ** sv:
            raise NotIso("iso table is not surjective", pair=[vo, bo], probe=x)
    for f in cat.morphism_ids:
        x, x2 = cat.dom(f), cat.cod(f)
        if side == "tensor":
            src, dst = isos[x], dict(isos[x2])
            for m, parts in src:
                want = dst[cat.compose(f, m)]
                if tuple(cat.compose(f, p) for p in parts) != want:
                    raise NaturalityViolation(
                        "tensor data not natural", pair=[vo, bo], morphism=f
                    )
        else:
            src, dst = isos[x2], dict(isos[x])
            for m, parts in src:
                want = dst[cat.compose(m, f)]
                if tuple(cat.compose(p, f) for p in parts) != want:
                    raise NaturalityViolation(
                        "cotensor data not natural", pair=[vo, bo], morphism=f
                    )


def check_tensor_data(b: EnrichedLike, data: TensorData) -> Verdict:
    """Verify every claimed natural isomorphism table; report coverage."""
    if data.side not in ("tensor", "cotensor"):
        raise SchemaError(f"unknown data side {data.side!r}")
    for (vo, bo), target, isos in data.entries:
        isos = dict(isos)
        if isinstance(b, TableEnriched):
            _check_table_entry(b, data.side, vo, bo, target, isos)
        elif isinstance(b, SetEnriched):
            _check_set_entry(b, data.side, vo, bo, target, isos)
        else:
            raise SchemaError("tensor data needs an enriched backend")
    return Verdict(
        True,
        f"{data.side}-data:verified",
        witness={"covered": [list(p) for p in data.covered()]},
    )


def check_cotensor_data(b: EnrichedLike, data: TensorData) -> Verdict:
    if data.side != "cotensor":
        raise SchemaError("expected cotensor-side data")
    return check_tensor_data(b, data)


def _finset_tensor_action(b: SetEnriched, vo: str, e: str) -> str:
    sv = int(vo)
    ea, eb, evals = finset_decode(e)
    out = []
    for idx in range(1, sv * ea + 1):
        i = (idx - 1) // ea
        j = (idx - 1) % ea
        out.append(i * eb + evals[j])
    return finset_encode(sv * ea, sv * eb, tuple(out))


def _finset_cotensor_action(b: SetEnriched, vo: str, m: str) -> str:
    sv = int(vo)
    mb, mc, mvals = finset_decode(m)
    out = []
    for idx in range(1, mb ** sv + 1):
        t = _function_space_decode(idx, sv, mb)
        out.append(_function_space_encode(tuple(mvals[x - 1] for x in t), mc))
    return finset_encode(mb ** sv, mc ** sv, tuple(out))


def _table_action_through_isos(b: TableEnriched, data: TensorData, vo: str, f: str):
    cat = underlying(b)
    vcat = b.v.base
    side = data.side
    x1, x2 = cat.dom(f), cat.cod(f)
    e1 = data.get(vo, x1)
    e2 = data.get(vo, x2)
    if e1 is None or e2 is None:
        return None
    t1, isos1 = e1
    t2, isos2 = e2
    idv = vcat.id_of(vo)
    if side == "tensor":
        # classify the composite transformation at the slot t2
        eta = vcat.compose(isos2[t2], b.point_of(cat.id_of(t2))[2])
        xi = vcat.compose(apply_hom(b.v, idv, b.action_contra(f, t2)), eta)
        pt = vcat.compose(iso_inverse(vcat, isos1[t2]), xi)
        return b.morphism_for_point(t1, t2, pt)
    eta = vcat.compose(isos1[t1], b.point_of(cat.id_of(t1))[2])
    xi = vcat.compose(apply_hom(b.v, idv, b.action_co(t1, f)), eta)
    pt = vcat.compose(iso_inverse(vcat, isos2[t1]), xi)
    return b.morphism_for_point(t1, t2, pt)


def tensor_of_morphism(b: EnrichedLike, data: TensorData, vo: str, e: str):
    """Induced morphism V ⊗ e between covered tensors, or None off coverage."""
    cat = underlying(b)
    if data.get(vo, cat.dom(e)) is None or data.get(vo, cat.cod(e)) is None:
        return None
    if isinstance(b, TableEnriched):
        return _table_action_through_isos(b, data, vo, e)
    assert isinstance(b, SetEnriched)
    if b.op:
        return _finset_cotensor_action(b, vo, e)
    return _finset_tensor_action(b, vo, e)


def cotensor_of_morphism(b: EnrichedLike, data: TensorData, vo: str, m: str):
    """Induced morphism [V, m] between covered cotensors, or None off coverage."""
    cat = underlying(b)
    if data.get(vo, cat.dom(m)) is None or data.get(vo, cat.cod(m)) is None:
        return None
    if isinstance(b, TableEnriched):
        return _table_action_through_isos(b, data, vo, m)
    assert isinstance(b, SetEnriched)
    if b.op:
        return _finset_tensor_action(b, vo, m)
    return _finset_cotensor_action(b, vo, m)
