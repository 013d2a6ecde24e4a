"""Strict symmetric monoidal closed structures on a finite category.

The structure is pure data: object and morphism tables for the tensor,
a strict unit, symmetry components, internal-hom objects, and currying
bijections.  Validation checks every law exhaustively; nothing is ever
searched for at query time.  Strictness (unit and associativity on the
nose) is required of the input data, which keeps the enriched-law checks
exact instead of coherence-laden; every finite monoidal category has a
strict equivalent, so no generality is lost for the corpus.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import (
    CurryNotBijective,
    DanglingID,
    InterchangeViolation,
    NaturalityViolation,
    NotMonotone,
    NotResiduated,
    SchemaError,
    StrictAssociativityViolation,
    SymmetryNotIso,
    UnitViolation,
)
from .fincat import FinCategory, build_category, classify_morphism


class MonoidalClosedStructure:
    """Validated strict symmetric monoidal closed structure over a base category."""

    def __init__(self, base, tensor_obj, tensor_mor, unit, symmetry, hom_obj, curry,
                 _validated=False):
        if not _validated:
            raise TypeError("construct via validate_monoidal_closed()")
        self.base: FinCategory = base
        self._tensor_obj: dict = dict(tensor_obj)
        self._tensor_mor: dict = dict(tensor_mor)
        self.unit: str = unit
        self._symmetry: dict = dict(symmetry)
        self._hom_obj: dict = dict(hom_obj)
        self._curry: dict = {k: dict(v) for k, v in curry.items()}
        self._uncurry: dict = {
            k: {g: f for f, g in v.items()} for k, v in self._curry.items()
        }
        self._hash: Optional[str] = None

    def tensor_obj(self, x: str, y: str) -> str:
        try:
            return self._tensor_obj[(x, y)]
        except KeyError:
            raise DanglingID(f"tensor undefined on objects ({x!r}, {y!r})") from None

    def tensor_mor(self, f: str, g: str) -> str:
        try:
            return self._tensor_mor[(f, g)]
        except KeyError:
            raise DanglingID(f"tensor undefined on morphisms ({f!r}, {g!r})") from None

    def sym(self, x: str, y: str) -> str:
        try:
            return self._symmetry[(x, y)]
        except KeyError:
            raise DanglingID(f"symmetry undefined on ({x!r}, {y!r})") from None

    def hom_obj(self, x: str, y: str) -> str:
        try:
            return self._hom_obj[(x, y)]
        except KeyError:
            raise DanglingID(f"internal hom undefined on ({x!r}, {y!r})") from None

    def curry(self, x: str, y: str, z: str, f: str) -> str:
        try:
            return self._curry[(x, y, z)][f]
        except KeyError:
            raise DanglingID(
                f"curry table has no entry for {f!r} at ({x!r}, {y!r}, {z!r})"
            ) from None

    def uncurry(self, x: str, y: str, z: str, g: str) -> str:
        try:
            return self._uncurry[(x, y, z)][g]
        except KeyError:
            raise DanglingID(
                f"uncurry table has no entry for {g!r} at ({x!r}, {y!r}, {z!r})"
            ) from None

    def ev(self, y: str, z: str) -> str:
        """Evaluation [Y,Z] ⊗ Y -> Z, i.e. uncurry of the identity on [Y,Z]."""
        h = self.hom_obj(y, z)
        return self.uncurry(h, y, z, self.base.id_of(h))

    def canonical_body(self) -> dict:
        return {
            "category": self.base.canonical_body(),
            "tensor_obj": [[x, y, z] for (x, y), z in sorted(self._tensor_obj.items())],
            "tensor_mor": [[f, g, h] for (f, g), h in sorted(self._tensor_mor.items())],
            "unit": self.unit,
            "symmetry": [[x, y, m] for (x, y), m in sorted(self._symmetry.items())],
            "hom_obj": [[x, y, o] for (x, y), o in sorted(self._hom_obj.items())],
            "curry": [
                [x, y, z, f, g]
                for (x, y, z), table in sorted(self._curry.items())
                for f, g in sorted(table.items())
            ],
        }

    @property
    def content_hash(self) -> str:
        if self._hash is None:
            blob = json.dumps(self.canonical_body(), sort_keys=True, separators=(",", ":"))
            self._hash = hashlib.sha256(blob.encode()).hexdigest()
        return self._hash


def apply_hom(s: MonoidalClosedStructure, f: str, g: str) -> str:
    """Internal-hom action [f, g] : [A, B] -> [A', B'] for f: A'->A, g: B->B'.

    Determined through the curry bijections: curry the composite
    g ∘ ev ∘ (id ⊗ f) over the hom object.  Contravariant in the first
    slot, covariant in the second.
    """
    cat = s.base
    cat.require(f)
    cat.require(g)
    a_, a = cat.dom(f), cat.cod(f)
    b, b_ = cat.dom(g), cat.cod(g)
    hab = s.hom_obj(a, b)
    ev = s.ev(a, b)
    inner = cat.compose(g, cat.compose(ev, s.tensor_mor(cat.id_of(hab), f)))
    return s.curry(hab, a_, b_, inner)


def validate_monoidal_closed(cat: FinCategory, raw: Mapping) -> MonoidalClosedStructure:
    """Validate every structure law exhaustively.

    Checks, in order: table shape and totality, tensor functoriality and
    interchange, strict unit and associativity, symmetry (iso, natural,
    self-inverse after swap), curry bijectivity, and curry naturality in
    all three arguments.
    """
    for key in ("tensor_obj", "tensor_mor", "unit", "symmetry", "hom_obj", "curry"):
        if key not in raw:
            raise SchemaError(f"missing field {key!r}", path=f"monoidal.{key}")

    objs = cat.objects
    mors = cat.morphism_ids

    def as_table(entries, arity, what):
        table = {}
        for entry in entries:
            if len(entry) != arity + 1:
                raise SchemaError(f"{what} entries have arity {arity + 1}", path=what)
            *key, value = entry
            table[tuple(key)] = value
        return table

    tensor_obj = as_table(raw["tensor_obj"], 2, "tensor_obj")
    tensor_mor = as_table(raw["tensor_mor"], 2, "tensor_mor")
    symmetry = as_table(raw["symmetry"], 2, "symmetry")
    hom_obj = as_table(raw["hom_obj"], 2, "hom_obj")
    unit = raw["unit"]
    if unit not in cat.identity:
        raise DanglingID(f"unit names unknown object {unit!r}", object=unit)

    for (x, y) in [(x, y) for x in objs for y in objs]:
        if (x, y) not in tensor_obj:
            raise DanglingID(f"tensor_obj missing entry ({x!r}, {y!r})")
        if tensor_obj[(x, y)] not in cat.identity:
            raise DanglingID(f"tensor_obj({x!r}, {y!r}) names unknown object")
        if (x, y) not in symmetry:
            raise DanglingID(f"symmetry missing entry ({x!r}, {y!r})")
        if (x, y) not in hom_obj:
            raise DanglingID(f"hom_obj missing entry ({x!r}, {y!r})")
        if hom_obj[(x, y)] not in cat.identity:
            raise DanglingID(f"hom_obj({x!r}, {y!r}) names unknown object")

    for f in mors:
        for g in mors:
            if (f, g) not in tensor_mor:
                raise DanglingID(f"tensor_mor missing entry ({f!r}, {g!r})")
            h = tensor_mor[(f, g)]
            if not cat.has_morphism(h):
                raise DanglingID(f"tensor_mor({f!r}, {g!r}) names unknown morphism")
            want = (
                tensor_obj[(cat.dom(f), cat.dom(g))],
                tensor_obj[(cat.cod(f), cat.cod(g))],
            )
            if (cat.dom(h), cat.cod(h)) != want:
                raise SchemaError(
                    f"tensor_mor({f!r}, {g!r}) has wrong endpoints", f=f, g=g
                )

    # functoriality on identities and interchange on composites
    for x in objs:
        for y in objs:
            if tensor_mor[(cat.id_of(x), cat.id_of(y))] != cat.id_of(tensor_obj[(x, y)]):
                raise InterchangeViolation(
                    f"id ⊗ id is not the identity at ({x!r}, {y!r})", x=x, y=y
                )
    pairs = cat.composable_pairs()
    for (f2, f1) in pairs:
        for (g2, g1) in pairs:
            lhs = tensor_mor[(cat.compose(f2, f1), cat.compose(g2, g1))]
            rhs = cat.compose(tensor_mor[(f2, g2)], tensor_mor[(f1, g1)])
            if lhs != rhs:
                raise InterchangeViolation(
                    "interchange fails", f2=f2, f1=f1, g2=g2, g1=g1
                )

    # strict unit
    for x in objs:
        if tensor_obj[(unit, x)] != x or tensor_obj[(x, unit)] != x:
            raise UnitViolation(f"unit is not strict at object {x!r}", object=x)
    iu = cat.id_of(unit)
    for f in mors:
        if tensor_mor[(iu, f)] != f or tensor_mor[(f, iu)] != f:
            raise UnitViolation(f"unit is not strict at morphism {f!r}", morphism=f)

    # strict associativity
    for x in objs:
        for y in objs:
            xy = tensor_obj[(x, y)]
            for z in objs:
                if tensor_obj[(xy, z)] != tensor_obj[(x, tensor_obj[(y, z)])]:
                    raise StrictAssociativityViolation(
                        "object tensor is not strictly associative", x=x, y=y, z=z
                    )
    for f in mors:
        for g in mors:
            fg = tensor_mor[(f, g)]
            for h in mors:
                if tensor_mor[(fg, h)] != tensor_mor[(f, tensor_mor[(g, h)])]:
                    raise StrictAssociativityViolation(
                        "morphism tensor is not strictly associative", f=f, g=g, h=h
                    )

    # symmetry: typing, iso, self-inverse after swap, naturality
    for (x, y), sxy in symmetry.items():
        if not cat.has_morphism(sxy):
            raise DanglingID(f"symmetry({x!r}, {y!r}) names unknown morphism")
        if (cat.dom(sxy), cat.cod(sxy)) != (tensor_obj[(x, y)], tensor_obj[(y, x)]):
            raise SymmetryNotIso(
                f"symmetry({x!r}, {y!r}) has wrong endpoints", x=x, y=y
            )
        if "iso" not in classify_morphism(cat, sxy):
            raise SymmetryNotIso(f"symmetry({x!r}, {y!r}) is not an iso", x=x, y=y)
        if cat.compose(symmetry[(y, x)], sxy) != cat.id_of(tensor_obj[(x, y)]):
            raise SymmetryNotIso(
                f"symmetry does not swap to the identity at ({x!r}, {y!r})", x=x, y=y
            )
    for f in mors:
        for g in mors:
            lhs = cat.compose(
                symmetry[(cat.cod(f), cat.cod(g))], tensor_mor[(f, g)]
            )
            rhs = cat.compose(
                tensor_mor[(g, f)], symmetry[(cat.dom(f), cat.dom(g))]
            )
            if lhs != rhs:
                raise NaturalityViolation("symmetry is not natural", f=f, g=g)

    # curry: bijection tables indexed by (X, Y, Z)
    curry: dict = {}
    for entry in raw["curry"]:
        if len(entry) != 5:
            raise SchemaError("curry entries are [x, y, z, f, g]", path="curry")
        x, y, z, f, g = entry
        curry.setdefault((x, y, z), {})[f] = g
    for x in objs:
        for y in objs:
            for z in objs:
                table = curry.get((x, y, z), {})
                source = cat.hom(tensor_obj[(x, y)], z)
                target = cat.hom(x, hom_obj[(y, z)])
                if set(table) != set(source):
                    raise CurryNotBijective(
                        f"curry at ({x!r}, {y!r}, {z!r}) is not total on its source",
                        x=x, y=y, z=z,
                    )
                values = list(table.values())
                if sorted(values) != sorted(set(values)) or set(values) != set(target):
                    raise CurryNotBijective(
                        f"curry at ({x!r}, {y!r}, {z!r}) is not a bijection",
                        x=x, y=y, z=z,
                    )
                curry[(x, y, z)] = table

    s = MonoidalClosedStructure(
        cat, tensor_obj, tensor_mor, unit, symmetry, hom_obj, curry, _validated=True
    )

    # curry naturality in all three arguments, via the induced hom action
    for (x, y, z), table in sorted(curry.items()):
        for f, cf in sorted(table.items()):
            for u in mors:  # contravariant in X
                if cat.cod(u) != x:
                    continue
                lhs = s.curry(cat.dom(u), y, z, cat.compose(f, tensor_mor[(u, cat.id_of(y))]))
                if lhs != cat.compose(cf, u):
                    raise NaturalityViolation(
                        "curry not natural in the first argument", x=x, y=y, z=z, f=f, u=u
                    )
            for v in mors:  # contravariant in Y
                if cat.cod(v) != y:
                    continue
                lhs = s.curry(x, cat.dom(v), z, cat.compose(f, tensor_mor[(cat.id_of(x), v)]))
                if lhs != cat.compose(apply_hom(s, v, cat.id_of(z)), cf):
                    raise NaturalityViolation(
                        "curry not natural in the second argument", x=x, y=y, z=z, f=f, v=v
                    )
            for w in mors:  # covariant in Z
                if cat.dom(w) != z:
                    continue
                lhs = s.curry(x, y, cat.cod(w), cat.compose(w, f))
                if lhs != cat.compose(apply_hom(s, cat.id_of(y), w), cf):
                    raise NaturalityViolation(
                        "curry not natural in the third argument", x=x, y=y, z=z, f=f, w=w
                    )

    return s


# -- quantales -----------------------------------------------------------------


@dataclass(frozen=True)
class QuantaleSpec:
    """Finite commutative residuated ordered monoid, given as tables.

    ``order`` lists pairs (x, y) meaning x <= y, already reflexive and
    transitive; ``tensor`` maps pairs to elements; residuals must exist for
    every pair, which is exactly closedness of the induced thin category.
    """

    elements: tuple[str, ...]
    order: frozenset
    tensor: Mapping
    unit: str

    def leq(self, x: str, y: str) -> bool:
        return (x, y) in self.order

    def mul(self, x: str, y: str) -> str:
        return self.tensor[(x, y)]


def validate_quantale(spec: QuantaleSpec) -> QuantaleSpec:
    els = spec.elements
    if len(set(els)) != len(els):
        raise SchemaError("quantale carrier has duplicate elements")
    for (x, y) in spec.order:
        if x not in els or y not in els:
            raise DanglingID("order mentions unknown element", pair=[x, y])
    for x in els:
        if not spec.leq(x, x):
            raise SchemaError(f"order not reflexive at {x!r}")
        for y in els:
            if spec.leq(x, y) and spec.leq(y, x) and x != y:
                raise SchemaError(f"order not antisymmetric on ({x!r}, {y!r})")
            for z in els:
                if spec.leq(x, y) and spec.leq(y, z) and not spec.leq(x, z):
                    raise SchemaError(f"order not transitive on ({x!r}, {y!r}, {z!r})")
    if spec.unit not in els:
        raise DanglingID(f"unit {spec.unit!r} not in carrier")
    for x in els:
        for y in els:
            if (x, y) not in spec.tensor:
                raise SchemaError(f"tensor missing entry ({x!r}, {y!r})")
            if spec.mul(x, y) not in els:
                raise DanglingID(f"tensor({x!r}, {y!r}) leaves the carrier")
            if spec.mul(x, y) != spec.mul(y, x):
                raise SchemaError(f"tensor not commutative on ({x!r}, {y!r})")
            for z in els:
                if spec.mul(spec.mul(x, y), z) != spec.mul(x, spec.mul(y, z)):
                    raise SchemaError(
                        f"tensor not associative on ({x!r}, {y!r}, {z!r})"
                    )
        if spec.mul(spec.unit, x) != x:
            raise SchemaError(f"unit law fails at {x!r}")
    for x in els:
        for x2 in els:
            if not spec.leq(x, x2):
                continue
            for y in els:
                if not spec.leq(spec.mul(x, y), spec.mul(x2, y)):
                    raise NotMonotone(
                        "tensor not monotone", x=x, x2=x2, y=y
                    )
    for x in els:
        for z in els:
            if residual(spec, x, z) is None:
                raise NotResiduated(
                    f"no residual for ({x!r}, {z!r})", x=x, z=z
                )
    return spec


def residual(spec: QuantaleSpec, x: str, z: str) -> Optional[str]:
    """Largest y with x ⊗ y <= z, or None when the candidate set has no max."""
    candidates = [y for y in spec.elements if spec.leq(spec.mul(x, y), z)]
    for y in candidates:
        if all(spec.leq(c, y) for c in candidates):
            return y
    return None


def _le_id(x: str, y: str) -> str:
    return f"le:{x}:{y}"


def quantale_to_V(spec: QuantaleSpec):
    """Thin monoidal closed category induced by a validated quantale.

    One morphism x -> y per order pair, tensor and hom tables induced by
    the monoid and its residuals.  The output always re-passes
    validate_monoidal_closed.
    """
    validate_quantale(spec)
    els = spec.elements
    morphisms = {_le_id(x, y): (x, y) for x in els for y in els if spec.leq(x, y)}
    identity = {x: _le_id(x, x) for x in els}
    compose = {}
    for g, (gd, gc) in morphisms.items():
        for f, (fd, fc) in morphisms.items():
            if fc == gd:
                compose[(g, f)] = _le_id(fd, gc)
    cat = build_category(els, morphisms, identity, compose)

    tensor_obj = [[x, y, spec.mul(x, y)] for x in els for y in els]
    tensor_mor = []
    for f, (fd, fc) in sorted(morphisms.items()):
        for g, (gd, gc) in sorted(morphisms.items()):
            tensor_mor.append([f, g, _le_id(spec.mul(fd, gd), spec.mul(fc, gc))])
    symmetry = [[x, y, identity[spec.mul(x, y)]] for x in els for y in els]
    curry = []
    for y in els:
        for z in els:
            r = residual(spec, y, z)
            # curry source hom(x⊗y, z), target hom(x, y=>z)
            for x in els:
                if spec.leq(spec.mul(x, y), z):
                    if not spec.leq(x, r):
                        raise NotResiduated(
                            "residuation fails to curry", x=x, y=y, z=z
                        )
                    curry.append([x, y, z, _le_id(spec.mul(x, y), z), _le_id(x, r)])
    raw = {
        "tensor_obj": tensor_obj,
        "tensor_mor": tensor_mor,
        "unit": spec.unit,
        "symmetry": symmetry,
        "hom_obj": [[x, y, residual(spec, x, y)] for x in els for y in els],
        "curry": curry,
    }
    return cat, validate_monoidal_closed(cat, raw)


def chain_quantale(n: int, tensor: str) -> QuantaleSpec:
    """Linear quantale on n elements q0 < ... < q{n-1}, unit at the top.

    tensor "min" gives the Heyting chain; "lukasiewicz" truncated addition
    shifted so the top is neutral.
    """
    if n < 1:
        raise SchemaError("chain quantale needs at least one element")
    els = tuple(f"q{i}" for i in range(n))
    order = frozenset(
        (els[i], els[j]) for i in range(n) for j in range(n) if i <= j
    )
    table = {}
    for i in range(n):
        for j in range(n):
            if tensor == "min":
                k = min(i, j)
            elif tensor == "lukasiewicz":
                k = max(0, i + j - (n - 1))
            else:
                raise SchemaError(f"unknown chain tensor {tensor!r}")
            table[(els[i], els[j])] = els[k]
    return QuantaleSpec(els, order, table, els[n - 1])
