"""Document format, canonical JSON, content hashing, and corpus generators.

Documents are JSON with kind in {category, monoidal, enriched, generator}.
Canonical form sorts object keys bytewise and every table array in ID
order, with no insignificant whitespace; the content hash covers the
canonical serialization minus the hash field itself, so golden files are
bit-exact and round-trip stable.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .enriched import (
    SetEnriched,
    TableEnriched,
    build_finset,
    build_thin_enriched,
    validate_enriched,
)
from .errors import (
    DirectiveError,
    DocumentSyntaxError,
    DuplicateID,
    SchemaError,
)
from .fincat import FinCategory, build_category, validate_category
from .monoidal import (
    MonoidalClosedStructure,
    QuantaleSpec,
    chain_quantale,
    quantale_to_V,
    validate_monoidal_closed,
    validate_quantale,
)

KINDS = ("category", "monoidal", "enriched", "generator")
DIRECTIVES = ("finset", "quantale_chain", "poset", "walking", "opposite")


@dataclass(frozen=True)
class Document:
    kind: str
    body: dict
    meta: dict

    @property
    def name(self) -> str:
        return self.meta["name"]

    def to_json(self) -> dict:
        return {"kind": self.kind, "body": self.body, "meta": self.meta}


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _strings(items, path):
    for x in items:
        if not isinstance(x, str):
            raise SchemaError("expected a string", path=path)
    return list(items)


def _canon_category(body, path) -> dict:
    for key in ("objects", "morphisms", "identity", "compose"):
        if key not in body:
            raise SchemaError(f"missing field {key!r}", path=f"{path}.{key}")
    objects = sorted(_strings(body["objects"], f"{path}.objects"))
    if len(set(objects)) != len(objects):
        raise DuplicateID("duplicate object ID", path=f"{path}.objects")
    morphisms = []
    seen = set()
    for i, entry in enumerate(body["morphisms"]):
        if not isinstance(entry, dict) or set(entry) != {"id", "dom", "cod"}:
            raise SchemaError(
                "morphism entries have exactly id/dom/cod",
                path=f"{path}.morphisms[{i}]",
            )
        if entry["id"] in seen:
            raise DuplicateID(
                f"duplicate morphism ID {entry['id']!r}",
                path=f"{path}.morphisms[{i}]",
            )
        seen.add(entry["id"])
        morphisms.append({"id": entry["id"], "dom": entry["dom"], "cod": entry["cod"]})
    morphisms.sort(key=lambda m: m["id"])
    identity = body["identity"]
    if not isinstance(identity, dict):
        raise SchemaError("identity must be an object", path=f"{path}.identity")
    compose = []
    keys = set()
    for i, entry in enumerate(body["compose"]):
        if len(entry) != 3:
            raise SchemaError("compose entries are [g, f, h]", path=f"{path}.compose[{i}]")
        g, f, h = entry
        if (g, f) in keys:
            raise DuplicateID(
                f"duplicate compose entry ({g!r}, {f!r})", path=f"{path}.compose[{i}]"
            )
        keys.add((g, f))
        compose.append([g, f, h])
    compose.sort()
    return {
        "objects": objects,
        "morphisms": morphisms,
        "identity": {k: identity[k] for k in sorted(identity)},
        "compose": compose,
    }


def _canon_table(entries, arity, path) -> list:
    out = []
    keys = set()
    for i, entry in enumerate(entries):
        if len(entry) != arity + 1:
            raise SchemaError(
                f"entries here have {arity + 1} fields", path=f"{path}[{i}]"
            )
        key = tuple(entry[:-1])
        if key in keys:
            raise DuplicateID("duplicate table key", path=f"{path}[{i}]")
        keys.add(key)
        out.append(list(entry))
    out.sort()
    return out


def _canon_monoidal(body, path) -> dict:
    for key in ("category", "tensor_obj", "tensor_mor", "unit", "symmetry",
                "hom_obj", "curry"):
        if key not in body:
            raise SchemaError(f"missing field {key!r}", path=f"{path}.{key}")
    return {
        "category": _canon_category(body["category"], f"{path}.category"),
        "tensor_obj": _canon_table(body["tensor_obj"], 2, f"{path}.tensor_obj"),
        "tensor_mor": _canon_table(body["tensor_mor"], 2, f"{path}.tensor_mor"),
        "unit": body["unit"],
        "symmetry": _canon_table(body["symmetry"], 2, f"{path}.symmetry"),
        "hom_obj": _canon_table(body["hom_obj"], 2, f"{path}.hom_obj"),
        "curry": _canon_table(body["curry"], 4, f"{path}.curry"),
    }


def _canon_enriched(body, path) -> dict:
    backend = body.get("backend")
    if backend == "finset":
        if not isinstance(body.get("max_size"), int):
            raise SchemaError("finset backend needs integer max_size", path=path)
        return {
            "backend": "finset",
            "max_size": body["max_size"],
            "op": bool(body.get("op", False)),
        }
    if backend != "table":
        raise SchemaError(f"unknown enriched backend {backend!r}", path=path)
    for key in ("v", "objects", "hom", "comp", "ids"):
        if key not in body:
            raise SchemaError(f"missing field {key!r}", path=f"{path}.{key}")
    return {
        "backend": "table",
        "v": _canon_monoidal(body["v"], f"{path}.v"),
        "objects": sorted(_strings(body["objects"], f"{path}.objects")),
        "hom": _canon_table(body["hom"], 2, f"{path}.hom"),
        "comp": _canon_table(body["comp"], 3, f"{path}.comp"),
        "ids": _canon_table(body["ids"], 1, f"{path}.ids"),
    }


def _canon_generator(body, path) -> dict:
    directive = body.get("directive")
    if directive not in DIRECTIVES:
        raise SchemaError(f"unknown directive {directive!r}", path=path)
    if directive == "finset":
        return {"directive": "finset", "max_size": int(body["max_size"])}
    if directive == "quantale_chain":
        return {
            "directive": "quantale_chain",
            "n": int(body["n"]),
            "tensor": body["tensor"],
        }
    if directive == "poset":
        return {
            "directive": "poset",
            "elements": sorted(_strings(body["elements"], f"{path}.elements")),
            "relation": sorted([list(p) for p in body["relation"]]),
        }
    if directive == "walking":
        return {"directive": "walking", "shape": body["shape"]}
    inner = body.get("doc")
    if not isinstance(inner, dict):
        raise SchemaError("opposite directive needs an embedded document", path=path)
    return {"directive": "opposite", "doc": _canonical_document_dict(inner)}


_CANON = {
    "category": _canon_category,
    "monoidal": _canon_monoidal,
    "enriched": _canon_enriched,
    "generator": _canon_generator,
}


def _document_hash(kind: str, body: dict, meta_core: dict) -> str:
    blob = canonical_json({"kind": kind, "body": body, "meta": meta_core})
    return hashlib.sha256(blob.encode()).hexdigest()


def make_document(kind: str, body: dict, name: str, version: str = "1") -> Document:
    if kind not in KINDS:
        raise SchemaError(f"unknown document kind {kind!r}", path="kind")
    canonical = _CANON[kind](body, "body")
    meta_core = {"name": name, "version": version}
    digest = _document_hash(kind, canonical, meta_core)
    return Document(kind, canonical, {**meta_core, "hash": digest})


def _canonical_document_dict(raw: dict) -> dict:
    doc = _document_from_raw(raw)
    return doc.to_json()


def _document_from_raw(raw: dict) -> Document:
    if not isinstance(raw, dict):
        raise SchemaError("document must be a JSON object", path="")
    for key in ("kind", "body", "meta"):
        if key not in raw:
            raise SchemaError(f"missing field {key!r}", path=key)
    meta = raw["meta"]
    if not isinstance(meta, dict) or "name" not in meta:
        raise SchemaError("meta needs at least a name", path="meta")
    doc = make_document(
        raw["kind"],
        raw["body"],
        meta["name"],
        str(meta.get("version", "1")),
    )
    claimed = meta.get("hash")
    if claimed is not None and claimed != doc.meta["hash"]:
        raise SchemaError(
            "content hash does not match the canonical serialization",
            path="meta.hash",
            claimed=claimed,
            actual=doc.meta["hash"],
        )
    return doc


def parse(text: str) -> Document:
    """Parse and canonicalize a document; verifies the hash when present."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise DocumentSyntaxError(
            f"invalid JSON: {err.msg}", line=err.lineno, column=err.colno
        ) from None
    return _document_from_raw(raw)


def serialize(doc: Document) -> str:
    return canonical_json(doc.to_json())


def load_entity(doc: Document):
    """Validated engine object for a document; generators expand first."""
    if doc.kind == "category":
        return validate_category(doc.body)
    if doc.kind == "monoidal":
        cat = validate_category(doc.body["category"])
        return validate_monoidal_closed(cat, doc.body)
    if doc.kind == "enriched":
        return validate_enriched(doc.body)
    return load_entity(generate_corpus(doc.body))


# -- generators ---------------------------------------------------------------------


def _walking_arrow_body() -> dict:
    morphisms = {"id:0": ("0", "0"), "id:1": ("1", "1"), "a": ("0", "1")}
    compose = {
        ("id:0", "id:0"): "id:0",
        ("id:1", "id:1"): "id:1",
        ("a", "id:0"): "a",
        ("id:1", "a"): "a",
    }
    return build_category(["0", "1"], morphisms, {"0": "id:0", "1": "id:1"}, compose).canonical_body()


def _walking_square_body() -> dict:
    objects = ["p", "x", "y", "z"]
    morphisms = {
        "id:p": ("p", "p"),
        "id:x": ("x", "x"),
        "id:y": ("y", "y"),
        "id:z": ("z", "z"),
        "f": ("p", "x"),
        "g": ("p", "y"),
        "h": ("x", "z"),
        "k": ("y", "z"),
        "d": ("p", "z"),
    }
    identity = {"p": "id:p", "x": "id:x", "y": "id:y", "z": "id:z"}
    compose = {}
    for m, (d0, c0) in morphisms.items():
        compose[(m, identity[d0])] = m
        compose[(identity[c0], m)] = m
    compose[("h", "f")] = "d"
    compose[("k", "g")] = "d"
    return build_category(objects, morphisms, identity, compose).canonical_body()


def poset_category(elements, relation) -> FinCategory:
    """Thin category of a poset given by generating order pairs.

    The reflexive-transitive closure is taken; antisymmetry violations are
    rejected.
    """
    els = sorted(set(elements))
    leq = {(x, x) for x in els}
    for x, y in relation:
        if x not in els or y not in els:
            raise DirectiveError("relation mentions unknown element", pair=[x, y])
        leq.add((x, y))
    changed = True
    while changed:
        changed = False
        for x, y in list(leq):
            for y2, z in list(leq):
                if y == y2 and (x, z) not in leq:
                    leq.add((x, z))
                    changed = True
    for x, y in leq:
        if x != y and (y, x) in leq:
            raise DirectiveError("relation is not antisymmetric", pair=[x, y])
    morphisms = {f"le:{x}:{y}": (x, y) for x, y in leq}
    identity = {x: f"le:{x}:{x}" for x in els}
    compose = {}
    for g, (gd, gc) in morphisms.items():
        for f, (fd, fc) in morphisms.items():
            if fc == gd:
                compose[(g, f)] = f"le:{fd}:{gc}"
    return build_category(els, morphisms, identity, compose)


def opposite_document(doc: Document) -> Document:
    """Reverse a category or enriched document; names toggle an op_ prefix."""
    name = doc.name
    new_name = name[3:] if name.startswith("op_") else f"op_{name}"
    if doc.kind == "category":
        body = doc.body
        morphisms = [
            {"id": m["id"], "dom": m["cod"], "cod": m["dom"]}
            for m in body["morphisms"]
        ]
        compose = [[f, g, h] for g, f, h in body["compose"]]
        return make_document(
            "category",
            {
                "objects": body["objects"],
                "morphisms": morphisms,
                "identity": body["identity"],
                "compose": compose,
            },
            new_name,
            doc.meta["version"],
        )
    if doc.kind == "enriched":
        if doc.body.get("backend") == "finset":
            body = dict(doc.body, op=not doc.body.get("op", False))
            return make_document("enriched", body, new_name, doc.meta["version"])
        entity = load_entity(doc)
        return make_document(
            "enriched", entity.opposite().canonical_body(), new_name, doc.meta["version"]
        )
    if doc.kind == "generator":
        return opposite_document(generate_corpus(doc.body))
    raise DirectiveError(
        f"cannot take the opposite of a {doc.kind} document", kind=doc.kind
    )


def generate_corpus(directive: dict) -> Document:
    """Expand a generator directive into a validated document."""
    canon = _canon_generator(directive, "directive")
    kind = canon["directive"]
    if kind == "finset":
        n = canon["max_size"]
        return make_document(
            "enriched", {"backend": "finset", "max_size": n, "op": False}, f"finset{n}"
        )
    if kind == "quantale_chain":
        spec = chain_quantale(canon["n"], canon["tensor"])
        _, mcs = quantale_to_V(spec)
        return make_document(
            "monoidal", mcs.canonical_body(), f"chain{canon['n']}_{canon['tensor']}"
        )
    if kind == "poset":
        cat = poset_category(canon["elements"], canon["relation"])
        return make_document("category", cat.canonical_body(), "poset")
    if kind == "walking":
        shape = canon["shape"]
        if shape == "arrow":
            return make_document("category", _walking_arrow_body(), "w2")
        if shape == "square":
            return make_document("category", _walking_square_body(), "walking_square")
        raise DirectiveError(f"unknown walking shape {shape!r}", shape=shape)
    inner = _document_from_raw(canon["doc"])
    return opposite_document(inner)


# -- enriched corpus builders ----------------------------------------------------------


def self_enrichment(v: MonoidalClosedStructure) -> TableEnriched:
    """The enriching category as a category enriched in itself.

    Hom-objects are the internal homs; composition and identities are the
    curried evaluation composites.
    """
    vcat = v.base
    objects = vcat.objects
    hom = {(a, b): v.hom_obj(a, b) for a in objects for b in objects}
    comp = {}
    for a in objects:
        for b in objects:
            for c in objects:
                hbc, hab = hom[(b, c)], hom[(a, b)]
                inner = vcat.compose(
                    v.ev(b, c), v.tensor_mor(vcat.id_of(hbc), v.ev(a, b))
                )
                comp[(a, b, c)] = v.curry(v.tensor_obj(hbc, hab), a, c, inner)
    ids = {a: v.curry(v.unit, a, a, vcat.id_of(a)) for a in objects}
    from .enriched import validate_table_enriched

    return validate_table_enriched(v, objects, hom, comp, ids)


def enriched_chain(
    n: int, quantale: QuantaleSpec, rule: str = "crisp"
) -> TableEnriched:
    """A linear preorder of n objects enriched in a chain quantale.

    rule "crisp" scores a hom at the top truth value when the source sits
    below the target and at the bottom otherwise; rule "graded" decreases
    one truth step per unit of backward distance.
    """
    validate_quantale(quantale)
    _, v = quantale_to_V(quantale)
    els = quantale.elements
    k = len(els)
    objects = [f"c{i}" for i in range(n)]

    def score(i: int, j: int) -> str:
        if rule == "crisp":
            return els[k - 1] if i <= j else els[0]
        if rule == "graded":
            return els[max(0, k - 1 - max(0, i - j))]
        raise DirectiveError(f"unknown chain enrichment rule {rule!r}", rule=rule)

    hom = {
        (objects[i], objects[j]): score(i, j)
        for i in range(n)
        for j in range(n)
    }
    return build_thin_enriched(v, objects, hom)


def graded_diamond(quantale: QuantaleSpec) -> TableEnriched:
    """Four objects whose underlying poset has a product that no hom
    functor preserves: the probe object sees both factors at middle truth
    but their meet at bottom truth."""
    els = quantale.elements
    if len(els) < 3:
        raise DirectiveError("graded diamond needs at least three truth values")
    bot, mid, top = els[0], els[1], els[-1]
    _, v = quantale_to_V(quantale)
    objects = ["a", "p", "x", "y"]
    hom = {(u, w): bot for u in objects for w in objects}
    for u in objects:
        hom[(u, u)] = top
    hom[("p", "x")] = top
    hom[("p", "y")] = top
    hom[("a", "x")] = mid
    hom[("a", "y")] = mid
    return build_thin_enriched(v, objects, hom)


def corpus() -> dict:
    """The standard corpus: named documents plus all their opposites."""
    v2 = chain_quantale(2, "min")
    luk3 = chain_quantale(3, "lukasiewicz")
    base = {
        "w2": generate_corpus({"directive": "walking", "shape": "arrow"}),
        "walking_square": generate_corpus({"directive": "walking", "shape": "square"}),
        "chain3_v2": make_document(
            "enriched", enriched_chain(3, v2, "crisp").canonical_body(), "chain3_v2"
        ),
        "chain4_v2": make_document(
            "enriched", enriched_chain(4, v2, "crisp").canonical_body(), "chain4_v2"
        ),
        "chain3_luk3": make_document(
            "enriched", self_enrichment(quantale_to_V(luk3)[1]).canonical_body(),
            "chain3_luk3",
        ),
        "chain4_luk3": make_document(
            "enriched", enriched_chain(4, luk3, "graded").canonical_body(),
            "chain4_luk3",
        ),
        "finset3": generate_corpus({"directive": "finset", "max_size": 3}),
    }
    out = dict(base)
    for name, doc in base.items():
        op = opposite_document(doc)
        out[op.name] = op
    return out


def extras() -> dict:
    """Bespoke fixtures outside the standard corpus."""
    luk3 = chain_quantale(3, "lukasiewicz")
    diamond = make_document(
        "enriched", graded_diamond(luk3).canonical_body(), "diamond_luk3"
    )
    bowtie = generate_corpus(
        {
            "directive": "poset",
            "elements": ["a", "b", "c", "d"],
            "relation": [["c", "a"], ["c", "b"], ["d", "a"], ["d", "b"]],
        }
    )
    bowtie = make_document("category", bowtie.body, "bowtie")
    return {
        "diamond_luk3": diamond,
        "op_diamond_luk3": opposite_document(diamond),
        "bowtie": bowtie,
    }
