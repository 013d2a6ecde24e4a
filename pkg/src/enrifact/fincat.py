"""Finite categories as validated composition tables.

Objects and morphisms are opaque string IDs ordered bytewise.  Every
decision procedure below is an exhaustive search over the supplied tables,
so all verdicts are internal to the given finite category: a truncation of
a larger category may lack limits, kernel pairs, or fillers that the
ambient category possesses.  Reports therefore carry the category's
content hash alongside each verdict.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Optional, Sequence

from .errors import (
    AssociativityViolation,
    DanglingID,
    DuplicateID,
    IdentityViolation,
    MalformedDiagram,
    MissingComposite,
    NonCommutingSquare,
    SchemaError,
)


@dataclass(frozen=True)
class Verdict:
    """Boolean outcome plus a witness or counterexample payload.

    ``witness`` carries re-validatable data when the checked property is
    existential; ``counterexample`` carries re-falsifiable data when the
    verdict is negative.  ``reason`` is a stable machine-readable code.
    """

    holds: bool
    reason: str
    witness: Any = None
    counterexample: Any = None

    def to_json(self):
        return {
            "holds": self.holds,
            "reason": self.reason,
            "witness": self.witness,
            "counterexample": self.counterexample,
        }


class FinCategory:
    """A validated finite category.

    Immutable once built (use :func:`validate_category`); every method is a
    pure query, so instances are safe for concurrent read-only use.
    """

    def __init__(self, objects, morphisms, identity, compose, _validated=False):
        if not _validated:
            raise TypeError("construct via validate_category()")
        self.objects: tuple[str, ...] = tuple(sorted(objects))
        self._mor: dict[str, tuple[str, str]] = dict(morphisms)
        self.morphism_ids: tuple[str, ...] = tuple(sorted(self._mor))
        self.identity: dict[str, str] = dict(identity)
        self._compose: dict[tuple[str, str], str] = dict(compose)
        hom: dict[tuple[str, str], list[str]] = {}
        into: dict[str, list[str]] = {x: [] for x in self.objects}
        out_of: dict[str, list[str]] = {x: [] for x in self.objects}
        for m in self.morphism_ids:
            d, c = self._mor[m]
            hom.setdefault((d, c), []).append(m)
            into[c].append(m)
            out_of[d].append(m)
        self._hom = {k: tuple(v) for k, v in hom.items()}
        self._into = {k: tuple(v) for k, v in into.items()}
        self._from = {k: tuple(v) for k, v in out_of.items()}
        self._identity_ids = frozenset(self.identity.values())
        self._hash: Optional[str] = None
        # per-instance memo caches; values are idempotent pure-query results
        self.flag_cache: dict[str, frozenset] = {}
        self.vflag_cache: dict[str, frozenset] = {}
        self.ortho_cache: dict = {}
        self.limit_cache: dict = {}
        self.cone_cache: dict = {}
        self._kp_cache = None
        self._tensor_data = None
        self._cotensor_data = None

    # -- basic queries -------------------------------------------------------

    def has_morphism(self, f: str) -> bool:
        return f in self._mor

    def require(self, f: str) -> None:
        if f not in self._mor:
            raise DanglingID(f"unknown morphism ID {f!r}", morphism=f)

    def dom(self, f: str) -> str:
        self.require(f)
        return self._mor[f][0]

    def cod(self, f: str) -> str:
        self.require(f)
        return self._mor[f][1]

    def id_of(self, x: str) -> str:
        if x not in self.identity:
            raise DanglingID(f"unknown object ID {x!r}", object=x)
        return self.identity[x]

    def is_identity(self, f: str) -> bool:
        return f in self._identity_ids

    def compose(self, g: str, f: str) -> str:
        """Composite g after f; total on composable pairs by validation."""
        try:
            return self._compose[(g, f)]
        except KeyError:
            self.require(g)
            self.require(f)
            raise MissingComposite(
                f"pair ({g!r}, {f!r}) is not composable", g=g, f=f
            ) from None

    def hom(self, a: str, b: str) -> tuple[str, ...]:
        return self._hom.get((a, b), ())

    def morphisms_into(self, z: str) -> tuple[str, ...]:
        return self._into.get(z, ())

    def morphisms_from(self, a: str) -> tuple[str, ...]:
        return self._from.get(a, ())

    def composable_pairs(self):
        """All (g, f) with cod f = dom g, in deterministic order."""
        return sorted(self._compose)

    def isos(self) -> tuple[str, ...]:
        return tuple(
            f for f in self.morphism_ids if "iso" in classify_morphism(self, f)
        )

    # -- serialization ---------------------------------------------------------

    def canonical_body(self) -> dict:
        return {
            "objects": list(self.objects),
            "morphisms": [
                {"id": m, "dom": self._mor[m][0], "cod": self._mor[m][1]}
                for m in self.morphism_ids
            ],
            "identity": {x: self.identity[x] for x in self.objects},
            "compose": [[g, f, h] for (g, f), h in sorted(self._compose.items())],
        }

    @property
    def content_hash(self) -> str:
        if self._hash is None:
            blob = json.dumps(
                self.canonical_body(), sort_keys=True, separators=(",", ":")
            )
            self._hash = hashlib.sha256(blob.encode()).hexdigest()
        return self._hash

    def opposite(self) -> "FinCategory":
        morphisms = {m: (c, d) for m, (d, c) in self._mor.items()}
        compose = {(f, g): h for (g, f), h in self._compose.items()}
        return FinCategory(
            self.objects, morphisms, self.identity, compose, _validated=True
        )


def build_category(objects, morphisms, identity, compose) -> FinCategory:
    """Assemble a raw description and validate it.

    ``morphisms`` maps ID -> (dom, cod); ``compose`` maps (g, f) -> g∘f.
    """
    raw = {
        "objects": list(objects),
        "morphisms": [
            {"id": m, "dom": d, "cod": c} for m, (d, c) in sorted(morphisms.items())
        ],
        "identity": dict(identity),
        "compose": [[g, f, h] for (g, f), h in sorted(compose.items())],
    }
    return validate_category(raw)


def validate_category(raw: Mapping) -> FinCategory:
    """Check every category law exhaustively and return the validated table.

    The composition table must be total over composable pairs at input
    time; nothing is derived lazily, so malformed data surfaces here
    rather than mid-query.
    """
    if not isinstance(raw, Mapping):
        raise SchemaError("category body must be an object", path="body")
    for key in ("objects", "morphisms", "identity", "compose"):
        if key not in raw:
            raise SchemaError(f"missing field {key!r}", path=f"body.{key}")

    objects = list(raw["objects"])
    if len(set(objects)) != len(objects):
        dup = sorted(x for x in objects if objects.count(x) > 1)[0]
        raise DuplicateID(f"duplicate object ID {dup!r}", object=dup)
    obj_set = set(objects)

    morphisms: dict[str, tuple[str, str]] = {}
    for i, entry in enumerate(raw["morphisms"]):
        try:
            mid, d, c = entry["id"], entry["dom"], entry["cod"]
        except (KeyError, TypeError):
            raise SchemaError(
                "morphism entries need id/dom/cod", path=f"body.morphisms[{i}]"
            ) from None
        if mid in morphisms:
            raise DuplicateID(f"duplicate morphism ID {mid!r}", morphism=mid)
        if d not in obj_set:
            raise DanglingID(f"morphism {mid!r} has unknown dom {d!r}", morphism=mid)
        if c not in obj_set:
            raise DanglingID(f"morphism {mid!r} has unknown cod {c!r}", morphism=mid)
        morphisms[mid] = (d, c)

    identity = dict(raw["identity"])
    for x in objects:
        if x not in identity:
            raise IdentityViolation(f"object {x!r} has no identity", object=x)
        i = identity[x]
        if i not in morphisms:
            raise DanglingID(f"identity of {x!r} is unknown morphism {i!r}", object=x)
        if morphisms[i] != (x, x):
            raise IdentityViolation(
                f"identity {i!r} of {x!r} is not an endomorphism of {x!r}",
                object=x,
                morphism=i,
            )
    for x in identity:
        if x not in obj_set:
            raise DanglingID(f"identity table mentions unknown object {x!r}", object=x)

    compose: dict[tuple[str, str], str] = {}
    for i, entry in enumerate(raw["compose"]):
        if len(entry) != 3:
            raise SchemaError("compose entries are [g, f, h]", path=f"body.compose[{i}]")
        g, f, h = entry
        for m in (g, f, h):
            if m not in morphisms:
                raise DanglingID(f"compose entry mentions unknown {m!r}", morphism=m)
        if morphisms[f][1] != morphisms[g][0]:
            raise SchemaError(
                f"entry for non-composable pair ({g!r}, {f!r})",
                path=f"body.compose[{i}]",
            )
        if (g, f) in compose:
            raise DuplicateID(f"duplicate compose entry ({g!r}, {f!r})", g=g, f=f)
        if morphisms[h] != (morphisms[f][0], morphisms[g][1]):
            raise SchemaError(
                f"composite of ({g!r}, {f!r}) has wrong endpoints",
                path=f"body.compose[{i}]",
            )
        compose[(g, f)] = h

    # totality over exactly the composable pairs
    for g, (gd, _) in morphisms.items():
        for f, (_, fc) in morphisms.items():
            if fc == gd and (g, f) not in compose:
                raise MissingComposite(
                    f"no table entry for composable pair ({g!r}, {f!r})", g=g, f=f
                )

    # identity laws
    for f, (d, c) in morphisms.items():
        if compose[(f, identity[d])] != f:
            raise IdentityViolation(
                f"compose({f!r}, id_{d!r}) != {f!r}", morphism=f, object=d
            )
        if compose[(identity[c], f)] != f:
            raise IdentityViolation(
                f"compose(id_{c!r}, {f!r}) != {f!r}", morphism=f, object=c
            )

    # associativity over every composable triple
    by_dom: dict[str, list[str]] = {x: [] for x in objects}
    for m, (d, _) in morphisms.items():
        by_dom[d].append(m)
    for f, (_, fc) in morphisms.items():
        for g in by_dom[fc]:
            gf = compose[(g, f)]
            gc = morphisms[g][1]
            for h in by_dom[gc]:
                if compose[(h, gf)] != compose[(compose[(h, g)], f)]:
                    raise AssociativityViolation(
                        f"associativity fails on ({h!r}, {g!r}, {f!r})",
                        h=h,
                        g=g,
                        f=f,
                    )

    return FinCategory(objects, morphisms, identity, compose, _validated=True)


# -- morphism classification ---------------------------------------------------


def iso_inverse(cat: FinCategory, f: str) -> Optional[str]:
    """Two-sided inverse of f, or None.  Picks the least ID when several tie."""
    d, c = cat.dom(f), cat.cod(f)
    for g in cat.hom(c, d):
        if cat.compose(g, f) == cat.id_of(d) and cat.compose(f, g) == cat.id_of(c):
            return g
    return None


def classify_morphism(cat: FinCategory, f: str) -> frozenset:
    """Flags from {mono, epi, iso, section, retraction}, by exhaustive search."""
    cached = cat.flag_cache.get(f)
    if cached is not None:
        return cached
    d, c = cat.dom(f), cat.cod(f)
    flags = set()

    mono = True
    for a in cat.objects:
        seen: dict[str, str] = {}
        for x in cat.hom(a, d):
            fx = cat.compose(f, x)
            if fx in seen and seen[fx] != x:
                mono = False
                break
            seen[fx] = x
        if not mono:
            break
    if mono:
        flags.add("mono")

    epi = True
    for b in cat.objects:
        seen = {}
        for x in cat.hom(c, b):
            xf = cat.compose(x, f)
            if xf in seen and seen[xf] != x:
                epi = False
                break
            seen[xf] = x
        if not epi:
            break
    if epi:
        flags.add("epi")

    id_d, id_c = cat.id_of(d), cat.id_of(c)
    if any(cat.compose(r, f) == id_d for r in cat.hom(c, d)):
        flags.add("section")
    if any(cat.compose(f, s) == id_c for s in cat.hom(c, d)):
        flags.add("retraction")
    if iso_inverse(cat, f) is not None:
        flags.add("iso")

    result = frozenset(flags)
    cat.flag_cache[f] = result
    return result


# -- diagrams, cones, limits ---------------------------------------------------


@dataclass(frozen=True)
class Square:
    """Commuting square f: P->X, g: P->Y, h: X->Z, k: Y->Z with h∘f = k∘g."""

    f: str
    g: str
    h: str
    k: str

    def to_json(self):
        return {"f": self.f, "g": self.g, "h": self.h, "k": self.k}


@dataclass(frozen=True)
class Diagram:
    """Finite graph over a category: nodes carry objects, edges morphisms."""

    nodes: tuple[tuple[str, str], ...]
    edges: tuple[tuple[str, str, str], ...]

    @staticmethod
    def build(cat: FinCategory, nodes: Mapping[str, str], edges: Iterable) -> "Diagram":
        node_map = dict(nodes)
        for n, obj in node_map.items():
            if obj not in cat.identity:
                raise MalformedDiagram(f"node {n!r} names unknown object {obj!r}", node=n)
        seen = set()
        edge_list = []
        for e in edges:
            s, t, m = e
            if s not in node_map or t not in node_map:
                raise MalformedDiagram(f"edge {e!r} references unknown node", edge=list(e))
            if not cat.has_morphism(m):
                raise MalformedDiagram(f"edge morphism {m!r} unknown", edge=list(e))
            if cat.dom(m) != node_map[s] or cat.cod(m) != node_map[t]:
                raise MalformedDiagram(
                    f"edge morphism {m!r} does not match node objects", edge=list(e)
                )
            if (s, t, m) in seen:
                continue
            seen.add((s, t, m))
            edge_list.append((s, t, m))
        return Diagram(tuple(sorted(node_map.items())), tuple(sorted(edge_list)))

    @staticmethod
    def empty() -> "Diagram":
        return Diagram((), ())

    @staticmethod
    def discrete(cat: FinCategory, objs: Sequence[str]) -> "Diagram":
        return Diagram.build(cat, {f"n{i}": x for i, x in enumerate(objs)}, [])

    @staticmethod
    def cospan(cat: FinCategory, f: str, g: str) -> "Diagram":
        if cat.cod(f) != cat.cod(g):
            raise MalformedDiagram("cospan legs need a common codomain", f=f, g=g)
        return Diagram.build(
            cat,
            {"l": cat.dom(f), "r": cat.dom(g), "z": cat.cod(f)},
            [("l", "z", f), ("r", "z", g)],
        )

    @staticmethod
    def parallel_pair(cat: FinCategory, f: str, g: str) -> "Diagram":
        if cat.dom(f) != cat.dom(g) or cat.cod(f) != cat.cod(g):
            raise MalformedDiagram("parallel pair needs matching endpoints", f=f, g=g)
        return Diagram.build(
            cat,
            {"a": cat.dom(f), "b": cat.cod(f)},
            [("a", "b", f), ("a", "b", g)],
        )

    @staticmethod
    def wide_cospan(cat: FinCategory, family: Sequence[str], codomain: str) -> "Diagram":
        nodes = {"t": codomain}
        edges = []
        width = max(2, len(str(max(len(family) - 1, 0))))
        for i, m in enumerate(sorted(family)):
            if cat.cod(m) != codomain:
                raise MalformedDiagram(
                    f"family member {m!r} does not land in {codomain!r}", morphism=m
                )
            node = f"b{i:0{width}d}"
            nodes[node] = cat.dom(m)
            edges.append((node, "t", m))
        return Diagram.build(cat, nodes, edges)

    def node_object(self, node: str) -> str:
        for n, obj in self.nodes:
            if n == node:
                return obj
        raise MalformedDiagram(f"unknown node {node!r}", node=node)


@dataclass(frozen=True)
class Cone:
    """Apex plus one leg per diagram node, commuting with every edge."""

    apex: str
    legs: tuple[tuple[str, str], ...]

    def leg(self, node: str) -> str:
        for n, m in self.legs:
            if n == node:
                return m
        raise MalformedDiagram(f"cone has no leg at {node!r}", node=node)

    def legs_dict(self) -> dict:
        return dict(self.legs)

    def to_json(self):
        return {"apex": self.apex, "legs": dict(self.legs)}


def is_cone(cat: FinCategory, diagram: Diagram, cone: Cone) -> bool:
    legs = dict(cone.legs)
    if set(legs) != {n for n, _ in diagram.nodes}:
        return False
    for n, obj in diagram.nodes:
        m = legs[n]
        if not cat.has_morphism(m) or cat.dom(m) != cone.apex or cat.cod(m) != obj:
            return False
    return all(cat.compose(m, legs[s]) == legs[t] for s, t, m in diagram.edges)


def _assignment_order(diagram: Diagram) -> list:
    """Node order preferring forced or edge-constrained nodes.

    A node whose in-edge source is already placed gets its leg forced; a
    node sharing any edge with a placed node gets a filtered pool.  This
    keeps wide cospans linear instead of enumerating a full leg product.
    """
    nodes = [n for n, _ in diagram.nodes]
    neighbors: dict[str, set] = {n: set() for n in nodes}
    sources: dict[str, set] = {n: set() for n in nodes}
    for s, t, _ in diagram.edges:
        neighbors[s].add(t)
        neighbors[t].add(s)
        sources[t].add(s)
    order: list = []
    placed: set = set()
    remaining = list(nodes)
    while remaining:
        pick = None
        for n in remaining:
            if sources[n] & placed:
                pick = n
                break
        if pick is None:
            for n in remaining:
                if neighbors[n] & placed:
                    pick = n
                    break
        if pick is None:
            pick = remaining[0]
        order.append(pick)
        placed.add(pick)
        remaining.remove(pick)
    return order


def cones_with_apex(cat: FinCategory, diagram: Diagram, apex: str):
    """All cones over the diagram with the given apex, legs in lexicographic
    order of the node-sorted leg tuple.  Cached per (diagram, apex)."""
    key = (diagram, apex)
    cached = cat.cone_cache.get(key)
    if cached is not None:
        return cached
    order = _assignment_order(diagram)
    obj = dict(diagram.nodes)
    in_edges: dict[str, list] = {n: [] for n in obj}
    out_edges: dict[str, list] = {n: [] for n in obj}
    for s, t, m in diagram.edges:
        out_edges[s].append((t, m))
        in_edges[t].append((s, m))

    results: list[Cone] = []
    legs: dict[str, str] = {}

    def extend(i: int):
        if i == len(order):
            results.append(Cone(apex, tuple(sorted(legs.items()))))
            return
        n = order[i]
        forced = None
        for s, m in in_edges[n]:
            if s in legs:
                v = cat.compose(m, legs[s])
                if forced is None:
                    forced = v
                elif forced != v:
                    return
        pool = (forced,) if forced is not None else cat.hom(apex, obj[n])
        for cand in pool:
            ok = True
            for t, m in out_edges[n]:
                want = cand if t == n else legs.get(t)
                if want is not None and cat.compose(m, cand) != want:
                    ok = False
                    break
            if ok:
                legs[n] = cand
                extend(i + 1)
                del legs[n]

    extend(0)
    results.sort(key=lambda c: c.legs)
    out = tuple(results)
    cat.cone_cache[key] = out
    return out


def all_cones(cat: FinCategory, diagram: Diagram):
    out = []
    for apex in cat.objects:
        out.extend(cones_with_apex(cat, diagram, apex))
    return out


def mediators(cat: FinCategory, source: Cone, target: Cone):
    """Morphisms u: source.apex -> target.apex with target.legs ∘ u = source.legs."""
    tlegs = target.legs
    slegs = dict(source.legs)
    out = []
    for u in cat.hom(source.apex, target.apex):
        if all(cat.compose(m, u) == slegs[n] for n, m in tlegs):
            out.append(u)
    return out


def _terminal_among(cat: FinCategory, cones, candidate: Cone):
    """Does every listed cone factor through candidate uniquely?

    Returns None on success, else the first failing cone with its mediator
    count.  Mediator fibers are precomputed per apex so the scan is linear
    in the number of cones.
    """
    legs = candidate.legs
    by_apex: dict[str, dict] = {}
    for cone in cones:
        a = cone.apex
        fibers = by_apex.get(a)
        if fibers is None:
            fibers = {}
            for u in cat.hom(a, candidate.apex):
                key = tuple(cat.compose(m, u) for _, m in legs)
                fibers[key] = fibers.get(key, 0) + 1
            by_apex[a] = fibers
        count = fibers.get(tuple(m for _, m in cone.legs), 0)
        if count != 1:
            return cone, count
    return None


def is_terminal_cone(cat: FinCategory, diagram: Diagram, cone: Cone) -> Verdict:
    if not is_cone(cat, diagram, cone):
        return Verdict(False, "limit:not-a-cone", counterexample=cone.to_json())
    failure = _terminal_among(cat, all_cones(cat, diagram), cone)
    if failure is None:
        return Verdict(True, "limit:terminal")
    bad, count = failure
    return Verdict(
        False,
        "limit:not-terminal",
        counterexample={"cone": bad.to_json(), "mediators": count},
    )


def limit_cone(cat: FinCategory, diagram: Diagram) -> Optional[Cone]:
    """Terminal cone over the diagram, or None when the category lacks one.

    Deterministic: the least valid apex ID wins, then lexicographically
    least legs.  Results are memoized per category.
    """
    if diagram in cat.limit_cache:
        return cat.limit_cache[diagram]
    cones = all_cones(cat, diagram)
    counts: dict[str, int] = {}
    for c in cones:
        counts[c.apex] = counts.get(c.apex, 0) + 1
    found = None
    for candidate in cones:
        # terminality forces a bijection hom(W, apex) -> cones at W; the
        # counting consequence prunes nearly all candidates cheaply
        if any(
            len(cat.hom(w, candidate.apex)) != counts.get(w, 0)
            for w in cat.objects
        ):
            continue
        if _terminal_among(cat, cones, candidate) is None:
            found = candidate
            break
    cat.limit_cache[diagram] = found
    return found


def is_pullback_square(cat: FinCategory, sq: Square) -> Verdict:
    """Decide the universal property by quantifying over every test cone."""
    for m in (sq.f, sq.g, sq.h, sq.k):
        cat.require(m)
    p = cat.dom(sq.f)
    if cat.dom(sq.g) != p:
        raise NonCommutingSquare("square legs f, g need a common domain", **sq.to_json())
    x, y = cat.cod(sq.f), cat.cod(sq.g)
    if cat.dom(sq.h) != x or cat.dom(sq.k) != y or cat.cod(sq.h) != cat.cod(sq.k):
        raise NonCommutingSquare("square sides do not match up", **sq.to_json())
    if cat.compose(sq.h, sq.f) != cat.compose(sq.k, sq.g):
        raise NonCommutingSquare("square does not commute", **sq.to_json())

    for w in cat.objects:
        fibers: dict[tuple[str, str], int] = {}
        for u in cat.hom(w, p):
            key = (cat.compose(sq.f, u), cat.compose(sq.g, u))
            fibers[key] = fibers.get(key, 0) + 1
        for pp in cat.hom(w, x):
            hp = cat.compose(sq.h, pp)
            for qq in cat.hom(w, y):
                if hp != cat.compose(sq.k, qq):
                    continue
                n = fibers.get((pp, qq), 0)
                if n != 1:
                    return Verdict(
                        False,
                        "pullback:no-unique-mediator",
                        counterexample={
                            "apex": w,
                            "p": pp,
                            "q": qq,
                            "mediators": n,
                        },
                    )
    return Verdict(True, "pullback:verified")


def pullback(cat: FinCategory, f: str, g: str) -> Optional[Cone]:
    """Limit of the cospan (f, g); legs keyed l (towards dom f) and r."""
    return limit_cone(cat, Diagram.cospan(cat, f, g))


def kernel_pair(cat: FinCategory, f: str) -> Optional[Cone]:
    """Limit of the cospan (f, f); projection legs are keyed p1 and p2."""
    cat.require(f)
    diagram = Diagram.build(
        cat,
        {"p1": cat.dom(f), "p2": cat.dom(f), "t": cat.cod(f)},
        [("p1", "t", f), ("p2", "t", f)],
    )
    return limit_cone(cat, diagram)


def kernel_pair_legs(cone: Cone) -> tuple[str, str]:
    return cone.leg("p1"), cone.leg("p2")


def terminal_object_cone(cat: FinCategory) -> Optional[Cone]:
    return limit_cone(cat, Diagram.empty())
