"""Orthogonality in both flavors, class operators, and prefactorization closure.

Ordinary orthogonality of e against m asks for a unique diagonal filler in
every commuting square from e to m.  The enriched flavor asks instead that
the square of hom-objects induced by e and m be a pullback in the
enriching category; it implies the ordinary flavor but is strictly
stronger in general.  Verdicts are memoized per (mode, e, m) on the
carrier category, since closure operators revisit pairs quadratically.
Cache writes are idempotent, so concurrent read-mostly use is safe.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Union

from . import fincat
from .enriched import EnrichedLike, SetEnriched, TableEnriched, underlying
from .errors import DanglingID, SchemaError
from .fincat import FinCategory, Square, Verdict

MODES = ("ordinary", "enriched")


@dataclass(frozen=True)
class MorphismClass:
    """A finite set of underlying morphisms with provenance.

    Members are deduplicated and kept in bytewise order; the category hash
    pins the carrier so classes cannot leak across categories.
    """

    members: tuple[str, ...]
    provenance: str
    category_hash: str

    @staticmethod
    def make(b: EnrichedLike, members: Iterable[str], provenance: str) -> "MorphismClass":
        cat = underlying(b)
        unique = sorted(set(members))
        for m in unique:
            cat.require(m)
        return MorphismClass(tuple(unique), provenance, b.content_hash)

    def __contains__(self, m: str) -> bool:
        return m in set(self.members)

    def digest(self) -> str:
        return hashlib.sha256("\n".join(self.members).encode()).hexdigest()[:12]

    def to_json(self):
        return {
            "members": list(self.members),
            "provenance": self.provenance,
            "category": self.category_hash,
        }


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise SchemaError(f"unknown orthogonality mode {mode!r}")


def _endpoints(cat: FinCategory, e: str, m: str):
    cat.require(e)
    cat.require(m)
    return cat.dom(e), cat.cod(e), cat.dom(m), cat.cod(m)


def _ordinary_scan(cat: FinCategory, e: str, m: str, collect: bool):
    """Unique-filler scan; returns (holds, fillers or counterexample)."""
    a1, a2, b1, b2 = _endpoints(cat, e, m)
    fillers: dict[tuple[str, str], list[str]] = {}
    for w in cat.hom(a2, b1):
        key = (cat.compose(w, e), cat.compose(m, w))
        fillers.setdefault(key, []).append(w)
    witness = [] if collect else None
    for u in cat.hom(a1, b1):
        mu = cat.compose(m, u)
        for v in cat.hom(a2, b2):
            if cat.compose(v, e) != mu:
                continue
            found = fillers.get((u, v), [])
            if len(found) != 1:
                return False, {"u": u, "v": v, "fillers": sorted(found)}
            if collect:
                witness.append([u, v, found[0]])
    return True, witness


def is_orthogonal(b: EnrichedLike, e: str, m: str) -> Verdict:
    """Ordinary orthogonality: unique diagonal filler for every square."""
    cat = underlying(b)
    holds, payload = _ordinary_scan(cat, e, m, collect=True)
    cat.ortho_cache[("ordinary", e, m)] = holds
    if holds:
        return Verdict(True, "orthogonal", witness={"fillers": payload})
    return Verdict(False, "orthogonal:failing-square", counterexample=payload)


def _set_pullback_scan(cat: FinCategory, e: str, m: str):
    """Set-level pullback check of the hom square, elementwise."""
    a1, a2, b1, b2 = _endpoints(cat, e, m)
    fibers: dict[tuple[str, str], list[str]] = {}
    for w in cat.hom(a2, b1):
        key = (cat.compose(m, w), cat.compose(w, e))
        fibers.setdefault(key, []).append(w)
    for x in cat.hom(a2, b2):
        xe = cat.compose(x, e)
        for y in cat.hom(a1, b1):
            if xe != cat.compose(m, y):
                continue
            found = fibers.get((x, y), [])
            if len(found) != 1:
                return False, {
                    "corner_pair": {"to_b2": x, "to_b1": y},
                    "mediators": sorted(found),
                }
    return True, None


def is_v_orthogonal(b: EnrichedLike, e: str, m: str) -> Verdict:
    """Enriched orthogonality: the hom square is a pullback in V.

    Table backend: the four corners are hom-objects and the decision runs
    in V.  Set semantics: the pullback of hom-sets is checked elementwise,
    which coincides with the ordinary notion, as representables force.
    """
    cat = underlying(b)
    if isinstance(b, TableEnriched):
        a1, a2, b1, b2 = _endpoints(cat, e, m)
        sq = Square(
            f=b.action_co(a2, m),
            g=b.action_contra(e, b1),
            h=b.action_contra(e, b2),
            k=b.action_co(a1, m),
        )
        inner = fincat.is_pullback_square(b.v.base, sq)
        cat.ortho_cache[("enriched", e, m)] = inner.holds
        if inner.holds:
            return Verdict(True, "v-orthogonal", witness={"hom_square": sq.to_json()})
        return Verdict(
            False,
            "v-orthogonal:hom-square-not-pullback",
            counterexample={"hom_square": sq.to_json(), "failure": inner.counterexample},
        )
    holds, payload = _set_pullback_scan(cat, e, m)
    cat.ortho_cache[("enriched", e, m)] = holds
    if holds:
        return Verdict(True, "v-orthogonal")
    return Verdict(False, "v-orthogonal:not-pullback", counterexample=payload)


def orthogonal_bool(b: EnrichedLike, e: str, m: str, mode: str) -> bool:
    """Memoized verdict without payload construction."""
    _check_mode(mode)
    cat = underlying(b)
    key = (mode, e, m)
    got = cat.ortho_cache.get(key)
    if got is not None:
        return got
    if mode == "ordinary":
        holds = _ordinary_scan(cat, e, m, collect=False)[0]
    elif isinstance(b, TableEnriched):
        holds = is_v_orthogonal(b, e, m).holds
    else:
        holds = _set_pullback_scan(cat, e, m)[0]
    cat.ortho_cache[key] = holds
    return holds


def _as_members(b: EnrichedLike, cls: Union[MorphismClass, Iterable[str]]):
    if isinstance(cls, MorphismClass):
        if cls.category_hash != b.content_hash:
            raise DanglingID("morphism class is bound to a different category")
        return cls.members
    return MorphismClass.make(b, cls, "user").members


def right_class(b: EnrichedLike, e_class, mode: str) -> MorphismClass:
    """Everything every member of the seed is orthogonal to, in the given mode."""
    _check_mode(mode)
    members = _as_members(b, e_class)
    cat = underlying(b)
    seed_digest = hashlib.sha256("\n".join(members).encode()).hexdigest()[:12]
    out = [
        m
        for m in cat.morphism_ids
        if all(orthogonal_bool(b, e, m, mode) for e in members)
    ]
    return MorphismClass(
        tuple(out), f"closure:right:{mode}:{seed_digest}", b.content_hash
    )


def left_class(b: EnrichedLike, m_class, mode: str) -> MorphismClass:
    _check_mode(mode)
    members = _as_members(b, m_class)
    cat = underlying(b)
    seed_digest = hashlib.sha256("\n".join(members).encode()).hexdigest()[:12]
    out = [
        e
        for e in cat.morphism_ids
        if all(orthogonal_bool(b, e, m, mode) for m in members)
    ]
    return MorphismClass(
        tuple(out), f"closure:left:{mode}:{seed_digest}", b.content_hash
    )


def prefactorization_closure(b: EnrichedLike, h_class, side: str, mode: str):
    """Close a seed into a mutually determined (E, M) pair.

    side "right" keeps the seed's right complement as M; side "left" keeps
    its left complement as E.  The fixed-point equations are re-asserted
    before returning.
    """
    _check_mode(mode)
    if side not in ("left", "right"):
        raise SchemaError(f"unknown closure side {side!r}")
    if side == "right":
        m_cls = right_class(b, h_class, mode)
        e_cls = left_class(b, m_cls, mode)
    else:
        e_cls = left_class(b, h_class, mode)
        m_cls = right_class(b, e_cls, mode)
    if right_class(b, e_cls, mode).members != m_cls.members:
        raise SchemaError("closure postcondition failed on the right class")
    if left_class(b, m_cls, mode).members != e_cls.members:
        raise SchemaError("closure postcondition failed on the left class")
    return e_cls, m_cls


def is_prefactorization_system(b: EnrichedLike, e_class, m_class, mode: str) -> Verdict:
    """Do the two fixed-point equations hold exactly?"""
    _check_mode(mode)
    e_members = _as_members(b, e_class)
    m_members = _as_members(b, m_class)
    want_m = right_class(b, e_members, mode).members
    if want_m != tuple(sorted(m_members)):
        extra = sorted(set(m_members) - set(want_m))
        missing = sorted(set(want_m) - set(m_members))
        wrong = (extra or missing)[0]
        return Verdict(
            False,
            "prefactorization:right-class-mismatch",
            counterexample={
                "morphism": wrong,
                "side": "right",
                "problem": "not-orthogonal" if extra else "missing-from-class",
            },
        )
    want_e = left_class(b, m_members, mode).members
    if want_e != tuple(sorted(e_members)):
        extra = sorted(set(e_members) - set(want_e))
        missing = sorted(set(want_e) - set(e_members))
        wrong = (extra or missing)[0]
        return Verdict(
            False,
            "prefactorization:left-class-mismatch",
            counterexample={
                "morphism": wrong,
                "side": "left",
                "problem": "not-orthogonal" if extra else "missing-from-class",
            },
        )
    return Verdict(True, "prefactorization:verified")
