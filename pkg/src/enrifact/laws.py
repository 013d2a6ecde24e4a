"""Exhaustive law suite over a loaded entity, addressable by stable law IDs.

Each law checks one contract of the engine against the given category,
counting the instances it examined and reporting the first witness on
failure.  Randomized laws draw from a fixed-seed generator, so reruns are
byte-reproducible.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

from . import fincat
from .enriched import (
    EnrichedLike,
    SetEnriched,
    TableEnriched,
    derive_cotensor_data,
    derive_tensor_data,
    has_all_v_kernel_pairs,
    is_v_limit,
    underlying,
    v_classify,
    v_intersection,
    check_tensor_data,
    cotensor_of_morphism,
    tensor_of_morphism,
)
from .factor import (
    canonical_systems,
    strong_epi_class,
    strong_mono_class,
    v_epi_class,
    v_mono_class,
)
from .fincat import (
    Cone,
    Diagram,
    FinCategory,
    Square,
    classify_morphism,
    is_pullback_square,
    iso_inverse,
    kernel_pair,
    limit_cone,
)
from .monoidal import MonoidalClosedStructure, apply_hom
from .ortho import (
    MorphismClass,
    is_orthogonal,
    is_prefactorization_system,
    left_class,
    orthogonal_bool,
    prefactorization_closure,
    right_class,
)

DEFAULT_SEED = 1729


@dataclass(frozen=True)
class LawResult:
    law_id: str
    passed: bool
    instances: int
    witness: Optional[dict] = None
    note: str = ""

    def to_json(self):
        return {
            "law": self.law_id,
            "passed": self.passed,
            "instances": self.instances,
            "witness": self.witness,
            "note": self.note,
        }


class LawContext:
    """Shared precomputation for one laws run: closures, canonical report,
    tensor data.  Built eagerly so law runners stay read-mostly."""

    def __init__(self, entity, seed: int, pasting_target: int):
        self.entity = entity
        self.seed = seed
        self.pasting_target = pasting_target
        self.mcs = entity if isinstance(entity, MonoidalClosedStructure) else None
        if self.mcs is not None:
            self.b: Optional[EnrichedLike] = self.mcs.base
        else:
            self.b = entity
        self.cat = underlying(self.b) if self.b is not None else None
        self.modes = (
            ("ordinary",)
            if isinstance(self.b, FinCategory)
            else ("ordinary", "enriched")
        )
        self.closures: list = []
        self.canonical: Optional[dict] = None
        self.tensor_data = None
        self.cotensor_data = None
        if self.b is not None:
            self._build_closures()
            self.canonical = canonical_systems(self.b)
            if not isinstance(self.b, FinCategory):
                self.tensor_data = derive_tensor_data(self.b)
                self.cotensor_data = derive_cotensor_data(self.b)
                check_tensor_data(self.b, self.tensor_data)
                check_tensor_data(self.b, self.cotensor_data)

    def rng(self, tag: str) -> random.Random:
        return random.Random(f"{self.seed}:{tag}")

    def _build_closures(self):
        cat, b = self.cat, self.b
        rng = self.rng("closure-seeds")
        seeds = {
            "empty": [],
            "all": list(cat.morphism_ids),
            "monos": [f for f in cat.morphism_ids if "mono" in classify_morphism(cat, f)],
            "epis": [f for f in cat.morphism_ids if "epi" in classify_morphism(cat, f)],
            "isos": [f for f in cat.morphism_ids if "iso" in classify_morphism(cat, f)],
        }
        for i in range(3):
            k = rng.randint(0, len(cat.morphism_ids))
            seeds[f"rand{i}"] = sorted(rng.sample(list(cat.morphism_ids), k))
        seen = set()
        for mode in self.modes:
            for name, seed in seeds.items():
                for side in ("right", "left"):
                    e_cls, m_cls = prefactorization_closure(b, seed, side, mode)
                    key = (mode, e_cls.members, m_cls.members)
                    if key in seen:
                        continue
                    seen.add(key)
                    self.closures.append((mode, f"{name}:{side}", e_cls, m_cls))


# -- category laws -------------------------------------------------------------------


def law_flag_implications(ctx) -> LawResult:
    cat = ctx.cat
    n = 0
    for f in cat.morphism_ids:
        flags = classify_morphism(cat, f)
        n += 1
        bad = None
        if "iso" in flags and not {"mono", "epi", "section", "retraction"} <= flags:
            bad = "iso-missing-flags"
        elif "section" in flags and "mono" not in flags:
            bad = "section-not-mono"
        elif "retraction" in flags and "epi" not in flags:
            bad = "retraction-not-epi"
        elif {"mono", "retraction"} <= flags and "iso" not in flags:
            bad = "mono-retraction-not-iso"
        elif {"epi", "section"} <= flags and "iso" not in flags:
            bad = "epi-section-not-iso"
        if bad:
            return LawResult(
                "CAT-FLAG-IMPLICATIONS", False, n,
                {"morphism": f, "problem": bad, "flags": sorted(flags)},
            )
    return LawResult("CAT-FLAG-IMPLICATIONS", True, n)


def _sample_diagrams(ctx, cap: int = 12):
    cat = ctx.cat
    rng = ctx.rng("diagram-sample")
    diagrams = [Diagram.empty()]
    pairs = [
        (x, y) for i, x in enumerate(cat.objects) for y in cat.objects[i:]
    ]
    products = [Diagram.discrete(cat, list(p)) for p in pairs]
    equalizers = []
    for d in cat.objects:
        for c in cat.objects:
            arr = cat.hom(d, c)
            for i, f in enumerate(arr):
                for g in arr[i:]:
                    equalizers.append(Diagram.parallel_pair(cat, f, g))
    pullbacks = []
    for z in cat.objects:
        into = cat.morphisms_into(z)
        for i, f in enumerate(into):
            for g in into[i:]:
                pullbacks.append(Diagram.cospan(cat, f, g))
    for group in (products, equalizers, pullbacks):
        if len(group) > cap:
            group = rng.sample(group, cap)
        diagrams.extend(group)
    return diagrams


def law_limit_recheck(ctx) -> LawResult:
    cat = ctx.cat
    n = 0
    for diagram in _sample_diagrams(ctx):
        cone = limit_cone(cat, diagram)
        n += 1
        if cone is None:
            continue
        if not fincat.is_terminal_cone(cat, diagram, cone).holds:
            return LawResult(
                "CAT-LIMIT-RECHECK", False, n,
                {"diagram": "re-check failed", "cone": cone.to_json()},
            )
        # cones comparing isomorphically into the limit are terminal too,
        # and the comparison is the unique mediator both ways
        cones = fincat.all_cones(cat, diagram)
        for other in cones:
            meds = fincat.mediators(cat, other, cone)
            if len(meds) != 1:
                return LawResult(
                    "CAT-LIMIT-RECHECK", False, n,
                    {"cone": other.to_json(), "mediators": len(meds)},
                )
            u = meds[0]
            if "iso" in classify_morphism(cat, u) and other != cone:
                n += 1
                back = fincat.mediators(cat, cone, other)
                if len(back) != 1 or cat.compose(u, back[0]) != cat.id_of(cone.apex):
                    return LawResult(
                        "CAT-LIMIT-RECHECK", False, n,
                        {"cone": other.to_json(), "problem": "comparison-not-unique-iso"},
                    )
                if not fincat.is_terminal_cone(cat, diagram, other).holds:
                    return LawResult(
                        "CAT-LIMIT-RECHECK", False, n,
                        {"cone": other.to_json(), "problem": "iso-comparable-but-not-terminal"},
                    )
    return LawResult("CAT-LIMIT-RECHECK", True, n)


def law_kp_mono(ctx) -> LawResult:
    cat = ctx.cat
    n = skipped = 0
    for f in cat.morphism_ids:
        cone = kernel_pair(cat, f)
        if cone is None:
            skipped += 1
            continue
        n += 1
        equal_legs = cone.leg("p1") == cone.leg("p2")
        if equal_legs != ("mono" in classify_morphism(cat, f)):
            return LawResult(
                "CAT-KP-MONO", False, n,
                {"morphism": f, "equal_legs": equal_legs},
            )
    return LawResult("CAT-KP-MONO", True, n, note=f"{skipped} kernel pairs absent")


def pasting_frames(cat: FinCategory, rng: random.Random, target: int):
    """Sampled 2x1 pastings of commuting squares, deterministic per seed."""
    mors = list(cat.morphism_ids)
    frames = []
    attempts = 0
    limit = max(200, target * 200)
    while len(frames) < target and attempts < limit:
        attempts += 1
        x = mors[rng.randrange(len(mors))]
        ys = cat.morphisms_from(cat.cod(x))
        if not ys:
            continue
        y = ys[rng.randrange(len(ys))]
        vs = cat.morphisms_into(cat.cod(x))
        if not vs:
            continue
        v = vs[rng.randrange(len(vs))]
        p_obj = cat.objects[rng.randrange(len(cat.objects))]
        left = [
            (p, u)
            for p in cat.hom(p_obj, cat.dom(v))
            for u in cat.hom(p_obj, cat.dom(x))
            if cat.compose(v, p) == cat.compose(x, u)
        ]
        if not left:
            continue
        p, u = left[rng.randrange(len(left))]
        r_obj = cat.objects[rng.randrange(len(cat.objects))]
        yv = cat.compose(y, v)
        right = [
            (q, w)
            for q in cat.hom(cat.dom(v), r_obj)
            for w in cat.hom(r_obj, cat.cod(y))
            if cat.compose(w, q) == yv
        ]
        if not right:
            continue
        q, w = right[rng.randrange(len(right))]
        frames.append((u, p, x, v, q, w, y))
    return frames


def run_pasting(b: EnrichedLike, rng: random.Random, target: int):
    """Pullback pasting on sampled frames; returns (checked, witness or None)."""
    cat = underlying(b)
    frames = pasting_frames(cat, rng, target)
    checked = 0
    for u, p, x, v, q, w, y in frames:
        left = is_pullback_square(cat, Square(f=u, g=p, h=x, k=v)).holds
        right = is_pullback_square(cat, Square(f=v, g=q, h=y, k=w)).holds
        outer = is_pullback_square(
            cat,
            Square(f=u, g=cat.compose(q, p), h=cat.compose(y, x), k=w),
        ).holds
        checked += 1
        if left and right and not outer:
            return checked, {"frame": [u, p, x, v, q, w, y], "problem": "pasted-not-pullback"}
        if outer and right and not left:
            return checked, {"frame": [u, p, x, v, q, w, y], "problem": "left-not-pullback"}
    return checked, None


def law_pasting(ctx) -> LawResult:
    checked, witness = run_pasting(
        ctx.b, ctx.rng("pasting"), ctx.pasting_target
    )
    return LawResult("CAT-PB-PASTE", witness is None, checked, witness)


# -- orthogonality laws ----------------------------------------------------------------


def law_orth_self(ctx) -> LawResult:
    b, cat = ctx.b, ctx.cat
    n = 0
    for mode in ctx.modes:
        for f in cat.morphism_ids:
            n += 1
            if orthogonal_bool(b, f, f, mode) and "iso" not in classify_morphism(cat, f):
                return LawResult(
                    "ORTH-SELF-ISO", False, n, {"morphism": f, "mode": mode}
                )
    rng = ctx.rng("orth-composites")
    pairs = cat.composable_pairs()
    if len(pairs) > 400:
        pairs = rng.sample(pairs, 400)
    for g, f in pairs:
        gf = cat.compose(g, f)
        n += 2
        if orthogonal_bool(b, gf, g, "ordinary") and "retraction" not in classify_morphism(cat, g):
            return LawResult(
                "ORTH-SELF-ISO", False, n, {"pair": [g, f], "problem": "retraction"}
            )
        if orthogonal_bool(b, f, gf, "ordinary") and "section" not in classify_morphism(cat, f):
            return LawResult(
                "ORTH-SELF-ISO", False, n, {"pair": [g, f], "problem": "section"}
            )
    return LawResult("ORTH-SELF-ISO", True, n)


def law_enr_implies_ord(ctx) -> LawResult:
    b, cat = ctx.b, ctx.cat
    n = 0
    for e in cat.morphism_ids:
        for m in cat.morphism_ids:
            n += 1
            if orthogonal_bool(b, e, m, "enriched") and not orthogonal_bool(
                b, e, m, "ordinary"
            ):
                return LawResult("ORTH-ENR-ORD", False, n, {"e": e, "m": m})
    return LawResult("ORTH-ENR-ORD", True, n)


def law_galois(ctx) -> LawResult:
    b, cat = ctx.b, ctx.cat
    rng = ctx.rng("galois")
    mors = list(cat.morphism_ids)
    n = 0
    for mode in ctx.modes:
        for _ in range(20):
            h = sorted(rng.sample(mors, rng.randint(0, len(mors))))
            extra = sorted(set(h) | set(rng.sample(mors, rng.randint(0, len(mors)))))
            r_h = right_class(b, h, mode)
            r_extra = right_class(b, extra, mode)
            n += 3
            if not set(h) <= set(left_class(b, r_h, mode).members):
                return LawResult(
                    "ORTH-GALOIS", False, n, {"seed": h, "mode": mode, "law": "unit"}
                )
            if not set(r_extra.members) <= set(r_h.members):
                return LawResult(
                    "ORTH-GALOIS", False, n, {"seed": h, "mode": mode, "law": "antitone"}
                )
            triple = right_class(b, left_class(b, r_h, mode), mode)
            if triple.members != r_h.members:
                return LawResult(
                    "ORTH-GALOIS", False, n, {"seed": h, "mode": mode, "law": "idempotent"}
                )
    return LawResult("ORTH-GALOIS", True, n)


# -- prefactorization stability laws ------------------------------------------------------


def _iso_set(cat) -> set:
    return {f for f in cat.morphism_ids if "iso" in classify_morphism(cat, f)}


def law_pref_fixedpoint(ctx) -> LawResult:
    n = 0
    for mode, label, e_cls, m_cls in ctx.closures:
        n += 1
        verdict = is_prefactorization_system(ctx.b, e_cls, m_cls, mode)
        if not verdict.holds:
            return LawResult(
                "PREF-FIXEDPOINT", False, n,
                {"closure": label, "mode": mode, "failure": verdict.counterexample},
            )
    return LawResult("PREF-FIXEDPOINT", True, n)


def law_pref_iso_core(ctx) -> LawResult:
    isos = _iso_set(ctx.cat)
    n = 0
    for mode, label, e_cls, m_cls in ctx.closures:
        n += 1
        core = set(e_cls.members) & set(m_cls.members)
        if core != isos or not isos <= set(e_cls.members):
            return LawResult(
                "PREF-ISO-CORE", False, n,
                {"closure": label, "mode": mode,
                 "difference": sorted(core ^ isos)},
            )
    return LawResult("PREF-ISO-CORE", True, n)


def law_pref_comp(ctx) -> LawResult:
    cat = ctx.cat
    n = 0
    for mode, label, e_cls, m_cls in ctx.closures:
        for cls, side in ((m_cls, "right"), (e_cls, "left")):
            members = set(cls.members)
            for g, f in cat.composable_pairs():
                if g in members and f in members:
                    n += 1
                    if cat.compose(g, f) not in members:
                        return LawResult(
                            "PREF-COMP", False, n,
                            {"closure": label, "mode": mode, "side": side,
                             "pair": [g, f]},
                        )
    return LawResult("PREF-COMP", True, n)


def law_pref_cancel(ctx) -> LawResult:
    cat = ctx.cat
    n = 0
    for mode, label, e_cls, m_cls in ctx.closures:
        m_members = set(m_cls.members)
        e_members = set(e_cls.members)
        for g, f in cat.composable_pairs():
            gf = cat.compose(g, f)
            n += 2
            if gf in m_members and g in m_members and f not in m_members:
                return LawResult(
                    "PREF-CANCEL", False, n,
                    {"closure": label, "mode": mode, "side": "right", "pair": [g, f]},
                )
            if gf in e_members and f in e_members and g not in e_members:
                return LawResult(
                    "PREF-CANCEL", False, n,
                    {"closure": label, "mode": mode, "side": "left", "pair": [g, f]},
                )
    return LawResult("PREF-CANCEL", True, n)


def law_pref_epi_cancel(ctx) -> LawResult:
    b, cat = ctx.b, ctx.cat
    n = 0
    for mode, label, e_cls, m_cls in ctx.closures:
        if mode == "enriched":
            epis = {f for f in cat.morphism_ids if "v_epi" in v_classify(b, f)}
        else:
            epis = {f for f in cat.morphism_ids if "epi" in classify_morphism(cat, f)}
        if not set(e_cls.members) <= epis:
            continue
        m_members = set(m_cls.members)
        for g, f in cat.composable_pairs():
            n += 1
            if cat.compose(g, f) in m_members and f not in m_members:
                return LawResult(
                    "PREF-EPI-CANCEL", False, n,
                    {"closure": label, "mode": mode, "pair": [g, f]},
                )
    return LawResult("PREF-EPI-CANCEL", True, n)


def law_pref_pb_stable(ctx) -> LawResult:
    b, cat = ctx.b, ctx.cat
    n = 0
    for mode, label, e_cls, m_cls in ctx.closures:
        members = set(m_cls.members)
        for m in m_cls.members:
            for f in cat.morphisms_into(cat.cod(m)):
                diagram = Diagram.cospan(cat, f, m)
                cone = limit_cone(cat, diagram)
                if cone is None:
                    continue
                if mode == "enriched" and not is_v_limit(b, diagram, cone).holds:
                    continue
                n += 1
                if cone.leg("l") not in members:
                    return LawResult(
                        "PREF-PB-STABLE", False, n,
                        {"closure": label, "mode": mode, "member": m,
                         "along": f, "pullback": cone.leg("l")},
                    )
    return LawResult("PREF-PB-STABLE", True, n)


def law_pref_fib_stable(ctx) -> LawResult:
    b, cat = ctx.b, ctx.cat
    rng = ctx.rng("fib-stable")
    n = 0
    for mode, label, e_cls, m_cls in ctx.closures:
        members = set(m_cls.members)
        by_cod: dict[str, list] = {}
        for m in m_cls.members:
            by_cod.setdefault(cat.cod(m), []).append(m)
        families = []
        for z, ms in sorted(by_cod.items()):
            for i, m1 in enumerate(ms):
                for m2 in ms[i + 1:]:
                    families.append([m1, m2])
            if len(ms) >= 3:
                for _ in range(4):
                    families.append(sorted(rng.sample(ms, 3)))
        for family in families:
            diagram = Diagram.wide_cospan(cat, family, cat.cod(family[0]))
            cone = limit_cone(cat, diagram)
            if cone is None:
                continue
            if mode == "enriched" and not is_v_limit(b, diagram, cone).holds:
                continue
            n += 1
            if cone.leg("t") not in members:
                return LawResult(
                    "PREF-FIB-STABLE", False, n,
                    {"closure": label, "mode": mode, "family": family,
                     "induced": cone.leg("t")},
                )
    return LawResult("PREF-FIB-STABLE", True, n)


def law_pref_cotensor(ctx) -> LawResult:
    b, cat = ctx.b, ctx.cat
    data = ctx.cotensor_data
    if data is None or not data.entries:
        return LawResult("PREF-COTENSOR", True, 0, note="no covered pairs")
    v_objects = sorted({vo for (vo, _), _, _ in data.entries})
    n = 0
    for mode, label, e_cls, m_cls in ctx.closures:
        if mode != "enriched":
            continue
        members = set(m_cls.members)
        for m in m_cls.members:
            for vo in v_objects:
                out = cotensor_of_morphism(b, data, vo, m)
                if out is None:
                    continue
                n += 1
                if out not in members:
                    return LawResult(
                        "PREF-COTENSOR", False, n,
                        {"closure": label, "member": m, "v": vo, "image": out},
                    )
    return LawResult("PREF-COTENSOR", True, n)


def law_pref_tensor(ctx) -> LawResult:
    b = ctx.b
    data = ctx.tensor_data
    if data is None or not data.entries:
        return LawResult("PREF-TENSOR", True, 0, note="no covered pairs")
    v_objects = sorted({vo for (vo, _), _, _ in data.entries})
    n = 0
    for mode, label, e_cls, m_cls in ctx.closures:
        if mode != "enriched":
            continue
        members = set(e_cls.members)
        for e in e_cls.members:
            for vo in v_objects:
                out = tensor_of_morphism(b, data, vo, e)
                if out is None:
                    continue
                n += 1
                if out not in members:
                    return LawResult(
                        "PREF-TENSOR", False, n,
                        {"closure": label, "member": e, "v": vo, "image": out},
                    )
    return LawResult("PREF-TENSOR", True, n)


# -- enriched predicate laws ----------------------------------------------------------------


def law_enr_implies_ord_flags(ctx) -> LawResult:
    b, cat = ctx.b, ctx.cat
    n = 0
    for f in cat.morphism_ids:
        vflags = v_classify(b, f)
        flags = classify_morphism(cat, f)
        n += 1
        if "v_mono" in vflags and "mono" not in flags:
            return LawResult("ENR-IMPLIES-ORD", False, n, {"morphism": f, "flag": "mono"})
        if "v_epi" in vflags and "epi" not in flags:
            return LawResult("ENR-IMPLIES-ORD", False, n, {"morphism": f, "flag": "epi"})
    return LawResult("ENR-IMPLIES-ORD", True, n)


def law_section_vregular(ctx) -> LawResult:
    b, cat = ctx.b, ctx.cat
    n = 0
    for f in cat.morphism_ids:
        flags = classify_morphism(cat, f)
        vflags = v_classify(b, f)
        n += 1
        if "section" in flags and "v_regular_mono" not in vflags:
            return LawResult("ENR-SECTION-VREG", False, n, {"morphism": f})
        if "retraction" in flags and "v_regular_epi" not in vflags:
            return LawResult(
                "ENR-SECTION-VREG", False, n, {"morphism": f, "side": "dual"}
            )
    return LawResult("ENR-SECTION-VREG", True, n)


def law_class_chain(ctx) -> LawResult:
    b, cat = ctx.b, ctx.cat
    strong = set(strong_mono_class(b).members)
    n = 0
    for f in cat.morphism_ids:
        vflags = v_classify(b, f)
        n += 1
        if "v_regular_mono" in vflags and f not in strong:
            return LawResult("ENR-CHAIN", False, n, {"morphism": f, "step": "regular-strong"})
        if f in strong and "v_mono" not in vflags:
            return LawResult("ENR-CHAIN", False, n, {"morphism": f, "step": "strong-vmono"})
        if "v_mono" in vflags and "mono" not in classify_morphism(cat, f):
            return LawResult("ENR-CHAIN", False, n, {"morphism": f, "step": "vmono-mono"})
    return LawResult("ENR-CHAIN", True, n)


def law_intersection_vmono(ctx) -> LawResult:
    b, cat = ctx.b, ctx.cat
    rng = ctx.rng("intersections")
    vmonos = [f for f in cat.morphism_ids if "v_mono" in v_classify(b, f)]
    by_cod: dict[str, list] = {}
    for m in vmonos:
        by_cod.setdefault(cat.cod(m), []).append(m)
    n = 0
    for z in cat.objects:
        out = v_intersection(b, [], codomain=z)
        n += 1
        if out != cat.id_of(z):
            return LawResult("ENR-INT-VMONO", False, n, {"problem": "empty", "object": z})
    for z, ms in sorted(by_cod.items()):
        for m in ms[: min(len(ms), 6)]:
            got = v_intersection(b, [m])
            n += 1
            if got is not None:
                factors_fwd = any(
                    cat.compose(m, u) == got for u in cat.hom(cat.dom(got), cat.dom(m))
                )
                factors_back = any(
                    cat.compose(got, u) == m for u in cat.hom(cat.dom(m), cat.dom(got))
                )
                if not (factors_fwd and factors_back):
                    return LawResult(
                        "ENR-INT-VMONO", False, n,
                        {"problem": "singleton", "member": m, "got": got},
                    )
        pairs = [(m1, m2) for i, m1 in enumerate(ms) for m2 in ms[i + 1:]]
        if len(pairs) > 20:
            pairs = rng.sample(pairs, 20)
        for m1, m2 in pairs:
            got = v_intersection(b, [m1, m2])
            n += 1
            if got is not None and "v_mono" not in v_classify(b, got):
                return LawResult(
                    "ENR-INT-VMONO", False, n, {"family": [m1, m2], "got": got}
                )
    return LawResult("ENR-INT-VMONO", True, n)


def law_vmono_comp_cancel(ctx) -> LawResult:
    b, cat = ctx.b, ctx.cat
    n = 0
    for g, f in cat.composable_pairs():
        gf = cat.compose(g, f)
        n += 2
        if (
            "v_mono" in v_classify(b, g)
            and "v_mono" in v_classify(b, f)
            and "v_mono" not in v_classify(b, gf)
        ):
            return LawResult("ENR-VMONO-COMP", False, n, {"pair": [g, f], "law": "compose"})
        if "v_mono" in v_classify(b, gf) and "v_mono" not in v_classify(b, f):
            return LawResult("ENR-VMONO-COMP", False, n, {"pair": [g, f], "law": "cancel"})
    return LawResult("ENR-VMONO-COMP", True, n)


def law_kp_characterization(ctx) -> LawResult:
    b, cat = ctx.b, ctx.cat
    n = absent = 0
    for f in cat.morphism_ids:
        cone = kernel_pair(cat, f)
        if cone is None:
            absent += 1
            continue
        diagram = Diagram.build(
            cat,
            {"p1": cat.dom(f), "p2": cat.dom(f), "t": cat.cod(f)},
            [("p1", "t", f), ("p2", "t", f)],
        )
        if not is_v_limit(b, diagram, cone).holds:
            absent += 1
            continue
        n += 1
        equal = cone.leg("p1") == cone.leg("p2")
        if equal != ("v_mono" in v_classify(b, f)):
            return LawResult("ENR-KP-CHAR", False, n, {"morphism": f, "equal_legs": equal})
    return LawResult(
        "ENR-KP-CHAR", True, n, note=f"{absent} enriched kernel pairs absent"
    )


def law_tensored_collapse(ctx) -> LawResult:
    b, cat = ctx.b, ctx.cat
    data = ctx.tensor_data
    if data is None:
        return LawResult("ENR-TENS-COLLAPSE", True, 0, note="ordinary-only entity")
    if isinstance(b, TableEnriched):
        total = len(data.entries) == len(b.v.base.objects) * len(b.objects)
    else:
        total = False
    if not total:
        return LawResult("ENR-TENS-COLLAPSE", True, 0, note="tensor coverage partial")
    v_objects = sorted({vo for (vo, _), _, _ in data.entries})
    rng = ctx.rng("collapse")

    def tensor_close(seed):
        h = set(seed)
        while True:
            grown = set(h)
            for e in list(h):
                for vo in v_objects:
                    out = tensor_of_morphism(b, data, vo, e)
                    if out is not None:
                        grown.add(out)
            if grown == h:
                return sorted(h)
            h = grown

    seeds = [list(cat.morphism_ids)]
    for _ in range(3):
        seeds.append(
            tensor_close(rng.sample(list(cat.morphism_ids),
                                    rng.randint(0, len(cat.morphism_ids))))
        )
    n = 0
    for seed in seeds:
        n += 1
        enr = right_class(b, seed, "enriched")
        ordn = right_class(b, seed, "ordinary")
        if enr.members != ordn.members:
            return LawResult(
                "ENR-TENS-COLLAPSE", False, n,
                {"seed_size": len(seed),
                 "difference": sorted(set(enr.members) ^ set(ordn.members))},
            )
    return LawResult("ENR-TENS-COLLAPSE", True, n)


def law_collapse_setlike(ctx) -> LawResult:
    b, cat = ctx.b, ctx.cat
    n = 0
    for f in cat.morphism_ids:
        vflags = v_classify(b, f)
        flags = classify_morphism(cat, f)
        n += 1
        if ("v_mono" in vflags) != ("mono" in flags):
            return LawResult("COLLAPSE-SETLIKE", False, n, {"morphism": f, "flag": "mono"})
        if ("v_epi" in vflags) != ("epi" in flags):
            return LawResult("COLLAPSE-SETLIKE", False, n, {"morphism": f, "flag": "epi"})
    enr = strong_mono_class(b, "enriched").members
    ordn = strong_mono_class(b, "ordinary").members
    n += 1
    if enr != ordn:
        return LawResult(
            "COLLAPSE-SETLIKE", False, n,
            {"difference": sorted(set(enr) ^ set(ordn)), "flag": "strong-mono"},
        )
    return LawResult("COLLAPSE-SETLIKE", True, n)


# -- factorization laws -------------------------------------------------------------------


def law_canonical_coherent(ctx) -> LawResult:
    b, cat = ctx.b, ctx.cat
    report = ctx.canonical
    n = 0
    for name, attempt in report["attempts"].items():
        n += 1
        if not attempt.get("ok"):
            continue
        cert = attempt["certified"]
        if not (cert["enriched"] and cert["ordinary"] and cert["prefactorization_equations"]):
            return LawResult(
                "FACT-CANONICAL", False, n, {"attempt": name, "certified": cert}
            )
        pairwise = all(
            orthogonal_bool(b, e, m, "enriched")
            for e in attempt["e_class"]
            for m in attempt["m_class"]
        )
        if cert["enriched"] != (cert["ordinary"] and pairwise):
            return LawResult(
                "FACT-CANONICAL", False, n,
                {"attempt": name, "problem": "mode-equivalence"},
            )
        e_set, m_set = set(attempt["e_class"]), set(attempt["m_class"])
        for g, (e_part, m_part) in attempt["factorizer"].items():
            n += 1
            if (
                cat.compose(m_part, e_part) != g
                or e_part not in e_set
                or m_part not in m_set
            ):
                return LawResult(
                    "FACT-CANONICAL", False, n,
                    {"attempt": name, "morphism": g, "pair": [e_part, m_part]},
                )
    return LawResult("FACT-CANONICAL", True, n)


def law_factorization_unique_iso(ctx) -> LawResult:
    b, cat = ctx.b, ctx.cat
    rng = ctx.rng("uniq-iso")
    n = 0
    for name, attempt in ctx.canonical["attempts"].items():
        if not attempt.get("ok"):
            continue
        e_set, m_set = set(attempt["e_class"]), set(attempt["m_class"])
        morphisms = sorted(attempt["factorizer"])
        if len(morphisms) > 20:
            morphisms = rng.sample(morphisms, 20)
        for g in morphisms:
            e1, m1 = attempt["factorizer"][g]
            alt = None
            for mid in cat.objects:
                for e2 in cat.hom(cat.dom(g), mid):
                    if e2 not in e_set:
                        continue
                    for m2 in cat.hom(mid, cat.cod(g)):
                        if m2 in m_set and cat.compose(m2, e2) == g and (e2, m2) != (e1, m1):
                            alt = (e2, m2)
                            break
                    if alt:
                        break
                if alt:
                    break
            if alt is None:
                continue
            e2, m2 = alt
            verdict = is_orthogonal(b, e1, m2)
            n += 1
            if not verdict.holds:
                return LawResult(
                    "FACT-UNIQ-ISO", False, n, {"morphism": g, "problem": "no-filler"}
                )
            filler = next(
                w for u, v, w in verdict.witness["fillers"] if u == e2 and v == m1
            )
            if "iso" not in classify_morphism(cat, filler):
                return LawResult(
                    "FACT-UNIQ-ISO", False, n,
                    {"morphism": g, "filler": filler, "problem": "not-iso"},
                )
    return LawResult("FACT-UNIQ-ISO", True, n)


def law_strmono_kp(ctx) -> LawResult:
    b, cat = ctx.b, ctx.cat
    ok, witness = has_all_v_kernel_pairs(b)
    if not ok:
        return LawResult(
            "FACT-STRMONO-KP", True, 0, note="enriched kernel pairs incomplete"
        )
    strong = strong_mono_class(b).members
    plain = right_class(b, v_epi_class(b), "enriched").members
    if strong != plain:
        return LawResult(
            "FACT-STRMONO-KP", False, len(cat.morphism_ids),
            {"difference": sorted(set(strong) ^ set(plain))},
        )
    return LawResult("FACT-STRMONO-KP", True, len(cat.morphism_ids))


# -- monoidal laws ---------------------------------------------------------------------


def law_mon_sym_involution(ctx) -> LawResult:
    s = ctx.mcs
    cat = s.base
    n = 0
    for x in cat.objects:
        for y in cat.objects:
            n += 1
            if cat.compose(s.sym(y, x), s.sym(x, y)) != cat.id_of(s.tensor_obj(x, y)):
                return LawResult("MON-SYM-INVOLUTION", False, n, {"pair": [x, y]})
    return LawResult("MON-SYM-INVOLUTION", True, n)


def law_mon_hom_functorial(ctx) -> LawResult:
    s = ctx.mcs
    cat = s.base
    n = 0
    for a in cat.objects:
        for bb in cat.objects:
            n += 1
            got = apply_hom(s, cat.id_of(a), cat.id_of(bb))
            if got != cat.id_of(s.hom_obj(a, bb)):
                return LawResult(
                    "MON-HOM-FUNCTORIAL", False, n, {"pair": [a, bb], "got": got}
                )
    pairs = cat.composable_pairs()
    rng = ctx.rng("hom-functorial")
    samples = [
        (pairs[rng.randrange(len(pairs))], pairs[rng.randrange(len(pairs))])
        for _ in range(min(60, len(pairs) * len(pairs)))
    ]
    for (f2, f1), (g2, g1) in samples:
        n += 1
        lhs = apply_hom(s, cat.compose(f2, f1), cat.compose(g2, g1))
        rhs = cat.compose(apply_hom(s, f1, g2), apply_hom(s, f2, g1))
        if lhs != rhs:
            return LawResult(
                "MON-HOM-FUNCTORIAL", False, n,
                {"fs": [f2, f1], "gs": [g2, g1]},
            )
    return LawResult("MON-HOM-FUNCTORIAL", True, n)


def law_mon_revalidate(ctx) -> LawResult:
    from .monoidal import validate_monoidal_closed
    from .fincat import validate_category

    s = ctx.mcs
    body = s.canonical_body()
    cat = validate_category(body["category"])
    rebuilt = validate_monoidal_closed(cat, body)
    same = rebuilt.canonical_body() == body
    return LawResult(
        "MON-REVALIDATE", same, 1,
        None if same else {"problem": "canonical body drifted"},
    )


# -- registry and runner ----------------------------------------------------------------


def _needs_cat(ctx) -> bool:
    return ctx.b is not None


def _needs_enriched(ctx) -> bool:
    return ctx.b is not None and not isinstance(ctx.b, FinCategory)


def _needs_setlike(ctx) -> bool:
    return isinstance(ctx.b, SetEnriched)


def _needs_mcs(ctx) -> bool:
    return ctx.mcs is not None


LAWS = [
    ("CAT-FLAG-IMPLICATIONS", _needs_cat, law_flag_implications),
    ("CAT-LIMIT-RECHECK", _needs_cat, law_limit_recheck),
    ("CAT-KP-MONO", _needs_cat, law_kp_mono),
    ("CAT-PB-PASTE", _needs_cat, law_pasting),
    ("ORTH-SELF-ISO", _needs_cat, law_orth_self),
    ("ORTH-ENR-ORD", _needs_enriched, law_enr_implies_ord),
    ("ORTH-GALOIS", _needs_cat, law_galois),
    ("PREF-FIXEDPOINT", _needs_cat, law_pref_fixedpoint),
    ("PREF-ISO-CORE", _needs_cat, law_pref_iso_core),
    ("PREF-COMP", _needs_cat, law_pref_comp),
    ("PREF-CANCEL", _needs_cat, law_pref_cancel),
    ("PREF-EPI-CANCEL", _needs_cat, law_pref_epi_cancel),
    ("PREF-PB-STABLE", _needs_cat, law_pref_pb_stable),
    ("PREF-FIB-STABLE", _needs_cat, law_pref_fib_stable),
    ("PREF-COTENSOR", _needs_enriched, law_pref_cotensor),
    ("PREF-TENSOR", _needs_enriched, law_pref_tensor),
    ("ENR-IMPLIES-ORD", _needs_enriched, law_enr_implies_ord_flags),
    ("ENR-SECTION-VREG", _needs_cat, law_section_vregular),
    ("ENR-CHAIN", _needs_cat, law_class_chain),
    ("ENR-INT-VMONO", _needs_cat, law_intersection_vmono),
    ("ENR-VMONO-COMP", _needs_cat, law_vmono_comp_cancel),
    ("ENR-KP-CHAR", _needs_cat, law_kp_characterization),
    ("ENR-TENS-COLLAPSE", _needs_enriched, law_tensored_collapse),
    ("COLLAPSE-SETLIKE", _needs_setlike, law_collapse_setlike),
    ("FACT-CANONICAL", _needs_cat, law_canonical_coherent),
    ("FACT-UNIQ-ISO", _needs_cat, law_factorization_unique_iso),
    ("FACT-STRMONO-KP", _needs_cat, law_strmono_kp),
    ("MON-SYM-INVOLUTION", _needs_mcs, law_mon_sym_involution),
    ("MON-HOM-FUNCTORIAL", _needs_mcs, law_mon_hom_functorial),
    ("MON-REVALIDATE", _needs_mcs, law_mon_revalidate),
]

LAW_IDS = tuple(law_id for law_id, _, _ in LAWS)


def run_laws(
    entity,
    seed: int = DEFAULT_SEED,
    law_ids=None,
    pasting_target: int = 150,
    threads: int = 1,
) -> list[LawResult]:
    """Run every applicable law (or the named subset) against one entity."""
    ctx = LawContext(entity, seed, pasting_target)
    selected = [
        (law_id, runner)
        for law_id, applies, runner in LAWS
        if (law_ids is None or law_id in law_ids) and applies(ctx)
    ]
    if threads > 1 and len(selected) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda pair: pair[1](ctx), selected))
    else:
        results = [runner(ctx) for _, runner in selected]
    return results
