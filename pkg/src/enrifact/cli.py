"""Batch command-line surface: one command per process, canonical reports.

Exit codes: 0 when the command ran and its verdict holds (or the command
is pure output), 1 when a verdict is false (the report is still emitted),
2 on validation or schema errors, 3 on usage errors.  Reports are
canonical JSON; the timing field is excluded from the report hash so two
runs over identical inputs agree byte for byte everywhere else.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time

from . import __version__
from .documents import Document, load_entity, parse, serialize
from .enriched import underlying, v_classify
from .errors import EngineError, SchemaError, VERDICT_ERRORS
from .factor import (
    canonical_systems,
    check_fwc,
    factorize_via_intersection,
    is_factorization_system,
    resolve_class,
)
from .fincat import FinCategory, classify_morphism
from .laws import DEFAULT_SEED, run_laws
from .monoidal import MonoidalClosedStructure
from .ortho import is_orthogonal, is_v_orthogonal, prefactorization_closure


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def thread_cap() -> int:
    raw = os.environ.get("ENRIFACT_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"ENRIFACT_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise UsageError(f"ENRIFACT_THREADS must be a positive integer, got {raw!r}")
    return n


def canonical_report_bytes(report: dict) -> bytes:
    """The canonical serialization with volatile fields removed."""
    core = {k: v for k, v in report.items() if k not in ("timing", "report_hash")}
    return (json.dumps(core, sort_keys=True, separators=(",", ":")) + "\n").encode()


def finish_report(report: dict, started: float) -> dict:
    report["timing"] = {"seconds": round(time.monotonic() - started, 6)}
    report["report_hash"] = hashlib.sha256(canonical_report_bytes(report)).hexdigest()
    return report


def _emit(report: dict, fmt: str, out_path):
    if fmt == "json":
        text = json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"
    else:
        text = _render_text(report)
    if out_path:
        directory = os.path.dirname(os.path.abspath(out_path)) or "."
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".enrifact-")
        try:
            with os.fdopen(fd, "w") as handle:
                handle.write(text)
            os.replace(tmp, out_path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    else:
        sys.stdout.write(text)


def _render_text(report: dict) -> str:
    lines = [f"enrifact {report['engine']['version']}: {' '.join(report['command'])}"]
    verdict = report.get("verdict")
    if verdict is not None:
        lines.append(f"verdict: {'holds' if verdict else 'fails'}")
    result = report.get("result", {})
    if "error" in result:
        err = result["error"]
        lines.append(f"error [{err['code']}]: {err['message']}")
    if "laws" in result:
        for entry in result["laws"]:
            status = "pass" if entry["passed"] else "FAIL"
            lines.append(f"law {entry['law']}: {status} (n={entry['instances']})")
    for key in ("kind", "objects", "morphisms", "category"):
        if key in result and isinstance(result[key], (str, int)):
            lines.append(f"{key}: {result[key]}")
    lines.append(f"report: {report['report_hash']}")
    return "\n".join(lines) + "\n"


def _load(path: str) -> Document:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as err:
        raise SchemaError(f"cannot read {path!r}: {err}", path=path)
    return parse(text)


def _category_like(entity):
    if isinstance(entity, MonoidalClosedStructure):
        raise SchemaError(
            "this command needs a category or enriched document", kind="monoidal"
        )
    return entity


def _mode_entity(entity, enriched_flag: bool):
    entity = _category_like(entity)
    if enriched_flag and isinstance(entity, FinCategory):
        raise SchemaError(
            "--enriched needs an enriched document; this one is a plain category"
        )
    return entity, ("enriched" if enriched_flag else "ordinary")


def _ids_argument(raw: str) -> list:
    return [s for s in raw.split(",") if s]


def build_parser() -> _Parser:
    parser = _Parser(prog="enrifact", description=__doc__)
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--out", default=None)
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("validate")
    p.add_argument("file")

    p = sub.add_parser("classify")
    p.add_argument("file")
    p.add_argument("--enriched", action="store_true")

    p = sub.add_parser("orth")
    p.add_argument("file")
    p.add_argument("e_id")
    p.add_argument("m_id")
    p.add_argument("--enriched", action="store_true")

    p = sub.add_parser("closure")
    p.add_argument("file")
    p.add_argument("--seed", required=True)
    p.add_argument("--side", choices=("left", "right"), required=True)
    p.add_argument("--enriched", action="store_true")

    p = sub.add_parser("factorize")
    p.add_argument("file")
    p.add_argument("g_id")
    p.add_argument("--right-class", required=True, dest="right_class")

    p = sub.add_parser("check-system")
    p.add_argument("file")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--enriched", action="store_true")

    p = sub.add_parser("canonical")
    p.add_argument("file")

    p = sub.add_parser("laws")
    p.add_argument("file")
    p.add_argument("--law", action="append", default=None)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = sub.add_parser("fwc")
    p.add_argument("file")
    return parser


def _execute(args, report: dict):
    """Returns (result payload, verdict or None)."""
    doc = _load(args.file)
    report["inputs"] = {args.file: doc.meta["hash"]}
    entity = load_entity(doc)

    if args.cmd == "validate":
        cat = entity.base if isinstance(entity, MonoidalClosedStructure) else underlying(entity)
        return {
            "kind": doc.kind,
            "objects": len(cat.objects),
            "morphisms": len(cat.morphism_ids),
            "category": entity.content_hash,
            "document": serialize(doc).strip(),
        }, None

    if args.cmd == "classify":
        b, mode = _mode_entity(entity, args.enriched)
        cat = underlying(b)
        table = {}
        for f in cat.morphism_ids:
            entry = {"flags": sorted(classify_morphism(cat, f))}
            if mode == "enriched":
                entry["v_flags"] = sorted(v_classify(b, f))
            table[f] = entry
        return {"category": b.content_hash, "morphisms": table}, None

    if args.cmd == "orth":
        b, mode = _mode_entity(entity, args.enriched)
        check = is_v_orthogonal if mode == "enriched" else is_orthogonal
        verdict = check(b, args.e_id, args.m_id)
        return {
            "category": b.content_hash,
            "mode": mode,
            "verdict": verdict.to_json(),
        }, verdict.holds

    if args.cmd == "closure":
        b, mode = _mode_entity(entity, args.enriched)
        e_cls, m_cls = prefactorization_closure(
            b, _ids_argument(args.seed), args.side, mode
        )
        return {
            "category": b.content_hash,
            "mode": mode,
            "e_class": e_cls.to_json(),
            "m_class": m_cls.to_json(),
        }, None

    if args.cmd == "factorize":
        b = _category_like(entity)
        m_cls = resolve_class(b, args.right_class)
        e_part, m_part = factorize_via_intersection(b, args.g_id, m_cls)
        return {
            "category": b.content_hash,
            "morphism": args.g_id,
            "e": e_part,
            "m": m_part,
            "right_class": m_cls.provenance,
        }, True

    if args.cmd == "check-system":
        b, mode = _mode_entity(entity, args.enriched)
        left = resolve_class(b, args.left)
        right = resolve_class(b, args.right)
        verdict = is_factorization_system(b, left, right, mode)
        return {
            "category": b.content_hash,
            "mode": mode,
            "verdict": verdict.to_json(),
        }, verdict.holds

    if args.cmd == "canonical":
        b = _category_like(entity)
        result = canonical_systems(b)
        ok = all(a.get("ok") for a in result["attempts"].values())
        return result, ok

    if args.cmd == "laws":
        b = entity
        results = run_laws(
            b,
            seed=args.seed,
            law_ids=set(args.law) if args.law else None,
            threads=thread_cap(),
        )
        payload = {
            "category": entity.content_hash,
            "laws": [r.to_json() for r in results],
        }
        return payload, all(r.passed for r in results)

    if args.cmd == "fwc":
        b = _category_like(entity)
        result = check_fwc(b)
        return (
            {"category": b.content_hash, "fwc": result.to_json()},
            result.has_finite_v_limits and result.has_strongmono_v_intersections,
        )

    raise UsageError(f"unknown command {args.cmd!r}")


def run_command(argv) -> int:
    """Parse argv, run one command, emit one report; never raises on bad input."""
    started = time.monotonic()
    report: dict = {
        "command": list(argv),
        "engine": {"name": "enrifact", "version": __version__},
        "inputs": {},
    }
    fmt, out_path = "json", None
    try:
        args = build_parser().parse_args(argv)
        fmt, out_path = args.format, args.out
        thread_cap()
        result, verdict = _execute(args, report)
        report["result"] = result
        report["verdict"] = verdict
        code = 0 if verdict in (True, None) else 1
    except UsageError as err:
        report["result"] = {"error": {"code": "usage", "message": str(err), "detail": {}}}
        report["verdict"] = None
        _emit(finish_report(report, started), fmt, out_path)
        return 3
    except VERDICT_ERRORS as err:
        report["result"] = {"error": err.to_json()}
        report["verdict"] = False
        _emit(finish_report(report, started), fmt, out_path)
        return 1
    except EngineError as err:
        report["result"] = {"error": err.to_json()}
        report["verdict"] = None
        _emit(finish_report(report, started), fmt, out_path)
        return 2
    _emit(finish_report(report, started), fmt, out_path)
    return code


def main(argv=None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
