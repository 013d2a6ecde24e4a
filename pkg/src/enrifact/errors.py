"""Exception taxonomy shared by all engine modules.

Every failure carries a stable machine-readable ``code`` plus a ``detail``
dict naming the offending IDs, so CLI reports can embed failures verbatim.
"""

from __future__ import annotations


class EngineError(Exception):
    code = "engine-error"

    def __init__(self, message: str, **detail):
        super().__init__(message)
        self.detail = dict(detail)

    def to_json(self):
        return {"code": self.code, "message": str(self), "detail": self.detail}


# -- category tables ---------------------------------------------------------

class DuplicateID(EngineError):
    code = "duplicate-id"


class DanglingID(EngineError):
    code = "dangling-id"


class MissingComposite(EngineError):
    code = "missing-composite"


class AssociativityViolation(EngineError):
    code = "associativity-violation"


class IdentityViolation(EngineError):
    code = "identity-violation"


class NonCommutingSquare(EngineError):
    code = "non-commuting-square"


class MalformedDiagram(EngineError):
    code = "malformed-diagram"


class NotACone(EngineError):
    code = "not-a-cone"


# -- monoidal closed structure ------------------------------------------------

class InterchangeViolation(EngineError):
    code = "interchange-violation"


class UnitViolation(EngineError):
    code = "unit-violation"


class StrictAssociativityViolation(EngineError):
    code = "strict-associativity-violation"


class SymmetryNotIso(EngineError):
    code = "symmetry-not-iso"


class CurryNotBijective(EngineError):
    code = "curry-not-bijective"


class NaturalityViolation(EngineError):
    code = "naturality-violation"


class NotResiduated(EngineError):
    code = "not-residuated"


class NotMonotone(EngineError):
    code = "not-monotone"


# -- enriched categories ------------------------------------------------------

class EnrichedAssocViolation(EngineError):
    code = "enriched-assoc-violation"


class EnrichedUnitViolation(EngineError):
    code = "enriched-unit-violation"


class DanglingVRef(EngineError):
    code = "dangling-v-ref"


class FamilyNotMono(EngineError):
    code = "family-not-mono"


class NoVLimit(EngineError):
    code = "no-v-limit"


class NotIso(EngineError):
    code = "not-iso"


# -- factorization ------------------------------------------------------------

class HypothesisFailed(EngineError):
    code = "hypothesis-failed"

    def __init__(self, part: str, message: str, **detail):
        super().__init__(message, part=part, **detail)
        self.part = part


class InductionFailure(EngineError):
    code = "induction-failure"


class IntersectionMissing(EngineError):
    code = "intersection-missing"


# -- documents and CLI ----------------------------------------------------------

class DocumentSyntaxError(EngineError):
    code = "syntax-error"


class SchemaError(EngineError):
    code = "schema-error"


class DirectiveError(EngineError):
    code = "directive-error"


# Errors that are negative domain verdicts rather than malformed input; the
# CLI maps these to exit 1 (verdict false) instead of exit 2.
VERDICT_ERRORS = (
    HypothesisFailed,
    InductionFailure,
    IntersectionMissing,
    NoVLimit,
    FamilyNotMono,
    NotIso,
)
