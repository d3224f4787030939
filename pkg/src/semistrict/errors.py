"""Exceptions raised across the package.

Every exception carries a short machine-readable ``code`` which the CLI
copies into its JSON reports.
"""


class SemistrictError(Exception):
    code = "error"

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details

    def as_dict(self):
        out = {"code": self.code, "message": str(self)}
        for k, v in self.details.items():
            out[k] = v
        return out


class InvalidInput(SemistrictError):
    code = "invalid_input"


class NotAHomomorphism(SemistrictError):
    code = "not_a_homomorphism"

    def __init__(self, x, y, message=None):
        super().__init__(message or f"hom law fails at pair ({x}, {y})", pair=[int(x), int(y)])
        self.pair = (int(x), int(y))


class NotNormal(SemistrictError):
    code = "not_normal"


class SizeCapExceeded(SemistrictError):
    code = "size_cap_exceeded"


class TruncationTooShallow(SemistrictError):
    code = "truncation_too_shallow"


class NotSimplicial(SemistrictError):
    code = "not_simplicial"


class NotACrossedModule(SemistrictError):
    code = "not_a_crossed_module"

    def __init__(self, axiom, message=None, **details):
        super().__init__(message or f"crossed module axiom fails: {axiom}", axiom=axiom, **details)
        self.axiom = axiom


class QuotientIllFormed(SemistrictError):
    code = "quotient_ill_formed"


class NotAMorphism(SemistrictError):
    code = "not_a_morphism"


class RetractionInvalid(SemistrictError):
    code = "retraction_invalid"


class NotA1Nerve(SemistrictError):
    code = "not_a_1_nerve"

    def __init__(self, level, message=None):
        super().__init__(message or f"Segal map at level {level} is not bijective", level=int(level))
        self.level = int(level)


class NotAFunctor(SemistrictError):
    code = "not_a_functor"


class NotGroupLevel(SemistrictError):
    code = "not_group_level"


class NotInH(SemistrictError):
    code = "not_in_H"


class NotAMonoid(SemistrictError):
    code = "not_a_monoid"


class InternalConsistencyError(SemistrictError):
    code = "internal_consistency"


class ParseError(SemistrictError):
    code = "parse_error"


class UnknownName(SemistrictError):
    code = "unknown_name"
