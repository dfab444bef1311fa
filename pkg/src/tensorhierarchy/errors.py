"""Exception types raised by the pipeline.

Each family maps onto one CLI exit code (see ``cli.EXIT_CODES``).
"""


class ThxError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(ThxError, ValueError):
    pass


class ParseError(ThxError):
    """Malformed input file; ``where`` names the offending field or line."""

    def __init__(self, message, where=None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


# -- the input is not a Lie-Leibniz triple ---------------------------------

class ConstraintViolation(ThxError):
    pass


class LieAlgebraInvalid(ConstraintViolation):
    pass


class ActionNotMorphism(ConstraintViolation):
    def __init__(self, a, b, detail=""):
        self.a, self.b = a, b
        super().__init__(f"rho([a{a},a{b}]) != [rho(a{a}),rho(a{b})] {detail}".rstrip())


class QuadraticConstraintViolation(ConstraintViolation):
    def __init__(self, i, j):
        self.i, self.j = i, j
        super().__init__(f"Theta(x{i} o x{j}) != [Theta x{i}, Theta x{j}]")


class LeibnizIdentityViolation(ConstraintViolation):
    pass


class InclusionViolation(ConstraintViolation):
    pass


class ProductMismatch(ConstraintViolation):
    """A supplied Leibniz product disagrees with the one derived from (rho, Theta)."""


# -- internal consistency failures of the construction ---------------------

class PipelineError(ThxError):
    pass


class ActionLeak(PipelineError):
    pass


class ExactnessFailure(PipelineError):
    def __init__(self, degree, deficit):
        self.degree, self.deficit = degree, deficit
        super().__init__(f"exactness fails at degree {degree}: rank deficit {deficit}")


class FactorizationFailure(PipelineError):
    pass


class WellDefinednessFailure(PipelineError):
    pass


class MuIllDefined(PipelineError):
    def __init__(self, degree, witness):
        self.degree, self.witness = degree, witness
        super().__init__(f"mu at degree {degree} violates orbit relation {witness}")


# -- morphisms --------------------------------------------------------------

class MorphismInvalid(ThxError):
    pass


class KernelNotPreserved(ThxError):
    pass


class Phi1IllDefined(ThxError):
    pass
