"""Exception types shared across the package."""


class SepcurvError(Exception):
    """Base class for every error this package raises deliberately."""


class ParseError(SepcurvError, ValueError):
    """Malformed expression source.

    `offset` is a byte offset into the UTF-8 encoding of the input, pointing
    at the first byte the parser could not make sense of.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte {offset})")
        self.offset = offset


class DomainError(SepcurvError, ValueError):
    """Evaluation was requested outside a function's declared open domain."""


class NonFiniteError(SepcurvError, ArithmeticError):
    """Evaluation produced a non-finite intermediate value."""


class RegularityError(SepcurvError, ValueError):
    """Gradient norm or height slope fell below the regularity threshold."""


class SolveError(SepcurvError):
    """Height-coordinate root solve failed."""


class BracketError(SolveError):
    """The supplied bracket does not straddle a sign change."""


class ConvergenceError(SolveError):
    """Root refinement exhausted its iteration budget."""


class OffSurfaceError(SepcurvError, ValueError):
    """Coordinates do not satisfy the implicit equation within tolerance."""


class DegeneratePlaneError(SepcurvError, ValueError):
    """Plane section spanned by (nearly) dependent or non-tangent vectors."""


class SpecFileError(SepcurvError, ValueError):
    """Malformed or inconsistent surface-spec file."""


class MeshError(SepcurvError):
    """Mesh export could not produce a usable mesh."""
