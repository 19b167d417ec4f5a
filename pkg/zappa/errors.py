"""Exception hierarchy for the zappa engine."""

from typing import Any, Optional


class ZappaError(Exception):
    """Base class for all engine errors.

    Errors raised from a failed check carry the first counterexample in
    ``witness`` so callers can report it without re-running the check.
    """

    def __init__(self, message: str, witness: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.witness = witness


class InvalidOrderError(ZappaError, ValueError):
    """Group order (or table size) is not a positive integer."""


class MalformedPairError(ZappaError, ValueError):
    """Action tables have wrong dimensions or out-of-range entries."""


class MatchedPairInvalidError(ZappaError, ValueError):
    """Tables are well formed but violate one of C1..C6."""


class NotAZappaFactorizationError(ZappaError, ValueError):
    """Subgroups do not factor the group uniquely as h·k."""


class MapAlgebraTypeError(ZappaError, TypeError):
    """Map tables have incompatible domains or codomains."""


class NotTwoGeneratedError(ZappaError, ValueError):
    """The product group is not generated by the embedded generators."""


class ScaleError(ZappaError, RuntimeError):
    """Group order exceeds the brute-force cap."""


class NotInAError(ZappaError, ValueError):
    """A quadruple of maps fails one of the conditions A1..A7."""


class UnknownFamilyError(ZappaError, ValueError):
    """Unknown subgroup family identifier."""


class FamilyInapplicableError(ZappaError, ValueError):
    """Family construction or prediction does not apply to the input."""


class FamilyParamError(ZappaError, ValueError):
    """Family parameters violate the defining congruences."""


class FormulaConsistencyError(ZappaError, RuntimeError):
    """Closed-form action tables disagree with the generator extension."""


class NotAGroupError(ZappaError, ValueError):
    """A multiplication table lacks an identity, inverses or associativity."""
