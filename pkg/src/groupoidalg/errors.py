"""Exception hierarchy shared across the package."""


class GroupoidAlgError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(GroupoidAlgError):
    """Vector or subspace lengths do not agree."""


class ContainmentError(GroupoidAlgError):
    """A quotient was requested with a kernel not contained in the numerator."""


class MalformedTable(GroupoidAlgError):
    """Groupoid tables reference out-of-range ids or are inconsistent."""


class NotAUnit(GroupoidAlgError):
    """An operation expected a unit arrow."""


class ZeroCocycleValue(GroupoidAlgError):
    """A cocycle value of zero was supplied; twists must take invertible values."""


class CocycleDomainError(GroupoidAlgError):
    """A cocycle value was supplied on a non-composable pair."""


class BisectionRequired(GroupoidAlgError):
    """The support of the element is not a bisection."""


class NoPartialInverse(GroupoidAlgError):
    """No partial inverse exists (e.g. for the zero coefficient)."""


class NotANormalizer(GroupoidAlgError):
    """Certification of a normalizer pair failed; carries the failing condition."""

    def __init__(self, condition, witness=None):
        self.condition = condition
        self.witness = witness
        msg = f"normalizer condition failed: {condition}"
        if witness is not None:
            msg += f" (witness: {witness})"
        super().__init__(msg)


class UnitalityError(GroupoidAlgError):
    """A module expected to be unital is not."""


class BudgetExceeded(GroupoidAlgError):
    """An exhaustive enumeration would exceed the configured search budget."""


class TrivialModuleError(GroupoidAlgError):
    """Irreducibility is undefined for the zero module."""


class TheoremViolation(GroupoidAlgError):
    """An identity that must hold by general theory failed; indicates a bug."""


class ProblemFileError(GroupoidAlgError):
    """A problem file failed to parse; carries a line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
