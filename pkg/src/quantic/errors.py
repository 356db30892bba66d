"""Exception taxonomy shared across the package."""


class QuanticError(Exception):
    """Base class for all library errors."""


class StructureError(QuanticError, ValueError):
    """Malformed input: broken axioms, foreign ids, bad tables."""


class CarrierTooLarge(QuanticError):
    """Enumeration-grade operation requested on a carrier over the size cap."""


class HypothesisNotMet(QuanticError):
    """An operation refused to run because its stated hypotheses fail.

    The message names the failed hypothesis; callers must not interpret this
    as a mathematical verdict.
    """


class InternalCheckError(QuanticError):
    """Two characterizations that are provably equivalent disagreed.

    This is a bug in the library (or a refuted theorem), never a property of
    the input.
    """


class UndecidableFamily(QuanticError):
    """A lazy carrier was asked about a family outside its describable schemas."""


class IterationBudgetExceeded(QuanticError):
    """A fixpoint iteration on a lazy carrier did not stabilize in budget."""


class NotAMorphism(QuanticError):
    """A claimed morphism failed verification in its category."""


class NoUnit(QuanticError):
    """Operation requires a unital carrier."""
