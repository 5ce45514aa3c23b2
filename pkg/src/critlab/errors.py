"""Exception hierarchy.

Every error carries a stable ``code`` string so the command-line front end can
emit machine-readable failures; ``exit_code`` follows the convention
1 = validation/precondition failure, 2 = usage/parse error, 3 = budget
exhausted.
"""

from __future__ import annotations


class CritlabError(Exception):
    """Base class for all library errors."""

    code = "error"
    exit_code = 1


class GroupOrderCapError(CritlabError):
    """A construction would exceed the configured group-order cap."""

    code = "order-cap"


class GroupTableError(CritlabError):
    """A Cayley table fails the group axioms."""

    code = "bad-table"


class ParentMismatchError(CritlabError):
    """Two subsets (or a subset and an element) belong to different groups."""

    code = "parent-mismatch"


class EmptySubsetError(CritlabError):
    """An operation requires a nonempty subset."""

    code = "empty-subset"


class NotSubgroupError(CritlabError):
    """A member set is not closed under the group operations."""

    code = "not-subgroup"


class NotNormalError(CritlabError):
    """A subgroup argument must be normal in its parent."""

    code = "not-normal"


class NotAbelianError(CritlabError):
    """An operation is defined for abelian parents only."""

    code = "not-abelian"


class PivotError(CritlabError):
    """A transform pivot lies outside the current left set."""

    code = "bad-pivot"


class ClassificationError(CritlabError):
    """The pair's criticality class does not admit the requested operation."""

    code = "wrong-class"


class PreconditionError(CritlabError):
    """A named operation precondition failed; ``reason`` is a stable slug."""

    code = "precondition"

    def __init__(self, reason: str, message: str | None = None):
        self.reason = reason
        super().__init__(message or reason)


class VosperPreconditionError(PreconditionError):
    """Arithmetic-progression classification preconditions failed."""

    code = "vosper-precondition"


class RigidityPreconditionError(PreconditionError):
    """Rigidity preconditions failed (not-almost-equal / not-regular /
    not-stable / not-critical)."""

    code = "rigidity-precondition"


class BilinearConditionError(CritlabError):
    """The product of the two tables does not depend on xy alone."""

    code = "not-bilinear"


class KernelMismatchError(CritlabError):
    """Two projections that should share a kernel do not."""

    code = "kernels-differ"


class NoMatchingAutomorphismError(CritlabError):
    """No target automorphism aligns the two pullback presentations."""

    code = "no-matching-automorphism"


class SelfInverseCharacterError(CritlabError):
    """A character equals its own pointwise inverse and cannot be split."""

    code = "self-inverse-character"


class PointCorrectionError(CritlabError):
    """An exact-arc operation received inputs with point corrections."""

    code = "point-corrections"


class SearchBudgetError(CritlabError):
    """An enumeration exceeded its explicit candidate budget."""

    code = "budget-exceeded"
    exit_code = 3


class ChainError(CritlabError):
    """A subgroup chain is not decreasing or not normal throughout."""

    code = "bad-chain"


class SoundnessError(CritlabError):
    """A mathematically guaranteed postcondition failed.

    Raised instead of returning fabricated output; reaching this indicates a
    bug in the library (or a falsified theorem), never a user error.
    """

    code = "soundness"
