"""Exception types shared across the package.

Every module re-exports the names it owns so call sites can import from
either place.
"""


class TwistedFockError(Exception):
    """Base class for all package errors."""


# -- base algebra ------------------------------------------------------------

class NotHermitian(TwistedFockError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class NotPositiveDefinite(TwistedFockError):
    """A density/weight matrix has a non-positive eigenvalue."""


# -- correspondences ---------------------------------------------------------

class BaseMismatch(TwistedFockError):
    """Two correspondences do not share the same base algebra."""


class InvolutionViolation(TwistedFockError):
    """Conjugation data fails C·conj(C) = I."""


class FlowConjugationMismatch(TwistedFockError):
    """Flow generator and conjugation are not compatible (a·C != -C·conj(a))."""


class NotRepresentation(TwistedFockError):
    """Supplied family of matrices is not a unitary representation."""


class EquivarianceViolation(TwistedFockError):
    """Data fails to commute with the group representation."""


class SpectrumAsymmetric(TwistedFockError):
    """Frequency multiset is not symmetric under negation."""


class SectorNotInducedBimodule(TwistedFockError):
    """A frequency sector is not an induced bimodule L2(M) x multiplicity."""


# -- twists ------------------------------------------------------------------

class NormExceedsOne(TwistedFockError):
    """Twist operator norm exceeds 1."""


class DimensionMismatch(TwistedFockError):
    """Operator dimensions inconsistent with the declared leg dimension."""


class BudgetExceeded(TwistedFockError):
    """A requested construction exceeds the configured dimension budget."""

    def __init__(self, message, estimate=None, budget=None):
        super().__init__(message)
        self.estimate = estimate
        self.budget = budget


class NotATwist(TwistedFockError):
    """Some tower operator P_n fails positive semi-definiteness."""


class LevelMismatch(TwistedFockError):
    """Multiplicity-level and bimodule-level objects mixed up."""


class QOutOfRange(TwistedFockError):
    """Deformation parameter outside [0, 1)."""


# -- Fock --------------------------------------------------------------------

class VectorDimensionMismatch(TwistedFockError):
    """Vector length does not match the correspondence dimension."""


class RealityViolation(TwistedFockError):
    """Vector is not in the required real subspace."""


class WordTooLongForCutoff(TwistedFockError):
    """A field-operator word would leak past the Fock cutoff."""


class HypothesisViolation(TwistedFockError):
    """Spectral-gap hypotheses fail on the supplied vectors."""


class IncompatibleTwist(TwistedFockError):
    """Twist cannot produce a positive twisted inner product."""


# -- semigroups --------------------------------------------------------------

class EigenrelationViolated(TwistedFockError):
    """Jump operator is not an eigenvector of conjugation by h."""


class NotAdjointClosed(TwistedFockError):
    """Jump set is not closed under adjoints."""


class ZeroJump(TwistedFockError):
    """Zero matrix supplied as a jump operator."""


class RoundTripMismatch(TwistedFockError):
    """Bohr spectrum routes disagree."""


# -- CLI ---------------------------------------------------------------------

class ConfigParse(TwistedFockError):
    """Config file is not valid JSON."""


class ConfigSchema(TwistedFockError):
    """Config violates the expected schema."""
