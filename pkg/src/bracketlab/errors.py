"""Exception hierarchy shared across the package.

Every error raised on purpose derives from :class:`BracketError` so the
command line front end can translate failures into exit code 1 uniformly.
"""


class BracketError(Exception):
    """Base class for all validation and domain errors."""


class EmptySupport(BracketError):
    """A lottery was built from an empty atom list."""


class ProbabilitySumOutOfTolerance(BracketError):
    """Atom probabilities do not sum to 1 within 1e-9."""


class OutcomeOutOfBounds(BracketError):
    """An atom lies outside the outcome space."""


class OutcomeNotInSupport(BracketError):
    """Conditioning outcome is not in the marginal support."""


class SpaceMismatch(BracketError):
    """Two lotteries on different outcome spaces were combined."""


class SourceMismatch(BracketError):
    """A marginal lottery was used for the wrong source."""


class DomainViolation(BracketError):
    """An index or model was evaluated outside its domain."""


class RangeViolation(BracketError):
    """An index was inverted at a value outside its range."""


class NonpositiveScale(BracketError):
    """Affine transform with scale <= 0."""


class NonProductLottery(BracketError):
    """A product-only model was evaluated on a correlated lottery."""


class DegenerateParameters(BracketError):
    """Model parameters outside their admissible region."""


class PreconditionSamplerExhausted(BracketError):
    """An axiom sampler could not build enough precondition tuples."""
