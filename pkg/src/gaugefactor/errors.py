"""Exception types shared across the package."""


class GaugeFactorError(Exception):
    """Base class for package errors."""


class DimensionMismatch(GaugeFactorError):
    """Vector/matrix dimensions inconsistent with the space."""


class ScaleLimit(GaugeFactorError):
    """Instance exceeds the supported dimension/facet/atom caps."""


class CycleLimitExceeded(GaugeFactorError):
    """Simplex pivot cap reached; input degenerate beyond supported scale."""


class NonConvergent(GaugeFactorError):
    """Series truncation cannot meet the tolerance within the term cap."""


class NotInCarrier(GaugeFactorError):
    """Vector lies outside the span of the renorming body."""


class ZeroOperator(GaugeFactorError):
    """Operator factorization requires a non-zero map."""


class OracleDisagreement(GaugeFactorError):
    """Two independent computation routes disagree beyond tolerance."""


class NotControlMeasure(GaugeFactorError):
    """Scalar measure vanishes on an atom the vector measure charges."""


class SearchExhausted(GaugeFactorError):
    """Randomized search failed within the retry budget."""


class SchemaError(GaugeFactorError):
    """Malformed input file; message names the offending field."""
