"""Exception hierarchy shared by all cyclemine modules.

Three broad families matter for the CLI exit codes: configuration
problems (bad parameters), data problems (bad or missing input), and
numeric degeneracies (operations that cannot produce a meaningful
number for the given values).
"""


class CycleMineError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(CycleMineError):
    """Invalid configuration or parameters."""


class DataError(CycleMineError):
    """Malformed, missing or inconsistent input data."""


class NumericError(CycleMineError):
    """Numerically degenerate situation (division by ~0, zero variance, ...)."""


# --- time series ingestion / table handling ---

class MissingColumn(DataError):
    def __init__(self, name):
        super().__init__(f"required column {name!r} not found in header")
        self.name = name


class UnparsableTimestamp(DataError):
    def __init__(self, line, text):
        super().__init__(f"line {line}: cannot parse timestamp {text!r}")
        self.line = line
        self.text = text


class DuplicateTimestamp(DataError):
    def __init__(self, instant):
        super().__init__(f"duplicate timestamp {instant}")
        self.instant = instant


class EmptyTable(DataError):
    pass


class IndexOutOfRange(DataError):
    pass


class UnknownChannel(DataError):
    def __init__(self, name):
        super().__init__(f"unknown channel {name!r}")
        self.name = name


# --- segmentation ---

class EmptyInput(DataError):
    pass


class DegenerateInit(NumericError):
    """Fewer distinct points than requested clusters."""


class NoCompleteRows(DataError):
    """No row has complete values on all requested feature channels."""


# --- symbolic transform ---

class EmptySeries(DataError):
    pass


class AlphabetTooSmall(ConfigError):
    pass


class TooManyFrames(ConfigError):
    pass


class EmptyCycle(DataError):
    pass


# --- bag of words ---

class WordLengthExceedsSequence(DataError):
    """Every sequence is shorter than the word length."""


class WordNotInVocabulary(DataError):
    def __init__(self, word):
        super().__init__(f"word {word!r} not in vocabulary")
        self.word = word


class VocabularyMismatch(DataError):
    pass


# --- hierarchical clustering ---

class TooFewItems(DataError):
    pass


class NonFiniteDistance(DataError):
    pass


class ZeroVariance(NumericError):
    pass


class InvalidK(ConfigError):
    pass


# --- dynamic time warping ---

class EmptySequence(DataError):
    pass


class WindowInfeasible(ConfigError):
    """Length difference exceeds the alignment band radius."""


# --- performance metrics ---

class DivisionDegenerate(NumericError):
    """Medium and low temperature too close for a meaningful Carnot ratio."""


class NonPhysicalTemperature(DataError):
    """Absolute temperature at or below 0 K."""


class ZeroDrivingHeat(NumericError):
    pass


class MissingChannel(DataError):
    def __init__(self, name):
        super().__init__(f"cycle is missing required channel {name!r}")
        self.name = name


class AllTicksDegenerate(NumericError):
    """No tick of the cycle yields a valid performance figure."""


# --- synthetic generator ---

class InfeasibleTarget(ConfigError):
    """No physical temperature/power combination reaches the target efficiency."""


# --- reporting ---

class EmptyReport(DataError):
    pass
