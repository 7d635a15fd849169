"""Exception types raised across the package.

Every contract violation gets its own class so callers can catch precisely;
all of them descend from ChordLabError.
"""


class ChordLabError(Exception):
    """Base class for all chordlab errors."""


# --- diagram construction / geometry ---

class DiagramError(ChordLabError, ValueError):
    pass


class EmptyDiagramError(DiagramError):
    """n = 0 is rejected everywhere; processes start at one chord."""


class DuplicateEndpointError(DiagramError):
    pass


class LabelOutOfRangeError(DiagramError):
    pass


class SelfPairError(DiagramError):
    pass


class ChordNotInDiagramError(DiagramError):
    pass


class SharedEndpointError(DiagramError):
    pass


class EmptySubdiagramError(DiagramError):
    pass


class InvalidLabelingError(DiagramError):
    pass


class JOutOfRangeError(DiagramError):
    pass


class DiagramSyntaxError(DiagramError):
    """Malformed textual/JSON diagram input."""


# --- sampling ---

class ZeroSizeError(ChordLabError, ValueError):
    pass


# --- graph analysis ---

class KOutOfRangeError(ChordLabError, ValueError):
    pass


class MOutOfRangeError(ChordLabError, ValueError):
    pass


class UnknownChordError(ChordLabError, ValueError):
    pass


# --- closed forms ---

class OutOfRangeError(ChordLabError, ValueError):
    pass


class EvenArgumentError(OutOfRangeError):
    """Double factorial is only used with odd arguments; evens are bugs."""


# --- enumeration ---

class SizeCapExceededError(ChordLabError, ValueError):
    """Exhaustive enumeration refused beyond its documented size cap."""


class EmptyConditionError(ChordLabError, ValueError):
    pass


# --- statistics / experiments ---

class NotNormalizedError(ChordLabError, ValueError):
    pass


class TooFewSamplesError(ChordLabError, ValueError):
    pass


class InvalidConfigError(ChordLabError, ValueError):
    pass


class CostCapExceededError(ChordLabError, RuntimeError):
    """Estimated work exceeds the configured budget; opt out explicitly."""
