"""Exception types raised across forestlab."""


class ForestlabError(Exception):
    """Base class for all library errors."""


class MalformedInput(ForestlabError, ValueError):
    """Input text or structure does not describe a valid object."""


class LengthMismatch(ForestlabError, ValueError):
    pass


class SizeLimitExceeded(ForestlabError, ValueError):
    """An exhaustive enumeration was requested beyond the configured cap."""


class NotATree(ForestlabError, ValueError):
    pass


class EmptyOrFullSet(ForestlabError, ValueError):
    pass


class TieWeightUnsupported(ForestlabError, ValueError):
    """The subset-sum route cannot handle k = W/2; use the enumeration route."""


class HypothesisFailed(ForestlabError):
    """The premise of a cascade check does not hold; carries the witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotBridgeAlterable(ForestlabError, ValueError):
    pass


class NotBridgeAddable(ForestlabError, ValueError):
    pass
