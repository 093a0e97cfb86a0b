"""Exception hierarchy shared across the engine."""


class GlocalsyncError(Exception):
    """Base class for all engine errors."""


class ParseError(GlocalsyncError):
    """A config, catalog, log, or dataset document could not be parsed."""


class ValidationError(GlocalsyncError):
    """A parsed document violates a structural invariant."""


class UnknownCountry(GlocalsyncError):
    pass


class UnknownItem(GlocalsyncError):
    pass


class UnknownTask(GlocalsyncError):
    pass


class AlreadyAcked(GlocalsyncError):
    pass


class OutOfScopeWrite(GlocalsyncError):
    """An update was authored at a replica outside the component's scope."""


class StaleEvent(GlocalsyncError):
    """Logical time did not advance past all previously applied events."""


class IncompleteRecords(GlocalsyncError):
    """A complete-graph webpage is missing one or more target judgments."""


class AsymmetricDataset(GlocalsyncError):
    """Mirrored pairwise records disagree for the same webpage."""


class InvalidPercentages(GlocalsyncError):
    pass


class InvalidFaultModel(GlocalsyncError):
    pass
