"""Exception hierarchy for the simulator."""


class MnegotiError(Exception):
    """Base class for all simulator errors."""


class ValidationError(MnegotiError):
    """A scenario document failed validation.

    The message names the offending path within the document,
    e.g. ``groups[1].bounds[2]: lower > upper``.
    """

    def __init__(self, path: str, message: str) -> None:
        self.path = path
        super().__init__(f"{path}: {message}")


class ConfigurationError(MnegotiError):
    """Inconsistent model configuration (dimension mismatch, malformed query)."""


class DuplicateMemberError(MnegotiError):
    """An object with the same (kind, id) is already in the context."""


class NotFoundError(MnegotiError):
    """Referenced member or edge endpoint does not exist."""


class InvalidEdgeError(MnegotiError):
    """Self-edge or otherwise illegal projection edge."""


class SchedulingError(MnegotiError):
    """Action scheduled in the past or into an already-passed priority band."""


class CascadeOverflowError(MnegotiError):
    """Watcher reaction cascade exceeded the per-tick firing cap."""


class InvalidTransitionError(MnegotiError):
    """Illegal state transition (room lifecycle or run control)."""


class RoomClosedError(MnegotiError):
    """Operation requires an open meeting room."""


class AdmissionDeniedError(MnegotiError):
    """Agent does not satisfy the room's admission policy."""


class BusyError(MnegotiError):
    """Agent is already attending another room."""


class ProtocolError(MnegotiError):
    """Negotiation round out of range or otherwise illegal protocol step."""


class NotTerminatedError(MnegotiError):
    """Outcome requested from a session that is still active."""


class OutputError(MnegotiError):
    """Run artifacts could not be written."""
