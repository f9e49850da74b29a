"""Exception hierarchy shared by all qgstream modules."""


class QGStreamError(Exception):
    """Base class for every error raised by qgstream."""


class InvalidModulusError(QGStreamError, ValueError):
    pass


class NotInvertibleError(QGStreamError, ValueError):
    pass


class CannotVerifyError(QGStreamError, ValueError):
    """A generator could not be verified from the supplied factorization."""


class DomainError(QGStreamError, ValueError):
    """An operand lies outside the quasigroup carrier {1, ..., p-1}."""


class ParameterError(QGStreamError, ValueError):
    pass


class HandshakeError(QGStreamError):
    """The session offer decrypted to values outside their legal ranges."""


class CorruptBlockError(QGStreamError):
    def __init__(self, message, index=None):
        super().__init__(message if index is None else f"block {index}: {message}")
        self.index = index


class DesyncError(QGStreamError):
    """Sequence numbers show that the twin stream states have diverged."""


class ProtocolError(QGStreamError):
    pass


class AttackFailedError(QGStreamError):
    pass


class DegenerateInstanceError(QGStreamError):
    """A simplified-model instance hit a zero denominator."""
