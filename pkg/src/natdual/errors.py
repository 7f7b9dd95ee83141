class NatDualError(Exception):
    """Base class for library errors."""


class SignatureError(NatDualError):
    pass


class ResourceLimitError(NatDualError):
    """A search hit its cap. ``partial`` counts what was found before stopping."""

    def __init__(self, message, partial=0):
        super().__init__(f"{message} (partial count {partial})")
        self.partial = partial


class DecompositionError(NatDualError):
    """Raised when an algebra is not in the prevariety generated by a duplicate.

    ``code`` is one of ``NOT_SEPARATED``, ``NOT_RECTANGULAR``,
    ``NOT_DECOMPOSABLE``, ``NOT_DUAL_ENDOMORPHISM``, ``NOT_CONFLATION``;
    ``witness`` holds the offending elements.
    """

    def __init__(self, code, message, witness=None):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.witness = witness


class CompatibilityError(NatDualError):
    pass


class ConditionError(NatDualError):
    """A duplicator condition needed by a construction does not hold."""


class VerificationError(NatDualError):
    pass
