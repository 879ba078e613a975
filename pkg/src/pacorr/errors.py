"""Exception types shared across the package."""


class InvalidLengthError(ValueError):
    """Sequence length outside the operation's domain."""


class InvalidShiftError(ValueError):
    """Shift index outside [0, m)."""


class InvalidInputError(ValueError):
    """Malformed argument (bad symbol, bad index set, bad config)."""


class UnsupportedInputError(ValueError):
    """Input is well-formed but the operation is not defined for it
    (e.g. a law that only exists for odd prime modulus)."""


class PremiseError(ValueError):
    """A bound was requested outside the hypotheses under which it holds."""


class FeasibilityError(RuntimeError):
    """Requested computation exceeds a named enumeration cap.

    cap_name identifies the constant so callers can report which limit
    was hit and how to override it.
    """

    def __init__(self, message: str, cap_name: str, cap_value=None):
        super().__init__(message)
        self.cap_name = cap_name
        self.cap_value = cap_value
