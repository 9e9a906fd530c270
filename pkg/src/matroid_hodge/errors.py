"""Exception types.  Every error carries a short machine-readable code."""


class MatroidHodgeError(Exception):
    code = "error"

    def __init__(self, code, message):
        super().__init__(message)
        self.code = code
        self.message = message

    def to_json(self):
        return {"code": self.code, "message": self.message}


class InputError(MatroidHodgeError):
    """Malformed or unsupported input, including inputs over the size caps."""


class VerificationError(MatroidHodgeError):
    """A mathematical check failed on well-formed input."""
