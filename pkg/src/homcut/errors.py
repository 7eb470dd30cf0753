"""Exception types shared across homcut."""


class HomcutError(Exception):
    """Base class for all errors raised by homcut."""


class SizeCapExceeded(HomcutError):
    def __init__(self, what, size, cap):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class ParseError(HomcutError):
    def __init__(self, message, line=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


class LoopRejected(ParseError):
    pass


class DuplicateEdgeIgnored(UserWarning):
    pass


class SupportMismatch(HomcutError):
    pass


class PreconditionViolated(HomcutError):
    pass


class InvalidWitness(HomcutError):
    pass


class NotFound(HomcutError):
    pass


class NotApplicable(HomcutError):
    pass


class InvalidPermutation(HomcutError):
    pass


class BudgetExceeded(HomcutError):
    pass


class RetryLimit(HomcutError):
    def __init__(self, message, best=None, attempts=0):
        super().__init__(message)
        self.best = best
        self.attempts = attempts
