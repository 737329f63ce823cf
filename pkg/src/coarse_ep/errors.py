"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """Caller passed arguments that violate an operation's contract."""


class InvariantViolation(AssertionError):
    """An internal invariant failed; this always indicates a bug in the library."""


class LimitExceeded(RuntimeError):
    """An exhaustive search refused to run because the instance is too large."""


class InstanceTooLarge(RuntimeError):
    """The solver hit a configured enumeration cap."""


def check(condition: bool, message: str) -> None:
    """Raise :class:`InvariantViolation` unless ``condition`` holds.

    Unlike ``assert`` this is never stripped by ``python -O``.
    """
    if not condition:
        raise InvariantViolation(message)
