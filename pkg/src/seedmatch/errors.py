"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Bad user input: malformed distributions, files, or parameters."""


class InfeasibleJointError(ValidationError):
    """The joint edge distribution carries no information (I = 0)."""


class EmptySeedsError(ValidationError):
    """A seeded matching run was started with zero seeds."""


class NotBracketedError(RuntimeError):
    """A sweep never straddles the 50% success level."""
