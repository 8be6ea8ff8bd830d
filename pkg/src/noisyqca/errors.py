"""Exception hierarchy shared by the simulator modules."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateParameterError(DomainError):
    """Rule parameters make the block-unitary normalization vanish."""


class CapacityError(DomainError):
    """The requested problem size exceeds what the routine supports."""


class DegenerateProjectionError(DomainError):
    """A full-space state carries (almost) no single-excitation weight."""


class InvariantViolation(RuntimeError):
    """A numerical invariant failed during a computation."""
