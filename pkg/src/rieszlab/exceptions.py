"""Exception hierarchy shared by all modules."""


class RieszError(Exception):
    """Base class for every error raised by rieszlab."""


class DimensionMismatch(RieszError, ValueError):
    pass


class NotInAlgebra(RieszError, ValueError):
    """A component mask is not a union of atoms of the Boolean algebra."""

    def __init__(self, mask, message=None):
        self.mask = mask
        super().__init__(message or f"mask {mask} is not a member of the algebra")


class RefinementError(RieszError, ValueError):
    pass


class OracleBoundExceeded(RieszError):
    def __init__(self, atoms, bound):
        self.atoms = atoms
        self.bound = bound
        super().__init__(f"oracle bound exceeded: {atoms} atoms > bound {bound}")


class PreconditionError(RieszError, ValueError):
    pass


class FunctionalViolation(RieszError, ValueError):
    """A matrix does not define a T-linear functional.

    ``witness`` holds the concrete failing data as a JSON-friendly dict.
    """

    def __init__(self, message, witness):
        self.witness = witness
        super().__init__(message)


class RangeViolation(FunctionalViolation):
    pass


class HomogeneityViolation(FunctionalViolation):
    pass


class InstanceError(RieszError, ValueError):
    """Invalid instance file; ``pointer`` is a JSON pointer to the offending value."""

    def __init__(self, message, pointer=""):
        self.pointer = pointer
        super().__init__(f"{pointer or '/'}: {message}")
