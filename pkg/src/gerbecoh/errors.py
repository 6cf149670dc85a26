"""Exceptions shared by all gerbecoh modules."""


class GerbecohError(Exception):
    """Base class for errors raised by this package."""


class StructuralError(GerbecohError):
    """Malformed data: wrong dimensions, bad references, broken preconditions.

    Distinct from a verification returning False: a verifier answers False
    about well-formed data, and raises StructuralError about ill-formed data.
    """


class CapacityError(GerbecohError):
    """An enumeration would exceed the configured budget."""

    def __init__(self, needed: int, budget: int, what: str = "enumeration"):
        super().__init__(f"{what} needs {needed} candidates, budget is {budget}")
        self.needed = needed
        self.budget = budget
