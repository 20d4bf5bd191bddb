"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed user input: bad syntax, unknown names, wrong shapes."""


class DegreeError(InputError):
    """A datum violates homogeneity or degree compatibility."""


class NotInSubmodule(ValueError):
    """``lift`` was asked for an element outside the submodule."""


class NotTorsionless(ValueError):
    """A universal pushforward was requested for a module that is not torsionless."""


class TheoryViolation(RuntimeError):
    """Two routes that must agree by theory disagree; signals an engine bug."""
