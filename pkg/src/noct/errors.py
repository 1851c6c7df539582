"""Exception types shared across the package.

The CLI maps these onto stable exit codes: InputError -> 2, i/o failures -> 3,
DomainError -> 4.
"""


class NoctError(Exception):
    """Base class for all library errors."""


class InputError(NoctError):
    """Malformed or inconsistent user input."""


class DomainError(NoctError):
    """An operation precondition fails, e.g. the class is not big."""


class InternalError(NoctError):
    """An invariant broke mid-computation; usually means invalid model data."""


class ResourceError(NoctError):
    """An enumeration would exceed the configured resource cap."""


class MissingConeData(InputError):
    """Blow-up cone data is required for this operation but was not supplied."""
