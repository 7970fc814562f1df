"""Exception hierarchy for ntlimits."""


class NTLimitsError(Exception):
    """Base class for all package errors."""


class CapabilityError(NTLimitsError):
    """Requested degree or feature is beyond what the implementation supports."""


class DomainError(NTLimitsError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PVUndefinedError(NTLimitsError):
    """The principal-value Cauchy transform does not exist at the requested point."""


class NumericalFailure(NTLimitsError):
    """A computation violated a numerical sanity check (e.g. indefinite Gram matrix)."""


class InsufficientDataError(NTLimitsError):
    """Not enough usable samples to form an estimate."""


class PreconditionError(NTLimitsError, ValueError):
    """Inputs do not satisfy a documented precondition."""


class ConstructionError(NTLimitsError):
    """A measure or example could not be built with the given parameters."""


class DegreeInsufficientError(NTLimitsError):
    """A truncated expansion is not accurate enough for the requested tolerance."""


class SpecParseError(NTLimitsError, ValueError):
    """Malformed measure spec document."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)
