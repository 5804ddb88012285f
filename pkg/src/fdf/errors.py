"""Exception hierarchy shared across the package."""


class Error(Exception):
    """Base class for all package errors."""


class ConfigError(Error, ValueError):
    """Invalid configuration value."""


class ShapeError(Error, ValueError):
    """Input dimensions do not match what an operation expects."""


class UndefinedRateError(Error, ValueError):
    """Detection rate requested for zero ground-truth occupants."""


class NoStopsError(Error, ValueError):
    """Nearest-stop search over an empty stop list."""


class NotOnRouteError(Error, KeyError):
    """Stop id is not part of the given route."""


class RouteRangeError(Error, ValueError):
    """Offset outside [0, route length]."""


class UnknownStopError(Error, KeyError):
    """Stop id not registered."""


class UnknownRouteError(Error, KeyError):
    """Route id not registered."""


class UnknownBusError(Error, KeyError):
    """Bus id not registered."""


class UnknownPassengerError(Error, KeyError):
    """Passenger id has no session."""


class UnknownBookingError(Error, KeyError):
    """Booking id does not exist."""


class DuplicateRouteError(Error, ValueError):
    """Route id already registered."""


class DuplicateBusError(Error, ValueError):
    """Bus id already registered."""


class DuplicateBookingError(Error, ValueError):
    """Passenger already holds an active booking on this bus."""


class AlreadyCancelledError(Error, ValueError):
    """Booking was cancelled earlier."""


class StaleReportError(Error, ValueError):
    """Report timestamp is not newer than the last ingested one."""


class NoDataError(Error, LookupError):
    """Bus is registered but has not reported yet."""


class PrivacyRefusedError(Error, PermissionError):
    """Location update for a session that declined the privacy policy."""


class NoAlternativeStopError(Error, LookupError):
    """No other stop satisfies the alternative-stop query."""


class RouteValidationError(Error, ValueError):
    """Route failed validation; carries the individual violations."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class TransportError(Error, RuntimeError):
    """Datacenter unreachable; carries whatever trace was produced."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
