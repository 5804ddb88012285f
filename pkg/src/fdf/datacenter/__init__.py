"""Datacenter: persistent stores, report ingestion, booking engine and the
HTTP/JSON API."""

from .api import create_app
from .records import (
    AvailabilitySnapshot,
    Booking,
    BookingRejection,
    BookingStatus,
    BusInfo,
    BusReport,
    BusSummary,
    PassengerSession,
)
from .service import Datacenter

__all__ = [
    "create_app",
    "AvailabilitySnapshot",
    "Booking",
    "BookingRejection",
    "BookingStatus",
    "BusInfo",
    "BusReport",
    "BusSummary",
    "PassengerSession",
    "Datacenter",
]
