"""Value types held by the datacenter stores."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..geo import GeoPoint


@dataclass(frozen=True)
class AvailabilitySnapshot:
    """Versioned per-bus seat counts.

    ``empty`` is what the camera saw; ``available`` subtracts seats already
    promised to bookings, clamped at zero because boarded passengers may
    still hold their booking when the next report arrives.
    """

    bus_id: str
    version: int
    timestamp: int
    total: int
    occupied: int
    empty: int
    booked: int
    available: int

    def __post_init__(self):
        if self.occupied + self.empty != self.total:
            raise ValueError(
                f"occupied {self.occupied} + empty {self.empty} != total {self.total}"
            )
        if self.available != max(0, self.empty - self.booked):
            raise ValueError("available must equal max(0, empty - booked)")
        if self.version < 1:
            raise ValueError("versions start at 1")

    def to_dict(self) -> dict:
        return {
            "bus_id": self.bus_id,
            "version": self.version,
            "timestamp": self.timestamp,
            "total": self.total,
            "occupied": self.occupied,
            "empty": self.empty,
            "booked": self.booked,
            "available": self.available,
        }


class BookingStatus(Enum):
    ACTIVE = "active"
    CANCELLED = "cancelled"
    REJECTED = "rejected"


@dataclass(frozen=True)
class Booking:
    booking_id: str
    passenger_id: str
    bus_id: str
    status: BookingStatus
    created_at: int

    def to_dict(self) -> dict:
        return {
            "booking_id": self.booking_id,
            "passenger_id": self.passenger_id,
            "bus_id": self.bus_id,
            "status": self.status.value,
            "created_at": self.created_at,
        }


@dataclass(frozen=True)
class BookingRejection:
    """Outcome of a booking attempt against a full bus; carries the nearest
    alternative boarding point when the passenger's location is known."""

    bus_id: str
    passenger_id: str
    reason: str
    suggested_stop_id: str | None = None


@dataclass(frozen=True)
class BusReport:
    """What a bus posts every reporting interval."""

    bus_id: str
    timestamp: int
    position: GeoPoint
    occupied: int
    empty: int
    total: int

    def __post_init__(self):
        if self.occupied + self.empty != self.total:
            raise ValueError(
                f"occupied {self.occupied} + empty {self.empty} != total {self.total}"
            )

    def to_dict(self) -> dict:
        return {
            "bus_id": self.bus_id,
            "timestamp": self.timestamp,
            "position": {"lat": self.position.lat, "lon": self.position.lon},
            "occupancy": {"occupied": self.occupied, "empty": self.empty, "total": self.total},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BusReport":
        occ = data["occupancy"]
        return cls(
            bus_id=str(data["bus_id"]),
            timestamp=int(data["timestamp"]),
            position=GeoPoint(float(data["position"]["lat"]), float(data["position"]["lon"])),
            occupied=int(occ["occupied"]),
            empty=int(occ["empty"]),
            total=int(occ["total"]),
        )


@dataclass(frozen=True)
class PassengerSession:
    """Registered passenger; a location may be stored only after the
    privacy policy was accepted."""

    passenger_id: str
    privacy_accepted: bool
    last_location: GeoPoint | None = None

    def __post_init__(self):
        if self.last_location is not None and not self.privacy_accepted:
            raise ValueError("location stored without privacy acceptance")

    def to_dict(self) -> dict:
        loc = None
        if self.last_location is not None:
            loc = {"lat": self.last_location.lat, "lon": self.last_location.lon}
        return {
            "passenger_id": self.passenger_id,
            "privacy_accepted": self.privacy_accepted,
            "last_location": loc,
        }


@dataclass(frozen=True)
class BusInfo:
    """Fleet registration record: which route a bus serves and its nominal
    cruising speed (used for arrival estimates)."""

    bus_id: str
    route_id: str
    seat_total: int
    speed_mps: float


@dataclass(frozen=True)
class BusSummary:
    """One row of a source->destination bus query."""

    bus_id: str
    position: GeoPoint
    eta_s: float
    available: int

    def to_dict(self) -> dict:
        return {
            "bus_id": self.bus_id,
            "position": {"lat": self.position.lat, "lon": self.position.lon},
            "eta_s": self.eta_s,
            "available": self.available,
        }
