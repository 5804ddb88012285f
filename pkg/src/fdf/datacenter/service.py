"""The datacenter: route, passenger and fleet stores plus the booking
engine, all inside one process.

State changes flow through events. A live operation validates under the
right lock, applies the event to memory, then appends it to the matching
store log (JSON lines, one file per store role). Startup replays the logs
in global sequence order, which restores byte-identical state; booking
events are applied as facts rather than re-decided, so replay cannot
diverge from the decisions made live.

Concurrency: registrations take the registry lock; everything touching one
bus's snapshot or bookings serializes on that bus's lock, so per-bus
version numbers are strictly increasing and booking decisions are
linearizable. Reads hand out immutable snapshots without locking.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, replace
from pathlib import Path

from ..errors import (
    AlreadyCancelledError,
    DuplicateBookingError,
    DuplicateBusError,
    DuplicateRouteError,
    NoAlternativeStopError,
    NoDataError,
    PrivacyRefusedError,
    RouteValidationError,
    StaleReportError,
    UnknownBookingError,
    UnknownBusError,
    UnknownPassengerError,
    UnknownRouteError,
    UnknownStopError,
)
from ..geo import (
    BusState,
    GeoPoint,
    Route,
    Stop,
    Violation,
    eta_to_stop,
    haversine_distance,
    nearest_stop,
    project_to_route,
    validate_route,
)
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

# Store-role log files. Every event names its store; replay merges all
# files by the global sequence number.
_STORE_FILES = {
    "routes": "route_server.jsonl",
    "passengers": "passenger_server.jsonl",
    "buses": "bus_station_server.jsonl",
    "bookings": "booking_ledger.jsonl",
}

_EVENT_STORE = {
    "stop_registered": "routes",
    "route_registered": "routes",
    "passenger_registered": "passengers",
    "privacy_updated": "passengers",
    "location_updated": "passengers",
    "bus_registered": "buses",
    "report_ingested": "buses",
    "booking_created": "bookings",
    "booking_cancelled": "bookings",
    "booking_rejected": "bookings",
}


@dataclass
class _BusLive:
    snapshot: AvailabilitySnapshot
    position: GeoPoint
    offset_m: float


class Datacenter:
    """In-process server constellation with an optional on-disk event log.

    ``data_dir=None`` keeps everything in memory (used by simulations and
    tests); with a directory, every event is appended to its store log and
    ``Datacenter(data_dir)`` replays existing logs on construction.
    """

    def __init__(self, data_dir: str | Path | None = None):
        self._registry_lock = threading.RLock()
        self._seq_lock = threading.Lock()
        self._log_lock = threading.Lock()
        self._seq = 0

        self.stops: dict[str, Stop] = {}
        self.routes: dict[str, Route] = {}
        self.sessions: dict[str, PassengerSession] = {}
        self.buses: dict[str, BusInfo] = {}
        self.bookings: dict[str, Booking] = {}
        self._live: dict[str, _BusLive] = {}
        self._active_pairs: dict[tuple[str, str], str] = {}
        self._booked_count: dict[str, int] = {}
        self._bus_locks: dict[str, threading.Lock] = {}
        self._sim_now = 0

        # Every event ever applied or audited, and every snapshot version
        # produced, in order. Cheap at fleet scale and what verification
        # tooling inspects.
        self.events: list[dict] = []
        self.snapshot_history: list[AvailabilitySnapshot] = []

        self._data_dir = Path(data_dir) if data_dir is not None else None
        self._files = {}
        if self._data_dir is not None:
            self._data_dir.mkdir(parents=True, exist_ok=True)
            self._replay()
            for store, name in _STORE_FILES.items():
                self._files[store] = open(self._data_dir / name, "a", encoding="utf-8")

    # -- event plumbing ----------------------------------------------------

    def _next_seq(self) -> int:
        with self._seq_lock:
            self._seq += 1
            return self._seq

    def _record(self, event: dict) -> None:
        """Apply an event to memory and append it to its store log."""
        self._apply(event)
        self.events.append(event)
        fh = self._files.get(_EVENT_STORE[event["event"]])
        if fh is not None:
            with self._log_lock:
                fh.write(json.dumps(event, separators=(",", ":")) + "\n")
                fh.flush()

    def _replay(self) -> None:
        events = []
        for name in _STORE_FILES.values():
            path = self._data_dir / name
            if not path.exists():
                continue
            with open(path, encoding="utf-8") as f:
                for line in f:
                    line = line.strip()
                    if line:
                        events.append(json.loads(line))
        events.sort(key=lambda e: e["seq"])
        for event in events:
            self._apply(event)
            self.events.append(event)
        if events:
            self._seq = events[-1]["seq"]

    def _apply(self, event: dict) -> None:
        kind = event["event"]
        if kind == "stop_registered":
            stop = Stop(
                stop_id=event["stop_id"],
                name=event["name"],
                location=GeoPoint(event["lat"], event["lon"]),
            )
            self.stops[stop.stop_id] = stop
        elif kind == "route_registered":
            route = Route.from_dict(event["route"])
            self.routes[route.route_id] = route
        elif kind == "passenger_registered":
            self.sessions[event["passenger_id"]] = PassengerSession(
                passenger_id=event["passenger_id"],
                privacy_accepted=event["privacy_accepted"],
            )
        elif kind == "privacy_updated":
            old = self.sessions[event["passenger_id"]]
            accepted = event["privacy_accepted"]
            self.sessions[event["passenger_id"]] = replace(
                old,
                privacy_accepted=accepted,
                last_location=old.last_location if accepted else None,
            )
        elif kind == "location_updated":
            old = self.sessions[event["passenger_id"]]
            self.sessions[event["passenger_id"]] = replace(
                old, last_location=GeoPoint(event["lat"], event["lon"])
            )
        elif kind == "bus_registered":
            info = BusInfo(
                bus_id=event["bus_id"],
                route_id=event["route_id"],
                seat_total=event["seat_total"],
                speed_mps=event["speed_mps"],
            )
            self.buses[info.bus_id] = info
            self._bus_locks[info.bus_id] = threading.Lock()
            self._booked_count[info.bus_id] = 0
        elif kind == "report_ingested":
            report = BusReport.from_dict(event["report"])
            route = self.routes[self.buses[report.bus_id].route_id]
            prev = self._live.get(report.bus_id)
            booked = self._booked_count[report.bus_id]
            snapshot = AvailabilitySnapshot(
                bus_id=report.bus_id,
                version=(prev.snapshot.version if prev else 0) + 1,
                timestamp=report.timestamp,
                total=report.total,
                occupied=report.occupied,
                empty=report.empty,
                booked=booked,
                available=max(0, report.empty - booked),
            )
            self._live[report.bus_id] = _BusLive(
                snapshot=snapshot,
                position=report.position,
                offset_m=project_to_route(route, report.position),
            )
            self.snapshot_history.append(snapshot)
            if report.timestamp > self._sim_now:
                self._sim_now = report.timestamp
        elif kind == "booking_created":
            booking = Booking(
                booking_id=event["booking_id"],
                passenger_id=event["passenger_id"],
                bus_id=event["bus_id"],
                status=BookingStatus.ACTIVE,
                created_at=event["created_at"],
            )
            self.bookings[booking.booking_id] = booking
            self._active_pairs[(booking.passenger_id, booking.bus_id)] = booking.booking_id
            self._booked_count[booking.bus_id] += 1
            self._rebuild_snapshot(booking.bus_id)
        elif kind == "booking_cancelled":
            booking = self.bookings[event["booking_id"]]
            self.bookings[booking.booking_id] = replace(booking, status=BookingStatus.CANCELLED)
            self._active_pairs.pop((booking.passenger_id, booking.bus_id), None)
            self._booked_count[booking.bus_id] -= 1
            self._rebuild_snapshot(booking.bus_id)
        elif kind == "booking_rejected":
            pass  # audit record only; nothing changed
        else:
            raise ValueError(f"unknown event kind {kind!r}")

    def _rebuild_snapshot(self, bus_id: str) -> None:
        live = self._live[bus_id]
        old = live.snapshot
        booked = self._booked_count[bus_id]
        snapshot = AvailabilitySnapshot(
            bus_id=bus_id,
            version=old.version + 1,
            timestamp=old.timestamp,
            total=old.total,
            occupied=old.occupied,
            empty=old.empty,
            booked=booked,
            available=max(0, old.empty - booked),
        )
        live.snapshot = snapshot
        self.snapshot_history.append(snapshot)

    def close(self) -> None:
        for fh in self._files.values():
            fh.close()
        self._files = {}

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    # -- registration ------------------------------------------------------

    def register_stop(self, stop: Stop) -> None:
        with self._registry_lock:
            existing = self.stops.get(stop.stop_id)
            if existing == stop:
                return
            if existing is not None:
                raise ValueError(f"stop {stop.stop_id!r} already registered with different data")
            self._record(
                {
                    "seq": self._next_seq(),
                    "event": "stop_registered",
                    "stop_id": stop.stop_id,
                    "name": stop.name,
                    "lat": stop.location.lat,
                    "lon": stop.location.lon,
                }
            )

    def register_route(self, route: Route) -> str:
        with self._registry_lock:
            violations = validate_route(route)
            for i, s in enumerate(route.stops):
                if s.stop_id not in self.stops:
                    violations.append(
                        Violation(f"stops[{i}].stop_id", f"unknown stop {s.stop_id!r}")
                    )
            if violations:
                raise RouteValidationError(violations)
            if route.route_id in self.routes:
                if self.routes[route.route_id] == route:
                    return route.route_id
                raise DuplicateRouteError(f"route {route.route_id!r} already registered")
            self._record(
                {
                    "seq": self._next_seq(),
                    "event": "route_registered",
                    "route": route.to_dict(),
                }
            )
            return route.route_id

    def register_bus(self, bus_id: str, route_id: str, seat_total: int, speed_mps: float) -> None:
        with self._registry_lock:
            if route_id not in self.routes:
                raise UnknownRouteError(f"route {route_id!r} not registered")
            info = BusInfo(bus_id=bus_id, route_id=route_id, seat_total=seat_total, speed_mps=speed_mps)
            existing = self.buses.get(bus_id)
            if existing == info:
                return
            if existing is not None:
                raise DuplicateBusError(f"bus {bus_id!r} already registered with different data")
            self._record(
                {
                    "seq": self._next_seq(),
                    "event": "bus_registered",
                    "bus_id": bus_id,
                    "route_id": route_id,
                    "seat_total": seat_total,
                    "speed_mps": speed_mps,
                }
            )

    def register_passenger(self, passenger_id: str, privacy_accepted: bool) -> PassengerSession:
        if not passenger_id:
            raise ValueError("passenger_id must be non-empty")
        with self._registry_lock:
            existing = self.sessions.get(passenger_id)
            if existing is None:
                self._record(
                    {
                        "seq": self._next_seq(),
                        "event": "passenger_registered",
                        "passenger_id": passenger_id,
                        "privacy_accepted": bool(privacy_accepted),
                    }
                )
            elif existing.privacy_accepted != privacy_accepted:
                # Same session; the privacy choice may change later. A
                # withdrawal also forgets the stored location.
                self._record(
                    {
                        "seq": self._next_seq(),
                        "event": "privacy_updated",
                        "passenger_id": passenger_id,
                        "privacy_accepted": bool(privacy_accepted),
                    }
                )
            return self.sessions[passenger_id]

    def update_location(self, passenger_id: str, location: GeoPoint) -> PassengerSession:
        with self._registry_lock:
            session = self.sessions.get(passenger_id)
            if session is None:
                raise UnknownPassengerError(f"passenger {passenger_id!r} not registered")
            if not session.privacy_accepted:
                raise PrivacyRefusedError(
                    f"passenger {passenger_id!r} declined the privacy policy"
                )
            self._record(
                {
                    "seq": self._next_seq(),
                    "event": "location_updated",
                    "passenger_id": passenger_id,
                    "lat": location.lat,
                    "lon": location.lon,
                }
            )
            return self.sessions[passenger_id]

    # -- reporting and booking ----------------------------------------------

    def _bus_lock(self, bus_id: str) -> threading.Lock:
        lock = self._bus_locks.get(bus_id)
        if lock is None:
            raise UnknownBusError(f"bus {bus_id!r} not registered")
        return lock

    def ingest_report(self, report: BusReport) -> int:
        """Fold one bus report into the availability snapshot; returns the
        new snapshot version."""
        with self._bus_lock(report.bus_id):
            prev = self._live.get(report.bus_id)
            if prev is not None and report.timestamp <= prev.snapshot.timestamp:
                raise StaleReportError(
                    f"report at t={report.timestamp} not newer than t={prev.snapshot.timestamp}"
                )
            self._record(
                {
                    "seq": self._next_seq(),
                    "event": "report_ingested",
                    "report": report.to_dict(),
                }
            )
            return self._live[report.bus_id].snapshot.version

    def get_availability(self, bus_id: str) -> AvailabilitySnapshot:
        if bus_id not in self.buses:
            raise UnknownBusError(f"bus {bus_id!r} not registered")
        live = self._live.get(bus_id)
        if live is None:
            raise NoDataError(f"bus {bus_id!r} has not reported yet")
        return live.snapshot

    def get_position(self, bus_id: str) -> GeoPoint:
        if bus_id not in self.buses:
            raise UnknownBusError(f"bus {bus_id!r} not registered")
        live = self._live.get(bus_id)
        if live is None:
            raise NoDataError(f"bus {bus_id!r} has not reported yet")
        return live.position

    def book_seat(self, passenger_id: str, bus_id: str) -> Booking | BookingRejection:
        """Reserve one seat, or explain why not.

        Acceptance and the snapshot decrement happen atomically under the
        bus lock; a full bus yields a rejection carrying the nearest
        alternative stop for the passenger's stored location.
        """
        session = self.sessions.get(passenger_id)
        if session is None:
            raise UnknownPassengerError(f"passenger {passenger_id!r} not registered")
        with self._bus_lock(bus_id):
            live = self._live.get(bus_id)
            if live is None:
                raise NoDataError(f"bus {bus_id!r} has not reported yet")
            if (passenger_id, bus_id) in self._active_pairs:
                raise DuplicateBookingError(
                    f"passenger {passenger_id!r} already holds a booking on bus {bus_id!r}"
                )
            if live.snapshot.available > 0:
                seq = self._next_seq()
                booking_id = f"bk-{seq:06d}"
                self._record(
                    {
                        "seq": seq,
                        "event": "booking_created",
                        "booking_id": booking_id,
                        "passenger_id": passenger_id,
                        "bus_id": bus_id,
                        "created_at": self._sim_now,
                    }
                )
                return self.bookings[booking_id]
            self._record(
                {
                    "seq": self._next_seq(),
                    "event": "booking_rejected",
                    "passenger_id": passenger_id,
                    "bus_id": bus_id,
                    "reason": "full",
                }
            )
        suggested = self._suggest_for_session(session)
        return BookingRejection(
            bus_id=bus_id,
            passenger_id=passenger_id,
            reason="full",
            suggested_stop_id=suggested.stop_id if suggested else None,
        )

    def cancel_booking(self, booking_id: str) -> Booking:
        booking = self.bookings.get(booking_id)
        if booking is None:
            raise UnknownBookingError(f"booking {booking_id!r} not found")
        with self._bus_lock(booking.bus_id):
            booking = self.bookings[booking_id]
            if booking.status is not BookingStatus.ACTIVE:
                raise AlreadyCancelledError(f"booking {booking_id!r} is {booking.status.value}")
            self._record(
                {
                    "seq": self._next_seq(),
                    "event": "booking_cancelled",
                    "booking_id": booking_id,
                }
            )
            return self.bookings[booking_id]

    # -- queries -------------------------------------------------------------

    def nearest_stop_to(self, location: GeoPoint) -> tuple[Stop, float]:
        return nearest_stop(location, self.stops.values())

    def query_buses(self, source_stop_id: str, dest_stop_id: str) -> list[BusSummary]:
        """Buses that will pass the source stop before the destination,
        ordered by arrival at the source (ties by bus id)."""
        for stop_id in (source_stop_id, dest_stop_id):
            if stop_id not in self.stops:
                raise UnknownStopError(f"stop {stop_id!r} not registered")
        summaries = []
        for bus_id in sorted(self.buses):
            info = self.buses[bus_id]
            route = self.routes[info.route_id]
            if not (route.has_stop(source_stop_id) and route.has_stop(dest_stop_id)):
                continue
            if route.stop_offset(source_stop_id) >= route.stop_offset(dest_stop_id):
                continue
            live = self._live.get(bus_id)
            if live is None:
                continue
            state = BusState(
                bus_id=bus_id,
                route_id=info.route_id,
                offset_m=live.offset_m,
                speed_mps=info.speed_mps,
                seat_total=live.snapshot.total,
                onboard=live.snapshot.occupied,
            )
            eta = eta_to_stop(state, route, source_stop_id)
            if not eta.ok:
                continue  # already past the stop, or stalled with no estimate
            summaries.append(
                BusSummary(
                    bus_id=bus_id,
                    position=live.position,
                    eta_s=eta.seconds,
                    available=live.snapshot.available,
                )
            )
        summaries.sort(key=lambda s: (s.eta_s, s.bus_id))
        return summaries

    def suggest_alternative(self, current_stop_id: str, dest_stop_id: str) -> Stop:
        """Nearest other stop from which some route still reaches the
        destination; deterministic tie-break by stop id."""
        for stop_id in (current_stop_id, dest_stop_id):
            if stop_id not in self.stops:
                raise UnknownStopError(f"stop {stop_id!r} not registered")
        current = self.stops[current_stop_id]
        best: tuple[float, str, Stop] | None = None
        for stop in self.stops.values():
            if stop.stop_id == current_stop_id:
                continue
            if not self._connects(stop.stop_id, dest_stop_id):
                continue
            cand = (haversine_distance(current.location, stop.location), stop.stop_id, stop)
            if best is None or cand[:2] < best[:2]:
                best = cand
        if best is None:
            raise NoAlternativeStopError(
                f"no stop other than {current_stop_id!r} reaches {dest_stop_id!r}"
            )
        return best[2]

    def _connects(self, from_stop_id: str, to_stop_id: str) -> bool:
        # A stop connects when some route reaches the destination from it;
        # the destination stop itself trivially qualifies.
        for route in self.routes.values():
            if route.has_stop(from_stop_id) and route.has_stop(to_stop_id):
                if route.stop_offset(from_stop_id) <= route.stop_offset(to_stop_id):
                    return True
        return False

    def _suggest_for_session(self, session: PassengerSession) -> Stop | None:
        """Nearest stop to the passenger other than the one they are
        presumably standing at."""
        if session.last_location is None or not self.stops:
            return None
        current, _ = nearest_stop(session.last_location, self.stops.values())
        others = [s for s in self.stops.values() if s.stop_id != current.stop_id]
        if not others:
            return None
        stop, _ = nearest_stop(session.last_location, others)
        return stop

    # -- bulk helpers ---------------------------------------------------------

    def load_network(self, stops, routes) -> None:
        for stop in stops:
            self.register_stop(stop)
        for route in routes:
            self.register_route(route)

    def state_digest(self) -> dict:
        """Deterministic dump of all store contents, used to compare a
        restarted instance against the original."""
        return {
            "stops": {s.stop_id: (s.name, s.location.lat, s.location.lon) for s in self.stops.values()},
            "routes": {r.route_id: r.to_dict() for r in self.routes.values()},
            "sessions": {p: s.to_dict() for p, s in self.sessions.items()},
            "buses": {b: vars(i).copy() for b, i in self.buses.items()},
            "bookings": {b: bk.to_dict() for b, bk in self.bookings.items()},
            "snapshots": {b: live.snapshot.to_dict() for b, live in self._live.items()},
            "positions": {
                b: (live.position.lat, live.position.lon) for b, live in self._live.items()
            },
        }
