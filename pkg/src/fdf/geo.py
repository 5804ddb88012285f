"""Geo primitives: routes, stops, bus positions, nearest-stop search and
arrival-time estimates. Everything here is an immutable value and every
operation is a pure function."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .errors import NoStopsError, NotOnRouteError, RouteRangeError

EARTH_RADIUS_M = 6371008.8

# Float slack when comparing offsets against a polyline length assembled
# from the same segment sums.
_OFFSET_EPS = 1e-6


@dataclass(frozen=True, order=True)
class GeoPoint:
    lat: float
    lon: float

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude out of range: {self.lat}")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude out of range: {self.lon}")


@dataclass(frozen=True)
class Stop:
    stop_id: str
    name: str
    location: GeoPoint


@dataclass(frozen=True)
class RouteStop:
    stop_id: str
    offset_m: float


@dataclass(frozen=True)
class Violation:
    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.field}: {self.message}"


class Route:
    """Geo polyline with stops pinned at offsets along it (meters)."""

    def __init__(self, route_id: str, polyline: Sequence[GeoPoint], stops: Sequence[RouteStop]):
        self.route_id = route_id
        self.polyline = tuple(polyline)
        self.stops = tuple(stops)
        self._segment_lengths = tuple(
            haversine_distance(a, b) for a, b in zip(self.polyline, self.polyline[1:])
        )
        self.length_m = math.fsum(self._segment_lengths)
        self._stop_offsets = {s.stop_id: s.offset_m for s in self.stops}

    def stop_offset(self, stop_id: str) -> float:
        try:
            return self._stop_offsets[stop_id]
        except KeyError:
            raise NotOnRouteError(f"stop {stop_id!r} is not on route {self.route_id!r}") from None

    def has_stop(self, stop_id: str) -> bool:
        return stop_id in self._stop_offsets

    def to_dict(self) -> dict:
        return {
            "route_id": self.route_id,
            "polyline": [[p.lat, p.lon] for p in self.polyline],
            "stops": [{"stop_id": s.stop_id, "offset_m": s.offset_m} for s in self.stops],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Route":
        return cls(
            route_id=str(data["route_id"]),
            polyline=tuple(GeoPoint(float(lat), float(lon)) for lat, lon in data["polyline"]),
            stops=tuple(
                RouteStop(stop_id=str(s["stop_id"]), offset_m=float(s["offset_m"]))
                for s in data["stops"]
            ),
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Route)
            and self.route_id == other.route_id
            and self.polyline == other.polyline
            and self.stops == other.stops
        )

    def __repr__(self) -> str:
        return f"Route({self.route_id!r}, {len(self.polyline)} points, {len(self.stops)} stops)"


@dataclass(frozen=True)
class BusState:
    """A bus's live position along its route plus passenger load."""

    bus_id: str
    route_id: str
    offset_m: float
    speed_mps: float
    seat_total: int
    onboard: int

    def __post_init__(self):
        if self.offset_m < 0:
            raise ValueError(f"offset_m must be >= 0, got {self.offset_m}")
        if self.speed_mps < 0:
            raise ValueError(f"speed_mps must be >= 0, got {self.speed_mps}")
        if not 0 <= self.onboard <= self.seat_total:
            raise ValueError(f"onboard {self.onboard} outside [0, {self.seat_total}]")


def haversine_distance(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance in meters on a spherical Earth."""
    lat1, lon1, lat2, lon2 = map(math.radians, (a.lat, a.lon, b.lat, b.lon))
    dlat = lat2 - lat1
    dlon = lon2 - lon1
    h = math.sin(dlat / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


def nearest_stop(p: GeoPoint, stops: Iterable[Stop]) -> tuple[Stop, float]:
    """The stop minimizing great-circle distance; ties go to the
    lexicographically smallest stop_id."""
    best: tuple[float, str, Stop] | None = None
    for stop in stops:
        d = haversine_distance(p, stop.location)
        cand = (d, stop.stop_id, stop)
        if best is None or cand[:2] < best[:2]:
            best = cand
    if best is None:
        raise NoStopsError("no stops to search")
    return best[2], best[0]


def position_along_route(route: Route, offset_m: float) -> GeoPoint:
    """Point at ``offset_m`` meters along the polyline, interpolating
    linearly in lat/lon within a segment (adequate at city scale)."""
    if offset_m < -_OFFSET_EPS or offset_m > route.length_m + _OFFSET_EPS:
        raise RouteRangeError(
            f"offset {offset_m} outside [0, {route.length_m}] on route {route.route_id!r}"
        )
    remaining = min(max(offset_m, 0.0), route.length_m)
    for (start, end), seg_len in zip(
        zip(route.polyline, route.polyline[1:]), route._segment_lengths
    ):
        if remaining <= seg_len:
            t = remaining / seg_len
            return GeoPoint(
                lat=start.lat + t * (end.lat - start.lat),
                lon=start.lon + t * (end.lon - start.lon),
            )
        remaining -= seg_len
    return route.polyline[-1]


def project_to_route(route: Route, p: GeoPoint) -> float:
    """Offset (meters) of the polyline point closest to ``p``.

    Projection is done in raw lat/lon coordinates, the same space
    position_along_route interpolates in, so a point generated by that
    function projects back to its own offset. Ties pick the smaller offset.
    """
    best_d2 = math.inf
    best_offset = 0.0
    cum = 0.0
    for (a, b), seg_len in zip(zip(route.polyline, route.polyline[1:]), route._segment_lengths):
        dx = b.lon - a.lon
        dy = b.lat - a.lat
        denom = dx * dx + dy * dy
        t = 0.0 if denom == 0.0 else ((p.lon - a.lon) * dx + (p.lat - a.lat) * dy) / denom
        t = min(1.0, max(0.0, t))
        px = a.lon + t * dx
        py = a.lat + t * dy
        d2 = (p.lon - px) ** 2 + (p.lat - py) ** 2
        if d2 < best_d2 - 1e-18:
            best_d2 = d2
            best_offset = cum + t * seg_len
        cum += seg_len
    return min(best_offset, route.length_m)


class EtaStatus(Enum):
    OK = "ok"
    ALREADY_PASSED = "already_passed"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Eta:
    status: EtaStatus
    seconds: float | None = None

    @property
    def ok(self) -> bool:
        return self.status is EtaStatus.OK


def eta_to_stop(bus: BusState, route: Route, stop_id: str) -> Eta:
    """Seconds until the bus reaches the stop, assuming constant speed.

    A bus sitting exactly at the stop gets 0 s regardless of speed; a stop
    behind the bus is already passed; a stationary bus short of the stop
    has an unknown arrival time.
    """
    if bus.route_id != route.route_id:
        raise NotOnRouteError(f"bus {bus.bus_id!r} is on route {bus.route_id!r}, not {route.route_id!r}")
    stop_off = route.stop_offset(stop_id)
    diff = stop_off - bus.offset_m
    if diff == 0.0:
        return Eta(EtaStatus.OK, 0.0)
    if diff < 0.0:
        return Eta(EtaStatus.ALREADY_PASSED)
    if bus.speed_mps == 0.0:
        return Eta(EtaStatus.UNKNOWN)
    return Eta(EtaStatus.OK, diff / bus.speed_mps)


def validate_route(route: Route) -> list[Violation]:
    """Check every Route invariant; an empty list means the route is ok."""
    violations: list[Violation] = []
    if len(route.polyline) < 2:
        violations.append(Violation("polyline", "polyline too short (need >= 2 points)"))
    for i, ((a, b), seg_len) in enumerate(
        zip(zip(route.polyline, route.polyline[1:]), route._segment_lengths)
    ):
        if a == b or seg_len == 0.0:
            violations.append(Violation(f"polyline[{i}]", "consecutive points not distinct"))
    prev = -math.inf
    for i, s in enumerate(route.stops):
        if s.offset_m <= prev:
            violations.append(Violation(f"stops[{i}].offset_m", "offsets not increasing"))
        prev = s.offset_m
    if route.stops:
        if route.stops[0].offset_m < 0:
            violations.append(Violation("stops[0].offset_m", "first offset negative"))
        if route.stops[-1].offset_m > route.length_m + _OFFSET_EPS:
            violations.append(
                Violation(
                    f"stops[{len(route.stops) - 1}].offset_m",
                    f"offset {route.stops[-1].offset_m} beyond route length {route.length_m}",
                )
            )
    seen: set[str] = set()
    for i, s in enumerate(route.stops):
        if s.stop_id in seen:
            violations.append(Violation(f"stops[{i}].stop_id", f"duplicate stop {s.stop_id!r}"))
        seen.add(s.stop_id)
    return violations


def load_network(path: str | Path) -> tuple[list[Stop], list[Route]]:
    """Read a route-network file: {stops: [...], routes: [...]}."""
    data = json.loads(Path(path).read_text())
    return network_from_dict(data)


def network_from_dict(data: dict) -> tuple[list[Stop], list[Route]]:
    stops = [
        Stop(
            stop_id=str(s["stop_id"]),
            name=str(s.get("name", s["stop_id"])),
            location=GeoPoint(float(s["lat"]), float(s["lon"])),
        )
        for s in data.get("stops", [])
    ]
    routes = [Route.from_dict(r) for r in data.get("routes", [])]
    return stops, routes


def network_to_dict(stops: Iterable[Stop], routes: Iterable[Route]) -> dict:
    return {
        "stops": [
            {"stop_id": s.stop_id, "name": s.name, "lat": s.location.lat, "lon": s.location.lon}
            for s in stops
        ],
        "routes": [r.to_dict() for r in routes],
    }


def save_network(path: str | Path, stops: Iterable[Stop], routes: Iterable[Route]) -> None:
    Path(path).write_text(json.dumps(network_to_dict(stops, routes), indent=2) + "\n")
