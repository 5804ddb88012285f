"""Discrete-time fleet simulation.

Buses advance along their routes each tick; passengers alight and board at
stop visits; every 60 sim-seconds each departed bus renders a cabin frame,
runs it through its persistent background model and posts the counts to
the datacenter. One seeded generator drives every random draw in a fixed
order, so a scenario is reproducible bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..datacenter import BusReport, Datacenter
from ..errors import ConfigError, TransportError
from ..geo import Route, position_along_route
from ..vision import (
    BackgroundModel,
    DetectionReport,
    ReportRow,
    SeatMap,
    assign_blobs_to_seats,
    count_availability,
    extract_blobs,
    frame_filename,
    init_background,
    update_background,
    write_pgm,
)
from .render import render_cabin_frame
from .scenario import REPORT_INTERVAL_S, ScenarioConfig

__all__ = [
    "FleetSimulator",
    "HttpGateway",
    "InProcessGateway",
    "ReportSample",
    "ScenarioResult",
    "SimTrace",
    "TraceEvent",
    "run_scenario",
]


@dataclass(frozen=True)
class TraceEvent:
    t: int
    event: str
    bus_id: str | None = None
    data: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"t": self.t, "event": self.event}
        if self.bus_id is not None:
            out["bus_id"] = self.bus_id
        out.update(self.data)
        return out


class SimTrace:
    """Ordered event record of one simulation run."""

    def __init__(self):
        self.events: list[TraceEvent] = []

    def add(self, t: int, event: str, bus_id: str | None = None, **data) -> None:
        self.events.append(TraceEvent(t=t, event=event, bus_id=bus_id, data=data))

    def save_jsonl(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            for e in self.events:
                f.write(json.dumps(e.to_dict(), separators=(",", ":")) + "\n")

    @staticmethod
    def load_jsonl(path: str | Path) -> list[dict]:
        out = []
        with open(path, encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if line:
                    out.append(json.loads(line))
        return out


@dataclass(frozen=True)
class ReportSample:
    """Ground truth vs. pipeline output for one posted report."""

    bus_id: str
    timestamp: int
    true_occupied: int
    detected_occupied: int
    version: int


@dataclass
class ScenarioResult:
    trace: SimTrace
    samples: list[ReportSample]
    detection_report: DetectionReport
    datacenter: Datacenter | None = None


class InProcessGateway:
    """Feeds the simulator's output straight into a Datacenter instance."""

    def __init__(self, datacenter: Datacenter):
        self.datacenter = datacenter

    def ensure_network(self, stops, routes) -> None:
        self.datacenter.load_network(stops, routes)

    def register_bus(self, bus_id, route_id, seat_total, speed_mps) -> None:
        self.datacenter.register_bus(bus_id, route_id, seat_total, speed_mps)

    def post_report(self, report: BusReport) -> int:
        return self.datacenter.ingest_report(report)


class HttpGateway:
    """Same interface against a remote datacenter over HTTP."""

    def __init__(self, base_url: str, timeout: float = 10.0):
        import httpx

        self.base_url = base_url.rstrip("/")
        self._client = httpx.Client(base_url=self.base_url, timeout=timeout)

    def _post(self, path: str, payload: dict, accept_conflict: bool = False):
        import httpx

        try:
            response = self._client.post(path, json=payload)
        except httpx.HTTPError as exc:
            raise TransportError(f"datacenter unreachable: {exc}") from exc
        if accept_conflict and response.status_code == 409:
            return response
        if response.status_code >= 400:
            raise TransportError(f"{path} failed: {response.status_code} {response.text}")
        return response

    def ensure_network(self, stops, routes) -> None:
        # Server may already hold the network; conflicts mean "present".
        for route in routes:
            self._post("/routes", route.to_dict(), accept_conflict=True)

    def register_bus(self, bus_id, route_id, seat_total, speed_mps) -> None:
        self._post(
            "/buses",
            {
                "bus_id": bus_id,
                "route_id": route_id,
                "seat_total": seat_total,
                "speed_mps": speed_mps,
            },
            accept_conflict=True,
        )

    def post_report(self, report: BusReport) -> int:
        return self._post("/reports", report.to_dict()).json()["version"]

    def close(self) -> None:
        self._client.close()


@dataclass
class _BusRuntime:
    plan: object
    route: Route
    seat_map: SeatMap
    offset_m: float = 0.0
    departed: bool = False
    finished: bool = False
    seats: np.ndarray | None = None  # bool per seat: ground-truth occupancy
    model: BackgroundModel | None = None

    @property
    def onboard(self) -> int:
        return int(self.seats.sum())


class FleetSimulator:
    def __init__(
        self,
        config: ScenarioConfig,
        seat_maps: dict[str, SeatMap],
        gateway,
        frame_dump_dir: str | Path | None = None,
    ):
        config.validate()
        self.config = config
        self.gateway = gateway
        self.rng = np.random.default_rng(config.seed)
        self.clock = 0
        self.trace = SimTrace()
        self.samples: list[ReportSample] = []
        self.frame_dump_dir = Path(frame_dump_dir) if frame_dump_dir else None
        if self.frame_dump_dir:
            self.frame_dump_dir.mkdir(parents=True, exist_ok=True)

        routes = {r.route_id: r for r in config.routes}
        self.buses: list[_BusRuntime] = []
        for plan in config.buses:
            seat_map = seat_maps.get(plan.seat_map_id)
            if seat_map is None:
                raise ConfigError(f"bus {plan.bus_id!r} references unknown seat map {plan.seat_map_id!r}")
            seat_map.check_frame_bounds(config.frame_width, config.frame_height)
            self.buses.append(
                _BusRuntime(
                    plan=plan,
                    route=routes[plan.route_id],
                    seat_map=seat_map,
                    seats=np.zeros(seat_map.total_seats, dtype=bool),
                )
            )
        self.stop_last_visit = {s.stop_id: 0 for s in config.stops}

        try:
            self.gateway.ensure_network(config.stops, config.routes)
            for bus in self.buses:
                self.gateway.register_bus(
                    bus.plan.bus_id,
                    bus.plan.route_id,
                    bus.seat_map.total_seats,
                    bus.plan.speed_mps,
                )
        except TransportError as exc:
            exc.trace = self.trace
            raise

    # -- one tick ------------------------------------------------------------

    def step(self) -> None:
        self.clock += self.config.tick
        for bus in self.buses:
            self._advance_bus(bus)
        if self.clock % REPORT_INTERVAL_S == 0:
            for bus in self.buses:
                if bus.departed:
                    self._emit_report(bus)

    def _advance_bus(self, bus: _BusRuntime) -> None:
        plan = bus.plan
        if not bus.departed:
            if self.clock >= plan.depart_time:
                bus.departed = True
                bus.offset_m = 0.0
                warmup = self._render(bus)
                bus.model = init_background(warmup, self.config.mixture)
                if self.frame_dump_dir:
                    write_pgm(
                        self.frame_dump_dir / frame_filename(plan.bus_id, self.clock), warmup
                    )
                self.trace.add(self.clock, "depart", plan.bus_id)
                self._visit_stops(bus, prev_offset=-1.0)
            return
        if bus.finished:
            return
        prev = bus.offset_m
        bus.offset_m = min(prev + plan.speed_mps * self.config.tick, bus.route.length_m)
        self._visit_stops(bus, prev_offset=prev)
        if bus.offset_m >= bus.route.length_m:
            alighted = bus.onboard
            bus.seats[:] = False
            bus.finished = True
            self.trace.add(self.clock, "terminal", plan.bus_id, alighted=alighted)

    def _visit_stops(self, bus: _BusRuntime, prev_offset: float) -> None:
        # Stops strictly between the previous and current offset, in travel
        # order; the terminal (offset == route length) is not a boarding
        # stop - the finish rule empties the bus there.
        for stop in bus.route.stops:
            if not (prev_offset < stop.offset_m <= bus.offset_m):
                continue
            if stop.offset_m >= bus.route.length_m:
                continue
            self._process_stop_visit(bus, stop.stop_id)

    def _process_stop_visit(self, bus: _BusRuntime, stop_id: str) -> None:
        demand = self.config.demand
        self.trace.add(self.clock, "arrive_stop", bus.plan.bus_id, stop_id=stop_id)

        alight_p = demand.alighting_probability(stop_id)
        occupied_idx = np.flatnonzero(bus.seats)
        if occupied_idx.size:
            leaving = self.rng.random(occupied_idx.size) < alight_p
            bus.seats[occupied_idx[leaving]] = False
            if int(leaving.sum()):
                self.trace.add(
                    self.clock, "alight", bus.plan.bus_id, stop_id=stop_id, count=int(leaving.sum())
                )

        waited_min = (self.clock - self.stop_last_visit[stop_id]) / 60.0
        lam = demand.boarding_rate(stop_id) * waited_min
        want = int(self.rng.poisson(lam)) if lam > 0 else 0
        empty_idx = np.flatnonzero(~bus.seats)
        boarding = min(want, empty_idx.size)
        if boarding:
            chosen = self.rng.choice(empty_idx, size=boarding, replace=False)
            bus.seats[chosen] = True
            self.trace.add(
                self.clock, "board", bus.plan.bus_id, stop_id=stop_id, count=boarding, waiting=want
            )
        self.stop_last_visit[stop_id] = self.clock

    # -- reporting -----------------------------------------------------------

    def _render(self, bus: _BusRuntime):
        return render_cabin_frame(
            bus.seats,
            bus.seat_map,
            self.config.lighting_preset,
            self.config.noise_sigma,
            self.rng,
            width=self.config.frame_width,
            height=self.config.frame_height,
            timestamp=self.clock,
        )

    def _emit_report(self, bus: _BusRuntime) -> None:
        frame = self._render(bus)
        mask = update_background(bus.model, frame)
        blobs = extract_blobs(mask, min_area=self.config.min_area)
        occupancy = assign_blobs_to_seats(blobs, bus.seat_map)
        occupied, empty, total = count_availability(occupancy)

        if self.frame_dump_dir:
            write_pgm(self.frame_dump_dir / frame_filename(bus.plan.bus_id, self.clock), frame)
        self.trace.add(self.clock, "frame_emitted", bus.plan.bus_id, true_occupied=bus.onboard)

        report = BusReport(
            bus_id=bus.plan.bus_id,
            timestamp=self.clock,
            position=position_along_route(bus.route, bus.offset_m),
            occupied=occupied,
            empty=empty,
            total=total,
        )
        try:
            version = self.gateway.post_report(report)
        except TransportError as exc:
            exc.trace = self.trace
            raise
        self.trace.add(self.clock, "report_posted", bus.plan.bus_id, version=version)
        self.samples.append(
            ReportSample(
                bus_id=bus.plan.bus_id,
                timestamp=self.clock,
                true_occupied=bus.onboard,
                detected_occupied=occupied,
                version=version,
            )
        )

    # -- whole run -----------------------------------------------------------

    def run(self) -> ScenarioResult:
        while self.clock + self.config.tick <= self.config.duration:
            self.step()
        report = DetectionReport(
            rows=tuple(
                ReportRow.from_counts(s.true_occupied, s.detected_occupied)
                for s in self.samples
                if s.true_occupied > 0
            )
        )
        datacenter = getattr(self.gateway, "datacenter", None)
        return ScenarioResult(
            trace=self.trace,
            samples=self.samples,
            detection_report=report,
            datacenter=datacenter,
        )


def run_scenario(
    config: ScenarioConfig,
    seat_maps: dict[str, SeatMap],
    gateway=None,
    frame_dump_dir: str | Path | None = None,
) -> ScenarioResult:
    """Run a scenario to completion, posting reports to the gateway
    (default: a fresh in-memory datacenter)."""
    if gateway is None:
        gateway = InProcessGateway(Datacenter())
    sim = FleetSimulator(config, seat_maps, gateway, frame_dump_dir=frame_dump_dir)
    return sim.run()
