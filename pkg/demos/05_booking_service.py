"""Datacenter walkthrough: register a network and a bus, ingest camera
reports, book seats until the bus fills, get redirected to the nearest
alternative stop, and prove the event log survives a restart."""

import tempfile
from pathlib import Path

from fdf.datacenter import Booking, BookingRejection, BusReport, Datacenter
from fdf.geo import GeoPoint, Route, RouteStop, Stop


def build_network(dc: Datacenter) -> None:
    stops = [
        Stop("a", "Depot", GeoPoint(24.900, 67.00)),
        Stop("b", "Market", GeoPoint(24.918, 67.00)),
        Stop("c", "Harbour", GeoPoint(24.936, 67.00)),
    ]
    route = Route(
        "r1",
        [GeoPoint(24.900, 67.00), GeoPoint(24.940, 67.00)],
        [RouteStop("a", 0.0), RouteStop("b", 2000.0), RouteStop("c", 4000.0)],
    )
    dc.load_network(stops, [route])
    dc.register_bus("bus1", "r1", seat_total=60, speed_mps=10.0)


def report(t: int, occupied: int) -> BusReport:
    return BusReport(
        bus_id="bus1",
        timestamp=t,
        position=GeoPoint(24.9, 67.0),
        occupied=occupied,
        empty=60 - occupied,
        total=60,
    )


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        data_dir = Path(tmp) / "store"
        dc = Datacenter(data_dir)
        build_network(dc)

        dc.ingest_report(report(60, occupied=57))
        snap = dc.get_availability("bus1")
        print(f"t=60: camera sees {snap.occupied} occupied, {snap.empty} empty -> "
              f"available {snap.available} (version {snap.version})")

        for i in range(4):
            pid = f"rider{i}"
            dc.register_passenger(pid, privacy_accepted=True)
            dc.update_location(pid, GeoPoint(24.9002, 67.0))
            outcome = dc.book_seat(pid, "bus1")
            snap = dc.get_availability("bus1")
            if isinstance(outcome, Booking):
                print(f"{pid}: booked {outcome.booking_id} -> available {snap.available}")
            elif isinstance(outcome, BookingRejection):
                print(f"{pid}: bus full -> suggested alternative stop: "
                      f"{dc.stops[outcome.suggested_stop_id].name}")

        print("\nnext report arrives, two riders have boarded:")
        dc.ingest_report(report(120, occupied=59))
        snap = dc.get_availability("bus1")
        print(f"t=120: occupied {snap.occupied}, booked {snap.booked} -> "
              f"available {snap.available} (clamped at zero)")

        digest = dc.state_digest()
        dc.close()
        print("\nservice restarted from its event logs...")
        rebooted = Datacenter(data_dir)
        same = rebooted.state_digest() == digest
        print(f"state identical after replay: {same}")
        rebooted.close()


if __name__ == "__main__":
    main()
