"""Transit geometry: a small route network, nearest-stop search, bus
positions along a polyline and arrival estimates."""

from fdf.geo import (
    BusState,
    GeoPoint,
    Route,
    RouteStop,
    Stop,
    eta_to_stop,
    haversine_distance,
    nearest_stop,
    position_along_route,
    validate_route,
)


def main() -> None:
    stops = [
        Stop("depot", "Depot", GeoPoint(24.900, 67.000)),
        Stop("market", "Market", GeoPoint(24.918, 67.010)),
        Stop("campus", "Campus", GeoPoint(24.931, 67.024)),
        Stop("harbour", "Harbour", GeoPoint(24.945, 67.031)),
    ]
    polyline = [s.location for s in stops]
    bare = Route("line-9", polyline, [])
    route = Route(
        "line-9",
        polyline,
        [
            RouteStop("depot", 0.0),
            RouteStop("market", bare.length_m * 0.38),
            RouteStop("campus", bare.length_m * 0.71),
            RouteStop("harbour", bare.length_m),
        ],
    )
    problems = validate_route(route)
    print(f"route line-9: {route.length_m:.0f} m, validation: {problems or 'ok'}")

    rider = GeoPoint(24.916, 67.008)
    stop, dist = nearest_stop(rider, stops)
    print(f"rider at ({rider.lat}, {rider.lon}) -> nearest stop {stop.name}, {dist:.0f} m away")

    bus = BusState("bus7", "line-9", offset_m=550.0, speed_mps=9.0, seat_total=60, onboard=22)
    pos = position_along_route(route, bus.offset_m)
    print(f"\nbus7 at offset {bus.offset_m:.0f} m = ({pos.lat:.5f}, {pos.lon:.5f}), 22/60 aboard")
    for stop_id in ("depot", "market", "campus", "harbour"):
        eta = eta_to_stop(bus, route, stop_id)
        label = f"{eta.seconds:.0f} s" if eta.ok else eta.status.value.replace("_", " ")
        print(f"  eta to {stop_id:8s}: {label}")

    a, b = stops[0].location, stops[-1].location
    print(f"\ndepot -> harbour great-circle distance: {haversine_distance(a, b):.0f} m")


if __name__ == "__main__":
    main()
