"""Shared scenario builders for simulator and CLI tests."""

from fdf.geo import GeoPoint, Route, RouteStop, Stop
from fdf.sim import BusPlan, DemandConfig, ScenarioConfig
from fdf.vision import make_grid_seat_map

DEG_PER_M = 1.0 / 111_195.0


def line_network(stop_ids, spacing_m, route_id="r1"):
    # Stop offsets are fractions of the route's actual haversine length, so
    # the last stop lands exactly at the terminal.
    nominal = spacing_m * (len(stop_ids) - 1)
    polyline = [GeoPoint(24.90, 67.00), GeoPoint(24.90 + nominal * DEG_PER_M, 67.00)]
    bare = Route(route_id, polyline, [])
    n = len(stop_ids) - 1
    route = Route(
        route_id,
        polyline,
        [RouteStop(sid, bare.length_m * i / n) for i, sid in enumerate(stop_ids)],
    )
    stops = tuple(
        Stop(sid, sid.upper(), GeoPoint(24.90 + i * spacing_m * DEG_PER_M, 67.00))
        for i, sid in enumerate(stop_ids)
    )
    return stops, route


def small_scenario(**overrides):
    """One bus on a 4-stop, 3 km line; 12-seat cabin at 160x120."""
    stops, route = line_network(("a", "b", "c", "d"), 1000.0)
    defaults = dict(
        seed=7,
        duration=600,
        tick=10,
        buses=(BusPlan("bus1", "r1", "mini-12", depart_time=0, speed_mps=10.0),),
        stops=stops,
        routes=(route,),
        demand=DemandConfig(boarding_per_min=2.0, alight_prob=0.3),
        lighting="day",
        noise_sigma=0.0,
        frame_width=160,
        frame_height=120,
    )
    defaults.update(overrides)
    return ScenarioConfig(**defaults)


def small_seat_maps():
    return {
        "mini-12": make_grid_seat_map(
            "mini-12", total_seats=12, cols=4, frame_width=160, frame_height=120
        )
    }
