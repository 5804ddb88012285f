"""Scenario configuration for fleet simulations."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ConfigError
from ..geo import Route, Stop, network_from_dict, network_to_dict
from ..vision import MixtureConfig

REPORT_INTERVAL_S = 60


@dataclass(frozen=True)
class LightingPreset:
    """Rendering regime: cabin background and occupant luminance plus a
    multiplier applied to the configured noise sigma."""

    name: str
    background: int
    occupant: int
    noise_scale: float


# Night cabins are lit by interior lamps against dark windows: higher
# contrast and steadier exposure than daylight.
DAY = LightingPreset("day", background=80, occupant=170, noise_scale=1.0)
NIGHT = LightingPreset("night", background=30, occupant=190, noise_scale=0.5)

LIGHTING_PRESETS = {p.name: p for p in (DAY, NIGHT)}


@dataclass(frozen=True)
class BusPlan:
    bus_id: str
    route_id: str
    seat_map_id: str
    depart_time: int
    speed_mps: float


@dataclass(frozen=True)
class DemandConfig:
    """Boarding rate (passengers/minute accumulating at a stop) and the
    per-visit probability that an onboard passenger alights."""

    boarding_per_min: float = 2.0
    alight_prob: float = 0.3
    boarding_overrides: dict = field(default_factory=dict)
    alight_overrides: dict = field(default_factory=dict)

    def boarding_rate(self, stop_id: str) -> float:
        return float(self.boarding_overrides.get(stop_id, self.boarding_per_min))

    def alighting_probability(self, stop_id: str) -> float:
        return float(self.alight_overrides.get(stop_id, self.alight_prob))

    def validate(self) -> None:
        rates = [self.boarding_per_min, *self.boarding_overrides.values()]
        if any(r < 0 for r in rates):
            raise ConfigError("boarding rates must be >= 0")
        probs = [self.alight_prob, *self.alight_overrides.values()]
        if any(not 0.0 <= p <= 1.0 for p in probs):
            raise ConfigError("alighting probabilities must be in [0, 1]")


@dataclass(frozen=True)
class ScenarioConfig:
    seed: int
    duration: int
    tick: int
    buses: tuple[BusPlan, ...]
    stops: tuple[Stop, ...]
    routes: tuple[Route, ...]
    demand: DemandConfig = DemandConfig()
    lighting: str = "day"
    noise_sigma: float = 12.0
    frame_width: int = 320
    frame_height: int = 240
    mixture: MixtureConfig = MixtureConfig()
    min_area: int = 30

    def validate(self) -> None:
        if self.tick < 1 or REPORT_INTERVAL_S % self.tick != 0:
            raise ConfigError(f"tick must divide {REPORT_INTERVAL_S}, got {self.tick}")
        if self.duration < 0:
            raise ConfigError("duration must be >= 0")
        if self.lighting not in LIGHTING_PRESETS:
            raise ConfigError(f"unknown lighting {self.lighting!r}")
        if self.noise_sigma < 0:
            raise ConfigError("noise_sigma must be >= 0")
        self.demand.validate()
        self.mixture.validate()
        route_ids = {r.route_id for r in self.routes}
        for plan in self.buses:
            if plan.route_id not in route_ids:
                raise ConfigError(f"bus {plan.bus_id!r} references unknown route {plan.route_id!r}")
            if plan.depart_time < 0:
                raise ConfigError(f"bus {plan.bus_id!r} has negative depart_time")
            if plan.speed_mps < 0:
                raise ConfigError(f"bus {plan.bus_id!r} has negative speed")

    @property
    def lighting_preset(self) -> LightingPreset:
        return LIGHTING_PRESETS[self.lighting]

    def to_dict(self) -> dict:
        data = {
            "seed": self.seed,
            "duration": self.duration,
            "tick": self.tick,
            "lighting": self.lighting,
            "noise_sigma": self.noise_sigma,
            "frame_width": self.frame_width,
            "frame_height": self.frame_height,
            "min_area": self.min_area,
            "demand": {
                "boarding_per_min": self.demand.boarding_per_min,
                "alight_prob": self.demand.alight_prob,
                "boarding_overrides": dict(self.demand.boarding_overrides),
                "alight_overrides": dict(self.demand.alight_overrides),
            },
            "buses": [
                {
                    "bus_id": b.bus_id,
                    "route_id": b.route_id,
                    "seat_map_id": b.seat_map_id,
                    "depart_time": b.depart_time,
                    "speed_mps": b.speed_mps,
                }
                for b in self.buses
            ],
            "network": network_to_dict(self.stops, self.routes),
        }
        mixture = self.mixture
        if mixture != MixtureConfig():
            data["mixture"] = {
                "num_gaussians": mixture.num_gaussians,
                "learning_rate": mixture.learning_rate,
                "background_threshold": mixture.background_threshold,
                "match_sigma": mixture.match_sigma,
                "initial_variance": mixture.initial_variance,
                "variance_floor": mixture.variance_floor,
                "new_gaussian_weight": mixture.new_gaussian_weight,
            }
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        stops, routes = network_from_dict(data.get("network", {}))
        demand_raw = data.get("demand", {})
        demand = DemandConfig(
            boarding_per_min=float(demand_raw.get("boarding_per_min", 2.0)),
            alight_prob=float(demand_raw.get("alight_prob", 0.3)),
            boarding_overrides=dict(demand_raw.get("boarding_overrides", {})),
            alight_overrides=dict(demand_raw.get("alight_overrides", {})),
        )
        mixture = MixtureConfig(**data["mixture"]) if "mixture" in data else MixtureConfig()
        config = cls(
            seed=int(data["seed"]),
            duration=int(data["duration"]),
            tick=int(data.get("tick", 10)),
            buses=tuple(
                BusPlan(
                    bus_id=str(b["bus_id"]),
                    route_id=str(b["route_id"]),
                    seat_map_id=str(b["seat_map_id"]),
                    depart_time=int(b.get("depart_time", 0)),
                    speed_mps=float(b["speed_mps"]),
                )
                for b in data.get("buses", [])
            ),
            stops=tuple(stops),
            routes=tuple(routes),
            demand=demand,
            lighting=str(data.get("lighting", "day")),
            noise_sigma=float(data.get("noise_sigma", 12.0)),
            frame_width=int(data.get("frame_width", 320)),
            frame_height=int(data.get("frame_height", 240)),
            mixture=mixture,
            min_area=int(data.get("min_area", 30)),
        )
        config.validate()
        return config


def load_scenario(path: str | Path) -> ScenarioConfig:
    return ScenarioConfig.from_dict(json.loads(Path(path).read_text()))


def save_scenario(path: str | Path, config: ScenarioConfig) -> None:
    Path(path).write_text(json.dumps(config.to_dict(), indent=2) + "\n")
