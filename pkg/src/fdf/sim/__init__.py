"""Fleet simulation: scenario configs, synthetic cabin rendering, world
stepping and detection-rate sweeps."""

from .render import ellipse_mask, render_cabin_frame
from .scenario import (
    DAY,
    LIGHTING_PRESETS,
    NIGHT,
    REPORT_INTERVAL_S,
    BusPlan,
    DemandConfig,
    LightingPreset,
    ScenarioConfig,
    load_scenario,
    save_scenario,
)
from .sweep import mean_rate, occupancy_sweep
from .world import (
    FleetSimulator,
    HttpGateway,
    InProcessGateway,
    ReportSample,
    ScenarioResult,
    SimTrace,
    TraceEvent,
    run_scenario,
)

__all__ = [
    "ellipse_mask",
    "render_cabin_frame",
    "DAY",
    "NIGHT",
    "LIGHTING_PRESETS",
    "REPORT_INTERVAL_S",
    "BusPlan",
    "DemandConfig",
    "LightingPreset",
    "ScenarioConfig",
    "load_scenario",
    "save_scenario",
    "mean_rate",
    "occupancy_sweep",
    "FleetSimulator",
    "HttpGateway",
    "InProcessGateway",
    "ReportSample",
    "ScenarioResult",
    "SimTrace",
    "TraceEvent",
    "run_scenario",
]
