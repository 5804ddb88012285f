"""HTTP/JSON surface over the datacenter engine.

All bodies are UTF-8 JSON, timestamps are integer sim-seconds, and error
responses use the envelope {error_code, message, details}. The one
exception is a booking attempt against a full bus, whose 409 body is
{reason: "full", suggested_stop: ...} so clients can offer the
redirection flow directly.
"""

from __future__ import annotations

from fastapi import FastAPI, Query, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .. import errors
from ..geo import GeoPoint, Route
from .records import BookingRejection, BusReport
from .service import Datacenter


class PassengerBody(BaseModel):
    passenger_id: str = Field(min_length=1)
    privacy_accepted: bool


class LocationBody(BaseModel):
    lat: float
    lon: float


class RouteStopBody(BaseModel):
    stop_id: str
    offset_m: float


class RouteBody(BaseModel):
    route_id: str
    polyline: list[tuple[float, float]]
    stops: list[RouteStopBody]


class BusBody(BaseModel):
    bus_id: str = Field(min_length=1)
    route_id: str
    seat_total: int = Field(ge=1)
    speed_mps: float = Field(ge=0)


class OccupancyBody(BaseModel):
    occupied: int = Field(ge=0)
    empty: int = Field(ge=0)
    total: int = Field(ge=0)


class ReportBody(BaseModel):
    bus_id: str
    timestamp: int
    position: LocationBody
    occupancy: OccupancyBody


class BookingBody(BaseModel):
    passenger_id: str
    bus_id: str


def _error(status: int, code: str, message: str, details=None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"error_code": code, "message": message, "details": details or {}},
    )


_ERROR_MAP: list[tuple[type[Exception], int, str]] = [
    (errors.RouteValidationError, 422, "invalid_route"),
    (errors.DuplicateRouteError, 409, "duplicate_route"),
    (errors.DuplicateBusError, 409, "duplicate_bus"),
    (errors.DuplicateBookingError, 409, "duplicate_booking"),
    (errors.AlreadyCancelledError, 409, "already_cancelled"),
    (errors.StaleReportError, 409, "stale_report"),
    (errors.PrivacyRefusedError, 403, "privacy_refused"),
    (errors.UnknownStopError, 404, "unknown_stop"),
    (errors.UnknownRouteError, 404, "unknown_route"),
    (errors.UnknownBusError, 404, "unknown_bus"),
    (errors.UnknownPassengerError, 404, "unknown_passenger"),
    (errors.UnknownBookingError, 404, "unknown_booking"),
    (errors.NoDataError, 404, "no_data"),
    (errors.NoStopsError, 404, "no_stops"),
    (errors.NoAlternativeStopError, 404, "no_alternative"),
]


def create_app(dc: Datacenter) -> FastAPI:
    app = FastAPI(title="seat-availability datacenter")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.datacenter = dc

    @app.exception_handler(errors.Error)
    def handle_domain_error(request, exc):
        for etype, status, code in _ERROR_MAP:
            if isinstance(exc, etype):
                details = {}
                if isinstance(exc, errors.RouteValidationError):
                    details = {
                        "violations": [
                            {"field": v.field, "message": v.message} for v in exc.violations
                        ]
                    }
                return _error(status, code, str(exc), details)
        return _error(500, "internal", str(exc))

    @app.exception_handler(ValueError)
    def handle_value_error(request, exc):
        return _error(422, "invalid_value", str(exc))

    @app.post("/passengers", status_code=201)
    def register_passenger(body: PassengerBody):
        session = dc.register_passenger(body.passenger_id, body.privacy_accepted)
        return session.to_dict()

    @app.put("/passengers/{passenger_id}/location", status_code=204)
    def update_location(passenger_id: str, body: LocationBody):
        dc.update_location(passenger_id, GeoPoint(body.lat, body.lon))
        return Response(status_code=204)

    @app.post("/routes", status_code=201)
    def register_route(body: RouteBody):
        route = Route.from_dict(body.model_dump())
        return {"route_id": dc.register_route(route)}

    @app.post("/buses", status_code=201)
    def register_bus(body: BusBody):
        dc.register_bus(body.bus_id, body.route_id, body.seat_total, body.speed_mps)
        return {"bus_id": body.bus_id}

    @app.post("/reports")
    def ingest_report(body: ReportBody):
        report = BusReport.from_dict(body.model_dump())
        return {"version": dc.ingest_report(report)}

    @app.get("/stops/nearest")
    def nearest(lat: float = Query(...), lon: float = Query(...)):
        stop, distance = dc.nearest_stop_to(GeoPoint(lat, lon))
        return {
            "stop_id": stop.stop_id,
            "name": stop.name,
            "lat": stop.location.lat,
            "lon": stop.location.lon,
            "distance_m": distance,
        }

    @app.get("/buses")
    def query_buses(source: str = Query(...), dest: str = Query(...)):
        return [s.to_dict() for s in dc.query_buses(source, dest)]

    @app.get("/buses/{bus_id}/availability")
    def availability(bus_id: str):
        return dc.get_availability(bus_id).to_dict()

    @app.post("/bookings", status_code=201)
    def book(body: BookingBody):
        outcome = dc.book_seat(body.passenger_id, body.bus_id)
        if isinstance(outcome, BookingRejection):
            suggested = None
            if outcome.suggested_stop_id is not None:
                stop = dc.stops[outcome.suggested_stop_id]
                suggested = {
                    "stop_id": stop.stop_id,
                    "name": stop.name,
                    "lat": stop.location.lat,
                    "lon": stop.location.lon,
                }
            return JSONResponse(
                status_code=409,
                content={"reason": outcome.reason, "suggested_stop": suggested},
            )
        return outcome.to_dict()

    @app.delete("/bookings/{booking_id}", status_code=204)
    def cancel(booking_id: str):
        dc.cancel_booking(booking_id)
        return Response(status_code=204)

    return app
