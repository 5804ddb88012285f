"""Seat-availability framework.

A camera above the cabin counts empty and filled seats via background
subtraction; buses post the counts to a datacenter every minute; the
datacenter serves availability queries and a booking flow that redirects
passengers to the nearest alternative stop when a bus is full. This
package contains the vision pipeline, the transit/geo primitives, the
datacenter service with its HTTP API, and a deterministic fleet simulator.
"""

from . import datacenter, errors, geo, sim, vision

__all__ = ["datacenter", "errors", "geo", "sim", "vision"]
__version__ = "0.1.0"
