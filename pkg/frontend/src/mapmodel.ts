import type { AvailabilitySnapshot, BusSummary, NearestStop } from "./types.js";

export interface StopPin {
  stopId: string;
  name: string;
  lat: number;
  lon: number;
  role: "source" | "dest" | "suggested";
}

export interface BusMarker {
  busId: string;
  lat: number;
  lon: number;
  etaSeconds: number;
  /** Seat count as last received from the API; the view never computes
   * its own counts beyond the one optimistic decrement after a 201. */
  available: number;
  version: number | null;
}

/**
 * Schematic map state: stop pins, live bus markers and the straight route
 * line between source and destination, plus a pannable projection onto a
 * canvas. Coordinates come straight from the API; there is no tile layer.
 */
export class MapViewModel {
  readonly pins: StopPin[] = [];
  markers: BusMarker[] = [];
  panX = 0;
  panY = 0;

  constructor(
    readonly source: NearestStop,
    readonly dest: NearestStop,
    buses: BusSummary[],
  ) {
    this.pins.push({ stopId: source.stop_id, name: source.name, lat: source.lat, lon: source.lon, role: "source" });
    this.pins.push({ stopId: dest.stop_id, name: dest.name, lat: dest.lat, lon: dest.lon, role: "dest" });
    this.markers = buses.map((b) => ({
      busId: b.bus_id,
      lat: b.position.lat,
      lon: b.position.lon,
      etaSeconds: b.eta_s,
      available: b.available,
      version: null,
    }));
  }

  get routeLine(): [StopPin, StopPin] {
    return [this.pins[0]!, this.pins[1]!];
  }

  marker(busId: string): BusMarker | undefined {
    return this.markers.find((m) => m.busId === busId);
  }

  addSuggestedPin(stop: { stop_id: string; name: string; lat: number; lon: number }): void {
    this.pins.push({ stopId: stop.stop_id, name: stop.name, lat: stop.lat, lon: stop.lon, role: "suggested" });
  }

  /** Fold in a polled snapshot; snapshots older than what is already on
   * screen are discarded so markers only move forward in version order. */
  applySnapshot(snapshot: AvailabilitySnapshot): boolean {
    const marker = this.marker(snapshot.bus_id);
    if (!marker) {
      return false;
    }
    if (marker.version !== null && snapshot.version <= marker.version) {
      return false;
    }
    marker.version = snapshot.version;
    marker.available = snapshot.available;
    return true;
  }

  /** One optimistic seat decrement, allowed only right after a confirmed
   * booking (HTTP 201). */
  confirmBookedSeat(busId: string): void {
    const marker = this.marker(busId);
    if (marker && marker.available > 0) {
      marker.available -= 1;
    }
  }

  pan(dx: number, dy: number): void {
    this.panX += dx;
    this.panY += dy;
  }

  /** Fit all pins and markers into a width x height canvas (with margin)
   * and project a lat/lon to pixels under the current pan offset. */
  project(lat: number, lon: number, width: number, height: number): { x: number; y: number } {
    const lats = [...this.pins.map((p) => p.lat), ...this.markers.map((m) => m.lat)];
    const lons = [...this.pins.map((p) => p.lon), ...this.markers.map((m) => m.lon)];
    const minLat = Math.min(...lats);
    const maxLat = Math.max(...lats);
    const minLon = Math.min(...lons);
    const maxLon = Math.max(...lons);
    const spanLat = Math.max(maxLat - minLat, 1e-6);
    const spanLon = Math.max(maxLon - minLon, 1e-6);
    const margin = 24;
    const x = margin + ((lon - minLon) / spanLon) * (width - 2 * margin) + this.panX;
    // Screen y grows downward; latitude grows upward.
    const y = height - margin - ((lat - minLat) / spanLat) * (height - 2 * margin) + this.panY;
    return { x, y };
  }
}
