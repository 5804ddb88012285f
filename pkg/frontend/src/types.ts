/** Wire types of the datacenter HTTP/JSON API. */

export interface GeoPosition {
  lat: number;
  lon: number;
}

export interface Session {
  passenger_id: string;
  privacy_accepted: boolean;
  last_location: GeoPosition | null;
}

export interface NearestStop {
  stop_id: string;
  name: string;
  lat: number;
  lon: number;
  distance_m: number;
}

export interface BusSummary {
  bus_id: string;
  position: GeoPosition;
  eta_s: number;
  available: number;
}

export interface AvailabilitySnapshot {
  bus_id: string;
  version: number;
  timestamp: number;
  total: number;
  occupied: number;
  empty: number;
  booked: number;
  available: number;
}

export interface BookingRecord {
  booking_id: string;
  passenger_id: string;
  bus_id: string;
  status: string;
  created_at: number;
}

export interface SuggestedStop {
  stop_id: string;
  name: string;
  lat: number;
  lon: number;
}

export interface ApiErrorBody {
  error_code: string;
  message: string;
  details: Record<string, unknown>;
}

export type BookingOutcome =
  | { kind: "booked"; booking: BookingRecord }
  | { kind: "full"; suggestedStop: SuggestedStop | null };
