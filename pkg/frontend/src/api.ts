import type {
  ApiErrorBody,
  AvailabilitySnapshot,
  BookingOutcome,
  BookingRecord,
  BusSummary,
  GeoPosition,
  NearestStop,
  Session,
  SuggestedStop,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Server said no: carries the error envelope fields. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly errorCode: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** Could not reach the server at all (offline, refused, timeout). */
export class NetworkError extends Error {
  constructor(cause: unknown) {
    super(`datacenter unreachable: ${String(cause)}`);
    this.name = "NetworkError";
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let body: Partial<ApiErrorBody> = {};
  try {
    body = (await response.json()) as Partial<ApiErrorBody>;
  } catch {
    // non-JSON error body; keep the status
  }
  return new ApiError(
    response.status,
    body.error_code ?? "http_error",
    body.message ?? `HTTP ${response.status}`,
  );
}

/** Thin typed client over the datacenter API; fetch is injectable so tests
 * can run against a stub. */
export class ApiClient {
  private readonly fetchFn: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    try {
      return await this.fetchFn(this.baseUrl + path, init);
    } catch (cause) {
      throw new NetworkError(cause);
    }
  }

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.request(path, init);
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  registerPassenger(passengerId: string, privacyAccepted: boolean): Promise<Session> {
    return this.json<Session>("/passengers", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ passenger_id: passengerId, privacy_accepted: privacyAccepted }),
    });
  }

  async updateLocation(passengerId: string, location: GeoPosition): Promise<void> {
    const response = await this.request(`/passengers/${encodeURIComponent(passengerId)}/location`, {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(location),
    });
    if (!response.ok) {
      throw await parseError(response);
    }
  }

  nearestStop(location: GeoPosition): Promise<NearestStop> {
    return this.json<NearestStop>(`/stops/nearest?lat=${location.lat}&lon=${location.lon}`);
  }

  queryBuses(sourceStopId: string, destStopId: string): Promise<BusSummary[]> {
    return this.json<BusSummary[]>(
      `/buses?source=${encodeURIComponent(sourceStopId)}&dest=${encodeURIComponent(destStopId)}`,
    );
  }

  availability(busId: string): Promise<AvailabilitySnapshot> {
    return this.json<AvailabilitySnapshot>(`/buses/${encodeURIComponent(busId)}/availability`);
  }

  async bookSeat(passengerId: string, busId: string): Promise<BookingOutcome> {
    const response = await this.request("/bookings", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ passenger_id: passengerId, bus_id: busId }),
    });
    if (response.status === 201) {
      return { kind: "booked", booking: (await response.json()) as BookingRecord };
    }
    if (response.status === 409) {
      const body = (await response.json()) as {
        reason?: string;
        suggested_stop?: SuggestedStop | null;
        error_code?: string;
        message?: string;
      };
      if (body.reason === "full") {
        return { kind: "full", suggestedStop: body.suggested_stop ?? null };
      }
      throw new ApiError(409, body.error_code ?? "conflict", body.message ?? "conflict");
    }
    throw await parseError(response);
  }

  async cancelBooking(bookingId: string): Promise<void> {
    const response = await this.request(`/bookings/${encodeURIComponent(bookingId)}`, {
      method: "DELETE",
    });
    if (!response.ok) {
      throw await parseError(response);
    }
  }
}
