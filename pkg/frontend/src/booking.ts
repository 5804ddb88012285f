import { ApiError, NetworkError, type ApiClient } from "./api.js";
import type { MapViewModel } from "./mapmodel.js";
import { bookingEnabled, type UiSession } from "./session.js";
import type { BookingRecord, SuggestedStop } from "./types.js";

export type BookingState =
  | { phase: "idle" }
  | { phase: "in_flight"; busId: string }
  | { phase: "confirmed"; booking: BookingRecord }
  | { phase: "full"; busId: string; suggestedStop: SuggestedStop | null }
  | { phase: "error"; message: string; retryable: boolean };

/**
 * Seat-booking state machine. At most one request is in flight; a
 * confirmed booking applies the single optimistic decrement to the map;
 * a full bus surfaces the alternative-stop card whose one-tap action
 * re-centers the search on the suggested stop. Transport failures never
 * decrement anything.
 */
export class BookingFlow {
  state: BookingState = { phase: "idle" };

  constructor(
    private readonly api: ApiClient,
    private readonly session: UiSession,
    private readonly reSearch: (center: SuggestedStop) => Promise<void>,
  ) {}

  async attempt(busId: string, map: MapViewModel): Promise<BookingState> {
    if (!bookingEnabled(this.session)) {
      this.state = {
        phase: "error",
        message: "accept the privacy policy and pick both stops first",
        retryable: false,
      };
      return this.state;
    }
    if (this.state.phase === "in_flight") {
      return this.state;
    }
    this.state = { phase: "in_flight", busId };
    try {
      const outcome = await this.api.bookSeat(this.session.passengerId, busId);
      if (outcome.kind === "booked") {
        map.confirmBookedSeat(busId);
        this.state = { phase: "confirmed", booking: outcome.booking };
      } else {
        if (outcome.suggestedStop) {
          map.addSuggestedPin(outcome.suggestedStop);
        }
        this.state = { phase: "full", busId, suggestedStop: outcome.suggestedStop };
      }
    } catch (err) {
      if (err instanceof ApiError) {
        this.state = { phase: "error", message: err.message, retryable: false };
      } else if (err instanceof NetworkError) {
        this.state = { phase: "error", message: err.message, retryable: true };
      } else {
        throw err;
      }
    }
    return this.state;
  }

  /** One tap on the alternative-stop card: repeat the search from there.
   * The passenger may do this as often as they like. */
  async acceptAlternative(): Promise<boolean> {
    if (this.state.phase !== "full" || !this.state.suggestedStop) {
      return false;
    }
    const stop = this.state.suggestedStop;
    this.state = { phase: "idle" };
    await this.reSearch(stop);
    return true;
  }
}
