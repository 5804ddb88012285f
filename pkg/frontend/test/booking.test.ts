/** Booking flow edge cases: the full-bus redirection card with one-tap
 * re-search, duplicate bookings, single in-flight request, and the
 * no-optimistic-decrement rule on transport failure. */

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { BookingFlow } from "../src/booking.js";
import { searchAndMapFlow } from "../src/search.js";
import { loginFlow } from "../src/session.js";
import type { SuggestedStop } from "../src/types.js";
import { standardStub } from "./stub_api.js";

async function setup(occupied = 55) {
  const stub = standardStub();
  stub.buses.get("bus1")!.occupied = occupied;
  const api = new ApiClient("http://stub", stub.fetch);
  const session = await loginFlow(api, "rider", true, { lat: 24.9, lon: 67.0 });
  const map = await searchAndMapFlow(api, session, { lat: 24.9, lon: 67.0 }, { lat: 24.937, lon: 67.0 });
  return { stub, api, session, map };
}

describe("booking flow", () => {
  it("full bus shows the alternative-stop card and re-search re-centres there", async () => {
    const { stub, api, session, map } = await setup(60); // zero seats
    const searches: SuggestedStop[] = [];
    const flow = new BookingFlow(api, session, async (stop) => {
      searches.push(stop);
      // the one-tap action repeats the search flow from the suggested stop
      await searchAndMapFlow(api, session, { lat: stop.lat, lon: stop.lon }, { lat: 24.937, lon: 67.0 });
    });

    const state = await flow.attempt("bus1", map);
    expect(state.phase).toBe("full");
    if (state.phase === "full") {
      expect(state.suggestedStop?.stop_id).toBe("b");
    }
    expect(map.pins.some((p) => p.role === "suggested" && p.stopId === "b")).toBe(true);
    expect(map.marker("bus1")?.available).toBe(0); // never decremented

    const accepted = await flow.acceptAlternative();
    expect(accepted).toBe(true);
    expect(searches.map((s) => s.stop_id)).toEqual(["b"]);
    expect(session.sourceStop?.stop_id).toBe("b"); // map now centred on the alternative
    expect(flow.state.phase).toBe("idle"); // the passenger may repeat at will
  });

  it("duplicate booking surfaces an inline error without touching counts", async () => {
    const { api, session, map } = await setup();
    const flow = new BookingFlow(api, session, async () => {});
    await flow.attempt("bus1", map);
    expect(map.marker("bus1")?.available).toBe(4);

    const again = await flow.attempt("bus1", map);
    expect(again.phase).toBe("error");
    if (again.phase === "error") {
      expect(again.retryable).toBe(false);
    }
    expect(map.marker("bus1")?.available).toBe(4); // unchanged
  });

  it("transport failure is retryable and never decrements optimistically", async () => {
    const { stub, api, session, map } = await setup();
    stub.failNetwork = true;
    const flow = new BookingFlow(api, session, async () => {});
    const state = await flow.attempt("bus1", map);
    expect(state.phase).toBe("error");
    if (state.phase === "error") {
      expect(state.retryable).toBe(true);
    }
    expect(map.marker("bus1")?.available).toBe(5);

    stub.failNetwork = false;
    const retry = await flow.attempt("bus1", map);
    expect(retry.phase).toBe("confirmed");
    expect(map.marker("bus1")?.available).toBe(4);
  });

  it("only one booking request can be in flight", async () => {
    const { stub, api, session, map } = await setup();
    let release!: () => void;
    const gate = new Promise<void>((resolve) => {
      release = resolve;
    });
    const slowFetch: typeof stub.fetch = async (url, init) => {
      if (String(url).includes("/bookings")) {
        await gate;
      }
      return stub.fetch(url, init);
    };
    const slowApi = new ApiClient("http://stub", slowFetch);
    const flow = new BookingFlow(slowApi, session, async () => {});

    const first = flow.attempt("bus1", map);
    const second = await flow.attempt("bus1", map); // rejected: already in flight
    expect(second.phase).toBe("in_flight");
    release();
    const settled = await first;
    expect(settled.phase).toBe("confirmed");
    expect(stub.callsTo("POST", "/bookings")).toHaveLength(1);
  });
});
