/** Browser wiring: screens for login -> search -> map/list -> booking.
 * All behaviour lives in the flow modules; this file only moves DOM. */

import { ApiClient, NetworkError } from "./api.js";
import { BookingFlow } from "./booking.js";
import type { MapViewModel } from "./mapmodel.js";
import { AvailabilityPoller } from "./poll.js";
import { drawMap, enablePanning } from "./render.js";
import { loginFlow, bookingEnabled, type UiSession } from "./session.js";
import { searchAndMapFlow } from "./search.js";
import type { GeoPosition, SuggestedStop } from "./types.js";

const API_BASE = (window as { FDF_API_BASE?: string }).FDF_API_BASE ?? "http://127.0.0.1:8000";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing element #${id}`);
  }
  return el as T;
};

const api = new ApiClient(API_BASE);
let session: UiSession | null = null;
let map: MapViewModel | null = null;
let booking: BookingFlow | null = null;
let lastDest: GeoPosition | null = null;

const banner = $("banner");
const canvas = $("map") as unknown as HTMLCanvasElement;

function showBanner(text: string, isError = true): void {
  banner.textContent = text;
  banner.className = isError ? "banner error" : "banner info";
  banner.hidden = text === "";
}

function redraw(): void {
  if (map) {
    drawMap(canvas, map);
  }
}

const poller = new AvailabilityPoller(api, (snapshot) => {
  if (map && map.applySnapshot(snapshot)) {
    renderBusList();
    redraw();
  }
});

function parsePosition(value: string): GeoPosition | null {
  const m = value.split(",").map((s) => Number.parseFloat(s.trim()));
  if (m.length !== 2 || m.some((v) => Number.isNaN(v))) {
    return null;
  }
  return { lat: m[0]!, lon: m[1]! };
}

function renderBusList(): void {
  const list = $("buses");
  list.innerHTML = "";
  if (!map) {
    return;
  }
  if (map.markers.length === 0) {
    list.innerHTML = "<li class='empty'>no buses connect these stops right now</li>";
    return;
  }
  for (const marker of map.markers) {
    const li = document.createElement("li");
    li.textContent = `${marker.busId} - arrives in ${Math.round(marker.etaSeconds)}s - ${marker.available} seats `;
    const btn = document.createElement("button");
    btn.textContent = "book seat";
    btn.disabled = !session || !bookingEnabled(session);
    btn.addEventListener("click", () => void doBook(marker.busId));
    li.appendChild(btn);
    list.appendChild(li);
  }
}

function renderBookingState(): void {
  const card = $("booking-card");
  card.innerHTML = "";
  if (!booking) {
    return;
  }
  const state = booking.state;
  if (state.phase === "confirmed") {
    card.innerHTML = `<p class="ok">Seat booked - reference ${state.booking.booking_id} on ${state.booking.bus_id}.</p>`;
  } else if (state.phase === "full") {
    const alt = state.suggestedStop;
    card.innerHTML = `<p class="warn">Bus ${state.busId} is full.</p>`;
    if (alt) {
      const p = document.createElement("p");
      p.textContent = `Nearest alternative stop: ${alt.name}. `;
      const btn = document.createElement("button");
      btn.textContent = `search from ${alt.name}`;
      btn.addEventListener("click", () => void booking?.acceptAlternative());
      p.appendChild(btn);
      card.appendChild(p);
    }
  } else if (state.phase === "error") {
    card.innerHTML = `<p class="warn">${state.message}${state.retryable ? " - try again" : ""}</p>`;
  }
}

async function doSearch(source: GeoPosition, dest: GeoPosition): Promise<void> {
  if (!session) {
    return;
  }
  lastDest = dest;
  try {
    map = await searchAndMapFlow(api, session, source, dest);
  } catch (err) {
    showBanner(err instanceof NetworkError ? err.message : String(err));
    return;
  }
  showBanner("");
  $("route-label").textContent = `${map.source.name} -> ${map.dest.name}`;
  booking = new BookingFlow(api, session, async (stop: SuggestedStop) => {
    await doSearch({ lat: stop.lat, lon: stop.lon }, lastDest!);
    renderBookingState();
  });
  poller.watch(map.markers.map((m) => m.busId));
  poller.start();
  renderBusList();
  renderBookingState();
  redraw();
  $("screen-map").hidden = false;
}

async function doBook(busId: string): Promise<void> {
  if (!booking || !map) {
    return;
  }
  await booking.attempt(busId, map);
  renderBusList();
  renderBookingState();
  redraw();
}

function wireLogin(): void {
  $("login-form").addEventListener("submit", (e) => {
    e.preventDefault();
    void (async () => {
      const passengerId = ($("passenger-id") as HTMLInputElement).value.trim();
      const accepted = ($("privacy") as HTMLInputElement).checked;
      const location = parsePosition(($("my-location") as HTMLInputElement).value);
      if (!passengerId) {
        showBanner("enter a passenger id");
        return;
      }
      try {
        session = await loginFlow(api, passengerId, accepted, location);
      } catch (err) {
        showBanner(err instanceof NetworkError ? `${err.message} - retry` : String(err));
        return;
      }
      showBanner(
        accepted ? "" : "privacy declined: booking and location features are off",
        false,
      );
      $("screen-login").hidden = true;
      $("screen-search").hidden = false;
    })();
  });
}

function wireSearch(): void {
  $("search-form").addEventListener("submit", (e) => {
    e.preventDefault();
    const source =
      parsePosition(($("source") as HTMLInputElement).value) ?? session?.location ?? null;
    const dest = parsePosition(($("dest") as HTMLInputElement).value);
    if (!source || !dest) {
      showBanner("enter source and destination as 'lat, lon'");
      return;
    }
    void doSearch(source, dest);
  });
}

wireLogin();
wireSearch();
enablePanning(canvas, () => map, redraw);
