import type { ApiClient } from "./api.js";
import type { AvailabilitySnapshot } from "./types.js";

export const POLL_INTERVAL_MS = 5000;

/**
 * Periodic availability refresh for the buses on screen. Snapshots are
 * delivered to the callback in version order per bus; anything stale
 * (version <= last seen) is dropped here so consumers never move
 * backwards.
 */
export class AvailabilityPoller {
  private watched: string[] = [];
  private lastVersion = new Map<string, number>();
  private timer: ReturnType<typeof setInterval> | null = null;
  private inFlight = false;

  constructor(
    private readonly api: ApiClient,
    private readonly onSnapshot: (snapshot: AvailabilitySnapshot) => void,
    private readonly intervalMs: number = POLL_INTERVAL_MS,
  ) {}

  watch(busIds: string[]): void {
    this.watched = [...busIds];
  }

  start(): void {
    if (this.timer !== null) {
      return;
    }
    this.timer = setInterval(() => {
      void this.tick();
    }, this.intervalMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  /** One poll round; exposed so tests can drive it without timers. */
  async tick(): Promise<void> {
    if (this.inFlight) {
      return; // previous round still running; skip instead of piling up
    }
    this.inFlight = true;
    try {
      for (const busId of this.watched) {
        let snapshot: AvailabilitySnapshot;
        try {
          snapshot = await this.api.availability(busId);
        } catch {
          continue; // transient failure: keep showing the last good value
        }
        const last = this.lastVersion.get(busId);
        if (last !== undefined && snapshot.version <= last) {
          continue;
        }
        this.lastVersion.set(busId, snapshot.version);
        this.onSnapshot(snapshot);
      }
    } finally {
      this.inFlight = false;
    }
  }
}
