import type { ApiClient } from "./api.js";
import { MapViewModel } from "./mapmodel.js";
import type { UiSession } from "./session.js";
import type { GeoPosition } from "./types.js";

/**
 * Source/destination search: resolve each entered position to its nearest
 * stop, list the buses that pass the source before the destination (the
 * API returns them sorted by arrival), and build the map view. Mutates the
 * session's selected stops so the booking gate can check them.
 */
export async function searchAndMapFlow(
  api: ApiClient,
  session: UiSession,
  source: GeoPosition,
  dest: GeoPosition,
): Promise<MapViewModel> {
  const sourceStop = await api.nearestStop(source);
  const destStop = await api.nearestStop(dest);
  session.sourceStop = sourceStop;
  session.destStop = destStop;
  const buses =
    sourceStop.stop_id === destStop.stop_id
      ? []
      : await api.queryBuses(sourceStop.stop_id, destStop.stop_id);
  return new MapViewModel(sourceStop, destStop, buses);
}
