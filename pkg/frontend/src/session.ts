import type { ApiClient } from "./api.js";
import type { GeoPosition, NearestStop } from "./types.js";

/** Client-side session state. Booking stays disabled until the privacy
 * policy is accepted and both journey stops are selected. */
export interface UiSession {
  passengerId: string;
  privacyAccepted: boolean;
  location: GeoPosition | null;
  sourceStop: NearestStop | null;
  destStop: NearestStop | null;
}

export function bookingEnabled(session: UiSession): boolean {
  return session.privacyAccepted && session.sourceStop !== null && session.destStop !== null;
}

/**
 * Login: register the passenger, then push the device location - but only
 * after the privacy policy was accepted. A refusal still yields a usable
 * session; location-based features stay off and no location request is
 * ever issued.
 */
export async function loginFlow(
  api: ApiClient,
  passengerId: string,
  privacyAccepted: boolean,
  location: GeoPosition | null,
): Promise<UiSession> {
  const server = await api.registerPassenger(passengerId, privacyAccepted);
  const session: UiSession = {
    passengerId: server.passenger_id,
    privacyAccepted: server.privacy_accepted,
    location: null,
    sourceStop: null,
    destStop: null,
  };
  if (session.privacyAccepted && location) {
    await api.updateLocation(passengerId, location);
    session.location = location;
  }
  return session;
}
