/** Download flow: probe gateways, fetch from the fastest, verify in-browser.
 *
 * The path is read-only by construction: HEAD probes, GET content fetches,
 * and (only when every gateway fails) the server's GET download route with a
 * visible notice.  A digest mismatch blocks the download outright.
 */

import { ApiClient, ApiError } from "./api.js";
import { verifyContentId } from "./digest.js";
import {
  GatewayTarget,
  ProbeOne,
  byAscendingRtt,
  probeGateways,
} from "./probe.js";
import type { AppListing } from "./types.js";

export interface DownloadOutcome {
  status: "ok" | "blocked" | "failed";
  source: "gateway" | "server-fallback" | null;
  servedBy: string | null;
  notice: string | null;
  bytes: Uint8Array | null;
}

export interface DownloadDeps {
  fetchFn: (url: string, init?: RequestInit) => Promise<Response>;
  probeOne: ProbeOne;
  api: ApiClient;
}

async function fetchFromGateway(
  deps: DownloadDeps,
  target: GatewayTarget,
  contentId: string,
): Promise<Uint8Array | null> {
  const url = target.endpoint.replace(/\/$/, "") + "/ipfs/" + contentId;
  try {
    const response = await deps.fetchFn(url, { method: "GET" });
    if (!response.ok) {
      return null;
    }
    return new Uint8Array(await response.arrayBuffer());
  } catch {
    return null;
  }
}

export async function downloadApp(
  app: AppListing,
  gateways: GatewayTarget[],
  deps: DownloadDeps,
): Promise<DownloadOutcome> {
  const probed = await probeGateways(gateways, deps.probeOne);
  for (const candidate of byAscendingRtt(probed)) {
    if (candidate.rtt === null) {
      continue;
    }
    const bytes = await fetchFromGateway(deps, candidate, app.contentId);
    if (bytes === null) {
      continue;
    }
    if (!(await verifyContentId(bytes, app.contentId))) {
      return {
        status: "blocked",
        source: "gateway",
        servedBy: candidate.name,
        notice:
          `integrity check failed: bytes from ${candidate.name} do not hash ` +
          `to ${app.contentId}; download blocked`,
        bytes: null,
      };
    }
    return {
      status: "ok",
      source: "gateway",
      servedBy: candidate.name,
      notice: null,
      bytes,
    };
  }

  // every gateway failed: fall back to the server route, visibly
  try {
    const { bytes } = await deps.api.downloadViaServer(
      app.packageName,
      app.versionName,
    );
    if (!(await verifyContentId(bytes, app.contentId))) {
      return {
        status: "blocked",
        source: "server-fallback",
        servedBy: "server",
        notice: "integrity check failed on the server route; download blocked",
        bytes: null,
      };
    }
    return {
      status: "ok",
      source: "server-fallback",
      servedBy: "server",
      notice: "no gateway reachable; served by the gateway operator instead",
      bytes,
    };
  } catch (err) {
    const detail = err instanceof ApiError ? err.message : String(err);
    return {
      status: "failed",
      source: null,
      servedBy: null,
      notice: `download failed everywhere: ${detail}`,
      bytes: null,
    };
  }
}
