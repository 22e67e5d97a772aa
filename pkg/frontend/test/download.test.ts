import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { downloadApp } from "../src/download.js";
import type { GatewayTarget } from "../src/probe.js";
import type { AppListing } from "../src/types.js";

const APP_BYTES = new TextEncoder().encode("the app bytes");
const APP_CID = "ahsd32j3n3pfyyom7yuggbisqroeypuderjywf5zlbqtemwxj7auk";

const LISTING: AppListing = {
  packageName: "com.fixture.app",
  versionName: "1.0",
  certSerial: "0x706a633e",
  originUrl: "http://market.test/page.html",
  repackVerdict: "pass",
  contentId: APP_CID,
};

const GATEWAYS: GatewayTarget[] = [
  { name: "gw-far", endpoint: "https://gw-far.test" },
  { name: "gw-near", endpoint: "https://gw-near.test" },
];

interface LoggedRequest {
  method: string;
  url: string;
}

function fakeNetwork(options: {
  gatewayBodies?: Record<string, Uint8Array | null>;
  serverBody?: Uint8Array | null;
}) {
  const log: LoggedRequest[] = [];
  const fetchFn = async (url: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? "GET";
    log.push({ method, url });
    if (url.includes("/ipfs/")) {
      const host = new URL(url).host;
      const body = options.gatewayBodies?.[host];
      if (body == null) {
        return new Response("gone", { status: 404 });
      }
      return new Response(new Uint8Array(body), { status: 200 });
    }
    if (url.includes("/api/download/")) {
      if (options.serverBody == null) {
        return new Response("missing", { status: 404 });
      }
      return new Response(new Uint8Array(options.serverBody), {
        status: 200,
        headers: { "X-Content-Id": APP_CID },
      });
    }
    return new Response("not found", { status: 404 });
  };
  return { log, fetchFn };
}

const rtts: Record<string, number> = { "gw-near": 0.04, "gw-far": 0.8 };

describe("download flow", () => {
  it("fetches from the fastest gateway and verifies the digest", async () => {
    const net = fakeNetwork({
      gatewayBodies: { "gw-near.test": APP_BYTES, "gw-far.test": APP_BYTES },
    });
    const outcome = await downloadApp(LISTING, GATEWAYS, {
      fetchFn: net.fetchFn,
      probeOne: async (t) => rtts[t.name],
      api: new ApiClient("", net.fetchFn),
    });
    expect(outcome.status).toBe("ok");
    expect(outcome.servedBy).toBe("gw-near");
    expect(outcome.source).toBe("gateway");
    expect(outcome.bytes).not.toBeNull();
  });

  it("issues only read requests (GET/HEAD), end to end", async () => {
    const net = fakeNetwork({
      gatewayBodies: { "gw-near.test": APP_BYTES },
    });
    await downloadApp(LISTING, GATEWAYS, {
      fetchFn: net.fetchFn,
      probeOne: async (t) => rtts[t.name],
      api: new ApiClient("", net.fetchFn),
    });
    expect(net.log.length).toBeGreaterThan(0);
    for (const entry of net.log) {
      expect(["GET", "HEAD"]).toContain(entry.method);
    }
    // and nothing touches a mutating endpoint
    expect(net.log.some((e) => e.url.includes("/api/upload"))).toBe(false);
    expect(net.log.some((e) => e.url.includes("/api/admin"))).toBe(false);
  });

  it("blocks the download on a digest mismatch", async () => {
    const wrong = new TextEncoder().encode("not the app bytes");
    const net = fakeNetwork({ gatewayBodies: { "gw-near.test": wrong } });
    const outcome = await downloadApp(LISTING, [GATEWAYS[1]], {
      fetchFn: net.fetchFn,
      probeOne: async () => 0.04,
      api: new ApiClient("", net.fetchFn),
    });
    expect(outcome.status).toBe("blocked");
    expect(outcome.bytes).toBeNull();
    expect(outcome.notice).toContain("integrity check failed");
  });

  it("falls back to the server route with a visible notice", async () => {
    const net = fakeNetwork({ gatewayBodies: {}, serverBody: APP_BYTES });
    const outcome = await downloadApp(LISTING, GATEWAYS, {
      fetchFn: net.fetchFn,
      probeOne: async () => null, // every gateway unreachable
      api: new ApiClient("", net.fetchFn),
    });
    expect(outcome.status).toBe("ok");
    expect(outcome.source).toBe("server-fallback");
    expect(outcome.notice).toContain("no gateway reachable");
    // the fallback is still read-only
    for (const entry of net.log) {
      expect(["GET", "HEAD"]).toContain(entry.method);
    }
  });

  it("tries the next gateway when the fastest has no copy", async () => {
    const net = fakeNetwork({
      gatewayBodies: { "gw-far.test": APP_BYTES }, // near one answers 404
    });
    const outcome = await downloadApp(LISTING, GATEWAYS, {
      fetchFn: net.fetchFn,
      probeOne: async (t) => rtts[t.name],
      api: new ApiClient("", net.fetchFn),
    });
    expect(outcome.status).toBe("ok");
    expect(outcome.servedBy).toBe("gw-far");
  });

  it("reports total failure without inventing bytes", async () => {
    const net = fakeNetwork({ gatewayBodies: {}, serverBody: null });
    const outcome = await downloadApp(LISTING, GATEWAYS, {
      fetchFn: net.fetchFn,
      probeOne: async () => null,
      api: new ApiClient("", net.fetchFn),
    });
    expect(outcome.status).toBe("failed");
    expect(outcome.bytes).toBeNull();
    expect(outcome.notice).toContain("download failed everywhere");
  });
});
