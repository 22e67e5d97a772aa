import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { renderUploadState, submitDisabled, submitUpload } from "../src/upload.js";

const DECLARED = "f5580d6a58bb9d97c27929f1a9c585f1";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

function clientReturning(status: number, body: unknown): ApiClient {
  return new ApiClient("", async () => jsonResponse(status, body));
}

describe("upload view", () => {
  it("disables submit on empty input", () => {
    expect(submitDisabled("")).toBe(true);
    expect(submitDisabled("   ")).toBe(true);
    expect(submitDisabled("http://market.test/page.html")).toBe(false);
  });

  it("renders the pending-result card with a download action", async () => {
    const state = await submitUpload(
      "http://m.test/page.html",
      clientReturning(200, {
        packageName: "com.fixture.app",
        versionName: "1.0",
        contentId: "ae3arpfb4rhknrgsndvw3mbcmatjrewawqvyno7r455g7ilmhsjie",
        verdict: { channel: "checksumVerified", detail: "md5 matches page" },
        repackVerdict: "pass",
        txId: "0xabc123",
      }),
    );
    expect(state.kind).toBe("result");
    const html = renderUploadState(state);
    expect(html).toContain("com.fixture.app");
    expect(html).toContain("Download APK");
    expect(html).toContain("pending confirmation");
    expect(html).toContain("badge-checksum-verified");
  });

  it("renders the tampered-retrieval rejection as an alert with both digests", async () => {
    // shape taken from the gateway's 422 SecurityRejected response
    const computed = "46b2d32f0fe2dde9b5b0ab0509b716ad";
    const state = await submitUpload(
      "http://m.test/mitm/page.html",
      clientReturning(422, {
        detail: {
          error: "SecurityRejected",
          detail: "rejected: checksum mismatch",
          verdict: {
            channel: "rejected",
            detail: `checksum mismatch: declared ${DECLARED}, computed ${computed}`,
          },
        },
      }),
    );
    expect(state.kind).toBe("alert");
    const html = renderUploadState(state);
    expect(html).toContain('data-state="alert"');
    expect(html).toContain(DECLARED);
    expect(html).toContain(computed);
  });

  it("renders duplicates as an alert, not silence", async () => {
    const state = await submitUpload(
      "http://m.test/page.html",
      clientReturning(409, {
        detail: { error: "Duplicate", detail: "com.x 1.0 already on chain" },
      }),
    );
    expect(state.kind).toBe("alert");
    expect(renderUploadState(state)).toContain("already on chain");
  });

  it("surfaces network failures instead of swallowing them", async () => {
    const failing = new ApiClient("", async () => {
      throw new TypeError("fetch failed");
    });
    const state = await submitUpload("http://m.test/page.html", failing);
    expect(state.kind).toBe("alert");
    expect(renderUploadState(state)).toContain("network failure");
  });

  it("escapes markup from the API", async () => {
    const state = await submitUpload(
      "http://m.test/page.html",
      clientReturning(422, {
        detail: {
          error: "SecurityRejected",
          detail: "x",
          verdict: { channel: "rejected", detail: "<script>alert(1)</script>" },
        },
      }),
    );
    const html = renderUploadState(state);
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
  });
});
