/** Upload view: paste a market/code-hosting URL, get the pending result.
 *
 * The result card renders immediately (the chain transaction is still
 * confirming); rejections become an alert banner; network failures are
 * rendered, never swallowed.
 */

import { ApiClient, ApiError } from "./api.js";
import type { UploadResponse } from "./types.js";
import { repackBadge, verdictBadge } from "./verdicts.js";

export type UploadViewState =
  | { kind: "idle" }
  | { kind: "submitting"; pageUrl: string }
  | { kind: "result"; result: UploadResponse }
  | { kind: "alert"; title: string; detail: string };

export function submitDisabled(input: string): boolean {
  return input.trim().length === 0;
}

export async function submitUpload(
  pageUrl: string,
  api: ApiClient,
  feeTxId?: string,
): Promise<UploadViewState> {
  try {
    const result = await api.upload(pageUrl, feeTxId);
    return { kind: "result", result };
  } catch (err) {
    if (err instanceof ApiError) {
      const verdict = err.body?.verdict;
      if (verdict) {
        return {
          kind: "alert",
          title: "upload refused",
          detail: verdict.detail,
        };
      }
      return {
        kind: "alert",
        title: err.body?.error ?? "upload failed",
        detail: err.message,
      };
    }
    return { kind: "alert", title: "unexpected failure", detail: String(err) };
  }
}

function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export function renderUploadState(state: UploadViewState): string {
  switch (state.kind) {
    case "idle":
      return `<p class="hint">paste an app page URL to delegate its download</p>`;
    case "submitting":
      return `<p class="busy">retrieving and verifying ${escapeHtml(state.pageUrl)}...</p>`;
    case "result": {
      const r = state.result;
      const verdict = verdictBadge(r.verdict.channel);
      const repack = repackBadge(r.repackVerdict);
      return [
        `<div class="result-card" data-state="result">`,
        `<h3>${escapeHtml(r.packageName)} <small>${escapeHtml(r.versionName)}</small></h3>`,
        `<span class="badge ${verdict.cssClass}" title="${escapeHtml(r.verdict.detail)}">${verdict.label}</span>`,
        `<span class="badge ${repack.cssClass}">${repack.label}</span>`,
        `<p class="cid">content id: <code>${escapeHtml(r.contentId)}</code></p>`,
        `<p class="tx">chain tx <code>${escapeHtml(r.txId)}</code> (pending confirmation)</p>`,
        `<button class="download-apk" data-package="${escapeHtml(r.packageName)}" ` +
          `data-version="${escapeHtml(r.versionName)}" data-cid="${escapeHtml(r.contentId)}">` +
          `Download APK</button>`,
        `</div>`,
      ].join("\n");
    }
    case "alert":
      return [
        `<div class="alert-banner" role="alert" data-state="alert">`,
        `<strong>${escapeHtml(state.title)}</strong>`,
        `<p>${escapeHtml(state.detail)}</p>`,
        `</div>`,
      ].join("\n");
  }
}
