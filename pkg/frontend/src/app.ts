/** Browser bootstrap: wires the views to the page. */

import { ApiClient } from "./api.js";
import { downloadApp } from "./download.js";
import { headProbe } from "./probe.js";
import { renderUploadState, submitDisabled, submitUpload } from "./upload.js";
import { repackBadge } from "./verdicts.js";

const api = new ApiClient("");

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
}

async function refreshListing(): Promise<void> {
  const tbody = byId<HTMLTableSectionElement>("app-rows");
  const apps = await api.listApps(0, 200);
  tbody.innerHTML = apps
    .map((app) => {
      const badge = repackBadge(app.repackVerdict);
      return (
        `<tr><td>${app.packageName}</td><td>${app.versionName}</td>` +
        `<td><span class="badge ${badge.cssClass}">${badge.label}</span></td>` +
        `<td><code>${app.contentId.slice(0, 16)}…</code></td>` +
        `<td><button class="row-download" data-package="${app.packageName}" ` +
        `data-version="${app.versionName}" data-cid="${app.contentId}">download</button></td></tr>`
      );
    })
    .join("");
}

async function handleDownload(packageName: string, version: string): Promise<void> {
  const status = byId<HTMLParagraphElement>("download-status");
  status.textContent = `probing gateways for ${packageName} ${version}…`;
  const app = await api.getApp(packageName, version);
  const gateways = (await api.gateways()).map((g) => ({
    name: g.name,
    endpoint: g.endpoint,
  }));
  const outcome = await downloadApp(app, gateways, {
    fetchFn: (u, i) => fetch(u, i),
    probeOne: headProbe(),
    api,
  });
  if (outcome.status === "ok" && outcome.bytes) {
    status.textContent =
      `served by ${outcome.servedBy}` + (outcome.notice ? ` — ${outcome.notice}` : "");
    const blob = new Blob([outcome.bytes.buffer as ArrayBuffer]);
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = `${packageName}-${version}.apk`;
    link.click();
    URL.revokeObjectURL(link.href);
  } else {
    status.textContent = outcome.notice ?? "download failed";
  }
}

export function main(): void {
  const input = byId<HTMLInputElement>("page-url");
  const submit = byId<HTMLButtonElement>("upload-submit");
  const output = byId<HTMLDivElement>("upload-output");

  const sync = () => {
    submit.disabled = submitDisabled(input.value);
  };
  input.addEventListener("input", sync);
  sync();

  submit.addEventListener("click", async () => {
    output.innerHTML = renderUploadState({
      kind: "submitting",
      pageUrl: input.value,
    });
    const state = await submitUpload(input.value.trim(), api);
    output.innerHTML = renderUploadState(state);
    if (state.kind === "result") {
      void refreshListing();
    }
  });

  document.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.matches("button.row-download, button.download-apk")) {
      void handleDownload(
        target.dataset.package ?? "",
        target.dataset.version ?? "",
      );
    }
  });

  void refreshListing();
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", main);
}
