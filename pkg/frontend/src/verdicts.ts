/** Exhaustive verdict-to-badge mapping: every channel has a distinct look. */

import type { RepackVerdict, VerdictChannel } from "./types.js";

export interface Badge {
  label: string;
  cssClass: string;
  tone: "ok" | "info" | "warn" | "danger";
}

export const VERDICT_BADGES: Record<VerdictChannel, Badge> = {
  httpsDirect: {
    label: "TLS transport",
    cssClass: "badge-https-direct",
    tone: "ok",
  },
  checksumVerified: {
    label: "checksum verified",
    cssClass: "badge-checksum-verified",
    tone: "ok",
  },
  httpsRewritten: {
    label: "upgraded to TLS",
    cssClass: "badge-https-rewritten",
    tone: "ok",
  },
  knownAppMatch: {
    label: "known app",
    cssClass: "badge-known-app",
    tone: "info",
  },
  knownDeveloperMatch: {
    label: "known developer",
    cssClass: "badge-known-developer",
    tone: "info",
  },
  unverifiedWarning: {
    label: "retrieval not verified",
    cssClass: "badge-unverified",
    tone: "warn",
  },
  rejected: {
    label: "rejected",
    cssClass: "badge-rejected",
    tone: "danger",
  },
};

export const REPACK_BADGES: Record<RepackVerdict, Badge> = {
  pass: { label: "signer verified", cssClass: "badge-repack-pass", tone: "ok" },
  fail: { label: "re-signed (repack?)", cssClass: "badge-repack-fail", tone: "danger" },
  unchecked: { label: "signer unknown", cssClass: "badge-repack-unchecked", tone: "warn" },
};

export function verdictBadge(channel: VerdictChannel): Badge {
  return VERDICT_BADGES[channel];
}

export function repackBadge(verdict: RepackVerdict): Badge {
  return REPACK_BADGES[verdict];
}
