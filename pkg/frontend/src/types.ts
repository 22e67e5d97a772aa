/** Payload shapes of the gateway HTTP JSON API (see FORMATS.md, section 16). */

export type VerdictChannel =
  | "httpsDirect"
  | "checksumVerified"
  | "httpsRewritten"
  | "knownAppMatch"
  | "knownDeveloperMatch"
  | "unverifiedWarning"
  | "rejected";

export type RepackVerdict = "pass" | "fail" | "unchecked";

export interface Verdict {
  channel: VerdictChannel;
  detail: string;
}

export interface UploadResponse {
  packageName: string;
  versionName: string;
  contentId: string;
  verdict: Verdict;
  repackVerdict: RepackVerdict;
  txId: string;
}

/** One row of the app browser; rendered verbatim from the API. */
export interface AppListing {
  packageName: string;
  versionName: string;
  certSerial: string;
  originUrl: string;
  repackVerdict: RepackVerdict;
  contentId: string;
}

export interface GatewayEntry {
  name: string;
  endpoint: string;
  lastRtt: number | null;
  reachable: boolean;
}

export interface EstimateResponse {
  gas: number;
  feeWei: number;
  gasPriceWei: number;
}

/** Error body the API returns inside `detail`. */
export interface ApiErrorBody {
  error: string;
  detail: string;
  verdict?: Verdict;
  condition?: string;
}
