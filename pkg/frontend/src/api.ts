/** Typed client for the gateway API. Network failures surface as ApiError. */

import type {
  ApiErrorBody,
  AppListing,
  EstimateResponse,
  GatewayEntry,
  UploadResponse,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly status: number | null;
  readonly body: ApiErrorBody | null;

  constructor(message: string, status: number | null, body: ApiErrorBody | null) {
    super(message);
    this.status = status;
    this.body = body;
  }
}

export class ApiClient {
  constructor(
    readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (u, i) => fetch(u, i),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(`network failure: ${String(err)}`, null, null);
    }
    if (!response.ok) {
      let body: ApiErrorBody | null = null;
      try {
        const parsed = (await response.json()) as { detail?: ApiErrorBody };
        body = parsed.detail ?? null;
      } catch {
        body = null;
      }
      throw new ApiError(
        body?.detail ?? `request failed with status ${response.status}`,
        response.status,
        body,
      );
    }
    return (await response.json()) as T;
  }

  upload(pageUrl: string, feeTxId?: string): Promise<UploadResponse> {
    return this.request<UploadResponse>("/api/upload", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(feeTxId ? { pageUrl, feeTxId } : { pageUrl }),
    });
  }

  listApps(offset = 0, limit = 50): Promise<AppListing[]> {
    return this.request<AppListing[]>(`/api/apps?offset=${offset}&limit=${limit}`);
  }

  getApp(packageName: string, version: string): Promise<AppListing> {
    return this.request<AppListing>(
      `/api/apps/${encodeURIComponent(packageName)}/${encodeURIComponent(version)}`,
    );
  }

  estimate(pageUrl: string): Promise<EstimateResponse> {
    return this.request<EstimateResponse>(
      `/api/estimate?pageUrl=${encodeURIComponent(pageUrl)}`,
    );
  }

  gateways(): Promise<GatewayEntry[]> {
    return this.request<GatewayEntry[]>("/api/gateways");
  }

  /** Server download route (the fallback when every gateway fails). */
  async downloadViaServer(
    packageName: string,
    version: string,
  ): Promise<{ bytes: Uint8Array; contentId: string | null }> {
    const path = `/api/download/${encodeURIComponent(packageName)}/${encodeURIComponent(version)}`;
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, { method: "GET" });
    } catch (err) {
      throw new ApiError(`network failure: ${String(err)}`, null, null);
    }
    if (!response.ok) {
      throw new ApiError(`server download failed (${response.status})`, response.status, null);
    }
    const bytes = new Uint8Array(await response.arrayBuffer());
    return { bytes, contentId: response.headers.get("X-Content-Id") };
  }
}
