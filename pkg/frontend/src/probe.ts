/** Gateway RTT probing with a bounded fan-out of 8 concurrent probes. */

export interface GatewayTarget {
  name: string;
  endpoint: string;
}

export interface ProbeResult extends GatewayTarget {
  rtt: number | null; // seconds; null = unreachable
}

export type ProbeOne = (target: GatewayTarget) => Promise<number | null>;

export const PROBE_FAN_OUT = 8;

/** HEAD the gateway's content path and time the round trip. */
export function headProbe(
  fetchFn: (url: string, init?: RequestInit) => Promise<Response> = (u, i) => fetch(u, i),
  timeoutMs = 5000,
): ProbeOne {
  return async (target) => {
    const url = target.endpoint.replace(/\/$/, "") + "/ipfs/";
    const started = performance.now();
    try {
      await fetchFn(url, {
        method: "HEAD",
        signal: AbortSignal.timeout(timeoutMs),
      });
    } catch {
      return null;
    }
    return (performance.now() - started) / 1000;
  };
}

export async function probeGateways(
  targets: GatewayTarget[],
  probeOne: ProbeOne,
  fanOut: number = PROBE_FAN_OUT,
): Promise<ProbeResult[]> {
  const results: ProbeResult[] = new Array(targets.length);
  let next = 0;
  async function worker(): Promise<void> {
    while (next < targets.length) {
      const index = next++;
      const target = targets[index];
      let rtt: number | null;
      try {
        rtt = await probeOne(target);
      } catch {
        rtt = null;
      }
      results[index] = { ...target, rtt };
    }
  }
  const workers = Array.from(
    { length: Math.min(fanOut, Math.max(targets.length, 1)) },
    () => worker(),
  );
  await Promise.all(workers);
  return results;
}

/** Reachable result with the lowest RTT; ties break by name. */
export function fastestGateway(results: ProbeResult[]): ProbeResult | null {
  const reachable = results.filter((r) => r.rtt !== null && r.rtt > 0);
  if (reachable.length === 0) {
    return null;
  }
  reachable.sort((a, b) => a.rtt! - b.rtt! || a.name.localeCompare(b.name));
  return reachable[0];
}

/** Sorted copy: reachable gateways by ascending RTT, then the unreachable. */
export function byAscendingRtt(results: ProbeResult[]): ProbeResult[] {
  return [...results].sort((a, b) => {
    if (a.rtt === null && b.rtt === null) return a.name.localeCompare(b.name);
    if (a.rtt === null) return 1;
    if (b.rtt === null) return -1;
    return a.rtt - b.rtt || a.name.localeCompare(b.name);
  });
}
