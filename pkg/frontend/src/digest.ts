/** In-browser integrity: sha256 via WebCrypto + content-id rendering.
 *
 * Rendering matches the server exactly: lowercase RFC 4648 base32 of
 * 0x01 || digest, padding stripped.
 */

const BASE32_ALPHABET = "abcdefghijklmnopqrstuvwxyz234567";
const VERSION_PREFIX = 0x01;

export async function sha256(data: Uint8Array): Promise<Uint8Array> {
  const copy = new Uint8Array(data); // detach from any larger buffer
  const digest = await crypto.subtle.digest("SHA-256", copy);
  return new Uint8Array(digest);
}

export function base32Lower(bytes: Uint8Array): string {
  let bits = 0;
  let value = 0;
  let out = "";
  for (const byte of bytes) {
    value = (value << 8) | byte;
    bits += 8;
    while (bits >= 5) {
      out += BASE32_ALPHABET[(value >>> (bits - 5)) & 31];
      bits -= 5;
    }
  }
  if (bits > 0) {
    out += BASE32_ALPHABET[(value << (5 - bits)) & 31];
  }
  return out;
}

export function renderContentId(digest: Uint8Array): string {
  if (digest.length !== 32) {
    throw new Error("content id digest must be 32 bytes");
  }
  const prefixed = new Uint8Array(33);
  prefixed[0] = VERSION_PREFIX;
  prefixed.set(digest, 1);
  return base32Lower(prefixed);
}

export async function contentIdOf(data: Uint8Array): Promise<string> {
  return renderContentId(await sha256(data));
}

/** True iff the bytes hash to the claimed content id. */
export async function verifyContentId(data: Uint8Array, contentId: string): Promise<boolean> {
  return (await contentIdOf(data)) === contentId;
}
