import { createHash } from "node:crypto";

/**
 * A sentence encoder: text in, fixed-dimension vector out. Encoders must be
 * pure functions of their input so output files are digest-stable.
 */
export interface Encoder {
  readonly name: string;
  readonly dimension: number;
  encode(text: string): number[];
}

function tokenize(text: string): string[] {
  return text.toLowerCase().match(/[a-z0-9]+/g) ?? [];
}

function tokenHash(token: string): Buffer {
  return createHash("sha256").update(token, "utf8").digest();
}

/**
 * Feature-hashing bag-of-tokens encoder. Each token lands in a bucket chosen
 * by its SHA-256 digest, with a digest-derived sign, and the result is
 * L2-normalized. Texts sharing tokens land near each other; identical texts
 * produce identical vectors.
 */
export function hashEncoder(dimension: number): Encoder {
  if (!Number.isInteger(dimension) || dimension < 2) {
    throw new Error(`encoder dimension must be an integer >= 2, got ${dimension}`);
  }
  return {
    name: `hash-${dimension}`,
    dimension,
    encode(text: string): number[] {
      const vector = new Array<number>(dimension).fill(0);
      for (const token of tokenize(text)) {
        const digest = tokenHash(token);
        const bucket = digest.readUInt32BE(0) % dimension;
        const sign = digest[4] & 1 ? 1 : -1;
        vector[bucket] += sign;
      }
      if (!vector.some((v) => v !== 0)) {
        // token-free input (e.g. punctuation only): anchor on the raw bytes
        // so the engine never sees a zero vector
        const digest = createHash("sha256").update(text, "utf8").digest();
        vector[digest.readUInt32BE(0) % dimension] = 1;
      }
      const norm = Math.sqrt(vector.reduce((acc, v) => acc + v * v, 0));
      return vector.map((v) => v / norm);
    },
  };
}

const REGISTRY = new Map<string, Encoder>(
  [hashEncoder(64), hashEncoder(128), hashEncoder(384)].map((e) => [e.name, e]),
);

export const DEFAULT_ENCODER = "hash-384";

export function getEncoder(name: string): Encoder {
  const encoder = REGISTRY.get(name);
  if (!encoder) {
    const known = [...REGISTRY.keys()].sort().join(", ");
    throw new Error(`unknown encoder ${JSON.stringify(name)}; available: ${known}`);
  }
  return encoder;
}

export function encoderNames(): string[] {
  return [...REGISTRY.keys()].sort();
}
