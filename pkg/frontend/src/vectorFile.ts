import { mkdtempSync, renameSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";

export type Layout = "text" | "binary";

export interface VectorRecord {
  key: string;
  values: number[];
}

export interface VectorFileHeader {
  dimension: number;
  encoderTag: string;
  templateVersion: string;
}

function headerLine(layout: Layout, header: VectorFileHeader): string {
  // keys sorted to match the engine's own writer byte for byte
  return JSON.stringify({
    dimension: header.dimension,
    encoder_tag: header.encoderTag,
    layout,
    template_version: header.templateVersion,
  });
}

function textBody(records: VectorRecord[]): string {
  return records.map((r) => `${r.key}\t${r.values.map(String).join(" ")}`).join("\n");
}

function binaryBody(records: VectorRecord[], dimension: number): Buffer {
  const chunks: Buffer[] = [];
  for (const record of records) {
    const key = Buffer.from(record.key, "utf8");
    const prefix = Buffer.alloc(4);
    prefix.writeUInt32LE(key.length, 0);
    const payload = Buffer.alloc(4 * dimension);
    record.values.forEach((v, i) => payload.writeFloatLE(v, 4 * i));
    chunks.push(prefix, key, payload);
  }
  return Buffer.concat(chunks);
}

/**
 * Writes a vector file in the scoring engine's format: a one-line JSON
 * header naming the layout, then one record per key. Records are sorted by
 * key and written atomically (temp file + rename) so a crashed run never
 * leaves a partial file behind.
 */
export function writeVectorFile(
  path: string,
  header: VectorFileHeader,
  records: VectorRecord[],
  layout: Layout = "text",
): void {
  for (const record of records) {
    if (record.values.length !== header.dimension) {
      throw new Error(
        `vector for ${JSON.stringify(record.key)} has dimension ` +
          `${record.values.length}, expected ${header.dimension}`,
      );
    }
  }
  const sorted = [...records].sort((a, b) => (a.key < b.key ? -1 : a.key > b.key ? 1 : 0));
  const head = headerLine(layout, header);
  let content: Buffer;
  if (layout === "text") {
    const body = textBody(sorted);
    content = Buffer.from(body === "" ? `${head}\n` : `${head}\n${body}\n`, "utf8");
  } else {
    content = Buffer.concat([Buffer.from(`${head}\n`, "utf8"), binaryBody(sorted, header.dimension)]);
  }
  const scratch = mkdtempSync(join(tmpdir(), "embed-export-"));
  const temp = join(scratch, "vectors.part");
  try {
    writeFileSync(temp, content);
    try {
      renameSync(temp, path);
    } catch (error: unknown) {
      if ((error as NodeJS.ErrnoException).code !== "EXDEV") throw error;
      // cross-device: fall back to a sibling temp file in the target directory
      const sibling = join(dirname(path), `.vectors-${process.pid}.part`);
      writeFileSync(sibling, content);
      renameSync(sibling, path);
    }
  } finally {
    rmSync(scratch, { recursive: true, force: true });
  }
}
