import { readFileSync } from "node:fs";
import { z } from "zod";

const headerSchema = z.object({
  template_version: z.string(),
  dataset: z.string().optional(),
});

const recordSchema = z.object({
  key: z.string().min(1),
  text: z.string(),
});

export interface ContextFile {
  templateVersion: string;
  dataset?: string;
  records: Array<{ key: string; text: string }>;
}

/**
 * Reads the engine's context handoff file: one JSON header line followed by
 * one {key, text} JSON record per line.
 */
export function readContextFile(path: string): ContextFile {
  const lines = readFileSync(path, "utf8").split("\n");
  if (lines.length === 0 || lines[0].trim() === "") {
    throw new Error(`context file ${path} is empty`);
  }
  const header = headerSchema.parse(JSON.parse(lines[0]));
  const records: Array<{ key: string; text: string }> = [];
  const seen = new Set<string>();
  for (let i = 1; i < lines.length; i++) {
    const raw = lines[i].trim();
    if (raw === "") continue;
    let record;
    try {
      record = recordSchema.parse(JSON.parse(raw));
    } catch (error) {
      throw new Error(`${path}:${i + 1}: bad context record: ${String(error)}`);
    }
    if (seen.has(record.key)) {
      throw new Error(`${path}:${i + 1}: duplicate key ${JSON.stringify(record.key)}`);
    }
    seen.add(record.key);
    records.push(record);
  }
  return {
    templateVersion: header.template_version,
    dataset: header.dataset,
    records,
  };
}
