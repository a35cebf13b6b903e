import { readContextFile } from "./contextFile.js";
import { getEncoder } from "./encoders.js";
import { Layout, VectorRecord, writeVectorFile } from "./vectorFile.js";

export interface EncodeJob {
  inputPath: string;
  outputPath: string;
  encoderName: string;
  batchSize: number;
  layout?: Layout;
}

export interface EncodeResult {
  records: number;
  dimension: number;
  encoderTag: string;
}

/**
 * Encodes every record of a context file and writes the engine's vector
 * file. All records are encoded before anything is written, so a failing
 * record aborts the job without partial output.
 */
export function encodeFile(job: EncodeJob): EncodeResult {
  if (!Number.isInteger(job.batchSize) || job.batchSize < 1) {
    throw new Error(`batch size must be a positive integer, got ${job.batchSize}`);
  }
  const encoder = getEncoder(job.encoderName);
  const context = readContextFile(job.inputPath);

  const vectors: VectorRecord[] = [];
  for (let start = 0; start < context.records.length; start += job.batchSize) {
    const batch = context.records.slice(start, start + job.batchSize);
    for (const record of batch) {
      vectors.push({ key: record.key, values: encoder.encode(record.text) });
    }
  }

  writeVectorFile(
    job.outputPath,
    {
      dimension: encoder.dimension,
      encoderTag: encoder.name,
      templateVersion: context.templateVersion,
    },
    vectors,
    job.layout ?? "text",
  );
  return {
    records: vectors.length,
    dimension: encoder.dimension,
    encoderTag: encoder.name,
  };
}
