#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { encodeFile } from "./encodeFile.js";
import { DEFAULT_ENCODER, encoderNames } from "./encoders.js";

export async function main(argv: string[]): Promise<number> {
  let exitCode = 0;
  await yargs(argv)
    .scriptName("embed-export")
    .command(
      "encode",
      "encode a context file into a vector file",
      (cmd) =>
        cmd
          .option("in", { type: "string", demandOption: true, describe: "context file path" })
          .option("out", { type: "string", demandOption: true, describe: "vector file path" })
          .option("model", {
            type: "string",
            default: DEFAULT_ENCODER,
            describe: `encoder name (${encoderNames().join(", ")})`,
          })
          .option("batch-size", { type: "number", default: 64 })
          .option("layout", {
            choices: ["text", "binary"] as const,
            default: "text" as const,
          }),
      (args) => {
        try {
          const result = encodeFile({
            inputPath: args.in,
            outputPath: args.out,
            encoderName: args.model,
            batchSize: args["batch-size"],
            layout: args.layout,
          });
          console.log(
            `wrote ${args.out} (${result.records} vectors, dimension ${result.dimension}, ` +
              `encoder ${result.encoderTag})`,
          );
        } catch (error) {
          console.error(`error: ${error instanceof Error ? error.message : String(error)}`);
          exitCode = 1;
        }
      },
    )
    .demandCommand(1)
    .strict()
    .fail((msg, err) => {
      console.error(`error: ${msg ?? err?.message}`);
      exitCode = 2;
      process.exitCode = 2;
    })
    .parseAsync();
  return exitCode;
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}
