#!/usr/bin/env node
/** Figure CLI: plot <figure> --in PATH [--in PATH ...] --out PATH */

import { realpathSync } from "node:fs";
import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";

import { plotChargeDrift, plotProfiles } from "./figures.js";

const USAGE = `usage: plot <figure> --in PATH [--in PATH ...] --out PATH

figures:
  charge-drift   log-scale relative charge drift from a charges CSV
  profiles       overlaid u / phi profiles from one or more state files
`;

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        in: { type: "string", multiple: true },
        out: { type: "string" },
        help: { type: "boolean" },
      },
      allowPositionals: true,
    });
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n${USAGE}`);
    return 2;
  }
  if (parsed.values.help) {
    process.stdout.write(USAGE);
    return 0;
  }
  const figure = parsed.positionals[0];
  const inputs = parsed.values.in ?? [];
  const out = parsed.values.out;
  if (!figure || !out || inputs.length === 0) {
    process.stderr.write(USAGE);
    return 2;
  }
  try {
    switch (figure) {
      case "charge-drift": {
        if (inputs.length !== 1) {
          throw new Error("charge-drift takes exactly one --in CSV");
        }
        const summary = plotChargeDrift(inputs[0], out);
        process.stdout.write(
          `wrote ${out} (${summary.rows} samples, max drift ${summary.maxDrift.toExponential(3)})\n`,
        );
        return 0;
      }
      case "profiles": {
        plotProfiles(inputs, out);
        process.stdout.write(`wrote ${out} (${inputs.length} state files)\n`);
        return 0;
      }
      default:
        process.stderr.write(`error: unknown figure '${figure}'\n${USAGE}`);
        return 2;
    }
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 2;
  }
}

function invokedDirectly(): boolean {
  if (!process.argv[1]) return false;
  try {
    return import.meta.url === pathToFileURL(realpathSync(process.argv[1])).href;
  } catch {
    return false;
  }
}

if (invokedDirectly()) {
  process.exit(main(process.argv.slice(2)));
}
