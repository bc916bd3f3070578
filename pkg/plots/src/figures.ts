/** The two figure builders: charge-drift curves and profile overlays. */

import { readFileSync, writeFileSync } from "node:fs";

import { PALETTE, Series, renderChart } from "./chart.js";
import { driftSeries, parseChargesCsv } from "./charges.js";
import { parseStateFile } from "./state.js";

const DRIFT_COLUMNS = ["h1", "h3", "h5", "nonlocal"];

export interface DriftSummary {
  rows: number;
  maxDrift: number;
}

/**
 * Log-scale relative-drift curves |H(t)-H(0)|/(1+|H(0)|) for the four
 * monitored charges, with a 1e-8 tolerance rule for orientation.
 */
export function plotChargeDrift(csvPath: string, outPath: string): DriftSummary {
  const table = parseChargesCsv(readFileSync(csvPath, "utf8"));
  const t = table.data.get("t")!;
  let maxDrift = 0;
  const series: Series[] = DRIFT_COLUMNS.map((name, i) => {
    const drift = driftSeries(table, name);
    maxDrift = Math.max(maxDrift, ...drift);
    return { label: name, x: t, y: drift, color: PALETTE[i % PALETTE.length] };
  });
  const png = renderChart({
    title: "Relative charge drift",
    xLabel: "t",
    yLabel: "|H(t) - H(0)| / (1 + |H(0)|)",
    series,
    yScale: "log10",
    hline: 1e-8,
  });
  writeFileSync(outPath, png);
  return { rows: table.rows, maxDrift };
}

/** Overlaid u and phi_i profiles from one or more state files. */
export function plotProfiles(statePaths: string[], outPath: string): void {
  if (statePaths.length === 0) {
    throw new Error("profiles figure needs at least one state file");
  }
  const series: Series[] = [];
  statePaths.forEach((path, idx) => {
    const state = parseStateFile(readFileSync(path, "utf8"));
    const color = PALETTE[idx % PALETTE.length];
    const tLabel = `t=${state.t}`;
    series.push({ label: `u (${tLabel})`, x: state.x, y: state.u, color });
    state.phi.forEach((phi, i) => {
      series.push({
        label: `phi_${i + 1} (${tLabel})`,
        x: state.x,
        y: phi,
        color,
        dash: [6 + 3 * i, 4],
      });
    });
  });
  const png = renderChart({
    title: "Field profiles",
    xLabel: "x",
    yLabel: "field value",
    series,
  });
  writeFileSync(outPath, png);
}
