/** Parsing and drift math for the simulator's charge CSV output. */

export interface ChargeTable {
  columns: string[];
  data: Map<string, number[]>;
  rows: number;
}

const REQUIRED_COLUMNS = ["t", "h1", "h3", "h5", "nonlocal", "l2", "sobolev_h1"];

/**
 * Parse a charges CSV: optional leading `# ...` comment lines, a mandatory
 * header row, then one numeric row per sample.
 */
export function parseChargesCsv(text: string): ChargeTable {
  const lines = text
    .split(/\r?\n/)
    .filter((line) => line.length > 0 && !line.startsWith("#"));
  if (lines.length === 0) {
    throw new Error("charges CSV is empty");
  }
  const columns = lines[0].split(",");
  for (const required of REQUIRED_COLUMNS) {
    if (!columns.includes(required)) {
      throw new Error(`charges CSV is missing the '${required}' column`);
    }
  }
  const data = new Map<string, number[]>(columns.map((c) => [c, []]));
  for (const line of lines.slice(1)) {
    const parts = line.split(",");
    if (parts.length !== columns.length) {
      throw new Error(
        `charges CSV row has ${parts.length} fields, expected ${columns.length}: ${line}`,
      );
    }
    parts.forEach((raw, i) => {
      const value = Number(raw);
      if (!Number.isFinite(value)) {
        throw new Error(`charges CSV contains a non-numeric value: '${raw}'`);
      }
      data.get(columns[i])!.push(value);
    });
  }
  const rows = lines.length - 1;
  if (rows < 2) {
    throw new Error(`charges CSV needs at least 2 sample rows, got ${rows}`);
  }
  return { columns, data, rows };
}

/** Relative drift series |H(t) - H(0)| / (1 + |H(0)|). */
export function driftSeries(table: ChargeTable, column: string): number[] {
  const values = table.data.get(column);
  if (!values) {
    throw new Error(`no '${column}' column in charges CSV`);
  }
  const ref = values[0];
  return values.map((v) => Math.abs(v - ref) / (1 + Math.abs(ref)));
}
