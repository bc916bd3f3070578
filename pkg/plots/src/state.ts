/** Parsing for serialized field states: JSON header line + columnar CSV. */

export interface StateFile {
  length: number;
  nPoints: number;
  k: number;
  t: number;
  lambda: number;
  x: number[];
  u: number[];
  phi: number[][];
}

export function parseStateFile(text: string): StateFile {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length < 3) {
    throw new Error("state file truncated: expected header, columns and samples");
  }
  let header: Record<string, unknown>;
  try {
    header = JSON.parse(lines[0]);
  } catch (err) {
    throw new Error(`state file header is not valid JSON: ${(err as Error).message}`);
  }
  for (const key of ["L", "n_points", "K", "t", "lambda"]) {
    if (!(key in header)) {
      throw new Error(`state header is missing '${key}'`);
    }
  }
  const nPoints = Number(header.n_points);
  const k = Number(header.K);
  const columns = lines[1].split(",");
  if (columns[0] !== "x" || columns[1] !== "u" || columns.length !== 2 + k) {
    throw new Error(`unexpected state columns: ${lines[1]}`);
  }
  const body = lines.slice(2);
  if (body.length !== nPoints) {
    throw new Error(`state file has ${body.length} sample rows, expected ${nPoints}`);
  }
  const x: number[] = [];
  const u: number[] = [];
  const phi: number[][] = Array.from({ length: k }, () => []);
  for (const line of body) {
    const parts = line.split(",").map(Number);
    if (parts.length !== 2 + k || parts.some((v) => !Number.isFinite(v))) {
      throw new Error(`bad state row: ${line}`);
    }
    x.push(parts[0]);
    u.push(parts[1]);
    for (let i = 0; i < k; i++) {
      phi[i].push(parts[2 + i]);
    }
  }
  return {
    length: Number(header.L),
    nPoints,
    k,
    t: Number(header.t),
    lambda: Number(header.lambda),
    x,
    u,
    phi,
  };
}
