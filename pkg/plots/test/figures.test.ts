import { mkdtempSync, readFileSync, statSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { main } from "../src/cli.js";
import { plotChargeDrift, plotProfiles } from "../src/figures.js";
import { parseStateFile } from "../src/state.js";

const FIXTURES = join(__dirname, "fixtures");
const scratch = () => mkdtempSync(join(tmpdir(), "cliffkdv-plots-"));

const PNG_MAGIC = Buffer.from([0x89, 0x50, 0x4e, 0x47]);

describe("parseStateFile", () => {
  it("reads a serialized soliton state", () => {
    const state = parseStateFile(readFileSync(join(FIXTURES, "soliton_t0.csv"), "utf8"));
    expect(state.nPoints).toBe(512);
    expect(state.k).toBe(0);
    expect(Math.max(...state.u)).toBeCloseTo(3.0, 6);
  });

  it("reads component fields", () => {
    const state = parseStateFile(
      readFileSync(join(FIXTURES, "mixed_c1_final.csv"), "utf8"),
    );
    expect(state.k).toBe(1);
    expect(state.t).toBe(1);
    expect(state.phi[0]).toHaveLength(512);
  });

  it("rejects truncated or mismatched files", () => {
    expect(() => parseStateFile("nonsense")).toThrow(/truncated/);
    const text = readFileSync(join(FIXTURES, "soliton_t0.csv"), "utf8");
    const cut = text.split("\n").slice(0, 100).join("\n");
    expect(() => parseStateFile(cut)).toThrow(/sample rows/);
  });
});

describe("plotChargeDrift", () => {
  it("renders the pinned run with drift at or below 1e-8", () => {
    const dir = scratch();
    const out = join(dir, "drift.png");
    const summary = plotChargeDrift(join(FIXTURES, "mixed_c1_charges.csv"), out);
    expect(summary.maxDrift).toBeLessThanOrEqual(1e-8);
    const bytes = readFileSync(out);
    expect(bytes.subarray(0, 4).equals(PNG_MAGIC)).toBe(true);
    expect(statSync(out).size).toBeGreaterThan(5000);
  });

  it("renders constant-charge input at the numerical floor", () => {
    const dir = scratch();
    const csv = join(dir, "flat.csv");
    const head = "t,h1,h3,h5,nonlocal,l2,sobolev_h1\n";
    writeFileSync(csv, head + "0,1,2,3,4,2,5\n0.5,1,2,3,4,2,5\n1,1,2,3,4,2,5\n");
    const summary = plotChargeDrift(csv, join(dir, "flat.png"));
    expect(summary.maxDrift).toBe(0);
  });

  it("is idempotent for fixed inputs", () => {
    const dir = scratch();
    const a = join(dir, "a.png");
    const b = join(dir, "b.png");
    plotChargeDrift(join(FIXTURES, "mixed_c1_charges.csv"), a);
    plotChargeDrift(join(FIXTURES, "mixed_c1_charges.csv"), b);
    expect(readFileSync(a).equals(readFileSync(b))).toBe(true);
  });

  it("rejects a single-row CSV", () => {
    const dir = scratch();
    const csv = join(dir, "one.csv");
    writeFileSync(csv, "t,h1,h3,h5,nonlocal,l2,sobolev_h1\n0,1,2,3,4,2,5\n");
    expect(() => plotChargeDrift(csv, join(dir, "x.png"))).toThrow(/at least 2/);
  });
});

describe("plotProfiles", () => {
  it("overlays translated soliton snapshots", () => {
    const dir = scratch();
    const out = join(dir, "profiles.png");
    plotProfiles(
      [join(FIXTURES, "soliton_t0.csv"), join(FIXTURES, "soliton_t1.csv")],
      out,
    );
    expect(readFileSync(out).subarray(0, 4).equals(PNG_MAGIC)).toBe(true);
  });

  it("renders a flat line for the zero state", () => {
    const dir = scratch();
    plotProfiles([join(FIXTURES, "zero.csv")], join(dir, "zero.png"));
    expect(statSync(join(dir, "zero.png")).size).toBeGreaterThan(2000);
  });

  it("renders the collision sequence", () => {
    const dir = scratch();
    plotProfiles(
      ["before", "during", "after"].map((n) => join(FIXTURES, `collision_${n}.csv`)),
      join(dir, "collision.png"),
    );
    expect(statSync(join(dir, "collision.png")).size).toBeGreaterThan(5000);
  });

  it("requires at least one input", () => {
    expect(() => plotProfiles([], "x.png")).toThrow(/at least one/);
  });
});

describe("cli", () => {
  it("runs charge-drift end to end", () => {
    const dir = scratch();
    const out = join(dir, "cli.png");
    const code = main([
      "charge-drift", "--in", join(FIXTURES, "mixed_c1_charges.csv"), "--out", out,
    ]);
    expect(code).toBe(0);
    expect(readFileSync(out).subarray(0, 4).equals(PNG_MAGIC)).toBe(true);
  });

  it("runs profiles end to end", () => {
    const dir = scratch();
    const code = main([
      "profiles",
      "--in", join(FIXTURES, "soliton_t0.csv"),
      "--in", join(FIXTURES, "soliton_t1.csv"),
      "--out", join(dir, "p.png"),
    ]);
    expect(code).toBe(0);
  });

  it("fails with a diagnostic on malformed input", () => {
    const dir = scratch();
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "definitely,not,charges\n1,2,3\n");
    const code = main(["charge-drift", "--in", bad, "--out", join(dir, "x.png")]);
    expect(code).toBe(2);
  });

  it("fails on unknown figures and missing flags", () => {
    expect(main(["nope", "--in", "a", "--out", "b"])).toBe(2);
    expect(main(["charge-drift"])).toBe(2);
    expect(main([])).toBe(2);
  });
});
