import { mkdtempSync, readFileSync, readdirSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import path from "node:path";
import { fileURLToPath } from "node:url";

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { runCli } from "../src/cli.js";

const FIXTURES = fileURLToPath(new URL("fixtures", import.meta.url));
const EXP1 = path.join(FIXTURES, "exp1_small.csv");
const EXP2 = path.join(FIXTURES, "exp2_small.csv");

let dir: string;
beforeEach(() => {
  dir = mkdtempSync(path.join(tmpdir(), "plotkit-"));
  vi.spyOn(console, "log").mockImplementation(() => {});
  vi.spyOn(console, "warn").mockImplementation(() => {});
  vi.spyOn(console, "error").mockImplementation(() => {});
});
afterEach(() => {
  vi.restoreAllMocks();
});

describe("plotkit cli", () => {
  it("renders fig1 svgs", () => {
    const rc = runCli(["fig1", "--csv", EXP1, "--out", dir]);
    expect(rc).toBe(0);
    expect(readdirSync(dir).sort()).toEqual(["fig1_line.svg", "fig1_plane.svg"]);
    const svg = readFileSync(path.join(dir, "fig1_line.svg"), "utf-8");
    expect(svg.startsWith("<svg")).toBe(true);
  });

  it("renders fig2 svgs", () => {
    const rc = runCli(["fig2", "--csv", EXP2, "--out", dir]);
    expect(rc).toBe(0);
    expect(readdirSync(dir).sort()).toEqual(["fig2_line_k1.svg", "fig2_line_k2.svg"]);
  });

  it("rerenders byte-identically", () => {
    runCli(["fig1", "--csv", EXP1, "--out", dir]);
    const first = readFileSync(path.join(dir, "fig1_line.svg"));
    runCli(["fig1", "--csv", EXP1, "--out", dir]);
    expect(readFileSync(path.join(dir, "fig1_line.svg")).equals(first)).toBe(true);
  });

  it("writes pngs on request", () => {
    const rc = runCli(["fig1", "--csv", EXP1, "--out", dir, "--format", "png"]);
    expect(rc).toBe(0);
    const png = readFileSync(path.join(dir, "fig1_line.png"));
    expect([...png.subarray(0, 4)]).toEqual([0x89, 0x50, 0x4e, 0x47]);
  });

  it("empty csv is a warning, not an error", () => {
    const empty = path.join(dir, "empty.csv");
    writeFileSync(empty, "experiment,class,instance_id,seed,k,algorithm,cost,opt_cost,ratio\n");
    const rc = runCli(["fig1", "--csv", empty, "--out", path.join(dir, "figs")]);
    expect(rc).toBe(0);
    expect(console.warn).toHaveBeenCalledOnce();
    expect(() => readdirSync(path.join(dir, "figs"))).toThrow(); // nothing written
  });

  it("missing column exits 1 with a schema message", () => {
    const bad = path.join(dir, "bad.csv");
    writeFileSync(bad, "experiment,class,k,algorithm\nexp1,line,1,ours\n");
    const rc = runCli(["fig1", "--csv", bad, "--out", dir]);
    expect(rc).toBe(1);
    expect(vi.mocked(console.error).mock.calls[0][0]).toMatch(/schema error: .*ratio/);
  });

  it("usage errors exit 2", () => {
    expect(runCli([])).toBe(2);
    expect(runCli(["fig3", "--csv", EXP1, "--out", dir])).toBe(2);
    expect(runCli(["fig1", "--out", dir])).toBe(2);
    expect(runCli(["fig1", "--csv", EXP1, "--out", dir, "--format", "bmp"])).toBe(2);
  });

  it("unreadable csv exits 1", () => {
    expect(runCli(["fig1", "--csv", path.join(dir, "nope.csv"), "--out", dir])).toBe(1);
  });
});
