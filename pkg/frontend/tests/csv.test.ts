import { describe, expect, it } from "vitest";

import { SchemaError, distinct, mean, num, parseTable, requireColumns } from "../src/csv.js";

describe("parseTable", () => {
  it("reads headered rows", () => {
    const t = parseTable("a,b\n1,x\n2,y\n");
    expect(t.columns).toEqual(["a", "b"]);
    expect(t.rows).toEqual([
      { a: "1", b: "x" },
      { a: "2", b: "y" },
    ]);
  });

  it("treats blank input as an empty table", () => {
    expect(parseTable("").rows).toEqual([]);
    expect(parseTable("  \n ").rows).toEqual([]);
  });

  it("header-only input has columns but no rows", () => {
    const t = parseTable("a,b\n");
    expect(t.columns).toEqual(["a", "b"]);
    expect(t.rows).toEqual([]);
  });
});

describe("requireColumns", () => {
  it("names every missing column", () => {
    const t = parseTable("a,b\n1,2\n");
    expect(() => requireColumns(t, ["a", "ratio", "k"], "fig1")).toThrowError(
      /fig1: missing column\(s\) ratio, k/,
    );
  });

  it("passes when all columns exist", () => {
    const t = parseTable("a,b\n1,2\n");
    expect(() => requireColumns(t, ["a"], "fig1")).not.toThrow();
  });

  it("does not complain about empty tables", () => {
    expect(() => requireColumns(parseTable(""), ["ratio"], "fig1")).not.toThrow();
  });
});

describe("num", () => {
  it("parses and rejects", () => {
    expect(num({ r: "1.5" }, "r")).toBe(1.5);
    expect(() => num({ r: "oops" }, "r")).toThrow(SchemaError);
  });
});

describe("helpers", () => {
  it("mean", () => {
    expect(mean([1, 2, 3])).toBe(2);
  });

  it("distinct sorts numerically when possible", () => {
    const rows = [{ k: "10" }, { k: "2" }, { k: "10" }, { k: "1" }];
    expect(distinct(rows, "k")).toEqual(["1", "2", "10"]);
  });

  it("distinct falls back to lexicographic", () => {
    const rows = [{ c: "plane" }, { c: "line" }, { c: "plane" }];
    expect(distinct(rows, "c")).toEqual(["line", "plane"]);
  });
});
