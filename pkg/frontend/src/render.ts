/** Write a figure set to disk as SVG or rasterized PNG. */

import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import path from "node:path";

import { Resvg } from "@resvg/resvg-js";

import { FigureSet, buildFig1, buildFig2 } from "./figures.js";

export type Family = "fig1" | "fig2";
export type Format = "svg" | "png";

export interface PlotSpec {
  family: Family;
  csvPath: string;
  outDir: string;
  format: Format;
}

export interface RenderResult {
  files: string[];
  panelCount: number;
  seriesCount: number; // summed over panels
  warning?: string;
}

export function renderFigures(spec: PlotSpec): RenderResult {
  const text = readFileSync(spec.csvPath, "utf-8");
  const set: FigureSet = spec.family === "fig1" ? buildFig1(text) : buildFig2(text);
  if (set.panels.length === 0) {
    return {
      files: [],
      panelCount: 0,
      seriesCount: 0,
      warning: `${spec.csvPath}: no data rows, nothing to render`,
    };
  }
  mkdirSync(spec.outDir, { recursive: true });
  const files: string[] = [];
  for (const panel of set.panels) {
    const svg = set.svg.get(panel.name)!;
    const file = path.join(spec.outDir, `${panel.name}.${spec.format}`);
    if (spec.format === "svg") {
      writeFileSync(file, svg);
    } else {
      const png = new Resvg(svg, { fitTo: { mode: "width", value: 1120 } }).render().asPng();
      writeFileSync(file, png);
    }
    files.push(file);
  }
  const seriesCount = set.panels.reduce((acc, p) => acc + p.seriesLabels.length, 0);
  return { files, panelCount: set.panels.length, seriesCount };
}
