/**
 * Minimal deterministic SVG line charts.
 *
 * No fonts are embedded and no timestamps or random ids appear in the
 * output, so identical chart specs always serialize to identical bytes.
 */

export interface Point {
  x: number;
  y: number;
}

export interface Series {
  label: string;
  color: string;
  points: Point[];
  dash?: string; // stroke-dasharray
}

export interface ChartSpec {
  title: string;
  subtitle?: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  /** Exact x tick positions; defaults to nice ticks over the data range. */
  xTicks?: number[];
}

export const PALETTE = [
  "#4361ee",
  "#e63946",
  "#2d6a4f",
  "#f4a261",
  "#9d4edd",
  "#577590",
  "#b5838d",
];

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((n) => n >= rough) ?? rough;
  const start = Math.ceil(min / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= max + step * 0.01; v += step) ticks.push(v);
  return ticks;
}

function fmt(v: number): string {
  if (Math.abs(v - Math.round(v)) < 1e-9) return String(Math.round(v));
  return String(Number(v.toPrecision(4)));
}

export function lineChart(spec: ChartSpec): string {
  const W = 560;
  const H = 340;
  const ml = 56;
  const mr = 16;
  const mt = spec.subtitle ? 40 : 30;
  const mb = 46;
  const pw = W - ml - mr;
  const ph = H - mt - mb;

  const xs = spec.series.flatMap((s) => s.points.map((p) => p.x));
  const ys = spec.series.flatMap((s) => s.points.map((p) => p.y));
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  // keep y = 1 (the optimal ratio) visible as a baseline
  const yMin = Math.min(1, ...ys);
  const yMax = Math.max(...ys) * 1.05;
  const xOf = (v: number) => ml + ((v - xMin) / (xMax - xMin || 1)) * pw;
  const yOf = (v: number) => mt + ph - ((v - yMin) / (yMax - yMin || 1)) * ph;

  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" font-family="Helvetica, Arial, sans-serif">\n`;
  s += `<rect width="${W}" height="${H}" fill="#fff"/>\n`;
  s += `<text x="${ml}" y="16" font-size="12" font-weight="600" fill="#222">${esc(spec.title)}</text>\n`;
  if (spec.subtitle) {
    s += `<text x="${ml}" y="30" font-size="9" fill="#888">${esc(spec.subtitle)}</text>\n`;
  }

  // grid + y ticks
  const yTicks = niceTicks(yMin, yMax, 6);
  for (const v of yTicks) {
    const y = yOf(v).toFixed(1);
    s += `<line x1="${ml}" y1="${y}" x2="${ml + pw}" y2="${y}" stroke="#eee" stroke-width="0.6"/>\n`;
    s += `<text x="${ml - 6}" y="${(yOf(v) + 3).toFixed(1)}" text-anchor="end" font-size="9" fill="#555">${esc(fmt(v))}</text>\n`;
  }

  // x ticks
  const xTicks = spec.xTicks ?? niceTicks(xMin, xMax, 8);
  for (const v of xTicks) {
    const x = xOf(v).toFixed(1);
    s += `<line x1="${x}" y1="${mt + ph}" x2="${x}" y2="${mt + ph + 4}" stroke="#333" stroke-width="0.6"/>\n`;
    s += `<text x="${x}" y="${mt + ph + 15}" text-anchor="middle" font-size="9" fill="#555">${esc(fmt(v))}</text>\n`;
  }

  // series
  for (const sr of spec.series) {
    const pts = sr.points
      .map((p) => `${xOf(p.x).toFixed(1)},${yOf(p.y).toFixed(1)}`)
      .join(" ");
    const dash = sr.dash ? ` stroke-dasharray="${sr.dash}"` : "";
    s += `<polyline fill="none" stroke="${sr.color}" stroke-width="1.4"${dash} points="${pts}"/>\n`;
    for (const p of sr.points) {
      s += `<circle cx="${xOf(p.x).toFixed(1)}" cy="${yOf(p.y).toFixed(1)}" r="2" fill="${sr.color}"/>\n`;
    }
  }

  // axes frame
  s += `<line x1="${ml}" y1="${mt}" x2="${ml}" y2="${mt + ph}" stroke="#333" stroke-width="0.8"/>\n`;
  s += `<line x1="${ml}" y1="${mt + ph}" x2="${ml + pw}" y2="${mt + ph}" stroke="#333" stroke-width="0.8"/>\n`;
  s += `<text x="${ml + pw / 2}" y="${H - 8}" text-anchor="middle" font-size="10" fill="#333">${esc(spec.xLabel)}</text>\n`;
  s += `<text x="14" y="${mt + ph / 2}" text-anchor="middle" font-size="10" fill="#333" transform="rotate(-90,14,${mt + ph / 2})">${esc(spec.yLabel)}</text>\n`;

  // legend, top-left inside the plot area
  const lx = ml + 10;
  let ly = mt + 12;
  const legendW = Math.max(...spec.series.map((sr) => sr.label.length)) * 5.5 + 26;
  s += `<rect x="${lx - 5}" y="${ly - 9}" width="${legendW}" height="${spec.series.length * 13 + 5}" rx="2" fill="#fff" fill-opacity="0.85" stroke="#ddd" stroke-width="0.5"/>\n`;
  for (const sr of spec.series) {
    const dash = sr.dash ? ` stroke-dasharray="${sr.dash}"` : "";
    s += `<line x1="${lx}" y1="${ly}" x2="${lx + 14}" y2="${ly}" stroke="${sr.color}" stroke-width="1.4"${dash}/>\n`;
    s += `<text x="${lx + 18}" y="${ly + 3}" font-size="9" fill="#444">${esc(sr.label)}</text>\n`;
    ly += 13;
  }

  s += `</svg>\n`;
  return s;
}
