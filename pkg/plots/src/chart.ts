/** Minimal deterministic line-chart renderer on a raster canvas. */

import { createCanvas, SKRSContext2D } from "@napi-rs/canvas";

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color: string;
  dash?: number[];
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  yScale?: "linear" | "log10";
  width?: number;
  height?: number;
  /** log-scale clamp for zero or negative values */
  logFloor?: number;
  /** extra horizontal rule (e.g. a tolerance line), in data units */
  hline?: number;
}

export const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
  "#17becf", "#7f7f7f",
];

const FONT = "DejaVu Sans, sans-serif";
const MARGIN = { left: 86, right: 24, top: 46, bottom: 56 };

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}

/** Round tick step to a 1/2/5 decade multiple. */
function niceStep(span: number, target: number): number {
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const m of [1, 2, 5, 10]) {
    if (raw <= m * mag) return m * mag;
  }
  return 10 * mag;
}

function linearTicks(lo: number, hi: number, target = 6): number[] {
  if (hi <= lo) return [lo];
  const step = niceStep(hi - lo, target);
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * step; v += step) {
    ticks.push(Math.abs(v) < 1e-12 * step ? 0 : v);
  }
  return ticks;
}

function formatTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(0).replace("+", "");
  return String(Number(v.toPrecision(6)));
}

export function renderChart(opts: ChartOptions): Buffer {
  const width = opts.width ?? 960;
  const height = opts.height ?? 600;
  const yScale = opts.yScale ?? "linear";
  const logFloor = opts.logFloor ?? 1e-17;

  const canvas = createCanvas(width, height);
  const ctx = canvas.getContext("2d");
  ctx.fillStyle = "#ffffff";
  ctx.fillRect(0, 0, width, height);

  const toY = (v: number) => (yScale === "log10" ? Math.log10(Math.max(v, logFloor)) : v);
  const allX = opts.series.flatMap((s) => s.x);
  const allY = opts.series.flatMap((s) => s.y.map(toY));
  if (opts.hline !== undefined) allY.push(toY(opts.hline));
  let [xLo, xHi] = extent(allX);
  let [yLo, yHi] = extent(allY);
  if (xHi === xLo) [xLo, xHi] = [xLo - 1, xHi + 1];
  if (yHi === yLo) [yLo, yHi] = [yLo - 1, yHi + 1];
  if (yScale === "log10") {
    yLo = Math.floor(yLo);
    yHi = Math.ceil(yHi);
    if (yHi === yLo) yHi = yLo + 1;
  } else {
    const pad = 0.05 * (yHi - yLo);
    yLo -= pad;
    yHi += pad;
  }

  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const px = (x: number) => MARGIN.left + ((x - xLo) / (xHi - xLo)) * plotW;
  const py = (y: number) => MARGIN.top + (1 - (y - yLo) / (yHi - yLo)) * plotH;

  // gridlines and ticks
  ctx.font = `12px ${FONT}`;
  ctx.strokeStyle = "#dddddd";
  ctx.fillStyle = "#333333";
  ctx.lineWidth = 1;
  const xTicks = linearTicks(xLo, xHi);
  for (const t of xTicks) {
    const gx = px(t);
    ctx.beginPath();
    ctx.moveTo(gx, MARGIN.top);
    ctx.lineTo(gx, MARGIN.top + plotH);
    ctx.stroke();
    ctx.textAlign = "center";
    ctx.fillText(formatTick(t), gx, MARGIN.top + plotH + 18);
  }
  const yTicks = yScale === "log10"
    ? decadeTicks(yLo, yHi)
    : linearTicks(yLo, yHi);
  for (const t of yTicks) {
    const gy = py(t);
    ctx.beginPath();
    ctx.moveTo(MARGIN.left, gy);
    ctx.lineTo(MARGIN.left + plotW, gy);
    ctx.stroke();
    ctx.textAlign = "right";
    const label = yScale === "log10" ? `1e${t}` : formatTick(t);
    ctx.fillText(label, MARGIN.left - 8, gy + 4);
  }

  // frame
  ctx.strokeStyle = "#333333";
  ctx.strokeRect(MARGIN.left, MARGIN.top, plotW, plotH);

  // optional tolerance rule
  if (opts.hline !== undefined) {
    const gy = py(toY(opts.hline));
    ctx.strokeStyle = "#999999";
    ctx.setLineDash([6, 4]);
    ctx.beginPath();
    ctx.moveTo(MARGIN.left, gy);
    ctx.lineTo(MARGIN.left + plotW, gy);
    ctx.stroke();
    ctx.setLineDash([]);
  }

  // series
  for (const s of opts.series) {
    ctx.strokeStyle = s.color;
    ctx.lineWidth = 1.8;
    ctx.setLineDash(s.dash ?? []);
    ctx.beginPath();
    for (let i = 0; i < s.x.length; i++) {
      const gx = px(s.x[i]);
      const gy = py(toY(s.y[i]));
      if (i === 0) ctx.moveTo(gx, gy);
      else ctx.lineTo(gx, gy);
    }
    ctx.stroke();
    ctx.setLineDash([]);
  }

  drawLegend(ctx, opts.series, MARGIN.left + plotW, MARGIN.top);

  // titles
  ctx.fillStyle = "#000000";
  ctx.font = `16px ${FONT}`;
  ctx.textAlign = "center";
  ctx.fillText(opts.title, MARGIN.left + plotW / 2, 26);
  ctx.font = `13px ${FONT}`;
  ctx.fillText(opts.xLabel, MARGIN.left + plotW / 2, height - 14);
  ctx.save();
  ctx.translate(20, MARGIN.top + plotH / 2);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText(opts.yLabel, 0, 0);
  ctx.restore();

  return canvas.toBuffer("image/png");
}

function decadeTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  const span = hi - lo;
  const step = span > 14 ? Math.ceil(span / 14) : 1;
  for (let d = lo; d <= hi; d += step) ticks.push(d);
  return ticks;
}

function drawLegend(ctx: SKRSContext2D, series: Series[], right: number, top: number): void {
  ctx.font = `12px DejaVu Sans, sans-serif`;
  const entryH = 18;
  const widest = Math.max(...series.map((s) => ctx.measureText(s.label).width));
  const boxW = widest + 46;
  const boxH = series.length * entryH + 10;
  const x0 = right - boxW - 10;
  const y0 = top + 10;
  ctx.fillStyle = "rgba(255,255,255,0.85)";
  ctx.fillRect(x0, y0, boxW, boxH);
  ctx.strokeStyle = "#999999";
  ctx.lineWidth = 1;
  ctx.strokeRect(x0, y0, boxW, boxH);
  series.forEach((s, i) => {
    const yy = y0 + 14 + i * entryH;
    ctx.strokeStyle = s.color;
    ctx.lineWidth = 2;
    ctx.setLineDash(s.dash ?? []);
    ctx.beginPath();
    ctx.moveTo(x0 + 8, yy - 4);
    ctx.lineTo(x0 + 34, yy - 4);
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.fillStyle = "#000000";
    ctx.textAlign = "left";
    ctx.fillText(s.label, x0 + 40, yy);
  });
}
