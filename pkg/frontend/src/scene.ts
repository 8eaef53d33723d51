/**
 * Figure scene model shared by the SVG serializer and the PNG rasterizer.
 * A figure is a grid of panels; each panel owns its axes and data marks in
 * data coordinates.  Layout and scales are resolved here so both back ends
 * draw the identical geometry.
 */

export interface XY {
  x: number;
  y: number;
}

export type Mark =
  | { kind: 'line'; points: XY[]; color: string; width?: number; dash?: boolean }
  | { kind: 'scatter'; points: XY[]; color: string; radius?: number }
  | { kind: 'stem'; points: XY[]; color: string; base?: number };

export interface Panel {
  title?: string;
  xLabel: string;
  yLabel: string;
  marks: Mark[];
  xRange?: [number, number];
  yRange?: [number, number];
  /** warning annotation rendered inside the axes (e.g. empty input) */
  note?: string;
  /** when set, this panel is drawn as an inset of panel `parent` */
  inset?: { parent: number; rect: [number, number, number, number] };
}

export interface Figure {
  width: number;
  height: number;
  title: string;
  panels: Panel[];
  /** grid columns for the non-inset panels */
  columns: number;
}

export interface ResolvedPanel extends Panel {
  /** pixel rectangle of the axes box: x0, y0 (top), width, height */
  box: [number, number, number, number];
  xTicks: number[];
  yTicks: number[];
  xScale: (v: number) => number;
  yScale: (v: number) => number;
}

function dataRange(marks: Mark[], axis: 'x' | 'y'): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const mark of marks) {
    for (const p of mark.points) {
      const v = axis === 'x' ? p.x : p.y;
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
    if (mark.kind === 'stem') {
      const b = mark.base ?? 0;
      if (axis === 'y') {
        if (b < lo) lo = b;
        if (b > hi) hi = b;
      }
    }
  }
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) return [0, 1];
  if (lo === hi) return [lo - 0.5, hi + 0.5];
  const pad = (hi - lo) * 0.05;
  return [lo - pad, hi + pad];
}

/** 1-2-5 nice ticks covering [lo, hi], at most `count` of them. */
export function niceTicks(lo: number, hi: number, count = 6): number[] {
  const span = hi - lo;
  if (span <= 0 || !Number.isFinite(span)) return [lo];
  const rawStep = span / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= rawStep) {
      step = m * mag;
      break;
    }
  }
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = first; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

export function formatTick(v: number): string {
  if (v === 0) return '0';
  const a = Math.abs(v);
  if (a >= 10000 || a < 0.001) return v.toExponential(1);
  return String(parseFloat(v.toPrecision(6)));
}

const MARGIN = { left: 62, right: 14, top: 30, bottom: 44 };
const PANEL_GAP = 20;

export function resolve(figure: Figure): ResolvedPanel[] {
  const main = figure.panels.filter((p) => !p.inset);
  const columns = figure.columns;
  const rows = Math.ceil(main.length / columns);
  const cellW = (figure.width - PANEL_GAP * (columns - 1)) / columns;
  const cellH = (figure.height - 28 - PANEL_GAP * (rows - 1)) / rows;

  const resolved: ResolvedPanel[] = [];
  const mainBoxes: [number, number, number, number][] = [];

  let index = 0;
  for (const panel of figure.panels) {
    let box: [number, number, number, number];
    if (panel.inset) {
      const parent = mainBoxes[panel.inset.parent];
      const [fx, fy, fw, fh] = panel.inset.rect;
      box = [
        parent[0] + fx * parent[2],
        parent[1] + fy * parent[3],
        fw * parent[2],
        fh * parent[3],
      ];
    } else {
      const col = index % columns;
      const row = Math.floor(index / columns);
      const x0 = col * (cellW + PANEL_GAP) + MARGIN.left;
      const y0 = 28 + row * (cellH + PANEL_GAP) + MARGIN.top;
      box = [x0, y0, cellW - MARGIN.left - MARGIN.right, cellH - MARGIN.top - MARGIN.bottom];
      mainBoxes.push(box);
      index++;
    }
    const xr = panel.xRange ?? dataRange(panel.marks, 'x');
    const yr = panel.yRange ?? dataRange(panel.marks, 'y');
    const [bx, by, bw, bh] = box;
    resolved.push({
      ...panel,
      box,
      xTicks: niceTicks(xr[0], xr[1], panel.inset ? 3 : 6),
      yTicks: niceTicks(yr[0], yr[1], panel.inset ? 3 : 6),
      xScale: (v) => bx + ((v - xr[0]) / (xr[1] - xr[0])) * bw,
      yScale: (v) => by + bh - ((v - yr[0]) / (yr[1] - yr[0])) * bh,
    });
  }
  return resolved;
}
