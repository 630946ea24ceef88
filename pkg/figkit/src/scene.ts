/**
 * A tiny retained scene: the figure builders emit primitives, and the SVG
 * and PNG backends render the same scene, which keeps both outputs
 * deterministic and in agreement.
 */

export interface RectOp {
  kind: "rect";
  x: number;
  y: number;
  w: number;
  h: number;
  fill: string;
}

export interface LineOp {
  kind: "line";
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  stroke: string;
}

export interface PolylineOp {
  kind: "polyline";
  points: Array<[number, number]>;
  stroke: string;
}

export interface TextOp {
  kind: "text";
  x: number;
  y: number;
  text: string;
  anchor: "start" | "middle" | "end";
}

export type SceneOp = RectOp | LineOp | PolylineOp | TextOp;

export interface Scene {
  width: number;
  height: number;
  ops: SceneOp[];
}

export const PALETTE = {
  background: "#ffffff",
  axis: "#222222",
  grid: "#dddddd",
  blue: "#3465a4",
  green: "#4e9a06",
  red: "#cc0000",
  orange: "#f57900",
  gray: "#888888",
};

export function newScene(width = 840, height = 520): Scene {
  return {
    width,
    height,
    ops: [{ kind: "rect", x: 0, y: 0, w: width, h: height, fill: PALETTE.background }],
  };
}

export function rect(s: Scene, x: number, y: number, w: number, h: number, fill: string): void {
  s.ops.push({ kind: "rect", x, y, w, h, fill });
}

export function line(s: Scene, x1: number, y1: number, x2: number, y2: number, stroke: string): void {
  s.ops.push({ kind: "line", x1, y1, x2, y2, stroke });
}

export function polyline(s: Scene, points: Array<[number, number]>, stroke: string): void {
  s.ops.push({ kind: "polyline", points, stroke });
}

export function text(
  s: Scene,
  x: number,
  y: number,
  value: string,
  anchor: "start" | "middle" | "end" = "start",
): void {
  s.ops.push({ kind: "text", x, y, text: value, anchor });
}

/** Shared axis frame with tick labels; returns the data-to-pixel mappers. */
export function frame(
  s: Scene,
  box: { x0: number; y0: number; x1: number; y1: number },
  xRange: [number, number],
  yRange: [number, number],
  labels: { xLabel: string; yLabel: string; xTicks: Array<[number, string]>; yTicks: Array<[number, string]> },
): { px: (x: number) => number; py: (y: number) => number } {
  const spanX = xRange[1] - xRange[0] || 1;
  const spanY = yRange[1] - yRange[0] || 1;
  const px = (x: number) => box.x0 + ((x - xRange[0]) / spanX) * (box.x1 - box.x0);
  const py = (y: number) => box.y1 - ((y - yRange[0]) / spanY) * (box.y1 - box.y0);
  line(s, box.x0, box.y1, box.x1, box.y1, PALETTE.axis);
  line(s, box.x0, box.y0, box.x0, box.y1, PALETTE.axis);
  for (const [v, label] of labels.xTicks) {
    const x = px(v);
    line(s, x, box.y1, x, box.y1 + 5, PALETTE.axis);
    text(s, x, box.y1 + 18, label, "middle");
  }
  for (const [v, label] of labels.yTicks) {
    const y = py(v);
    line(s, box.x0 - 5, y, box.x0, y, PALETTE.axis);
    line(s, box.x0, y, box.x1, y, PALETTE.grid);
    text(s, box.x0 - 8, y + 4, label, "end");
  }
  text(s, (box.x0 + box.x1) / 2, box.y1 + 34, labels.xLabel, "middle");
  text(s, box.x0, box.y0 - 8, labels.yLabel, "start");
  return { px, py };
}

export function fmt(v: number, digits = 3): string {
  if (Number.isNaN(v)) return "nan";
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1000 || a < 0.001) return v.toExponential(0);
  return Number(v.toFixed(digits)).toString();
}
