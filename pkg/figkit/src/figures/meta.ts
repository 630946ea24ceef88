/**
 * Metacheck effectiveness: histograms of the per-trial detection and
 * correction rates, by syndrome sector.
 */

import { ResultRow } from "../schema.js";
import { Scene, PALETTE, fmt, frame, newScene, rect, text } from "../scene.js";

export const BIN_COUNT = 20;

export function histogram(values: number[], bins = BIN_COUNT): number[] {
  const counts = new Array(bins).fill(0);
  for (const v of values) {
    if (Number.isNaN(v)) continue;
    const clamped = Math.min(Math.max(v, 0), 1);
    const bin = Math.min(bins - 1, Math.floor(clamped * bins));
    counts[bin] += 1;
  }
  return counts;
}

function panel(
  scene: Scene,
  box: { x0: number; y0: number; x1: number; y1: number },
  title: string,
  seriesX: number[],
  seriesZ: number[],
): void {
  const hx = histogram(seriesX);
  const hz = histogram(seriesZ);
  const yMax = Math.max(1, ...hx, ...hz);
  const { px, py } = frame(scene, box, [0, 1], [0, yMax], {
    xLabel: title,
    yLabel: "ROWS",
    xTicks: [0, 0.25, 0.5, 0.75, 1].map((v) => [v, fmt(v) ] as [number, string]),
    yTicks: [0, yMax].map((v) => [v, String(v)] as [number, string]),
  });
  const binW = (box.x1 - box.x0) / BIN_COUNT;
  for (let b = 0; b < BIN_COUNT; b++) {
    const x = px(b / BIN_COUNT);
    if (hx[b]) {
      rect(scene, x + 1, py(hx[b]), binW / 2 - 1, py(0) - py(hx[b]), PALETTE.blue);
    }
    if (hz[b]) {
      rect(scene, x + binW / 2, py(hz[b]), binW / 2 - 1, py(0) - py(hz[b]), PALETTE.green);
    }
  }
  text(scene, box.x1, box.y0 - 8, "X-SECTOR / Z-SECTOR", "end");
}

export function buildMetaScene(rows: ResultRow[]): { scene: Scene; warnings: string[] } {
  const scene = newScene();
  const warnings: string[] = [];
  text(scene, scene.width / 2, 24, "METACHECK DETECTION AND CORRECTION RATES", "middle");
  const detX = rows.map((r) => r.detection_x);
  const detZ = rows.map((r) => r.detection_z);
  const corX = rows.map((r) => r.correction_x);
  const corZ = rows.map((r) => r.correction_z);
  const usable = (vs: number[]) => vs.filter((v) => !Number.isNaN(v)).length;
  if (usable(detX) + usable(detZ) === 0) {
    warnings.push("no rows with measurement flips; detection histogram empty");
  }
  panel(
    scene,
    { x0: 80, y0: 56, x1: scene.width - 40, y1: 250 },
    "DETECTION RATE",
    detX,
    detZ,
  );
  panel(
    scene,
    { x0: 80, y0: 306, x1: scene.width - 40, y1: scene.height - 60 },
    "CORRECTION RATE",
    corX,
    corZ,
  );
  return { scene, warnings };
}
