/**
 * Measurement-noise panel: WER versus physical rate stratified by the
 * measurement-error rate (left), and the WER spread of the three
 * decoding modes at one representative physical rate (right).
 */

import { ResultRow } from "../schema.js";
import { Scene, PALETTE, fmt, frame, line, newScene, rect, text } from "../scene.js";

const CURVE_COLORS = [PALETTE.blue, PALETTE.green, PALETTE.orange, PALETTE.red, PALETTE.gray];

export interface SsCurve {
  q: number;
  singleShot: boolean;
  points: Array<[number, number]>; // (p, wer) sorted by p
}

export function ssCurves(rows: ResultRow[]): SsCurve[] {
  const groups = new Map<string, ResultRow[]>();
  for (const r of rows) {
    if (r.tailored) continue; // the stratification panel uses the plain code
    const k = `${r.q}|${r.single_shot}`;
    const list = groups.get(k) ?? [];
    list.push(r);
    groups.set(k, list);
  }
  const curves: SsCurve[] = [];
  for (const list of groups.values()) {
    const sorted = [...list].sort((a, b) => a.p - b.p);
    curves.push({
      q: sorted[0].q,
      singleShot: sorted[0].single_shot,
      points: sorted.map((r) => [r.p, r.wer]),
    });
  }
  curves.sort((a, b) => a.q - b.q || Number(a.singleShot) - Number(b.singleShot));
  return curves;
}

export interface SsModes {
  p: number;
  baseline: number[]; // q = 0
  noisy: number[]; // q > 0, no single shot
  singleShot: number[]; // q > 0, single shot
}

export function ssModes(rows: ResultRow[], atP?: number): SsModes {
  const counts = new Map<number, number>();
  for (const r of rows) counts.set(r.p, (counts.get(r.p) ?? 0) + 1);
  let p = atP;
  if (p === undefined) {
    let best = -1;
    for (const [value, count] of counts) {
      if (count > best || (count === best && value < (p ?? Infinity))) {
        best = count;
        p = value;
      }
    }
  }
  const at = rows.filter((r) => r.p === p && !r.tailored);
  return {
    p: p ?? NaN,
    baseline: at.filter((r) => r.q === 0).map((r) => r.wer),
    noisy: at.filter((r) => r.q > 0 && !r.single_shot).map((r) => r.wer),
    singleShot: at.filter((r) => r.q > 0 && r.single_shot).map((r) => r.wer),
  };
}

function median(values: number[]): number {
  const v = [...values].sort((a, b) => a - b);
  const mid = Math.floor(v.length / 2);
  return v.length % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2;
}

export function buildSsScene(rows: ResultRow[]): { scene: Scene; warnings: string[] } {
  const scene = newScene();
  const warnings: string[] = [];
  text(scene, scene.width / 2, 24, "MEASUREMENT NOISE AND SINGLE-SHOT RECOVERY", "middle");
  const curves = ssCurves(rows);
  if (curves.length === 0) {
    text(scene, scene.width / 2, scene.height / 2, "NO ROWS", "middle");
    return { scene, warnings };
  }
  const ps = curves.flatMap((c) => c.points.map(([p]) => p));
  const wers = curves.flatMap((c) => c.points.map(([, w]) => w));
  const pRange: [number, number] = [Math.min(...ps), Math.max(...ps) || 1];
  const wMax = Math.max(0.05, ...wers);
  const left = { x0: 70, y0: 50, x1: 480, y1: scene.height - 60 };
  const { px, py } = frame(scene, left, pRange, [0, wMax], {
    xLabel: "PHYSICAL ERROR RATE P",
    yLabel: "WER",
    xTicks: [...new Set(ps)].sort((a, b) => a - b).map((v) => [v, fmt(v)] as [number, string]),
    yTicks: [0, wMax / 2, wMax].map((v) => [v, fmt(v, 2)] as [number, string]),
  });
  curves.forEach((curve, i) => {
    const color = CURVE_COLORS[i % CURVE_COLORS.length];
    if (curve.points.length > 1) {
      scene.ops.push({
        kind: "polyline",
        points: curve.points.map(([p, w]) => [px(p), py(w)]),
        stroke: color,
      });
    }
    for (const [p, w] of curve.points) {
      rect(scene, px(p) - 2, py(w) - 2, 4, 4, color);
    }
    text(
      scene,
      left.x1 - 4,
      left.y0 + 14 + 14 * i,
      `Q=${fmt(curve.q)} ${curve.singleShot ? "SS" : "NO-SS"}`,
      "end",
    );
  });

  const modes = ssModes(rows);
  const right = { x0: 560, y0: 50, x1: scene.width - 30, y1: scene.height - 60 };
  const all = [...modes.baseline, ...modes.noisy, ...modes.singleShot];
  const rMax = Math.max(0.05, ...all);
  const groups: Array<[string, number[], string]> = [
    ["BASELINE", modes.baseline, PALETTE.green],
    ["NO-SS", modes.noisy, PALETTE.red],
    ["SS", modes.singleShot, PALETTE.blue],
  ];
  const fr = frame(scene, right, [-0.5, 2.5], [0, rMax], {
    xLabel: `WER SPREAD AT P=${fmt(modes.p)}`,
    yLabel: "WER",
    xTicks: groups.map(([label], i) => [i, label] as [number, string]),
    yTicks: [0, rMax / 2, rMax].map((v) => [v, fmt(v, 2)] as [number, string]),
  });
  groups.forEach(([label, values, color], i) => {
    if (values.length === 0) {
      warnings.push(`no ${label} rows at p=${fmt(modes.p)}; panel group empty`);
      return;
    }
    for (const w of values) {
      rect(scene, fr.px(i) - 8, fr.py(w) - 1.5, 16, 3, color);
    }
    const m = median(values);
    line(scene, fr.px(i) - 16, fr.py(m), fr.px(i) + 16, fr.py(m), PALETTE.axis);
  });
  return { scene, warnings };
}
