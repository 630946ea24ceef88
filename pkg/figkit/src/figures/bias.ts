/**
 * Relative WER change from bias tailoring, per bias ratio, with +-1
 * standard-error-of-the-mean bars.  Negative bars mean tailoring helped.
 */

import { ResultRow } from "../schema.js";
import { Scene, PALETTE, fmt, frame, line, newScene, rect, text } from "../scene.js";

export interface BiasPair {
  eta: number;
  p: number;
  q: number;
  relChange: number; // (wer_tailored - wer_untailored) / wer_untailored
  sem: number;
}

export interface BiasPairing {
  pairs: BiasPair[];
  warnings: string[];
}

function key(r: ResultRow): string {
  return [r.p, r.q, r.eta, r.single_shot, r.trials].join("|");
}

export function biasPairs(rows: ResultRow[]): BiasPairing {
  const tailored = new Map<string, ResultRow>();
  const plain = new Map<string, ResultRow>();
  for (const r of rows) {
    (r.tailored ? tailored : plain).set(key(r), r);
  }
  const pairs: BiasPair[] = [];
  const warnings: string[] = [];
  for (const [k, u] of plain) {
    const t = tailored.get(k);
    if (!t) {
      warnings.push(`unpaired untailored row at (p=${u.p}, q=${u.q}, eta=${u.eta}); skipped`);
      continue;
    }
    if (u.wer === 0) {
      warnings.push(`untailored WER is 0 at (p=${u.p}, q=${u.q}, eta=${u.eta}); skipped`);
      continue;
    }
    // first-order error propagation of the ratio
    const sem = Math.sqrt(
      (t.wer_stderr / u.wer) ** 2 + ((t.wer * u.wer_stderr) / u.wer ** 2) ** 2,
    );
    pairs.push({ eta: u.eta, p: u.p, q: u.q, relChange: (t.wer - u.wer) / u.wer, sem });
  }
  for (const [k, t] of tailored) {
    if (!plain.has(k)) {
      warnings.push(`unpaired tailored row at (p=${t.p}, q=${t.q}, eta=${t.eta}); skipped`);
    }
  }
  pairs.sort((a, b) => a.eta - b.eta || a.p - b.p || a.q - b.q);
  return { pairs, warnings };
}

export function buildBiasScene(rows: ResultRow[]): { scene: Scene; warnings: string[] } {
  const { pairs, warnings } = biasPairs(rows);
  const scene = newScene();
  text(scene, scene.width / 2, 24, "RELATIVE WER CHANGE FROM BIAS TAILORING", "middle");
  if (pairs.length === 0) {
    text(scene, scene.width / 2, scene.height / 2, "NO PAIRED ROWS", "middle");
    return { scene, warnings };
  }
  const lo = Math.min(-1, ...pairs.map((p) => p.relChange - p.sem));
  const hi = Math.max(0.25, ...pairs.map((p) => p.relChange + p.sem));
  const box = { x0: 80, y0: 50, x1: scene.width - 30, y1: scene.height - 60 };
  const yTicks: Array<[number, string]> = [];
  for (let v = Math.ceil(lo * 4) / 4; v <= hi + 1e-9; v += 0.25) {
    yTicks.push([v, `${Math.round(v * 100)}%`]);
  }
  const { px, py } = frame(
    scene,
    box,
    [-0.5, pairs.length - 0.5],
    [lo, hi],
    {
      xLabel: "BIAS RATIO ETA (GROUPED BY P, Q)",
      yLabel: "WER CHANGE",
      xTicks: pairs.map((p, i) => [i, fmt(p.eta)] as [number, string]),
      yTicks,
    },
  );
  line(scene, box.x0, py(0), box.x1, py(0), PALETTE.axis);
  const slot = (box.x1 - box.x0) / pairs.length;
  const barW = Math.min(40, slot * 0.6);
  pairs.forEach((p, i) => {
    const x = px(i) - barW / 2;
    const y0 = py(0);
    const y1 = py(p.relChange);
    rect(
      scene,
      x,
      Math.min(y0, y1),
      barW,
      Math.abs(y1 - y0),
      p.relChange <= 0 ? PALETTE.blue : PALETTE.red,
    );
    const eTop = py(p.relChange + p.sem);
    const eBot = py(p.relChange - p.sem);
    line(scene, px(i), eTop, px(i), eBot, PALETTE.axis);
    line(scene, px(i) - 5, eTop, px(i) + 5, eTop, PALETTE.axis);
    line(scene, px(i) - 5, eBot, px(i) + 5, eBot, PALETTE.axis);
    text(scene, px(i), py(p.relChange) - 8, `${Math.round(p.relChange * 100)}%`, "middle");
  });
  return { scene, warnings };
}
