/** Scene-to-SVG serialization; fixed fonts and sizes, no randomness. */

import { Scene } from "./scene.js";

const FONT = 'font-family="monospace" font-size="12px"';

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function num(v: number): string {
  return Number(v.toFixed(2)).toString();
}

export function renderSvg(scene: Scene): string {
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${scene.width}" ` +
      `height="${scene.height}" viewBox="0 0 ${scene.width} ${scene.height}">`,
  ];
  for (const op of scene.ops) {
    switch (op.kind) {
      case "rect":
        parts.push(
          `<rect x="${num(op.x)}" y="${num(op.y)}" width="${num(op.w)}" ` +
            `height="${num(op.h)}" fill="${op.fill}"/>`,
        );
        break;
      case "line":
        parts.push(
          `<line x1="${num(op.x1)}" y1="${num(op.y1)}" x2="${num(op.x2)}" ` +
            `y2="${num(op.y2)}" stroke="${op.stroke}" stroke-width="1"/>`,
        );
        break;
      case "polyline": {
        const pts = op.points.map(([x, y]) => `${num(x)},${num(y)}`).join(" ");
        parts.push(
          `<polyline points="${pts}" fill="none" stroke="${op.stroke}" stroke-width="1.5"/>`,
        );
        break;
      }
      case "text":
        parts.push(
          `<text x="${num(op.x)}" y="${num(op.y)}" ${FONT} ` +
            `text-anchor="${op.anchor}" fill="#222222">${esc(op.text)}</text>`,
        );
        break;
    }
  }
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
