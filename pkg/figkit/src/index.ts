export { parseResultsCsv, rowSchema, MANDATORY_COLUMNS } from "./schema.js";
export type { ResultRow, ResultsTable } from "./schema.js";
export { buildBiasScene, biasPairs } from "./figures/bias.js";
export { buildSsScene, ssCurves, ssModes } from "./figures/ss.js";
export { buildMetaScene, histogram, BIN_COUNT } from "./figures/meta.js";
export { renderSvg } from "./svg.js";
export { renderPng, rasterize, encodePng } from "./raster.js";
export { newScene } from "./scene.js";
export type { Scene } from "./scene.js";
