#!/usr/bin/env node
/** figkit <csv> --fig {bias,ss,meta} -o <path>: emits <path>.svg and <path>.png */

import { readFileSync, writeFileSync } from "node:fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { parseResultsCsv } from "./schema.js";
import { buildBiasScene } from "./figures/bias.js";
import { buildSsScene } from "./figures/ss.js";
import { buildMetaScene } from "./figures/meta.js";
import { renderSvg } from "./svg.js";
import { renderPng } from "./raster.js";

const BUILDERS = {
  bias: buildBiasScene,
  ss: buildSsScene,
  meta: buildMetaScene,
} as const;

export function run(csvPath: string, fig: keyof typeof BUILDERS, out: string): number {
  let text: string;
  try {
    text = readFileSync(csvPath, "utf8");
  } catch (err) {
    console.error(`cannot read ${csvPath}: ${err}`);
    return 1;
  }
  const table = parseResultsCsv(text);
  for (const w of table.warnings) {
    console.error(`warning: ${w}`);
  }
  if (table.rows.length === 0) {
    console.error("no parseable rows");
    return 1;
  }
  const { scene, warnings } = BUILDERS[fig](table.rows);
  for (const w of warnings) {
    console.error(`warning: ${w}`);
  }
  const base = out.replace(/\.(svg|png)$/, "");
  writeFileSync(`${base}.svg`, renderSvg(scene));
  writeFileSync(`${base}.png`, renderPng(scene));
  console.log(`wrote ${base}.svg and ${base}.png`);
  return 0;
}

export function main(argv: string[]): number {
  const args = yargs(argv)
    .command("$0 <csv>", "render a results CSV", (y) =>
      y
        .positional("csv", { type: "string", demandOption: true })
        .option("fig", {
          choices: ["bias", "ss", "meta"] as const,
          demandOption: true,
          describe: "figure family to render",
        })
        .option("out", {
          alias: "o",
          type: "string",
          demandOption: true,
          describe: "output path; .svg and .png are written",
        }),
    )
    .strict()
    .exitProcess(false)
    .parseSync();
  return run(args.csv as string, args.fig as keyof typeof BUILDERS, args.out as string);
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (invokedDirectly) {
  process.exit(main(hideBin(process.argv)));
}
