/**
 * Results-table schema: one row per sweep grid point.
 *
 * Parsing is strict about structure (all mandatory columns present, types
 * coerce cleanly) but collects problems as warnings instead of throwing,
 * so a caller can render what it can and report the rest.  The literal
 * string "nan" is a legal float (sectors without measurement flips).
 */

import Papa from "papaparse";
import { z } from "zod";

export const MANDATORY_COLUMNS = [
  "p",
  "q",
  "beta_x",
  "beta_y",
  "beta_z",
  "eta",
  "tailored",
  "single_shot",
  "trials",
  "failures",
  "wer",
  "wer_stderr",
  "detection_x",
  "detection_z",
  "correction_x",
  "correction_z",
  "bp_conv_frac",
  "osd0_frac",
  "osdw_frac",
  "wall_seconds",
] as const;

const floatField = z
  .string()
  .refine((s) => s === "nan" || (s.trim() !== "" && Number.isFinite(Number(s))), {
    message: "not a number",
  })
  .transform((s) => (s === "nan" ? NaN : Number(s)));

const boolField = z
  .string()
  .refine((s) => s === "0" || s === "1", { message: "expected 0 or 1" })
  .transform((s) => s === "1");

const intField = z
  .string()
  .refine((s) => /^\d+$/.test(s.trim()), { message: "expected an integer" })
  .transform((s) => Number(s));

export const rowSchema = z.object({
  p: floatField,
  q: floatField,
  beta_x: floatField,
  beta_y: floatField,
  beta_z: floatField,
  eta: floatField,
  tailored: boolField,
  single_shot: boolField,
  trials: intField,
  failures: intField,
  wer: floatField,
  wer_stderr: floatField,
  detection_x: floatField,
  detection_z: floatField,
  correction_x: floatField,
  correction_z: floatField,
  bp_conv_frac: floatField,
  osd0_frac: floatField,
  osdw_frac: floatField,
  wall_seconds: floatField,
});

export type ResultRow = z.infer<typeof rowSchema>;

export interface ResultsTable {
  rows: ResultRow[];
  warnings: string[];
}

export function parseResultsCsv(text: string): ResultsTable {
  const warnings: string[] = [];
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  for (const err of parsed.errors) {
    warnings.push(`csv row ${err.row}: ${err.message}`);
  }
  const fields = parsed.meta.fields ?? [];
  for (const col of MANDATORY_COLUMNS) {
    if (!fields.includes(col)) {
      warnings.push(`missing mandatory column: ${col}`);
    }
  }
  const rows: ResultRow[] = [];
  parsed.data.forEach((raw, i) => {
    const check = rowSchema.safeParse(raw);
    if (check.success) {
      rows.push(check.data);
    } else {
      for (const issue of check.error.issues) {
        warnings.push(`row ${i + 1}, column ${issue.path.join(".")}: ${issue.message}`);
      }
    }
  });
  return { rows, warnings };
}
