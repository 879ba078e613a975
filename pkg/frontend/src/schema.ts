import Papa from "papaparse";

export const RUN_COLUMNS = [
  "m", "is_prime", "samples", "seed", "mean_C", "std_C",
  "normalized_mean", "normalized_std", "lambda_m", "p_exceed_lambda",
  "epsilon", "p_outside_eps", "oracle_mean",
] as const;

export const RAW_COLUMNS = ["m", "sample_index", "C"] as const;

export const BOUNDS_COLUMNS = [
  "name", "m", "epsilon", "theta", "k", "u", "v", "value", "premise_met",
] as const;

/** One aggregated experiment row (one modulus). */
export interface RunRow {
  m: number;
  is_prime: boolean;
  samples: number;
  seed: number;
  mean_C: number;
  std_C: number;
  normalized_mean: number;
  normalized_std: number;
  lambda_m: number;
  p_exceed_lambda: number;
  epsilon: number;
  p_outside_eps: number;
  oracle_mean: number | null;
}

/** One per-sample row from the raw output. */
export interface RawRow {
  m: number;
  sample_index: number;
  C: number;
}

/** One bound-evaluation row; cells kept verbatim for tabular display. */
export interface BoundsRow {
  name: string;
  cells: string[];
}

export class SchemaError extends Error {
  readonly column?: string;

  constructor(message: string, column?: string) {
    super(message);
    this.name = "SchemaError";
    this.column = column;
  }
}

type Cells = Record<string, string>;

function parseTable(text: string, required: readonly string[]): Cells[] {
  const res = Papa.parse<Cells>(text.trim(), { header: true, skipEmptyLines: true });
  if (res.errors.length > 0) {
    throw new SchemaError(`csv parse error: ${res.errors[0].message}`);
  }
  const fields = res.meta.fields ?? [];
  for (const col of required) {
    if (!fields.includes(col)) {
      throw new SchemaError(`missing column: ${col}`, col);
    }
  }
  if (res.data.length === 0) {
    throw new SchemaError("no data rows");
  }
  return res.data;
}

function num(row: Cells, col: string, line: number): number {
  const raw = row[col];
  const x = Number(raw);
  if (raw === undefined || raw === "" || !Number.isFinite(x)) {
    throw new SchemaError(`column ${col}, data row ${line}: expected a number, got "${raw}"`, col);
  }
  return x;
}

function optNum(row: Cells, col: string, line: number): number | null {
  return row[col] === "" || row[col] === undefined ? null : num(row, col, line);
}

function bool(row: Cells, col: string, line: number): boolean {
  const raw = row[col];
  if (raw !== "true" && raw !== "false") {
    throw new SchemaError(`column ${col}, data row ${line}: expected true/false, got "${raw}"`, col);
  }
  return raw === "true";
}

export function parseRunCsv(text: string): RunRow[] {
  return parseTable(text, RUN_COLUMNS).map((row, i) => ({
    m: num(row, "m", i),
    is_prime: bool(row, "is_prime", i),
    samples: num(row, "samples", i),
    seed: num(row, "seed", i),
    mean_C: num(row, "mean_C", i),
    std_C: num(row, "std_C", i),
    normalized_mean: num(row, "normalized_mean", i),
    normalized_std: num(row, "normalized_std", i),
    lambda_m: num(row, "lambda_m", i),
    p_exceed_lambda: num(row, "p_exceed_lambda", i),
    epsilon: num(row, "epsilon", i),
    p_outside_eps: num(row, "p_outside_eps", i),
    oracle_mean: optNum(row, "oracle_mean", i),
  }));
}

export function parseRawCsv(text: string): RawRow[] {
  return parseTable(text, RAW_COLUMNS).map((row, i) => ({
    m: num(row, "m", i),
    sample_index: num(row, "sample_index", i),
    C: num(row, "C", i),
  }));
}

export function parseBoundsCsv(text: string): BoundsRow[] {
  return parseTable(text, BOUNDS_COLUMNS).map((row) => ({
    name: row["name"] ?? "",
    cells: BOUNDS_COLUMNS.map((c) => row[c] ?? ""),
  }));
}
