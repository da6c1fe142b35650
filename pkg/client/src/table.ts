/** One column of loaded data: numbers for numeric columns, strings otherwise. */
export type Column = Float64Array | string[];

export interface Table {
  /** Column names in file order. */
  columns: string[];
  /** Column name to column values; numeric columns are Float64Array. */
  data: Record<string, Column>;
  rowCount: number;
}

// shortest round-trip decimals as written by the simulator: optional sign,
// digits with optional fraction, optional exponent; plus nan/inf markers
const NUMERIC = /^-?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?$/;

/**
 * Parse one CSV cell as a number, or return null if it is not numeric.
 *
 * Uses the host float parser, which rounds decimal literals correctly, so a
 * value written with shortest round-trip precision loads back bit-exactly.
 */
export function parseNumber(cell: string): number | null {
  if (NUMERIC.test(cell)) return Number(cell);
  if (cell === "nan") return NaN;
  if (cell === "inf") return Infinity;
  if (cell === "-inf") return -Infinity;
  return null;
}

/**
 * Assemble raw string rows into a column-major table.
 *
 * A column becomes a Float64Array when every cell parses as a number and a
 * string array otherwise (for example the image-path column of camera
 * experiments).
 */
export function buildTable(columns: string[], rows: string[][]): Table {
  const data: Record<string, Column> = {};
  columns.forEach((name, j) => {
    const parsed = new Float64Array(rows.length);
    let numeric = true;
    for (let i = 0; i < rows.length; i++) {
      const value = parseNumber(rows[i]![j]!);
      if (value === null) {
        numeric = false;
        break;
      }
      parsed[i] = value;
    }
    data[name] = numeric ? parsed : rows.map((row) => row[j]!);
  });
  return { columns: [...columns], data, rowCount: rows.length };
}
