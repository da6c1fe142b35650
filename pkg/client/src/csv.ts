import Papa from "papaparse";

export interface RawCsv {
  /** Column names exactly as they appear in the header line. */
  columns: string[];
  /** Data rows as raw string cells, one array per row. */
  rows: string[][];
}

/**
 * Parse an experiment CSV into its header and raw string cells.
 *
 * The dialect is plain: comma separators, LF line endings, a single header
 * line, no padding around values. Every data row must have exactly as many
 * cells as the header.
 */
export function parseCsv(text: string, source: string): RawCsv {
  const parsed = Papa.parse<string[]>(text, {
    delimiter: ",",
    newline: "\n",
  });
  const fatal = parsed.errors.find((e) => e.code !== "UndetectableDelimiter");
  if (fatal !== undefined) {
    throw new Error(`${source}: malformed CSV (${fatal.message})`);
  }
  // a trailing newline yields one final empty record; drop such records
  const records = parsed.data.filter((r) => r.length > 1 || r[0] !== "");
  const columns = records[0];
  if (columns === undefined) {
    throw new Error(`${source}: empty file, expected a header line`);
  }
  const rows = records.slice(1);
  rows.forEach((row, i) => {
    if (row.length !== columns.length) {
      throw new Error(
        `${source}: row ${i + 1} has ${row.length} values, header has ${columns.length}`,
      );
    }
  });
  return { columns, rows };
}
