export { Dataset, Experiment } from "./dataset.js";
export { parseCsv, type RawCsv } from "./csv.js";
export { buildTable, parseNumber, type Column, type Table } from "./table.js";
