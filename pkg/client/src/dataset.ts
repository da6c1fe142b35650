import { existsSync, readFileSync, readdirSync, statSync } from "node:fs";
import { basename, extname, join, resolve } from "node:path";

import { parseCsv } from "./csv.js";
import { buildTable, type Table } from "./table.js";

/** One experiment inside a dataset: a CSV file plus optional image files. */
export class Experiment {
  readonly name: string;
  private readonly directory: string;
  private readonly csvPath: string;

  constructor(name: string, directory: string) {
    this.name = name;
    this.directory = directory;
    this.csvPath = join(directory, `${name}.csv`);
  }

  /**
   * Load the experiment as a column-major table.
   *
   * Column names and order match the CSV header exactly. Numeric columns
   * load bit-exactly into Float64Array; string columns whose cells point at
   * files inside the dataset directory (image columns) are resolved to
   * absolute paths.
   */
  asTable(): Table {
    const text = readFileSync(this.csvPath, "utf8");
    const raw = parseCsv(text, this.csvPath);
    const table = buildTable(raw.columns, raw.rows);
    for (const name of table.columns) {
      const column = table.data[name]!;
      if (column instanceof Float64Array || column.length === 0) continue;
      if (existsSync(join(this.directory, column[0]!))) {
        table.data[name] = column.map((cell) => resolve(this.directory, cell));
      }
    }
    return table;
  }
}

/** A dataset directory: one CSV per experiment, image folders alongside. */
export class Dataset {
  readonly name: string;
  readonly root: string;
  readonly directory: string;

  constructor(name: string, root: string) {
    this.name = name;
    this.root = root;
    this.directory = join(root, name);
    if (!existsSync(this.directory) || !statSync(this.directory).isDirectory()) {
      throw new Error(
        `dataset '${name}' not found under '${resolve(root)}'`,
      );
    }
  }

  /** Sorted names of the experiments in this dataset. */
  experiments(): string[] {
    return readdirSync(this.directory)
      .filter((f) => extname(f) === ".csv")
      .map((f) => basename(f, ".csv"))
      .sort();
  }

  getExperiment(name: string): Experiment {
    const available = this.experiments();
    if (!available.includes(name)) {
      throw new Error(
        `unknown experiment '${name}' in dataset '${this.name}'; ` +
          `available: ${available.join(", ")}`,
      );
    }
    return new Experiment(name, this.directory);
  }
}
