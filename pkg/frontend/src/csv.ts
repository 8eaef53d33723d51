import { readFileSync } from 'fs';

export interface Table {
  /** unit/metadata comment lines (leading '#' stripped, trimmed) */
  comments: string[];
  columns: string[];
  /** column-major numeric data */
  data: Map<string, number[]>;
  rows: number;
}

export class SchemaError extends Error {}

/** Parse a qce CSV: '#' comment header lines, a column-name row, numeric rows. */
export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  const comments: string[] = [];
  let i = 0;
  while (i < lines.length && lines[i].startsWith('#')) {
    comments.push(lines[i].slice(1).trim());
    i++;
  }
  if (i >= lines.length) throw new SchemaError('CSV has no column header row');
  const columns = lines[i].split(',').map((c) => c.trim());
  i++;
  const data = new Map<string, number[]>(columns.map((c) => [c, []]));
  let rows = 0;
  for (; i < lines.length; i++) {
    const parts = lines[i].split(',');
    if (parts.length !== columns.length) {
      throw new SchemaError(
        `row ${i + 1} has ${parts.length} fields, expected ${columns.length}`,
      );
    }
    parts.forEach((p, k) => {
      const v = Number(p);
      if (!Number.isFinite(v)) {
        throw new SchemaError(`row ${i + 1}, column ${columns[k]}: not a number: ${p}`);
      }
      data.get(columns[k])!.push(v);
    });
    rows++;
  }
  return { comments, columns, data, rows };
}

export interface Schema {
  /** columns that must be present, in this order as a prefix */
  columns: string[];
  /** substrings that must appear in some comment line (unit declarations) */
  unitTags: string[];
}

export function loadTable(path: string, schema: Schema): Table {
  let text: string;
  try {
    text = readFileSync(path, 'utf8');
  } catch (err) {
    throw new SchemaError(`cannot read ${path}: ${(err as Error).message}`);
  }
  const table = parseCsv(text);
  for (const [k, name] of schema.columns.entries()) {
    if (table.columns[k] !== name) {
      throw new SchemaError(
        `${path}: expected column ${k + 1} to be '${name}', found '${table.columns[k] ?? ''}'`,
      );
    }
  }
  for (const tag of schema.unitTags) {
    if (!table.comments.some((c) => c.includes(tag))) {
      throw new SchemaError(`${path}: missing unit declaration '${tag}' in header comments`);
    }
  }
  return table;
}

export const ENTROPY_SCHEMA: Schema = {
  columns: ['time', 'entropy'],
  unitTags: ['time_units='],
};

export function supportSchema(units: 'E_R' | 'radians'): Schema {
  return { columns: ['eigenvalue', 'population'], unitTags: [`eigenvalue_units=${units}`] };
}

export const SECTIONS_SCHEMA: Schema = {
  columns: ['z_over_lambda', 'p_over_hbark', 'theta', 'phi', 'crossing_time'],
  unitTags: ['z/lambda'],
};
