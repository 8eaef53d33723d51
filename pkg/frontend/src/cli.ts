#!/usr/bin/env node
/**
 * Render one figure analogue from qce output files:
 *
 *   figures <fig1..fig6> --in <dir> --out <dir>
 *           [--fig1-a z,p] [--fig1-b phi,cos_theta]
 *
 * Writes <id>.svg and <id>.png.  Purely a consumer: no physics is computed
 * here, every plotted number comes from the input CSV files.
 */

import { mkdirSync, writeFileSync } from 'fs';
import { join } from 'path';
import { pathToFileURL } from 'url';
import { SchemaError } from './csv.js';
import { DEFAULT_OPTIONS, buildFigure } from './figures.js';
import { renderPng } from './raster.js';
import { renderSvg } from './svg.js';

function parseArgs(argv: string[]) {
  if (argv.length === 0) throw new SchemaError('usage: figures <fig1..fig6> --in DIR --out DIR');
  const id = argv[0];
  let inDir = '.';
  let outDir = '.';
  const options = { ...DEFAULT_OPTIONS };
  for (let i = 1; i < argv.length; i++) {
    const arg = argv[i];
    const next = () => {
      i++;
      if (i >= argv.length) throw new SchemaError(`missing value for ${arg}`);
      return argv[i];
    };
    if (arg === '--in') inDir = next();
    else if (arg === '--out') outDir = next();
    else if (arg === '--fig1-a') options.fig1PanelA = next().split(',') as [string, string];
    else if (arg === '--fig1-b') options.fig1PanelB = next().split(',') as [string, string];
    else throw new SchemaError(`unknown argument ${arg}`);
  }
  return { id, inDir, outDir, options };
}

export function main(argv: string[]): number {
  try {
    const { id, inDir, outDir, options } = parseArgs(argv);
    const { figure, warnings } = buildFigure(id, inDir, options);
    mkdirSync(outDir, { recursive: true });
    const svgPath = join(outDir, `${id}.svg`);
    const pngPath = join(outDir, `${id}.png`);
    writeFileSync(svgPath, renderSvg(figure));
    writeFileSync(pngPath, renderPng(figure));
    process.stdout.write(
      JSON.stringify({ outputs: [svgPath, pngPath], warnings }, null, 2) + '\n',
    );
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(JSON.stringify({ error: err.message }) + '\n');
      return 1;
    }
    throw err;
  }
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
