#!/usr/bin/env node
/** Batch renderer:  plotviz <plotdata.json> <out.svg> [--title T] [--log-x] */

import { readFileSync, writeFileSync } from 'fs';
import { PlotDataError, parsePlotData } from './plotdata.js';
import { RenderOptions, renderSvg } from './render.js';

export function main(argv: string[]): number {
  const positional: string[] = [];
  const opts: RenderOptions = {};
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a === '--log-x') {
      opts.logX = true;
    } else if (a === '--title') {
      if (i + 1 >= argv.length) {
        console.error('--title needs a value');
        return 2;
      }
      opts.title = argv[++i];
    } else if (a.startsWith('--')) {
      console.error(`unknown option ${a}`);
      return 2;
    } else {
      positional.push(a);
    }
  }
  if (positional.length !== 2) {
    console.error('usage: plotviz <plotdata.json> <out.svg> ' +
      '[--title T] [--log-x]');
    return 2;
  }
  const [inPath, outPath] = positional;
  let text: string;
  try {
    text = readFileSync(inPath, 'utf8');
  } catch (e) {
    console.error(`cannot read ${inPath}: ${(e as Error).message}`);
    return 1;
  }
  try {
    const doc = parsePlotData(text);
    if (doc.rows.length === 0) {
      console.error(`warning: ${inPath} has no data rows; ` +
        'writing an empty figure');
    }
    writeFileSync(outPath, renderSvg(doc, opts));
  } catch (e) {
    if (e instanceof PlotDataError || e instanceof RangeError) {
      console.error(`${inPath}: ${e.message}`);
      return 1;
    }
    throw e;
  }
  return 0;
}

// vitest imports this module; only run when invoked as a script
if (process.argv[1] && process.argv[1].endsWith('cli.js')) {
  process.exit(main(process.argv.slice(2)));
}
