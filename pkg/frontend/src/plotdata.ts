/**
 * The plot-data interchange format emitted by the computation pipeline
 * (`voronoi-torsion plotdata`).  One file is one series for one group
 * and one homological degree.
 */

export interface PlotRow {
  /** index or level norm, per the header's `order` field */
  x: number;
  /** log(torsion)/index, or the per-level alternating sum in euler mode */
  y: number;
  is_prime: boolean;
  /** tower seed id when the series is a divisibility chain, else null */
  tower: string | null;
}

export interface PlotDataFile {
  version: number;
  group: string;
  degree: number;
  mode: 'ratio' | 'euler';
  order: 'index' | 'norm';
  filter: string;
  /** horizontal limit line; null when no closed form is on record */
  reference: number | null;
  reference_note: string;
  rows: PlotRow[];
}

export class PlotDataError extends Error {}

function fail(msg: string): never {
  throw new PlotDataError(msg);
}

export function parsePlotData(text: string): PlotDataFile {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (e) {
    fail(`not valid JSON: ${(e as Error).message}`);
  }
  if (typeof raw !== 'object' || raw === null || Array.isArray(raw)) {
    fail('top level must be an object');
  }
  const doc = raw as Record<string, unknown>;
  if (doc.version !== 1) fail(`unsupported version ${String(doc.version)}`);
  if (doc.mode !== 'ratio' && doc.mode !== 'euler') {
    fail(`mode must be ratio or euler, got ${String(doc.mode)}`);
  }
  if (doc.order !== 'index' && doc.order !== 'norm') {
    fail(`order must be index or norm, got ${String(doc.order)}`);
  }
  if (typeof doc.group !== 'string' || typeof doc.degree !== 'number') {
    fail('header must carry group (string) and degree (number)');
  }
  if (doc.reference !== null && typeof doc.reference !== 'number') {
    fail('reference must be a number or null');
  }
  if (!Array.isArray(doc.rows)) fail('rows must be an array');
  const rows: PlotRow[] = doc.rows.map((r, i) => {
    if (typeof r !== 'object' || r === null) fail(`row ${i} not an object`);
    const row = r as Record<string, unknown>;
    if (typeof row.x !== 'number' || !Number.isFinite(row.x)) {
      fail(`row ${i}: x must be a finite number`);
    }
    if (typeof row.y !== 'number' || !Number.isFinite(row.y)) {
      fail(`row ${i}: y must be a finite number`);
    }
    return {
      x: row.x,
      y: row.y,
      is_prime: Boolean(row.is_prime),
      tower: typeof row.tower === 'string' ? row.tower : null,
    };
  });
  for (let i = 1; i < rows.length; i++) {
    if (rows[i].x < rows[i - 1].x) fail('rows must be sorted by x');
  }
  return {
    version: 1,
    group: doc.group,
    degree: doc.degree,
    mode: doc.mode,
    order: doc.order,
    filter: typeof doc.filter === 'string' ? doc.filter : 'all',
    reference: doc.reference as number | null,
    reference_note:
      typeof doc.reference_note === 'string' ? doc.reference_note : '',
    rows,
  };
}
