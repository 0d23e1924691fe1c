/**
 * Figure layout for torsion-growth series: scatter of log-torsion/index
 * against subgroup index (or level norm), the horizontal limiting line
 * when one is on record, prime levels in a distinct marker, and tower
 * rows joined by straight lines.
 */

import { PlotDataFile, PlotRow } from './plotdata.js';
import { Scale, formatTick, linearScale, logScale, padRange } from './scale.js';
import { SvgDoc } from './svg.js';

export interface RenderOptions {
  title?: string;
  logX?: boolean;
}

const W = 640;
const H = 400;
const MARGIN = { top: 36, right: 20, bottom: 48, left: 72 };

const AXIS = 'stroke:#333;stroke-width:1';
const GRID = 'stroke:#ddd;stroke-width:0.5';
const REFLINE = 'stroke:#c0392b;stroke-width:1.2;stroke-dasharray:6 3';
const POINT = 'fill:#2b6cb0;stroke:none';
const PRIME_POINT = 'fill:#c05621;stroke:#7b341e;stroke-width:0.8';
const TOWER_LINE = 'stroke:#2b6cb0;stroke-width:1';
const LABEL = 'font-family:sans-serif;font-size:11px;fill:#333';
const TITLE = 'font-family:sans-serif;font-size:14px;fill:#111';
const WARNING =
  'font-family:sans-serif;font-size:13px;fill:#c0392b;text-anchor:middle';

function axisLabelX(doc: PlotDataFile): string {
  return doc.order === 'index' ? 'Index' : 'Level norm';
}

function axisLabelY(doc: PlotDataFile): string {
  return doc.mode === 'ratio'
    ? 'Log torsion / Index'
    : 'Alternating log torsion / Index';
}

export function renderSvg(doc: PlotDataFile, opts: RenderOptions = {}): string {
  const svg = new SvgDoc(W, H);
  svg.rect(0, 0, W, H, 'fill:#ffffff');
  const x0 = MARGIN.left;
  const x1 = W - MARGIN.right;
  const y0 = H - MARGIN.bottom;
  const y1 = MARGIN.top;

  const title =
    opts.title ?? `${doc.group} degree ${doc.degree} (${doc.mode})`;
  svg.text(x0, MARGIN.top - 16, title, TITLE);

  if (doc.rows.length === 0) {
    // still draw the frame so an empty file is visibly an empty figure
    svg.line(x0, y0, x1, y0, AXIS);
    svg.line(x0, y0, x0, y1, AXIS);
    svg.text((x0 + x1) / 2, (y0 + y1) / 2, 'no data rows', WARNING);
    return svg.render();
  }

  const xs = doc.rows.map((r) => r.x);
  const ys = doc.rows.map((r) => r.y);
  if (doc.reference !== null) ys.push(doc.reference);
  const [xLo, xHi] = padRange(Math.min(...xs), Math.max(...xs));
  const [yLo, yHi] = padRange(Math.min(...ys), Math.max(...ys));

  const xScale: Scale = opts.logX
    ? logScale(Math.min(...xs), Math.max(...xs), x0, x1)
    : linearScale(xLo, xHi, x0, x1, 6);
  const yScale = linearScale(yLo, yHi, y0, y1, 5);

  for (const t of xScale.ticks) {
    const px = xScale.map(t);
    svg.line(px, y0, px, y1, GRID);
    svg.line(px, y0, px, y0 + 4, AXIS);
    svg.text(px - 8, y0 + 16, formatTick(t), LABEL);
  }
  for (const t of yScale.ticks) {
    const py = yScale.map(t);
    svg.line(x0, py, x1, py, GRID);
    svg.line(x0 - 4, py, x0, py, AXIS);
    svg.text(8, py + 4, formatTick(t), LABEL);
  }
  svg.line(x0, y0, x1, y0, AXIS);
  svg.line(x0, y0, x0, y1, AXIS);
  svg.text((x0 + x1) / 2 - 20, H - 12, axisLabelX(doc), LABEL);
  svg.text(8, MARGIN.top - 4, axisLabelY(doc), LABEL);

  if (doc.reference !== null) {
    const py = yScale.map(doc.reference);
    svg.line(x0, py, x1, py, REFLINE);
    const note = doc.reference_note
      ? `limit ${formatTick(doc.reference)} (${doc.reference_note})`
      : `limit ${formatTick(doc.reference)}`;
    svg.text(x1 - 220, py - 6, note, LABEL);
  }

  // tower rows joined by straight lines, one polyline per tower id
  const towers = new Map<string, PlotRow[]>();
  for (const r of doc.rows) {
    if (r.tower !== null) {
      const lst = towers.get(r.tower) ?? [];
      lst.push(r);
      towers.set(r.tower, lst);
    }
  }
  for (const key of [...towers.keys()].sort()) {
    const pts = towers
      .get(key)!
      .map((r): [number, number] => [xScale.map(r.x), yScale.map(r.y)]);
    if (pts.length > 1) svg.polyline(pts, TOWER_LINE);
  }

  for (const r of doc.rows) {
    const px = xScale.map(r.x);
    const py = yScale.map(r.y);
    if (r.is_prime) {
      svg.diamond(px, py, 4, PRIME_POINT);
    } else {
      svg.circle(px, py, 3, POINT);
    }
  }
  return svg.render();
}
