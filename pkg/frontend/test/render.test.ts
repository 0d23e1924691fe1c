import { readFileSync } from 'fs';
import { describe, expect, it } from 'vitest';
import { PlotDataFile, parsePlotData } from '../src/plotdata.js';
import { renderSvg } from '../src/render.js';

const fixture = (name: string): PlotDataFile =>
  parsePlotData(
    readFileSync(new URL(`./fixtures/${name}`, import.meta.url), 'utf8'),
  );

const count = (hay: string, needle: RegExp) =>
  (hay.match(new RegExp(needle.source, 'g')) ?? []).length;

describe('renderSvg on the reference fixture', () => {
  const doc = fixture('gl3_ratio.json');
  const svg = renderSvg(doc);

  it('emits exactly one dashed horizontal reference line', () => {
    expect(count(svg, /stroke-dasharray/)).toBe(1);
    expect(svg).toContain('limit 0.000732476');
  });

  it('emits one marker per row, primes as diamonds', () => {
    const primes = doc.rows.filter((r) => r.is_prime).length;
    expect(count(svg, /<polygon /)).toBe(primes);
    expect(count(svg, /<circle /)).toBe(doc.rows.length - primes);
  });

  it('is byte-identical across re-renders', () => {
    expect(renderSvg(doc)).toBe(svg);
    expect(renderSvg(fixture('gl3_ratio.json'))).toBe(svg);
  });

  it('renders inside the 5 second budget', () => {
    const t0 = performance.now();
    for (let i = 0; i < 20; i++) renderSvg(doc);
    expect(performance.now() - t0).toBeLessThan(5000);
  });

  it('labels the axes from the header', () => {
    expect(svg).toContain('Index');
    expect(svg).toContain('Log torsion / Index');
    expect(svg).toContain('gl3-Q degree 3 (ratio)');
  });
});

describe('tower series', () => {
  it('joins tower rows with a polyline', () => {
    const doc = fixture('qi_tower.json');
    const svg = renderSvg(doc);
    expect(count(svg, /<polyline /)).toBe(1);
    // the polyline has one vertex per tower row
    const pts = svg.match(/<polyline points="([^"]+)"/)![1];
    expect(pts.split(' ')).toHaveLength(doc.rows.length);
  });

  it('draws no polyline when rows carry no tower id', () => {
    const doc = fixture('gl3_ratio.json');
    expect(renderSvg(doc)).not.toContain('<polyline');
  });
});

describe('edge cases', () => {
  it('empty data produces a warning annotation, not a crash', () => {
    const doc = fixture('gl3_ratio.json');
    doc.rows = [];
    const svg = renderSvg(doc);
    expect(svg).toContain('no data rows');
    expect(svg).not.toContain('<circle');
  });

  it('null reference omits the limit line', () => {
    const doc = fixture('gl3_ratio.json');
    doc.reference = null;
    const svg = renderSvg(doc);
    expect(svg).not.toContain('stroke-dasharray');
    expect(svg).not.toContain('limit ');
  });

  it('conjecturally-zero note is printed with the line', () => {
    const doc = fixture('gl3_ratio.json');
    doc.reference = 0;
    doc.reference_note = 'conjecturally zero';
    expect(renderSvg(doc)).toContain('limit 0 (conjecturally zero)');
  });

  it('euler mode switches the y axis label', () => {
    const doc = fixture('gl3_ratio.json');
    doc.mode = 'euler';
    expect(renderSvg(doc)).toContain('Alternating log torsion / Index');
  });

  it('log-x draws decade ticks', () => {
    const doc = fixture('gl3_ratio.json');
    const svg = renderSvg(doc, { logX: true });
    expect(svg).toContain('>10<');
    expect(svg).toContain('>100<');
  });

  it('custom titles are escaped', () => {
    const doc = fixture('gl3_ratio.json');
    const svg = renderSvg(doc, { title: 'a < b & c' });
    expect(svg).toContain('a &lt; b &amp; c');
  });
});
