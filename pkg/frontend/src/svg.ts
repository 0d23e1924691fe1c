/** Minimal deterministic SVG assembly: fixed attribute order, fixed
 * number formatting, no timestamps — identical input gives identical
 * bytes. */

export function num(v: number): string {
  // 2 decimal places is sub-pixel for a 640x400 canvas; fixed notation
  // keeps output stable across platforms
  const s = v.toFixed(2);
  return s === '-0.00' ? '0.00' : s;
}

export function esc(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export class SvgDoc {
  private parts: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
  ) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
        `height="${height}" viewBox="0 0 ${width} ${height}">`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, style: string): void {
    this.parts.push(
      `<line x1="${num(x1)}" y1="${num(y1)}" x2="${num(x2)}" ` +
        `y2="${num(y2)}" style="${style}"/>`,
    );
  }

  circle(cx: number, cy: number, r: number, style: string): void {
    this.parts.push(
      `<circle cx="${num(cx)}" cy="${num(cy)}" r="${num(r)}" ` +
        `style="${style}"/>`,
    );
  }

  /** diamond marker centered at (cx, cy) */
  diamond(cx: number, cy: number, r: number, style: string): void {
    const pts = [
      [cx, cy - r],
      [cx + r, cy],
      [cx, cy + r],
      [cx - r, cy],
    ]
      .map(([x, y]) => `${num(x)},${num(y)}`)
      .join(' ');
    this.parts.push(`<polygon points="${pts}" style="${style}"/>`);
  }

  polyline(points: Array<[number, number]>, style: string): void {
    const pts = points.map(([x, y]) => `${num(x)},${num(y)}`).join(' ');
    this.parts.push(`<polyline points="${pts}" fill="none" style="${style}"/>`);
  }

  text(x: number, y: number, content: string, style: string): void {
    this.parts.push(
      `<text x="${num(x)}" y="${num(y)}" style="${style}">` +
        `${esc(content)}</text>`,
    );
  }

  rect(x: number, y: number, w: number, h: number, style: string): void {
    this.parts.push(
      `<rect x="${num(x)}" y="${num(y)}" width="${num(w)}" ` +
        `height="${num(h)}" style="${style}"/>`,
    );
  }

  render(): string {
    return this.parts.join('\n') + '\n</svg>\n';
  }
}
