/** Deterministic linear/log scales and "nice" tick placement. */

export interface Scale {
  /** data -> pixel */
  map(v: number): number;
  ticks: number[];
  readonly log: boolean;
}

/** Fixed-notation formatter: no exponent flip-flopping between
 * platforms, no trailing zeros beyond what the step size needs. */
export function formatTick(v: number): string {
  if (v === 0) return '0';
  const a = Math.abs(v);
  if (a >= 1e6 || a < 1e-4) {
    // one significant digit keeps log-scale labels compact: 1e-5, 1e6
    const e = Math.floor(Math.log10(a));
    const m = v / Math.pow(10, e);
    const mr = Math.round(m * 100) / 100;
    return (mr === 1 ? '' : mr === -1 ? '-' : `${trim(mr)}x`) + `1e${e}`;
  }
  return trim(v);
}

function trim(v: number): string {
  // up to 6 significant digits, trailing zeros removed
  let s = v.toPrecision(6);
  if (s.includes('.')) s = s.replace(/0+$/, '').replace(/\.$/, '');
  return s;
}

function niceStep(span: number, target: number): number {
  const raw = span / Math.max(target, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= raw) return m * mag;
  }
  return 10 * mag;
}

export function linearScale(
  lo: number,
  hi: number,
  pxLo: number,
  pxHi: number,
  tickCount = 5,
): Scale {
  if (hi === lo) {
    lo -= 1;
    hi += 1;
  }
  const step = niceStep(hi - lo, tickCount);
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
    // snap tiny float drift so 0.30000000000000004 labels as 0.3
    ticks.push(Math.abs(t) < step * 1e-6 ? 0 : t);
  }
  const map = (v: number) => pxLo + ((v - lo) / (hi - lo)) * (pxHi - pxLo);
  return { map, ticks, log: false };
}

export function logScale(
  lo: number,
  hi: number,
  pxLo: number,
  pxHi: number,
): Scale {
  if (lo <= 0) {
    throw new RangeError(`log axis needs positive data, got min ${lo}`);
  }
  const llo = Math.log10(lo);
  const lhi = hi === lo ? llo + 1 : Math.log10(hi);
  const ticks: number[] = [];
  for (let e = Math.ceil(llo - 1e-9); e <= lhi + 1e-9; e++) {
    ticks.push(Math.pow(10, e));
  }
  const map = (v: number) =>
    pxLo + ((Math.log10(v) - llo) / (lhi - llo)) * (pxHi - pxLo);
  return { map, ticks, log: true };
}

/** Pad a [min, max] data range by a fraction on each side. */
export function padRange(lo: number, hi: number, frac = 0.06): [number, number] {
  if (lo === hi) return [lo - 1, hi + 1];
  const pad = (hi - lo) * frac;
  return [lo - pad, hi + pad];
}
