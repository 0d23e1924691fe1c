import { describe, expect, it } from 'vitest';
import { formatTick, linearScale, logScale, padRange } from '../src/scale.js';

describe('linearScale', () => {
  it('maps endpoints to the pixel range', () => {
    const s = linearScale(0, 10, 100, 500);
    expect(s.map(0)).toBe(100);
    expect(s.map(10)).toBe(500);
    expect(s.map(5)).toBe(300);
  });

  it('places ticks at nice steps covering the range', () => {
    const s = linearScale(0, 10, 0, 1);
    expect(s.ticks[0]).toBeGreaterThanOrEqual(0);
    expect(s.ticks[s.ticks.length - 1]).toBeLessThanOrEqual(10 + 1e-9);
    for (let i = 1; i < s.ticks.length; i++) {
      expect(s.ticks[i]).toBeGreaterThan(s.ticks[i - 1]);
    }
  });

  it('survives a degenerate range', () => {
    const s = linearScale(3, 3, 0, 100);
    expect(Number.isFinite(s.map(3))).toBe(true);
    expect(s.ticks.length).toBeGreaterThan(0);
  });

  it('snaps the zero tick exactly', () => {
    const s = linearScale(-0.35, 0.65, 0, 1);
    expect(s.ticks).toContain(0);
  });
});

describe('logScale', () => {
  it('is monotone and hits decade ticks', () => {
    const s = logScale(1, 1000, 0, 300);
    expect(s.map(1)).toBe(0);
    expect(s.map(1000)).toBe(300);
    expect(s.ticks).toEqual([1, 10, 100, 1000]);
  });

  it('rejects nonpositive data', () => {
    expect(() => logScale(0, 10, 0, 1)).toThrow(RangeError);
    expect(() => logScale(-2, 10, 0, 1)).toThrow(RangeError);
  });
});

describe('formatTick', () => {
  it('uses plain notation in the mid range', () => {
    expect(formatTick(0)).toBe('0');
    expect(formatTick(0.25)).toBe('0.25');
    expect(formatTick(1500)).toBe('1500');
    expect(formatTick(-3)).toBe('-3');
  });

  it('uses compact exponents outside it', () => {
    expect(formatTick(1e-5)).toBe('1e-5');
    expect(formatTick(1e7)).toBe('1e7');
  });

  it('trims trailing zeros', () => {
    expect(formatTick(0.5)).toBe('0.5');
    expect(formatTick(2)).toBe('2');
  });
});

describe('padRange', () => {
  it('pads symmetric fractions', () => {
    const [lo, hi] = padRange(0, 100);
    expect(lo).toBeLessThan(0);
    expect(hi).toBeGreaterThan(100);
    expect(hi - 100).toBeCloseTo(0 - lo, 12);
  });

  it('widens a point range', () => {
    expect(padRange(5, 5)).toEqual([4, 6]);
  });
});
