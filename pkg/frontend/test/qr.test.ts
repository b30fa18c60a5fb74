import jsQR from 'jsqr';
import { describe, expect, it } from 'vitest';

import { renderQr, renderQrSvg } from '../src/qr';

/** Rasterize the exact SVG markup we ship (a background rect plus one unit
 * rect per dark module) into RGBA pixels, so jsQR decodes our rendering and
 * not the encoder's. */
function rasterize(svg: string, scale = 4): { data: Uint8ClampedArray; width: number } {
  const doc = new DOMParser().parseFromString(svg, 'image/svg+xml');
  const root = doc.documentElement;
  const [, , side] = (root.getAttribute('viewBox') ?? '').split(' ').map(Number);
  const px = side * scale;
  const data = new Uint8ClampedArray(px * px * 4).fill(255);
  for (const rect of doc.querySelectorAll('.qr-module')) {
    const x = Number(rect.getAttribute('x'));
    const y = Number(rect.getAttribute('y'));
    for (let dy = 0; dy < scale; dy += 1) {
      for (let dx = 0; dx < scale; dx += 1) {
        const offset = ((y * scale + dy) * px + x * scale + dx) * 4;
        data[offset] = 0;
        data[offset + 1] = 0;
        data[offset + 2] = 0;
      }
    }
  }
  return { data, width: px };
}

describe('renderQr', () => {
  it('round-trips a canonical identifier through an independent decoder', () => {
    const canonical = 'QR:aB3dE5gH7jK9';
    const { data, width } = rasterize(renderQrSvg(canonical));
    const decoded = jsQR(data, width, width);
    expect(decoded?.data).toBe(canonical);
  });

  it('round-trips a provisioning payload', () => {
    const payload = '2d2fa://enroll?sn=demo&un=alice&key=' + 'ab'.repeat(16) + '&kind=qr';
    const { data, width } = rasterize(renderQrSvg(payload));
    expect(jsQR(data, width, width)?.data).toBe(payload);
  });

  it('rejects an empty payload', () => {
    expect(() => renderQrSvg('')).toThrow(/empty/);
  });

  it('re-renders cleanly for a new token', () => {
    const first = renderQr('QR:aaaaaaaaaaaa');
    const second = renderQr('QR:bbbbbbbbbbbb');
    expect(first.svg).not.toBe(second.svg);
    const { data, width } = rasterize(second.svg);
    expect(jsQR(data, width, width)?.data).toBe('QR:bbbbbbbbbbbb');
  });

  it('keeps a quiet zone around the modules', () => {
    const { svg } = renderQr('QR:aB3dE5gH7jK9');
    const doc = new DOMParser().parseFromString(svg, 'image/svg+xml');
    for (const rect of doc.querySelectorAll('.qr-module')) {
      expect(Number(rect.getAttribute('x'))).toBeGreaterThanOrEqual(4);
      expect(Number(rect.getAttribute('y'))).toBeGreaterThanOrEqual(4);
    }
  });
});
