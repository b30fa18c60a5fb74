// QR rendering. The module matrix comes from the qrcode encoder; the SVG is
// emitted here as one rect per dark module so tests can rasterize the exact
// markup we ship and decode it with an independent decoder.

import QRCode from 'qrcode';

const QUIET_ZONE = 4;

export interface QrSvg {
  svg: string;
  size: number; // modules per side, including the quiet zone
}

export function renderQr(text: string): QrSvg {
  if (!text) {
    throw new Error('cannot render an empty QR payload');
  }
  const code = QRCode.create(text, { errorCorrectionLevel: 'M' });
  const n = code.modules.size;
  const total = n + 2 * QUIET_ZONE;
  let rects = '';
  for (let row = 0; row < n; row += 1) {
    for (let col = 0; col < n; col += 1) {
      if (code.modules.data[row * n + col]) {
        rects += `<rect class="qr-module" x="${col + QUIET_ZONE}" y="${row + QUIET_ZONE}" width="1" height="1"/>`;
      }
    }
  }
  const svg =
    `<svg class="qr" viewBox="0 0 ${total} ${total}" width="${total * 4}" height="${total * 4}" ` +
    'xmlns="http://www.w3.org/2000/svg" shape-rendering="crispEdges" role="img">' +
    `<rect class="qr-bg" x="0" y="0" width="${total}" height="${total}" fill="#fff"/>` +
    `<g fill="#000">${rects}</g></svg>`;
  return { svg, size: total };
}

export function renderQrSvg(text: string): string {
  return renderQr(text).svg;
}
