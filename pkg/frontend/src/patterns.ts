// Pattern rendering: the issued identifier drawn on a 3x3 dot grid with
// directed strokes and a ring on the starting dot, as the user will draw it
// on the device.

const SPACING = 40;
const OFFSET = 20;
const SIZE = 2 * OFFSET + 2 * SPACING;

export function dotCenter(dot: number): { x: number; y: number } {
  const col = (dot - 1) % 3;
  const row = Math.floor((dot - 1) / 3);
  return { x: OFFSET + col * SPACING, y: OFFSET + row * SPACING };
}

export function isRenderablePattern(dots: unknown): dots is number[] {
  if (!Array.isArray(dots) || dots.length < 2 || dots.length > 9) return false;
  if (!dots.every((d) => Number.isInteger(d) && d >= 1 && d <= 9)) return false;
  return new Set(dots).size === dots.length;
}

function gridDots(): string {
  let out = '';
  for (let d = 1; d <= 9; d += 1) {
    const { x, y } = dotCenter(d);
    out += `<circle class="grid-dot" cx="${x}" cy="${y}" r="4"/>`;
  }
  return out;
}

/** SVG markup for a pattern identifier. Invalid input renders a visible
 * error state over the grid, never a blank. */
export function renderPatternSvg(dots: unknown): string {
  const open =
    `<svg class="pattern" viewBox="0 0 ${SIZE} ${SIZE}" width="${SIZE * 1.5}" height="${SIZE * 1.5}" ` +
    `xmlns="http://www.w3.org/2000/svg" role="img">`;
  if (!isRenderablePattern(dots)) {
    return (
      `${open}${gridDots()}` +
      `<text class="pattern-error" x="${SIZE / 2}" y="${SIZE / 2}" text-anchor="middle">` +
      `invalid pattern</text></svg>`
    );
  }
  const arrow =
    '<defs><marker id="stroke-arrow" viewBox="0 0 10 10" refX="9" refY="5" ' +
    'markerWidth="5" markerHeight="5" orient="auto-start-reverse">' +
    '<path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>';
  let strokes = '';
  for (let i = 0; i < dots.length - 1; i += 1) {
    const a = dotCenter(dots[i]);
    const b = dotCenter(dots[i + 1]);
    strokes +=
      `<line class="stroke" x1="${a.x}" y1="${a.y}" x2="${b.x}" y2="${b.y}" ` +
      'marker-end="url(#stroke-arrow)"/>';
  }
  let nodes = '';
  for (const d of dots) {
    const { x, y } = dotCenter(d);
    nodes += `<circle class="pattern-dot" cx="${x}" cy="${y}" r="5"/>`;
  }
  const start = dotCenter(dots[0]);
  const startMarker = `<circle class="start-marker" cx="${start.x}" cy="${start.y}" r="10"/>`;
  return `${open}${arrow}${gridDots()}${strokes}${nodes}${startMarker}</svg>`;
}
