/**
 * Software rasterizer and PNG encoder for the figure scenes.  Everything is
 * integer pixel math plus a fixed-level zlib deflate, so identical scenes
 * produce byte-identical PNG files.
 */

import * as zlib from 'zlib';
import { GLYPH_H, GLYPH_W, glyph } from './font.js';
import { Figure, formatTick, resolve } from './scene.js';

type RGB = [number, number, number];

const COLORS: Record<string, RGB> = {
  black: [0, 0, 0],
  '#1f6fb4': [31, 111, 180],
  '#c23b22': [194, 59, 34],
  '#2d8a4d': [45, 138, 77],
  '#888888': [136, 136, 136],
};

function colorOf(name: string): RGB {
  if (COLORS[name]) return COLORS[name];
  if (name.startsWith('#') && name.length === 7) {
    return [
      parseInt(name.slice(1, 3), 16),
      parseInt(name.slice(3, 5), 16),
      parseInt(name.slice(5, 7), 16),
    ];
  }
  return [0, 0, 0];
}

export class Canvas {
  readonly width: number;
  readonly height: number;
  readonly pixels: Uint8Array; // RGB, row-major

  constructor(width: number, height: number) {
    this.width = width;
    this.height = height;
    this.pixels = new Uint8Array(width * height * 3).fill(255);
  }

  set(x: number, y: number, rgb: RGB): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const i = (y * this.width + x) * 3;
    this.pixels[i] = rgb[0];
    this.pixels[i + 1] = rgb[1];
    this.pixels[i + 2] = rgb[2];
  }

  hline(x0: number, x1: number, y: number, rgb: RGB): void {
    for (let x = Math.min(x0, x1); x <= Math.max(x0, x1); x++) this.set(x, y, rgb);
  }

  vline(x: number, y0: number, y1: number, rgb: RGB): void {
    for (let y = Math.min(y0, y1); y <= Math.max(y0, y1); y++) this.set(x, y, rgb);
  }

  rect(x0: number, y0: number, w: number, h: number, rgb: RGB): void {
    this.hline(x0, x0 + w, y0, rgb);
    this.hline(x0, x0 + w, y0 + h, rgb);
    this.vline(x0, y0, y0 + h, rgb);
    this.vline(x0 + w, y0, y0 + h, rgb);
  }

  line(x0: number, y0: number, x1: number, y1: number, rgb: RGB, clip?: [number, number, number, number]): void {
    // Bresenham; optional clip rectangle in pixel coordinates
    const inside = (x: number, y: number) =>
      !clip || (x >= clip[0] && x <= clip[0] + clip[2] && y >= clip[1] && y <= clip[1] + clip[3]);
    let [x, y] = [x0, y0];
    const dx = Math.abs(x1 - x0);
    const dy = -Math.abs(y1 - y0);
    const sx = x0 < x1 ? 1 : -1;
    const sy = y0 < y1 ? 1 : -1;
    let err = dx + dy;
    for (;;) {
      if (inside(x, y)) this.set(x, y, rgb);
      if (x === x1 && y === y1) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y += sy;
      }
    }
  }

  disc(cx: number, cy: number, r: number, rgb: RGB, clip?: [number, number, number, number]): void {
    for (let y = -r; y <= r; y++) {
      for (let x = -r; x <= r; x++) {
        if (x * x + y * y <= r * r) {
          const px = cx + x;
          const py = cy + y;
          if (!clip || (px >= clip[0] && px <= clip[0] + clip[2] && py >= clip[1] && py <= clip[1] + clip[3])) {
            this.set(px, py, rgb);
          }
        }
      }
    }
  }

  text(s: string, x: number, y: number, rgb: RGB, scale = 2,
       anchor: 'start' | 'middle' | 'end' = 'start', rotate90 = false): void {
    const widthPx = s.length * (GLYPH_W + 1) * scale;
    let ox = x;
    let oy = y;
    if (!rotate90) {
      if (anchor === 'middle') ox -= Math.floor(widthPx / 2);
      if (anchor === 'end') ox -= widthPx;
    } else {
      if (anchor === 'middle') oy += Math.floor(widthPx / 2);
      if (anchor === 'end') oy += widthPx;
    }
    for (let k = 0; k < s.length; k++) {
      const g = glyph(s[k]);
      for (let gy = 0; gy < GLYPH_H; gy++) {
        for (let gx = 0; gx < GLYPH_W; gx++) {
          if (g[gy][gx] !== 'X') continue;
          for (let sy = 0; sy < scale; sy++) {
            for (let sx = 0; sx < scale; sx++) {
              const px = gx * scale + sx;
              const py = gy * scale + sy;
              if (rotate90) {
                this.set(ox + py, oy - (k * (GLYPH_W + 1) * scale + px), rgb);
              } else {
                this.set(ox + k * (GLYPH_W + 1) * scale + px, oy + py, rgb);
              }
            }
          }
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// PNG encoding

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(data: Uint8Array): number {
  let c = 0xffffffff;
  for (const b of data) c = CRC_TABLE[(c ^ b) & 0xff] ^ (c >>> 8);
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, data: Uint8Array): Buffer {
  const head = Buffer.alloc(8);
  head.writeUInt32BE(data.length, 0);
  head.write(type, 4, 'ascii');
  const body = Buffer.concat([head.subarray(4), Buffer.from(data)]);
  const crc = Buffer.alloc(4);
  crc.writeUInt32BE(crc32(body), 0);
  return Buffer.concat([head.subarray(0, 4), body, crc]);
}

export function encodePng(canvas: Canvas): Buffer {
  const { width, height, pixels } = canvas;
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(width, 0);
  ihdr.writeUInt32BE(height, 4);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 2; // color type: truecolor RGB
  ihdr[10] = 0;
  ihdr[11] = 0;
  ihdr[12] = 0;

  const stride = width * 3;
  const raw = Buffer.alloc((stride + 1) * height);
  for (let y = 0; y < height; y++) {
    raw[y * (stride + 1)] = 0; // filter: none
    raw.set(pixels.subarray(y * stride, (y + 1) * stride), y * (stride + 1) + 1);
  }
  const idat = zlib.deflateSync(raw, { level: 9, strategy: zlib.constants.Z_DEFAULT_STRATEGY });

  return Buffer.concat([
    Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    chunk('IHDR', ihdr),
    chunk('IDAT', idat),
    chunk('IEND', new Uint8Array(0)),
  ]);
}

// ---------------------------------------------------------------------------
// scene -> raster

const SCALE = 2;

export function renderPng(figure: Figure): Buffer {
  const canvas = new Canvas(figure.width * SCALE, figure.height * SCALE);
  const panels = resolve(figure);
  const black: RGB = [0, 0, 0];

  canvas.text(figure.title, Math.round((figure.width * SCALE) / 2), 8, black, 2, 'middle');

  for (const panel of panels) {
    const [bx, by, bw, bh] = panel.box.map((v) => Math.round(v * SCALE)) as [number, number, number, number];
    const clip: [number, number, number, number] = [bx, by, bw, bh];
    canvas.rect(bx, by, bw, bh, black);

    const tickScale = panel.inset ? 1 : 2;
    for (const t of panel.xTicks) {
      const px = Math.round(panel.xScale(t) * SCALE);
      if (px < bx || px > bx + bw) continue;
      canvas.vline(px, by + bh - 6, by + bh, black);
      canvas.text(formatTick(t), px, by + bh + 6, black, tickScale, 'middle');
    }
    for (const t of panel.yTicks) {
      const py = Math.round(panel.yScale(t) * SCALE);
      if (py < by || py > by + bh) continue;
      canvas.hline(bx, bx + 6, py, black);
      canvas.text(formatTick(t), bx - 6, py - 4 * tickScale, black, tickScale, 'end');
    }
    canvas.text(panel.xLabel, bx + Math.round(bw / 2), by + bh + (panel.inset ? 20 : 40), black, tickScale, 'middle');
    canvas.text(panel.yLabel, bx - (panel.inset ? 42 : 92), by + Math.round(bh / 2), black, tickScale, 'middle', true);
    if (panel.title) canvas.text(panel.title, bx + 6, by - 22, black, 2);
    if (panel.note) {
      canvas.text(panel.note, bx + Math.round(bw / 2), by + Math.round(bh / 2), [136, 136, 136], 2, 'middle');
    }

    for (const mark of panel.marks) {
      const rgb = colorOf(mark.color);
      if (mark.kind === 'line') {
        for (let i = 1; i < mark.points.length; i++) {
          if (mark.dash && i % 3 === 0) continue;
          canvas.line(
            Math.round(panel.xScale(mark.points[i - 1].x) * SCALE),
            Math.round(panel.yScale(mark.points[i - 1].y) * SCALE),
            Math.round(panel.xScale(mark.points[i].x) * SCALE),
            Math.round(panel.yScale(mark.points[i].y) * SCALE),
            rgb, clip,
          );
        }
      } else if (mark.kind === 'scatter') {
        const r = Math.max(1, Math.round((mark.radius ?? 1.2) * SCALE));
        for (const p of mark.points) {
          canvas.disc(
            Math.round(panel.xScale(p.x) * SCALE),
            Math.round(panel.yScale(p.y) * SCALE),
            r, rgb, clip,
          );
        }
      } else {
        const baseY = Math.round(panel.yScale(mark.base ?? 0) * SCALE);
        for (const p of mark.points) {
          const px = Math.round(panel.xScale(p.x) * SCALE);
          const py = Math.round(panel.yScale(p.y) * SCALE);
          canvas.vline(px, Math.min(baseY, py), Math.max(baseY, py), rgb);
          canvas.disc(px, py, 3, rgb, clip);
        }
      }
    }
  }
  return encodePng(canvas);
}
