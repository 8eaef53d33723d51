import { Figure, ResolvedPanel, formatTick, resolve } from './scene.js';

const F = (v: number): string => v.toFixed(2);

function esc(s: string): string {
  return s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}

function panelSvg(panel: ResolvedPanel, clipId: string): string {
  const [x0, y0, w, h] = panel.box;
  const parts: string[] = [];
  parts.push(`<rect x="${F(x0)}" y="${F(y0)}" width="${F(w)}" height="${F(h)}" fill="white" stroke="black" stroke-width="1"/>`);

  const tickFont = panel.inset ? 8 : 11;
  for (const t of panel.xTicks) {
    const px = panel.xScale(t);
    if (px < x0 - 0.5 || px > x0 + w + 0.5) continue;
    parts.push(`<line x1="${F(px)}" y1="${F(y0 + h)}" x2="${F(px)}" y2="${F(y0 + h - 4)}" stroke="black" stroke-width="1"/>`);
    parts.push(`<text x="${F(px)}" y="${F(y0 + h + tickFont + 3)}" font-size="${tickFont}" text-anchor="middle" font-family="sans-serif">${esc(formatTick(t))}</text>`);
  }
  for (const t of panel.yTicks) {
    const py = panel.yScale(t);
    if (py < y0 - 0.5 || py > y0 + h + 0.5) continue;
    parts.push(`<line x1="${F(x0)}" y1="${F(py)}" x2="${F(x0 + 4)}" y2="${F(py)}" stroke="black" stroke-width="1"/>`);
    parts.push(`<text x="${F(x0 - 5)}" y="${F(py + tickFont / 3)}" font-size="${tickFont}" text-anchor="end" font-family="sans-serif">${esc(formatTick(t))}</text>`);
  }

  const labelFont = panel.inset ? 9 : 13;
  parts.push(`<text x="${F(x0 + w / 2)}" y="${F(y0 + h + (panel.inset ? 20 : 34))}" font-size="${labelFont}" text-anchor="middle" font-family="sans-serif">${esc(panel.xLabel)}</text>`);
  parts.push(`<text x="${F(x0 - (panel.inset ? 26 : 46))}" y="${F(y0 + h / 2)}" font-size="${labelFont}" text-anchor="middle" font-family="sans-serif" transform="rotate(-90 ${F(x0 - (panel.inset ? 26 : 46))} ${F(y0 + h / 2)})">${esc(panel.yLabel)}</text>`);
  if (panel.title) {
    parts.push(`<text x="${F(x0 + 4)}" y="${F(y0 - 6)}" font-size="12" font-family="sans-serif">${esc(panel.title)}</text>`);
  }
  if (panel.note) {
    parts.push(`<text x="${F(x0 + w / 2)}" y="${F(y0 + h / 2)}" font-size="11" fill="#888888" text-anchor="middle" font-family="sans-serif">${esc(panel.note)}</text>`);
  }

  const data: string[] = [];
  for (const mark of panel.marks) {
    if (mark.kind === 'line') {
      if (mark.points.length === 0) continue;
      const pts = mark.points
        .map((p) => `${F(panel.xScale(p.x))},${F(panel.yScale(p.y))}`)
        .join(' ');
      const dash = mark.dash ? ' stroke-dasharray="5,3"' : '';
      data.push(`<polyline points="${pts}" fill="none" stroke="${mark.color}" stroke-width="${mark.width ?? 1}"${dash}/>`);
    } else if (mark.kind === 'scatter') {
      const r = mark.radius ?? 1.2;
      for (const p of mark.points) {
        data.push(`<circle cx="${F(panel.xScale(p.x))}" cy="${F(panel.yScale(p.y))}" r="${r}" fill="${mark.color}"/>`);
      }
    } else {
      const baseY = panel.yScale(mark.base ?? 0);
      for (const p of mark.points) {
        const px = panel.xScale(p.x);
        data.push(`<line x1="${F(px)}" y1="${F(baseY)}" x2="${F(px)}" y2="${F(panel.yScale(p.y))}" stroke="${mark.color}" stroke-width="1.2"/>`);
        data.push(`<circle cx="${F(px)}" cy="${F(panel.yScale(p.y))}" r="1.8" fill="${mark.color}"/>`);
      }
    }
  }
  parts.push(`<g clip-path="url(#${clipId})">${data.join('')}</g>`);
  return parts.join('\n');
}

export function renderSvg(figure: Figure): string {
  const panels = resolve(figure);
  const clips = panels
    .map((p, i) => {
      const [x0, y0, w, h] = p.box;
      return `<clipPath id="clip${i}"><rect x="${F(x0)}" y="${F(y0)}" width="${F(w)}" height="${F(h)}"/></clipPath>`;
    })
    .join('');
  const body = panels.map((p, i) => panelSvg(p, `clip${i}`)).join('\n');
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${figure.width}" height="${figure.height}" viewBox="0 0 ${figure.width} ${figure.height}">`,
    `<defs>${clips}</defs>`,
    `<rect width="${figure.width}" height="${figure.height}" fill="white"/>`,
    `<text x="${F(figure.width / 2)}" y="18" font-size="14" text-anchor="middle" font-family="sans-serif">${esc(figure.title)}</text>`,
    body,
    `</svg>`,
    ``,
  ].join('\n');
}
