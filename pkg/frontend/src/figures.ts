import { join } from 'path';
import { ENTROPY_SCHEMA, SECTIONS_SCHEMA, SchemaError, Table, loadTable, supportSchema } from './csv.js';
import { Figure, Mark, Panel, XY } from './scene.js';

export interface BuildResult {
  figure: Figure;
  warnings: string[];
}

export interface Options {
  /** section projections as column pairs, e.g. ["z", "p"] */
  fig1PanelA: [string, string];
  fig1PanelB: [string, string];
}

export const DEFAULT_OPTIONS: Options = {
  fig1PanelA: ['z', 'p'],
  fig1PanelB: ['phi', 'cos_theta'],
};

const BLUE = '#1f6fb4';
const RED = '#c23b22';

const SECTION_COORDS: Record<string, { label: string; get: (t: Table, i: number) => number }> = {
  z: { label: 'z / lambda', get: (t, i) => t.data.get('z_over_lambda')![i] },
  p: { label: 'p (hbar k)', get: (t, i) => t.data.get('p_over_hbark')![i] },
  theta: { label: 'theta (rad)', get: (t, i) => t.data.get('theta')![i] },
  phi: { label: 'phi (rad)', get: (t, i) => t.data.get('phi')![i] },
  cos_theta: { label: 'cos theta', get: (t, i) => Math.cos(t.data.get('theta')![i]) },
};

function sectionPoints(table: Table, proj: [string, string]): { points: XY[]; xLabel: string; yLabel: string } {
  for (const name of proj) {
    if (!SECTION_COORDS[name]) {
      throw new SchemaError(
        `unknown section projection '${name}'; choose from ${Object.keys(SECTION_COORDS).join(', ')}`,
      );
    }
  }
  const [cx, cy] = [SECTION_COORDS[proj[0]], SECTION_COORDS[proj[1]]];
  const points: XY[] = [];
  for (let i = 0; i < table.rows; i++) points.push({ x: cx.get(table, i), y: cy.get(table, i) });
  return { points, xLabel: cx.label, yLabel: cy.label };
}

function seriesPoints(table: Table): XY[] {
  const t = table.data.get('time')!;
  const s = table.data.get('entropy')!;
  return t.map((x, i) => ({ x, y: s[i] }));
}

function entropyPanel(table: Table, title: string, color: string,
                      warnings: string[], label: string): Panel {
  const points = seriesPoints(table);
  const marks: Mark[] = points.length ? [{ kind: 'line', points, color }] : [];
  const panel: Panel = { title, xLabel: label, yLabel: 'S', marks };
  if (!points.length) {
    panel.note = 'no data';
    panel.xRange = [0, 1];
    panel.yRange = [0, 1];
    warnings.push(`${title}: empty entropy series, axes-only panel`);
  }
  return panel;
}

function timeLabel(table: Table): string {
  const tag = table.comments.find((c) => c.includes('time_units='));
  if (tag && tag.includes('kicks')) return 'kicks n';
  return 'tau = E_R t / hbar';
}

export function buildFigure(id: string, inDir: string,
                            options: Options = DEFAULT_OPTIONS): BuildResult {
  switch (id) {
    case 'fig1': return fig1(inDir, options);
    case 'fig2': return fig2(inDir);
    case 'fig3': return figSupport(inDir, 'fig3', 'E_R', 'eigenenergy (E_R)');
    case 'fig4': return fig4(inDir);
    case 'fig5': return figSupport(inDir, 'fig5', 'radians', 'eigenphase (rad)');
    case 'fig6': return fig6(inDir);
    default:
      throw new SchemaError(`unknown figure id '${id}' (fig1..fig6)`);
  }
}

function fig1(inDir: string, options: Options): BuildResult {
  const warnings: string[] = [];
  const muY = loadTable(join(inDir, 'sections_mu_y.csv'), SECTIONS_SCHEMA);
  const pSec = loadTable(join(inDir, 'sections_p.csv'), SECTIONS_SCHEMA);
  const a = sectionPoints(muY, options.fig1PanelA);
  const b = sectionPoints(pSec, options.fig1PanelB);
  const panels: Panel[] = [
    {
      title: '(a) mu_y = 0, d mu_y/dt > 0',
      xLabel: a.xLabel, yLabel: a.yLabel,
      marks: [{ kind: 'scatter', points: a.points, color: 'black', radius: 0.8 }],
    },
    {
      title: '(b) p = 0, dp/dt > 0',
      xLabel: b.xLabel, yLabel: b.yLabel,
      marks: [{ kind: 'scatter', points: b.points, color: 'black', radius: 0.8 }],
    },
  ];
  for (const [panel, table] of [[panels[0], muY], [panels[1], pSec]] as const) {
    if (!table.rows) {
      panel.note = 'no data';
      warnings.push(`${panel.title}: empty section file`);
    }
  }
  return {
    figure: { width: 900, height: 420, title: 'Classical Poincare sections', panels, columns: 2 },
    warnings,
  };
}

function fig2(inDir: string): BuildResult {
  const warnings: string[] = [];
  const reg = loadTable(join(inDir, 'entropy_regular.csv'), ENTROPY_SCHEMA);
  const cha = loadTable(join(inDir, 'entropy_chaotic.csv'), ENTROPY_SCHEMA);
  const label = timeLabel(reg);
  const panels: Panel[] = [
    entropyPanel(reg, '(a) regular island', BLUE, warnings, label),
    entropyPanel(cha, '(b) chaotic sea', RED, warnings, label),
  ];
  const regPts = seriesPoints(reg);
  const chaPts = seriesPoints(cha);
  if (regPts.length && chaPts.length) {
    const tEnd = Math.min(0.2, regPts[regPts.length - 1].x);
    panels.push({
      xLabel: '', yLabel: '',
      marks: [
        { kind: 'line', points: regPts.filter((p) => p.x <= tEnd), color: BLUE },
        { kind: 'line', points: chaPts.filter((p) => p.x <= tEnd), color: RED, dash: true },
      ],
      inset: { parent: 1, rect: [0.52, 0.55, 0.42, 0.38] },
    });
  }
  return {
    figure: { width: 900, height: 420, title: 'Entanglement vs time', panels, columns: 2 },
    warnings,
  };
}

function figSupport(inDir: string, id: string, units: 'E_R' | 'radians',
                    xLabel: string): BuildResult {
  const warnings: string[] = [];
  const schema = supportSchema(units);
  const reg = loadTable(join(inDir, 'support_regular.csv'), schema);
  const cha = loadTable(join(inDir, 'support_chaotic.csv'), schema);

  const panels: Panel[] = [];
  for (const [table, title, color] of [[reg, '(a) regular', BLUE], [cha, '(b) chaotic', RED]] as const) {
    const ev = table.data.get('eigenvalue')!;
    const pop = table.data.get('population')!;
    const points: XY[] = ev.map((x, i) => ({ x, y: pop[i] }));
    const panel: Panel = {
      title, xLabel, yLabel: 'population',
      marks: [{ kind: 'stem', points, color, base: 0 }],
      yRange: [0, Math.max(...pop.map((v) => v), 1e-3) * 1.1],
    };
    if (!table.rows) {
      panel.note = 'no data';
      panel.yRange = [0, 1];
      warnings.push(`${title}: empty support file`);
    }
    panels.push(panel);
  }
  const titles: Record<string, string> = {
    fig3: 'Eigenstate support of the lattice initial states',
    fig5: 'Floquet eigenstate support of the kicked-top states',
  };
  return { figure: { width: 900, height: 420, title: titles[id], panels, columns: 2 }, warnings };
}

function fig4(inDir: string): BuildResult {
  const warnings: string[] = [];
  const full = loadTable(join(inDir, 'entropy_regular.csv'), ENTROPY_SCHEMA);
  const trunc = loadTable(join(inDir, 'entropy_regular_truncated.csv'), ENTROPY_SCHEMA);
  const label = timeLabel(full);
  const fullPts = seriesPoints(full);
  const truncPts = seriesPoints(trunc);
  const early = (pts: XY[]) => pts.filter((p) => p.x <= 20.0);
  const panelA: Panel = {
    title: '(a) full vs truncated (dashed)',
    xLabel: label, yLabel: 'S',
    marks: [
      { kind: 'line', points: early(fullPts), color: BLUE },
      { kind: 'line', points: early(truncPts), color: RED, dash: true },
    ],
  };
  const panelB: Panel = {
    title: '(b) long-term behavior',
    xLabel: label, yLabel: 'S',
    marks: [{ kind: 'line', points: fullPts, color: BLUE }],
  };
  if (!fullPts.length) {
    panelA.note = panelB.note = 'no data';
    warnings.push('fig4: empty entropy series');
  }
  return {
    figure: {
      width: 900, height: 420,
      title: 'Truncated eigenbasis reconstruction (lattice regular state)',
      panels: [panelA, panelB], columns: 2,
    },
    warnings,
  };
}

function fig6(inDir: string): BuildResult {
  const warnings: string[] = [];
  const full = loadTable(join(inDir, 'entropy_regular.csv'), ENTROPY_SCHEMA);
  const trunc = loadTable(join(inDir, 'entropy_regular_truncated.csv'), ENTROPY_SCHEMA);
  const cha = loadTable(join(inDir, 'entropy_chaotic.csv'), ENTROPY_SCHEMA);
  const fullPts = seriesPoints(full);
  const truncPts = seriesPoints(trunc);
  const chaPts = seriesPoints(cha);
  const panelA: Panel = {
    title: '(a) regular: full vs 3-state (dashed)',
    xLabel: 'kicks n', yLabel: 'S',
    marks: [
      { kind: 'line', points: fullPts, color: BLUE },
      { kind: 'line', points: truncPts, color: RED, dash: true },
    ],
  };
  const panelB: Panel = {
    title: '(b) chaotic: initial rise',
    xLabel: 'kicks n', yLabel: 'S',
    marks: [{ kind: 'line', points: chaPts.filter((p) => p.x <= 40), color: RED }],
  };
  const panels = [panelA, panelB];
  if (chaPts.length) {
    panels.push({
      xLabel: '', yLabel: '',
      marks: [{ kind: 'line', points: chaPts, color: RED }],
      inset: { parent: 1, rect: [0.5, 0.6, 0.45, 0.33] },
    });
  } else {
    panelB.note = 'no data';
    warnings.push('fig6: empty chaotic entropy series');
  }
  if (!fullPts.length) {
    panelA.note = 'no data';
    warnings.push('fig6: empty regular entropy series');
  }
  return {
    figure: {
      width: 900, height: 420,
      title: 'Kicked-top pair entanglement', panels, columns: 2,
    },
    warnings,
  };
}
