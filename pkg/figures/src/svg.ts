/**
 * Small deterministic SVG plotting kit: linear/log scales, axes with ticks,
 * polyline series, markers and a legend.  Rendering is a pure function of
 * the inputs, so identical data yields byte-identical SVG.
 */

export interface Scale {
  (v: number): number;
  ticks(): number[];
}

function niceTicks(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step0 = span / Math.max(1, count);
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const candidates = [1, 2, 2.5, 5, 10].map((m) => m * mag);
  const step = candidates.find((s) => span / s <= count) ?? candidates[candidates.length - 1];
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= hi + 1e-12 * span; v += step) ticks.push(Number(v.toPrecision(12)));
  return ticks;
}

export function linearScale(lo: number, hi: number, rLo: number, rHi: number): Scale {
  const span = hi - lo || 1;
  const f = ((v: number) => rLo + ((v - lo) / span) * (rHi - rLo)) as Scale;
  f.ticks = () => niceTicks(lo, hi);
  return f;
}

export function logScale(lo: number, hi: number, rLo: number, rHi: number): Scale {
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const span = lhi - llo || 1;
  const f = ((v: number) => rLo + ((Math.log10(v) - llo) / span) * (rHi - rLo)) as Scale;
  f.ticks = () => {
    const ticks: number[] = [];
    for (let e = Math.ceil(llo - 1e-9); e <= Math.floor(lhi + 1e-9); e++) ticks.push(Math.pow(10, e));
    return ticks;
  };
  return f;
}

export const PALETTE = ["#1f6fb4", "#d1495b", "#3a9d5d", "#8a5fb0", "#c98a1c", "#3aa6a6", "#7f7f7f", "#ad3ca8"];
export const DASHES = ["", "6 3", "2 2", "8 3 2 3"];

function fmt(v: number): string {
  if (v === 0) return "0";
  const av = Math.abs(v);
  if (av >= 1e4 || av < 1e-3) return v.toExponential(0).replace("e+", "e");
  return Number(v.toPrecision(6)).toString();
}

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color?: string;
  dash?: string;
  marker?: boolean;
  /** When true, points are drawn in the given order (contour polylines). */
  raw?: boolean;
}

export interface PlotSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  xLog?: boolean;
  yLog?: boolean;
  series: Series[];
  width?: number;
  height?: number;
  hLines?: { y: number; label: string; color?: string }[];
}

const M = { left: 62, right: 16, top: 34, bottom: 46 };

export function renderPlot(spec: PlotSpec): string {
  const width = spec.width ?? 640;
  const height = spec.height ?? 440;
  const innerW = width - M.left - M.right;
  const innerH = height - M.top - M.bottom;

  const xs = spec.series.flatMap((s) => s.x);
  const ys = spec.series.flatMap((s) => s.y).concat((spec.hLines ?? []).map((h) => h.y));
  const xsF = xs.filter((v) => Number.isFinite(v) && (!spec.xLog || v > 0));
  const ysF = ys.filter((v) => Number.isFinite(v) && (!spec.yLog || v > 0));
  if (xsF.length === 0 || ysF.length === 0) throw new Error("no finite data to plot");
  let xLo = Math.min(...xsF);
  let xHi = Math.max(...xsF);
  let yLo = Math.min(...ysF);
  let yHi = Math.max(...ysF);
  if (!spec.yLog) {
    const pad = 0.05 * (yHi - yLo || Math.abs(yHi) || 1);
    yLo = Math.min(yLo, 0) === yLo && yLo >= 0 ? 0 : yLo - pad;
    yHi = yHi + pad;
  }
  const sx = spec.xLog
    ? logScale(xLo, xHi, M.left, M.left + innerW)
    : linearScale(xLo, xHi, M.left, M.left + innerW);
  const sy = spec.yLog
    ? logScale(yLo, yHi, M.top + innerH, M.top)
    : linearScale(yLo, yHi, M.top + innerH, M.top);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(
    `<text x="${width / 2}" y="18" text-anchor="middle" font-size="14" font-weight="bold">${spec.title}</text>`
  );

  // frame and grid
  parts.push(
    `<rect x="${M.left}" y="${M.top}" width="${innerW}" height="${innerH}" fill="none" stroke="#333" stroke-width="1"/>`
  );
  for (const t of sx.ticks()) {
    const px = sx(t).toFixed(2);
    parts.push(
      `<line x1="${px}" y1="${M.top}" x2="${px}" y2="${M.top + innerH}" stroke="#ddd" stroke-width="0.5"/>`,
      `<text x="${px}" y="${M.top + innerH + 16}" text-anchor="middle" font-size="11">${fmt(t)}</text>`
    );
  }
  for (const t of sy.ticks()) {
    const py = sy(t).toFixed(2);
    parts.push(
      `<line x1="${M.left}" y1="${py}" x2="${M.left + innerW}" y2="${py}" stroke="#ddd" stroke-width="0.5"/>`,
      `<text x="${M.left - 6}" y="${py}" text-anchor="end" dominant-baseline="middle" font-size="11">${fmt(t)}</text>`
    );
  }
  parts.push(
    `<text x="${M.left + innerW / 2}" y="${height - 10}" text-anchor="middle" font-size="12">${spec.xLabel}</text>`,
    `<text x="16" y="${M.top + innerH / 2}" text-anchor="middle" font-size="12" transform="rotate(-90 16 ${M.top + innerH / 2})">${spec.yLabel}</text>`
  );

  for (const h of spec.hLines ?? []) {
    const py = sy(h.y).toFixed(2);
    parts.push(
      `<line x1="${M.left}" y1="${py}" x2="${M.left + innerW}" y2="${py}" ` +
        `stroke="${h.color ?? "#666"}" stroke-width="1" stroke-dasharray="3 3"/>`,
      `<text x="${M.left + innerW - 4}" y="${Number(py) - 4}" text-anchor="end" font-size="10" fill="${h.color ?? "#666"}">${h.label}</text>`
    );
  }

  spec.series.forEach((s, i) => {
    const color = s.color ?? PALETTE[i % PALETTE.length];
    const dash = s.dash !== undefined ? s.dash : "";
    const pts = s.x.map((xv, j) => [xv, s.y[j]] as const).filter(
      ([xv, yv]) =>
        Number.isFinite(xv) && Number.isFinite(yv) && (!spec.xLog || xv > 0) && (!spec.yLog || yv > 0)
    );
    if (pts.length === 0) return;
    const ordered = s.raw ? pts : [...pts].sort((a, b) => a[0] - b[0]);
    const path = ordered
      .map(([xv, yv], j) => `${j === 0 ? "M" : "L"}${sx(xv).toFixed(2)},${sy(yv).toFixed(2)}`)
      .join(" ");
    parts.push(
      `<path d="${path}" fill="none" stroke="${color}" stroke-width="1.6"` +
        (dash ? ` stroke-dasharray="${dash}"` : "") +
        `/>`
    );
    if (s.marker) {
      for (const [xv, yv] of ordered) {
        parts.push(`<circle cx="${sx(xv).toFixed(2)}" cy="${sy(yv).toFixed(2)}" r="2.6" fill="${color}"/>`);
      }
    }
  });

  // legend
  const legendX = M.left + 10;
  let legendY = M.top + 14;
  spec.series.forEach((s, i) => {
    const color = s.color ?? PALETTE[i % PALETTE.length];
    parts.push(
      `<line x1="${legendX}" y1="${legendY - 4}" x2="${legendX + 22}" y2="${legendY - 4}" stroke="${color}" ` +
        `stroke-width="1.6"${s.dash ? ` stroke-dasharray="${s.dash}"` : ""}/>`,
      `<text x="${legendX + 28}" y="${legendY}" font-size="10.5">${s.label}</text>`
    );
    legendY += 14;
  });

  parts.push("</svg>");
  return parts.join("\n");
}
