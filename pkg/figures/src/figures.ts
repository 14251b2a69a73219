/**
 * One renderer per figure id: picks the CSV, groups rows into series and
 * hands a plot spec to the SVG kit.  No numerics beyond plotting
 * transforms live here.
 */

import { join } from "path";
import { Table, column, columnText, distinct, loadTable } from "./csv.js";
import { DASHES, PALETTE, PlotSpec, Series, renderPlot } from "./svg.js";

function rowsWhere(table: Table, pred: (row: string[]) => boolean): Table {
  return { columns: table.columns, rows: table.rows.filter(pred) };
}

function fig2(inDir: string): string {
  const table = loadTable(join(inDir, "fig2.csv"), "fig2");
  const networks = distinct(columnText(table, "network"));
  const series: Series[] = [];
  networks.forEach((net, ni) => {
    const sub = rowsWhere(table, (r) => r[0] === net);
    const alpha = column(sub, "alpha");
    const color = PALETTE[ni % PALETTE.length];
    series.push(
      { label: `${net} Monte-Carlo`, x: alpha, y: column(sub, "sigma2_mc"), color, marker: true },
      { label: `${net} approximation`, x: alpha, y: column(sub, "sigma2_approx"), color, dash: "6 3" },
      { label: `${net} lower bound`, x: alpha, y: column(sub, "bound_lower"), color, dash: "2 2" },
      { label: `${net} upper bound`, x: alpha, y: column(sub, "bound_upper"), color, dash: "2 2" }
    );
  });
  const spec: PlotSpec = {
    title: "Per-stream scaling of inverse precoder correlation vs antenna correlation",
    xLabel: "antenna correlation alpha",
    yLabel: "sigma^2 (diagonal of inverse precoder correlation)",
    series,
  };
  return renderPlot(spec);
}

function fig3(inDir: string): string {
  const table = loadTable(join(inDir, "fig3.csv"), "fig3");
  const betas = distinct(columnText(table, "beta"));
  const gammas = distinct(columnText(table, "gamma_db"));
  const series: Series[] = [];
  betas.forEach((beta, bi) => {
    gammas.forEach((gamma, gi) => {
      const sub = rowsWhere(table, (r) => r[1] === beta && r[2] === gamma);
      series.push({
        label: `beta=${beta}, ${gamma} dB`,
        x: column(sub, "alpha_abs"),
        y: column(sub, "kld"),
        color: PALETTE[bi % PALETTE.length],
        dash: DASHES[gi % DASHES.length],
        marker: true,
      });
    });
  });
  return renderPlot({
    title: "Divergence of simulated SINR law from the closed form",
    xLabel: "|alpha|",
    yLabel: "KL divergence",
    yLog: true,
    series,
  });
}

function fig4(inDir: string): string {
  const table = loadTable(join(inDir, "fig4.csv"), "fig4");
  const betas = distinct(columnText(table, "beta"));
  const series: Series[] = [];
  const hLines: PlotSpec["hLines"] = [];
  betas.forEach((beta, bi) => {
    const sub = rowsWhere(table, (r) => r[0] === beta);
    const x = column(sub, "gamma_db");
    const color = PALETTE[bi % PALETTE.length];
    series.push(
      { label: `sim beta=${beta}`, x, y: column(sub, "sum_rate_sim"), color, marker: true, dash: "0.1 4" },
      { label: `analytic beta=${beta}`, x, y: column(sub, "sum_rate_analytic"), color }
    );
    const caps = column(sub, "sum_rate_cap").filter((v) => Number.isFinite(v));
    if (caps.length > 0) hLines.push({ y: caps[0], label: `cap beta=${beta}`, color });
  });
  return renderPlot({
    title: "Sum rate vs transmit SNR (4-user 3x3, uncorrelated antennas)",
    xLabel: "transmit SNR (dB)",
    yLabel: "sum rate (bits/s/Hz)",
    series,
    hLines,
  });
}

function fig5(inDir: string): string {
  const table = loadTable(join(inDir, "fig5.csv"), "fig5");
  const alphas = distinct(columnText(table, "alpha"));
  const series: Series[] = [];
  alphas.forEach((alpha, ai) => {
    const sub = rowsWhere(table, (r) => r[0] === alpha);
    const x = column(sub, "gamma_db");
    const color = PALETTE[ai % PALETTE.length];
    series.push(
      { label: `IA sim alpha=${alpha}`, x, y: column(sub, "ia_rate_sim"), color, marker: true, dash: "0.1 4" },
      { label: `IA analytic alpha=${alpha}`, x, y: column(sub, "ia_rate_analytic"), color },
      { label: `BF sim alpha=${alpha}`, x, y: column(sub, "bf_rate_sim"), color, dash: "6 3" }
    );
  });
  return renderPlot({
    title: "IA network vs beamforming link sum rate (beta = 0.19)",
    xLabel: "transmit SNR (dB)",
    yLabel: "sum rate (bits/s/Hz)",
    series,
  });
}

function contourFigure(inDir: string, id: "fig6" | "fig7", title: string): string {
  const table = loadTable(join(inDir, `${id}.csv`), id);
  const gammas = distinct(columnText(table, "gamma_db"));
  const series: Series[] = [];
  gammas.forEach((gamma, gi) => {
    const lineIds = distinct(
      columnText(rowsWhere(table, (r) => r[0] === gamma), "line_id")
    );
    lineIds.forEach((lid, li) => {
      const sub = rowsWhere(table, (r) => r[0] === gamma && r[1] === lid);
      series.push({
        label: li === 0 ? `${gamma} dB` : `${gamma} dB (${li + 1})`,
        x: column(sub, "alpha"),
        y: column(sub, "beta"),
        color: PALETTE[gi % PALETTE.length],
        raw: true,
      });
    });
  });
  return renderPlot({
    title,
    xLabel: "antenna correlation alpha",
    yLabel: "CSI error beta",
    series,
  });
}

export const FIGURES: Record<string, (inDir: string) => string> = {
  fig2,
  fig3,
  fig4,
  fig5,
  fig6: (d) => contourFigure(d, "fig6", "Unity contours of SM/IA mean-SINR ratio (theory)"),
  fig7: (d) => contourFigure(d, "fig7", "Unity contours of SM/IA mean-SINR ratio (simulation)"),
};

export function renderFigure(figId: string, inDir: string): string {
  const fn = FIGURES[figId];
  if (!fn) {
    throw new Error(`unknown figure id ${figId}; expected one of ${Object.keys(FIGURES).join(", ")}`);
  }
  return fn(inDir);
}
