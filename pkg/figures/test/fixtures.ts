import { mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";

export function writeFixtureCsvs(): string {
  const dir = mkdtempSync(join(tmpdir(), "ialink-figs-"));
  writeFileSync(
    join(dir, "fig2.csv"),
    [
      "network,alpha,sigma2_mc,sigma2_approx,bound_lower,bound_upper",
      "3u2x2,0,1,1,1,1",
      "3u2x2,0.2,1.03,0.91,0.83,1.25",
      "3u2x2,0.4,1.14,1.09,0.71,1.67",
      "5u3x3,0,1,1,1,1",
      "5u3x3,0.2,1.05,0.95,0.8,1.3",
      "5u3x3,0.4,1.2,1.1,0.65,1.9",
    ].join("\n") + "\n"
  );
  writeFileSync(
    join(dir, "fig3.csv"),
    [
      "alpha_abs,beta,gamma_db,kld",
      "0.1986,0.01,10,0.02",
      "0.4738,0.01,10,0.09",
      "0.1986,0.1,10,0.008",
      "0.4738,0.1,10,0.03",
      "0.1986,0.01,30,0.012",
      "0.4738,0.01,30,0.05",
      "0.1986,0.1,30,0.004",
      "0.4738,0.1,30,0.018",
    ].join("\n") + "\n"
  );
  writeFileSync(
    join(dir, "fig4.csv"),
    [
      "beta,gamma_db,sum_rate_sim,sum_rate_analytic,sum_rate_cap",
      "0,10,10.1,10.0,nan",
      "0,20,21.9,22.0,nan",
      "0,30,35.2,35.0,nan",
      "0.05,10,9.8,9.9,26.5",
      "0.05,20,19.0,19.2,26.5",
      "0.05,30,24.8,24.9,26.5",
    ].join("\n") + "\n"
  );
  writeFileSync(
    join(dir, "fig5.csv"),
    [
      "alpha,gamma_db,ia_rate_sim,ia_rate_analytic,bf_rate_sim",
      "0,10,6.1,6.0,4.4",
      "0,20,9.8,9.9,6.3",
      "0.3,10,5.8,5.6,4.6",
      "0.3,20,9.0,8.8,6.6",
    ].join("\n") + "\n"
  );
  const contourRows = ["gamma_db,line_id,point_idx,alpha,beta"];
  for (const gamma of [10, 20, 30]) {
    for (let i = 0; i < 6; i++) {
      contourRows.push(`${gamma},0,${i},${(0.1 * i).toFixed(2)},${(0.03 + 0.01 * i * (gamma / 20)).toFixed(4)}`);
    }
  }
  writeFileSync(join(dir, "fig6.csv"), contourRows.join("\n") + "\n");
  writeFileSync(join(dir, "fig7.csv"), contourRows.join("\n") + "\n");
  return dir;
}
