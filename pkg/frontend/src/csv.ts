/**
 * Reader for the simulator's sweep CSV schema.
 *
 * Column order is fixed by the producer:
 * code,family,n,k,d,p,tau_m,n_a,rounds,shots_x,shots_z,q_x,q_z,p_l,stderr_rel,seed
 */

export interface SweepRow {
  code: string;
  family: string;
  n: number;
  k: number;
  d: number;
  p: number;
  tauM: number;
  nA: number;
  rounds: number;
  shotsX: number;
  shotsZ: number;
  qX: number;
  qZ: number;
  pL: number;
  stderrRel: number;
  seed: number;
}

export const CSV_HEADER =
  "code,family,n,k,d,p,tau_m,n_a,rounds,shots_x,shots_z,q_x,q_z,p_l,stderr_rel,seed";

export function parseSweepCsv(text: string): SweepRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.trim().length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV");
  }
  if (lines[0].trim() !== CSV_HEADER) {
    throw new Error(`unexpected CSV header: ${lines[0]}`);
  }
  const rows: SweepRow[] = [];
  for (const line of lines.slice(1)) {
    const f = line.split(",");
    if (f.length !== 16) {
      throw new Error(`malformed row (${f.length} fields): ${line}`);
    }
    const num = (s: string, field: string): number => {
      const v = Number(s);
      if (!Number.isFinite(v)) {
        throw new Error(`non-numeric ${field} in row: ${line}`);
      }
      return v;
    };
    rows.push({
      code: f[0],
      family: f[1],
      n: num(f[2], "n"),
      k: num(f[3], "k"),
      d: num(f[4], "d"),
      p: num(f[5], "p"),
      tauM: num(f[6], "tau_m"),
      nA: num(f[7], "n_a"),
      rounds: num(f[8], "rounds"),
      shotsX: num(f[9], "shots_x"),
      shotsZ: num(f[10], "shots_z"),
      qX: num(f[11], "q_x"),
      qZ: num(f[12], "q_z"),
      pL: num(f[13], "p_l"),
      stderrRel: num(f[14], "stderr_rel"),
      seed: num(f[15], "seed"),
    });
  }
  return rows;
}
