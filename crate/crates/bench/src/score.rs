//! Pairwise win frequencies.
//!
//! For optimizers `o` and `o'`, `W[o][o']` is the fraction of shared problems
//! on which `o`'s loss is strictly lower, ties counting one half. A problem is
//! a grid cell together with its instance seed; only successful runs count.
//! Each pair's counts are kept as integers (twice the wins plus the ties, and
//! the number of shared problems). The entry at or above one half is obtained
//! by division and its mirror as `1 - x`, which is exact for `x` in `[1/2, 1]`,
//! so `W[o][o'] + W[o'][o] == 1` holds bit for bit.

use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};

use crate::error::{BenchError, Result};
use crate::results::{ProblemKey, ResultRow, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairCount {
    /// `2 * wins + ties` of the row optimizer.
    pub twice_wins: u64,
    pub shared: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    /// Optimizer names, best mean score first.
    pub optimizers: Vec<String>,
    /// `win[i][j]`: frequency with which optimizer `i` beats optimizer `j`.
    pub win: Vec<Vec<f64>>,
    /// Row averages of `win` over opponents.
    pub mean: Vec<f64>,
}

fn frequency(c: PairCount) -> f64 {
    if 2 * c.twice_wins >= 2 * c.shared {
        c.twice_wins as f64 / (2 * c.shared) as f64
    } else {
        let mirror = (2 * c.shared - c.twice_wins) as f64 / (2 * c.shared) as f64;
        1.0 - mirror
    }
}

/// Integer pair counts over the successful runs, optimizers in name order.
pub fn pair_counts(rows: &[ResultRow]) -> (Vec<String>, Vec<Vec<PairCount>>) {
    let mut losses: BTreeMap<&str, HashMap<ProblemKey, f64>> = BTreeMap::new();
    for row in rows {
        if let (Status::Ok, Some(loss)) = (&row.status, row.loss) {
            // a repeated (problem, optimizer) row keeps its first loss
            losses.entry(row.optimizer.as_str()).or_default().entry(row.problem()).or_insert(loss);
        }
    }
    let names: Vec<String> = losses.keys().map(|s| s.to_string()).collect();
    let tables: Vec<&HashMap<ProblemKey, f64>> = losses.values().collect();
    let k = names.len();
    let mut counts = vec![vec![PairCount::default(); k]; k];
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let c = &mut counts[i][j];
            for (key, &a) in tables[i] {
                if let Some(&b) = tables[j].get(key) {
                    c.shared += 1;
                    c.twice_wins += if a < b {
                        2
                    } else if a == b {
                        1
                    } else {
                        0
                    };
                }
            }
        }
    }
    (names, counts)
}

/// Scores the results. Every pair of optimizers must share a problem.
pub fn score(rows: &[ResultRow]) -> Result<ScoreMatrix> {
    let (names, counts) = pair_counts(rows);
    if names.len() < 2 {
        return Err(BenchError::NoOverlap(format!("need at least two optimizers with successful runs, found {}", names.len())));
    }
    let k = names.len();
    let mut win = vec![vec![0.5; k]; k];
    for i in 0..k {
        for j in (i + 1)..k {
            let c = counts[i][j];
            if c.shared == 0 {
                return Err(BenchError::NoOverlap(format!("{} and {}", names[i], names[j])));
            }
            let w = frequency(c);
            if w >= 0.5 {
                win[i][j] = w;
                win[j][i] = 1.0 - w;
            } else {
                let m = frequency(counts[j][i]);
                win[j][i] = m;
                win[i][j] = 1.0 - m;
            }
        }
    }
    Ok(ranked(names, win))
}

/// Orders rows and columns by decreasing mean score, then by name.
fn ranked(names: Vec<String>, win: Vec<Vec<f64>>) -> ScoreMatrix {
    let k = names.len();
    let mean: Vec<f64> = (0..k)
        .map(|i| (0..k).filter(|&j| j != i).map(|j| win[i][j]).sum::<f64>() / (k - 1) as f64)
        .collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| mean[b].total_cmp(&mean[a]).then_with(|| names[a].cmp(&names[b])));
    ScoreMatrix {
        optimizers: order.iter().map(|&i| names[i].clone()).collect(),
        win: order.iter().map(|&i| order.iter().map(|&j| win[i][j]).collect()).collect(),
        mean: order.iter().map(|&i| mean[i]).collect(),
    }
}

impl ScoreMatrix {
    pub fn index(&self, name: &str) -> Option<usize> {
        self.optimizers.iter().position(|o| o == name)
    }

    /// Win frequency of `a` over `b`.
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        Some(self.win[self.index(a)?][self.index(b)?])
    }

    /// Average of `name`'s win frequencies against `pool`, skipping itself.
    pub fn mean_against(&self, name: &str, pool: &[&str]) -> Option<f64> {
        let i = self.index(name)?;
        let mut total = 0.0;
        let mut n = 0;
        for other in pool.iter().filter(|&&o| o != name) {
            total += self.win[i][self.index(other)?];
            n += 1;
        }
        (n > 0).then(|| total / n as f64)
    }

    /// Lines of the form `rank. name mean`.
    pub fn ranking(&self) -> String {
        self.optimizers
            .iter()
            .zip(&self.mean)
            .enumerate()
            .map(|(r, (o, m))| format!("{}. {o} {m:.4}\n", r + 1))
            .collect()
    }

    /// CSV with header `optimizer,<names...>,mean`; one row per optimizer.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["optimizer".to_string()];
        header.extend(self.optimizers.iter().cloned());
        header.push("mean".into());
        w.write_record(&header)?;
        for (i, name) in self.optimizers.iter().enumerate() {
            let mut rec = vec![name.clone()];
            rec.extend(self.win[i].iter().map(|v| v.to_string()));
            rec.push(self.mean[i].to_string());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(input);
        let mut records = r.records();
        let header = records.next().ok_or(BenchError::EmptyResults)??;
        let k = header.len().saturating_sub(2);
        if k < 2 || header.get(0) != Some("optimizer") || header.get(k + 1) != Some("mean") {
            return Err(BenchError::Malformed { line: 1, message: "expected `optimizer,<names>,mean`".into() });
        }
        let optimizers: Vec<String> = header.iter().skip(1).take(k).map(str::to_string).collect();
        let mut win = Vec::new();
        let mut mean = Vec::new();
        for rec in records {
            let rec = rec?;
            let line = rec.position().map_or(0, |p| p.line());
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| BenchError::Malformed { line, message: format!("`{s}`: {e}") })
            };
            if rec.get(0) != optimizers.get(win.len()).map(String::as_str) {
                return Err(BenchError::Malformed { line, message: "rows must follow the column order".into() });
            }
            win.push(rec.iter().skip(1).take(k).map(parse).collect::<Result<Vec<_>>>()?);
            mean.push(parse(rec.get(k + 1).unwrap_or_default())?);
        }
        if win.len() != k {
            return Err(BenchError::Malformed { line: 0, message: format!("expected {k} rows, found {}", win.len()) });
        }
        Ok(Self { optimizers, win, mean })
    }
}
