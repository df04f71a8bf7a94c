//! Covariance statistics over spike rasters and separation metrics over
//! learned weights.
//!
//! Uncentered covariance is the raw second moment E[Xi*Xj]; it is what the
//! plain STDP neuron is sensitive to, and it is dominated by rate products.
//! Normalized covariance divides each channel by its mean rate first, which
//! makes correlated low-rate structure visible regardless of how busy other
//! channels are.

use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::SpikeRaster;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CovKind {
    Uncentered,
    Normalized,
}

impl std::fmt::Display for CovKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CovKind::Uncentered => write!(f, "uncentered"),
            CovKind::Normalized => write!(f, "normalized"),
        }
    }
}

/// Symmetric channel-by-channel matrix with its provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovMatrix {
    pub kind: CovKind,
    pub n: usize,
    /// Steps of the raster the matrix was estimated from.
    pub n_steps: usize,
    /// Row-major n*n values.
    pub values: Vec<f64>,
    /// Channels that never spiked; their rows and columns are zero.
    pub zero_rate_channels: Vec<usize>,
}

impl CovMatrix {
    fn zeros(kind: CovKind, n: usize, n_steps: usize) -> CovMatrix {
        CovMatrix {
            kind,
            n,
            n_steps,
            values: vec![0.0; n * n],
            zero_rate_channels: Vec::new(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[i * self.n + j] = v;
    }

    /// Mean of row `i` excluding the diagonal and zero-rate columns.
    pub fn row_mean_off_diagonal(&self, i: usize) -> f64 {
        let mut sum = 0.0;
        let mut count = 0usize;
        for j in 0..self.n {
            if j != i && !self.zero_rate_channels.contains(&j) {
                sum += self.get(i, j);
                count += 1;
            }
        }
        if count == 0 {
            0.0
        } else {
            sum / count as f64
        }
    }

    /// Mean over all (i, j) with i and j drawn from `channels`, i != j.
    pub fn block_mean_off_diagonal(&self, channels: &[usize]) -> f64 {
        let mut sum = 0.0;
        let mut count = 0usize;
        for &i in channels {
            for &j in channels {
                if i != j {
                    sum += self.get(i, j);
                    count += 1;
                }
            }
        }
        if count == 0 {
            0.0
        } else {
            sum / count as f64
        }
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = Vec::new();
        writeln!(out, "# kind={},n={},n_steps={}", self.kind, self.n, self.n_steps)
            .expect("write to vec");
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(out, "{}", row.join(",")).expect("write to vec");
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    pub fn read_csv(path: &Path) -> Result<CovMatrix> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            message: "empty matrix file".into(),
        })?;
        let header = header.strip_prefix("# ").ok_or_else(|| Error::Parse {
            line: 1,
            message: "expected '# kind=...,n=...,n_steps=...'".into(),
        })?;
        let mut kind = None;
        let mut n = None;
        let mut n_steps = None;
        for field in header.split(',') {
            match field.split_once('=') {
                Some(("kind", "uncentered")) => kind = Some(CovKind::Uncentered),
                Some(("kind", "normalized")) => kind = Some(CovKind::Normalized),
                Some(("n", v)) => n = v.parse::<usize>().ok(),
                Some(("n_steps", v)) => n_steps = v.parse::<usize>().ok(),
                _ => {
                    return Err(Error::Parse {
                        line: 1,
                        message: format!("unrecognized header field '{field}'"),
                    })
                }
            }
        }
        let (kind, n, n_steps) = match (kind, n, n_steps) {
            (Some(k), Some(n), Some(t)) => (k, n, t),
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    message: "header must set kind, n and n_steps".into(),
                })
            }
        };
        let mut m = CovMatrix::zeros(kind, n, n_steps);
        let mut row = 0usize;
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            if row >= n {
                return Err(Error::Parse {
                    line: idx as u64 + 1,
                    message: format!("more than {n} matrix rows"),
                });
            }
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != n {
                return Err(Error::Parse {
                    line: idx as u64 + 1,
                    message: format!("expected {n} columns, got {}", cells.len()),
                });
            }
            for (j, cell) in cells.iter().enumerate() {
                let v: f64 = cell.trim().parse().map_err(|_| Error::Parse {
                    line: idx as u64 + 1,
                    message: format!("bad value '{cell}'"),
                })?;
                m.set(row, j, v);
            }
            row += 1;
        }
        if row != n {
            return Err(Error::Parse {
                line: text.lines().count() as u64,
                message: format!("expected {n} rows, got {row}"),
            });
        }
        for i in 0..n {
            if (0..n).all(|j| m.get(i, j) == 0.0) {
                m.zero_rate_channels.push(i);
            }
        }
        Ok(m)
    }
}

fn second_moments(r: &SpikeRaster) -> Vec<f64> {
    let n = r.n_channels();
    let mut counts = vec![0u64; n * n];
    for spiking in r.events_by_step() {
        for &i in &spiking {
            for &j in &spiking {
                counts[i as usize * n + j as usize] += 1;
            }
        }
    }
    let t = r.n_steps() as f64;
    counts.into_iter().map(|c| c as f64 / t).collect()
}

/// Raw second-moment matrix, entry (i, j) = mean over steps of Xi*Xj.
pub fn uncentered_cov(r: &SpikeRaster) -> Result<CovMatrix> {
    if r.n_steps() == 0 {
        return Err(Error::InvalidInput(
            "covariance needs at least one step".into(),
        ));
    }
    let mut m = CovMatrix::zeros(CovKind::Uncentered, r.n_channels(), r.n_steps());
    m.values = second_moments(r);
    for ch in 0..r.n_channels() {
        if r.spike_count(ch) == 0 {
            m.zero_rate_channels.push(ch);
        }
    }
    Ok(m)
}

/// Rate-normalized second moments: entry (i, j) is the mean of
/// (Xi / max(rate_i, eps)) * (Xj / max(rate_j, eps)). Channels that never
/// spike get zero rows and are listed in `zero_rate_channels`.
pub fn normalized_cov(r: &SpikeRaster, epsilon_rate: f64) -> Result<CovMatrix> {
    if r.n_steps() == 0 {
        return Err(Error::InvalidInput(
            "covariance needs at least one step".into(),
        ));
    }
    if !(epsilon_rate > 0.0) {
        return Err(Error::InvalidInput(format!(
            "epsilon_rate must be > 0, got {epsilon_rate}"
        )));
    }
    let n = r.n_channels();
    let raw = second_moments(r);
    let mut m = CovMatrix::zeros(CovKind::Normalized, n, r.n_steps());
    let rates: Vec<f64> = (0..n).map(|ch| r.mean_rate(ch)).collect();
    for ch in 0..n {
        if r.spike_count(ch) == 0 {
            m.zero_rate_channels.push(ch);
        }
    }
    for i in 0..n {
        for j in 0..n {
            if rates[i] == 0.0 || rates[j] == 0.0 {
                continue; // leave the whole row/column at zero
            }
            let denom = rates[i].max(epsilon_rate) * rates[j].max(epsilon_rate);
            m.set(i, j, raw[i * n + j] / denom);
        }
    }
    Ok(m)
}

/// Scores each channel against the across-channel mean signal. With
/// `normalized` the channel and the mean signal are both divided by their
/// mean rates first.
pub fn cov_with_mean_input(r: &SpikeRaster, normalized: bool) -> Result<Vec<f64>> {
    let n = r.n_channels();
    if n < 2 {
        return Err(Error::InvalidInput(
            "mean-input covariance needs at least two channels".into(),
        ));
    }
    if r.n_steps() == 0 {
        return Err(Error::InvalidInput(
            "covariance needs at least one step".into(),
        ));
    }
    let t = r.n_steps() as f64;
    let mut cross = vec![0.0f64; n]; // sum over steps of Xi(t) * Y(t)
    let mut mean_signal_total = 0.0f64;
    for spiking in r.events_by_step() {
        let y = spiking.len() as f64 / n as f64;
        mean_signal_total += y;
        for &ch in &spiking {
            cross[ch as usize] += y;
        }
    }
    let eps = r.default_epsilon_rate();
    let mean_signal_rate = mean_signal_total / t;
    let scores = (0..n)
        .map(|ch| {
            let raw = cross[ch] / t;
            if !normalized {
                return raw;
            }
            if r.spike_count(ch) == 0 {
                return 0.0;
            }
            raw / (r.mean_rate(ch).max(eps) * mean_signal_rate.max(eps))
        })
        .collect();
    Ok(scores)
}

/// How well a weight vector separates the correlated group from the rest.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    /// min(correlated weights) - max(uncorrelated weights); positive means
    /// the groups are disjoint in weight.
    pub gap: f64,
    /// Probability a random correlated weight ranks above a random
    /// uncorrelated one, ties split.
    pub auc: f64,
    pub mean_correlated: f64,
    pub mean_uncorrelated: f64,
    pub n_correlated: usize,
    pub n_uncorrelated: usize,
}

/// Rank-based separation of weights by group label (`true` = correlated).
pub fn separation_metrics(weights: &[f64], labels: &[bool]) -> Result<SeparationReport> {
    if weights.len() != labels.len() {
        return Err(Error::InvalidInput(format!(
            "{} weights vs {} labels",
            weights.len(),
            labels.len()
        )));
    }
    let n_correlated = labels.iter().filter(|&&l| l).count();
    let n_uncorrelated = labels.len() - n_correlated;
    if n_correlated == 0 || n_uncorrelated == 0 {
        return Err(Error::InvalidInput(
            "separation metrics need both label classes".into(),
        ));
    }
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::InvalidInput("non-finite weight".into()));
    }

    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| weights[a].partial_cmp(&weights[b]).unwrap());
    // Average ranks across ties, 1-based.
    let mut ranks = vec![0.0f64; weights.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && weights[order[j + 1]] == weights[order[i]] {
            j += 1;
        }
        let avg = (i + j + 2) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    let rank_sum_correlated: f64 = ranks
        .iter()
        .zip(labels)
        .filter(|(_, &l)| l)
        .map(|(r, _)| r)
        .sum();
    let nc = n_correlated as f64;
    let nu = n_uncorrelated as f64;
    let auc = (rank_sum_correlated - nc * (nc + 1.0) / 2.0) / (nc * nu);

    let (mut min_c, mut max_u) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut sum_c, mut sum_u) = (0.0, 0.0);
    for (&w, &l) in weights.iter().zip(labels) {
        if l {
            min_c = min_c.min(w);
            sum_c += w;
        } else {
            max_u = max_u.max(w);
            sum_u += w;
        }
    }
    Ok(SeparationReport {
        gap: min_c - max_u,
        auc,
        mean_correlated: sum_c / nc,
        mean_uncorrelated: sum_u / nu,
        n_correlated,
        n_uncorrelated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn toy_raster() -> SpikeRaster {
        // ch0: 1100, ch1: 1010, ch2: silent
        let mut r = SpikeRaster::new(3, 4);
        r.set(0, 0, true);
        r.set(0, 1, true);
        r.set(1, 0, true);
        r.set(1, 2, true);
        r
    }

    #[test]
    fn uncentered_entries_match_hand_counts() {
        let m = uncentered_cov(&toy_raster()).unwrap();
        assert_eq!(m.get(0, 0), 0.5); // diagonal is the mean rate exactly
        assert_eq!(m.get(1, 1), 0.5);
        assert_eq!(m.get(0, 1), 0.25); // one coincident step of four
        assert_eq!(m.get(0, 1), m.get(1, 0));
        assert_eq!(m.get(0, 2), 0.0);
        assert_eq!(m.zero_rate_channels, vec![2]);
    }

    #[test]
    fn normalized_entries_divide_by_rates() {
        let m = normalized_cov(&toy_raster(), 1e-9).unwrap();
        assert_eq!(m.get(0, 0), 2.0); // 1/p on the diagonal
        assert_eq!(m.get(0, 1), 1.0); // 0.25 / (0.5 * 0.5)
        // Silent channel: zero row, zero column, flagged.
        assert_eq!(m.get(2, 0), 0.0);
        assert_eq!(m.get(0, 2), 0.0);
        assert_eq!(m.zero_rate_channels, vec![2]);
    }

    #[test]
    fn independent_channels_give_product_of_rates() {
        use crate::datagen::{generate_correlated_binary, ProcessSpec};
        let spec = ProcessSpec {
            n_channels: 2,
            n_steps: 50_000,
            dt_seconds: 0.1,
            rates_hz: vec![1.0, 5.0],
            correlated_set: vec![],
            correlation: 0.0,
            seed: 21,
        };
        let r = generate_correlated_binary(&spec).unwrap();
        let unc = uncentered_cov(&r).unwrap();
        assert!((unc.get(0, 1) - 0.05).abs() < 0.01, "got {}", unc.get(0, 1));
        let norm = normalized_cov(&r, r.default_epsilon_rate()).unwrap();
        assert!((norm.get(0, 1) - 1.0).abs() < 0.05, "got {}", norm.get(0, 1));
    }

    #[test]
    fn mean_input_scores_are_equal_for_identical_channels() {
        let mut r = SpikeRaster::new(3, 6);
        for ch in 0..3 {
            for t in [0, 2, 5] {
                r.set(ch, t, true);
            }
        }
        let raw = cov_with_mean_input(&r, false).unwrap();
        assert!(raw.iter().all(|&s| s == raw[0]));
        assert_eq!(raw[0], 0.5); // Xi*Y = Y = 1 on spike steps, 3 of 6
        let norm = cov_with_mean_input(&r, true).unwrap();
        assert!(norm.iter().all(|&s| (s - 2.0).abs() < 1e-12)); // 0.5/(0.5*0.5)
    }

    #[test]
    fn perfect_weights_give_unit_auc_and_full_gap() {
        let weights = [0.9, 0.9, 0.1, 0.1, 0.1];
        let labels = [true, true, false, false, false];
        let rep = separation_metrics(&weights, &labels).unwrap();
        assert_relative_eq!(rep.gap, 0.8, epsilon = 1e-12);
        assert_eq!(rep.auc, 1.0);
        assert_relative_eq!(rep.mean_correlated, 0.9);
        assert_relative_eq!(rep.mean_uncorrelated, 0.1);
    }

    #[test]
    fn all_equal_weights_split_ties_at_half() {
        let weights = [0.5; 6];
        let labels = [true, true, false, false, false, false];
        let rep = separation_metrics(&weights, &labels).unwrap();
        assert_eq!(rep.auc, 0.5);
        assert_eq!(rep.gap, 0.0);
    }

    #[test]
    fn inverted_weights_give_zero_auc() {
        let weights = [0.1, 0.2, 0.8, 0.9];
        let labels = [true, true, false, false];
        let rep = separation_metrics(&weights, &labels).unwrap();
        assert_eq!(rep.auc, 0.0);
        assert!(rep.gap < 0.0);
    }

    #[test]
    fn single_class_labels_are_rejected() {
        assert!(separation_metrics(&[0.1, 0.2], &[true, true]).is_err());
        assert!(separation_metrics(&[0.1, 0.2], &[false, false]).is_err());
        assert!(separation_metrics(&[0.1], &[true, false]).is_err());
    }

    #[test]
    fn matrices_survive_a_csv_round_trip() {
        let m = normalized_cov(&toy_raster(), 1e-9).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("normcov.csv");
        m.write_csv(&path).unwrap();
        let back = CovMatrix::read_csv(&path).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn truncated_matrix_csv_is_a_parse_error() {
        let m = uncentered_cov(&toy_raster()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cov.csv");
        m.write_csv(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let truncated: Vec<&str> = text.lines().take(2).collect();
        std::fs::write(&path, truncated.join("\n")).unwrap();
        assert!(CovMatrix::read_csv(&path).is_err());
    }
}
