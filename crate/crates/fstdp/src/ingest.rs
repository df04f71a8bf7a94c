//! Loading hourly event CSVs (rainfall-style station records), binarizing
//! them into spike rasters, and clustering stations by activity features.

use std::collections::HashMap;
use std::io::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analytics::normalized_cov;
use crate::error::{Error, Result};
use crate::raster::SpikeRaster;

/// Column names of an event CSV.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvSchema {
    pub station_column: String,
    pub time_column: String,
    pub value_column: String,
}

impl Default for CsvSchema {
    fn default() -> Self {
        CsvSchema {
            station_column: "station".into(),
            time_column: "hour".into(),
            value_column: "value".into(),
        }
    }
}

/// Dense station-by-hour value table. Hours are contiguous from
/// `hour_start`; hours absent from the source file hold 0 and are tallied in
/// `missing_counts`.
#[derive(Clone, Debug, PartialEq)]
pub struct StationTable {
    /// Stations in order of first appearance in the source.
    pub station_ids: Vec<String>,
    pub hour_start: u64,
    pub n_hours: usize,
    /// Station-major, `station_ids.len() * n_hours` values.
    pub values: Vec<f64>,
    pub missing_counts: Vec<usize>,
}

impl StationTable {
    pub fn n_stations(&self) -> usize {
        self.station_ids.len()
    }

    pub fn get(&self, station: usize, hour_index: usize) -> f64 {
        self.values[station * self.n_hours + hour_index]
    }

    /// Writes every cell back out in the event-CSV layout. Missing-cell
    /// bookkeeping is not serialized; a reloaded table has every hour
    /// present (as zeros where data was missing).
    pub fn to_csv(&self, path: &Path) -> Result<()> {
        let mut out = Vec::new();
        writeln!(out, "station,hour,value").expect("write to vec");
        for (s, id) in self.station_ids.iter().enumerate() {
            for h in 0..self.n_hours {
                writeln!(out, "{},{},{}", id, self.hour_start + h as u64, self.get(s, h))
                    .expect("write to vec");
            }
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))
    }
}

/// Reads an event CSV into a dense table. Rows may arrive in any order;
/// duplicate (station, hour) cells are an error, malformed rows are reported
/// with their line number.
pub fn load_event_csv(path: &Path, schema: &CsvSchema) -> Result<StationTable> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::Config(format!("cannot open {}: {e}", path.display())),
            _ => Error::Parse {
                line: 1,
                message: e.to_string(),
            },
        })?;

    let headers = reader
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let col = |name: &str| -> Result<usize> {
        headers.iter().position(|h| h == name).ok_or_else(|| Error::Parse {
            line: 1,
            message: format!("missing column '{name}' (found: {})", headers.iter().collect::<Vec<_>>().join(", ")),
        })
    };
    let station_col = col(&schema.station_column)?;
    let time_col = col(&schema.time_column)?;
    let value_col = col(&schema.value_column)?;

    let mut station_index: HashMap<String, usize> = HashMap::new();
    let mut station_ids: Vec<String> = Vec::new();
    let mut cells: Vec<(usize, u64, f64)> = Vec::new();
    let mut seen: HashMap<(usize, u64), ()> = HashMap::new();

    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |idx: usize| -> Result<&str> {
            record.get(idx).ok_or_else(|| Error::Parse {
                line,
                message: format!("row has only {} fields", record.len()),
            })
        };
        let station = field(station_col)?.to_string();
        if station.is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty station id".into(),
            });
        }
        let hour: u64 = field(time_col)?.parse().map_err(|_| Error::Parse {
            line,
            message: format!("bad hour '{}'", field(time_col).unwrap_or("")),
        })?;
        let value: f64 = field(value_col)?.parse().map_err(|_| Error::Parse {
            line,
            message: format!("bad value '{}'", field(value_col).unwrap_or("")),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                line,
                message: format!("non-finite value {value}"),
            });
        }
        let sidx = *station_index.entry(station.clone()).or_insert_with(|| {
            station_ids.push(station.clone());
            station_ids.len() - 1
        });
        if seen.insert((sidx, hour), ()).is_some() {
            return Err(Error::DuplicateEntry { station, hour });
        }
        cells.push((sidx, hour, value));
    }

    if cells.is_empty() {
        return Err(Error::InvalidInput(format!(
            "{} holds no data rows",
            path.display()
        )));
    }
    let hour_start = cells.iter().map(|c| c.1).min().unwrap();
    let hour_end = cells.iter().map(|c| c.1).max().unwrap();
    let n_hours = (hour_end - hour_start + 1) as usize;
    let n_stations = station_ids.len();

    let mut values = vec![0.0; n_stations * n_hours];
    let mut present = vec![0usize; n_stations];
    for (s, hour, v) in cells {
        values[s * n_hours + (hour - hour_start) as usize] = v;
        present[s] += 1;
    }
    let missing_counts = present.iter().map(|&c| n_hours - c).collect();
    Ok(StationTable {
        station_ids,
        hour_start,
        n_hours,
        values,
        missing_counts,
    })
}

/// One raster event per cell strictly above `threshold`.
pub fn binarize_hourly(t: &StationTable, threshold: f64) -> Result<SpikeRaster> {
    if !(threshold >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "threshold must be >= 0, got {threshold}"
        )));
    }
    let mut raster = SpikeRaster::new(t.n_stations(), t.n_hours);
    for s in 0..t.n_stations() {
        for h in 0..t.n_hours {
            if t.get(s, h) > threshold {
                raster.set(s, h, true);
            }
        }
    }
    Ok(raster)
}

/// Per-station (mean rate, mean off-diagonal normalized covariance): the
/// pair that separates scarce-but-correlated stations from busy independent
/// ones.
pub fn station_features(raster: &SpikeRaster) -> Result<Vec<[f64; 2]>> {
    let norm = normalized_cov(raster, raster.default_epsilon_rate())?;
    Ok((0..raster.n_channels())
        .map(|ch| [raster.mean_rate(ch), norm.row_mean_off_diagonal(ch)])
        .collect())
}

fn squared_distance(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

fn assign(features: &[[f64; 2]], centroids: &[[f64; 2]]) -> (Vec<usize>, f64) {
    let mut labels = Vec::with_capacity(features.len());
    let mut inertia = 0.0;
    for f in features {
        let (best, d) = centroids
            .iter()
            .enumerate()
            .map(|(i, c)| (i, squared_distance(f, c)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        labels.push(best);
        inertia += d;
    }
    (labels, inertia)
}

fn kmeans_trace(features: &[[f64; 2]], k: usize, seed: u64) -> Result<(Vec<usize>, Vec<f64>)> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("k must be >= 2, got {k}")));
    }
    let mut distinct: Vec<[f64; 2]> = Vec::new();
    for f in features {
        if !f.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput("non-finite feature vector".into()));
        }
        if !distinct.contains(f) {
            distinct.push(*f);
        }
    }
    if distinct.len() < k {
        return Err(Error::InvalidInput(format!(
            "k-means needs at least {k} distinct points, found {}",
            distinct.len()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Seeding: first centroid uniform, then each next point weighted by its
    // squared distance to the nearest centroid chosen so far.
    let mut centroids: Vec<[f64; 2]> = vec![features[rng.gen_range(0..features.len())]];
    while centroids.len() < k {
        let d2: Vec<f64> = features
            .iter()
            .map(|f| {
                centroids
                    .iter()
                    .map(|c| squared_distance(f, c))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        let total: f64 = d2.iter().sum();
        let next = if total == 0.0 {
            // All remaining mass sits on the chosen centroids; take any
            // point not yet a centroid (one exists: distinct >= k).
            features
                .iter()
                .position(|f| !centroids.contains(f))
                .expect("a non-centroid point exists")
        } else {
            let mut target = rng.gen::<f64>() * total;
            let mut pick = features.len() - 1;
            for (i, &d) in d2.iter().enumerate() {
                if target < d {
                    pick = i;
                    break;
                }
                target -= d;
            }
            pick
        };
        centroids.push(features[next]);
    }

    let mut history = Vec::new();
    let mut labels = Vec::new();
    for _ in 0..100 {
        let (new_labels, inertia) = assign(features, &centroids);
        history.push(inertia);
        let converged = new_labels == labels;
        labels = new_labels;
        if converged {
            break;
        }
        let mut sums = vec![[0.0f64; 2]; k];
        let mut counts = vec![0usize; k];
        for (f, &l) in features.iter().zip(&labels) {
            sums[l][0] += f[0];
            sums[l][1] += f[1];
            counts[l] += 1;
        }
        for c in 0..k {
            if counts[c] > 0 {
                centroids[c] = [sums[c][0] / counts[c] as f64, sums[c][1] / counts[c] as f64];
            }
            // An empty cluster keeps its old centroid.
        }
    }
    Ok((labels, history))
}

/// Groups feature vectors into `k` clusters. Deterministic for a given seed.
pub fn cluster_stations(features: &[[f64; 2]], k: usize, seed: u64) -> Result<Vec<usize>> {
    kmeans_trace(features, k, seed).map(|(labels, _)| labels)
}
