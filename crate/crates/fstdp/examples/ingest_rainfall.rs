// Load an hourly event CSV the way the `ingest` CLI command does.
//
// The input format is long-form: one row per (station, hour) with a
// value; hours missing from the file count as dry. We fabricate a small
// network where three coastal stations share storms and two inland ones
// drizzle independently, then recover that structure from the file alone.

use std::io::Write;

use fstdp::ingest::{binarize_hourly, cluster_stations, load_event_csv, station_features, CsvSchema};
use rand::{Rng, SeedableRng};

fn main() -> fstdp::Result<()> {
    let path = std::env::temp_dir().join("demo_rainfall.csv");
    let mut file = std::fs::File::create(&path).expect("temp file");
    writeln!(file, "station,hour,value").unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    let coastal = ["C1", "C2", "C3"];
    let inland = ["I1", "I2"];
    for hour in 0..4000u64 {
        let storm = rng.gen_bool(0.04);
        for st in coastal {
            // shared storms plus a little local noise
            if storm && rng.gen_bool(0.9) || rng.gen_bool(0.01) {
                writeln!(file, "{st},{hour},{:.1}", 1.0 + rng.gen::<f64>() * 9.0).unwrap();
            }
        }
        for st in inland {
            if rng.gen_bool(0.15) {
                writeln!(file, "{st},{hour},{:.1}", 0.5 + rng.gen::<f64>() * 2.0).unwrap();
            }
        }
    }
    drop(file);

    let table = load_event_csv(&path, &CsvSchema::default())?;
    println!(
        "loaded {} stations x {} hours from {}",
        table.n_stations(),
        table.n_hours,
        path.display()
    );
    for (i, id) in table.station_ids.iter().enumerate() {
        println!("  {id}: {} hours absent from the file", table.missing_counts[i]);
    }

    let raster = binarize_hourly(&table, 0.0)?;
    let features = station_features(&raster)?;
    let clusters = cluster_stations(&features, 2, 0)?;
    println!("station  rate/hour  mean normcov  cluster");
    for (i, id) in table.station_ids.iter().enumerate() {
        println!(
            "  {id}     {:.3}      {:.3}         {}",
            features[i][0], features[i][1], clusters[i]
        );
    }
    Ok(())
}
