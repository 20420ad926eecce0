//! A small OSPA-versus-snapshots sweep comparing DCTM and EDCTM.
//!
//! The same run is available from the command line:
//!
//! ```text
//! cargo run --bin doa -- run configs/fig4.json --trials 50 --out results
//! ```

use coarray_doa::experiments::{output, run_sweep, Algorithm, ExperimentConfig, ModelSpec, SweepAxis};

pub fn run() -> coarray_doa::Result<()> {
    let cfg = ExperimentConfig {
        name: "snapshots_demo".into(),
        axis: SweepAxis::Snapshots,
        snr_db: vec![10.0],
        snapshots: vec![20, 60, 100],
        trials: 20,
        algorithms: vec![Algorithm::Omp, Algorithm::LbmlOmp],
        models: vec![ModelSpec::Dctm, ModelSpec::Edctm],
        seed: 1,
        ..ExperimentConfig::default()
    };
    let r = run_sweep(&cfg)?;
    for s in &r.series {
        println!("{:<12} {:?}", s.label, s.ospa.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>());
    }
    let mut csv = Vec::new();
    output::write_sweep_csv(&r, &mut csv)?;
    print!("{}", String::from_utf8_lossy(&csv).lines().take(3).collect::<Vec<_>>().join("\n"));
    println!();
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
