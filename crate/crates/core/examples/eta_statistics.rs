//! Empirical moments of the first coarray error-term entry against the
//! analytic `1/T` law.

use coarray_doa::experiments::{run_eta_statistics, ExperimentConfig, SceneSpec, SweepAxis};

pub fn run() -> coarray_doa::Result<()> {
    let cfg = ExperimentConfig {
        scene: SceneSpec::from_sines(vec![-0.5, 0.4]),
        axis: SweepAxis::Snapshots,
        snr_db: vec![10.0],
        snapshots: vec![50, 100, 200, 400],
        trials: 2000,
        seed: 2,
        ..ExperimentConfig::default()
    };
    let s = run_eta_statistics(&cfg)?;
    println!("entry at lag {}", s.lag);
    for c in &s.cells {
        println!(
            "T={:<4} mean {:+.4}{:+.4}j  var {:.5}  oracle {:.5}",
            c.snapshots, c.mean.re, c.mean.im, c.variance, c.oracle_variance
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
