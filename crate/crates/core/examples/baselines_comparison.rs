//! Every estimator on the same coarray measurement.

use coarray_doa::coarray::dctm;
use coarray_doa::dictionary::{AngularGrid, Dictionary};
use coarray_doa::experiments::{estimate, Algorithm};
use coarray_doa::geometry::{ArrayGeometry, GeometryKind};
use coarray_doa::metrics::{ospa_single_trial, OspaConfig};
use coarray_doa::recovery::RecoveryConfig;
use coarray_doa::signal_model::{simulate_snapshots, CouplingModel, SourceScene};

pub fn run() -> coarray_doa::Result<()> {
    let geom = ArrayGeometry::build(GeometryKind::Snaq2, 8)?;
    let index = geom.coarray();
    let grid = AngularGrid::uniform_sine(1024)?;
    let doas: Vec<f64> = [-0.6f64, -0.1, 0.35, 0.75].iter().map(|s| grid.snap(s.asin())).collect();
    let dict = Dictionary::build(&geom, &index, grid)?;
    let scene = SourceScene::with_snr(doas.clone(), 10.0)?;
    let snaps = simulate_snapshots(&geom, &scene, &CouplingModel::default(), 100, 1)?;
    let y = dctm(&snaps.sample_covariance, &index)?;
    let rc = RecoveryConfig::new(doas.len());
    let ospa = OspaConfig::default();
    for algorithm in Algorithm::ALL {
        match estimate(algorithm, &dict, &index, &y, &snaps.sample_covariance, &rc) {
            Ok(mut est) => {
                est.sort_by(f64::total_cmp);
                let sines: Vec<String> = est.iter().map(|t| format!("{:+.3}", t.sin())).collect();
                let term = ospa_single_trial(&est, &doas, &ospa)?;
                println!("{:<9} OSPA {:.4}  sines [{}]", algorithm.name(), term.sqrt(), sines.join(" "));
            }
            Err(e) => println!("{:<9} failed: {e}", algorithm.name()),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
