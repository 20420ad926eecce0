//! LBML-OMP on a closely spaced scene, with its per-iteration candidate trace.

use coarray_doa::coarray::dctm;
use coarray_doa::dictionary::{AngularGrid, Dictionary};
use coarray_doa::geometry::{ArrayGeometry, GeometryKind};
use coarray_doa::recovery::{lbml_omp, omp};
use coarray_doa::signal_model::{simulate_snapshots, CouplingModel, SourceScene};

pub fn run() -> coarray_doa::Result<()> {
    let geom = ArrayGeometry::build(GeometryKind::Snaq2, 8)?;
    let index = geom.coarray();
    let grid = AngularGrid::uniform_sine(1024)?;
    let truth: Vec<usize> = vec![300, 330, 700];
    let doas: Vec<f64> = truth.iter().map(|&k| grid.angles()[k]).collect();
    let dict = Dictionary::build(&geom, &index, grid)?;

    let scene = SourceScene::with_snr(doas, 0.0)?;
    let snaps = simulate_snapshots(&geom, &scene, &CouplingModel::default(), 50, 5)?;
    let y = dctm(&snaps.sample_covariance, &index)?.values;

    let base = omp(&dict, &y, truth.len())?;
    let res = lbml_omp(&dict, &y, truth.len(), &snaps.sample_covariance, 11)?;
    println!("truth bins    {truth:?}");
    println!("OMP bins      {:?}", base.grid_support(&dict));
    println!("LBML-OMP bins {:?}", res.grid_support(&dict));
    for (i, step) in res.trace.iter().enumerate() {
        let best = step.log_scores.iter().cloned().fold(f64::INFINITY, f64::min);
        println!(
            "  iter {i}: corr-max {:>4} -> chosen {:>4} (log score {best:.3}{})",
            step.corr_max,
            step.chosen,
            if step.fallback { ", fallback" } else { "" }
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
