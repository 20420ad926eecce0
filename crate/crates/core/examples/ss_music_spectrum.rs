//! SS-MUSIC pseudospectrum on the contiguous coarray, exported as CSV.

use coarray_doa::coarray::dctm;
use coarray_doa::dictionary::AngularGrid;
use coarray_doa::geometry::{ArrayGeometry, GeometryKind};
use coarray_doa::signal_model::{simulate_snapshots, CouplingModel, SourceScene};
use coarray_doa::subspace::ss_music;

pub fn run() -> coarray_doa::Result<()> {
    let geom = ArrayGeometry::build(GeometryKind::Naq2, 6)?;
    let index = geom.coarray();
    let grid = AngularGrid::uniform_sine(512)?;
    // more sources than the six sensors
    let sines = [-0.8, -0.5, -0.2, 0.1, 0.4, 0.6, 0.9];
    let doas: Vec<f64> = sines.iter().map(|s: &f64| s.asin()).collect();
    let scene = SourceScene::with_snr(doas, 10.0)?;
    let snaps = simulate_snapshots(&geom, &scene, &CouplingModel::default(), 500, 3)?;
    let x = dctm(&snaps.sample_covariance, &index)?;
    let est = ss_music(&x, &index, &grid, sines.len())?;
    let mut found: Vec<f64> = est.doas.iter().map(|t| t.sin()).collect();
    found.sort_by(f64::total_cmp);
    println!("true sines      {sines:?}");
    println!("estimated sines {:?}", found.iter().map(|s| (s * 1000.0).round() / 1000.0).collect::<Vec<_>>());
    println!("peak/median     {:.1}", est.spectrum.peak_to_median());

    let path = std::env::temp_dir().join("ss_music_spectrum.csv");
    est.spectrum.write_csv(std::fs::File::create(&path)?)?;
    println!("spectrum written to {}", path.display());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
