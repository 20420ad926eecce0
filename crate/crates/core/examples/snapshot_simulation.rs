//! Simulate snapshots and compare the sample covariance with the model.

use coarray_doa::geometry::{ArrayGeometry, GeometryKind};
use coarray_doa::signal_model::{exact_covariance, simulate_snapshots, CouplingModel, SourceScene};

pub fn run() -> coarray_doa::Result<()> {
    let geom = ArrayGeometry::build(GeometryKind::Snaq2, 8)?;
    let scene = SourceScene::with_snr(vec![-0.4, 0.1, 0.7], 5.0)?;
    let exact = exact_covariance(&geom, &scene, &CouplingModel::default());
    for t in [10, 100, 1000, 10000] {
        let s = simulate_snapshots(&geom, &scene, &CouplingModel::default(), t, 42)?;
        let err = (&s.sample_covariance - &exact).norm() / exact.norm();
        println!("T = {t:>5}: relative covariance error {err:.4}");
    }

    let coupled = CouplingModel::standard();
    let g = coupled.matrix(&geom);
    println!("coupling g(1) = {:.3}, G[0,1] = {:.3}", coupled.g1(), g[(0, 1)]);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
