//! How much of the coarray error the finite-sample term η′ explains.

use coarray_doa::coarray::{dctm, edctm, eta_prime_exact, eta_prime_moments_oracle};
use coarray_doa::geometry::{ArrayGeometry, GeometryKind};
use coarray_doa::signal_model::{exact_covariance, simulate_snapshots, CouplingModel, SourceScene};

pub fn run() -> coarray_doa::Result<()> {
    let geom = ArrayGeometry::build(GeometryKind::Snaq2, 8)?;
    let index = geom.coarray();
    let doas = vec![-0.9, -0.3, 0.2, 0.8];
    let scene = SourceScene::with_snr(doas.clone(), 10.0)?;
    let ideal = dctm(&exact_covariance(&geom, &scene, &CouplingModel::default()), &index)?;
    println!("{:>5} {:>10} {:>10} {:>12}", "T", "|DCTM err|", "|EDCTM err|", "E|eta'_1|^2");
    for t in [20, 50, 200, 1000] {
        let s = simulate_snapshots(&geom, &scene, &CouplingModel::default(), t, 7)?;
        let eta = eta_prime_exact(&geom, &doas, &s.source_covariance(), &index)?;
        let plain = dctm(&s.sample_covariance, &index)?;
        let enhanced = edctm(&s.sample_covariance, &eta, &index)?;
        let oracle = eta_prime_moments_oracle(&geom, &doas, &scene.powers, t, &index)?;
        println!(
            "{t:>5} {:>10.4} {:>10.4} {:>12.5}",
            (&plain.values - &ideal.values).norm(),
            (&enhanced.values - &ideal.values).norm(),
            oracle.variance[0]
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
