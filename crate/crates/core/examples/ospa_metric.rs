//! OSPA with cutoff and cardinality penalty.

use coarray_doa::metrics::{min_cost_assignment, ospa_aggregate, ospa_single_trial, OspaConfig};

pub fn run() -> coarray_doa::Result<()> {
    let cfg = OspaConfig::default();
    let truth = [-0.5, 0.1, 0.6];
    let cases: [(&str, Vec<f64>); 4] = [
        ("exact", vec![0.6, -0.5, 0.1]),
        ("small errors", vec![-0.49, 0.11, 0.62]),
        ("one missed", vec![-0.5, 0.1]),
        ("one spurious", vec![-0.5, 0.1, 0.6, 1.2]),
    ];
    let mut terms = Vec::new();
    for (name, est) in &cases {
        let t = ospa_single_trial(est, &truth, &cfg)?;
        terms.push(t);
        println!("{name:<13} per-trial {t:.3e}  alone {:.4}", t.sqrt());
    }
    println!("aggregate over the four trials: {:.4} (cutoff {})", ospa_aggregate(&terms)?, cfg.phi);

    let (cost, assignment) = min_cost_assignment(&[vec![4.0, 1.0, 3.0], vec![2.0, 0.0, 5.0], vec![3.0, 2.0, 2.0]]);
    println!("assignment {assignment:?}, cost {cost}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
