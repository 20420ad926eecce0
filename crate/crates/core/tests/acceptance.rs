//! End-to-end acceptance checks. Runs as a plain binary and prints one
//! PASS/FAIL line per criterion; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use coarray_doa::coarray::{dctm, vectorize};
use coarray_doa::dictionary::{AngularGrid, Dictionary};
use coarray_doa::experiments::{
    output, run_eta_statistics, run_overload_demo, run_sweep, Algorithm, ExperimentConfig, GeometrySpec, ModelSpec,
    SceneSpec, SweepAxis,
};
use coarray_doa::geometry::{ArrayGeometry, GeometryKind};
use coarray_doa::metrics::{min_cost_assignment, ospa_aggregate, ospa_single_trial, OspaConfig};
use coarray_doa::numerics::{ml_log_score, Projector};
use coarray_doa::recovery::{lbml_omp, omp};
use coarray_doa::signal_model::{exact_covariance, simulate_snapshots, CouplingModel, SourceScene};
use coarray_doa::subspace::ss_music;
use coarray_doa::{CMatrix, Complex64};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn snaq2() -> (ArrayGeometry, Dictionary) {
    let g = ArrayGeometry::build(GeometryKind::Snaq2, 8).unwrap();
    let idx = g.coarray();
    let d = Dictionary::build(&g, &idx, AngularGrid::uniform_sine(1024).unwrap()).unwrap();
    (g, d)
}

fn sweep_config(name: &str) -> ExperimentConfig {
    ExperimentConfig {
        name: name.into(),
        geometries: vec![GeometrySpec::new(GeometryKind::Snaq2, 8)],
        trials: 200,
        seed: 20240601,
        ..ExperimentConfig::default()
    }
}

fn fmt_series(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.5}")).collect::<Vec<_>>().join(" ")
}

fn criterion_1() -> Verdict {
    let (g, dict) = snaq2();
    let idx = g.coarray();
    let grid = dict.grid().clone();
    let mut r = ChaCha8Rng::seed_from_u64(1);
    let mut mismatches = 0;
    for scene_no in 0..100 {
        let d = r.random_range(1..=6);
        let bins = sample(&mut r, 1024, d).into_vec();
        let doas: Vec<f64> = bins.iter().map(|&b| grid.angles()[b]).collect();
        let snr = if scene_no % 2 == 0 { -5.0 } else { 5.0 };
        let scene = SourceScene::with_snr(doas, snr).unwrap();
        let s = simulate_snapshots(&g, &scene, &CouplingModel::default(), 50, 1000 + scene_no).unwrap();
        let y = dctm(&s.sample_covariance, &idx).unwrap().values;
        let a = omp(&dict, &y, d).unwrap();
        let b = lbml_omp(&dict, &y, d, &s.sample_covariance, 1).unwrap();
        if a.support != b.support || a.coefficients != b.coefficients {
            mismatches += 1;
        }
    }
    verdict(mismatches == 0, format!("{mismatches}/100 scenes differ"))
}

fn criterion_2() -> Verdict {
    let brute = |p: &[i64]| {
        let mut l: Vec<i64> = p.iter().flat_map(|a| p.iter().map(move |b| a - b)).collect();
        l.sort_unstable();
        l.dedup();
        l
    };
    let naq2 = ArrayGeometry::build(GeometryKind::Naq2, 8).unwrap();
    let ula = ArrayGeometry::build(GeometryKind::Ula, 8).unwrap();
    let snaq2 = ArrayGeometry::build(GeometryKind::Snaq2, 8).unwrap();
    let (ci_n, ci_u, ci_s) = (naq2.coarray(), ula.coarray(), snaq2.coarray());
    let ok = ci_n.dof() == 39
        && ci_n.lags() == (-19..=19).collect::<Vec<_>>().as_slice()
        && ci_n.lags() == brute(naq2.positions()).as_slice()
        && ci_u.dof() == 15
        && ci_u.lags() == brute(ula.positions()).as_slice()
        && ci_s.lags() == ci_n.lags()
        && ci_s.lags() == brute(snaq2.positions()).as_slice();
    verdict(
        ok,
        format!("NAQ2 dof {}, ULA dof {}, SNAQ2 dof {}", ci_n.dof(), ci_u.dof(), ci_s.dof()),
    )
}

fn criterion_3() -> Verdict {
    let cfg = ExperimentConfig {
        geometries: vec![GeometrySpec::new(GeometryKind::Snaq2, 8)],
        scene: SceneSpec {
            doas_pi: Some(vec![-0.3426, 0.2947]),
            ..SceneSpec::default()
        },
        axis: SweepAxis::Snapshots,
        snr_db: vec![10.0],
        snapshots: vec![100, 200, 350, 700, 650, 1300],
        trials: 20_000,
        seed: 3,
        ..ExperimentConfig::default()
    };
    let s = run_eta_statistics(&cfg).unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for c in &s.cells {
        let z = (c.mean.re / c.std_error.0).abs().max((c.mean.im / c.std_error.1).abs());
        let rel = c.variance / c.oracle_variance - 1.0;
        ok &= z < 4.0 && rel.abs() <= 0.05;
        notes.push(format!("T={} z={z:.2} var/oracle-1={rel:+.4}", c.snapshots));
    }
    for t in [100, 350, 650] {
        let ratio = s.cell(2 * t).unwrap().variance / s.cell(t).unwrap().variance;
        ok &= (ratio / 0.5 - 1.0).abs() <= 0.10;
        notes.push(format!("var({})/var({t})={ratio:.4}", 2 * t));
    }
    verdict(ok, notes.join("; "))
}

fn criterion_4() -> Verdict {
    let cfg = ExperimentConfig {
        axis: SweepAxis::Snapshots,
        snr_db: vec![10.0],
        snapshots: vec![20, 40, 60, 80, 100],
        algorithms: vec![Algorithm::Omp, Algorithm::LbmlOmp],
        models: vec![ModelSpec::Dctm, ModelSpec::Edctm],
        ..sweep_config("c4")
    };
    let r = run_sweep(&cfg).unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for name in ["OMP", "LBML-OMP"] {
        let base = &r.series(name).unwrap().ospa;
        let enh = &r.series(&format!("{name}_E")).unwrap().ospa;
        let wins = enh.iter().zip(base).filter(|(e, b)| e <= b).count();
        ok &= wins >= 4;
        notes.push(format!("{name}: {wins}/5 [{}] vs _E [{}]", fmt_series(base), fmt_series(enh)));
    }
    verdict(ok, notes.join("; "))
}

fn criterion_5() -> Verdict {
    let cfg = ExperimentConfig {
        snr_db: vec![-4.0, 0.0, 4.0],
        snapshots: vec![50],
        algorithms: vec![Algorithm::LbmlOmp, Algorithm::Omp],
        ..sweep_config("c5")
    };
    let r = run_sweep(&cfg).unwrap();
    let l = &r.series("LBML-OMP").unwrap().ospa;
    let o = &r.series("OMP").unwrap().ospa;
    let ok = l.iter().zip(o).all(|(a, b)| a <= b);
    verdict(ok, format!("LBML-OMP [{}] OMP [{}]", fmt_series(l), fmt_series(o)))
}

fn criterion_6() -> Verdict {
    let cfg = ExperimentConfig {
        axis: SweepAxis::Snapshots,
        snr_db: vec![10.0],
        snapshots: vec![30],
        algorithms: vec![Algorithm::LbmlOmp],
        models: vec![
            ModelSpec::Dctm,
            ModelSpec::EdctmEstimated { alpha: 0.0 },
            ModelSpec::EdctmEstimated { alpha: 0.4 },
            ModelSpec::EdctmEstimated { alpha: 0.6 },
            ModelSpec::EdctmEstimated { alpha: 0.8 },
        ],
        ..sweep_config("c6")
    };
    let r = run_sweep(&cfg).unwrap();
    let v = |label: &str| r.series(label).unwrap().ospa[0];
    let dctm = v("LBML-OMP");
    let a: Vec<f64> = [0.0, 0.4, 0.6, 0.8]
        .iter()
        .map(|x| v(&format!("LBML-OMP_E(alpha={x})")))
        .collect();
    let ok = a[0] <= a[1] && a[1] <= a[3] && a[2] <= dctm;
    verdict(
        ok,
        format!(
            "DCTM {dctm:.5}; alpha 0/0.4/0.6/0.8 -> {:.5}/{:.5}/{:.5}/{:.5}",
            a[0], a[1], a[2], a[3]
        ),
    )
}

fn criterion_7() -> Verdict {
    let sines: Vec<f64> = (0..10).map(|k| -0.9 + 0.2 * k as f64).collect();
    let cfg = ExperimentConfig {
        scene: SceneSpec::from_sines(sines),
        snr_db: vec![20.0],
        snapshots: vec![200],
        trials: 100,
        seed: 7,
        ..ExperimentConfig::default()
    };
    let r = run_overload_demo(&cfg).unwrap();
    let m = r.median_recovered();
    let full = r.recovered.iter().filter(|&&k| k == 10).count();
    verdict(m >= 8, format!("median {m}/10 within 2 bins; {full}/100 trials recover all 10"))
}

fn criterion_8() -> Verdict {
    let (g, dict) = snaq2();
    let idx = g.coarray();
    let grid = dict.grid().clone();
    let doas = SceneSpec::default().doas(&grid).unwrap();
    let scene = SourceScene::with_snr(doas, 0.0).unwrap();
    let inputs: Vec<_> = (0..50)
        .map(|k| {
            let s = simulate_snapshots(&g, &scene, &CouplingModel::default(), 50, k).unwrap();
            (dctm(&s.sample_covariance, &idx).unwrap().values, s.sample_covariance)
        })
        .collect();
    let time = |f: &dyn Fn(usize)| {
        let start = Instant::now();
        for k in 0..inputs.len() {
            f(k);
        }
        start.elapsed().as_secs_f64() / inputs.len() as f64
    };
    // warm-up
    omp(&dict, &inputs[0].0, 5).unwrap();
    let t_omp = time(&|k| {
        omp(&dict, &inputs[k].0, 5).unwrap();
    });
    let t_lbml = time(&|k| {
        lbml_omp(&dict, &inputs[k].0, 5, &inputs[k].1, 11).unwrap();
    });
    let ratio = t_lbml / t_omp;
    verdict(
        ratio <= 3.0 * 12.0,
        format!("LBML-OMP {:.3} ms, OMP {:.3} ms, ratio {ratio:.2} (bound 36)", t_lbml * 1e3, t_omp * 1e3),
    )
}

fn random_matrix(r: &mut ChaCha8Rng, n: usize, m: usize) -> CMatrix {
    CMatrix::from_fn(n, m, |_, _| Complex64::new(r.random::<f64>() - 0.5, r.random::<f64>() - 0.5))
}

fn criterion_9() -> Verdict {
    let mut r = ChaCha8Rng::seed_from_u64(9);
    let mut fails = Vec::new();

    for _ in 0..50 {
        let m = r.random_range(1..=7);
        let a = random_matrix(&mut r, 8, m);
        let p = Projector::onto(&a).unwrap();
        let pm = p.matrix();
        if (pm * pm - pm).norm() > 1e-9 * pm.norm() || (pm - pm.adjoint()).norm() > 1e-9 {
            fails.push("projector");
            break;
        }
    }

    for _ in 0..50 {
        let (a, b, c) = (random_matrix(&mut r, 4, 3), random_matrix(&mut r, 3, 5), random_matrix(&mut r, 5, 2));
        let lhs = vectorize(&(&a * &b * &c));
        let rhs = c.transpose().kronecker(&a) * vectorize(&b);
        if (&lhs - &rhs).norm() > 1e-13 * lhs.norm().max(1.0) {
            fails.push("vec identity");
            break;
        }
    }

    for _ in 0..20 {
        let x = random_matrix(&mut r, 8, 16);
        let cov = &x * x.adjoint();
        let c = 0.1 + 10.0 * r.random::<f64>();
        let scaled = cov.scale(c);
        let mut best = (usize::MAX, usize::MAX);
        let mut best_val = (f64::INFINITY, f64::INFINITY);
        for q in 0..11 {
            let u = Projector::onto(&random_matrix(&mut r, 8, 3)).unwrap();
            let s0 = ml_log_score(&u, &cov, 3).unwrap();
            let s1 = ml_log_score(&u, &scaled, 3).unwrap();
            if (s1 - s0 - 8.0 * c.ln()).abs() > 1e-9 * s0.abs().max(1.0) {
                fails.push("ml score scaling");
            }
            if s0 < best_val.0 {
                best_val.0 = s0;
                best.0 = q;
            }
            if s1 < best_val.1 {
                best_val.1 = s1;
                best.1 = q;
            }
        }
        if best.0 != best.1 {
            fails.push("ml argmin invariance");
        }
    }

    let cfg = OspaConfig::default();
    for _ in 0..200 {
        let d = r.random_range(1..=4);
        let dh = r.random_range(0..=5);
        let truth: Vec<f64> = (0..d).map(|_| r.random_range(-1.5..1.5)).collect();
        let est: Vec<f64> = (0..dh).map(|_| r.random_range(-1.5..1.5)).collect();
        let term = ospa_single_trial(&est, &truth, &cfg).unwrap();
        let agg = ospa_aggregate(&[term]).unwrap();
        if !(0.0..=cfg.phi * (1.0 + 1e-12)).contains(&agg) {
            fails.push("ospa bounds");
        }
        let cost: Vec<Vec<f64>> = (0..d).map(|_| (0..4).map(|_| r.random::<f64>()).collect()).collect();
        let (h, _) = min_cost_assignment(&cost);
        if (h - brute_force_assignment(&cost)).abs() > 1e-12 {
            fails.push("hungarian");
        }
    }

    let (g, dict) = snaq2();
    let idx = g.coarray();
    let grid = dict.grid();
    for bins in [[200usize, 700], [500, 530], [100, 900]] {
        let doas: Vec<f64> = bins.iter().map(|&b| grid.angles()[b]).collect();
        let scene = SourceScene::new(doas, vec![1.0, 1.0], 0.1).unwrap();
        let x = dctm(&exact_covariance(&g, &scene, &CouplingModel::default()), &idx).unwrap();
        let mut got = ss_music(&x, &idx, grid, 2).unwrap().peaks;
        got.sort_unstable();
        if got != bins {
            fails.push("ss-music exact recovery");
        }
    }

    fails.dedup();
    verdict(fails.is_empty(), if fails.is_empty() { "all invariants hold".to_string() } else { fails.join(", ") })
}

fn brute_force_assignment(cost: &[Vec<f64>]) -> f64 {
    fn rec(cost: &[Vec<f64>], row: usize, used: &mut [bool]) -> f64 {
        if row == cost.len() {
            return 0.0;
        }
        let mut best = f64::INFINITY;
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                best = best.min(cost[row][j] + rec(cost, row + 1, used));
                used[j] = false;
            }
        }
        best
    }
    rec(cost, 0, &mut vec![false; cost[0].len()])
}

fn criterion_10() -> Verdict {
    let base = ExperimentConfig {
        snr_db: vec![-4.0, 4.0],
        snapshots: vec![30],
        trials: 24,
        algorithms: Algorithm::ALL.to_vec(),
        models: vec![ModelSpec::Dctm, ModelSpec::Edctm, ModelSpec::EdctmEstimated { alpha: 0.4 }],
        ..sweep_config("determinism")
    };
    let bytes = |workers: usize| {
        let r = run_sweep(&ExperimentConfig { workers, ..base.clone() }).unwrap();
        let mut buf = Vec::new();
        output::write_sweep_csv(&r, &mut buf).unwrap();
        buf
    };
    let (a, b) = (bytes(1), bytes(8));
    verdict(a == b, format!("{} bytes at 1 worker, {} bytes at 8 workers", a.len(), b.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict, Option<Duration>); 10] = [
        ("1 LBML-OMP(Q=1) equals OMP", criterion_1, Some(Duration::from_secs(30))),
        ("2 coarray structure", criterion_2, Some(Duration::from_secs(1))),
        ("3 eta' statistics", criterion_3, Some(Duration::from_secs(120))),
        ("4 EDCTM benefit", criterion_4, Some(Duration::from_secs(300))),
        ("5 LBML-OMP benefit", criterion_5, Some(Duration::from_secs(300))),
        ("6 alpha degradation order", criterion_6, Some(Duration::from_secs(300))),
        ("7 overload identification", criterion_7, Some(Duration::from_secs(180))),
        ("8 complexity bound", criterion_8, None),
        ("9 numerical invariants", criterion_9, Some(Duration::from_secs(60))),
        ("10 determinism", criterion_10, None),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let v = run();
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed <= b);
        let pass = v.pass && in_time;
        if !pass {
            failed += 1;
        }
        let budget_note = budget.map(|b| format!(" / {}s", b.as_secs())).unwrap_or_default();
        println!(
            "criterion {name}: {} ({:.1}s{budget_note}) {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            v.detail
        );
    }
    println!("acceptance: {}/10 passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
