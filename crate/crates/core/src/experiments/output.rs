//! CSV tables and gnuplot scripts for harness results.

use std::f64::consts::PI;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::eta_stats::EtaStatistics;
use super::overload::OverloadResult;
use super::sweep::SweepResult;
use crate::Result;

pub const SWEEP_HEADER: &str = "axis,algorithm,ospa,trials,seconds";

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_sweep_csv<W: Write>(r: &SweepResult, mut out: W) -> Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for s in &r.series {
        for (k, x) in r.axis_values.iter().enumerate() {
            writeln!(
                out,
                "{x},{},{},{},{}",
                s.label,
                s.ospa[k],
                s.trials[k],
                fmt_opt(s.seconds[k])
            )?;
        }
    }
    Ok(())
}

pub fn write_sweep_gnuplot<W: Write>(r: &SweepResult, csv_name: &str, mut out: W) -> Result<()> {
    let xlabel = match r.axis_name.as_str() {
        "snr_db" => "SNR (dB)",
        _ => "snapshots",
    };
    writeln!(out, "set datafile separator ','")?;
    writeln!(out, "set key outside right")?;
    writeln!(out, "set xlabel '{xlabel}'")?;
    writeln!(out, "set ylabel 'OSPA (rad)'")?;
    writeln!(out, "set logscale y")?;
    writeln!(out, "set grid")?;
    let plots: Vec<String> = r
        .series
        .iter()
        .map(|s| {
            format!(
                "'{csv_name}' every ::1 using 1:(strcol(2) eq \"{l}\" ? $3 : NaN) with linespoints title \"{l}\"",
                l = s.label
            )
        })
        .collect();
    writeln!(out, "plot {}", plots.join(", \\\n     "))?;
    Ok(())
}

pub const ETA_VARIANCE_HEADER: &str = "snapshots,mean_re,mean_im,stderr_re,stderr_im,variance,oracle_variance,trials";
pub const ETA_HISTOGRAM_HEADER: &str = "snapshots,part,center,density,oracle_density";

pub fn write_eta_variance_csv<W: Write>(s: &EtaStatistics, mut out: W) -> Result<()> {
    writeln!(out, "{ETA_VARIANCE_HEADER}")?;
    for c in &s.cells {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            c.snapshots, c.mean.re, c.mean.im, c.std_error.0, c.std_error.1, c.variance, c.oracle_variance, s.trials
        )?;
    }
    Ok(())
}

/// Gaussian density with variance `v`, used as the large-`T` overlay.
fn normal_pdf(x: f64, v: f64) -> f64 {
    if v <= 0.0 {
        return 0.0;
    }
    (-x * x / (2.0 * v)).exp() / (2.0 * PI * v).sqrt()
}

pub fn write_eta_histogram_csv<W: Write>(s: &EtaStatistics, mut out: W) -> Result<()> {
    writeln!(out, "{ETA_HISTOGRAM_HEADER}")?;
    for c in &s.cells {
        // circular: real and imaginary parts each carry half the variance
        let half = c.oracle_variance / 2.0;
        for (part, h) in [("re", &c.real_histogram), ("im", &c.imag_histogram)] {
            for (x, d) in h.centers().iter().zip(&h.density) {
                writeln!(out, "{},{part},{x},{d},{}", c.snapshots, normal_pdf(*x, half))?;
            }
        }
    }
    Ok(())
}

pub fn write_eta_gnuplot<W: Write>(variance_csv: &str, histogram_csv: &str, mut out: W) -> Result<()> {
    writeln!(out, "set datafile separator ','")?;
    writeln!(out, "set multiplot layout 2,1")?;
    writeln!(out, "set xlabel 'value'")?;
    writeln!(out, "set ylabel 'pdf'")?;
    writeln!(
        out,
        "plot '{histogram_csv}' every ::1 using 3:(strcol(2) eq \"re\" ? $4 : NaN) with steps title 'Re', \\\n     \
         '{histogram_csv}' every ::1 using 3:(strcol(2) eq \"im\" ? $4 : NaN) with steps title 'Im', \\\n     \
         '{histogram_csv}' every ::1 using 3:(strcol(2) eq \"re\" ? $5 : NaN) with lines title 'Gaussian'"
    )?;
    writeln!(out, "set xlabel 'snapshots'")?;
    writeln!(out, "set ylabel 'E|eta_1|^2'")?;
    writeln!(
        out,
        "plot '{variance_csv}' every ::1 using 1:6 with points title 'empirical', \\\n     \
         '{variance_csv}' every ::1 using 1:7 with lines title 'oracle'"
    )?;
    writeln!(out, "unset multiplot")?;
    Ok(())
}

pub const OVERLOAD_HEADER: &str = "sine,mean_magnitude,first_trial_magnitude,is_source";
pub const OVERLOAD_TRIALS_HEADER: &str = "trial,recovered,estimated_bins";

pub fn write_overload_csv<W: Write>(r: &OverloadResult, mut out: W) -> Result<()> {
    writeln!(out, "{OVERLOAD_HEADER}")?;
    let mean = r.mean_magnitude();
    for (k, s) in r.sines.iter().enumerate() {
        let src = u8::from(r.truth_bins.contains(&k));
        writeln!(out, "{s},{},{},{src}", mean[k], r.magnitudes[0][k])?;
    }
    Ok(())
}

pub fn write_overload_trials_csv<W: Write>(r: &OverloadResult, mut out: W) -> Result<()> {
    writeln!(out, "{OVERLOAD_TRIALS_HEADER}")?;
    for (t, (hits, est)) in r.recovered.iter().zip(&r.estimates).enumerate() {
        let bins: Vec<String> = est.iter().map(usize::to_string).collect();
        writeln!(out, "{t},{hits},{}", bins.join(";"))?;
    }
    Ok(())
}

pub fn write_overload_gnuplot<W: Write>(csv_name: &str, mut out: W) -> Result<()> {
    writeln!(out, "set datafile separator ','")?;
    writeln!(out, "set xlabel 'sine of DOA'")?;
    writeln!(out, "set ylabel '|p^g|'")?;
    writeln!(
        out,
        "plot '{csv_name}' every ::1 using 1:2 with impulses title 'mean', \\\n     \
         '{csv_name}' every ::1 using 1:($4 > 0 ? 0 : NaN) with points pt 7 title 'sources'"
    )?;
    Ok(())
}

fn create(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
    let path = dir.join(name);
    Ok((path.clone(), BufWriter::new(File::create(path)?)))
}

/// Write `<name>.csv` and `<name>.gp` into `dir`.
pub fn save_sweep(r: &SweepResult, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let csv = format!("{}.csv", r.name);
    let (p1, mut f) = create(dir, &csv)?;
    write_sweep_csv(r, &mut f)?;
    f.flush()?;
    let (p2, mut f) = create(dir, &format!("{}.gp", r.name))?;
    write_sweep_gnuplot(r, &csv, &mut f)?;
    f.flush()?;
    Ok(vec![p1, p2])
}

pub fn save_eta_statistics(s: &EtaStatistics, name: &str, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let var = format!("{name}_variance.csv");
    let hist = format!("{name}_histogram.csv");
    let (p1, mut f) = create(dir, &var)?;
    write_eta_variance_csv(s, &mut f)?;
    f.flush()?;
    let (p2, mut f) = create(dir, &hist)?;
    write_eta_histogram_csv(s, &mut f)?;
    f.flush()?;
    let (p3, mut f) = create(dir, &format!("{name}.gp"))?;
    write_eta_gnuplot(&var, &hist, &mut f)?;
    f.flush()?;
    Ok(vec![p1, p2, p3])
}

pub fn save_overload(r: &OverloadResult, name: &str, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let csv = format!("{name}.csv");
    let (p1, mut f) = create(dir, &csv)?;
    write_overload_csv(r, &mut f)?;
    f.flush()?;
    let (p2, mut f) = create(dir, &format!("{name}_trials.csv"))?;
    write_overload_trials_csv(r, &mut f)?;
    f.flush()?;
    let (p3, mut f) = create(dir, &format!("{name}.gp"))?;
    write_overload_gnuplot(&csv, &mut f)?;
    f.flush()?;
    Ok(vec![p1, p2, p3])
}
