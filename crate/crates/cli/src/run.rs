//! Sweep execution and CSV output.

use std::io::Write;

use anyhow::Result;
use rayon::prelude::*;

use gclkit::flow::{RK_ALPHA, RK_BETA};
use gclkit::metrics::NOISE_FLOOR;
use gclkit::{build_box_mesh, ErrorReport, Study, StudyOptions};

use crate::config::RunConfig;

pub const COLUMNS: &str =
    "case,method,N,Nts,rel_err_freestream,abs_err1,abs_err2_x,abs_err2_y,abs_err2_z,fd1_ref,fd2_ref,wall_ms";

/// Rows for every harmonic count, in ascending `N` order.
pub fn run_sweep(cfg: &RunConfig) -> Result<Vec<ErrorReport>> {
    let [nx, ny, nz] = cfg.mesh;
    let [lx, ly, lz] = cfg.lengths;
    let study = Study::new(build_box_mesh(nx, ny, nz, lx, ly, lz)?, &cfg.motion)?;
    let opts = StudyOptions { methods: cfg.methods.clone(), freestream: cfg.freestream.clone(), timing: cfg.timing };
    let per_n: Vec<Vec<ErrorReport>> = (cfg.range.first..=cfg.range.last)
        .into_par_iter()
        .map(|n| study.evaluate(n, &opts))
        .collect::<gclkit::Result<_>>()?;
    Ok(per_n.into_iter().flatten().collect())
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn write_csv(out: &mut impl Write, cfg: &RunConfig, rows: &[ErrorReport]) -> std::io::Result<()> {
    let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    writeln!(out, "# gclkit {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "# case: {}", cfg.motion.id())?;
    for (k, v) in cfg.motion.kind.describe() {
        writeln!(out, "# {k}: {v}")?;
    }
    writeln!(out, "# period: {}", cfg.motion.period)?;
    let methods: Vec<&str> = cfg.methods.iter().map(|m| m.name()).collect();
    writeln!(out, "# methods: {}", methods.join(","))?;
    writeln!(out, "# harmonics: {}..{}", cfg.range.first, cfg.range.last)?;
    writeln!(out, "# mesh: {},{},{}", cfg.mesh[0], cfg.mesh[1], cfg.mesh[2])?;
    writeln!(out, "# lengths: {}", list(&cfg.lengths))?;
    writeln!(out, "# order_fit_noise_floor: {NOISE_FLOOR:e}")?;
    match &cfg.freestream {
        Some(f) => {
            writeln!(out, "# freestream: on")?;
            writeln!(out, "# freestream_w0: {}", list(&f.w0.to_vector()))?;
            writeln!(out, "# gamma: {}", f.w0.gamma)?;
            writeln!(out, "# cfl: {}", f.cfl)?;
            writeln!(out, "# max_iterations: {}", f.max_iterations)?;
            writeln!(out, "# convergence_drop: {:e}", f.convergence_drop)?;
            writeln!(out, "# absolute_floor: {:e}", f.absolute_floor)?;
            writeln!(out, "# jst_kappa2: {}", f.jst.kappa2)?;
            writeln!(out, "# jst_kappa4: {}", f.jst.kappa4)?;
            writeln!(out, "# rk_alpha: {}", list(&RK_ALPHA))?;
            writeln!(out, "# rk_beta: {}", list(&RK_BETA))?;
        }
        None => writeln!(out, "# freestream: off")?,
    }
    writeln!(out, "{COLUMNS}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.case,
            r.method,
            r.harmonics,
            r.sample_count,
            opt(r.rel_err_freestream),
            num(r.abs_err1),
            num(r.abs_err2[0]),
            num(r.abs_err2[1]),
            num(r.abs_err2[2]),
            num(r.fd1_ref),
            num(r.fd2_ref),
            opt(r.wall_ms),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, 2.2250738585072014e-308, 6.02214076e23] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(opt(None), "");
    }
}
