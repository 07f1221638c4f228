//! `scan` subcommand: the detection-threshold surface p_xy on a rectangular
//! (x, y) grid, with the named criterion points and the minimizing curve
//! included as tagged rows.

use crate::emit::{float, to_json_pretty, FileFormat};
use crate::{thread_pool, Failure};
use clap::Args;
use corrsep::analytic::{hyperbola_and_min, p_xy_threshold, quadratic_case, Hyperbola, LINEAR_A_TOL};
use corrsep::bases::{correlation_matrix, norm_bound, scale_correlation, CorrelationMatrix, OperatorBasis};
use corrsep::criteria::{CriterionParams, NamedCriterion, DETECTION_TOL};
use corrsep::linalg::trace_norm;
use corrsep::states::{isotropic, IsotropicParams};
use corrsep::BipartiteShape;
use rayon::prelude::*;
use serde::Serialize;
use std::path::PathBuf;

/// Points on the curve are generated from exact arithmetic, so anything
/// further away than this is off it.
const ON_CURVE_TOL: f64 = 1e-9;

#[derive(Args)]
pub struct ScanArgs {
    /// Smaller local dimension (at least 2)
    #[arg(long)]
    d1: usize,
    /// Larger local dimension (at least d1)
    #[arg(long)]
    d2: usize,
    /// Upper end of the x axis [default: sqrt(d2+1) * 1.2]
    #[arg(long)]
    xmax: Option<f64>,
    /// Upper end of the y axis [default: sqrt(d2+1) * 1.2]
    #[arg(long)]
    ymax: Option<f64>,
    /// Grid points per axis
    #[arg(long, default_value_t = 201)]
    steps: usize,
    /// Also test the isotropic state at this mixing parameter on every row
    #[arg(long)]
    p: Option<f64>,
    /// Emit only the rectangular grid, without named or curve rows
    #[arg(long)]
    grid_only: bool,
    /// Worker threads [default: CORRSEP_PARALLELISM, else all cores]
    #[arg(long)]
    parallelism: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = FileFormat::Csv)]
    format: FileFormat,
}

#[derive(Serialize)]
struct ScanRow {
    tag: String,
    x: f64,
    y: f64,
    p_xy: f64,
    a_sign: i8,
    on_hyperbola: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    detected_at_p: Option<bool>,
}

#[derive(Serialize)]
struct Meta {
    d1: usize,
    d2: usize,
    xmax: f64,
    ymax: f64,
    steps: usize,
    grid_only: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
}

#[derive(Serialize)]
struct Report {
    meta: Meta,
    rows: Vec<ScanRow>,
}

/// The state probe shared by all rows: the canonical correlation matrix of
/// the isotropic state at the requested p. Scaling per row is cheap; only
/// the trace norm costs an SVD.
struct Probe {
    canonical: CorrelationMatrix,
}

fn row(
    shape: BipartiteShape,
    curve: &Hyperbola,
    probe: Option<&Probe>,
    tag: String,
    x: f64,
    y: f64,
) -> Result<ScanRow, corrsep::Error> {
    let params = CriterionParams::new(x, y)?;
    let case = quadratic_case(shape, &params)?;
    let a_sign = if case.a.abs() <= LINEAR_A_TOL {
        0
    } else if case.a > 0.0 {
        1
    } else {
        -1
    };
    let detected_at_p = match probe {
        None => None,
        Some(probe) => {
            let scaled = scale_correlation(&probe.canonical, x, y)?;
            let lhs = trace_norm(&scaled.entries())?;
            Some(lhs - norm_bound(x, y, shape) > DETECTION_TOL)
        }
    };
    Ok(ScanRow {
        tag,
        x,
        y,
        p_xy: p_xy_threshold(shape, &params)?,
        a_sign,
        on_hyperbola: curve.residual(&params).abs() <= ON_CURVE_TOL,
        detected_at_p,
    })
}

pub fn run(args: ScanArgs) -> Result<(), Failure> {
    let shape = BipartiteShape::new(args.d1, args.d2)?;
    if args.steps < 2 {
        return Err(Failure::Usage(format!(
            "--steps must be at least 2, got {}",
            args.steps
        )));
    }
    let default_max = ((args.d2 + 1) as f64).sqrt() * 1.2;
    let xmax = args.xmax.unwrap_or(default_max);
    let ymax = args.ymax.unwrap_or(default_max);
    for (name, value) in [("--xmax", xmax), ("--ymax", ymax)] {
        if !value.is_finite() || value <= 0.0 {
            return Err(Failure::Usage(format!("{name} must be positive, got {value}")));
        }
    }

    let (curve, _) = hyperbola_and_min(shape)?;
    let probe = match args.p {
        None => None,
        Some(p) => {
            let rho = isotropic(IsotropicParams { shape, p })?;
            let b1 = OperatorBasis::gell_mann(shape.d1())?;
            let b2 = OperatorBasis::gell_mann(shape.d2())?;
            Some(Probe {
                canonical: correlation_matrix(&rho, &b1, &b2)?,
            })
        }
    };

    let pool = thread_pool(args.parallelism)?;
    let steps = args.steps;
    let grid_points: Vec<(f64, f64)> = (0..steps * steps)
        .map(|k| {
            let (i, j) = (k / steps, k % steps);
            (
                xmax * i as f64 / (steps - 1) as f64,
                ymax * j as f64 / (steps - 1) as f64,
            )
        })
        .collect();
    let eval_grid = || -> Result<Vec<ScanRow>, corrsep::Error> {
        grid_points
            .par_iter()
            .map(|&(x, y)| row(shape, &curve, probe.as_ref(), "grid".to_string(), x, y))
            .collect()
    };
    let mut rows = match &pool {
        Some(pool) => pool.install(eval_grid)?,
        None => eval_grid()?,
    };

    if !args.grid_only {
        for which in NamedCriterion::ALL {
            let point = which.params(shape);
            rows.push(row(
                shape,
                &curve,
                probe.as_ref(),
                format!("named:{}", which.label()),
                point.x(),
                point.y(),
            )?);
        }
        // the curve trace, clipped to the plot window
        if curve.x_min() <= xmax {
            for i in 0..steps {
                let x = curve.x_min() + (xmax - curve.x_min()) * i as f64 / (steps - 1) as f64;
                if let Some(y) = curve.y_at(x) {
                    if y <= ymax {
                        rows.push(row(
                            shape,
                            &curve,
                            probe.as_ref(),
                            "hyperbola".to_string(),
                            x,
                            y,
                        )?);
                    }
                }
            }
        }
    }

    let content = match args.format {
        FileFormat::Csv => render_csv(&rows, args.p.is_some()),
        FileFormat::Json => to_json_pretty(&Report {
            meta: Meta {
                d1: args.d1,
                d2: args.d2,
                xmax,
                ymax,
                steps,
                grid_only: args.grid_only,
                p: args.p,
            },
            rows,
        })?,
    };
    std::fs::write(&args.out, content)
        .map_err(|err| Failure::Io(format!("cannot write {}: {err}", args.out.display())))
}

fn render_csv(rows: &[ScanRow], with_detection: bool) -> String {
    let mut out = String::from("tag,x,y,p_xy,a_sign,on_hyperbola");
    if with_detection {
        out.push_str(",detected_at_p");
    }
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}",
            row.tag,
            float(row.x),
            float(row.y),
            float(row.p_xy),
            row.a_sign,
            row.on_hyperbola
        ));
        if let Some(detected) = row.detected_at_p {
            out.push_str(&format!(",{detected}"));
        }
        out.push('\n');
    }
    out
}
