//! `thresholds` subcommand: analytic detection thresholds for one dimension
//! pair, each cross-checked against a bisection over the SVD evaluation.

use crate::emit::{float, to_json_pretty, write_out};
use crate::Failure;
use clap::{Args, ValueEnum};
use corrsep::analytic::{hyperbola_and_min, named_thresholds};
use corrsep::criteria::{detection_threshold_numeric, Criterion, CriterionParams, NamedCriterion};
use corrsep::states::{isotropic, IsotropicParams};
use corrsep::BipartiteShape;
use serde::Serialize;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Table,
    Csv,
    Json,
}

#[derive(Args)]
pub struct ThresholdsArgs {
    /// Smaller local dimension (at least 2)
    d1: usize,
    /// Larger local dimension (at least d1)
    d2: usize,
    #[arg(long, value_enum, default_value_t = TableFormat::Table)]
    format: TableFormat,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Row {
    name: &'static str,
    analytic: f64,
    numeric: f64,
    abs_diff: f64,
}

#[derive(Serialize)]
struct Report {
    meta: Meta,
    rows: Vec<Row>,
    max_abs_diff: f64,
}

#[derive(Serialize)]
struct Meta {
    d1: usize,
    d2: usize,
}

pub fn run(args: ThresholdsArgs) -> Result<(), Failure> {
    let shape = BipartiteShape::new(args.d1, args.d2)?;
    let set = named_thresholds(shape)?;
    let family = |p: f64| isotropic(IsotropicParams { shape, p });
    let bisect = |criterion: Criterion| -> Result<f64, Failure> {
        Ok(detection_threshold_numeric(family, &criterion, (0.0, 1.0))?)
    };

    // a point on the minimizing curve, where the analytic family minimum is
    // attained and can therefore be cross-checked by bisection
    let (curve, _) = hyperbola_and_min(shape)?;
    let d1 = shape.d1() as f64;
    let d2 = shape.d2() as f64;
    let x_on_curve = ((1.0 + 2.0 * curve.gamma()) * (d1 - 1.0)).sqrt();
    let y_on_curve = curve
        .y_at(x_on_curve)
        .ok_or_else(|| Failure::Numerical(format!("no curve point at x = {x_on_curve}")))?;
    debug_assert!((y_on_curve * y_on_curve / (d2 - 1.0) - 1.0).abs() < 1e-12);

    let entries: [(&'static str, f64, Criterion); 7] = [
        ("PPT", set.p_ppt, Criterion::Ppt),
        (
            "dV",
            set.p_dv,
            Criterion::Xy(CriterionParams::new(0.0, 0.0)?),
        ),
        ("CCNR", set.p_ccnr, Criterion::Named(NamedCriterion::Ccnr)),
        ("Fei", set.p_fei, Criterion::Named(NamedCriterion::Fei)),
        ("ESIC", set.p_esic, Criterion::Named(NamedCriterion::Esic)),
        ("ER", set.p_er, Criterion::EnhancedRealignment),
        (
            "min",
            set.p_min,
            Criterion::Xy(CriterionParams::new(x_on_curve, y_on_curve)?),
        ),
    ];

    let mut rows = Vec::with_capacity(entries.len());
    for (name, analytic, criterion) in entries {
        let numeric = bisect(criterion)?;
        rows.push(Row {
            name,
            analytic,
            numeric,
            abs_diff: (analytic - numeric).abs(),
        });
    }
    let max_abs_diff = rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max);

    let content = match args.format {
        TableFormat::Table => render_table(shape, &rows, max_abs_diff),
        TableFormat::Csv => render_csv(&rows),
        TableFormat::Json => to_json_pretty(&Report {
            meta: Meta {
                d1: args.d1,
                d2: args.d2,
            },
            rows,
            max_abs_diff,
        })?,
    };
    write_out(args.out.as_deref(), &content)
}

fn render_table(shape: BipartiteShape, rows: &[Row], max_abs_diff: f64) -> String {
    let mut out = format!("isotropic detection thresholds for {shape}\n\n");
    out.push_str(&format!(
        "{:<6} {:>20} {:>20} {:>12}\n",
        "name", "analytic", "numeric", "|diff|"
    ));
    for row in rows {
        out.push_str(&format!(
            "{:<6} {:>20.16} {:>20.16} {:>12.3e}\n",
            row.name, row.analytic, row.numeric, row.abs_diff
        ));
    }
    out.push_str(&format!("\nmax |analytic - numeric| = {max_abs_diff:.3e}\n"));
    out
}

fn render_csv(rows: &[Row]) -> String {
    let mut out = String::from("name,analytic,numeric,abs_diff\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.name,
            float(row.analytic),
            float(row.numeric),
            float(row.abs_diff)
        ));
    }
    out
}
