//! `sweep` subcommand: for every dimension pair in range, the gap between
//! each named threshold and the family minimum.

use crate::emit::{float, to_json_pretty, FileFormat};
use crate::Failure;
use clap::Args;
use corrsep::analytic::named_thresholds;
use corrsep::BipartiteShape;
use serde::Serialize;
use std::path::PathBuf;

#[derive(Args)]
pub struct SweepArgs {
    /// Largest first dimension to include
    #[arg(long)]
    d1_max: usize,
    /// Largest second dimension to include (at least d1-max)
    #[arg(long)]
    d2_max: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = FileFormat::Csv)]
    format: FileFormat,
}

#[derive(Serialize)]
struct SweepRow {
    d1: usize,
    d2: usize,
    dv_minus_er: f64,
    esic_minus_er: f64,
    fei_minus_er: f64,
    ccnr_minus_er: f64,
}

#[derive(Serialize)]
struct Meta {
    d1_max: usize,
    d2_max: usize,
}

#[derive(Serialize)]
struct Report {
    meta: Meta,
    rows: Vec<SweepRow>,
}

pub fn run(args: SweepArgs) -> Result<(), Failure> {
    if args.d1_max < 2 || args.d2_max < args.d1_max {
        return Err(Failure::Usage(format!(
            "need 2 <= d1-max <= d2-max, got {} and {}",
            args.d1_max, args.d2_max
        )));
    }

    let mut rows = Vec::new();
    for d1 in 2..=args.d1_max {
        for d2 in d1..=args.d2_max {
            let t = named_thresholds(BipartiteShape::new(d1, d2)?)?;
            rows.push(SweepRow {
                d1,
                d2,
                dv_minus_er: t.p_dv - t.p_er,
                esic_minus_er: t.p_esic - t.p_er,
                fei_minus_er: t.p_fei - t.p_er,
                ccnr_minus_er: t.p_ccnr - t.p_er,
            });
        }
    }

    let content = match args.format {
        FileFormat::Csv => render_csv(&rows),
        FileFormat::Json => to_json_pretty(&Report {
            meta: Meta {
                d1_max: args.d1_max,
                d2_max: args.d2_max,
            },
            rows,
        })?,
    };
    std::fs::write(&args.out, content)
        .map_err(|err| Failure::Io(format!("cannot write {}: {err}", args.out.display())))
}

fn render_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("d1,d2,dv_minus_er,esic_minus_er,fei_minus_er,ccnr_minus_er\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.d1,
            row.d2,
            float(row.dv_minus_er),
            float(row.esic_minus_er),
            float(row.fei_minus_er),
            float(row.ccnr_minus_er)
        ));
    }
    out
}
