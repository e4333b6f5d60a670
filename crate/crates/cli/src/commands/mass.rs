use std::path::PathBuf;

use clap::{Args, Subcommand};
use fluidstar_core::quasilocal::{level_set_data, QuasiLocalReport};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{usage, CliResult};
use crate::output::{csv_row, num, write_file, Outcome};
use crate::spec::{self, ModelParams, Source};

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct MassArgs {
    #[command(subcommand)]
    sweep: Option<MassCommand>,
    /// Catalog spec (id:key=val,…) or a profile CSV
    #[arg(long)]
    model: Option<String>,
    /// Lapse value of the level set
    #[arg(long, allow_hyphen_values = true)]
    level: Option<f64>,
    #[command(flatten)]
    params: ModelParams,
}

#[derive(Debug, Subcommand)]
enum MassCommand {
    /// Evaluate a range of levels in parallel
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    model: String,
    /// Levels as a:b:n
    #[arg(long, allow_hyphen_values = true)]
    levels: String,
    /// Output CSV
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    params: ModelParams,
}

pub const SWEEP_HEADER: &str = "c,r,area,H,kappa,rho0,m_hawking,m_brown_york,chi_residual,ineq_slack";

#[derive(Serialize)]
struct SweepRow {
    level: f64,
    #[serde(flatten)]
    report: Option<QuasiLocalReport>,
    error: Option<String>,
}

pub fn run(args: &MassArgs, cfg: &RunConfig) -> CliResult<Outcome> {
    if let Some(MassCommand::Sweep(s)) = &args.sweep {
        return sweep(s, cfg);
    }
    let model = args.model.as_deref().ok_or_else(|| usage("mass needs --model"))?;
    let level = args.level.ok_or_else(|| usage("mass needs --level"))?;
    let src = Source::load(model, &args.params)?;
    let rep = level_set_data(src.level_source(), level)?;
    let text = format!(
        "model {}\nlevel {}\nr {}\narea {}\nH {}\nkappa {}\nrho0 {}\nm_hawking {}\nm_brown_york {}\nclassification {:?}\n",
        src.name(),
        num(rep.level),
        num(rep.r),
        num(rep.area),
        num(rep.h),
        num(rep.kappa),
        num(rep.rho0),
        num(rep.m_hawking),
        num(rep.m_brown_york),
        rep.classification,
    );
    Outcome::new(rep, text)
}

fn sweep(args: &SweepArgs, cfg: &RunConfig) -> CliResult<Outcome> {
    let src = Source::load(&args.model, &args.params)?;
    let levels = spec::parse_range(&args.levels)?;
    let rows: Vec<SweepRow> = levels
        .par_iter()
        .map(|&c| match level_set_data(src.level_source(), c) {
            Ok(rep) => SweepRow { level: c, report: Some(rep), error: None },
            Err(e) => SweepRow { level: c, report: None, error: Some(e.to_string()) },
        })
        .collect();
    let mut csv = format!("{SWEEP_HEADER}\n");
    for row in &rows {
        let vals = match &row.report {
            Some(r) => [
                r.level, r.r, r.area, r.h, r.kappa, r.rho0, r.m_hawking, r.m_brown_york, r.chi_identity_residual,
                r.inequality_slack,
            ],
            None => {
                let mut v = [f64::NAN; 10];
                v[0] = row.level;
                v
            }
        };
        csv.push_str(&csv_row(&vals));
        csv.push('\n');
    }
    if let Some(path) = cfg.out_path("mass", &args.out) {
        write_file(&path, &csv)?;
    }
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    let mut text = csv;
    for r in rows.iter().filter(|r| r.error.is_some()) {
        text.push_str(&format!("# c={}: {}\n", num(r.level), r.error.as_deref().unwrap_or("")));
    }
    Ok(Outcome::new(rows, text)?.runs_failing(failed == 0))
}
