use std::path::PathBuf;

use clap::{Args, Subcommand};
use fluidstar_core::tov::{solve_star, EquationOfState, SolverOptions, StellarModel};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{usage, CliResult};
use crate::output::{csv_row, num, write_file, Outcome};
use crate::spec;

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct TovArgs {
    #[command(subcommand)]
    sweep: Option<TovCommand>,
    /// constant:c=…, chaplygin:c=…, polytrope:K=…,gamma=…, vacuum or table:<path>
    #[arg(long)]
    eos: Option<String>,
    /// Central pressure
    #[arg(long, allow_hyphen_values = true)]
    rho_c: Option<f64>,
    /// Profile CSV (r,m,mu,rho,exp_neg_gamma,exp_v,f)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum TovCommand {
    /// Integrate one star per central pressure, in parallel
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    eos: String,
    /// Central pressures as a:b:n
    #[arg(long, allow_hyphen_values = true)]
    rho_c: String,
    /// Summary CSV (rho_c,r_b,mass,status)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct SweepRow {
    rho_c: f64,
    r_b: Option<f64>,
    mass: Option<f64>,
    error: Option<String>,
}

pub fn run(args: &TovArgs, cfg: &RunConfig) -> CliResult<Outcome> {
    if let Some(TovCommand::Sweep(s)) = &args.sweep {
        return sweep(s, cfg);
    }
    let eos = spec::eos(args.eos.as_deref().ok_or_else(|| usage("tov needs --eos"))?)?;
    let rho_c = args.rho_c.ok_or_else(|| usage("tov needs --rho-c"))?;
    let star = solve_star(&eos, rho_c, &cfg.solver)?;
    let out = cfg.out_path("tov", &args.out);
    if let Some(path) = &out {
        write_file(path, &star.interior.to_csv_string())?;
    }
    let path = out.map(|p| p.display().to_string()).unwrap_or_default();
    let d = star.descriptor(&path);
    let mut text = format!(
        "eos {}\nrho_c {}\nr_b {}\nmass {}\ncompactness {}\nsamples {}\n",
        d.eos,
        num(d.rho_center),
        num(d.r_b),
        num(d.mass),
        num(2.0 * d.mass / d.r_b),
        star.interior.len()
    );
    if !path.is_empty() {
        text.push_str(&format!("csv {path}\n"));
    }
    Outcome::new(d, text)
}

fn one(eos: &EquationOfState, rho_c: f64, opts: &SolverOptions) -> SweepRow {
    match solve_star(eos, rho_c, opts) {
        Ok(StellarModel { r_b, total_mass, .. }) => SweepRow { rho_c, r_b: Some(r_b), mass: Some(total_mass), error: None },
        Err(e) => SweepRow { rho_c, r_b: None, mass: None, error: Some(e.to_string()) },
    }
}

fn sweep(args: &SweepArgs, cfg: &RunConfig) -> CliResult<Outcome> {
    let eos = spec::eos(&args.eos)?;
    let centers = spec::parse_range(&args.rho_c)?;
    // collect() keeps input order whatever order the runs finish in
    let rows: Vec<SweepRow> = centers.par_iter().map(|&rc| one(&eos, rc, &cfg.solver)).collect();
    let mut csv = String::from("rho_c,r_b,mass,status\n");
    for r in &rows {
        let status = if r.error.is_some() { "failed" } else { "ok" };
        csv.push_str(&format!(
            "{},{status}\n",
            csv_row(&[r.rho_c, r.r_b.unwrap_or(f64::NAN), r.mass.unwrap_or(f64::NAN)])
        ));
    }
    if let Some(path) = cfg.out_path("tov", &args.out) {
        write_file(&path, &csv)?;
    }
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    let mut text = csv;
    for r in rows.iter().filter(|r| r.error.is_some()) {
        text.push_str(&format!("# rho_c={}: {}\n", num(r.rho_c), r.error.as_deref().unwrap_or("")));
    }
    Ok(Outcome::new(rows, text)?.runs_failing(failed == 0))
}
