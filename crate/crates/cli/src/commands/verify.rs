use std::collections::BTreeMap;

use clap::Args;
use fluidstar_core::catalog;
use fluidstar_core::geometry::{tolman_residuals, ResidualEntry, ResidualReport};
use fluidstar_core::numerics::grid;
use fluidstar_core::tov::StellarModel;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{num, Outcome};
use crate::spec::{ModelParams, Source};

/// Interior samples are interpolated from the profile, which caps how well
/// the Tolman relations can close there.
const INTERIOR_TOL_FLOOR: f64 = 1e-6;

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Catalog specs or profile CSVs; all catalog models when omitted
    models: Vec<String>,
    #[command(flatten)]
    params: ModelParams,
}

#[derive(Serialize)]
struct StarReport {
    r_b: f64,
    interior: ResidualReport,
    exterior: ResidualReport,
    pass: bool,
}

#[derive(Serialize)]
#[serde(untagged)]
enum Report {
    Catalog(ResidualReport),
    Star(StarReport),
}

impl Report {
    /// Whether this report should fail the run.
    fn gates_failure(&self) -> bool {
        match self {
            Report::Catalog(r) => !r.pass && !r.diagnostic_only,
            Report::Star(s) => !s.pass,
        }
    }

    /// Entries with a section label (interior/exterior for stars).
    fn entries(&self) -> Vec<(&'static str, &ResidualEntry)> {
        match self {
            Report::Catalog(r) => r.entries.iter().map(|e| ("", e)).collect(),
            Report::Star(s) => {
                let inner = s.interior.entries.iter().map(|e| ("interior ", e));
                inner.chain(s.exterior.entries.iter().map(|e| ("exterior ", e))).collect()
            }
        }
    }
}

fn star_report(star: &StellarModel, cfg: &RunConfig) -> CliResult<StarReport> {
    let [gamma, v, mu, rho] = star.radial_functions();
    let rb = star.r_b;
    let inner = grid::chebyshev(0.05 * rb, 0.95 * rb, cfg.points);
    let outer = grid::chebyshev(1.05 * rb, 10.0 * rb, cfg.points);
    let interior = tolman_residuals(&gamma, &v, &mu, &rho, &inner, cfg.residual_tol.max(INTERIOR_TOL_FLOOR))?;
    let exterior = tolman_residuals(&gamma, &v, &mu, &rho, &outer, cfg.residual_tol)?;
    let pass = interior.pass && exterior.pass;
    Ok(StarReport { r_b: rb, interior, exterior, pass })
}

pub fn run(args: &VerifyArgs, cfg: &RunConfig) -> CliResult<Outcome> {
    let models: Vec<String> = if args.models.is_empty() {
        catalog::list().into_iter().map(|m| m.id.to_string()).collect()
    } else {
        args.models.clone()
    };
    let mut reports = BTreeMap::new();
    let mut text = String::new();
    let mut failed = false;
    for arg in &models {
        let src = Source::load(arg, &args.params)?;
        let rep = match &src {
            Source::Analytic(m) => {
                let g = grid::chebyshev(m.verify_interval.lo, m.verify_interval.hi, cfg.points);
                Report::Catalog(catalog::verify(m, Some(&g))?)
            }
            Source::Star(s) => Report::Star(star_report(s, cfg)?),
        };
        let status = match &rep {
            _ if rep.gates_failure() => "FAIL",
            Report::Catalog(r) if !r.pass => "fail (diagnostic only)",
            _ => "pass",
        };
        failed |= rep.gates_failure();
        text.push_str(&format!("{arg}: {status}\n"));
        for (section, e) in rep.entries() {
            let mark = if e.passes() { "ok  " } else { "FAIL" };
            let name = format!("{section}{}", e.eq);
            text.push_str(&format!("  {mark} {name:<36} max {}\n", num(e.max)));
        }
        reports.insert(arg.clone(), rep);
    }
    Ok(Outcome::new(reports, text)?.failing(!failed))
}
