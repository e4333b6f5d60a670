use clap::Args;
use fluidstar_core::energy::{self, AuditSummary};
use fluidstar_core::units;
use serde::Serialize;

use crate::config::{RunConfig, Units};
use crate::error::CliResult;
use crate::output::{num, Outcome};
use crate::spec::{ModelParams, Source};

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Catalog spec (id:key=val,…) or a profile CSV
    #[arg(long)]
    model: String,
    #[command(flatten)]
    params: ModelParams,
}

#[derive(Serialize)]
struct AuditReport {
    model: String,
    units: Units,
    #[serde(flatten)]
    summary: AuditSummary,
    advisory: bool,
}

pub fn run(args: &AuditArgs, cfg: &RunConfig) -> CliResult<Outcome> {
    let src = Source::load(&args.model, &args.params)?;
    let lambda = src.lambda();
    let fluid = |r: f64| -> fluidstar_core::Result<(f64, f64)> {
        let (mu, rho) = src.fluid(r)?;
        Ok(match cfg.units {
            Units::Physical => (mu, rho),
            Units::Geometric => units::to_geometric(mu, rho, lambda),
        })
    };
    let mu = |r: f64| fluid(r).map(|v| v.0);
    let rho = |r: f64| fluid(r).map(|v| v.1);
    let scan = energy::scan(&mu, &rho, &src.grid(cfg.points))?;
    let rep = AuditReport { model: src.name(), units: cfg.units, summary: scan.summary(), advisory: scan.advisory() };
    let s = &rep.summary;
    let mut text = format!(
        "model {}\npoints {}\nwec {}\nnec {}\ndec {}\nchain_holds {}\n",
        rep.model,
        s.points,
        num(s.wec_fraction),
        num(s.nec_fraction),
        num(s.dec_fraction),
        s.chain_holds
    );
    match &s.first_violation {
        Some(v) => text.push_str(&format!("first_violation {:?} at r={}\n", v.condition, num(v.r))),
        None => text.push_str("first_violation none\n"),
    }
    if rep.advisory {
        text.push_str("advisory: weak energy condition fails somewhere on the grid\n");
    }
    Outcome::new(rep, text)
}
