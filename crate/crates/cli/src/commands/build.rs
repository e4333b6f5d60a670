use std::path::PathBuf;

use clap::Args;
use fluidstar_core::conformal::{build_model, BuildSpec, PhiProfile};
use fluidstar_core::geometry::{BasicInvariant, Interval};

use crate::config::RunConfig;
use crate::error::{usage, CliResult};
use crate::output::{num, write_file, Outcome};
use crate::spec::parse_list;

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Conformal factor: sqrt1p, sphere, hyperbolic, one or const:<c>
    #[arg(long, default_value = "sqrt1p")]
    phi: String,
    /// Dimension
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Lapse and its derivative at the start of the span: f,f'
    #[arg(long, allow_hyphen_values = true, value_name = "F,DF")]
    ic: Option<String>,
    /// Quadratic coefficient of the invariant ϱ = τ|x|² + α·x + β-terms
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<f64>,
    /// Linear coefficients of the invariant, one per dimension
    #[arg(long, allow_hyphen_values = true, value_name = "LIST")]
    alpha: Option<String>,
    /// Constant coefficients of the invariant, one per dimension
    #[arg(long, allow_hyphen_values = true, value_name = "LIST")]
    beta: Option<String>,
    /// Cosmological constant (defaults to [model] lambda)
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    /// Range of the invariant: lo,hi
    #[arg(long, value_name = "LO,HI", allow_hyphen_values = true)]
    span: Option<String>,
    /// Integrate the lapse numerically even when a closed form exists
    #[arg(long, alias = "no-fast-path")]
    exact: bool,
    /// Model JSON; samples go to the same path with a .csv extension
    #[arg(long)]
    out: Option<PathBuf>,
}

fn pair(s: &str, what: &str) -> CliResult<(f64, f64)> {
    match parse_list(s)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(usage(format!("{what} needs two values a,b"))),
    }
}

fn spec_of(args: &BuildArgs, cfg: &RunConfig) -> CliResult<BuildSpec> {
    if args.n < 2 {
        return Err(usage("build needs --n >= 2"));
    }
    let mut spec = BuildSpec::new(PhiProfile::parse(&args.phi)?, args.n);
    let base = BasicInvariant::radial(args.n);
    let alpha = args.alpha.as_deref().map(parse_list).transpose()?.unwrap_or(base.alpha);
    let beta = args.beta.as_deref().map(parse_list).transpose()?.unwrap_or(base.beta);
    spec.invariant = BasicInvariant::new(args.tau.unwrap_or(base.tau), alpha, beta)?;
    spec.ic = args.ic.as_deref().map(|s| pair(s, "--ic")).transpose()?;
    spec.span = match args.span.as_deref() {
        Some(s) => {
            let (lo, hi) = pair(s, "--span")?;
            if !(lo < hi) {
                return Err(usage("--span needs lo < hi"));
            }
            Some(Interval::new(lo, hi))
        }
        None => None,
    };
    spec.lambda = args.lambda.unwrap_or(cfg.lambda);
    spec.fast_path = !args.exact;
    Ok(spec)
}

pub fn run(args: &BuildArgs, cfg: &RunConfig) -> CliResult<Outcome> {
    let spec = spec_of(args, cfg)?;
    let model = build_model(&spec)?;
    let mut d = model.descriptor(cfg.points)?;
    if let Some(path) = cfg.out_path("build", &args.out) {
        let csv_path = path.with_extension("csv");
        write_file(&csv_path, &d.samples_csv)?;
        d.samples_csv = csv_path.display().to_string();
        let json = serde_json::to_string_pretty(&d).expect("descriptor serializes");
        write_file(&path, &(json + "\n"))?;
    }
    let c = &d.checks;
    let mut text = format!(
        "phi {}\nn {}\ndomain [{}, {}]\nfast_path {}\node_residual {}\ntraceless_residual {}\nmu_vs_curvature {}\nchecks {}\n",
        d.phi,
        d.n,
        num(d.domain.0),
        num(d.domain.1),
        d.fast_path,
        num(c.ode_residual),
        num(c.traceless_residual),
        num(c.mu_vs_curvature),
        if c.pass { "pass" } else { "FAIL" },
    );
    if let Some(t) = &d.truncation {
        text.push_str(&format!("truncated at {} ({:?})\n", num(t.at), t.reason));
    }
    if args.out.is_some() || cfg.out.contains_key("build") {
        text.push_str(&format!("samples {}\n", d.samples_csv));
    }
    let pass = c.pass;
    Ok(Outcome::new(d, text)?.failing(pass))
}
