//! Model specifications (`id:key=val,…` or a profile CSV), ranges and EOS input.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use clap::Args;
use fluidstar_core::catalog::{self, AnalyticModel};
use fluidstar_core::numerics::grid;
use fluidstar_core::quasilocal::LevelSetSource;
use fluidstar_core::tov::{detect_surface, match_exterior, EquationOfState, RadialProfile, StellarModel, Tabulated};

use crate::error::{usage, CliError, CliResult};

/// Catalog parameters as flags; they override values given in the model spec.
#[derive(Debug, Clone, Default, Args)]
pub struct ModelParams {
    /// Mass parameter
    #[arg(long = "M", allow_hyphen_values = true)]
    pub mass: Option<f64>,
    /// Density constant
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c2: Option<f64>,
    /// Wyman radius parameter
    #[arg(long = "R", allow_hyphen_values = true)]
    pub big_r: Option<f64>,
    /// Dimension of the Witten model
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<f64>,
    #[arg(long = "A", allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long = "B", allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Cosmological constant of the Witten model
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
}

impl ModelParams {
    fn pairs(&self) -> [(&'static str, Option<f64>); 9] {
        [
            ("M", self.mass),
            ("c", self.c),
            ("c1", self.c1),
            ("c2", self.c2),
            ("R", self.big_r),
            ("n", self.n),
            ("A", self.a),
            ("B", self.b),
            ("lambda", self.lambda),
        ]
    }

    pub fn is_empty(&self) -> bool {
        self.pairs().iter().all(|(_, v)| v.is_none())
    }
}

/// `key=val,key=val`
pub fn parse_params(s: &str) -> CliResult<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| usage(format!("expected key=value, got '{item}'")))?;
        let v: f64 = v.trim().parse().map_err(|_| usage(format!("parameter {k}: '{v}' is not a number")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

/// Splits `id:key=val,…` and merges flag parameters on top.
pub fn catalog_spec(spec: &str, flags: &ModelParams) -> CliResult<(String, BTreeMap<String, f64>)> {
    let (id, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut params = parse_params(rest)?;
    for (k, v) in flags.pairs() {
        if let Some(v) = v {
            params.insert(k.to_string(), v);
        }
    }
    Ok((id.to_string(), params))
}

pub fn analytic(spec: &str, flags: &ModelParams) -> CliResult<AnalyticModel> {
    let (id, params) = catalog_spec(spec, flags)?;
    Ok(catalog::get(&id, &params)?)
}

pub fn read_profile(path: &Path) -> CliResult<RadialProfile> {
    let f = File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(RadialProfile::read_csv(BufReader::new(f))?)
}

/// Rebuilds the matched star from a profile written by `tov --out`.
pub fn star_from_csv(path: &Path) -> CliResult<StellarModel> {
    let profile = read_profile(path)?;
    let rb = detect_surface(&profile)?;
    let eos = EquationOfState::custom(&format!("file:{}", path.display()), |_| f64::NAN);
    Ok(match_exterior(&profile, rb, &eos)?)
}

/// A model given on the command line.
pub enum Source {
    Analytic(AnalyticModel),
    Star(StellarModel),
}

impl Source {
    pub fn load(arg: &str, flags: &ModelParams) -> CliResult<Self> {
        let path = Path::new(arg);
        if arg.ends_with(".csv") || path.is_file() {
            if !flags.is_empty() {
                return Err(usage("catalog parameters do not apply to a profile file"));
            }
            return Ok(Source::Star(star_from_csv(path)?));
        }
        Ok(Source::Analytic(analytic(arg, flags)?))
    }

    pub fn name(&self) -> String {
        match self {
            Source::Analytic(m) => {
                let p: Vec<String> = m.params.iter().map(|(k, v)| format!("{k}={v:?}")).collect();
                format!("{}:{}", m.id, p.join(","))
            }
            Source::Star(s) => s.eos.clone(),
        }
    }

    pub fn level_source(&self) -> &dyn LevelSetSource {
        match self {
            Source::Analytic(m) => m,
            Source::Star(s) => s,
        }
    }

    /// Physical `(μ, ρ)` at `r`.
    pub fn fluid(&self, r: f64) -> fluidstar_core::Result<(f64, f64)> {
        match self {
            Source::Analytic(m) => Ok((m.mu(r)?, m.rho(r)?)),
            Source::Star(s) => Ok((s.mu(r)?, s.rho(r)?)),
        }
    }

    pub fn lambda(&self) -> f64 {
        match self {
            Source::Analytic(m) => m.lambda,
            Source::Star(_) => 0.0,
        }
    }

    /// Sampling grid: the model's verification interval, or the star out to
    /// twice its radius.
    pub fn grid(&self, points: usize) -> Vec<f64> {
        match self {
            Source::Analytic(m) => grid::chebyshev(m.verify_interval.lo, m.verify_interval.hi, points),
            Source::Star(s) => grid::linspace(s.interior.r_start(), 2.0 * s.r_b, points),
        }
    }
}

/// `a:b:n` → `n` evenly spaced values from `a` to `b`.
pub fn parse_range(s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || usage(format!("expected a range a:b:n, got '{s}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    match n {
        0 => Err(bad()),
        1 => Ok(vec![a]),
        _ => Ok(grid::linspace(a, b, n)),
    }
}

/// `a,b,…` → reals.
pub fn parse_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|v| v.trim().parse().map_err(|_| usage(format!("'{v}' is not a number"))))
        .collect()
}

/// Two-column `rho,mu` table; a non-numeric first row is a header and
/// lines starting with `#` are comments.
pub fn read_table(path: &Path) -> CliResult<EquationOfState> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut pts = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| usage(format!("{}: {e}", path.display())))?;
        if rec.len() != 2 {
            return Err(usage(format!("{}: row {} needs two columns rho,mu", path.display(), i + 1)));
        }
        let parsed: Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) => pts.push((v[0], v[1])),
            Err(_) if i == 0 => continue,
            Err(_) => return Err(usage(format!("{}: row {} is not numeric", path.display(), i + 1))),
        }
    }
    Ok(EquationOfState::Tabulated(Tabulated::new(&pts)?))
}

/// `--eos` value: a named equation of state or `table:<path>`.
pub fn eos(spec: &str) -> CliResult<EquationOfState> {
    match spec.strip_prefix("table:") {
        Some(path) => read_table(Path::new(path)),
        None => Ok(EquationOfState::parse(spec)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs_and_flags() {
        let flags = ModelParams { mass: Some(2.0), ..Default::default() };
        let (id, p) = catalog_spec("wyman:R=12,M=1", &flags).unwrap();
        assert_eq!(id, "wyman");
        assert_eq!(p["R"], 12.0);
        assert_eq!(p["M"], 2.0);
        assert!(catalog_spec("wyman:R", &flags).is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0.1:0.9:5").unwrap().len(), 5);
        assert_eq!(parse_range("0.5:0.5:1").unwrap(), vec![0.5]);
        assert!(parse_range("0.1:0.9").is_err());
        assert!(parse_range("a:b:3").is_err());
    }
}
