//! Run configuration: defaults, then an optional INI-style file, then flags.
//!
//! ```text
//! [solver]
//! atol = 1e-10
//! rtol = 1e-8
//! r_max = 1000
//!
//! [residuals]
//! tol = 1e-7
//! points = 512
//!
//! [model]
//! lambda = 0
//! units = physical
//!
//! [tov]
//! out = star.csv
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;
use fluidstar_core::numerics::grid::DEFAULT_POINTS;
use fluidstar_core::tov::SolverOptions;
use ini::Ini;

use crate::error::{usage, CliError, CliResult};

/// Sections that may carry an `out` key.
const OUTPUT_SECTIONS: [&str; 6] = ["tov", "catalog", "mass", "audit", "build", "verify"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    /// `8πμ`, `8πρ` with the cosmological constant kept separate.
    Physical,
    /// `μ + Λ/8π`, `ρ − Λ/8π`, the combination entering the field equations.
    Geometric,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub solver: SolverOptions,
    pub residual_tol: f64,
    pub points: usize,
    pub lambda: f64,
    pub units: Units,
    pub out: BTreeMap<String, PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            solver: SolverOptions::default(),
            residual_tol: 1e-7,
            points: DEFAULT_POINTS,
            lambda: 0.0,
            units: Units::Physical,
            out: BTreeMap::new(),
        }
    }
}

/// Flags shared by every subcommand; each overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// INI-style configuration file
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Absolute ODE tolerance
    #[arg(long, global = true)]
    pub atol: Option<f64>,
    /// Relative ODE tolerance
    #[arg(long, global = true)]
    pub rtol: Option<f64>,
    /// Outer radius of TOV integrations
    #[arg(long, global = true)]
    pub r_max: Option<f64>,
    /// Relative central pressure at which the surface is declared
    #[arg(long, global = true)]
    pub surface_rel: Option<f64>,
    /// Tolerance for residual checks on integrated models
    #[arg(long, global = true)]
    pub residual_tol: Option<f64>,
    /// Number of grid points for sampling, scans and residual reports
    #[arg(long, global = true)]
    pub points: Option<usize>,
}

fn number(section: &str, key: &str, v: &str) -> CliResult<f64> {
    v.trim().parse().map_err(|_| usage(format!("config [{section}] {key}: '{v}' is not a number")))
}

impl RunConfig {
    pub fn load(ov: &Overrides) -> CliResult<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &ov.config {
            cfg.apply_file(path)?;
        }
        let s = &mut cfg.solver;
        if let Some(v) = ov.atol {
            s.atol = v;
        }
        if let Some(v) = ov.rtol {
            s.rtol = v;
        }
        if let Some(v) = ov.r_max {
            s.r_max = v;
        }
        if let Some(v) = ov.surface_rel {
            s.surface_rel = v;
        }
        if let Some(v) = ov.residual_tol {
            cfg.residual_tol = v;
        }
        if let Some(v) = ov.points {
            cfg.points = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, path: &Path) -> CliResult<()> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let ini = Ini::load_from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        for (section, props) in ini.iter() {
            let section = section.unwrap_or("");
            for (key, value) in props.iter() {
                self.set(section, key, value)?;
            }
        }
        Ok(())
    }

    fn set(&mut self, section: &str, key: &str, value: &str) -> CliResult<()> {
        let num = || number(section, key, value);
        match (section, key) {
            ("solver", "atol") => self.solver.atol = num()?,
            ("solver", "rtol") => self.solver.rtol = num()?,
            ("solver", "r_start") => self.solver.r_start = num()?,
            ("solver", "r_max") => self.solver.r_max = num()?,
            ("solver", "surface_rel") => self.solver.surface_rel = num()?,
            ("solver", "h_max") => self.solver.h_max = Some(num()?),
            ("residuals", "tol") => self.residual_tol = num()?,
            ("residuals", "points") => {
                self.points = value.trim().parse().map_err(|_| usage(format!("config [residuals] points: '{value}'")))?
            }
            ("model", "lambda") => self.lambda = num()?,
            ("model", "units") => {
                self.units = match value.trim() {
                    "physical" => Units::Physical,
                    "geometric" => Units::Geometric,
                    other => return Err(usage(format!("config [model] units: '{other}' (physical|geometric)"))),
                }
            }
            (s, "out") if OUTPUT_SECTIONS.contains(&s) => {
                self.out.insert(s.to_string(), PathBuf::from(value.trim()));
            }
            _ => return Err(usage(format!("config: unknown key '{key}' in section [{section}]"))),
        }
        Ok(())
    }

    fn validate(&self) -> CliResult<()> {
        let s = &self.solver;
        let tols = [
            ("atol", s.atol),
            ("rtol", s.rtol),
            ("surface_rel", s.surface_rel),
            ("r_start", s.r_start),
            ("residual tol", self.residual_tol),
        ];
        for (name, v) in tols {
            if !(v > 0.0) || !v.is_finite() {
                return Err(usage(format!("{name} must be positive, got {v}")));
            }
        }
        if !(s.r_max > s.r_start) {
            return Err(usage(format!("r_max={} must exceed r_start={}", s.r_max, s.r_start)));
        }
        if self.points < 8 {
            return Err(usage(format!("grid needs at least 8 points, got {}", self.points)));
        }
        Ok(())
    }

    /// Output path for `command`: the flag wins over the config file.
    pub fn out_path(&self, command: &str, flag: &Option<PathBuf>) -> Option<PathBuf> {
        flag.clone().or_else(|| self.out.get(command).cloned())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(text: &str) -> tempfile::NamedTempFile {
        use std::io::Write;
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    #[test]
    fn file_then_flags() {
        let f = write("[solver]\natol = 1e-9\nrtol = 1e-7\n[residuals]\npoints = 64\n[tov]\nout = a.csv\n");
        let ov = Overrides { config: Some(f.path().into()), rtol: Some(1e-6), ..Default::default() };
        let cfg = RunConfig::load(&ov).unwrap();
        assert_eq!(cfg.solver.atol, 1e-9);
        assert_eq!(cfg.solver.rtol, 1e-6);
        assert_eq!(cfg.points, 64);
        assert_eq!(cfg.out_path("tov", &None), Some(PathBuf::from("a.csv")));
        assert_eq!(cfg.out_path("tov", &Some("b.csv".into())), Some(PathBuf::from("b.csv")));
    }

    #[test]
    fn rejects_bad_values() {
        for text in ["[solver]\natol = -1\n", "[residuals]\npoints = 4\n", "[solver]\nspeed = 3\n", "[model]\nunits = cgs\n"] {
            let f = write(text);
            let ov = Overrides { config: Some(f.path().into()), ..Default::default() };
            assert!(matches!(RunConfig::load(&ov), Err(CliError::Usage(_))), "{text}");
        }
    }

    #[test]
    fn missing_file_is_io() {
        let ov = Overrides { config: Some("/nonexistent/fluidstar.ini".into()), ..Default::default() };
        assert!(matches!(RunConfig::load(&ov), Err(CliError::Io(_))));
    }
}
