use serde::{Deserialize, Serialize};

/// Max/rms residual of one equation over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualEntry {
    pub eq: String,
    pub max: f64,
    pub rms: f64,
    pub worst_r: f64,
    #[serde(skip, default)]
    pub tol: f64,
    /// Diagnostic entries are reported but never decide `pass`.
    #[serde(skip, default)]
    pub diagnostic: bool,
}

impl ResidualEntry {
    pub fn passes(&self) -> bool {
        self.max <= self.tol
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub entries: Vec<ResidualEntry>,
    #[serde(skip, default)]
    pub grid: Vec<f64>,
    pub pass: bool,
    /// Set when the whole report is informational (pass/fail is recorded
    /// but should not be treated as a verification failure).
    #[serde(skip, default)]
    pub diagnostic_only: bool,
}

impl ResidualReport {
    pub fn new(grid: Vec<f64>) -> Self {
        Self { entries: Vec::new(), grid, pass: true, diagnostic_only: false }
    }

    /// Adds an entry from pointwise residuals `(r, value)`. Non-finite
    /// values count as infinite.
    pub fn push(&mut self, eq: &str, tol: f64, values: &[(f64, f64)]) {
        self.push_entry(summarize(eq, tol, values, false));
    }

    pub fn push_diagnostic(&mut self, eq: &str, tol: f64, values: &[(f64, f64)]) {
        self.push_entry(summarize(eq, tol, values, true));
    }

    pub fn push_entry(&mut self, e: ResidualEntry) {
        self.entries.push(e);
        self.recompute();
    }

    pub fn extend(&mut self, other: ResidualReport) {
        self.entries.extend(other.entries);
        self.recompute();
    }

    fn recompute(&mut self) {
        self.pass = self.entries.iter().filter(|e| !e.diagnostic).all(ResidualEntry::passes);
    }

    pub fn entry(&self, eq: &str) -> Option<&ResidualEntry> {
        self.entries.iter().find(|e| e.eq == eq)
    }

    pub fn max_residual(&self) -> f64 {
        self.entries.iter().filter(|e| !e.diagnostic).map(|e| e.max).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn summarize(eq: &str, tol: f64, values: &[(f64, f64)], diagnostic: bool) -> ResidualEntry {
    let mut max = 0.0;
    let mut worst_r = values.first().map_or(f64::NAN, |v| v.0);
    let mut sq = 0.0;
    for &(r, v) in values {
        let a = if v.is_finite() { v.abs() } else { f64::INFINITY };
        if a > max || (a.is_infinite() && max < a) {
            max = a;
            worst_r = r;
        }
        sq += a * a;
    }
    let rms = if values.is_empty() { 0.0 } else { (sq / values.len() as f64).sqrt() };
    ResidualEntry { eq: eq.to_string(), max, rms: rms.min(max), worst_r, tol, diagnostic }
}
