//! Run configuration: a flat JSON file whose keys are the long flag names,
//! overridden field by field by flags given on the command line.

use std::path::{Path, PathBuf};

use hypersym::identities::{Mode, NumericPoint, Orders, ParamPoint, SuiteConfig};
use hypersym::suite::{RunSettings, Scope};
use hypersym::{Error, ExactScalar};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Md,
    Both,
}

/// Every field optional so file and flags can be layered.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    /// Parameter point `a,b[,c]` with rational entries; repeatable
    #[arg(long = "point")]
    #[serde(default, rename = "point", alias = "points")]
    pub points: Vec<String>,
    /// χ-order for 1F1 identities
    #[arg(long)]
    pub n: Option<u32>,
    /// Inner order for 1F1 identities, actions and recursions
    #[arg(long)]
    pub m: Option<u32>,
    /// χ-order for Ψ2 identities
    #[arg(long)]
    pub n_psi2: Option<u32>,
    /// Inner order (x and y) for Ψ2 identities
    #[arg(long)]
    pub m_psi2: Option<u32>,
    /// Relative tolerance of numeric identity checks
    #[arg(long)]
    pub tol: Option<f64>,
    /// Absolute tolerance of flow checks
    #[arg(long)]
    pub flow_tol: Option<f64>,
    /// χ values for numeric identity checks, comma separated
    #[arg(long, value_delimiter = ',')]
    pub chi_grid: Option<Vec<f64>>,
    /// formal, numeric or both
    #[arg(long)]
    pub mode: Option<String>,
    /// x (and y) of numeric identity checks
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long)]
    pub y: Option<f64>,
    /// Flow horizon α
    #[arg(long)]
    pub alpha: Option<f64>,
    /// RK4 step
    #[arg(long)]
    pub step: Option<f64>,
    /// Include the commutator span table
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub span_check: Option<bool>,
    /// Seed for randomized property sweeps
    #[arg(long)]
    pub seed: Option<u64>,
    /// Term cap of float sums
    #[arg(long)]
    pub term_cap: Option<usize>,
    /// Output directory for report.json / report.md
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overlay(self, over: RunConfig) -> RunConfig {
        RunConfig {
            points: if over.points.is_empty() { self.points } else { over.points },
            n: over.n.or(self.n),
            m: over.m.or(self.m),
            n_psi2: over.n_psi2.or(self.n_psi2),
            m_psi2: over.m_psi2.or(self.m_psi2),
            tol: over.tol.or(self.tol),
            flow_tol: over.flow_tol.or(self.flow_tol),
            chi_grid: over.chi_grid.or(self.chi_grid),
            mode: over.mode.or(self.mode),
            x: over.x.or(self.x),
            y: over.y.or(self.y),
            alpha: over.alpha.or(self.alpha),
            step: over.step.or(self.step),
            span_check: over.span_check.or(self.span_check),
            seed: over.seed.or(self.seed),
            term_cap: over.term_cap.or(self.term_cap),
            out: over.out.or(self.out),
            format: over.format.or(self.format),
        }
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("reports"))
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Both)
    }

    /// Validated engine settings.
    pub fn settings(&self, scope: Scope) -> Result<RunSettings, Error> {
        let mut s = RunSettings {
            scope,
            ..RunSettings::default()
        };
        let id = &mut s.identities;
        if !self.points.is_empty() {
            id.points = self.points.iter().map(|p| parse_point(p)).collect::<Result<_, _>>()?;
        }
        let d11 = id.orders_f11;
        let dpsi = id.orders_psi2;
        id.orders_f11 = Orders::new(positive("n", self.n.unwrap_or(d11.n))?, positive("m", self.m.unwrap_or(d11.m))?);
        id.orders_psi2 = Orders::new(
            positive("n-psi2", self.n_psi2.unwrap_or(dpsi.n))?,
            positive("m-psi2", self.m_psi2.unwrap_or(dpsi.m))?,
        );
        s.action_order = id.orders_f11.m;
        s.recursion_order = id.orders_f11.m;
        if let Some(t) = self.tol {
            id.tol = tolerance("tol", t)?;
        }
        if let Some(t) = self.flow_tol {
            s.flow_tol = tolerance("flow-tol", t)?;
        }
        if let Some(g) = &self.chi_grid {
            id.chi_grid = g.clone();
        }
        if let Some(m) = &self.mode {
            id.mode = m.parse::<Mode>()?;
        }
        let at = NumericPoint::default();
        id.at = NumericPoint {
            x: self.x.unwrap_or(at.x),
            y: self.y.unwrap_or(at.y),
        };
        if let Some(c) = self.term_cap {
            id.term_cap = c.max(1);
        }
        if let Some(a) = self.alpha {
            s.alpha = a;
        }
        if let Some(h) = self.step {
            s.step = tolerance("step", h)?;
        }
        if let Some(b) = self.span_check {
            s.span_check = b;
        }
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        check_suite(id)?;
        Ok(s)
    }
}

fn positive(name: &str, v: u32) -> Result<u32, Error> {
    if v == 0 {
        Err(Error::Config(format!("{name} must be at least 1")))
    } else {
        Ok(v)
    }
}

fn tolerance(name: &str, v: f64) -> Result<f64, Error> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Config(format!("{name} must be positive, got {v}")))
    }
}

fn check_suite(cfg: &SuiteConfig) -> Result<(), Error> {
    if cfg.points.is_empty() {
        return Err(Error::Config("no parameter points".into()));
    }
    Ok(())
}

/// `a,b` or `a,b,c`.
pub fn parse_point(s: &str) -> Result<ParamPoint, Error> {
    let parts: Vec<ExactScalar> = s.split(',').map(|p| p.trim().parse()).collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [a, b] => Ok(ParamPoint::new(a.clone(), b.clone(), None)),
        [a, b, c] => Ok(ParamPoint::new(a.clone(), b.clone(), Some(c.clone()))),
        _ => Err(Error::Config(format!("parameter point {s:?} needs 2 or 3 entries"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: RunConfig = serde_json::from_str(r#"{"n": 3, "m": 9, "seed": 1, "chi-grid": [0.5]}"#).unwrap();
        let flags = RunConfig {
            m: Some(5),
            ..RunConfig::default()
        };
        let merged = file.overlay(flags);
        assert_eq!((merged.n, merged.m, merged.seed), (Some(3), Some(5), Some(1)));
        assert_eq!(merged.chi_grid, Some(vec![0.5]));
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"nn": 3}"#).is_err());
    }

    #[test]
    fn validation() {
        let bad = RunConfig {
            m: Some(0),
            ..RunConfig::default()
        };
        assert!(bad.settings(Scope::All).is_err());
        let bad = RunConfig {
            tol: Some(-1.0),
            ..RunConfig::default()
        };
        assert!(bad.settings(Scope::All).is_err());
        assert!(parse_point("1/2,0.5").is_err());
        let s = RunConfig::default().settings(Scope::Flows).unwrap();
        assert_eq!(s.seed, 42);
    }
}
