use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Command {
    #[serde(rename = "centering verify")]
    CenteringVerify,
    #[serde(rename = "centering reversible")]
    CenteringReversible,
    #[serde(rename = "centering from-flow")]
    CenteringFromFlow,
    #[serde(rename = "group c1-search")]
    GroupC1Search,
    #[serde(rename = "group c2-check")]
    GroupC2Check,
    #[serde(rename = "group dist")]
    GroupDist,
    #[serde(rename = "walk evolve")]
    WalkEvolve,
    #[serde(rename = "walk cv-fit")]
    WalkCvFit,
    #[serde(rename = "walk escape")]
    WalkEscape,
    #[serde(rename = "walk speed")]
    WalkSpeed,
    #[serde(rename = "walk entropy")]
    WalkEntropy,
    #[serde(rename = "walk volume")]
    WalkVolume,
    #[serde(rename = "dirichlet sector")]
    DirichletSector,
    #[serde(rename = "dirichlet poincare")]
    DirichletPoincare,
    #[serde(rename = "green compare")]
    GreenCompare,
    #[serde(rename = "f2 reduce")]
    F2Reduce,
}

impl Command {
    pub fn name(self) -> String {
        serde_json::to_value(self).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
    }

    /// `(required, optional)` parameter names besides `out` and `format`.
    fn params(self) -> (&'static [&'static str], &'static [&'static str]) {
        use Command::*;
        match self {
            CenteringVerify => (&["graph", "dec"], &["tol"]),
            CenteringReversible => (&["graph"], &["tol"]),
            CenteringFromFlow => (&["graph"], &["tol", "max_len"]),
            GroupC1Search => (&["group", "gens", "n_max"], &["budget"]),
            GroupC2Check => (&["group", "gens"], &[]),
            GroupDist => (&["group", "gens", "element"], &["radius", "max_support"]),
            WalkEvolve => (&["group", "gens", "tmax"], &["prune", "max_support"]),
            WalkCvFit => (&["group", "gens", "tmax"], &["d_exp", "prune", "max_support"]),
            WalkEscape => (&["group", "gens", "tmax", "alpha"], &["max_support"]),
            WalkSpeed => (&["group", "gens", "t", "paths", "seed"], &["metric", "radius", "max_support"]),
            WalkEntropy => (&["group", "gens", "t", "paths", "seed"], &["max_support"]),
            WalkVolume => (&["group", "gens", "tmax"], &["max_support"]),
            DirichletSector => (&["trials", "seed"], &["graph", "group", "gens", "radius"]),
            DirichletPoincare => (&["k"], &[]),
            GreenCompare => (&["margin"], &["graph", "group", "gens", "radius", "m_hat", "trials", "seed"]),
            F2Reduce => (&["arrangement"], &[]),
        }
    }

    pub fn is_randomized(self) -> bool {
        matches!(self, Command::WalkSpeed | Command::WalkEntropy | Command::DirichletSector)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Distance used for speed estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    /// BFS table of the word metric of `G ∪ G⁻¹` up to `radius`.
    Table,
    /// The group's standard-generator norm (a lower bound on the lamplighter group).
    Norm,
}

/// One experiment: a command and its parameters. Unknown keys are rejected
/// and every parameter is checked before any computation starts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gens: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dec: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrangement: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tmax: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paths: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_exp: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_hat: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prune: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_support: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_len: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_BUDGET: u64 = 100_000_000;
pub const DEFAULT_MAX_SUPPORT: usize = 5_000_000;
pub const DEFAULT_RADIUS: usize = 64;

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            group: None,
            gens: None,
            graph: None,
            dec: None,
            element: None,
            arrangement: None,
            tmax: None,
            t: None,
            radius: None,
            seed: None,
            tol: None,
            alpha: None,
            n_max: None,
            budget: None,
            paths: None,
            d_exp: None,
            trials: None,
            margin: None,
            m_hat: None,
            k: None,
            prune: None,
            max_support: None,
            max_len: None,
            metric: None,
            out: None,
            format: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::config(format!("bad config: {e}")))
    }

    fn set_params(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        macro_rules! mark {
            ($($f:ident),*) => { $( if self.$f.is_some() { out.push(stringify!($f)); } )* };
        }
        mark!(
            group, gens, graph, dec, element, arrangement, tmax, t, radius, seed, tol, alpha, n_max, budget, paths,
            d_exp, trials, margin, m_hat, k, prune, max_support, max_len, metric
        );
        out
    }

    /// Structural checks: required and applicable parameters, value ranges.
    pub fn validate(&self) -> Result<(), CliError> {
        let (required, optional) = self.command.params();
        let name = self.command.name();
        let set = self.set_params();
        for p in required {
            if !set.contains(p) {
                return Err(CliError::config(format!("'{name}' needs --{}", p.replace('_', "-"))));
            }
        }
        for p in &set {
            if !required.contains(p) && !optional.contains(p) {
                return Err(CliError::config(format!("--{} does not apply to '{name}'", p.replace('_', "-"))));
            }
        }
        let positive = |v: Option<usize>, what: &str| match v {
            Some(0) => Err(CliError::config(format!("--{what} must be positive"))),
            _ => Ok(()),
        };
        positive(self.paths, "paths")?;
        positive(self.trials, "trials")?;
        positive(self.k, "k")?;
        positive(self.n_max, "n-max")?;
        positive(self.max_support, "max-support")?;
        positive(self.max_len, "max-len")?;
        if matches!(self.command, Command::WalkSpeed | Command::WalkEntropy) {
            positive(self.t, "t")?;
        }
        if let Some(tol) = self.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(CliError::config(format!("--tol must be positive, got {tol}")));
            }
        }
        if let Some(a) = self.alpha {
            if !(a > 0.0 && a <= 1.0) {
                return Err(CliError::config(format!("--alpha must lie in (0, 1], got {a}")));
            }
        }
        if let Some(d) = self.d_exp {
            if !(d >= 0.0 && d.is_finite()) {
                return Err(CliError::config(format!("--d-exp must be nonnegative, got {d}")));
            }
        }
        if let Some(p) = self.prune {
            if !(p > 0.0 && p < 1.0) {
                return Err(CliError::config(format!("--prune must lie in (0, 1), got {p}")));
            }
        }
        if let Some(m) = self.m_hat {
            if !(m >= 1.0 && m.is_finite()) {
                return Err(CliError::config(format!("--m-hat must be a finite number >= 1, got {m}")));
            }
        }
        if self.budget == Some(0) {
            return Err(CliError::config("--budget must be positive"));
        }
        let uses_window = matches!(self.command, Command::DirichletSector | Command::GreenCompare);
        if uses_window {
            match (self.graph.is_some(), self.group.is_some()) {
                (true, false) => {
                    if self.gens.is_some() || self.radius.is_some() {
                        return Err(CliError::config("--gens/--radius need --group, not --graph"));
                    }
                }
                (false, true) => {
                    if self.gens.is_none() || self.radius.is_none() {
                        return Err(CliError::config("a group window needs --gens and --radius"));
                    }
                }
                _ => return Err(CliError::config(format!("'{name}' needs exactly one of --graph or --group"))),
            }
        }
        if self.command == Command::GreenCompare && self.m_hat.is_none() && (self.trials.is_none() || self.seed.is_none()) {
            return Err(CliError::config("green compare needs --m-hat, or --trials and --seed to estimate it"));
        }
        if self.command.is_randomized() && self.seed.is_none() {
            return Err(CliError::config(format!("'{name}' is randomized and needs an explicit --seed")));
        }
        Ok(())
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }

    /// A required parameter (present after `validate`).
    pub fn req<T: Clone>(&self, v: &Option<T>, what: &str) -> Result<T, CliError> {
        v.clone().ok_or_else(|| CliError::config(format!("missing --{what}")))
    }
}
