//! Config document: one JSON file with optional per-command sections.
//! Command-line flags override the corresponding fields. Unknown fields are
//! rejected so typos surface as usage errors.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigDoc {
    pub seed: Option<u64>,
    pub format: Option<String>,
    pub trials: Option<usize>,
    pub xor_demo: XorDemoConfig,
    pub secrecy_check: SecrecyCheckConfig,
    pub error_sweep: ErrorSweepConfig,
    pub ensemble_report: EnsembleReportConfig,
    pub pmf_table: PmfTableConfig,
    pub minvar_report: MinvarReportConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct XorDemoConfig {
    /// triangle | c2 | minvar | all
    pub family: String,
    pub truncation_radius: Option<f64>,
    pub grid_per_axis: usize,
    pub noiseless_rounds: usize,
    pub empirical_trials: usize,
}

impl Default for XorDemoConfig {
    fn default() -> Self {
        Self {
            family: "all".into(),
            truncation_radius: None,
            grid_per_axis: 129,
            noiseless_rounds: 10_000,
            empirical_trials: 100_000,
        }
    }
}

/// Which nested pair to modulate on.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PairSpec {
    /// fine = Z, coarse = n Z
    ZOverNz { n: usize },
    /// fine = Z^d, coarse = n Z^d
    Hypercubic { d: usize, n: usize },
    /// coarse from a (d, k, q) ensemble, fine via an independent (d, k1, q1)
    /// Construction-A lattice transformed by the coarse generator
    ConstructionA {
        d: usize,
        k: usize,
        q: u64,
        k1: usize,
        q1: u64,
    },
}

/// Which characteristic function family drives the modulation. The support
/// radius always adapts to the pair's packing constraint; `shrink` (in
/// (0, 1]) optionally backs the support off that maximum.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CharFnChoice {
    /// triangle | c2 | minvar | product_c2
    pub family: String,
    pub shrink: f64,
}

impl Default for CharFnChoice {
    fn default() -> Self {
        Self {
            family: "c2".into(),
            shrink: 1.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SecrecyCheckConfig {
    pub pair: PairSpec,
    pub charfn: CharFnChoice,
    /// replace the secure modulator by the insecure point-mass baseline
    pub baseline: bool,
    pub truncation_radius: Option<f64>,
    pub grid_per_axis: usize,
    pub convolution_cap: usize,
    pub empirical_trials: usize,
    pub significance: f64,
}

impl Default for SecrecyCheckConfig {
    fn default() -> Self {
        Self {
            pair: PairSpec::ZOverNz { n: 4 },
            charfn: CharFnChoice::default(),
            baseline: false,
            truncation_radius: None,
            grid_per_axis: 129,
            convolution_cap: 50_000_000,
            empirical_trials: 200_000,
            significance: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ErrorSweepConfig {
    pub pair: PairSpec,
    pub charfn: CharFnChoice,
    pub sigma_list: Vec<f64>,
    /// when nonempty, also sweep these dimensions at the first sigma
    pub dims: Vec<usize>,
    pub trials: usize,
    pub truncation_radius: Option<f64>,
}

impl Default for ErrorSweepConfig {
    fn default() -> Self {
        Self {
            pair: PairSpec::ZOverNz { n: 2 },
            charfn: CharFnChoice {
                family: "triangle".into(),
                shrink: 1.0,
            },
            sigma_list: vec![0.1, 0.2, 0.4],
            dims: vec![],
            trials: 100_000,
        truncation_radius: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnsembleReportConfig {
    pub rho: f64,
    pub dims: Vec<usize>,
    /// k = max(1, round(k_fraction * d))
    pub k_fraction: f64,
    pub k1: usize,
    pub q1: u64,
    pub covering_samples: usize,
    pub moment_samples: usize,
}

impl Default for EnsembleReportConfig {
    fn default() -> Self {
        Self {
            rho: 2.0,
            dims: vec![2, 4, 8],
            k_fraction: 0.5,
            k1: 1,
            q1: 2,
            covering_samples: 20_000,
            moment_samples: 20_000,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PmfTableConfig {
    /// triangle | c2 | minvar
    pub family: String,
    pub support_radius: Option<f64>,
    pub k_max: i64,
    /// sample count for the psi / density dumps over their natural ranges
    pub samples: usize,
}

impl Default for PmfTableConfig {
    fn default() -> Self {
        Self {
            family: "triangle".into(),
            support_radius: None,
            k_max: 32,
            samples: 257,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MinvarReportConfig {
    pub dims: Vec<usize>,
    pub rho: f64,
}

impl Default for MinvarReportConfig {
    fn default() -> Self {
        Self {
            dims: (1..=16).collect(),
            rho: std::f64::consts::PI / 2.0,
        }
    }
}
