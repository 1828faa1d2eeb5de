//! TOML study configuration: symbol, perturbation, section schedule,
//! tolerances, check toggles, and output defaults.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::harness::report::ReportFormat;
use crate::harness::HarnessError;
use crate::symbol::SymbolSpec;
use crate::toeplitz::Perturbation;
use crate::Tolerances;

/// A complex entry in config files: either a plain float (real) or a
/// two-element `[re, im]` array.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum ComplexInput {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexInput {
    pub fn to_complex(self) -> Complex64 {
        match self {
            ComplexInput::Real(re) => Complex64::new(re, 0.0),
            ComplexInput::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

fn to_complex_vec(inputs: &[ComplexInput]) -> Vec<Complex64> {
    inputs.iter().map(|v| v.to_complex()).collect()
}

/// The `[symbol]` table, tagged by `kind`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolConfig {
    Laurent {
        min_index: i64,
        coefficients: Vec<ComplexInput>,
    },
    ProductOfLinearFactors {
        #[serde(default)]
        plus_roots: Vec<ComplexInput>,
        #[serde(default)]
        minus_roots: Vec<ComplexInput>,
    },
    ExpLaurent {
        min_index: i64,
        log_coefficients: Vec<ComplexInput>,
    },
}

impl SymbolConfig {
    pub fn to_spec(&self) -> Result<SymbolSpec, HarnessError> {
        let spec = match self {
            SymbolConfig::Laurent { min_index, coefficients } => {
                SymbolSpec::laurent(*min_index, to_complex_vec(coefficients))
            }
            SymbolConfig::ProductOfLinearFactors { plus_roots, minus_roots } => {
                SymbolSpec::product(to_complex_vec(plus_roots), to_complex_vec(minus_roots))
            }
            SymbolConfig::ExpLaurent { min_index, log_coefficients } => {
                SymbolSpec::exp_laurent(*min_index, to_complex_vec(log_coefficients))
            }
        };
        spec.map_err(HarnessError::Symbol)
    }
}

/// The `[perturbation]` table; omitted means the empty perturbation.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationConfig {
    #[serde(default)]
    pub p: Vec<i64>,
    #[serde(default)]
    pub q: Vec<i64>,
}

impl PerturbationConfig {
    pub fn to_perturbation(&self) -> Result<Perturbation, HarnessError> {
        Perturbation::new(self.p.clone(), self.q.clone()).map_err(HarnessError::Toeplitz)
    }
}

/// The `[study]` table.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudySection {
    /// Section sizes, strictly increasing. May be empty, which yields a
    /// header-only report.
    pub n_schedule: Vec<usize>,
    /// Coefficient truncation; derived from the symbol and schedule when
    /// omitted.
    #[serde(default)]
    pub truncation: Option<usize>,
}

fn default_true() -> bool {
    true
}

/// The `[checks]` table: which per-section diagnostics to compute.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checks {
    #[serde(default = "default_true")]
    pub schur: bool,
    #[serde(default = "default_true")]
    pub entry: bool,
    #[serde(default = "default_true")]
    pub inverse_norm: bool,
}

impl Default for Checks {
    fn default() -> Self {
        Checks {
            schur: true,
            entry: true,
            inverse_norm: true,
        }
    }
}

/// The `[output]` table; command-line flags take precedence over it.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default)]
    pub path: Option<String>,
    #[serde(default)]
    pub format: Option<ReportFormat>,
}

/// A full study description, usually parsed from a TOML file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub symbol: SymbolConfig,
    #[serde(default)]
    pub perturbation: PerturbationConfig,
    pub study: StudySection,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub checks: Checks,
    #[serde(default)]
    pub output: OutputSection,
}

impl StudyConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, HarnessError> {
        let config: StudyConfig =
            toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let schedule = &self.study.n_schedule;
        if schedule.iter().any(|&n| n == 0) {
            return Err(HarnessError::Config(
                "n_schedule entries must be at least 1".into(),
            ));
        }
        if !schedule.windows(2).all(|w| w[0] < w[1]) {
            return Err(HarnessError::Config(
                "n_schedule must be strictly increasing".into(),
            ));
        }
        if let Some(0) = self.study.truncation {
            return Err(HarnessError::Config("truncation must be at least 1".into()));
        }
        self.tolerances
            .validate()
            .map_err(HarnessError::Config)?;
        self.symbol.to_spec()?;
        self.perturbation.to_perturbation()?;
        Ok(())
    }

    /// A study over the built-in product symbol, used as a base by tests
    /// and the self-test suite.
    pub fn builtin(
        symbol: SymbolConfig,
        p: Vec<i64>,
        q: Vec<i64>,
        n_schedule: Vec<usize>,
    ) -> StudyConfig {
        StudyConfig {
            symbol,
            perturbation: PerturbationConfig { p, q },
            study: StudySection {
                n_schedule,
                truncation: None,
            },
            tolerances: Tolerances::default(),
            checks: Checks::default(),
            output: OutputSection::default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = r#"
        [symbol]
        kind = "product_of_linear_factors"
        plus_roots = [0.5]
        minus_roots = [[0.3333333333333333, 0.0]]

        [perturbation]
        p = [1, 0]
        q = [0, 1]

        [study]
        n_schedule = [8, 16, 24]
        truncation = 48

        [tolerances]
        truncation_tol = 1e-12
        residual_tol = 1e-10
        singularity_tol = 1e-13

        [checks]
        schur = true
        entry = false
        inverse_norm = true

        [output]
        path = "out.csv"
        format = "csv"
    "#;

    #[test]
    fn full_config_parses() {
        let config = StudyConfig::from_toml_str(FULL).unwrap();
        assert_eq!(config.perturbation.p, vec![1, 0]);
        assert_eq!(config.study.n_schedule, vec![8, 16, 24]);
        assert_eq!(config.study.truncation, Some(48));
        assert!(!config.checks.entry);
        assert_eq!(config.output.path.as_deref(), Some("out.csv"));
        assert!(matches!(config.output.format, Some(ReportFormat::Csv)));
        let spec = config.symbol.to_spec().unwrap();
        assert_eq!(spec.bandwidth(), 1);
    }

    #[test]
    fn minimal_config_uses_defaults() {
        let text = r#"
            [symbol]
            kind = "laurent"
            min_index = 0
            coefficients = [1.0]

            [study]
            n_schedule = [4]
        "#;
        let config = StudyConfig::from_toml_str(text).unwrap();
        assert!(config.perturbation.p.is_empty());
        assert!(config.checks.schur && config.checks.entry && config.checks.inverse_norm);
        assert_eq!(config.tolerances.truncation_tol, 1e-12);
        assert!(config.output.path.is_none());
        assert_eq!(config.perturbation.to_perturbation().unwrap().rank(), 0);
    }

    #[test]
    fn complex_entries_accept_both_forms() {
        let text = r#"
            [symbol]
            kind = "laurent"
            min_index = -1
            coefficients = [[0.0, -0.25], 1.0, 0.25]

            [study]
            n_schedule = []
        "#;
        let config = StudyConfig::from_toml_str(text).unwrap();
        let spec = config.symbol.to_spec().unwrap();
        assert_eq!(spec.bandwidth(), 1);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"
            [symbol]
            kind = "laurent"
            min_index = 0
            coefficients = [1.0]
            extra = 3

            [study]
            n_schedule = [4]
        "#;
        assert!(StudyConfig::from_toml_str(text).is_err());
    }

    #[test]
    fn unknown_kind_is_rejected() {
        let text = r#"
            [symbol]
            kind = "rational"
            coefficients = [1.0]

            [study]
            n_schedule = [4]
        "#;
        let err = StudyConfig::from_toml_str(text).unwrap_err();
        assert!(matches!(err, HarnessError::Config(_)));
    }

    #[test]
    fn decreasing_schedule_is_rejected() {
        let text = r#"
            [symbol]
            kind = "laurent"
            min_index = 0
            coefficients = [1.0]

            [study]
            n_schedule = [8, 8]
        "#;
        assert!(StudyConfig::from_toml_str(text).is_err());
    }

    #[test]
    fn zero_section_size_is_rejected() {
        let text = r#"
            [symbol]
            kind = "laurent"
            min_index = 0
            coefficients = [1.0]

            [study]
            n_schedule = [0, 4]
        "#;
        assert!(StudyConfig::from_toml_str(text).is_err());
    }

    #[test]
    fn root_on_the_circle_is_rejected() {
        let text = r#"
            [symbol]
            kind = "product_of_linear_factors"
            plus_roots = [1.0]

            [study]
            n_schedule = [4]
        "#;
        assert!(StudyConfig::from_toml_str(text).is_err());
    }

    #[test]
    fn negative_tolerance_is_rejected() {
        let text = r#"
            [symbol]
            kind = "laurent"
            min_index = 0
            coefficients = [1.0]

            [study]
            n_schedule = [4]

            [tolerances]
            residual_tol = -1.0
        "#;
        assert!(StudyConfig::from_toml_str(text).is_err());
    }

    #[test]
    fn mismatched_perturbation_lengths_are_rejected() {
        let text = r#"
            [symbol]
            kind = "laurent"
            min_index = 0
            coefficients = [1.0]

            [perturbation]
            p = [1]
            q = [0, 1]

            [study]
            n_schedule = [4]
        "#;
        assert!(StudyConfig::from_toml_str(text).is_err());
    }
}
