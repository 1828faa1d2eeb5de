//! Config-driven convergence studies: build the sections over a schedule
//! of sizes, compare each determinant ratio against the limit value, and
//! collect the per-section consistency checks into a report.

pub mod config;
pub mod report;
pub mod selftest;

use num_complex::Complex64;
use thiserror::Error;

pub use config::{Checks, StudyConfig, SymbolConfig};
pub use report::{ConvergenceReport, ReportFormat, StudyRecord};

use crate::limit::{
    limit_determinant, schur_check, schur_entry_check, szego_constants, LimitError,
};
use crate::linalg::{inverse_norm_estimate, lu_logdet, LinalgError};
use crate::symbol::{
    fourier_coefficients, log_coefficients, winding_number, FourierSeries, SymbolError, SymbolSpec,
};
use crate::toeplitz::{
    build_blocks, build_perturbed, build_toeplitz, validate_perturbation, Perturbation,
    PerturbationCheck, ToeplitzError,
};
use crate::wiener_hopf::{factorize_log_split, Factorization, WienerHopfError};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Toeplitz(#[from] ToeplitzError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    WienerHopf(#[from] WienerHopfError),
    #[error(transparent)]
    Limit(#[from] LimitError),
    #[error("symbol has winding number {0}; studies require winding zero")]
    NonzeroWinding(i64),
    #[error("at section size {n}: {source}")]
    AtN {
        n: usize,
        #[source]
        source: Box<HarnessError>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Winding prechecks start from this circle grid and refine internally.
const WINDING_GRID: usize = 256;

fn describe(spec: &SymbolSpec) -> String {
    match spec {
        SymbolSpec::Laurent {
            min_index,
            coefficients,
        } => format!(
            "laurent[min_index={min_index}, {} coefficients]",
            coefficients.len()
        ),
        SymbolSpec::ProductOfLinearFactors {
            plus_roots,
            minus_roots,
        } => format!(
            "product_of_linear_factors[{} plus, {} minus]",
            plus_roots.len(),
            minus_roots.len()
        ),
        SymbolSpec::ExpLaurent {
            min_index,
            log_coefficients,
        } => format!(
            "exp_laurent[min_index={min_index}, {} log coefficients]",
            log_coefficients.len()
        ),
    }
}

/// Truncation that certainly covers every index difference the largest
/// scheduled section can ask for.
fn truncation_for(spec: &SymbolSpec, pert: &Perturbation, schedule: &[usize]) -> usize {
    let max_abs_stored = pert
        .stored_p()
        .iter()
        .chain(pert.stored_q().iter())
        .map(|v| v.unsigned_abs() as usize)
        .max()
        .unwrap_or(0);
    let max_n = schedule.last().copied().unwrap_or(0);
    let needed = (pert.rank() + max_n).saturating_sub(1) + max_abs_stored;
    spec.default_truncation().max(needed).max(1)
}

/// Everything a study (or the `limit` / `factorize` commands) derives from
/// a config before any section is built.
pub struct StudyInputs {
    pub spec: SymbolSpec,
    pub pert: Perturbation,
    pub truncation: usize,
    pub series: FourierSeries,
    pub logs: FourierSeries,
    pub fact: Factorization,
    pub duplicates: PerturbationCheck,
}

/// Validate the config, check the winding number, pick a truncation, and
/// compute coefficients and factors.
pub fn prepare_inputs(config: &StudyConfig) -> Result<StudyInputs, HarnessError> {
    config.validate()?;
    let tol = config.tolerances;
    let spec = config.symbol.to_spec()?;
    let pert = config.perturbation.to_perturbation()?;

    let winding = winding_number(&spec, WINDING_GRID)?;
    if winding != 0 {
        return Err(HarnessError::NonzeroWinding(winding));
    }

    let truncation = config
        .study
        .truncation
        .unwrap_or_else(|| truncation_for(&spec, &pert, &config.study.n_schedule));
    let series = fourier_coefficients(&spec, truncation, tol.truncation_tol)?;
    let logs = log_coefficients(&spec, truncation, tol.truncation_tol)?;
    let fact = factorize_log_split(&logs, &series, tol.residual_tol)?;
    let duplicates = validate_perturbation(&pert, truncation)?;
    Ok(StudyInputs {
        spec,
        pert,
        truncation,
        series,
        logs,
        fact,
        duplicates,
    })
}

/// Run a full study: factorize the symbol, form the limit determinant,
/// then walk the schedule recording ratios and checks at each size.
pub fn run_study(config: &StudyConfig) -> Result<ConvergenceReport, HarnessError> {
    let tol = config.tolerances;
    let inputs = prepare_inputs(config)?;
    let limit = limit_determinant(&inputs.fact, &inputs.pert, tol.singularity_tol)?;
    let limit_value = limit.value();
    let szego = szego_constants(&inputs.logs);

    let mut records = Vec::with_capacity(config.study.n_schedule.len());
    for &n in &config.study.n_schedule {
        let record = study_section(&inputs, &config.checks, n, limit_value, tol)
            .map_err(|source| HarnessError::AtN {
                n,
                source: Box::new(source),
            })?;
        records.push(record);
    }

    Ok(ConvergenceReport {
        symbol: describe(&inputs.spec),
        p: inputs.pert.stored_p().to_vec(),
        q: inputs.pert.stored_q().to_vec(),
        truncation: inputs.truncation,
        limit_re: limit_value.re,
        limit_im: limit_value.im,
        limit_is_zero: limit.logdet.is_singular,
        factor_residual: inputs.fact.reconstruction_residual(),
        szego_g_re: szego.g.re,
        szego_g_im: szego.g.im,
        szego_e_re: szego.e.re,
        szego_e_im: szego.e.im,
        szego_tail: szego.series_tail,
        duplicate_rows: inputs.duplicates.duplicate_rows.clone(),
        duplicate_cols: inputs.duplicates.duplicate_cols.clone(),
        records,
    })
}

fn study_section(
    inputs: &StudyInputs,
    checks: &Checks,
    n: usize,
    limit_value: Complex64,
    tol: crate::Tolerances,
) -> Result<StudyRecord, HarnessError> {
    let t = build_toeplitz(&inputs.series, n)?;
    let m_mat = build_perturbed(&inputs.series, &inputs.pert, n)?;
    let ld_t = lu_logdet(&t, tol.singularity_tol)?;
    if ld_t.is_singular {
        // The ratio is undefined; a symbol fit for study never gets here.
        return Err(HarnessError::Linalg(LinalgError::SingularSection));
    }
    let ld_m = lu_logdet(&m_mat, tol.singularity_tol)?;
    let ratio = ld_m.ratio_to(&ld_t);
    let abs_error = (ratio - limit_value).norm();

    let blocks = if checks.schur || checks.entry {
        Some(build_blocks(&inputs.series, &inputs.pert, n)?)
    } else {
        None
    };
    let schur_residual = match (&blocks, checks.schur) {
        (Some(blocks), true) => Some(schur_check(blocks, tol.singularity_tol)?),
        _ => None,
    };
    let entry_residual = match (&blocks, checks.entry) {
        (Some(blocks), true) => Some(schur_entry_check(
            blocks,
            &inputs.fact,
            &inputs.pert,
            tol.singularity_tol,
        )?),
        _ => None,
    };
    let inverse_norm = if checks.inverse_norm {
        Some(inverse_norm_estimate(&t, tol.singularity_tol)?.value)
    } else {
        None
    };

    Ok(StudyRecord {
        n,
        logdet_t_mag: ld_t.log_magnitude,
        logdet_t_phase: ld_t.phase,
        logdet_m_mag: ld_m.log_magnitude,
        logdet_m_phase: ld_m.phase,
        ratio_re: ratio.re,
        ratio_im: ratio.im,
        abs_error,
        schur_residual,
        entry_residual,
        inverse_norm,
    })
}
