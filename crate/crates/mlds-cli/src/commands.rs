//! Command implementations. Each wraps one library operation, reads the
//! tensor/system inputs, and writes JSON/CSV outputs into the chosen
//! directory. All randomized internals draw from one ChaCha stream seeded
//! by `--seed`, so identical invocations produce byte-identical outputs.

use std::path::{Path, PathBuf};

use mlds_core::dynamics::{self, SimulationOptions, TrajectoryStatus};
use mlds_core::reachability::{self, GrowthOptions};
use mlds_core::spectral::{self, EstimateSource, PowerOptions};
use mlds_core::stability::{
    self, AnalysisConfig, AnalysisReport, Headline, RadiusSource, StabilityLabel, SufficientTest,
};
use mlds_core::tensor::SymTensor;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::formats::{
    self, float_17, read_json, write_atomic, write_json, DecompositionFile, SystemFile, TensorFile,
};

/// Everything a command needs besides its own flags.
#[derive(Debug, Clone)]
pub struct CommonOptions {
    pub seed: u64,
    pub out_dir: PathBuf,
    pub sym_tol: Option<f64>,
    pub power: PowerOptions,
    pub odeco_tol: f64,
    pub boundary_tol: f64,
}

impl CommonOptions {
    pub fn rng(&self) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(self.seed)
    }

    fn analysis_config(&self) -> AnalysisConfig {
        AnalysisConfig {
            power: self.power,
            odeco_rel_tol: self.odeco_tol,
            boundary_tol: self.boundary_tol,
            ..AnalysisConfig::default()
        }
    }
}

pub fn load_tensor(path: &Path, opts: &CommonOptions) -> Result<SymTensor, CliError> {
    let file: TensorFile = read_json(path)?;
    file.into_tensor(opts.sym_tol)
        .map_err(|e| prefix_path(e, path))
}

fn prefix_path(e: CliError, path: &Path) -> CliError {
    match e {
        CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
        other => other,
    }
}

fn parse_ics(raw: &[String], dim: usize) -> Result<Vec<Vec<f64>>, CliError> {
    if raw.is_empty() {
        return Err(CliError::Usage(
            "at least one --ic <comma-separated reals> is required".into(),
        ));
    }
    raw.iter()
        .map(|s| {
            let ic: Result<Vec<f64>, _> = s.split(',').map(|p| p.trim().parse::<f64>()).collect();
            let ic = ic.map_err(|e| CliError::Usage(format!("bad --ic {s:?}: {e}")))?;
            if ic.len() != dim {
                return Err(CliError::Input(format!(
                    "--ic {s:?} has dimension {}, tensor needs {dim}",
                    ic.len()
                )));
            }
            if !ic.iter().all(|x| x.is_finite()) {
                return Err(CliError::Input(format!(
                    "--ic {s:?} has non-finite entries"
                )));
            }
            Ok(ic)
        })
        .collect()
}

// ---- report schema ----------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
pub struct HeadlineFile {
    pub verdict: String,
    pub method: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ExactFile {
    pub label: String,
    pub certificates: Vec<f64>,
    pub decisive_mode: usize,
    pub max_certificate: f64,
    pub boundary_tol: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RegionFile {
    pub radii: Vec<f64>,
    pub contains_x0: bool,
    pub margin: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PositiveBoundFile {
    pub bound: f64,
    pub min_entry: f64,
    pub min_slice_sum: f64,
    pub max_slice_sum: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EstimateFile {
    pub value: f64,
    pub source: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BoundsFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unfolding: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positive: Option<PositiveBoundFile>,
    pub frobenius: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zspectral_estimate: Option<EstimateFile>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SufficientFile {
    pub test: String,
    pub value: f64,
    pub conclusive: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DecompositionSummaryFile {
    pub lambda: Vec<f64>,
    pub residual: f64,
    pub odeco_accepted: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ReportFile {
    pub format: String,
    pub ic: Vec<f64>,
    pub headline: HeadlineFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionFile>,
    pub bounds: BoundsFile,
    pub sufficient: Vec<SufficientFile>,
    pub decomposition: DecompositionSummaryFile,
    pub frobenius_product: f64,
}

pub const REPORT_FORMAT: &str = "mlds-report/1";

fn label_str(l: StabilityLabel) -> String {
    l.to_string()
}

fn method_str(test: &SufficientTest) -> String {
    match test {
        SufficientTest::SpectralRadius { source } => match source {
            RadiusSource::DecompositionEstimate => "radius-estimate".into(),
            RadiusSource::ScanEstimate => "radius-scan".into(),
            RadiusSource::PositiveEntryBound => "radius-positive-bound".into(),
        },
        SufficientTest::UnfoldingRadius => "unfolding".into(),
        SufficientTest::FrobeniusNorm => "frobenius".into(),
        SufficientTest::SingularValues { mode } => format!("singular-values-mode-{mode}"),
    }
}

fn report_file(a: &SymTensor, ic: &[f64], report: &AnalysisReport) -> ReportFile {
    let (verdict, method) = match &report.headline {
        Headline::Exact(v) => (label_str(v.label), "exact".to_string()),
        Headline::Sufficient(o) => (
            label_str(StabilityLabel::AsymptoticallyStable),
            method_str(&o.test),
        ),
        Headline::Inconclusive => ("Inconclusive".to_string(), "inconclusive".to_string()),
    };
    let norm_x0 = ic.iter().map(|x| x * x).sum::<f64>().sqrt();
    ReportFile {
        format: REPORT_FORMAT.to_string(),
        ic: ic.to_vec(),
        headline: HeadlineFile { verdict, method },
        exact: report.exact.as_ref().map(|v| ExactFile {
            label: label_str(v.label),
            certificates: v.certificates.clone(),
            decisive_mode: v.decisive_mode,
            max_certificate: v.max_certificate(),
            boundary_tol: v.boundary_tol,
        }),
        region: report.region.as_ref().map(|r| RegionFile {
            radii: r.radii.clone(),
            contains_x0: r.contains_x0,
            margin: r.margin,
        }),
        bounds: BoundsFile {
            unfolding: report.bounds.unfolding,
            positive: report.bounds.positive.map(|p| PositiveBoundFile {
                bound: p.bound,
                min_entry: p.min_entry,
                min_slice_sum: p.min_slice_sum,
                max_slice_sum: p.max_slice_sum,
            }),
            frobenius: report.bounds.frobenius,
            zspectral_estimate: report.bounds.zspectral_estimate.map(|e| EstimateFile {
                value: e.value,
                source: match e.source {
                    EstimateSource::Decomposition => "decomposition".into(),
                    EstimateSource::Scan => "scan".into(),
                },
            }),
        },
        sufficient: report
            .sufficient
            .iter()
            .map(|o| SufficientFile {
                test: method_str(&o.test),
                value: o.value,
                conclusive: o.conclusive,
            })
            .collect(),
        decomposition: DecompositionSummaryFile {
            lambda: report.decomposition.eigenvalues().to_vec(),
            residual: report.decomposition.reconstruction_residual(),
            odeco_accepted: report.odeco_accepted,
        },
        frobenius_product: a.frobenius_norm() * norm_x0,
    }
}

// ---- commands ----------------------------------------------------------

/// Runs the full stability analysis per initial condition; emits one JSON
/// report each plus a combined `summary.csv` with columns
/// `ic,max_certificate,frobenius_product,verdict`.
pub fn cmd_analyze(
    tensor_path: &Path,
    ics_raw: &[String],
    opts: &CommonOptions,
) -> Result<(), CliError> {
    let a = load_tensor(tensor_path, opts)?;
    let ics = parse_ics(ics_raw, a.dim())?;
    let config = opts.analysis_config();
    let mut rng = opts.rng();

    let mut csv = String::from("ic,max_certificate,frobenius_product,verdict\n");
    println!(
        "{:<28} {:>16} {:>16}  verdict",
        "ic", "max_certificate", "frob_product"
    );
    for (i, (raw, ic)) in ics_raw.iter().zip(&ics).enumerate() {
        let report = stability::analyze(&a, ic, &config, &mut rng)?;
        let file = report_file(&a, ic, &report);
        let max_cert = file.exact.as_ref().map(|e| e.max_certificate);
        csv.push_str(&format!(
            "\"{}\",{},{},{}\n",
            raw,
            max_cert.map(float_17).unwrap_or_default(),
            float_17(file.frobenius_product),
            file.headline.verdict
        ));
        println!(
            "{:<28} {:>16} {:>16}  {}",
            raw,
            max_cert
                .map(|m| format!("{m:.6}"))
                .unwrap_or_else(|| "-".into()),
            format!("{:.6}", file.frobenius_product),
            file.headline.verdict
        );
        write_json(&opts.out_dir.join(format!("report_{i}.json")), &file)?;
    }
    write_atomic(&opts.out_dir.join("summary.csv"), csv.as_bytes())?;
    Ok(())
}

/// Simulates each initial condition and writes `trajectory_<i>.csv`.
pub fn cmd_simulate(
    tensor_path: &Path,
    ics_raw: &[String],
    sim: SimulationOptions,
    opts: &CommonOptions,
) -> Result<(), CliError> {
    let a = load_tensor(tensor_path, opts)?;
    let ics = parse_ics(ics_raw, a.dim())?;
    for (i, (raw, ic)) in ics_raw.iter().zip(&ics).enumerate() {
        let traj = dynamics::simulate(&a, ic, sim)?;
        let status = match traj.status {
            TrajectoryStatus::Converged { step } => format!("converged at t={step}"),
            TrajectoryStatus::Diverged {
                step,
                non_finite: false,
            } => {
                format!("diverged at t={step}")
            }
            TrajectoryStatus::Diverged {
                step,
                non_finite: true,
            } => {
                format!("diverged (non-finite) at t={step}")
            }
            TrajectoryStatus::HorizonReached => "horizon reached".to_string(),
        };
        println!(
            "ic {raw}: {status}; final norm {:.6e}",
            traj.norms.last().unwrap()
        );
        write_atomic(
            &opts.out_dir.join(format!("trajectory_{i}.csv")),
            formats::trajectory_csv(&traj, a.dim()).as_bytes(),
        )?;
    }
    Ok(())
}

/// Runs the power-iteration decomposition and writes `decomposition.json`.
pub fn cmd_decompose(tensor_path: &Path, opts: &CommonOptions) -> Result<(), CliError> {
    let a = load_tensor(tensor_path, opts)?;
    let mut rng = opts.rng();
    let dec = spectral::odeco_decompose(&a, &opts.power, &mut rng)?;
    let accepted = dec.is_odeco_within(opts.odeco_tol);
    println!(
        "lambda = [{}]",
        dec.eigenvalues()
            .iter()
            .map(|l| format!("{l:.10}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!(
        "reconstruction residual = {:.6e} ({})",
        dec.reconstruction_residual(),
        if accepted {
            "accepted as odeco"
        } else {
            "not odeco at this tolerance"
        }
    );
    write_json(
        &opts.out_dir.join("decomposition.json"),
        &DecompositionFile::from_decomposition(&dec),
    )?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BoundsReportFile {
    pub format: String,
    pub bounds: BoundsFile,
    pub decomposition: DecompositionSummaryFile,
    /// Conservative region radius bound^{−1/(k−2)} per available bound.
    pub ball_radii: BallRadiiFile,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BallRadiiFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unfolding: Option<f64>,
    pub frobenius: f64,
}

/// Collects every applicable Z-spectral-radius bound into `bounds.json`.
pub fn cmd_bounds(tensor_path: &Path, opts: &CommonOptions) -> Result<(), CliError> {
    let a = load_tensor(tensor_path, opts)?;
    let mut rng = opts.rng();
    let dec = spectral::odeco_decompose(&a, &opts.power, &mut rng)?;
    let accepted = dec.is_odeco_within(opts.odeco_tol);
    let bounds = spectral::bound_report(&a, accepted.then_some(&dec));
    let k = a.order() as f64;
    let ball = |b: f64| {
        if b <= 0.0 || a.order() < 3 {
            f64::INFINITY
        } else {
            b.powf(-1.0 / (k - 2.0))
        }
    };
    let file = BoundsReportFile {
        format: "mlds-bounds/1".to_string(),
        bounds: BoundsFile {
            unfolding: bounds.unfolding,
            positive: bounds.positive.map(|p| PositiveBoundFile {
                bound: p.bound,
                min_entry: p.min_entry,
                min_slice_sum: p.min_slice_sum,
                max_slice_sum: p.max_slice_sum,
            }),
            frobenius: bounds.frobenius,
            zspectral_estimate: bounds.zspectral_estimate.map(|e| EstimateFile {
                value: e.value,
                source: match e.source {
                    EstimateSource::Decomposition => "decomposition".into(),
                    EstimateSource::Scan => "scan".into(),
                },
            }),
        },
        decomposition: DecompositionSummaryFile {
            lambda: dec.eigenvalues().to_vec(),
            residual: dec.reconstruction_residual(),
            odeco_accepted: accepted,
        },
        ball_radii: BallRadiiFile {
            unfolding: bounds.unfolding.map(ball),
            frobenius: ball(bounds.frobenius),
        },
    };
    if let Some(mu) = file.bounds.unfolding {
        println!("unfolding spectral radius = {mu:.10}");
    }
    if let Some(p) = &file.bounds.positive {
        println!("positive-entry bound      = {:.10}", p.bound);
    }
    println!("frobenius norm            = {:.10}", file.bounds.frobenius);
    if let Some(e) = &file.bounds.zspectral_estimate {
        println!(
            "z-radius estimate         = {:.10} (from {})",
            e.value, e.source
        );
    }
    write_json(&opts.out_dir.join("bounds.json"), &file)?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ReachReportFile {
    pub format: String,
    pub reachable: bool,
    pub dim: usize,
    pub stages: Vec<usize>,
    pub saturated_at: usize,
    pub within_conjecture_scope: bool,
    pub budget_exceeded: bool,
    pub caveat: String,
}

/// Grows the reachability subspace of a controlled system file and writes
/// `reach.json`.
pub fn cmd_reach(
    system_path: &Path,
    growth: GrowthOptions,
    opts: &CommonOptions,
) -> Result<(), CliError> {
    let file: SystemFile = read_json(system_path)?;
    let sys = file
        .into_system(opts.sym_tol)
        .map_err(|e| prefix_path(e, system_path))?;
    let report = reachability::reachability_test(&sys, &growth);
    println!(
        "reachable = {} (dim {} of {}; stages {:?})",
        report.reachable,
        report.dim,
        sys.tensor().dim(),
        report.subspace.stage_dims()
    );
    if !report.within_conjecture_scope {
        println!("note: odd tensor order is outside the rank test's scope");
    }
    let out = ReachReportFile {
        format: "mlds-reach/1".to_string(),
        reachable: report.reachable,
        dim: report.dim,
        stages: report.subspace.stage_dims().to_vec(),
        saturated_at: report.subspace.saturated_at(),
        within_conjecture_scope: report.within_conjecture_scope,
        budget_exceeded: report.subspace.budget_exceeded(),
        caveat: report.caveat.to_string(),
    };
    write_json(&opts.out_dir.join("reach.json"), &out)?;
    Ok(())
}
