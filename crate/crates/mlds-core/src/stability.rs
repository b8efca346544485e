//! Stability decision procedures for x_{t+1} = A x_t^{k−1}.
//!
//! For an odeco dynamic tensor the closed form makes stability exact: with
//! certificates m_r = |c_r|·|λ_r|^{1/(k−2)}, the origin is asymptotically
//! stable iff every m_r < 1, stable iff every m_r ≤ 1, and unstable iff
//! some m_r > 1. The exact region of attraction is the open box
//! |⟨x, v_r⟩| < |λ_r|^{−1/(k−2)} in modal coordinates.
//!
//! Stability therefore depends on both the spectrum and the initial
//! condition; there is no input-free verdict for k ≥ 3. Without a usable
//! decomposition, one-directional sufficient tests remain: any upper bound
//! b on the Z-spectral radius certifies asymptotic stability whenever
//! b^{1/(k−2)}·‖x_0‖ < 1 (and says nothing otherwise). The bounds on offer
//! are the unfolding spectral radius (even k), the Frobenius norm, the
//! singular-value route √(Σ_j γ_j²) — numerically equal to the Frobenius
//! norm but computed through mode-p Gram spectra — and the positive-entry
//! bound.

use alloc::vec::Vec;
#[allow(unused_imports)] // required for float math under no_std
use num_traits::Float;
use rand::Rng;
use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::linalg;
use crate::spectral::{
    self, BoundReport, EstimateSource, OdecoDecomposition, PowerOptions, SpectralError,
};
use crate::tensor::{SymTensor, TensorError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StabilityError {
    #[error("decomposition not accepted as odeco (residual {residual:e})")]
    NotOdeco { residual: f64 },
    #[error("test requires an even tensor order, got {order}")]
    OddOrder { order: usize },
    #[error("stability analysis requires order >= 3, got {order}")]
    OrderTooSmall { order: usize },
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// Trichotomy label for the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityLabel {
    /// Every certificate is below 1 − boundary_tol; trajectories reach 0.
    AsymptoticallyStable,
    /// The largest certificate sits inside the boundary band [1 −
    /// boundary_tol, 1 + boundary_tol]: the non-strict criterion holds
    /// within tolerance, but the strict one cannot be certified at this
    /// precision.
    Stable,
    Unstable,
}

impl core::fmt::Display for StabilityLabel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            StabilityLabel::AsymptoticallyStable => "Asym. Stable",
            StabilityLabel::Stable => "Stable",
            StabilityLabel::Unstable => "Unstable",
        })
    }
}

/// Outcome of the exact trichotomy, with the per-mode certificates
/// m_r = |c_r|·|λ_r|^{1/(k−2)} always attached.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityVerdict {
    pub label: StabilityLabel,
    pub certificates: Vec<f64>,
    /// Index attaining the largest certificate.
    pub decisive_mode: usize,
    pub boundary_tol: f64,
}

impl StabilityVerdict {
    pub fn max_certificate(&self) -> f64 {
        self.certificates[self.decisive_mode]
    }
}

fn certificates(dec: &OdecoDecomposition, x0: &[f64]) -> Result<Vec<f64>, StabilityError> {
    if x0.len() != dec.dim() {
        return Err(TensorError::DimensionMismatch {
            expected: dec.dim(),
            got: x0.len(),
        }
        .into());
    }
    let exponent = 1.0 / (dec.order() as f64 - 2.0);
    Ok(dec
        .eigenvalues()
        .iter()
        .zip(dec.factors())
        .map(|(l, v)| linalg::dot(x0, v).abs() * l.abs().powf(exponent))
        .collect())
}

fn classify_accepted(
    dec: &OdecoDecomposition,
    x0: &[f64],
    boundary_tol: f64,
) -> Result<StabilityVerdict, StabilityError> {
    let certs = certificates(dec, x0)?;
    let decisive_mode = certs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let m = certs[decisive_mode];
    let label = if m > 1.0 + boundary_tol {
        StabilityLabel::Unstable
    } else if m < 1.0 - boundary_tol {
        StabilityLabel::AsymptoticallyStable
    } else {
        StabilityLabel::Stable
    };
    Ok(StabilityVerdict {
        label,
        certificates: certs,
        decisive_mode,
        boundary_tol,
    })
}

/// Exact stability trichotomy for an odeco system at initial condition
/// `x0`. The decomposition must pass the default odeco acceptance gate;
/// orchestrate through [`analyze`] to use a custom gate.
pub fn classify(
    dec: &OdecoDecomposition,
    x0: &[f64],
    boundary_tol: f64,
) -> Result<StabilityVerdict, StabilityError> {
    if dec.order() < 3 {
        return Err(StabilityError::OrderTooSmall { order: dec.order() });
    }
    if !dec.is_odeco() {
        return Err(StabilityError::NotOdeco {
            residual: dec.reconstruction_residual(),
        });
    }
    classify_accepted(dec, x0, boundary_tol)
}

/// Which certified quantity a norm-ball region came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallSource {
    UnfoldingRadius,
    FrobeniusNorm,
}

/// A region of attraction: either the exact modal box or a conservative
/// origin-centered ball of radius bound^{−1/(k−2)}.
#[derive(Debug, Clone, PartialEq)]
pub enum AttractionRegion {
    Modal {
        factors: Vec<Vec<f64>>,
        /// Per-mode open bounds |λ_r|^{−1/(k−2)}; +∞ for λ_r = 0.
        radii: Vec<f64>,
    },
    Ball {
        radius: f64,
        source: BallSource,
    },
}

impl AttractionRegion {
    /// Signed distance to the boundary along the tightest constraint:
    /// positive inside, negative outside.
    pub fn margin(&self, x: &[f64]) -> f64 {
        match self {
            AttractionRegion::Modal { factors, radii } => factors
                .iter()
                .zip(radii)
                .map(|(v, r)| r - linalg::dot(x, v).abs())
                .fold(f64::INFINITY, f64::min),
            AttractionRegion::Ball { radius, .. } => radius - linalg::norm(x),
        }
    }

    /// Strict membership.
    pub fn contains(&self, x: &[f64]) -> bool {
        self.margin(x) > 0.0
    }

    pub fn radii(&self) -> Vec<f64> {
        match self {
            AttractionRegion::Modal { radii, .. } => radii.clone(),
            AttractionRegion::Ball { radius, .. } => alloc::vec![*radius],
        }
    }
}

fn exact_region_accepted(dec: &OdecoDecomposition) -> AttractionRegion {
    let exponent = -1.0 / (dec.order() as f64 - 2.0);
    let radii = dec
        .eigenvalues()
        .iter()
        .map(|l| {
            if l.abs() < f64::MIN_POSITIVE {
                f64::INFINITY
            } else {
                l.abs().powf(exponent)
            }
        })
        .collect();
    AttractionRegion::Modal {
        factors: dec.factors().to_vec(),
        radii,
    }
}

/// The exact region of attraction of an odeco system: membership iff
/// |⟨x, v_r⟩| < |λ_r|^{−1/(k−2)} for every mode.
pub fn exact_region(dec: &OdecoDecomposition) -> Result<AttractionRegion, StabilityError> {
    if dec.order() < 3 {
        return Err(StabilityError::OrderTooSmall { order: dec.order() });
    }
    if !dec.is_odeco() {
        return Err(StabilityError::NotOdeco {
            residual: dec.reconstruction_residual(),
        });
    }
    Ok(exact_region_accepted(dec))
}

/// Conservative ball region from an upper bound on the Z-spectral radius.
pub fn ball_region(bound: f64, order: usize, source: BallSource) -> AttractionRegion {
    let radius = if bound <= 0.0 {
        f64::INFINITY
    } else {
        bound.powf(-1.0 / (order as f64 - 2.0))
    };
    AttractionRegion::Ball { radius, source }
}

/// The sufficient tests, tagged by which certified quantity they consume.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SufficientTest {
    /// b^{1/(k−2)}·‖x0‖ < 1 for an upper bound / estimate b of the
    /// Z-spectral radius.
    SpectralRadius { source: RadiusSource },
    /// μ^{1/(k−2)}·‖x0‖ < 1, μ the unfolding spectral radius (even k).
    UnfoldingRadius,
    /// ‖A‖^{1/(k−2)}·‖x0‖ < 1.
    FrobeniusNorm,
    /// (Σ_j γ_j²)^{1/(2(k−2))}·‖x0‖ < 1 from the mode-p singular values
    /// γ_j. Since Σγ² = ‖A‖², this is the Frobenius criterion computed
    /// through the matricization Gram spectrum.
    SingularValues { mode: usize },
}

/// Provenance of the radius value used by a spectral-radius test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadiusSource {
    /// max{|λ_1|, |λ_n|} of an accepted decomposition (dominates every
    /// decomposition eigenvalue, hence sound for the certificate test).
    DecompositionEstimate,
    /// Largest |λ| found by the n = 2 angular scan.
    ScanEstimate,
    /// The entrywise bound for strictly positive tensors.
    PositiveEntryBound,
}

/// A sufficient test's decision value and outcome. These tests are
/// one-directional: `conclusive` means asymptotically stable, anything
/// else means no information — never instability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SufficientOutcome {
    pub test: SufficientTest,
    /// The quantity compared against 1.
    pub value: f64,
    pub conclusive: bool,
}

fn one_sided(test: SufficientTest, value: f64) -> SufficientOutcome {
    SufficientOutcome {
        test,
        value,
        conclusive: value < 1.0,
    }
}

/// Asymptotic stability from any certified Z-spectral-radius upper bound
/// (or estimate) `radius`: conclusive iff radius^{1/(k−2)}·‖x0‖ < 1.
pub fn sufficient_radius_test(
    radius: f64,
    source: RadiusSource,
    x0: &[f64],
    order: usize,
) -> SufficientOutcome {
    assert!(order >= 3, "sufficient tests require order >= 3");
    let value = radius.max(0.0).powf(1.0 / (order as f64 - 2.0)) * linalg::norm(x0);
    one_sided(SufficientTest::SpectralRadius { source }, value)
}

/// Asymptotic stability from the unfolding spectral radius μ; even orders
/// only.
pub fn sufficient_unfolding_test(
    mu: f64,
    x0: &[f64],
    order: usize,
) -> Result<SufficientOutcome, StabilityError> {
    if !order.is_multiple_of(2) {
        return Err(StabilityError::OddOrder { order });
    }
    let value = mu.max(0.0).powf(1.0 / (order as f64 - 2.0)) * linalg::norm(x0);
    Ok(one_sided(SufficientTest::UnfoldingRadius, value))
}

/// Asymptotic stability from the Frobenius norm; applies to any
/// supersymmetric tensor, odeco or not.
pub fn sufficient_frobenius_test(frobenius: f64, x0: &[f64], order: usize) -> SufficientOutcome {
    assert!(order >= 3, "sufficient tests require order >= 3");
    let value = frobenius.max(0.0).powf(1.0 / (order as f64 - 2.0)) * linalg::norm(x0);
    one_sided(SufficientTest::FrobeniusNorm, value)
}

/// Asymptotic stability from the mode-p singular values: conclusive iff
/// (Σ_j γ_j²)^{1/(2(k−2))}·‖x0‖ < 1, the Frobenius criterion expressed
/// through Σγ² = ‖A‖².
pub fn sufficient_singular_test(
    singular_values: &[f64],
    mode: usize,
    x0: &[f64],
    order: usize,
) -> SufficientOutcome {
    assert!(order >= 3, "sufficient tests require order >= 3");
    let sum: f64 = singular_values.iter().map(|g| g * g).sum();
    let value = sum.powf(0.5 / (order as f64 - 2.0)) * linalg::norm(x0);
    one_sided(SufficientTest::SingularValues { mode }, value)
}

/// Controls for [`analyze`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConfig {
    pub power: PowerOptions,
    /// Relative reconstruction-residual threshold for routing to the
    /// exact path.
    pub odeco_rel_tol: f64,
    /// Half-width of the Prop-2 boundary band. Keep the default for
    /// synthetic systems; widen to ~1e-3 for four-decimal reference data.
    pub boundary_tol: f64,
    /// Run the angular scan to estimate the radius when n = 2 and the
    /// decomposition is rejected.
    pub scan_dim2: bool,
    pub scan_grid: usize,
    pub scan_refine_tol: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            power: PowerOptions::default(),
            odeco_rel_tol: spectral::ODECO_RESIDUAL_REL_TOL,
            boundary_tol: 1e-9,
            scan_dim2: true,
            scan_grid: 1024,
            scan_refine_tol: 1e-12,
        }
    }
}

/// Exact-region evidence evaluated at the queried initial condition.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionAssessment {
    pub radii: Vec<f64>,
    pub contains_x0: bool,
    pub margin: f64,
}

/// The one headline conclusion of an analysis. Exact verdicts win over
/// sufficient ones; a conclusive sufficient test wins over inconclusive.
/// Sufficient routes never report instability.
#[derive(Debug, Clone, PartialEq)]
pub enum Headline {
    Exact(StabilityVerdict),
    Sufficient(SufficientOutcome),
    Inconclusive,
}

/// Full evidence ledger for one (tensor, initial condition) query.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub headline: Headline,
    pub exact: Option<StabilityVerdict>,
    pub region: Option<RegionAssessment>,
    pub bounds: BoundReport,
    pub sufficient: Vec<SufficientOutcome>,
    pub decomposition: OdecoDecomposition,
    pub odeco_accepted: bool,
}

impl AnalysisReport {
    /// The headline as a label, when one exists.
    pub fn headline_label(&self) -> Option<StabilityLabel> {
        match &self.headline {
            Headline::Exact(v) => Some(v.label),
            Headline::Sufficient(o) if o.conclusive => Some(StabilityLabel::AsymptoticallyStable),
            _ => None,
        }
    }
}

/// Runs the whole decision procedure: decompose, route to the exact
/// trichotomy if the residual passes the odeco gate, always evaluate every
/// applicable sufficient test and assemble the bound report, and pick the
/// strongest verdict.
pub fn analyze<R: Rng + ?Sized>(
    a: &SymTensor,
    x0: &[f64],
    config: &AnalysisConfig,
    rng: &mut R,
) -> Result<AnalysisReport, StabilityError> {
    let k = a.order();
    if k < 3 {
        return Err(StabilityError::OrderTooSmall { order: k });
    }
    if x0.len() != a.dim() {
        return Err(TensorError::DimensionMismatch {
            expected: a.dim(),
            got: x0.len(),
        }
        .into());
    }

    let dec = spectral::odeco_decompose(a, &config.power, rng)?;
    let odeco_accepted = dec.is_odeco_within(config.odeco_rel_tol);

    let mut bounds = spectral::bound_report(a, odeco_accepted.then_some(&dec));
    if bounds.zspectral_estimate.is_none() && config.scan_dim2 && a.dim() == 2 {
        if let Ok(pairs) = spectral::zscan_2d(a, config.scan_grid, config.scan_refine_tol) {
            bounds.zspectral_estimate = pairs
                .iter()
                .map(|p| p.eigenvalue.abs())
                .max_by(f64::total_cmp)
                .map(|value| spectral::SpectralEstimate {
                    value,
                    source: EstimateSource::Scan,
                });
        }
    }

    let exact = if odeco_accepted {
        Some(classify_accepted(&dec, x0, config.boundary_tol)?)
    } else {
        None
    };
    let region = odeco_accepted.then(|| {
        let region = exact_region_accepted(&dec);
        RegionAssessment {
            radii: region.radii(),
            contains_x0: region.contains(x0),
            margin: region.margin(x0),
        }
    });

    let mut sufficient = Vec::new();
    if let Some(est) = bounds.zspectral_estimate {
        let source = match est.source {
            EstimateSource::Decomposition => RadiusSource::DecompositionEstimate,
            EstimateSource::Scan => RadiusSource::ScanEstimate,
        };
        sufficient.push(sufficient_radius_test(est.value, source, x0, k));
    }
    if let Some(p) = bounds.positive {
        sufficient.push(sufficient_radius_test(
            p.bound,
            RadiusSource::PositiveEntryBound,
            x0,
            k,
        ));
    }
    if let Some(mu) = bounds.unfolding {
        sufficient.push(sufficient_unfolding_test(mu, x0, k)?);
    }
    sufficient.push(sufficient_frobenius_test(bounds.frobenius, x0, k));
    sufficient.push(sufficient_singular_test(
        &a.mode_singular_values(0)?,
        0,
        x0,
        k,
    ));

    // certified bounds outrank the scan estimate, which is as-found
    // rather than proven; within a class the strongest margin wins
    let scan_based = |o: &SufficientOutcome| {
        matches!(
            o.test,
            SufficientTest::SpectralRadius {
                source: RadiusSource::ScanEstimate
            }
        )
    };
    let headline = match &exact {
        Some(v) => Headline::Exact(v.clone()),
        None => sufficient
            .iter()
            .filter(|o| o.conclusive)
            .min_by(|a, b| {
                (scan_based(a), a.value)
                    .partial_cmp(&(scan_based(b), b.value))
                    .expect("test values are finite")
            })
            .map(|o| Headline::Sufficient(*o))
            .unwrap_or(Headline::Inconclusive),
    };

    Ok(AnalysisReport {
        headline,
        exact,
        region,
        bounds,
        sufficient,
        decomposition: dec,
        odeco_accepted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{simulate, SimulationOptions, TrajectoryStatus};
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    fn random_orthonormal(rng: &mut ChaCha12Rng, n: usize) -> Vec<Vec<f64>> {
        let mut basis = Vec::new();
        while basis.len() < n {
            let c: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
            linalg::orthonormal_append(&mut basis, &c, 1e-8);
        }
        basis
    }

    fn dec_from(order: usize, lam: &[f64], basis: &[Vec<f64>]) -> OdecoDecomposition {
        OdecoDecomposition::new(order, lam.to_vec(), basis.to_vec(), 0.0)
    }

    fn axes(n: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                e
            })
            .collect()
    }

    #[test]
    fn classify_trichotomy_on_diagonal_system() {
        // k=3 diagonal: m_r = |λ_r x_r|
        let dec = dec_from(3, &[0.5, 0.25], &axes(2));
        let v = classify(&dec, &[1.0, 1.0], 1e-9).unwrap();
        assert_eq!(v.label, StabilityLabel::AsymptoticallyStable);
        assert_eq!(v.decisive_mode, 0);
        assert!((v.max_certificate() - 0.5).abs() < 1e-15);

        let v = classify(&dec, &[3.0, 0.0], 1e-9).unwrap();
        assert_eq!(v.label, StabilityLabel::Unstable);

        let v = classify(&dec, &[2.0, 0.0], 1e-9).unwrap();
        assert_eq!(v.label, StabilityLabel::Stable); // exactly on the boundary

        let v = classify(&dec, &[0.0, 0.0], 1e-9).unwrap();
        assert_eq!(v.label, StabilityLabel::AsymptoticallyStable);
        assert!(v.certificates.iter().all(|&m| m == 0.0));
    }

    #[test]
    fn classify_uses_magnitudes_of_negative_eigenvalues() {
        let dec = dec_from(4, &[0.81, -0.81], &axes(2));
        let v = classify(&dec, &[0.9, 0.9], 1e-9).unwrap();
        // both certificates are 0.9·0.9 = 0.81 regardless of sign
        assert!((v.certificates[0] - 0.81).abs() < 1e-12);
        assert!((v.certificates[1] - 0.81).abs() < 1e-12);
        assert_eq!(v.label, StabilityLabel::AsymptoticallyStable);
    }

    #[test]
    fn classify_rejects_non_odeco() {
        let dec = OdecoDecomposition::new(3, vec![1.0, 0.5], axes(2), 0.3);
        assert!(matches!(
            classify(&dec, &[0.1, 0.1], 1e-9),
            Err(StabilityError::NotOdeco { .. })
        ));
    }

    #[test]
    fn exact_region_radii_and_membership() {
        let dec = dec_from(3, &[0.9, 0.1, 0.02], &axes(3));
        let region = exact_region(&dec).unwrap();
        let radii = region.radii();
        assert!((radii[0] - 10.0 / 9.0).abs() < 1e-12);
        assert!((radii[1] - 10.0).abs() < 1e-12);
        assert!((radii[2] - 50.0).abs() < 1e-12);
        assert!(region.contains(&[0.0, 0.0, 0.0]));
        assert!(region.contains(&[1.0, 9.0, 40.0]));
        assert!(!region.contains(&[1.2, 0.0, 0.0]));
        assert!(region.margin(&[1.2, 0.0, 0.0]) < 0.0);
    }

    #[test]
    fn zero_eigenvalue_mode_has_infinite_radius() {
        let dec = dec_from(3, &[0.5, 0.0], &axes(2));
        let region = exact_region(&dec).unwrap();
        assert_eq!(region.radii()[1], f64::INFINITY);
        // the constraint on the zero mode is vacuous
        assert!(region.contains(&[0.0, 1e9]));
    }

    #[test]
    fn region_membership_matches_classification() {
        let mut r = rng(1);
        for _ in 0..50 {
            let basis = random_orthonormal(&mut r, 3);
            let lam = [
                r.random::<f64>() * 1.5 + 0.05,
                r.random::<f64>() * 0.8 + 0.02,
                r.random::<f64>() * 0.3,
            ];
            let dec = dec_from(3, &lam, &basis);
            let region = exact_region(&dec).unwrap();
            let x0: Vec<f64> = (0..3).map(|_| r.random::<f64>() * 6.0 - 3.0).collect();
            let verdict = classify(&dec, &x0, 1e-12).unwrap();
            let inside = region.contains(&x0);
            match verdict.label {
                StabilityLabel::AsymptoticallyStable => assert!(inside),
                StabilityLabel::Unstable => assert!(!inside),
                StabilityLabel::Stable => {} // boundary band: either side
            }
        }
    }

    #[test]
    fn ball_regions_use_the_bound_exponent() {
        let region = ball_region(0.25, 4, BallSource::UnfoldingRadius);
        match region {
            AttractionRegion::Ball { radius, .. } => assert!((radius - 2.0).abs() < 1e-12),
            _ => panic!("expected ball"),
        }
        let region = ball_region(4.0, 3, BallSource::FrobeniusNorm);
        assert!((region.radii()[0] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn sufficient_tests_are_one_sided() {
        let x0 = [0.4, 0.3];
        let out = sufficient_frobenius_test(0.8, &x0, 3);
        assert!(out.conclusive && (out.value - 0.4).abs() < 1e-12);
        let out = sufficient_frobenius_test(8.0, &x0, 3);
        assert!(!out.conclusive); // never "unstable"
        let out = sufficient_radius_test(0.81, RadiusSource::DecompositionEstimate, &x0, 4);
        assert!((out.value - 0.45).abs() < 1e-12);
        assert!(out.conclusive);
        let out = sufficient_unfolding_test(0.81, &x0, 4).unwrap();
        assert!((out.value - 0.45).abs() < 1e-12);
        assert!(matches!(
            sufficient_unfolding_test(0.5, &x0, 3),
            Err(StabilityError::OddOrder { order: 3 })
        ));
        // zero initial condition is always conclusive
        assert!(sufficient_frobenius_test(100.0, &[0.0, 0.0], 5).conclusive);
    }

    #[test]
    fn singular_test_equals_frobenius_criterion() {
        let mut r = rng(2);
        for _ in 0..20 {
            let raw: Vec<f64> = (0..16).map(|_| r.random::<f64>() * 2.0 - 1.0).collect();
            let t = SymTensor::certify(4, 2, raw, f64::INFINITY).unwrap();
            let x0: Vec<f64> = (0..2).map(|_| r.random::<f64>() * 2.0).collect();
            let frob = sufficient_frobenius_test(t.frobenius_norm(), &x0, 4);
            for p in 0..4 {
                let sv = t.mode_singular_values(p).unwrap();
                let out = sufficient_singular_test(&sv, p, &x0, 4);
                assert!((out.value - frob.value).abs() <= 1e-10 * frob.value.max(1.0));
                assert_eq!(out.conclusive, frob.conclusive);
            }
        }
    }

    #[test]
    fn sufficient_implies_exact_on_random_odeco_systems() {
        // soundness: any conclusive sufficient test must be confirmed by
        // the exact trichotomy
        let mut r = rng(3);
        for trial in 0..150 {
            let n = 2 + trial % 3;
            let k = 3 + trial % 3;
            let basis = random_orthonormal(&mut r, n);
            let lam: Vec<f64> = (0..n)
                .map(|i| {
                    let mag = r.random::<f64>() * 1.2 + 0.01;
                    if k % 2 == 0 && i % 2 == 1 {
                        -mag
                    } else {
                        mag
                    }
                })
                .collect();
            let a = SymTensor::rank_one_sum(k, &lam, &basis);
            let dec = dec_from(k, &lam, &basis);
            let x0: Vec<f64> = (0..n).map(|_| r.random::<f64>() * 3.0 - 1.5).collect();
            let exact = classify(&dec, &x0, 1e-12).unwrap();

            let mut outcomes = vec![
                sufficient_radius_test(
                    lam.iter().fold(0.0_f64, |m, l| m.max(l.abs())),
                    RadiusSource::DecompositionEstimate,
                    &x0,
                    k,
                ),
                sufficient_frobenius_test(a.frobenius_norm(), &x0, k),
                sufficient_singular_test(&a.mode_singular_values(0).unwrap(), 0, &x0, k),
            ];
            if k % 2 == 0 {
                let mu = spectral::unfolding_bound(&a).unwrap();
                outcomes.push(sufficient_unfolding_test(mu, &x0, k).unwrap());
            }
            for out in outcomes {
                if out.conclusive {
                    assert_eq!(
                        exact.label,
                        StabilityLabel::AsymptoticallyStable,
                        "trial {trial}: {:?} claimed stability but exact says {:?}",
                        out.test,
                        exact.label
                    );
                }
            }
        }
    }

    #[test]
    fn radius_test_accepts_supersets_of_tighter_bounds() {
        // whenever the radius estimate is below μ or ‖A‖, everything those
        // bounds accept is accepted by the radius test too
        let mut r = rng(4);
        for _ in 0..40 {
            let basis = random_orthonormal(&mut r, 2);
            let lam = [r.random::<f64>() + 0.1, r.random::<f64>() * 0.5 + 0.05];
            let k = 4;
            let a = SymTensor::rank_one_sum(k, &lam, &basis);
            let est = lam.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
            let mu = spectral::unfolding_bound(&a).unwrap();
            let frob = a.frobenius_norm();
            let x0: Vec<f64> = (0..2).map(|_| r.random::<f64>() * 2.0 - 1.0).collect();
            let by_radius =
                sufficient_radius_test(est, RadiusSource::DecompositionEstimate, &x0, k);
            if est <= mu {
                let by_mu = sufficient_unfolding_test(mu, &x0, k).unwrap();
                assert!(!by_mu.conclusive || by_radius.conclusive);
            }
            if est <= frob {
                let by_frob = sufficient_frobenius_test(frob, &x0, k);
                assert!(!by_frob.conclusive || by_radius.conclusive);
            }
        }
    }

    #[test]
    fn verdicts_agree_with_simulation_away_from_the_boundary() {
        let mut r = rng(5);
        let mut checked = 0;
        for trial in 0..120 {
            let n = 2 + trial % 2;
            let k = 3 + trial % 2;
            let basis = random_orthonormal(&mut r, n);
            let lam: Vec<f64> = (0..n).map(|_| r.random::<f64>() * 1.2 + 0.05).collect();
            let a = SymTensor::rank_one_sum(k, &lam, &basis);
            let dec = dec_from(k, &lam, &basis);
            let x0: Vec<f64> = (0..n).map(|_| r.random::<f64>() * 4.0 - 2.0).collect();
            let verdict = classify(&dec, &x0, 1e-12).unwrap();
            let m = verdict.max_certificate();
            if (0.98..=1.02).contains(&m) {
                continue; // finite-horizon detection is unreliable near 1
            }
            checked += 1;
            let traj = simulate(&a, &x0, SimulationOptions::default()).unwrap();
            match verdict.label {
                StabilityLabel::AsymptoticallyStable => {
                    assert!(
                        matches!(traj.status, TrajectoryStatus::Converged { .. }),
                        "trial {trial}: m={m} but status {:?}",
                        traj.status
                    );
                }
                StabilityLabel::Unstable => {
                    assert!(
                        matches!(traj.status, TrajectoryStatus::Diverged { .. }),
                        "trial {trial}: m={m} but status {:?}",
                        traj.status
                    );
                }
                StabilityLabel::Stable => {}
            }
        }
        assert!(checked > 60, "corpus too thin: {checked}");
    }

    #[test]
    fn analyze_routes_odeco_systems_to_the_exact_path() {
        let mut r = rng(6);
        let basis = random_orthonormal(&mut r, 3);
        let lam = [0.9, 0.1, 0.02];
        let a = SymTensor::rank_one_sum(3, &lam, &basis);
        let x0 = [0.2, 0.1, -0.1];
        let report = analyze(&a, &x0, &AnalysisConfig::default(), &mut r).unwrap();
        assert!(report.odeco_accepted);
        assert!(matches!(report.headline, Headline::Exact(_)));
        let region = report.region.as_ref().unwrap();
        assert!(region.contains_x0);
        assert!(region.margin > 0.0);
        assert_eq!(
            report.headline_label(),
            Some(StabilityLabel::AsymptoticallyStable)
        );
        // evidence ledger carries every applicable test
        assert!(report.sufficient.len() >= 3);
        let est = report.bounds.zspectral_estimate.unwrap();
        assert_eq!(est.source, EstimateSource::Decomposition);
        assert!((est.value - 0.9).abs() < 1e-8);
    }

    #[test]
    fn analyze_falls_back_to_sufficient_tests_for_non_odeco() {
        let mut r = rng(7);
        // make a clearly non-odeco symmetric tensor, small enough that the
        // Frobenius route certifies a tiny initial condition
        let raw: Vec<f64> = (0..8).map(|_| (r.random::<f64>() - 0.5) * 0.2).collect();
        let a = SymTensor::certify(3, 2, raw, f64::INFINITY).unwrap();
        let report = analyze(&a, &[0.05, -0.05], &AnalysisConfig::default(), &mut r).unwrap();
        assert!(!report.odeco_accepted);
        assert!(report.exact.is_none());
        assert!(report.region.is_none());
        match &report.headline {
            Headline::Sufficient(o) => assert!(o.conclusive),
            other => panic!("expected sufficient headline, got {other:?}"),
        }
        // n = 2 fallback estimate comes from the scan
        let est = report.bounds.zspectral_estimate.unwrap();
        assert_eq!(est.source, EstimateSource::Scan);
    }

    #[test]
    fn analyze_zero_tensor_is_asymptotically_stable() {
        let a = SymTensor::zeros(3, 3);
        let mut r = rng(8);
        let report = analyze(&a, &[5.0, -2.0, 1.0], &AnalysisConfig::default(), &mut r).unwrap();
        assert_eq!(
            report.headline_label(),
            Some(StabilityLabel::AsymptoticallyStable)
        );
        assert_eq!(report.bounds.frobenius, 0.0);
    }

    #[test]
    fn analyze_inconclusive_far_outside_every_bound() {
        let mut r = rng(9);
        let raw: Vec<f64> = (0..8).map(|_| (r.random::<f64>() - 0.5) * 2.0).collect();
        let a = SymTensor::certify(3, 2, raw, f64::INFINITY).unwrap();
        let report = analyze(&a, &[50.0, 50.0], &AnalysisConfig::default(), &mut r).unwrap();
        if !report.odeco_accepted {
            assert!(matches!(report.headline, Headline::Inconclusive));
            assert_eq!(report.headline_label(), None);
        }
    }

    #[test]
    fn label_display_matches_reporting_convention() {
        assert_eq!(
            alloc::format!("{}", StabilityLabel::AsymptoticallyStable),
            "Asym. Stable"
        );
        assert_eq!(alloc::format!("{}", StabilityLabel::Stable), "Stable");
        assert_eq!(alloc::format!("{}", StabilityLabel::Unstable), "Unstable");
    }
}
