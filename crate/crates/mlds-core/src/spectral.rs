//! Orthogonal (odeco) decomposition, Z-eigenpair certification, and
//! Z-spectral-radius upper bounds.
//!
//! A supersymmetric tensor is odeco when it can be written as
//! T = Σ_r λ_r v_r∘⋯∘v_r with orthonormal v_r; the λ_r are then
//! Z-eigenvalues of T with Z-eigenvectors v_r (they do not exhaust the
//! Z-spectrum). General Z-eigenvalue computation is NP-hard, so this
//! module provides:
//!
//! - [`odeco_decompose`]: repeated power iteration v ← T v^{k−1}/‖T v^{k−1}‖
//!   with deflation T ← T − λ v∘⋯∘v, reporting a reconstruction residual so
//!   callers can decide whether the input was actually odeco;
//! - [`certify_zeigenpair`]: residual check of T v^{k−1} = λ v;
//! - [`zscan_2d`]: an exhaustive angular scan over unit vectors, usable as
//!   an independent oracle when n = 2;
//! - upper bounds on the Z-spectral radius: the spectral radius of the
//!   square unfolding (even order), an entrywise bound for strictly
//!   positive tensors, and the Frobenius norm.

use alloc::vec::Vec;
#[allow(unused_imports)] // required for float math under no_std
use num_traits::Float;
use rand::Rng;
use thiserror::Error;

use crate::linalg;
use crate::tensor::{SymTensor, TensorError};

/// Relative reconstruction-residual threshold below which a decomposition
/// is accepted as odeco.
pub const ODECO_RESIDUAL_REL_TOL: f64 = 1e-6;

/// Factors with |λ| below this fraction of the input scale are stored as
/// exact zeros and their directions chosen by basis completion.
const ZERO_EIGENVALUE_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("power iteration failed to converge within {max_iter} iterations across {restarts} restarts; {recovered} factors recovered")]
    NoConvergence {
        max_iter: usize,
        restarts: usize,
        recovered: usize,
        partial_eigenvalues: Vec<f64>,
        partial_factors: Vec<Vec<f64>>,
    },
    #[error("vector norm {norm} is not within 1e-6 of 1")]
    NotUnitVector { norm: f64 },
    #[error("eigenpair residual {residual:e} exceeds tolerance {tol:e}")]
    ResidualTooLarge { residual: f64, tol: f64 },
    #[error("angular scan requires dimension 2, got {dim}")]
    RequiresDimTwo { dim: usize },
    #[error("bound requires strictly positive entries; min entry is {min_entry}")]
    NotPositive { min_entry: f64 },
    #[error(
        "decomposition residual {residual:e} exceeds the odeco acceptance threshold {threshold:e}"
    )]
    NotOdeco { residual: f64, threshold: f64 },
    #[error("order must be at least 3, got {order}")]
    OrderTooSmall { order: usize },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Controls for the power-iteration decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    /// Random restarts per deflation stage; defaults to 5·n when `None`.
    pub restarts: Option<usize>,
    /// Direction convergence tolerance: stop when ‖v_{t+1} − v_t‖ or
    /// ‖v_{t+1} + v_t‖ (sign-flipping maps) drops below it.
    pub tol: f64,
    /// Iteration cap per restart.
    pub max_iter: usize,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self {
            restarts: None,
            tol: 1e-12,
            max_iter: 1000,
        }
    }
}

/// Result of the power-iteration decomposition: n eigenvalue/factor pairs
/// sorted by descending eigenvalue, with orthonormal factors and the
/// Frobenius residual of Σ_r λ_r v_r∘⋯∘v_r against the input.
///
/// The residual decides odeco membership; it is *not* assumed small.
#[derive(Debug, Clone, PartialEq)]
pub struct OdecoDecomposition {
    order: usize,
    eigenvalues: Vec<f64>,
    factors: Vec<Vec<f64>>,
    reconstruction_residual: f64,
}

impl OdecoDecomposition {
    /// Assembles a decomposition from parts, re-sorting by descending
    /// eigenvalue. The factor family must be a complete orthonormal basis
    /// (unit norms to 1e−10, mutual orthogonality to 1e−8); this is a
    /// programmer contract and violations panic. Parse untrusted input
    /// through a defect check first (see [`crate::linalg::orthonormality_defect`]).
    pub fn new(
        order: usize,
        eigenvalues: Vec<f64>,
        factors: Vec<Vec<f64>>,
        reconstruction_residual: f64,
    ) -> Self {
        assert_eq!(
            eigenvalues.len(),
            factors.len(),
            "eigenvalue/factor count mismatch"
        );
        let dim = factors.len();
        assert!(
            factors.iter().all(|f| f.len() == dim),
            "factors must have length n"
        );
        for v in &factors {
            assert!(
                (linalg::norm(v) - 1.0).abs() <= 1e-10,
                "factor is not a unit vector"
            );
        }
        assert!(
            linalg::orthonormality_defect(&factors) <= 1e-8,
            "factor family is not orthonormal"
        );
        let mut pairs: Vec<(f64, Vec<f64>)> = eigenvalues.into_iter().zip(factors).collect();
        pairs.sort_unstable_by(|a, b| b.0.total_cmp(&a.0));
        let (eigenvalues, factors) = pairs.into_iter().unzip();
        Self {
            order,
            eigenvalues,
            factors,
            reconstruction_residual,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Orthonormal factors, aligned with [`Self::eigenvalues`].
    pub fn factors(&self) -> &[Vec<f64>] {
        &self.factors
    }

    pub fn reconstruction_residual(&self) -> f64 {
        self.reconstruction_residual
    }

    /// Scale against which the residual is judged: ‖Σ λ_r v_r∘⋯∘v_r‖ =
    /// √(Σλ²) for an orthonormal family, plus the residual itself.
    pub fn scale(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l * l).sum::<f64>().sqrt() + self.reconstruction_residual
    }

    /// Whether the residual is below `rel_tol` relative to the input scale.
    pub fn is_odeco_within(&self, rel_tol: f64) -> bool {
        self.reconstruction_residual <= rel_tol * self.scale()
    }

    /// Default-threshold odeco acceptance ([`ODECO_RESIDUAL_REL_TOL`]).
    pub fn is_odeco(&self) -> bool {
        self.is_odeco_within(ODECO_RESIDUAL_REL_TOL)
    }

    /// Rebuilds Σ_r λ_r v_r∘⋯∘v_r as a dense tensor.
    pub fn reconstruct(&self) -> SymTensor {
        SymTensor::rank_one_sum(self.order, &self.eigenvalues, &self.factors)
    }
}

/// A certified Z-eigenpair: ‖v‖ = 1 and ‖T v^{k−1} − λ v‖ = residual.
#[derive(Debug, Clone, PartialEq)]
pub struct ZEigenpair {
    pub eigenvalue: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

/// Where a Z-spectral-radius estimate came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateSource {
    /// max{|λ_1|, |λ_n|} of an accepted odeco decomposition. Empirically
    /// this equals the Z-spectral radius, but that is conjectural; treat
    /// it as an estimate, never as a certified radius.
    Decomposition,
    /// Largest |λ| over eigenpairs found by the n = 2 angular scan.
    Scan,
}

/// Estimate of the Z-spectral radius together with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEstimate {
    pub value: f64,
    pub source: EstimateSource,
}

/// Internals of the positive-tensor bound R − l(1 − (r/R)^{1/k}): l is the
/// minimum entry, r and R the extreme leading-index slice sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositiveBound {
    pub bound: f64,
    pub min_entry: f64,
    pub min_slice_sum: f64,
    pub max_slice_sum: f64,
}

/// Collection of Z-spectral-radius upper bounds with applicability flags.
/// Each present bound dominates every certified Z-eigenvalue; the estimate
/// may not be certified (see [`EstimateSource`]).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// Spectral radius of the square unfolding; even order only.
    pub unfolding: Option<f64>,
    /// Entrywise bound; strictly positive tensors only.
    pub positive: Option<PositiveBound>,
    /// Frobenius norm; always applicable.
    pub frobenius: f64,
    pub zspectral_estimate: Option<SpectralEstimate>,
}

/// Decomposes by power iteration with deflation. Each stage runs
/// `restarts` random unit starts on the working tensor, keeps the
/// converged direction with the largest |λ| (λ read off as ⟨v, T v^{k−1}⟩
/// after convergence of the direction, so negative eigenvalues are
/// recovered for even orders), re-orthogonalizes it against found
/// factors, and deflates. Sign-flipping iterations — the signature of a
/// negative eigenvalue under an even-power map — are treated as
/// converged.
///
/// Sign gauge: for odd orders λ v∘⋯∘v = (−λ)(−v)∘⋯∘(−v), so factors are
/// oriented to make every λ ≥ 0; for even orders λ is sign-intrinsic and
/// factors get a canonical orientation (largest component positive)
/// purely for reproducibility.
///
/// Near-zero working tensors short-circuit to λ = 0 factors obtained by
/// completing the orthonormal family.
pub fn odeco_decompose<R: Rng + ?Sized>(
    a: &SymTensor,
    opts: &PowerOptions,
    rng: &mut R,
) -> Result<OdecoDecomposition, SpectralError> {
    let k = a.order();
    if k < 3 {
        return Err(SpectralError::OrderTooSmall { order: k });
    }
    let n = a.dim();
    let restarts = opts.restarts.unwrap_or(5 * n).max(1);
    let input_norm = a.frobenius_norm();

    let mut work = a.clone();
    let mut eigenvalues: Vec<f64> = Vec::with_capacity(n);
    let mut factors: Vec<Vec<f64>> = Vec::with_capacity(n);

    for _stage in 0..n {
        if work.frobenius_norm() <= ZERO_EIGENVALUE_REL_TOL * input_norm.max(f64::MIN_POSITIVE) {
            break;
        }
        let mut best: Option<(f64, Vec<f64>)> = None;
        let mut converged_any = false;
        for _ in 0..restarts {
            if let Some(v) = power_iterate(&work, opts, rng) {
                converged_any = true;
                let lambda = rayleigh(&work, &v);
                if best.as_ref().is_none_or(|(l, _)| lambda.abs() > l.abs()) {
                    best = Some((lambda, v));
                }
            }
        }
        let Some((_, mut v)) = best else {
            debug_assert!(!converged_any);
            return Err(SpectralError::NoConvergence {
                max_iter: opts.max_iter,
                restarts,
                recovered: factors.len(),
                partial_eigenvalues: eigenvalues,
                partial_factors: factors,
            });
        };
        // keep the factor family orthonormal even when the input is not
        // odeco; the residual then reports the mismatch
        linalg::project_out(&mut v, &factors);
        if linalg::normalize(&mut v) <= 1e-8 {
            break;
        }
        let mut lambda = rayleigh(&work, &v);
        if k % 2 == 1 {
            // odd orders have a sign gauge: λ v∘⋯∘v = (−λ)(−v)∘⋯∘(−v).
            // Fix it by making λ nonnegative, which also pins the factor
            // sign independently of the random start.
            if lambda < 0.0 {
                for x in v.iter_mut() {
                    *x = -*x;
                }
                lambda = -lambda;
            }
        } else {
            // even orders leave λ invariant under v ↦ −v; orient the
            // factor deterministically instead
            canonical_sign(&mut v);
        }
        work.add_scaled(&SymTensor::rank_one(k, &v), -lambda)
            .expect("shapes agree");
        eigenvalues.push(lambda);
        factors.push(v);
    }

    // remaining directions carry eigenvalue 0
    linalg::complete_basis(&mut factors, n);
    eigenvalues.resize(n, 0.0);

    let mut residual_tensor = a.clone();
    for (l, v) in eigenvalues.iter().zip(&factors) {
        residual_tensor
            .add_scaled(&SymTensor::rank_one(k, v), -l)
            .expect("shapes agree");
    }
    Ok(OdecoDecomposition::new(
        k,
        eigenvalues,
        factors,
        residual_tensor.frobenius_norm(),
    ))
}

fn rayleigh(t: &SymTensor, v: &[f64]) -> f64 {
    linalg::dot(&t.apply_system(v).expect("dimension checked"), v)
}

/// Deterministic orientation for a factor line: the largest-magnitude
/// component is made positive. Keeps decompositions reproducible and makes
/// recovered eigenvalues covariant under tensor scaling (for odd orders,
/// flipping v flips λ).
fn canonical_sign(v: &mut [f64]) {
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// One power-iteration run from a random unit start; returns the converged
/// direction or `None`. Plain iteration can cycle without converging on
/// tensors that are far from odeco, so a failed run is retried with a
/// spectral shift v ← (T v^{k−1} + α v)/‖·‖, which has the same fixed
/// directions but monotone dynamics (slower, hence the larger budget).
fn power_iterate<R: Rng + ?Sized>(
    t: &SymTensor,
    opts: &PowerOptions,
    rng: &mut R,
) -> Option<Vec<f64>> {
    let v0 = random_unit_vector(t.dim(), rng);
    iterate_from(t, v0.clone(), 0.0, opts.max_iter, opts.tol).or_else(|| {
        let alpha = t.frobenius_norm().max(f64::MIN_POSITIVE);
        iterate_from(t, v0, alpha, opts.max_iter.saturating_mul(8), opts.tol)
    })
}

fn iterate_from(
    t: &SymTensor,
    mut v: Vec<f64>,
    shift: f64,
    max_iter: usize,
    tol: f64,
) -> Option<Vec<f64>> {
    for _ in 0..max_iter {
        let mut w = t.apply_system(&v).expect("dimension checked");
        if shift != 0.0 {
            linalg::axpy(&mut w, shift, &v);
        }
        if linalg::normalize(&mut w) <= f64::MIN_POSITIVE {
            // the map annihilates v; not a usable direction
            return None;
        }
        let mut diff = 0.0_f64;
        let mut flip = 0.0_f64;
        for (a, b) in w.iter().zip(&v) {
            diff += (a - b) * (a - b);
            flip += (a + b) * (a + b);
        }
        if diff.sqrt() < tol || flip.sqrt() < tol {
            return Some(w);
        }
        v = w;
    }
    None
}

/// Uniform point on the unit sphere via normalized Gaussian coordinates
/// (Box–Muller from two uniform draws; no_std-friendly).
fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n)
            .map(|_| {
                let u1: f64 = rng.random::<f64>().max(1e-300);
                let u2: f64 = rng.random();
                (-2.0 * u1.ln()).sqrt() * (2.0 * core::f64::consts::PI * u2).cos()
            })
            .collect();
        if linalg::normalize(&mut v) > 1e-6 {
            return v;
        }
    }
}

/// Accepts (λ, v) iff ‖T v^{k−1} − λ v‖ ≤ tol after renormalizing v.
/// Vectors further than 1e−6 from unit length are rejected outright.
pub fn certify_zeigenpair(
    t: &SymTensor,
    lambda: f64,
    v: &[f64],
    tol: f64,
) -> Result<ZEigenpair, SpectralError> {
    let norm = linalg::norm(v);
    if (norm - 1.0).abs() > 1e-6 {
        return Err(SpectralError::NotUnitVector { norm });
    }
    let mut unit = v.to_vec();
    linalg::normalize(&mut unit);
    let mut residual_vec = t.apply_system(&unit)?;
    linalg::axpy(&mut residual_vec, -lambda, &unit);
    let residual = linalg::norm(&residual_vec);
    if residual <= tol {
        Ok(ZEigenpair {
            eigenvalue: lambda,
            vector: unit,
            residual,
        })
    } else {
        Err(SpectralError::ResidualTooLarge { residual, tol })
    }
}

/// Exhaustive Z-eigenpair search for n = 2 by angular scan: parametrizes
/// v = (cos θ, sin θ) and finds the zeros of g(θ) = ⟨T v^{k−1}, v^⊥⟩ on
/// [0, π) (v and −v give the same pair up to sign), bisecting each sign
/// change of g to `refine_tol`. Double roots that do not change sign can
/// be missed on coarse grids; raise `grid_size` to taste.
pub fn zscan_2d(
    t: &SymTensor,
    grid_size: usize,
    refine_tol: f64,
) -> Result<Vec<ZEigenpair>, SpectralError> {
    if t.dim() != 2 {
        return Err(SpectralError::RequiresDimTwo { dim: t.dim() });
    }
    let grid = grid_size.max(8);
    let g = |theta: f64| -> f64 {
        let v = [theta.cos(), theta.sin()];
        let w = t.apply_system(&v).expect("dimension checked");
        w[0] * (-v[1]) + w[1] * v[0]
    };
    let step = core::f64::consts::PI / grid as f64;
    let mut roots: Vec<f64> = Vec::new();
    let mut prev = g(0.0);
    for i in 0..grid {
        let a = i as f64 * step;
        let b = a + step;
        let gb = g(b);
        if prev == 0.0 {
            roots.push(a);
        } else if prev * gb < 0.0 {
            let (mut lo, mut hi, mut glo) = (a, b, prev);
            while hi - lo > refine_tol {
                let mid = 0.5 * (lo + hi);
                let gm = g(mid);
                if glo * gm <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    glo = gm;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev = gb;
    }
    // dedupe near-identical angles (mod π)
    roots.sort_unstable_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() < refine_tol.max(1e-14) * 16.0);
    if roots.len() > 1 {
        let first = roots[0];
        let last = *roots.last().unwrap();
        if (first + core::f64::consts::PI - last).abs() < refine_tol.max(1e-14) * 16.0 {
            roots.pop();
        }
    }
    let mut pairs = Vec::with_capacity(roots.len());
    for theta in roots {
        let v = [theta.cos(), theta.sin()];
        let w = t.apply_system(&v).expect("dimension checked");
        let lambda = w[0] * v[0] + w[1] * v[1];
        let mut residual_vec = w;
        residual_vec[0] -= lambda * v[0];
        residual_vec[1] -= lambda * v[1];
        pairs.push(ZEigenpair {
            eigenvalue: lambda,
            vector: alloc::vec![v[0], v[1]],
            residual: linalg::norm(&residual_vec),
        });
    }
    Ok(pairs)
}

/// Upper bound on the Z-spectral radius of an even-order tensor: the
/// spectral radius of its square unfolding (a symmetric matrix whenever
/// the tensor is supersymmetric).
pub fn unfolding_bound(t: &SymTensor) -> Result<f64, SpectralError> {
    Ok(t.unfold_even()?.spectral_radius())
}

/// Upper bound for strictly positive tensors:
/// R − l(1 − (r/R)^{1/k}), with l the minimum entry and r, R the extreme
/// leading-index slice sums.
pub fn positive_tensor_bound(t: &SymTensor) -> Result<PositiveBound, SpectralError> {
    let min_entry = t.min_entry();
    if min_entry <= 0.0 || min_entry.is_nan() {
        return Err(SpectralError::NotPositive { min_entry });
    }
    let sums = t.leading_index_sums();
    let min_slice_sum = sums.iter().fold(f64::INFINITY, |m, &x| m.min(x));
    let max_slice_sum = sums.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x));
    let ratio = min_slice_sum / max_slice_sum;
    let bound = max_slice_sum - min_entry * (1.0 - ratio.powf(1.0 / t.order() as f64));
    Ok(PositiveBound {
        bound,
        min_entry,
        min_slice_sum,
        max_slice_sum,
    })
}

/// max{|λ_1|, |λ_n|} of an accepted odeco decomposition, labeled as an
/// estimate of the Z-spectral radius (conjectured equal, not certified).
pub fn zspectral_radius_estimate(dec: &OdecoDecomposition) -> Result<f64, SpectralError> {
    if !dec.is_odeco() {
        let threshold = ODECO_RESIDUAL_REL_TOL * dec.scale();
        return Err(SpectralError::NotOdeco {
            residual: dec.reconstruction_residual(),
            threshold,
        });
    }
    let eig = dec.eigenvalues();
    Ok(eig
        .first()
        .map(|first| first.abs().max(eig.last().unwrap().abs()))
        .unwrap_or(0.0))
}

/// Assembles every applicable bound for `t`. Pass a decomposition only if
/// it has already been accepted as odeco (the caller owns that gate); its
/// extreme eigenvalue magnitudes then provide the estimate. Otherwise the
/// angular scan supplies one when n = 2, and none is reported for larger
/// non-odeco tensors.
pub fn bound_report(t: &SymTensor, accepted: Option<&OdecoDecomposition>) -> BoundReport {
    let unfolding = if t.order().is_multiple_of(2) {
        unfolding_bound(t).ok()
    } else {
        None
    };
    let positive = positive_tensor_bound(t).ok();
    let frobenius = t.frobenius_norm();
    let zspectral_estimate = match accepted {
        Some(d) => {
            let eig = d.eigenvalues();
            eig.first().map(|first| SpectralEstimate {
                value: first.abs().max(eig.last().unwrap().abs()),
                source: EstimateSource::Decomposition,
            })
        }
        None if t.dim() == 2 => zscan_2d(t, 1024, 1e-12).ok().and_then(|pairs| {
            pairs
                .iter()
                .map(|p| p.eigenvalue.abs())
                .max_by(f64::total_cmp)
                .map(|value| SpectralEstimate {
                    value,
                    source: EstimateSource::Scan,
                })
        }),
        None => None,
    };
    BoundReport {
        unfolding,
        positive,
        frobenius,
        zspectral_estimate,
    }
}
