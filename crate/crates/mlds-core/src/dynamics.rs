//! Trajectory generation for x_{t+1} = A x_t^{k−1}: brute-force iteration
//! and the closed form available when A is odeco.
//!
//! With A = Σ_r λ_r v_r∘⋯∘v_r (orthonormal v_r) and x_0 = Σ_r c_r v_r,
//! the state after q steps is
//!
//!   x_q = Σ_r λ_r^α c_r^β v_r,   α = ((k−1)^q − 1)/(k−2),  β = (k−1)^q.
//!
//! β is doubly exponential in q, so α and β are kept as exact big integers
//! and each term λ_r^α c_r^β is evaluated in log-magnitude + sign form;
//! naive powers overflow by q ≈ 30 even for benign systems.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigUint;
#[allow(unused_imports)] // Float is required under no_std
use num_traits::{Float, ToPrimitive};
use thiserror::Error;

use crate::linalg;
use crate::spectral::OdecoDecomposition;
use crate::tensor::{SymTensor, TensorError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("state dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid simulation options: {reason}")]
    InvalidOptions { reason: &'static str },
    #[error("closed form requires order >= 3, got {order}")]
    OrderTooSmall { order: usize },
    #[error("closed-form term for mode {mode} exceeds the representable range")]
    DivergentTerm { mode: usize },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Iteration controls. Defaults: horizon 100, convergence at ‖x‖ < 1e−9,
/// divergence past 1e12, every state stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationOptions {
    pub horizon: usize,
    pub conv_eps: f64,
    pub div_cap: f64,
    /// Store every `stride`-th state (the initial and terminal states are
    /// always kept). Norm checks still happen at every step.
    pub stride: usize,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        Self {
            horizon: 100,
            conv_eps: 1e-9,
            div_cap: 1e12,
            stride: 1,
        }
    }
}

impl SimulationOptions {
    fn validate(&self) -> Result<(), DynamicsError> {
        if self.horizon < 1 {
            return Err(DynamicsError::InvalidOptions {
                reason: "horizon must be at least 1",
            });
        }
        if self.conv_eps.is_nan() || self.conv_eps <= 0.0 {
            return Err(DynamicsError::InvalidOptions {
                reason: "conv_eps must be positive",
            });
        }
        if self.div_cap.is_nan() || self.div_cap <= self.conv_eps {
            return Err(DynamicsError::InvalidOptions {
                reason: "div_cap must exceed conv_eps",
            });
        }
        if self.stride == 0 {
            return Err(DynamicsError::InvalidOptions {
                reason: "stride must be positive",
            });
        }
        Ok(())
    }
}

/// How a trajectory ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryStatus {
    /// ‖x_t‖ dropped below `conv_eps` at step `step`.
    Converged {
        step: usize,
    },
    /// ‖x_t‖ exceeded `div_cap` at step `step`; `non_finite` marks
    /// overflow to inf/NaN before the cap triggered.
    Diverged {
        step: usize,
        non_finite: bool,
    },
    HorizonReached,
}

/// A recorded state sequence. `steps[i]` is the time index of `states[i]`;
/// `norms[i]` its Euclidean norm.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub steps: Vec<usize>,
    pub states: Vec<Vec<f64>>,
    pub norms: Vec<f64>,
    pub status: TrajectoryStatus,
    pub options: SimulationOptions,
}

impl Trajectory {
    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectory stores at least x0")
    }

    /// Norm at time `t`, when recorded.
    pub fn norm_at(&self, t: usize) -> Option<f64> {
        self.steps
            .iter()
            .position(|&s| s == t)
            .map(|i| self.norms[i])
    }
}

/// Iterates x_{t+1} = A x_t^{k−1} until convergence, divergence, or the
/// horizon. The initial state is checked too: x_0 = 0 converges at t = 0.
pub fn simulate(
    a: &SymTensor,
    x0: &[f64],
    options: SimulationOptions,
) -> Result<Trajectory, DynamicsError> {
    options.validate()?;
    if x0.len() != a.dim() {
        return Err(DynamicsError::DimensionMismatch {
            expected: a.dim(),
            got: x0.len(),
        });
    }
    let mut steps = Vec::new();
    let mut states: Vec<Vec<f64>> = Vec::new();
    let mut norms = Vec::new();

    let mut x = x0.to_vec();
    let mut t = 0usize;
    let mut n = linalg::norm(&x);
    steps.push(0);
    states.push(x.clone());
    norms.push(n);
    let status = loop {
        if !n.is_finite() {
            break TrajectoryStatus::Diverged {
                step: t,
                non_finite: true,
            };
        }
        if n < options.conv_eps {
            break TrajectoryStatus::Converged { step: t };
        }
        if n > options.div_cap {
            break TrajectoryStatus::Diverged {
                step: t,
                non_finite: false,
            };
        }
        if t == options.horizon {
            break TrajectoryStatus::HorizonReached;
        }
        x = a.apply_system(&x)?;
        t += 1;
        n = linalg::norm(&x);
        if t.is_multiple_of(options.stride) {
            steps.push(t);
            states.push(x.clone());
            norms.push(n);
        }
    };
    if *steps.last().unwrap() != t {
        steps.push(t);
        states.push(x);
        norms.push(n);
    }
    Ok(Trajectory {
        steps,
        states,
        norms,
        status,
        options,
    })
}

/// Coefficients of a state in the factor basis: c_r = ⟨x_0, v_r⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalCoordinates {
    coefficients: Vec<f64>,
}

impl ModalCoordinates {
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coefficients
    }
}

/// Expands `x0` over the (complete, orthonormal) factor family of `dec`.
pub fn modal_coordinates(
    dec: &OdecoDecomposition,
    x0: &[f64],
) -> Result<ModalCoordinates, DynamicsError> {
    if x0.len() != dec.dim() {
        return Err(DynamicsError::DimensionMismatch {
            expected: dec.dim(),
            got: x0.len(),
        });
    }
    Ok(ModalCoordinates {
        coefficients: dec.factors().iter().map(|v| linalg::dot(x0, v)).collect(),
    })
}

/// The exact integer exponents of the closed form at step `q`:
/// α = Σ_{j<q} (k−1)^j and β = (k−1)^q, built by the recurrences
/// α ← (k−1)α + 1, β ← (k−1)β. No floating point involved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionExponents {
    pub steps: usize,
    pub alpha: BigUint,
    pub beta: BigUint,
}

pub fn solution_exponents(order: usize, steps: usize) -> Result<SolutionExponents, DynamicsError> {
    // at order 2 the closed form degenerates to c_r λ_r^q (not covered
    // here); α is only integral for order ≥ 3
    if order < 3 {
        return Err(DynamicsError::OrderTooSmall { order });
    }
    let growth = BigUint::from(order - 1);
    let mut alpha = BigUint::from(0u32);
    let mut beta = BigUint::from(1u32);
    for _ in 0..steps {
        alpha = alpha * &growth + 1u32;
        beta *= &growth;
    }
    Ok(SolutionExponents { steps, alpha, beta })
}

/// Evaluates x_q = Σ_r λ_r^α c_r^β v_r without forming the powers:
/// using α = (β−1)/(k−2), the magnitude of each term is
///
///   exp(β·(ln|c_r| + ln|λ_r|/(k−2)) − ln|λ_r|/(k−2)),
///
/// and the sign is sign(λ_r)^α · sign(c_r)^β with exact integer parities.
/// Terms underflowing f64 are flushed to zero; a term overflowing f64
/// reports which mode diverged. Coefficients below 1e−300 in magnitude
/// are treated as exact zeros.
pub fn explicit_solution(
    dec: &OdecoDecomposition,
    x0: &[f64],
    steps: usize,
) -> Result<Vec<f64>, DynamicsError> {
    let k = dec.order();
    if k < 3 {
        return Err(DynamicsError::OrderTooSmall { order: k });
    }
    let coords = modal_coordinates(dec, x0)?;
    let exp = solution_exponents(k, steps)?;
    let alpha_odd = exp.alpha.bit(0);
    let beta_odd = exp.beta.bit(0);
    let beta_f = exp.beta.to_f64().unwrap_or(f64::INFINITY);
    let root = (k - 2) as f64;

    let mut out = vec![0.0_f64; dec.dim()];
    for (mode, (&lambda, c)) in dec
        .eigenvalues()
        .iter()
        .zip(coords.coefficients())
        .enumerate()
    {
        let c = *c;
        if c.abs() < 1e-300 {
            continue; // contributes nothing representable for β ≥ 1
        }
        if lambda == 0.0 && steps > 0 {
            continue; // λ^α = 0 for α ≥ 1
        }
        let ln_l = if steps == 0 {
            0.0
        } else {
            lambda.abs().ln() / root
        };
        let base = c.abs().ln() + ln_l;
        let log_mag = if base == 0.0 {
            -ln_l
        } else {
            beta_f * base - ln_l
        };
        if log_mag > 709.0 {
            return Err(DynamicsError::DivergentTerm { mode });
        }
        if log_mag < -745.0 || log_mag.is_nan() {
            continue;
        }
        let negative = (lambda < 0.0 && alpha_odd) ^ (c < 0.0 && beta_odd);
        let coef = if negative {
            -log_mag.exp()
        } else {
            log_mag.exp()
        };
        linalg::axpy(&mut out, coef, &dec.factors()[mode]);
    }
    Ok(out)
}
