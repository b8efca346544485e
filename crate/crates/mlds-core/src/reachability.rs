//! Reachability subspace growth for the controlled system
//! x_{t+1} = A x_t^{k−1} + B u_t.
//!
//! Starting from R_0 = span(columns of B), each stage adjoins every value
//! A v_1 v_2 ⋯ v_{k−1} with the v_l drawn from the previous stage's span.
//! By multilinearity it suffices to evaluate tuples of basis vectors, and
//! by supersymmetry only non-decreasing index tuples (the image is
//! invariant under argument permutation). Each R_q is determined by
//! R_{q−1}, so the chain saturates at the first repetition and the union
//! over all q is reached there.
//!
//! The full-rank test treats the grown subspace as deciding reachability.
//! That equivalence is a conjecture for even orders and known to be the
//! wrong question for odd orders, so every report carries a caveat and a
//! scope flag; this module is experimental by nature.

use alloc::vec::Vec;
use thiserror::Error;

use crate::linalg;
use crate::tensor::{SymTensor, TensorError};

/// Attached to every reachability verdict.
pub const RANK_TEST_CAVEAT: &str =
    "rank test is conjectural: equivalence between full-dimensional \
     subspace growth and reachability is unproven (even orders) and out of scope for odd orders";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReachabilityError {
    #[error("control matrix must have {expected} rows, column {column} has {got}")]
    BadControlColumn {
        column: usize,
        expected: usize,
        got: usize,
    },
    #[error("control matrix needs at least one column")]
    NoControls,
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// The controlled multilinear system (A, B); `controls` holds the columns
/// b_1 … b_m of B. Inputs u_t appear only in the model definition — no
/// input synthesis happens here.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlledSystem {
    tensor: SymTensor,
    controls: Vec<Vec<f64>>,
}

impl ControlledSystem {
    pub fn new(tensor: SymTensor, controls: Vec<Vec<f64>>) -> Result<Self, ReachabilityError> {
        if controls.is_empty() {
            return Err(ReachabilityError::NoControls);
        }
        let n = tensor.dim();
        for (column, c) in controls.iter().enumerate() {
            if c.len() != n {
                return Err(ReachabilityError::BadControlColumn {
                    column,
                    expected: n,
                    got: c.len(),
                });
            }
        }
        Ok(Self { tensor, controls })
    }

    pub fn tensor(&self) -> &SymTensor {
        &self.tensor
    }

    pub fn controls(&self) -> &[Vec<f64>] {
        &self.controls
    }
}

/// Controls for subspace growth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthOptions {
    /// A direction is new when its residual after projection onto the
    /// current basis exceeds `rank_tol · (‖candidate‖ + 1)`.
    pub rank_tol: f64,
    /// Warn (via [`ReachabilitySubspace::budget_exceeded`]) when a stage
    /// would evaluate more tuples than this; evaluation still proceeds.
    pub tuple_budget: u128,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        Self {
            rank_tol: 1e-8,
            tuple_budget: 200_000,
        }
    }
}

/// The grown chain R_0 ⊆ R_1 ⊆ ⋯. `basis` is orthonormal and ordered by
/// discovery, so the first `stage_dims[q]` vectors span R_q.
#[derive(Debug, Clone, PartialEq)]
pub struct ReachabilitySubspace {
    basis: Vec<Vec<f64>>,
    stage_dims: Vec<usize>,
    saturated_at: usize,
    budget_exceeded: bool,
}

impl ReachabilitySubspace {
    pub fn final_dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthonormal basis of the final subspace.
    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// dim R_q per recorded stage; strictly increasing until the last
    /// entry, which repeats only when growth stopped by saturation.
    pub fn stage_dims(&self) -> &[usize] {
        &self.stage_dims
    }

    /// Basis of R_q (a prefix of the final basis).
    pub fn stage_basis(&self, stage: usize) -> &[Vec<f64>] {
        &self.basis[..self.stage_dims[stage]]
    }

    /// Earliest stage whose span equals the final subspace.
    pub fn saturated_at(&self) -> usize {
        self.saturated_at
    }

    pub fn budget_exceeded(&self) -> bool {
        self.budget_exceeded
    }
}

/// Number of non-decreasing `len`-tuples over `d` symbols, saturating.
fn multiset_count(d: usize, len: usize) -> u128 {
    // C(d + len − 1, len)
    let mut acc: u128 = 1;
    for i in 0..len {
        acc = acc.saturating_mul((d + i) as u128);
        acc /= (i + 1) as u128;
    }
    acc
}

/// Visits every non-decreasing `len`-tuple with entries in 0..d.
fn for_each_multiset(d: usize, len: usize, mut f: impl FnMut(&[usize])) {
    if d == 0 {
        return;
    }
    let mut tuple = alloc::vec![0usize; len];
    loop {
        f(&tuple);
        // advance: find the rightmost position that can still grow
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if tuple[i] + 1 < d {
                break;
            }
        }
        if tuple[i] + 1 >= d {
            return;
        }
        let v = tuple[i] + 1;
        for t in tuple.iter_mut().skip(i) {
            *t = v;
        }
    }
}

/// Grows the reachability chain until the dimension saturates or spans
/// the whole space. Stages are sequential; tuples within a stage draw only
/// from that stage's starting basis.
pub fn grow_subspace(sys: &ControlledSystem, opts: &GrowthOptions) -> ReachabilitySubspace {
    let n = sys.tensor.dim();
    let k = sys.tensor.order();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for c in &sys.controls {
        linalg::orthonormal_append(&mut basis, c, opts.rank_tol);
    }
    let mut stage_dims = alloc::vec![basis.len()];
    let mut budget_exceeded = false;

    while basis.len() < n {
        let d = basis.len();
        if d == 0 {
            break; // zero control matrix spans nothing and grows nothing
        }
        if multiset_count(d, k - 1) > opts.tuple_budget {
            budget_exceeded = true;
        }
        let stage_basis: Vec<Vec<f64>> = basis[..d].to_vec();
        let mut grew = false;
        for_each_multiset(d, k - 1, |tuple| {
            let args: Vec<&[f64]> = tuple.iter().map(|&i| stage_basis[i].as_slice()).collect();
            let image = sys
                .tensor
                .apply_vectors(&args)
                .expect("argument count and dimensions are consistent by construction");
            grew |= linalg::orthonormal_append(&mut basis, &image, opts.rank_tol);
        });
        stage_dims.push(basis.len());
        if !grew {
            break;
        }
    }

    let final_dim = basis.len();
    let saturated_at = stage_dims
        .iter()
        .position(|&d| d == final_dim)
        .expect("final dimension appears in the stage record");
    ReachabilitySubspace {
        basis,
        stage_dims,
        saturated_at,
        budget_exceeded,
    }
}

/// Reachability verdict from the rank of the grown subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct ReachabilityReport {
    pub reachable: bool,
    pub dim: usize,
    pub subspace: ReachabilitySubspace,
    /// The rank test's hypothesis needs an even order; odd-order systems
    /// are processed but flagged out of scope.
    pub within_conjecture_scope: bool,
    pub caveat: &'static str,
}

/// Declares the system reachable iff the grown subspace spans R^n.
pub fn reachability_test(sys: &ControlledSystem, opts: &GrowthOptions) -> ReachabilityReport {
    let subspace = grow_subspace(sys, opts);
    let dim = subspace.final_dim();
    ReachabilityReport {
        reachable: dim == sys.tensor.dim(),
        dim,
        subspace,
        within_conjecture_scope: sys.tensor.order().is_multiple_of(2),
        caveat: RANK_TEST_CAVEAT,
    }
}
