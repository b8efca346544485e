//! Dense supersymmetric tensor storage and raw multilinear algebra.
//!
//! A cubical order-k, dimension-n tensor is stored as a flat array of n^k
//! entries in canonical order: the FIRST index varies fastest, i.e. the
//! 0-based multi-index (j_1, …, j_k) lives at flat position
//! j_1 + j_2·n + j_3·n² + ⋯ + j_k·n^{k−1}. Storage is fully dense even
//! though supersymmetry makes it redundant: target problems are small
//! (n ≲ 10, k ≤ 6) and dense storage keeps contractions branch-free.
//!
//! Supersymmetry (invariance of entries under any permutation of indices)
//! is certified at construction: entries are replaced by their exact
//! permutation average and the worst deviation between two entries of the
//! same permutation orbit is recorded and checked against a tolerance.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // required for float math under no_std
use num_traits::Float;
use thiserror::Error;

use crate::linalg;

/// Errors from tensor construction and multilinear operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TensorError {
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("supersymmetry violated: max deviation {max_deviation:e} exceeds tolerance {tol:e}")]
    SymmetryViolation { max_deviation: f64, tol: f64 },
    #[error("entries must be finite")]
    NonFiniteEntry,
    #[error("operation requires an even tensor order, got {order}")]
    OddOrder { order: usize },
    #[error("mode {mode} out of range for an order-{order} tensor")]
    BadMode { mode: usize, order: usize },
}

fn pow_len(dim: usize, order: usize) -> usize {
    dim.checked_pow(order as u32)
        .expect("tensor too large: dim^order overflows usize")
}

/// Decodes a flat position into `digits` (first index fastest).
fn decode(mut flat: usize, dim: usize, digits: &mut [usize]) {
    for d in digits.iter_mut() {
        *d = flat % dim;
        flat /= dim;
    }
}

/// Encodes digits back into a flat position.
fn encode(digits: &[usize], dim: usize) -> usize {
    digits.iter().rev().fold(0, |acc, &d| acc * dim + d)
}

/// Replaces `entries` by exact permutation-orbit averages and returns the
/// largest deviation between two entries of the same orbit. Orbits are
/// identified by sorting the index digits; every arrangement of a given
/// digit multiset is hit by the same number of permutations, so the mean
/// over distinct positions equals the mean over all k! permutations.
fn symmetrize_exact(order: usize, dim: usize, entries: &mut [f64]) -> f64 {
    let len = entries.len();
    let mut sum = vec![0.0_f64; len];
    let mut count = vec![0u32; len];
    let mut lo = vec![f64::INFINITY; len];
    let mut hi = vec![f64::NEG_INFINITY; len];
    let mut digits = vec![0usize; order];
    let mut canon = vec![0usize; len];
    for flat in 0..len {
        decode(flat, dim, &mut digits);
        digits.sort_unstable();
        let key = encode(&digits, dim);
        canon[flat] = key;
        let x = entries[flat];
        sum[key] += x;
        count[key] += 1;
        lo[key] = lo[key].min(x);
        hi[key] = hi[key].max(x);
    }
    let mut max_dev = 0.0_f64;
    for key in 0..len {
        if count[key] > 0 {
            // orbits that already agree keep their value bit-exactly, so
            // symmetrization is idempotent and symmetric inputs are
            // stored unchanged
            sum[key] = if hi[key] == lo[key] {
                lo[key]
            } else {
                sum[key] / count[key] as f64
            };
            max_dev = max_dev.max(hi[key] - lo[key]);
        }
    }
    for flat in 0..len {
        entries[flat] = sum[canon[flat]];
    }
    max_dev
}

/// Default certification tolerance: 1e−9 times the largest entry
/// magnitude. Reference data in this domain is typically printed to four
/// decimals, so absolute tolerances make no sense.
pub fn default_sym_tol(entries: &[f64]) -> f64 {
    1e-9 * entries.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// A dense cubical tensor with no symmetry guarantee. Intermediate results
/// of single-mode contractions live here.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    order: usize,
    dim: usize,
    entries: Vec<f64>,
}

impl DenseTensor {
    pub fn new(order: usize, dim: usize, entries: Vec<f64>) -> Result<Self, TensorError> {
        let expected = pow_len(dim, order);
        if entries.len() != expected {
            return Err(TensorError::DimensionMismatch {
                expected,
                got: entries.len(),
            });
        }
        Ok(Self {
            order,
            dim,
            entries,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        assert_eq!(index.len(), self.order, "index arity mismatch");
        assert!(index.iter().all(|&i| i < self.dim), "index out of range");
        self.entries[encode(index, self.dim)]
    }

    /// Contracts the first mode against `v`, lowering the order by one.
    /// With first-index-fastest storage the inner loop is stride-1.
    pub fn contract_first(&self, v: &[f64]) -> Result<DenseTensor, TensorError> {
        if v.len() != self.dim {
            return Err(TensorError::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        assert!(self.order >= 1, "cannot contract a scalar");
        let out_len = self.entries.len() / self.dim;
        let mut out = vec![0.0_f64; out_len];
        for (r, slot) in out.iter_mut().enumerate() {
            let base = r * self.dim;
            let mut acc = 0.0;
            for (i, &vi) in v.iter().enumerate() {
                acc += self.entries[base + i] * vi;
            }
            *slot = acc;
        }
        Ok(DenseTensor {
            order: self.order - 1,
            dim: self.dim,
            entries: out,
        })
    }

    /// Tensor–vector product T ×_p v along 0-based mode `p`: the output at
    /// (j_1,…,ĵ_p,…,j_k) is Σ_{j_p} T_{j_1…j_p…j_k} v_{j_p}.
    pub fn mode_product(&self, p: usize, v: &[f64]) -> Result<DenseTensor, TensorError> {
        if p >= self.order {
            return Err(TensorError::BadMode {
                mode: p,
                order: self.order,
            });
        }
        if v.len() != self.dim {
            return Err(TensorError::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        let n = self.dim;
        let low = pow_len(n, p); // strides below mode p
        let high = self.entries.len() / (low * n);
        let mut out = vec![0.0_f64; low * high];
        for h in 0..high {
            for l in 0..low {
                let mut acc = 0.0;
                for (i, &vi) in v.iter().enumerate() {
                    acc += self.entries[l + i * low + h * low * n] * vi;
                }
                out[l + h * low] = acc;
            }
        }
        Ok(DenseTensor {
            order: self.order - 1,
            dim: n,
            entries: out,
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Order-1 tensors convert to plain vectors.
    pub fn into_vector(self) -> Vec<f64> {
        assert_eq!(self.order, 1, "into_vector: order must be 1");
        self.entries
    }
}

/// A certified supersymmetric cubical tensor: entries are an exact
/// permutation average and the pre-symmetrization deviation passed the
/// certification tolerance. Immutable after construction; every operation
/// is a pure function.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor {
    dense: DenseTensor,
    sym_tol: f64,
    sym_deviation: f64,
}

impl SymTensor {
    /// Certifies raw entries as supersymmetric: symmetrizes by exact
    /// permutation averaging, records the worst in-orbit deviation, and
    /// rejects if it exceeds `sym_tol`.
    pub fn certify(
        order: usize,
        dim: usize,
        mut entries: Vec<f64>,
        sym_tol: f64,
    ) -> Result<Self, TensorError> {
        assert!(order >= 1 && dim >= 1, "order and dim must be positive");
        assert!(sym_tol >= 0.0, "sym_tol must be nonnegative");
        let expected = pow_len(dim, order);
        if entries.len() != expected {
            return Err(TensorError::DimensionMismatch {
                expected,
                got: entries.len(),
            });
        }
        if !entries.iter().all(|x| x.is_finite()) {
            return Err(TensorError::NonFiniteEntry);
        }
        let max_deviation = symmetrize_exact(order, dim, &mut entries);
        if max_deviation > sym_tol {
            return Err(TensorError::SymmetryViolation {
                max_deviation,
                tol: sym_tol,
            });
        }
        Ok(Self {
            dense: DenseTensor {
                order,
                dim,
                entries,
            },
            sym_tol,
            sym_deviation: max_deviation,
        })
    }

    /// Wraps entries the caller asserts are already permutation-symmetric
    /// (e.g. produced by [`SymTensor::rank_one_sum`] or deflation). No
    /// averaging or check is performed.
    pub fn from_symmetric_unchecked(order: usize, dim: usize, entries: Vec<f64>) -> Self {
        let expected = pow_len(dim, order);
        assert_eq!(entries.len(), expected, "entry count must be dim^order");
        Self {
            dense: DenseTensor {
                order,
                dim,
                entries,
            },
            sym_tol: 0.0,
            sym_deviation: 0.0,
        }
    }

    pub fn zeros(order: usize, dim: usize) -> Self {
        Self::from_symmetric_unchecked(order, dim, vec![0.0; pow_len(dim, order)])
    }

    /// Diagonal tensor with `values[i]` at position (i, i, …, i).
    pub fn diagonal(order: usize, values: &[f64]) -> Self {
        let dim = values.len();
        let mut t = Self::zeros(order, dim);
        let mut stride = 0usize;
        let mut unit = 1usize;
        for _ in 0..order {
            stride += unit;
            unit *= dim;
        }
        for (i, &v) in values.iter().enumerate() {
            t.dense.entries[i * stride] = v;
        }
        t
    }

    /// The symmetric rank-one tensor v∘v∘⋯∘v (order copies). Each
    /// permutation orbit is computed once from sorted digits and scattered,
    /// so the result is bitwise symmetric.
    pub fn rank_one(order: usize, v: &[f64]) -> Self {
        let dim = v.len();
        let len = pow_len(dim, order);
        let mut entries = vec![0.0_f64; len];
        let mut digits = vec![0usize; order];
        let mut cache = vec![f64::NAN; len];
        for (flat, entry) in entries.iter_mut().enumerate() {
            decode(flat, dim, &mut digits);
            digits.sort_unstable();
            let key = encode(&digits, dim);
            if cache[key].is_nan() {
                cache[key] = digits.iter().map(|&d| v[d]).product();
            }
            *entry = cache[key];
        }
        Self::from_symmetric_unchecked(order, dim, entries)
    }

    /// Σ_r coefficients[r] · vectors[r]^{∘order}.
    pub fn rank_one_sum(order: usize, coefficients: &[f64], vectors: &[Vec<f64>]) -> Self {
        assert_eq!(
            coefficients.len(),
            vectors.len(),
            "coefficient/vector count mismatch"
        );
        assert!(!vectors.is_empty(), "need at least one vector");
        let dim = vectors[0].len();
        let mut acc = Self::zeros(order, dim);
        for (&c, v) in coefficients.iter().zip(vectors) {
            acc.add_scaled(&Self::rank_one(order, v), c)
                .expect("shapes agree");
        }
        acc
    }

    /// `self += c · other`. Symmetry is preserved exactly.
    pub fn add_scaled(&mut self, other: &SymTensor, c: f64) -> Result<(), TensorError> {
        if self.order() != other.order() || self.dim() != other.dim() {
            return Err(TensorError::DimensionMismatch {
                expected: self.dense.entries.len(),
                got: other.dense.entries.len(),
            });
        }
        for (a, b) in self
            .dense
            .entries
            .iter_mut()
            .zip(other.dense.entries.iter())
        {
            *a += c * b;
        }
        Ok(())
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        for x in out.dense.entries.iter_mut() {
            *x *= c;
        }
        out
    }

    pub fn order(&self) -> usize {
        self.dense.order
    }

    pub fn dim(&self) -> usize {
        self.dense.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.dense.entries
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        self.dense.get(index)
    }

    /// Tolerance the tensor was certified against.
    pub fn sym_tol(&self) -> f64 {
        self.sym_tol
    }

    /// Worst in-orbit deviation observed before symmetrization.
    pub fn sym_deviation(&self) -> f64 {
        self.sym_deviation
    }

    pub fn as_dense(&self) -> &DenseTensor {
        &self.dense
    }

    pub fn mode_product(&self, p: usize, v: &[f64]) -> Result<DenseTensor, TensorError> {
        self.dense.mode_product(p, v)
    }

    /// Evaluates the system map A x^{k−1}: contracts k−1 modes against `x`
    /// and returns the remaining length-n vector of degree-(k−1)
    /// homogeneous polynomials.
    pub fn apply_system(&self, x: &[f64]) -> Result<Vec<f64>, TensorError> {
        self.apply_vectors_impl(|_| x)
    }

    /// Contracts k−1 modes against the given (possibly distinct) vectors:
    /// A v_1 v_2 ⋯ v_{k−1}.
    pub fn apply_vectors(&self, vs: &[&[f64]]) -> Result<Vec<f64>, TensorError> {
        if vs.len() != self.order() - 1 {
            return Err(TensorError::DimensionMismatch {
                expected: self.order() - 1,
                got: vs.len(),
            });
        }
        self.apply_vectors_impl(|i| vs[i])
    }

    fn apply_vectors_impl<'a, F: Fn(usize) -> &'a [f64]>(
        &self,
        pick: F,
    ) -> Result<Vec<f64>, TensorError> {
        let mut cur = self.dense.contract_first(pick(0))?;
        for i in 1..self.order() - 1 {
            cur = cur.contract_first(pick(i))?;
        }
        Ok(cur.into_vector())
    }

    /// Entrywise inner product Σ T_{j…} S_{j…} of same-shape tensors.
    pub fn inner_product(&self, other: &SymTensor) -> Result<f64, TensorError> {
        if self.order() != other.order() || self.dim() != other.dim() {
            return Err(TensorError::DimensionMismatch {
                expected: self.dense.entries.len(),
                got: other.dense.entries.len(),
            });
        }
        Ok(self
            .dense
            .entries
            .iter()
            .zip(other.dense.entries.iter())
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.dense.frobenius_norm()
    }

    /// Square unfolding of an even-order tensor. The index tuple is read
    /// as interleaved row/column digit pairs (j_1, i_1, j_2, i_2, …); the
    /// row is j_1 + j_2·n + j_3·n² + ⋯ and the column likewise, both
    /// first-digit-fastest. At order 2 this is the identity reshape.
    pub fn unfold_even(&self) -> Result<UnfoldedMatrix, TensorError> {
        let k = self.order();
        if !k.is_multiple_of(2) {
            return Err(TensorError::OddOrder { order: k });
        }
        let n = self.dim();
        let pairs = k / 2;
        let side = pow_len(n, pairs);
        let mut entries = vec![0.0_f64; side * side];
        let mut digits = vec![0usize; k];
        for flat in 0..self.dense.entries.len() {
            decode(flat, n, &mut digits);
            let mut row = 0usize;
            let mut col = 0usize;
            for p in (0..pairs).rev() {
                row = row * n + digits[2 * p];
                col = col * n + digits[2 * p + 1];
            }
            entries[row * side + col] = self.dense.entries[flat];
        }
        Ok(UnfoldedMatrix {
            side,
            source_order: k,
            entries,
        })
    }

    /// Mode-p matricization: an n × n^{k−1} matrix whose row j_p collects
    /// the mode-p fiber entries, columns ordered first-remaining-index
    /// fastest.
    pub fn matricize(&self, p: usize) -> Result<ModeMatricization, TensorError> {
        let k = self.order();
        if p >= k {
            return Err(TensorError::BadMode { mode: p, order: k });
        }
        let n = self.dim();
        let cols = self.dense.entries.len() / n;
        let mut entries = vec![0.0_f64; n * cols];
        let low = pow_len(n, p);
        for rest in 0..cols {
            let l = rest % low;
            let h = rest / low;
            for d in 0..n {
                entries[d * cols + rest] = self.dense.entries[l + d * low + h * low * n];
            }
        }
        Ok(ModeMatricization {
            mode: p,
            rows: n,
            cols,
            entries,
        })
    }

    /// Mode-p singular values, descending. Computed as square roots of the
    /// eigenvalues of the small n×n Gram matrix M Mᵀ of the matricization
    /// (n^{k−1} columns may be many, n never is).
    pub fn mode_singular_values(&self, p: usize) -> Result<Vec<f64>, TensorError> {
        let m = self.matricize(p)?;
        let n = m.rows;
        let mut gram = vec![0.0_f64; n * n];
        for a in 0..n {
            for b in a..n {
                let mut acc = 0.0;
                for c in 0..m.cols {
                    acc += m.entries[a * m.cols + c] * m.entries[b * m.cols + c];
                }
                gram[a * n + b] = acc;
                gram[b * n + a] = acc;
            }
        }
        let eig = linalg::symmetric_eigenvalues(n, &gram);
        Ok(eig.into_iter().map(|e| e.max(0.0).sqrt()).collect())
    }

    /// Smallest entry; used by the positive-tensor spectral bound.
    pub fn min_entry(&self) -> f64 {
        self.dense
            .entries
            .iter()
            .fold(f64::INFINITY, |m, &x| m.min(x))
    }

    /// For each leading index j, the sum Σ_{j_2…j_k} T_{j j_2 … j_k}.
    pub fn leading_index_sums(&self) -> Vec<f64> {
        let n = self.dim();
        let mut sums = vec![0.0_f64; n];
        for (flat, &x) in self.dense.entries.iter().enumerate() {
            sums[flat % n] += x;
        }
        sums
    }
}

/// Square unfolding ψ(A) of an even-order supersymmetric tensor; side
/// N = n^{k/2}. Symmetric whenever the source tensor is supersymmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct UnfoldedMatrix {
    side: usize,
    source_order: usize,
    entries: Vec<f64>,
}

impl UnfoldedMatrix {
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn source_order(&self) -> usize {
        self.source_order
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        assert!(
            row < self.side && col < self.side,
            "matrix index out of range"
        );
        self.entries[row * self.side + col]
    }

    /// Largest eigenvalue magnitude.
    pub fn spectral_radius(&self) -> f64 {
        linalg::symmetric_eigenvalues(self.side, &self.entries)
            .into_iter()
            .fold(0.0_f64, |m, e| m.max(e.abs()))
    }
}

/// Mode-p flattening of a cubical tensor into an n × n^{k−1} matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeMatricization {
    mode: usize,
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl ModeMatricization {
    pub fn mode(&self) -> usize {
        self.mode
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        assert!(
            row < self.rows && col < self.cols,
            "matrix index out of range"
        );
        self.entries[row * self.cols + col]
    }
}
