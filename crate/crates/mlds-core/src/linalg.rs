//! Small dense linear-algebra helpers shared across the crate.
//!
//! Everything here operates on plain `&[f64]` vectors and flat row-major
//! square matrices; problem sizes are desk-scale (n ≲ 10, unfolded sides
//! ≲ a few hundred), so simple O(n³) routines are the right tool.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // required for float math under no_std
use num_traits::Float;

/// Euclidean inner product. Panics if lengths differ.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "dot: length mismatch");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm.
pub fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// `y += c * x` in place.
pub fn axpy(y: &mut [f64], c: f64, x: &[f64]) {
    assert_eq!(y.len(), x.len(), "axpy: length mismatch");
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += c * xi;
    }
}

/// Normalizes `v` in place and returns its original norm. Vectors with
/// norm below `f64::MIN_POSITIVE` are left untouched.
pub fn normalize(v: &mut [f64]) -> f64 {
    let n = norm(v);
    if n > f64::MIN_POSITIVE {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
    n
}

/// Projects `v` onto the orthogonal complement of an orthonormal family.
pub fn project_out(v: &mut [f64], basis: &[Vec<f64>]) {
    for u in basis {
        let c = dot(u, v);
        axpy(v, -c, u);
    }
}

/// Appends `candidate` to an orthonormal `basis` if its residual after
/// projection exceeds `rank_tol * (‖candidate‖ + 1)`. Returns whether the
/// basis grew. Projection is applied twice; one pass of modified
/// Gram–Schmidt loses orthogonality for nearly dependent inputs.
pub fn orthonormal_append(basis: &mut Vec<Vec<f64>>, candidate: &[f64], rank_tol: f64) -> bool {
    let scale = norm(candidate) + 1.0;
    let mut v = candidate.to_vec();
    project_out(&mut v, basis);
    project_out(&mut v, basis);
    if norm(&v) <= rank_tol * scale {
        return false;
    }
    normalize(&mut v);
    basis.push(v);
    true
}

/// Worst deviation of a vector family from orthonormality: the largest
/// |⟨v_i, v_j⟩ − δ_ij|.
pub fn orthonormality_defect(family: &[Vec<f64>]) -> f64 {
    let mut defect = 0.0_f64;
    for (i, u) in family.iter().enumerate() {
        for (j, v) in family.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((dot(u, v) - target).abs());
        }
    }
    defect
}

/// Extends an orthonormal family to a full orthonormal basis of R^n using
/// standard basis vectors as candidates.
pub fn complete_basis(basis: &mut Vec<Vec<f64>>, n: usize) {
    let mut axis = 0;
    while basis.len() < n && axis < n {
        let mut e = vec![0.0; n];
        e[axis] = 1.0;
        orthonormal_append(basis, &e, 1e-8);
        axis += 1;
    }
    assert!(basis.len() == n, "complete_basis: failed to span R^n");
}

/// Eigenvalues of a symmetric matrix by the cyclic Jacobi method.
///
/// `mat` is flat row-major with side `n`; only symmetric inputs make
/// sense. Returns the eigenvalues in descending order.
pub fn symmetric_eigenvalues(n: usize, mat: &[f64]) -> Vec<f64> {
    assert_eq!(mat.len(), n * n, "symmetric_eigenvalues: bad shape");
    let mut a = mat.to_vec();
    let scale: f64 = a.iter().fold(0.0_f64, |m, x| m.max(x.abs())).max(1e-300);
    for _sweep in 0..64 {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[p * n + q].abs());
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // classic Jacobi rotation choosing the smaller angle root
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                }
                for i in 0..n {
                    let api = a[p * n + i];
                    let aqi = a[q * n + i];
                    a[p * n + i] = c * api - s * aqi;
                    a[q * n + i] = s * api + c * aqi;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_unstable_by(|x, y| y.total_cmp(x));
    eig
}

/// Nearest orthonormal matrix (polar factor) of a square matrix whose
/// columns are already close to orthonormal, by Newton–Schulz iteration
/// W ← W(3I − WᵀW)/2. Converges quadratically when all singular values
/// lie in (0, √3). Columns are passed and returned as a list of vectors.
pub fn polar_orthonormalize(columns: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = columns.len();
    assert!(columns.iter().all(|c| c.len() == n), "polar: not square");
    let mut w: Vec<Vec<f64>> = columns.to_vec();
    for _ in 0..32 {
        // g = WᵀW
        let mut g = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                g[i * n + j] = dot(&w[i], &w[j]);
            }
        }
        let mut dev = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((g[i * n + j] - target).abs());
            }
        }
        if dev < 1e-15 {
            break;
        }
        // w_new[j] = Σ_i w[i] * (1.5 I − 0.5 g)[i][j]
        let mut next = vec![vec![0.0; n]; n];
        for j in 0..n {
            for i in 0..n {
                let coef = if i == j {
                    1.5 - 0.5 * g[i * n + j]
                } else {
                    -0.5 * g[i * n + j]
                };
                axpy(&mut next[j], coef, &w[i]);
            }
        }
        w = next;
    }
    w
}
