//! Shared fixtures for the integration and acceptance suites: the two
//! bundled example systems, plus paths and helpers.
#![allow(dead_code)]

use std::path::PathBuf;

use mlds_core::linalg;
use mlds_core::reachability::ControlledSystem;
use mlds_core::tensor::SymTensor;

/// Example system 1: order 3, dimension 3, eigenvalues (0.9, 0.1, 0.02).
pub const EX1_LAMBDA: [f64; 3] = [0.9, 0.1, 0.02];

/// Factor matrix of example 1 as published, to four decimals (columns are
/// the factors). Not exactly orthonormal; see [`ex1_basis`].
pub const EX1_PRINTED_V: [[f64; 3]; 3] = [
    [-0.8482, -0.5212, 0.0947],
    [-0.4840, 0.6899, -0.5382],
    [0.2152, -0.5024, -0.8374],
];

/// The four published initial conditions of example 1.
pub const EX1_ICS: [[f64; 3]; 4] = [
    [3.0, 10.0, 30.0],
    [0.6, 0.6, 0.6],
    [-2.2720, -15.1148, -38.3064],
    [1.0, 1.0, 1.0],
];

/// Orthonormal factor family of example 1: the polar factor (nearest
/// orthonormal matrix) of the four-decimal published columns. The raw
/// columns have mutual inner products around 5e-5, which no orthogonal
/// decomposition tolerates, so the fixture snaps them to the closest
/// exactly-orthonormal family.
pub fn ex1_basis() -> Vec<Vec<f64>> {
    let columns: Vec<Vec<f64>> = (0..3)
        .map(|c| (0..3).map(|r| EX1_PRINTED_V[r][c]).collect())
        .collect();
    linalg::polar_orthonormalize(&columns)
}

pub fn ex1_tensor() -> SymTensor {
    SymTensor::rank_one_sum(3, &EX1_LAMBDA, &ex1_basis())
}

/// Example system 2: order 4, dimension 2, published as four 2×2 slices
/// (entries exact to four decimals and exactly supersymmetric).
pub const EX2_SLICE_11: [[f64; 2]; 2] = [[0.2285, 0.0376], [0.0376, 0.2243]];
pub const EX2_SLICE_12: [[f64; 2]; 2] = [[0.0376, 0.2243], [0.2243, 0.0124]];
pub const EX2_SLICE_22: [[f64; 2]; 2] = [[0.2243, 0.0124], [0.0124, 0.2229]];

/// The published square unfolding of example 2.
pub const EX2_UNFOLDED: [[f64; 4]; 4] = [
    [0.2285, 0.0376, 0.0376, 0.2243],
    [0.0376, 0.2243, 0.2243, 0.0124],
    [0.0376, 0.2243, 0.2243, 0.0124],
    [0.2243, 0.0124, 0.0124, 0.2229],
];

pub const EX2_ICS: [[f64; 2]; 4] = [[-1.4, 0.0], [0.9, -0.9], [1.0, 1.0], [1.2, 1.2]];

/// Flat canonical entries (first index fastest) of example 2.
pub fn ex2_entries() -> Vec<f64> {
    let slice = |c: usize, d: usize| -> [[f64; 2]; 2] {
        match (c, d) {
            (0, 0) => EX2_SLICE_11,
            (1, 1) => EX2_SLICE_22,
            _ => EX2_SLICE_12,
        }
    };
    let mut entries = vec![0.0; 16];
    for d in 0..2 {
        for c in 0..2 {
            for b in 0..2 {
                for a in 0..2 {
                    entries[a + 2 * b + 4 * c + 8 * d] = slice(c, d)[a][b];
                }
            }
        }
    }
    entries
}

pub fn ex2_tensor() -> SymTensor {
    SymTensor::certify(4, 2, ex2_entries(), 1e-12).expect("published entries are supersymmetric")
}

/// The subspace-growth example: the symmetrization of e_2∘e_1∘e_1∘e_1
/// driven through the single control direction e_1.
pub fn growth_system() -> ControlledSystem {
    let mut entries = vec![0.0; 16];
    entries[1] = 1.0; // raw entry at 0-based index (1,0,0,0)
    let tensor = SymTensor::certify(4, 2, entries, f64::INFINITY).unwrap();
    ControlledSystem::new(tensor, vec![vec![1.0, 0.0]]).unwrap()
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn mlds_bin() -> &'static str {
    env!("CARGO_BIN_EXE_mlds")
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
