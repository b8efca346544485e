//! The shipped fixture files must stay bit-identical to what the in-crate
//! constructors produce. Regenerate with
//! `MLDS_REGEN_FIXTURES=1 cargo test -p mlds-cli --test fixtures`.

mod common;

use mlds_cli::formats::{write_json, SystemFile, TensorFile};

fn check_or_regen(name: &str, file: &TensorFile) {
    let path = common::fixture_path(name);
    if std::env::var("MLDS_REGEN_FIXTURES").is_ok() {
        write_json(&path, file).unwrap();
        eprintln!("regenerated {}", path.display());
        return;
    }
    let shipped: TensorFile = mlds_cli::formats::read_json(&path)
        .unwrap_or_else(|e| panic!("missing or unreadable fixture {name}: {e}"));
    assert_eq!(shipped.format, file.format);
    assert_eq!(shipped.order, file.order);
    assert_eq!(shipped.dim, file.dim);
    assert_eq!(
        shipped.entries, file.entries,
        "{name} drifted from the generating code; regenerate with MLDS_REGEN_FIXTURES=1"
    );
}

#[test]
fn example1_fixture_matches_generator() {
    check_or_regen(
        "example1.json",
        &TensorFile::from_tensor(&common::ex1_tensor()),
    );
}

#[test]
fn example1_norm_identities() {
    // exactly-orthonormal factors make ‖A‖² = Σλ² = 0.8204, and the mode
    // singular values square-sum to the same for every mode
    let t = common::ex1_tensor();
    let want = 0.8204_f64.sqrt();
    assert!((t.frobenius_norm() - want).abs() < 1e-6);
    for p in 0..3 {
        let sum: f64 = t
            .mode_singular_values(p)
            .unwrap()
            .iter()
            .map(|s| s * s)
            .sum();
        assert!((sum - 0.8204).abs() < 1e-6, "mode {p}: {sum}");
    }
}

#[test]
fn example1_factors_are_certified_eigenpairs() {
    let t = common::ex1_tensor();
    let basis = common::ex1_basis();
    let pair = mlds_core::spectral::certify_zeigenpair(&t, 0.9, &basis[0], 1e-6).unwrap();
    assert!(pair.residual < 1e-12);
    // a mismatched eigenvalue/vector pairing is rejected
    assert!(matches!(
        mlds_core::spectral::certify_zeigenpair(&t, 0.9, &basis[1], 1e-6),
        Err(mlds_core::spectral::SpectralError::ResidualTooLarge { .. })
    ));
}

#[test]
fn example1_closed_form_tracks_iteration_on_the_plateau() {
    // the near-unit certificate of the third initial condition makes long
    // horizons numerically delicate; the closed form and brute iteration
    // must still agree
    use rand_chacha::rand_core::SeedableRng;
    let t = common::ex1_tensor();
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(0);
    let dec = mlds_core::spectral::odeco_decompose(&t, &Default::default(), &mut rng).unwrap();
    let ic = common::EX1_ICS[2];
    let opts = mlds_core::dynamics::SimulationOptions {
        horizon: 10,
        ..Default::default()
    };
    let traj = mlds_core::dynamics::simulate(&t, &ic, opts).unwrap();
    let closed = mlds_core::dynamics::explicit_solution(&dec, &ic, 10).unwrap();
    let closed_norm = common::norm(&closed);
    let iter_norm = traj.norm_at(10).unwrap();
    assert!(
        (closed_norm - iter_norm).abs() <= 1e-8 * iter_norm,
        "{closed_norm} vs {iter_norm}"
    );
}

#[test]
fn example2_fixture_matches_generator() {
    check_or_regen(
        "example2.json",
        &TensorFile::from_tensor(&common::ex2_tensor()),
    );
}

#[test]
fn static_fixtures_parse_and_validate() {
    let f: TensorFile = mlds_cli::formats::read_json(&common::fixture_path("diagonal_521.json"))
        .expect("diagonal fixture readable");
    let t = f.into_tensor(None).unwrap();
    assert_eq!((t.order(), t.dim()), (3, 3));
    assert_eq!(t.get(&[0, 0, 0]), 5.0);
    assert_eq!(t.get(&[1, 1, 1]), 2.0);
    assert_eq!(t.get(&[2, 2, 2]), 1.0);
    assert_eq!(t.get(&[0, 1, 2]), 0.0);

    let f: SystemFile = mlds_cli::formats::read_json(&common::fixture_path("growth_system.json"))
        .expect("growth system fixture readable");
    let sys = f.into_system(None).unwrap();
    assert_eq!(sys.tensor().order(), 4);
    assert_eq!(sys.tensor().dim(), 2);
    // the symmetrized transfer entry
    assert!((sys.tensor().get(&[1, 0, 0, 0]) - 0.25).abs() < 1e-15);
    assert_eq!(sys.controls().len(), 1);

    // round-trip: the in-memory growth system equals the fixture's
    let built = common::growth_system();
    assert_eq!(built.tensor().entries(), sys.tensor().entries());
    assert_eq!(built.controls(), sys.controls());
}
