use pps_relax_web::{concurrence_rows, death_time, population_rows, wigner_values, MAX_POINTS};

#[test]
fn population_rows_layout() {
    let rows = population_rows("basis11", "alpha", 10.0, 1.0, &[]).unwrap();
    assert_eq!(rows.len(), 11 * 7);
    // t = 0: the pure |11⟩ state with α = ε.
    for (got, want) in rows[0..5].iter().zip([0.0, 0.0, 0.0, 0.0, 1.0]) {
        assert!((got - want).abs() < 1e-12);
    }
    assert!((rows[5] - 1.0).abs() < 1e-12);
    assert_eq!(rows[6], 1.0);
    for row in rows.chunks_exact(7) {
        let total: f64 = row[1..5].iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}

#[test]
fn fixed_normalization_flags_invalid_samples() {
    let rows = population_rows("basis11", "fixed_initial", 60.0, 1.0, &[]).unwrap();
    assert!(rows.chunks_exact(7).any(|r| r[6] == 0.0));
}

#[test]
fn concurrence_dies_at_frozen_time() {
    let curve = concurrence_rows(20.0, 0.01, &[]).unwrap();
    assert!((death_time(&curve) - 9.02).abs() < 0.005);
    assert!(death_time(&[0.0, 1.0, 1.0, 0.5]).is_nan());
}

#[test]
fn custom_times_change_the_curve() {
    let slow = concurrence_rows(40.0, 0.05, &[4.6, 4.7, 30.0, 20.8, 23.8]).unwrap();
    assert!(death_time(&slow) > 9.1);
}

#[test]
fn wigner_layout() {
    let v = wigner_values("cat", 0.0, &[]).unwrap();
    assert_eq!(v.len(), 64 + 8);
    let marginal_total: f64 = v[64..].iter().sum();
    assert!((marginal_total - 1.0).abs() < 1e-12);
    // Row q = 0 of the cat state is uniform and positive.
    assert!(v[..8].iter().all(|&x| (x - 0.0625).abs() < 1e-12));
}

#[test]
fn bad_requests_are_errors() {
    assert!(population_rows("basis22", "alpha", 10.0, 1.0, &[]).is_err());
    assert!(population_rows("cat", "sometimes", 10.0, 1.0, &[]).is_err());
    assert!(population_rows("cat", "alpha", 10.0, 1.0, &[1.0, 2.0]).is_err());
    assert!(population_rows("cat", "alpha", 10.0, 10.0 / (2.0 * MAX_POINTS as f64), &[]).is_err());
    assert!(concurrence_rows(10.0, 0.0, &[]).is_err());
    assert!(wigner_values("cat", -1.0, &[]).is_err());
}
