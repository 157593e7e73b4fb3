//! Property tests for the spectral operators and the exponent algebra.

use num_complex::Complex64;
use proptest::prelude::*;

use nsdamp::decay::{
    bootstrap_exponents, exponent_catalog, exponent_thm_gnse, exponent_thm_nse, fit_power_law,
    PriorResult,
};
use nsdamp::heat::{evolve_box, lq_bound_exponent};
use nsdamp::spectral::{
    dealias, fractional_laplacian, leray_project, norms, FracDirection, GridSpec, PhysicalParams,
    SpectralVectorField,
};

const N: usize = 8;

/// A random real-valued (conjugate-symmetric) vector field on an 8^3 grid,
/// built from a handful of seeded mode pairs.
fn random_field() -> impl Strategy<Value = SpectralVectorField> {
    let mode = (
        0usize..3,
        -3i64..=3,
        -3i64..=3,
        -3i64..=3,
        -1.0f64..1.0,
        -1.0f64..1.0,
    );
    proptest::collection::vec(mode, 1..12).prop_map(|modes| {
        let grid = GridSpec::cubic(N).unwrap();
        let mut f = SpectralVectorField::zeros(grid);
        for (comp, jx, jy, jz, re, im) in modes {
            let j = [jx, jy, jz];
            if j == [0, 0, 0] {
                continue;
            }
            f.set_mode_pair(comp, j, Complex64::new(re, im)).unwrap();
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn leray_projection_is_idempotent_and_divergence_free(f in random_field()) {
        let p = leray_project(&f);
        let pp = leray_project(&p);
        let scale = p.max_coeff_magnitude();
        prop_assert!(pp.checked_sub(&p).unwrap().max_coeff_magnitude() <= 1e-12 * scale.max(1e-300));
        let (div, max) = p.divergence_defect();
        prop_assert!(div <= 1e-12 * max.max(1e-300));
    }

    #[test]
    fn fractional_laplacian_composes_additively(
        f in random_field(),
        a1 in 0.1f64..1.5,
        a2 in 0.1f64..1.5,
    ) {
        let two = fractional_laplacian(
            &fractional_laplacian(&f, a1, FracDirection::Apply).unwrap(),
            a2,
            FracDirection::Apply,
        ).unwrap();
        let one = fractional_laplacian(&f, a1 + a2, FracDirection::Apply).unwrap();
        let scale = one.max_coeff_magnitude();
        prop_assert!(two.checked_sub(&one).unwrap().max_coeff_magnitude() <= 1e-12 * scale.max(1e-300));
    }

    #[test]
    fn parseval_quadrature_consistency(f in random_field()) {
        // beta = 1 evaluates the physical-space L^2 quadrature
        let p = PhysicalParams::new(1.0, 1.0, 1.0).unwrap();
        let n = norms(&f, &p);
        prop_assert!((n.l2 - n.l_beta_plus_1).abs() <= 1e-10 * n.l2.max(1e-300));
    }

    #[test]
    fn operations_preserve_conjugate_symmetry(f in random_field(), t in 0.0f64..3.0) {
        let ops: Vec<SpectralVectorField> = vec![
            leray_project(&f),
            dealias(&f),
            fractional_laplacian(&f, 0.7, FracDirection::Apply).unwrap(),
            evolve_box(&f, 0.9, t).unwrap(),
        ];
        for g in ops {
            let defect = g.conjugate_symmetry_defect();
            prop_assert!(defect <= 1e-13 * g.max_coeff_magnitude().max(1e-300));
        }
    }

    #[test]
    fn evolve_box_semigroup_property(f in random_field(), t1 in 0.0f64..2.0, t2 in 0.0f64..2.0) {
        let split = evolve_box(&evolve_box(&f, 0.8, t1).unwrap(), 0.8, t2).unwrap();
        let joint = evolve_box(&f, 0.8, t1 + t2).unwrap();
        let scale = f.max_coeff_magnitude();
        prop_assert!(split.checked_sub(&joint).unwrap().max_coeff_magnitude() <= 1e-13 * scale.max(1e-300));
    }

    #[test]
    fn theorem_exponents_monotone_in_beta(
        alpha in 0.05f64..1.2499,
        b1 in 1.0f64..10.0,
        db in 0.0f64..5.0,
    ) {
        let lo = exponent_thm_gnse(alpha, b1).unwrap();
        let hi = exponent_thm_gnse(alpha, b1 + db).unwrap();
        prop_assert!(hi >= lo);
        let lo1 = exponent_thm_nse(b1).unwrap();
        let hi1 = exponent_thm_nse(b1 + db).unwrap();
        prop_assert!(hi1 >= lo1);
    }

    #[test]
    fn theorem_exponent_continuous_at_branch_point(alpha in 0.05f64..1.2499) {
        let branch = (3.0 + 2.0 * alpha) / 3.0;
        let eps = 1e-9;
        let below = exponent_thm_gnse(alpha, branch - eps).unwrap();
        let above = exponent_thm_gnse(alpha, branch + eps).unwrap();
        prop_assert!((below - above).abs() <= 1e-7);
    }

    #[test]
    fn bootstrap_matches_theorem_everywhere(
        alpha in 0.05f64..1.2499,
        beta in 1.0f64..12.0,
    ) {
        let trace = bootstrap_exponents(alpha, beta, 16).unwrap();
        let theorem = exponent_thm_gnse(alpha, beta).unwrap();
        prop_assert!((trace.fixed_point - theorem).abs() <= 1e-12);
        prop_assert!(trace.converged_at <= 3);
        // the u-exponent sequence never decreases
        for w in trace.iterates.windows(2) {
            prop_assert!(w[1].u_exponent >= w[0].u_exponent);
        }
    }

    #[test]
    fn newer_rate_dominates_older_where_both_apply(beta in 2.3334f64..12.0) {
        let new = exponent_thm_nse(beta).unwrap();
        let old = exponent_catalog(PriorResult::CaiLei { beta }).unwrap();
        prop_assert!(new >= old);
    }

    #[test]
    fn smoothing_exponent_monotone(
        alpha in 0.1f64..2.0,
        r in 1.0f64..3.0,
        dq in 0.0f64..4.0,
        mu in 0.0f64..3.0,
        dmu in 0.0f64..2.0,
    ) {
        let q = r + dq;
        let base = lq_bound_exponent(alpha, r, q, mu).unwrap();
        // more derivatives decay faster (more negative exponent)
        let more_mu = lq_bound_exponent(alpha, r, q, mu + dmu).unwrap();
        prop_assert!(more_mu <= base);
        // widening the integrability gap decays faster
        let wider = lq_bound_exponent(alpha, r, q + 1.0, mu).unwrap();
        prop_assert!(wider <= base);
    }

    #[test]
    fn power_law_fit_is_scale_invariant(
        sigma in 0.1f64..4.0,
        scale in 1e-6f64..1e6,
    ) {
        let times: Vec<f64> = (0..80).map(|i| 5.0 * 1.08f64.powi(i)).collect();
        let base: Vec<f64> = times.iter().map(|t| (1.0 + t).powf(-sigma)).collect();
        let scaled: Vec<f64> = base.iter().map(|v| v * scale).collect();
        let f1 = fit_power_law(&times, &base, (5.0, 1e3)).unwrap();
        let f2 = fit_power_law(&times, &scaled, (5.0, 1e3)).unwrap();
        prop_assert!((f1.exponent - f2.exponent).abs() <= 1e-9);
        prop_assert!((f1.exponent + sigma).abs() <= 1e-6);
    }
}
