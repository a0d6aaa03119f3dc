//! End-to-end constitutive checks that cross module boundaries:
//! fit -> evaluate -> differentiate consistency on realistic constants.

use approx::assert_relative_eq;
use pneuma_material::{
    equibiaxial_stress, fit_gent_uniaxial, first_invariant, gent_energy, gent_partials,
    uniaxial_stress, GentMaterial, PrincipalStretches,
};

#[test]
fn fitted_material_reproduces_the_generating_curve() {
    let truth = GentMaterial::new(31.7e3, 39.6).unwrap();
    let data: Vec<(f64, f64)> = (0..40)
        .map(|k| {
            let l = 1.05 + 2.0 * k as f64 / 39.0;
            (l, uniaxial_stress(l, &truth).unwrap())
        })
        .collect();
    let fit = fit_gent_uniaxial(&data).unwrap();
    // The fitted material must reproduce stresses well beyond the sampled
    // stretches, not just the fitted constants.
    for l in [1.2, 1.8, 2.5, 3.2] {
        assert_relative_eq!(
            uniaxial_stress(l, &fit.material).unwrap(),
            uniaxial_stress(l, &truth).unwrap(),
            max_relative = 1e-3
        );
    }
}

#[test]
fn stiff_limiter_dominates_elastic_response() {
    // The strain-limiter constants must produce a much stiffer response than
    // the elastic membrane at identical stretch; this ordering is what makes
    // ring segments act as limiters in the membrane solver.
    let elastic = GentMaterial::new(31.7e3, 39.6).unwrap();
    let limiter = GentMaterial::new(1.0e6, 25.0).unwrap();
    for l in [1.05, 1.2, 1.5, 2.0] {
        let soft = equibiaxial_stress(l, &elastic).unwrap();
        let stiff = equibiaxial_stress(l, &limiter).unwrap();
        assert!(stiff > 10.0 * soft, "limiter must dominate at l = {l}");
    }
}

#[test]
fn energy_partials_and_stresses_tell_one_story() {
    // Along the equibiaxial path l1 = l2 = l, the membrane stress resultant
    // computed from W1 must equal the equibiaxial Cauchy stress divided by l
    // (thickness-normalised): sigma11 = l/2 * dW/dl = l/2 * (W1 + W2) = l*W1.
    let m = GentMaterial::new(31.7e3, 39.6).unwrap();
    for l in [1.1, 1.4, 1.9] {
        let p = gent_partials(l, l, &m).unwrap();
        assert_relative_eq!(p.w1, p.w2, max_relative = 1e-12);
        assert_relative_eq!(
            l * p.w1,
            equibiaxial_stress(l, &m).unwrap(),
            max_relative = 1e-10
        );
    }
}

#[test]
fn invariant_floor_under_incompressibility() {
    // I1 >= 3 over a swept family of admissible biaxial states.
    for i in 0..50 {
        for j in 0..50 {
            let l1 = 0.5 + 2.0 * i as f64 / 49.0;
            let l2 = 0.5 + 2.0 * j as f64 / 49.0;
            let s = PrincipalStretches::biaxial(l1, l2).unwrap();
            assert!(first_invariant(&s) >= 3.0 - 1e-12);
        }
    }
}

#[test]
fn guarded_states_error_instead_of_overflowing() {
    let m = GentMaterial::new(31.7e3, 39.6).unwrap();
    // A violently over-stretched state must produce a lock-up error, never a
    // non-finite energy.
    let s = PrincipalStretches::equibiaxial(10.0).unwrap();
    assert!(gent_energy(&s, &m).is_err());
    assert!(uniaxial_stress(50.0, &m).is_err());
    assert!(gent_partials(10.0, 10.0, &m).is_err());
}
