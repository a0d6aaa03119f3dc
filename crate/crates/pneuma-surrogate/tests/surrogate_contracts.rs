//! Contract tests for the lift-force surrogate: recovery of a known
//! monotone family, test-weighting invariance, gradient correctness
//! against finite differences, determinism, and the structural guarantees
//! (ring-slot symmetry, pressure monotonicity, nonnegativity, clamping).

use pneuma_data::DesignVector;
use pneuma_surrogate::{
    encode_rings, kfold_rmse, load_model, save_model, train, training_loss,
    training_loss_gradient, Normalization, SurrogateConfig, SurrogateError, SurrogateModel,
    TrainingData,
};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Held-out RMSE must beat this fraction of the training force range.
const HELD_OUT_RMSE_FRACTION: f64 = 0.05;
/// Duplicating one membrane's samples tenfold may shift held-out RMSE by
/// at most this fraction of the force range.
const DUPLICATION_RMSE_SHIFT_FRACTION: f64 = 0.02;
/// Loss-gradient agreement with centered finite differences.
const GRADIENT_RELATIVE_TOL: f64 = 1e-4;
const GRADIENT_ABSOLUTE_FLOOR: f64 = 1e-10;

/// A hand-picked monotone ground truth: an affine-in-pressure force law
/// whose coefficients depend smoothly on the design and height, clamped
/// at zero like the real rig (no force until the membrane reaches the
/// plate).
fn family_force(d: &DesignVector, height_mm: f64, pressure_kpa: f64) -> f64 {
    let mut slope = 0.30 + 0.12 * d.thickness_mm + 0.015 * d.contact_radius_mm;
    for ring in [&d.ring1, &d.ring2].into_iter().flatten() {
        slope += 0.004 * ring.radius_mm + 0.03 * ring.width_mm;
    }
    let intercept = 1.0 + 0.05 * d.contact_radius_mm - 0.04 * height_mm;
    (intercept + slope * pressure_kpa).max(0.0)
}

/// Held-out designs come first (indices 0 and 1): one ringed, one
/// ringless, both inside the training coverage in every coordinate. The
/// ringed training designs walk a small grid over the ring box so the
/// held-out ring combination is interpolated, never extrapolated.
fn family_designs() -> Vec<DesignVector> {
    let mut designs = vec![
        DesignVector::with_rings(28.0, 2.0, (40.0, 4.0), (55.0, 3.0)),
        DesignVector::ringless(34.0, 2.0),
        DesignVector::ringless(25.0, 1.5),
        DesignVector::ringless(28.0, 3.5),
        DesignVector::ringless(31.0, 2.5),
        DesignVector::ringless(37.0, 1.8),
        DesignVector::ringless(40.0, 3.0),
    ];
    let contacts = [25.0, 29.0, 33.0, 37.0, 40.0];
    let thicknesses = [1.5, 2.2, 2.9, 3.5];
    let mut i = 0usize;
    for r1 in [38.0, 43.0, 48.0] {
        for w1 in [3.0, 6.0] {
            for (r2, w2) in [(52.0, 6.0), (58.0, 3.0)] {
                designs.push(DesignVector::with_rings(
                    contacts[i % contacts.len()],
                    thicknesses[i % thicknesses.len()],
                    (r1, w1),
                    (r2, w2),
                ));
                i += 1;
            }
        }
    }
    designs
}

fn family_rows(design: &DesignVector) -> Vec<(f64, f64, f64)> {
    let mut rows = Vec::new();
    for height in [20.0, 35.0, 50.0] {
        for j in 0..=8 {
            let p = j as f64;
            rows.push((height, p, family_force(design, height, p)));
        }
    }
    rows
}

/// Splits the family into (train, held-out-designs) sets; `duplicate`
/// repeats the first training membrane's rows that many times to test
/// weighting invariance.
fn family_split(duplicate: usize) -> (TrainingData, Vec<DesignVector>) {
    let designs = family_designs();
    let held_out_indices = [0usize, 1usize];
    let mut data = TrainingData::new();
    let mut held_out = Vec::new();
    let mut first_train_done = false;
    for (i, design) in designs.iter().enumerate() {
        if held_out_indices.contains(&i) {
            held_out.push(design.clone());
            continue;
        }
        let mut rows = family_rows(design);
        if !first_train_done {
            let base = rows.clone();
            for _ in 1..duplicate {
                rows.extend_from_slice(&base);
            }
            first_train_done = true;
        }
        data.push_membrane(&format!("m{i:02}"), design.clone(), &rows)
            .unwrap();
    }
    (data, held_out)
}

fn family_force_range() -> f64 {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for d in family_designs() {
        for (_, _, f) in family_rows(&d) {
            min = min.min(f);
            max = max.max(f);
        }
    }
    max - min
}

fn recovery_config() -> SurrogateConfig {
    SurrogateConfig {
        embedding_dim: 6,
        pre_mlp: vec![],
        hidden_layers: 2,
        hidden_width: 12,
        degree: 1,
        iterations: 3000,
        ..SurrogateConfig::default()
    }
}

fn held_out_rmse(model: &SurrogateModel, held_out: &[DesignVector]) -> f64 {
    let mut sq_sum = 0.0;
    let mut n = 0usize;
    for design in held_out {
        for (h, p, f_true) in family_rows(design) {
            let f_hat = model.predict_force(design, h, p);
            sq_sum += (f_hat - f_true) * (f_hat - f_true);
            n += 1;
        }
    }
    (sq_sum / n as f64).sqrt()
}

#[test]
fn synthetic_monotone_family_is_recovered_on_held_out_membranes() {
    let (data, held_out) = family_split(1);
    let trained = train(&data, &recovery_config()).unwrap();
    let rmse = held_out_rmse(&trained.model, &held_out);
    let range = family_force_range();
    assert!(
        rmse < HELD_OUT_RMSE_FRACTION * range,
        "held-out RMSE {rmse:.3} N exceeds {:.3} N ({}% of the {range:.1} N range)",
        HELD_OUT_RMSE_FRACTION * range,
        100.0 * HELD_OUT_RMSE_FRACTION,
    );
}

#[test]
fn tenfold_duplication_of_one_membrane_barely_moves_the_fit() {
    let (data, held_out) = family_split(1);
    let (data_dup, _) = family_split(10);
    let mut config = recovery_config();
    // Invariance of the loss under duplication holds at any training
    // length; a shorter run keeps the comparison cheap.
    config.iterations = 1500;
    let base = held_out_rmse(&train(&data, &config).unwrap().model, &held_out);
    let dup = held_out_rmse(&train(&data_dup, &config).unwrap().model, &held_out);
    let range = family_force_range();
    assert!(
        (base - dup).abs() < DUPLICATION_RMSE_SHIFT_FRACTION * range,
        "RMSE moved from {base:.4} to {dup:.4} N under duplication"
    );
}

fn gradient_check_data() -> TrainingData {
    let mut data = TrainingData::new();
    data.push_membrane(
        "a",
        DesignVector::with_rings(30.0, 2.0, (40.0, 5.0), (55.0, 4.0)),
        &[
            (20.0, 1.0, 3.0),
            (20.0, 3.0, 6.5),
            (20.0, 5.0, 10.0),
            (35.0, 2.0, 4.0),
            (35.0, 6.0, 11.0),
        ],
    )
    .unwrap();
    data.push_membrane(
        "b",
        DesignVector::ringless(26.0, 3.0),
        &[
            (25.0, 1.5, 2.0),
            (25.0, 4.0, 5.0),
            (45.0, 2.5, 1.5),
            (45.0, 5.0, 4.0),
            (45.0, 7.0, 6.5),
        ],
    )
    .unwrap();
    data
}

#[test]
fn loss_gradient_matches_centered_differences_on_frozen_batch() {
    let data = gradient_check_data();
    assert_eq!(data.row_count(), 10);
    let config = SurrogateConfig {
        embedding_dim: 3,
        pre_mlp: vec![],
        hidden_layers: 1,
        hidden_width: 5,
        degree: 2,
        ..SurrogateConfig::default()
    };
    let norm = data.fit_normalization();
    let model = SurrogateModel::initialized(config.clone(), norm.clone(), 17).unwrap();
    let (_, grad) = training_loss_gradient(&model, &data).unwrap();
    let weights = model.weights().to_vec();
    let mut checked = 0usize;
    for i in (0..weights.len()).step_by(3) {
        let step = 1e-6 * (1.0 + weights[i].abs());
        let mut plus = weights.clone();
        plus[i] += step;
        let mut minus = weights.clone();
        minus[i] -= step;
        let loss_plus = training_loss(
            &SurrogateModel::from_parts(config.clone(), norm.clone(), plus).unwrap(),
            &data,
        )
        .unwrap();
        let loss_minus = training_loss(
            &SurrogateModel::from_parts(config.clone(), norm.clone(), minus).unwrap(),
            &data,
        )
        .unwrap();
        let fd = (loss_plus - loss_minus) / (2.0 * step);
        let tol = GRADIENT_RELATIVE_TOL * grad[i].abs().max(fd.abs()) + GRADIENT_ABSOLUTE_FLOOR;
        assert!(
            (grad[i] - fd).abs() <= tol,
            "weight {i}: backprop {:.3e} vs finite difference {:.3e}",
            grad[i],
            fd
        );
        checked += 1;
    }
    assert!(checked >= 20, "checked only {checked} weights");
    assert!(
        grad.iter().any(|g| g.abs() > 1e-6),
        "gradient is numerically zero; the check proved nothing"
    );
}

#[test]
fn same_seed_and_data_reproduce_identical_weights() {
    let (data, _) = family_split(1);
    let mut config = recovery_config();
    config.iterations = 60;
    let a = train(&data, &config).unwrap();
    let b = train(&data, &config).unwrap();
    let bit_equal = a
        .model
        .weights()
        .iter()
        .zip(b.model.weights())
        .all(|(x, y)| x.to_bits() == y.to_bits());
    assert!(bit_equal, "same seed must reproduce weights bit for bit");
    assert_eq!(a.final_loss.to_bits(), b.final_loss.to_bits());
    config.seed = 1;
    let c = train(&data, &config).unwrap();
    assert_ne!(a.model.weights(), c.model.weights());
}

#[test]
fn final_loss_matches_an_independent_loss_evaluation() {
    let (data, _) = family_split(1);
    let mut config = recovery_config();
    config.iterations = 40;
    let trained = train(&data, &config).unwrap();
    let loss = training_loss(&trained.model, &data).unwrap();
    assert_eq!(trained.final_loss.to_bits(), loss.to_bits());
}

#[test]
fn ring_swap_is_bit_exact_at_the_prediction_level() {
    let config = SurrogateConfig {
        embedding_dim: 4,
        hidden_layers: 2,
        hidden_width: 8,
        degree: 2,
        ..SurrogateConfig::default()
    };
    let model = SurrogateModel::initialized(config, Normalization::identity(), 5).unwrap();
    let a = DesignVector::with_rings(30.0, 2.0, (40.0, 5.0), (55.0, 3.0));
    let b = DesignVector::with_rings(30.0, 2.0, (55.0, 3.0), (40.0, 5.0));
    for (h, p) in [(20.0, 0.0), (35.0, 2.5), (50.0, 9.0)] {
        let fa = model.predict_force(&a, h, p);
        let fb = model.predict_force(&b, h, p);
        assert_eq!(fa.to_bits(), fb.to_bits());
    }
    let enc = model.ring_encoder();
    let e1 = encode_rings(Some([40.0, 5.0]), None, &enc);
    let e2 = encode_rings(None, Some([40.0, 5.0]), &enc);
    assert_eq!(e1, e2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// Wherever two pressures are ordered, so are the predicted forces —
    /// for any seeded untrained model and any design.
    #[test]
    fn prediction_is_monotone_in_pressure_and_nonnegative(
        seed in 0u64..1000,
        contact in 20.0f64..45.0,
        thickness in 1.0f64..4.0,
        ringed in any::<bool>(),
        ring_radius in 35.0f64..55.0,
        ring_width in 2.0f64..8.0,
        height in 15.0f64..55.0,
        p_low in 0.0f64..20.0,
        p_delta in 0.0f64..10.0,
    ) {
        let config = SurrogateConfig {
            embedding_dim: 3,
            hidden_layers: 1,
            hidden_width: 4,
            degree: 3,
            ..SurrogateConfig::default()
        };
        let model = SurrogateModel::initialized(config, Normalization::identity(), seed).unwrap();
        let design = if ringed {
            DesignVector::with_rings(contact, thickness, (ring_radius, ring_width), (ring_radius + 6.0, ring_width))
        } else {
            DesignVector::ringless(contact, thickness)
        };
        let f_low = model.predict_force(&design, height, p_low);
        let f_high = model.predict_force(&design, height, p_low + p_delta);
        prop_assert!(f_low >= 0.0);
        prop_assert!(f_high >= 0.0);
        prop_assert!(f_low <= f_high, "F({p_low}) = {f_low} > F({}) = {f_high}", p_low + p_delta);
    }
}

#[test]
fn pressure_derivative_is_nonnegative_at_100_random_points() {
    let config = SurrogateConfig {
        embedding_dim: 4,
        hidden_layers: 2,
        hidden_width: 6,
        degree: 2,
        ..SurrogateConfig::default()
    };
    let model = SurrogateModel::initialized(config, Normalization::identity(), 12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100 {
        let design = DesignVector::with_rings(
            rng.random_range(20.0..45.0),
            rng.random_range(1.0..4.0),
            (rng.random_range(35.0..50.0), rng.random_range(2.0..8.0)),
            (rng.random_range(50.0..62.0), rng.random_range(2.0..8.0)),
        );
        let h = rng.random_range(15.0..55.0);
        let p = rng.random_range(0.0..15.0);
        let g = model.force_gradient(&design, h, p);
        assert!(
            g.d_pressure >= 0.0,
            "negative pressure slope {} at p={p}",
            g.d_pressure
        );
    }
}

/// The flat weight vector ends with the output head's bias block — the
/// last `degree + 1` entries — which this test uses to plant raw
/// coefficients directly (the serialized-model layout documents this).
#[test]
fn negative_constant_coefficient_clamps_to_zero_force_at_zero_pressure() {
    let config = SurrogateConfig {
        embedding_dim: 3,
        hidden_layers: 1,
        hidden_width: 4,
        degree: 1,
        ..SurrogateConfig::default()
    };
    let template = SurrogateModel::initialized(config.clone(), Normalization::identity(), 0).unwrap();
    let n = template.weight_count();
    let mut weights = vec![0.0; n];
    weights[n - 2] = -5.0; // constant term: passes through as -5
    weights[n - 1] = 2.0; // slope term: squared to 4
    let model = SurrogateModel::from_parts(config, Normalization::identity(), weights).unwrap();
    let design = DesignVector::ringless(30.0, 2.0);
    let coeffs = model.coefficients(&design, 25.0);
    assert_eq!(coeffs, vec![-5.0, 4.0]);
    assert_eq!(model.predict_force(&design, 25.0, 0.0), 0.0);
    assert_eq!(model.predict_force(&design, 25.0, 1.0), 0.0);
    assert_eq!(model.predict_force(&design, 25.0, 3.0), 7.0);
}

#[test]
fn zeroed_output_head_predicts_zero_everywhere() {
    let config = SurrogateConfig {
        embedding_dim: 4,
        hidden_layers: 2,
        hidden_width: 7,
        degree: 3,
        ..SurrogateConfig::default()
    };
    let template = SurrogateModel::initialized(config.clone(), Normalization::identity(), 4).unwrap();
    let mut weights = template.weights().to_vec();
    // Zero the head: its weight matrix and bias occupy the final
    // (width + 1) * (degree + 1) entries of the flat vector.
    let head_len = (config.hidden_width + 1) * (config.degree + 1);
    let n = weights.len();
    for w in &mut weights[n - head_len..] {
        *w = 0.0;
    }
    let model = SurrogateModel::from_parts(config, Normalization::identity(), weights).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let design = DesignVector::with_rings(
            rng.random_range(20.0..45.0),
            rng.random_range(1.0..4.0),
            (rng.random_range(35.0..50.0), rng.random_range(2.0..8.0)),
            (rng.random_range(50.0..62.0), rng.random_range(2.0..8.0)),
        );
        let f = model.predict_force(
            &design,
            rng.random_range(15.0..55.0),
            rng.random_range(0.0..15.0),
        );
        assert_eq!(f, 0.0);
    }
}

#[test]
fn single_membrane_trains_but_kfold_refuses() {
    let mut data = TrainingData::new();
    data.push_membrane(
        "only",
        DesignVector::ringless(30.0, 2.0),
        &[(20.0, 1.0, 2.0), (20.0, 3.0, 5.0), (20.0, 5.0, 8.0)],
    )
    .unwrap();
    let mut config = SurrogateConfig {
        embedding_dim: 3,
        hidden_layers: 1,
        hidden_width: 4,
        degree: 1,
        iterations: 30,
        ..SurrogateConfig::default()
    };
    train(&data, &config).unwrap();
    config.iterations = 10;
    let err = kfold_rmse(&data, 2, &config).unwrap_err();
    assert!(matches!(
        err,
        SurrogateError::InvalidArgument { name: "k", .. }
    ));
}

#[test]
fn leave_one_membrane_out_reports_one_rmse_per_fold() {
    let (data, _) = family_split(1);
    let config = SurrogateConfig {
        embedding_dim: 4,
        hidden_layers: 1,
        hidden_width: 8,
        degree: 1,
        iterations: 200,
        ..SurrogateConfig::default()
    };
    let k = data.membrane_count();
    let report = kfold_rmse(&data, k, &config).unwrap();
    assert_eq!(report.fold_rmse.len(), k);
    assert!(report.fold_rmse.iter().all(|r| r.is_finite() && *r >= 0.0));
}

#[test]
fn saved_model_reloads_with_identical_predictions() {
    let (data, held_out) = family_split(1);
    let mut config = recovery_config();
    config.iterations = 120;
    let trained = train(&data, &config).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.pnms");
    save_model(&path, &trained.model).unwrap();
    let reloaded = load_model(&path).unwrap();
    for design in &held_out {
        for (h, p, _) in family_rows(design) {
            let a = trained.model.predict_force(design, h, p);
            let b = reloaded.predict_force(design, h, p);
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
