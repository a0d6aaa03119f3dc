use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::SurrogateConfig;
use crate::error::SurrogateError;
use crate::features::TrainingData;
use crate::model::SurrogateModel;
use crate::network::{
    backward, coefficient_slope, coefficients_from_raw, force_from_coefficients, forward, NetInput,
    Scratch, WeightLayout,
};

/// Result of a training run.
#[derive(Debug, Clone)]
pub struct TrainedSurrogate {
    pub model: SurrogateModel,
    /// Training loss of the returned weights (group-balanced mean squared
    /// error, in squared newtons).
    pub final_loss: f64,
}

/// Cross-validation summary: one RMSE per fold (newtons) and their mean.
#[derive(Debug, Clone, PartialEq)]
pub struct KfoldReport {
    pub fold_rmse: Vec<f64>,
    pub mean_rmse: f64,
}

/// One compiled training batch: standardized inputs, per-row loss weights,
/// and optional per-row raw-coefficient offsets.
struct Batch {
    inputs: Vec<NetInput>,
    pressures: Vec<f64>,
    targets: Vec<f64>,
    /// Per-row weight `1 / (group_count * group_size)`, so every
    /// (membrane, height) test contributes equally to the loss no matter
    /// how many samples were logged for it.
    row_weights: Vec<f64>,
    n_coeffs: usize,
    offsets: Option<Vec<f64>>,
}

impl Batch {
    fn offset_row(&self, row: usize) -> Option<&[f64]> {
        self.offsets
            .as_ref()
            .map(|o| &o[row * self.n_coeffs..(row + 1) * self.n_coeffs])
    }
}

fn build_batch(
    data: &TrainingData,
    model: &SurrogateModel,
    offsets: Option<&[f64]>,
) -> Result<Batch, SurrogateError> {
    if data.is_empty() {
        return Err(SurrogateError::EmptyTrainingSet);
    }
    let n_coeffs = model.coefficient_count();
    if let Some(o) = offsets {
        let expected = data.row_count() * n_coeffs;
        if o.len() != expected {
            return Err(SurrogateError::InvalidArgument {
                name: "offsets",
                detail: format!("expected {} values, got {}", expected, o.len()),
            });
        }
        if let Some(bad) = o.iter().find(|x| !x.is_finite()) {
            return Err(SurrogateError::InvalidArgument {
                name: "offsets",
                detail: format!("non-finite offset {bad}"),
            });
        }
    }
    // Group rows by (membrane, height) to balance the loss across tests.
    let mut group_sizes: std::collections::HashMap<(usize, u64), usize> =
        std::collections::HashMap::new();
    for row in data.rows() {
        *group_sizes
            .entry((row.design_index, row.height_mm.to_bits()))
            .or_insert(0) += 1;
    }
    let group_count = group_sizes.len();
    let designs = data.designs();
    let mut inputs = Vec::with_capacity(data.row_count());
    let mut pressures = Vec::with_capacity(data.row_count());
    let mut targets = Vec::with_capacity(data.row_count());
    let mut row_weights = Vec::with_capacity(data.row_count());
    for row in data.rows() {
        inputs.push(model.net_input(&designs[row.design_index], row.height_mm));
        pressures.push(row.pressure_kpa);
        targets.push(row.force_n);
        let n_g = group_sizes[&(row.design_index, row.height_mm.to_bits())];
        row_weights.push(1.0 / (group_count as f64 * n_g as f64));
    }
    Ok(Batch {
        inputs,
        pressures,
        targets,
        row_weights,
        n_coeffs,
        offsets: offsets.map(<[f64]>::to_vec),
    })
}

/// Loss (and, when `grad` is given, its gradient accumulated in place)
/// over one batch, evaluated sequentially in row order so results are
/// bit-reproducible.
fn batch_loss(
    weights: &[f64],
    layout: &WeightLayout,
    batch: &Batch,
    scratch: &mut Scratch,
    coeff_buf: &mut [f64],
    d_raw_buf: &mut [f64],
    mut grad: Option<&mut [f64]>,
) -> f64 {
    if let Some(g) = grad.as_deref_mut() {
        g.fill(0.0);
    }
    let mut loss = 0.0;
    for row in 0..batch.inputs.len() {
        let input = &batch.inputs[row];
        forward(weights, layout, input, batch.offset_row(row), scratch);
        let raw: &[f64] = scratch.raw_out();
        coefficients_from_raw(raw, coeff_buf);
        let p = batch.pressures[row];
        let force = force_from_coefficients(coeff_buf, p);
        let residual = force - batch.targets[row];
        let w_row = batch.row_weights[row];
        loss += w_row * residual * residual;
        let Some(g) = grad.as_deref_mut() else {
            continue;
        };
        // The clamp has zero slope where the polynomial is negative.
        let mut poly = 0.0;
        let mut power = 1.0;
        for &a in coeff_buf.iter() {
            poly += a * power;
            power *= p;
        }
        if poly <= 0.0 {
            continue;
        }
        let d_force = 2.0 * w_row * residual;
        let mut power = 1.0;
        for k in 0..batch.n_coeffs {
            d_raw_buf[k] = d_force * power * coefficient_slope(raw[k], k);
            power *= p;
        }
        backward(weights, layout, input, scratch, d_raw_buf, g);
    }
    loss
}

/// Training loss of a model on a dataset (using the model's own feature
/// normalization), without touching its weights.
pub fn training_loss(
    model: &SurrogateModel,
    data: &TrainingData,
) -> Result<f64, SurrogateError> {
    let batch = build_batch(data, model, None)?;
    let mut scratch = Scratch::for_layout(&model.layout);
    let mut coeffs = vec![0.0; batch.n_coeffs];
    let mut d_raw = vec![0.0; batch.n_coeffs];
    Ok(batch_loss(
        model.weights(),
        &model.layout,
        &batch,
        &mut scratch,
        &mut coeffs,
        &mut d_raw,
        None,
    ))
}

/// Training loss and its gradient with respect to every model parameter.
pub fn training_loss_gradient(
    model: &SurrogateModel,
    data: &TrainingData,
) -> Result<(f64, Vec<f64>), SurrogateError> {
    let batch = build_batch(data, model, None)?;
    let mut scratch = Scratch::for_layout(&model.layout);
    let mut coeffs = vec![0.0; batch.n_coeffs];
    let mut d_raw = vec![0.0; batch.n_coeffs];
    let mut grad = vec![0.0; model.weight_count()];
    let loss = batch_loss(
        model.weights(),
        &model.layout,
        &batch,
        &mut scratch,
        &mut coeffs,
        &mut d_raw,
        Some(&mut grad),
    );
    Ok((loss, grad))
}

/// Trains a surrogate on the given data with seeded full-batch Adam and a
/// geometric learning-rate decay. Deterministic: the same data, config,
/// and seed give bit-identical weights.
pub fn train(
    data: &TrainingData,
    config: &SurrogateConfig,
) -> Result<TrainedSurrogate, SurrogateError> {
    train_with_offsets(data, config, None)
}

/// Trains directly from a lift dataset (flattening trials to rows first).
pub fn train_dataset(
    dataset: &pneuma_data::LiftDataset,
    config: &SurrogateConfig,
) -> Result<TrainedSurrogate, SurrogateError> {
    let data = TrainingData::from_dataset(dataset)?;
    train(&data, config)
}

/// Like [`train`], but adds fixed per-row offsets to the raw coefficient
/// outputs during training. Offsets are laid out row-major,
/// `row_count * (degree + 1)` values. This is the hook an ensemble uses to
/// train a member against a frozen companion network whose contribution is
/// superposed at the raw-coefficient level.
pub fn train_with_offsets(
    data: &TrainingData,
    config: &SurrogateConfig,
    offsets: Option<&[f64]>,
) -> Result<TrainedSurrogate, SurrogateError> {
    config.validate()?;
    if data.is_empty() {
        return Err(SurrogateError::EmptyTrainingSet);
    }
    let norm = data.fit_normalization();
    let mut model = SurrogateModel::initialized(config.clone(), norm, config.seed)?;
    let batch = build_batch(data, &model, offsets)?;
    let layout = model.layout.clone();
    let n = model.weight_count();
    let mut scratch = Scratch::for_layout(&layout);
    let mut coeffs = vec![0.0; batch.n_coeffs];
    let mut d_raw = vec![0.0; batch.n_coeffs];
    let mut grad = vec![0.0; n];
    // Adam state.
    let (beta1, beta2, eps) = (0.9_f64, 0.999_f64, 1e-8);
    let mut m1 = vec![0.0; n];
    let mut m2 = vec![0.0; n];
    for t in 0..config.iterations {
        batch_loss(
            model.weights(),
            &layout,
            &batch,
            &mut scratch,
            &mut coeffs,
            &mut d_raw,
            Some(&mut grad),
        );
        let lr = config.learning_rate(t);
        let bc1 = 1.0 - beta1.powi(t as i32 + 1);
        let bc2 = 1.0 - beta2.powi(t as i32 + 1);
        let w = model.weights_mut();
        for i in 0..n {
            m1[i] = beta1 * m1[i] + (1.0 - beta1) * grad[i];
            m2[i] = beta2 * m2[i] + (1.0 - beta2) * grad[i] * grad[i];
            let mhat = m1[i] / bc1;
            let vhat = m2[i] / bc2;
            w[i] -= lr * mhat / (vhat.sqrt() + eps);
        }
    }
    let final_loss = batch_loss(
        model.weights(),
        &layout,
        &batch,
        &mut scratch,
        &mut coeffs,
        &mut d_raw,
        None,
    );
    Ok(TrainedSurrogate { model, final_loss })
}

/// Derives a per-fold training seed from the master seed.
fn fold_seed(master: u64, fold: usize) -> u64 {
    master ^ (fold as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Membrane-level k-fold cross-validation: membranes (never individual
/// samples) are shuffled and dealt round-robin into `k` folds, one model
/// is trained per fold on the remaining membranes, and each fold's plain
/// per-sample RMSE on its held-out membranes is reported. `k` equal to the
/// number of membranes is leave-one-membrane-out. Folds train in parallel.
pub fn kfold_rmse(
    data: &TrainingData,
    k: usize,
    config: &SurrogateConfig,
) -> Result<KfoldReport, SurrogateError> {
    config.validate()?;
    if data.is_empty() {
        return Err(SurrogateError::EmptyTrainingSet);
    }
    let n_membranes = data.membrane_count();
    if k < 2 || k > n_membranes {
        return Err(SurrogateError::InvalidArgument {
            name: "k",
            detail: format!(
                "need 2 <= k <= membrane count ({n_membranes}), got {k}; held-out folds must \
                 contain whole membranes the model never saw"
            ),
        });
    }
    // Seeded shuffle, then deal membranes round-robin into folds.
    let mut order: Vec<usize> = (0..n_membranes).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for i in (1..order.len()).rev() {
        let j = rng.random_range(0..=i);
        order.swap(i, j);
    }
    let mut fold_of = vec![0usize; n_membranes];
    for (pos, &membrane) in order.iter().enumerate() {
        fold_of[membrane] = pos % k;
    }
    let fold_rmse: Vec<f64> = (0..k)
        .into_par_iter()
        .map(|fold| -> Result<f64, SurrogateError> {
            let train_mask: Vec<bool> = fold_of.iter().map(|&f| f != fold).collect();
            let test_mask: Vec<bool> = fold_of.iter().map(|&f| f == fold).collect();
            let train_set = data.subset(&train_mask);
            let test_set = data.subset(&test_mask);
            let mut fold_config = config.clone();
            fold_config.seed = fold_seed(config.seed, fold);
            let trained = train(&train_set, &fold_config)?;
            let mut ev = trained.model.evaluator();
            let designs = test_set.designs();
            let mut sq_sum = 0.0;
            for row in test_set.rows() {
                let f = ev.predict_force(&designs[row.design_index], row.height_mm, row.pressure_kpa);
                let r = f - row.force_n;
                sq_sum += r * r;
            }
            Ok((sq_sum / test_set.row_count() as f64).sqrt())
        })
        .collect::<Result<_, _>>()?;
    let mean_rmse = fold_rmse.iter().sum::<f64>() / k as f64;
    Ok(KfoldReport {
        fold_rmse,
        mean_rmse,
    })
}
