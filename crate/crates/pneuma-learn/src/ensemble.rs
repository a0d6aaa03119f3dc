use pneuma_data::DesignVector;
use pneuma_surrogate::{
    force_from_coefficients, polynomial_coefficients, train_with_offsets, ModelEvaluator,
    SurrogateConfig, SurrogateModel, TrainingData,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::LearnError;

/// Configuration for a randomized-prior ensemble: the shared surrogate
/// architecture, the member count, and the fixed scale applied to each
/// member's frozen companion network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub surrogate: SurrogateConfig,
    pub member_count: usize,
    pub prior_scale: f64,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        EnsembleConfig {
            surrogate: SurrogateConfig::default(),
            member_count: 8,
            prior_scale: 1.0,
        }
    }
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<(), LearnError> {
        self.surrogate.validate()?;
        if self.member_count < 2 {
            return Err(LearnError::InvalidConfig {
                detail: format!(
                    "member_count must be at least 2 (got {}); a single member has zero spread \
                     and carries no uncertainty signal",
                    self.member_count
                ),
            });
        }
        if !(self.prior_scale.is_finite() && self.prior_scale >= 0.0) {
            return Err(LearnError::InvalidConfig {
                detail: format!("prior_scale must be finite and nonnegative, got {}", self.prior_scale),
            });
        }
        Ok(())
    }
}

/// One ensemble member: a trained network plus a frozen, randomly
/// initialized companion of the same architecture. The member's raw
/// coefficient vector is `trainable + prior_scale * prior`, summed before
/// the coefficient map, so the member remains a valid monotone clamped
/// polynomial. The companion is never touched by training; it is what
/// keeps the members disagreeing away from the data.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleMember {
    trainable: SurrogateModel,
    prior: SurrogateModel,
    prior_scale: f64,
}

impl EnsembleMember {
    /// Pairs a trained network with its frozen companion. Both must share
    /// the architecture and feature normalization, or their raw outputs
    /// would not be commensurable.
    pub fn new(
        trainable: SurrogateModel,
        prior: SurrogateModel,
        prior_scale: f64,
    ) -> Result<Self, LearnError> {
        if trainable.weight_count() != prior.weight_count()
            || trainable.coefficient_count() != prior.coefficient_count()
        {
            return Err(LearnError::InvalidArgument {
                name: "prior",
                detail: format!(
                    "companion architecture mismatch: {} weights / {} coefficients vs {} / {}",
                    prior.weight_count(),
                    prior.coefficient_count(),
                    trainable.weight_count(),
                    trainable.coefficient_count()
                ),
            });
        }
        if trainable.normalization() != prior.normalization() {
            return Err(LearnError::InvalidArgument {
                name: "prior",
                detail: "companion feature normalization differs from the trainable network".into(),
            });
        }
        if !(prior_scale.is_finite() && prior_scale >= 0.0) {
            return Err(LearnError::InvalidArgument {
                name: "prior_scale",
                detail: format!("must be finite and nonnegative, got {prior_scale}"),
            });
        }
        Ok(EnsembleMember {
            trainable,
            prior,
            prior_scale,
        })
    }

    /// A member whose companion contributes nothing (zero weights, zero
    /// scale) — handy for hand-built oracles and for wrapping standalone
    /// models.
    pub fn without_prior(model: SurrogateModel) -> Self {
        let prior = SurrogateModel::from_parts(
            model.config().clone(),
            model.normalization().clone(),
            vec![0.0; model.weight_count()],
        )
        .expect("zero weights match the model's own layout");
        EnsembleMember {
            trainable: model,
            prior,
            prior_scale: 0.0,
        }
    }

    pub fn trainable(&self) -> &SurrogateModel {
        &self.trainable
    }

    pub fn prior(&self) -> &SurrogateModel {
        &self.prior
    }

    pub fn prior_scale(&self) -> f64 {
        self.prior_scale
    }

    /// Combined raw coefficient vector at one (design, height).
    pub fn raw_coefficients(&self, design: &DesignVector, height_mm: f64) -> Vec<f64> {
        let mut raw = self.trainable.raw_coefficients(design, height_mm);
        let prior_raw = self.prior.raw_coefficients(design, height_mm);
        for (r, p) in raw.iter_mut().zip(&prior_raw) {
            *r += self.prior_scale * p;
        }
        raw
    }

    /// Member force prediction in newtons.
    pub fn predict_force(&self, design: &DesignVector, height_mm: f64, pressure_kpa: f64) -> f64 {
        let coeffs = polynomial_coefficients(&self.raw_coefficients(design, height_mm));
        force_from_coefficients(&coeffs, pressure_kpa)
    }
}

/// Mean and spread of the member predictions at one query point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsemblePrediction {
    pub mean: f64,
    /// Population standard deviation over members (zero for one member or
    /// perfect agreement).
    pub std: f64,
}

/// A randomized-prior ensemble of lift-force surrogates. The ensemble
/// prediction is the member mean; the member spread is the epistemic
/// uncertainty estimate that drives acquisition.
#[derive(Debug, Clone)]
pub struct SurrogateEnsemble {
    members: Vec<EnsembleMember>,
}

impl SurrogateEnsemble {
    /// Builds an ensemble from explicit members (at least one, all with
    /// the same architecture). A single-member ensemble is degenerate —
    /// its spread is identically zero — but it is accepted so the
    /// degenerate behavior stays observable.
    pub fn from_members(members: Vec<EnsembleMember>) -> Result<Self, LearnError> {
        if members.is_empty() {
            return Err(LearnError::InvalidArgument {
                name: "members",
                detail: "an ensemble needs at least one member".into(),
            });
        }
        let first = &members[0];
        for (i, m) in members.iter().enumerate().skip(1) {
            if m.trainable.weight_count() != first.trainable.weight_count()
                || m.trainable.coefficient_count() != first.trainable.coefficient_count()
            {
                return Err(LearnError::InvalidArgument {
                    name: "members",
                    detail: format!("member {i} architecture differs from member 0"),
                });
            }
        }
        Ok(SurrogateEnsemble { members })
    }

    pub fn members(&self) -> &[EnsembleMember] {
        &self.members
    }

    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    /// Every member's force prediction at one query point.
    pub fn member_forces(
        &self,
        design: &DesignVector,
        height_mm: f64,
        pressure_kpa: f64,
    ) -> Vec<f64> {
        self.members
            .iter()
            .map(|m| m.predict_force(design, height_mm, pressure_kpa))
            .collect()
    }

    /// Mean force and population standard deviation over members.
    pub fn predict(
        &self,
        design: &DesignVector,
        height_mm: f64,
        pressure_kpa: f64,
    ) -> EnsemblePrediction {
        let forces = self.member_forces(design, height_mm, pressure_kpa);
        let mut deviations = vec![0.0; forces.len()];
        let mean = mean_and_deviations(&forces, &mut deviations);
        let var = deviations.iter().map(|d| d * d).sum::<f64>() / forces.len() as f64;
        EnsemblePrediction {
            mean,
            std: var.sqrt(),
        }
    }

    /// A reusable evaluation context over all members (allocation-free
    /// predictions inside optimization loops).
    pub fn evaluator(&self) -> EnsembleEvaluator<'_> {
        EnsembleEvaluator {
            members: self
                .members
                .iter()
                .map(|m| MemberEvaluator {
                    trainable: m.trainable.evaluator(),
                    prior: m.prior.evaluator(),
                    scale: m.prior_scale,
                    coeffs: Vec::new(),
                })
                .collect(),
            forces: vec![0.0; self.members.len()],
            deviations: vec![0.0; self.members.len()],
        }
    }
}

/// Shift-by-first mean and deviations: computing both relative to the
/// first value keeps perfect agreement at exactly zero spread (identical
/// members give literal zeros, not last-ulp residue) and loses no accuracy
/// otherwise.
pub(crate) fn mean_and_deviations(values: &[f64], deviations: &mut [f64]) -> f64 {
    let base = values[0];
    let shifted_mean = values.iter().map(|v| v - base).sum::<f64>() / values.len() as f64;
    for (d, v) in deviations.iter_mut().zip(values) {
        *d = (v - base) - shifted_mean;
    }
    base + shifted_mean
}

struct MemberEvaluator<'a> {
    trainable: ModelEvaluator<'a>,
    prior: ModelEvaluator<'a>,
    scale: f64,
    coeffs: Vec<f64>,
}

impl MemberEvaluator<'_> {
    /// Combined polynomial coefficients at one (design, height); the
    /// result stays valid until the next call.
    fn coefficients(&mut self, design: &DesignVector, height_mm: f64) -> &[f64] {
        let raw_t = self.trainable.raw_coefficients(design, height_mm);
        self.coeffs.clear();
        self.coeffs.extend_from_slice(raw_t);
        let raw_p = self.prior.raw_coefficients(design, height_mm);
        for (c, p) in self.coeffs.iter_mut().zip(raw_p) {
            *c += self.scale * p;
        }
        let combined = polynomial_coefficients(&self.coeffs);
        self.coeffs.copy_from_slice(&combined);
        &self.coeffs
    }
}

/// Reusable member evaluators plus scratch for ensemble statistics.
pub struct EnsembleEvaluator<'a> {
    members: Vec<MemberEvaluator<'a>>,
    forces: Vec<f64>,
    deviations: Vec<f64>,
}

impl EnsembleEvaluator<'_> {
    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    /// Mean force and population std at one query point.
    pub fn predict(
        &mut self,
        design: &DesignVector,
        height_mm: f64,
        pressure_kpa: f64,
    ) -> EnsemblePrediction {
        for (i, member) in self.members.iter_mut().enumerate() {
            let coeffs = member.coefficients(design, height_mm);
            self.forces[i] = force_from_coefficients(coeffs, pressure_kpa);
        }
        let mean = mean_and_deviations(&self.forces, &mut self.deviations);
        let var = self.deviations.iter().map(|d| d * d).sum::<f64>() / self.forces.len() as f64;
        EnsemblePrediction {
            mean,
            std: var.sqrt(),
        }
    }

    /// Accumulates, for every member, the squared deviation from the
    /// ensemble mean summed over the full (height × pressure) grid at one
    /// design; adds into `sums[member]`.
    pub(crate) fn accumulate_grid_deviation_sq(
        &mut self,
        design: &DesignVector,
        heights: &[f64],
        pressures: &[f64],
        sums: &mut [f64],
    ) {
        for &h in heights {
            // Coefficients depend only on (design, height): evaluate once
            // per member per height and sweep pressures on the cheap
            // polynomial.
            let mut coeff_table: Vec<Vec<f64>> = Vec::with_capacity(self.members.len());
            for member in self.members.iter_mut() {
                coeff_table.push(member.coefficients(design, h).to_vec());
            }
            for &p in pressures {
                for (i, coeffs) in coeff_table.iter().enumerate() {
                    self.forces[i] = force_from_coefficients(coeffs, p);
                }
                mean_and_deviations(&self.forces, &mut self.deviations);
                for (s, d) in sums.iter_mut().zip(&self.deviations) {
                    *s += d * d;
                }
            }
        }
    }
}

/// Derives an independent stream seed from a master seed (splitmix-style
/// multiply-xor so nearby streams decorrelate).
pub(crate) fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Trains a randomized-prior ensemble: every member gets its own seeded
/// initialization and its own frozen companion drawn from the same
/// initialization distribution; members train independently in parallel
/// against the companion-shifted raw coefficients. Deterministic given
/// data, config, and the config's master seed.
pub fn train_ensemble(
    data: &TrainingData,
    config: &EnsembleConfig,
) -> Result<SurrogateEnsemble, LearnError> {
    config.validate()?;
    if data.is_empty() {
        return Err(LearnError::Surrogate(
            pneuma_surrogate::SurrogateError::EmptyTrainingSet,
        ));
    }
    let norm = data.fit_normalization();
    let master = config.surrogate.seed;
    let members: Vec<EnsembleMember> = (0..config.member_count)
        .into_par_iter()
        .map(|i| -> Result<EnsembleMember, LearnError> {
            let prior_seed = derive_seed(master, 2 * i as u64 + 1);
            let prior = SurrogateModel::initialized(
                config.surrogate.clone(),
                norm.clone(),
                prior_seed,
            )?;
            // Precompute the frozen companion's contribution on every row.
            let n_coeffs = prior.coefficient_count();
            let mut offsets = Vec::with_capacity(data.row_count() * n_coeffs);
            let mut ev = prior.evaluator();
            let designs = data.designs();
            for row in data.rows() {
                let raw = ev.raw_coefficients(&designs[row.design_index], row.height_mm);
                offsets.extend(raw.iter().map(|r| config.prior_scale * r));
            }
            let mut member_config = config.surrogate.clone();
            member_config.seed = derive_seed(master, 2 * i as u64);
            let trained = train_with_offsets(data, &member_config, Some(&offsets))?;
            EnsembleMember::new(trained.model, prior, config.prior_scale)
        })
        .collect::<Result<_, _>>()?;
    SurrogateEnsemble::from_members(members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pneuma_surrogate::Normalization;

    /// A model predicting a constant force everywhere: zero weights except
    /// the head bias block (the final `degree + 1` entries of the flat
    /// weight vector).
    pub(crate) fn constant_model(force: f64) -> SurrogateModel {
        let config = SurrogateConfig {
            embedding_dim: 3,
            hidden_layers: 1,
            hidden_width: 2,
            degree: 1,
            ..SurrogateConfig::default()
        };
        let template =
            SurrogateModel::initialized(config.clone(), Normalization::identity(), 0).unwrap();
        let n = template.weight_count();
        let mut weights = vec![0.0; n];
        weights[n - 2] = force;
        SurrogateModel::from_parts(config, Normalization::identity(), weights).unwrap()
    }

    fn probe() -> DesignVector {
        DesignVector::ringless(30.0, 2.0)
    }

    #[test]
    fn two_members_at_10_and_14_give_mean_12_std_2() {
        let ens = SurrogateEnsemble::from_members(vec![
            EnsembleMember::without_prior(constant_model(10.0)),
            EnsembleMember::without_prior(constant_model(14.0)),
        ])
        .unwrap();
        let pred = ens.predict(&probe(), 25.0, 3.0);
        assert_eq!(pred.mean, 12.0);
        assert_eq!(pred.std, 2.0);
    }

    #[test]
    fn identical_members_have_exactly_zero_std() {
        let members: Vec<EnsembleMember> = (0..3)
            .map(|_| EnsembleMember::without_prior(constant_model(7.3)))
            .collect();
        let ens = SurrogateEnsemble::from_members(members).unwrap();
        let pred = ens.predict(&probe(), 25.0, 3.0);
        assert_eq!(pred.mean, 7.3);
        assert_eq!(pred.std, 0.0);
    }

    #[test]
    fn single_member_ensemble_degenerates_to_zero_std() {
        let ens = SurrogateEnsemble::from_members(vec![EnsembleMember::without_prior(
            constant_model(9.0),
        )])
        .unwrap();
        assert_eq!(ens.predict(&probe(), 25.0, 3.0).std, 0.0);
    }

    #[test]
    fn empty_member_list_is_refused() {
        assert!(matches!(
            SurrogateEnsemble::from_members(vec![]),
            Err(LearnError::InvalidArgument { name: "members", .. })
        ));
    }

    #[test]
    fn mismatched_member_architectures_are_refused() {
        let small = constant_model(5.0);
        let big_config = SurrogateConfig {
            embedding_dim: 4,
            hidden_layers: 2,
            hidden_width: 6,
            degree: 2,
            ..SurrogateConfig::default()
        };
        let big =
            SurrogateModel::initialized(big_config, Normalization::identity(), 1).unwrap();
        let err = SurrogateEnsemble::from_members(vec![
            EnsembleMember::without_prior(small),
            EnsembleMember::without_prior(big),
        ])
        .unwrap_err();
        assert!(matches!(err, LearnError::InvalidArgument { .. }));
    }

    #[test]
    fn member_rejects_prior_with_different_architecture() {
        let trainable = constant_model(5.0);
        let other_config = SurrogateConfig {
            embedding_dim: 5,
            hidden_layers: 1,
            hidden_width: 2,
            degree: 1,
            ..SurrogateConfig::default()
        };
        let prior =
            SurrogateModel::initialized(other_config, Normalization::identity(), 2).unwrap();
        assert!(EnsembleMember::new(trainable, prior, 1.0).is_err());
    }

    #[test]
    fn evaluator_predictions_match_direct_predictions() {
        let ens = SurrogateEnsemble::from_members(vec![
            EnsembleMember::without_prior(constant_model(10.0)),
            EnsembleMember::without_prior(constant_model(14.0)),
        ])
        .unwrap();
        let mut ev = ens.evaluator();
        let direct = ens.predict(&probe(), 25.0, 3.0);
        let fast = ev.predict(&probe(), 25.0, 3.0);
        assert_eq!(direct, fast);
    }

    #[test]
    fn config_with_one_member_is_invalid() {
        let config = EnsembleConfig {
            member_count: 1,
            ..EnsembleConfig::default()
        };
        assert!(matches!(
            config.validate(),
            Err(LearnError::InvalidConfig { .. })
        ));
    }

    #[test]
    fn derived_seeds_separate_streams() {
        let a = derive_seed(7, 0);
        let b = derive_seed(7, 1);
        let c = derive_seed(8, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, derive_seed(7, 0));
    }
}
