use pneuma_data::DesignVector;

use crate::config::SurrogateConfig;
use crate::error::SurrogateError;
use crate::features::Normalization;
use crate::network::{
    self, backward, coefficients_from_raw, force_from_coefficients, forward, net_input, NetInput,
    RingEncoder, Scratch, WeightLayout,
};

/// A trained (or freshly initialized) lift-force surrogate.
///
/// The network maps a membrane design and a rig height to the coefficients
/// of a polynomial in pressure; the predicted force is that polynomial
/// clamped at zero. Every pressure coefficient of order one and above is
/// kept positive by construction, so the prediction is nondecreasing in
/// pressure wherever it is positive — matching how a sealed membrane
/// behaves under inflation.
#[derive(Debug, Clone, PartialEq)]
pub struct SurrogateModel {
    config: SurrogateConfig,
    norm: Normalization,
    weights: Vec<f64>,
    pub(crate) layout: WeightLayout,
}

/// Force prediction with its derivatives in physical units
/// (newtons per millimetre, newtons per kilopascal).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceGradient {
    pub force: f64,
    pub d_contact_radius: f64,
    pub d_thickness: f64,
    /// `None` when the corresponding ring slot is absent.
    pub d_ring1: Option<[f64; 2]>,
    pub d_ring2: Option<[f64; 2]>,
    pub d_height: f64,
    pub d_pressure: f64,
}

impl ForceGradient {
    /// Gradient in flat coordinate layout
    /// `[contact_radius, thickness, ring1 radius, ring1 width, ring2 radius,
    /// ring2 width]`; `None` unless both rings are present.
    pub fn d_coords(&self) -> Option<[f64; 6]> {
        match (self.d_ring1, self.d_ring2) {
            (Some(r1), Some(r2)) => Some([
                self.d_contact_radius,
                self.d_thickness,
                r1[0],
                r1[1],
                r2[0],
                r2[1],
            ]),
            _ => None,
        }
    }
}

impl SurrogateModel {
    /// Assembles a model from its stored parts, validating consistency.
    pub fn from_parts(
        config: SurrogateConfig,
        norm: Normalization,
        weights: Vec<f64>,
    ) -> Result<Self, SurrogateError> {
        config.validate()?;
        norm.validate()?;
        let layout = WeightLayout::new(&config);
        if weights.len() != layout.total {
            return Err(SurrogateError::InvalidArgument {
                name: "weights",
                detail: format!(
                    "expected {} parameters for this architecture, got {}",
                    layout.total,
                    weights.len()
                ),
            });
        }
        if let Some(bad) = weights.iter().find(|w| !w.is_finite()) {
            return Err(SurrogateError::InvalidArgument {
                name: "weights",
                detail: format!("non-finite parameter {bad}"),
            });
        }
        Ok(SurrogateModel {
            config,
            norm,
            weights,
            layout,
        })
    }

    /// A freshly initialized model with seeded random weights. The seed is
    /// taken as an argument (rather than from the config) so ensembles can
    /// derive distinct member and companion initializations from one
    /// configuration.
    pub fn initialized(
        config: SurrogateConfig,
        norm: Normalization,
        seed: u64,
    ) -> Result<Self, SurrogateError> {
        config.validate()?;
        norm.validate()?;
        let layout = WeightLayout::new(&config);
        let weights = network::init_weights(&config, &layout, seed);
        Ok(SurrogateModel {
            config,
            norm,
            weights,
            layout,
        })
    }

    pub fn config(&self) -> &SurrogateConfig {
        &self.config
    }

    pub fn normalization(&self) -> &Normalization {
        &self.norm
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight_count(&self) -> usize {
        self.weights.len()
    }

    pub(crate) fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    /// Number of polynomial coefficients (`degree + 1`).
    pub fn coefficient_count(&self) -> usize {
        self.config.degree + 1
    }

    /// A borrowed view of the ring encoder for direct latent inspection.
    pub fn ring_encoder(&self) -> RingEncoder<'_> {
        let d = self.layout.d;
        RingEncoder {
            t: &self.weights[self.layout.t_off..self.layout.t_off + 2 * d],
            e_nan: &self.weights[self.layout.e_nan_off..self.layout.e_nan_off + d],
            d,
            radius_norm: self.norm.ring_radius,
            width_norm: self.norm.ring_width,
        }
    }

    pub(crate) fn net_input(&self, design: &DesignVector, height_mm: f64) -> NetInput {
        net_input(
            &self.norm,
            design.ring_slots(),
            design.thickness_mm,
            design.contact_radius_mm,
            height_mm,
        )
    }

    /// A reusable evaluator owning the forward/backward work buffers.
    /// Prefer this over the convenience methods inside optimization loops.
    pub fn evaluator(&self) -> ModelEvaluator<'_> {
        ModelEvaluator {
            model: self,
            scratch: Scratch::for_layout(&self.layout),
            coeffs: vec![0.0; self.coefficient_count()],
            grad: vec![0.0; self.layout.total],
        }
    }

    /// Raw head outputs for one (design, height): the pre-squash
    /// coefficient vector.
    pub fn raw_coefficients(&self, design: &DesignVector, height_mm: f64) -> Vec<f64> {
        let mut ev = self.evaluator();
        ev.raw_coefficients(design, height_mm).to_vec()
    }

    /// Pressure-polynomial coefficients for one (design, height). The
    /// constant term may be negative; all higher coefficients are positive.
    pub fn coefficients(&self, design: &DesignVector, height_mm: f64) -> Vec<f64> {
        let mut ev = self.evaluator();
        ev.coefficients(design, height_mm).to_vec()
    }

    /// Predicted lift force in newtons at the given rig height (mm) and
    /// gauge pressure (kPa). Never negative.
    pub fn predict_force(&self, design: &DesignVector, height_mm: f64, pressure_kpa: f64) -> f64 {
        let mut ev = self.evaluator();
        ev.predict_force(design, height_mm, pressure_kpa)
    }

    /// Force prediction with derivatives with respect to every design
    /// coordinate, the height, and the pressure.
    pub fn force_gradient(
        &self,
        design: &DesignVector,
        height_mm: f64,
        pressure_kpa: f64,
    ) -> ForceGradient {
        let mut ev = self.evaluator();
        ev.force_gradient(design, height_mm, pressure_kpa)
    }
}

/// Reusable evaluation context for one model. Holds the network work
/// buffers so repeated predictions allocate nothing.
pub struct ModelEvaluator<'a> {
    model: &'a SurrogateModel,
    scratch: Scratch,
    coeffs: Vec<f64>,
    grad: Vec<f64>,
}

impl ModelEvaluator<'_> {
    pub fn model(&self) -> &SurrogateModel {
        self.model
    }

    pub fn raw_coefficients(&mut self, design: &DesignVector, height_mm: f64) -> &[f64] {
        let input = self.model.net_input(design, height_mm);
        forward(
            &self.model.weights,
            &self.model.layout,
            &input,
            None,
            &mut self.scratch,
        );
        self.scratch.raw_out()
    }

    pub fn coefficients(&mut self, design: &DesignVector, height_mm: f64) -> &[f64] {
        self.raw_coefficients(design, height_mm);
        let raw = self.scratch.raw_out();
        coefficients_from_raw(raw, &mut self.coeffs);
        &self.coeffs
    }

    pub fn predict_force(
        &mut self,
        design: &DesignVector,
        height_mm: f64,
        pressure_kpa: f64,
    ) -> f64 {
        let coeffs = self.coefficients(design, height_mm);
        force_from_coefficients(coeffs, pressure_kpa)
    }

    pub fn force_gradient(
        &mut self,
        design: &DesignVector,
        height_mm: f64,
        pressure_kpa: f64,
    ) -> ForceGradient {
        let model = self.model;
        let input = model.net_input(design, height_mm);
        forward(
            &model.weights,
            &model.layout,
            &input,
            None,
            &mut self.scratch,
        );
        let raw: Vec<f64> = self.scratch.raw_out().to_vec();
        coefficients_from_raw(&raw, &mut self.coeffs);
        let poly: f64 = {
            let mut acc = 0.0;
            let mut power = 1.0;
            for &a in self.coeffs.iter() {
                acc += a * power;
                power *= pressure_kpa;
            }
            acc
        };
        let force = poly.max(0.0);
        // Clamp subgradient: zero on the flat branch (and at the kink).
        let active = if poly > 0.0 { 1.0 } else { 0.0 };
        let mut d_pressure = 0.0;
        for (k, &a) in self.coeffs.iter().enumerate().skip(1) {
            d_pressure += k as f64 * a * pressure_kpa.powi(k as i32 - 1);
        }
        d_pressure *= active;
        // d force / d raw_k = active * p^k * d coeff_k / d raw_k.
        let mut d_raw = vec![0.0; raw.len()];
        let mut power = 1.0;
        for (k, dr) in d_raw.iter_mut().enumerate() {
            *dr = active * power * network::coefficient_slope(raw[k], k);
            power *= pressure_kpa;
        }
        self.grad.fill(0.0);
        let input_grad = backward(
            &model.weights,
            &model.layout,
            &input,
            &mut self.scratch,
            &d_raw,
            &mut self.grad,
        );
        // Chain through the feature standardization: d normalized / d
        // physical is the reciprocal scale.
        let norm = &model.norm;
        let ring_grad = |slot: Option<[f64; 2]>, g: [f64; 2]| {
            slot.map(|_| [g[0] / norm.ring_radius.std, g[1] / norm.ring_width.std])
        };
        ForceGradient {
            force,
            d_thickness: input_grad.scalars[0] / norm.thickness.std,
            d_contact_radius: input_grad.scalars[1] / norm.contact_radius.std,
            d_ring1: ring_grad(input.slots[0], input_grad.slots[0]),
            d_ring2: ring_grad(input.slots[1], input_grad.slots[1]),
            d_height: input_grad.scalars[2] / norm.height.std,
            d_pressure,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn toy_model(seed: u64) -> SurrogateModel {
        let config = SurrogateConfig {
            embedding_dim: 4,
            pre_mlp: vec![],
            hidden_layers: 2,
            hidden_width: 6,
            degree: 2,
            ..SurrogateConfig::default()
        };
        SurrogateModel::initialized(config, Normalization::identity(), seed).unwrap()
    }

    fn ringed_design() -> DesignVector {
        DesignVector::with_rings(30.0, 2.0, (40.0, 5.0), (55.0, 4.0))
    }

    #[test]
    fn from_parts_rejects_wrong_weight_count() {
        let m = toy_model(0);
        let mut weights = m.weights().to_vec();
        weights.pop();
        let err = SurrogateModel::from_parts(
            m.config().clone(),
            m.normalization().clone(),
            weights,
        )
        .unwrap_err();
        assert!(matches!(err, SurrogateError::InvalidArgument { .. }));
    }

    #[test]
    fn prediction_is_deterministic_and_nonnegative() {
        let m = toy_model(11);
        let d = ringed_design();
        for p in [0.0, 1.5, 4.0, 9.0] {
            let f1 = m.predict_force(&d, 25.0, p);
            let f2 = m.predict_force(&d, 25.0, p);
            assert_eq!(f1.to_bits(), f2.to_bits());
            assert!(f1 >= 0.0);
        }
    }

    #[test]
    fn coefficients_above_constant_are_positive() {
        let m = toy_model(5);
        let coeffs = m.coefficients(&ringed_design(), 40.0);
        assert_eq!(coeffs.len(), 3);
        for &a in &coeffs[1..] {
            assert!(a > 0.0);
        }
    }

    #[test]
    fn gradient_matches_central_differences() {
        let m = toy_model(21);
        let d = ringed_design();
        let (h, p) = (25.0, 5.0);
        let g = m.force_gradient(&d, h, p);
        assert!(g.force > 0.0, "pick a seed on the active branch");
        let step = 1e-6;
        let fd = |plus: f64, minus: f64| (plus - minus) / (2.0 * step);

        let mut dp = d.clone();
        dp.contact_radius_mm += step;
        let mut dm = d.clone();
        dm.contact_radius_mm -= step;
        assert_relative_eq!(
            g.d_contact_radius,
            fd(m.predict_force(&dp, h, p), m.predict_force(&dm, h, p)),
            max_relative = 1e-4,
            epsilon = 1e-8
        );

        let mut dp = d.clone();
        dp.ring1.as_mut().unwrap().radius_mm += step;
        let mut dm = d.clone();
        dm.ring1.as_mut().unwrap().radius_mm -= step;
        assert_relative_eq!(
            g.d_ring1.unwrap()[0],
            fd(m.predict_force(&dp, h, p), m.predict_force(&dm, h, p)),
            max_relative = 1e-4,
            epsilon = 1e-8
        );

        assert_relative_eq!(
            g.d_height,
            fd(
                m.predict_force(&d, h + step, p),
                m.predict_force(&d, h - step, p)
            ),
            max_relative = 1e-4,
            epsilon = 1e-8
        );
        assert_relative_eq!(
            g.d_pressure,
            fd(
                m.predict_force(&d, h, p + step),
                m.predict_force(&d, h, p - step)
            ),
            max_relative = 1e-4,
            epsilon = 1e-8
        );
    }

    #[test]
    fn gradient_for_ringless_design_has_no_ring_entries() {
        let m = toy_model(2);
        let d = DesignVector::ringless(30.0, 2.0);
        let g = m.force_gradient(&d, 20.0, 3.0);
        assert!(g.d_ring1.is_none());
        assert!(g.d_ring2.is_none());
        assert!(g.d_coords().is_none());
    }

    #[test]
    fn flat_branch_has_zero_gradient() {
        // Force a deeply negative constant term so the polynomial is
        // negative at p = 0 and the clamp is active.
        let mut m = toy_model(3);
        let d = ringless_far();
        let head = *m.layout.base.last().unwrap();
        m.weights_mut()[head.b_off] = -100.0;
        let g = m.force_gradient(&d, 20.0, 0.0);
        assert_eq!(g.force, 0.0);
        assert_eq!(g.d_contact_radius, 0.0);
        assert_eq!(g.d_height, 0.0);
        assert_eq!(g.d_pressure, 0.0);
    }

    fn ringless_far() -> DesignVector {
        DesignVector::ringless(25.0, 1.5)
    }
}
