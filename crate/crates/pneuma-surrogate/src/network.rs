use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::SurrogateConfig;
use crate::features::{Affine, Normalization};

/// Number of scalar features appended after the ring latent:
/// thickness, contact radius, height.
pub(crate) const SCALAR_FEATURES: usize = 3;

/// One dense layer's slice of the flat weight vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LayerSpec {
    pub w_off: usize,
    pub b_off: usize,
    pub in_dim: usize,
    pub out_dim: usize,
    /// Hidden layers squash with tanh; the head is linear.
    pub tanh: bool,
}

/// Where every trainable parameter lives inside the flat weight vector:
/// the ring projection matrix (row-major `d×2`), the missing-ring vector
/// (`d`), the optional pre-network chain on the ring latent, and the base
/// chain from `[latent, scalars]` to the `degree+1` raw coefficients.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct WeightLayout {
    pub d: usize,
    pub degree: usize,
    pub t_off: usize,
    pub e_nan_off: usize,
    pub pre: Vec<LayerSpec>,
    pub base: Vec<LayerSpec>,
    pub total: usize,
}

impl WeightLayout {
    pub fn new(cfg: &SurrogateConfig) -> Self {
        let d = cfg.embedding_dim;
        let t_off = 0;
        let e_nan_off = 2 * d;
        let mut next = e_nan_off + d;
        let mut alloc_layer = |in_dim: usize, out_dim: usize, tanh: bool| {
            let spec = LayerSpec {
                w_off: next,
                b_off: next + in_dim * out_dim,
                in_dim,
                out_dim,
                tanh,
            };
            next = spec.b_off + out_dim;
            spec
        };
        let mut pre = Vec::new();
        let mut latent_out = d;
        for &width in &cfg.pre_mlp {
            pre.push(alloc_layer(latent_out, width, true));
            latent_out = width;
        }
        let mut base = Vec::new();
        let mut in_dim = latent_out + SCALAR_FEATURES;
        for _ in 0..cfg.hidden_layers {
            base.push(alloc_layer(in_dim, cfg.hidden_width, true));
            in_dim = cfg.hidden_width;
        }
        base.push(alloc_layer(in_dim, cfg.degree + 1, false));
        WeightLayout {
            d,
            degree: cfg.degree,
            t_off,
            e_nan_off,
            pre,
            base,
            total: next,
        }
    }

    /// Output dimension of the ring-latent path (after the pre-network).
    pub fn latent_out(&self) -> usize {
        self.pre.last().map_or(self.d, |l| l.out_dim)
    }

    /// Dimension of the base network's input vector.
    pub fn concat_dim(&self) -> usize {
        self.latent_out() + SCALAR_FEATURES
    }
}

/// Seeded starting weights: uniform Glorot fan-scaled layers, the ring
/// projection treated as a `d×2` layer, and the missing-ring vector drawn
/// uniformly at unit scale (for `d ≥ 3` a random vector almost surely
/// avoids the projection's 2-D image, keeping absence distinguishable).
pub(crate) fn init_weights(cfg: &SurrogateConfig, layout: &WeightLayout, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = vec![0.0; layout.total];
    let glorot = |slice: &mut [f64], fan_in: usize, fan_out: usize, rng: &mut ChaCha8Rng| {
        let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
        for x in slice {
            *x = rng.random_range(-bound..bound);
        }
    };
    let d = cfg.embedding_dim;
    glorot(&mut w[layout.t_off..layout.t_off + 2 * d], 2, d, &mut rng);
    for x in &mut w[layout.e_nan_off..layout.e_nan_off + d] {
        *x = rng.random_range(-1.0..1.0);
    }
    for spec in layout.pre.iter().chain(&layout.base) {
        let end = spec.w_off + spec.in_dim * spec.out_dim;
        glorot(&mut w[spec.w_off..end], spec.in_dim, spec.out_dim, &mut rng);
        // Biases start at zero.
    }
    w
}

/// One sample's inputs after feature standardization.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct NetInput {
    /// Normalized `[radius, width]` per ring slot, `None` for absent.
    pub slots: [Option<[f64; 2]>; 2],
    /// Normalized `[thickness, contact_radius, height]`.
    pub scalars: [f64; SCALAR_FEATURES],
}

pub(crate) fn net_input(
    norm: &Normalization,
    slots: [Option<[f64; 2]>; 2],
    thickness_mm: f64,
    contact_radius_mm: f64,
    height_mm: f64,
) -> NetInput {
    let norm_slot = |slot: Option<[f64; 2]>| {
        slot.map(|[radius, width]| {
            [
                norm.ring_radius.apply(radius),
                norm.ring_width.apply(width),
            ]
        })
    };
    NetInput {
        slots: [norm_slot(slots[0]), norm_slot(slots[1])],
        scalars: [
            norm.thickness.apply(thickness_mm),
            norm.contact_radius.apply(contact_radius_mm),
            norm.height.apply(height_mm),
        ],
    }
}

/// Reusable forward/backward buffers for one network evaluation.
#[derive(Debug, Clone, Default)]
pub(crate) struct Scratch {
    latent: Vec<f64>,
    pre_acts: Vec<Vec<f64>>,
    concat: Vec<f64>,
    base_acts: Vec<Vec<f64>>,
    delta_a: Vec<f64>,
    delta_b: Vec<f64>,
}

impl Scratch {
    pub fn for_layout(layout: &WeightLayout) -> Self {
        let max_dim = layout
            .pre
            .iter()
            .chain(&layout.base)
            .map(|l| l.in_dim.max(l.out_dim))
            .max()
            .unwrap_or(1)
            .max(layout.concat_dim());
        Scratch {
            latent: vec![0.0; layout.d],
            pre_acts: layout.pre.iter().map(|l| vec![0.0; l.out_dim]).collect(),
            concat: vec![0.0; layout.concat_dim()],
            base_acts: layout.base.iter().map(|l| vec![0.0; l.out_dim]).collect(),
            delta_a: vec![0.0; max_dim],
            delta_b: vec![0.0; max_dim],
        }
    }

    /// Raw coefficient vector from the last forward pass.
    pub fn raw_out(&self) -> &[f64] {
        self.base_acts.last().expect("layout has a head layer")
    }
}

fn dense_forward(w: &[f64], spec: &LayerSpec, input: &[f64], out: &mut [f64]) {
    let weights = &w[spec.w_off..spec.w_off + spec.in_dim * spec.out_dim];
    let biases = &w[spec.b_off..spec.b_off + spec.out_dim];
    for r in 0..spec.out_dim {
        let row = &weights[r * spec.in_dim..(r + 1) * spec.in_dim];
        let mut acc = biases[r];
        for (wv, iv) in row.iter().zip(input) {
            acc += wv * iv;
        }
        out[r] = if spec.tanh { acc.tanh() } else { acc };
    }
}

/// Backpropagates `d_act` (gradient at this layer's activations) through
/// one layer: accumulates weight/bias gradients into `grad` and writes the
/// gradient at the layer's input into `d_input`.
fn dense_backward(
    w: &[f64],
    spec: &LayerSpec,
    input: &[f64],
    activation: &[f64],
    d_act: &[f64],
    grad: &mut [f64],
    d_input: &mut [f64],
) {
    let weights = &w[spec.w_off..spec.w_off + spec.in_dim * spec.out_dim];
    d_input[..spec.in_dim].fill(0.0);
    for r in 0..spec.out_dim {
        let dpre = if spec.tanh {
            d_act[r] * (1.0 - activation[r] * activation[r])
        } else {
            d_act[r]
        };
        if dpre == 0.0 {
            continue;
        }
        let row = &weights[r * spec.in_dim..(r + 1) * spec.in_dim];
        let grad_row = &mut grad[spec.w_off + r * spec.in_dim..spec.w_off + (r + 1) * spec.in_dim];
        for c in 0..spec.in_dim {
            grad_row[c] += dpre * input[c];
            d_input[c] += row[c] * dpre;
        }
        grad[spec.b_off + r] += dpre;
    }
}

/// Encodes one ring slot into the latent accumulator (adds in place).
fn encode_slot_into(w: &[f64], layout: &WeightLayout, slot: Option<[f64; 2]>, latent: &mut [f64]) {
    match slot {
        Some(v) => {
            let t = &w[layout.t_off..layout.t_off + 2 * layout.d];
            for i in 0..layout.d {
                latent[i] += t[2 * i] * v[0] + t[2 * i + 1] * v[1];
            }
        }
        None => {
            let e_nan = &w[layout.e_nan_off..layout.e_nan_off + layout.d];
            for i in 0..layout.d {
                latent[i] += e_nan[i];
            }
        }
    }
}

/// Full forward pass to the raw coefficient vector (stored in
/// `scratch.raw_out()`). `raw_offset`, when present, is added to the head
/// output — the hook ensemble members use to superpose a frozen companion
/// network at the raw-coefficient level.
pub(crate) fn forward(
    w: &[f64],
    layout: &WeightLayout,
    input: &NetInput,
    raw_offset: Option<&[f64]>,
    scratch: &mut Scratch,
) {
    scratch.latent.fill(0.0);
    // Slot order cannot matter: the two encodings are summed elementwise,
    // and float addition commutes.
    encode_slot_into(w, layout, input.slots[0], &mut scratch.latent);
    encode_slot_into(w, layout, input.slots[1], &mut scratch.latent);
    {
        let mut x: &[f64] = &scratch.latent;
        for (spec, act) in layout.pre.iter().zip(&mut scratch.pre_acts) {
            dense_forward(w, spec, x, act);
            x = act;
        }
        let latent_out = layout.latent_out();
        scratch.concat[..latent_out].copy_from_slice(x);
    }
    let latent_out = layout.latent_out();
    scratch.concat[latent_out..].copy_from_slice(&input.scalars);
    let mut x: &[f64] = &scratch.concat;
    for (spec, act) in layout.base.iter().zip(&mut scratch.base_acts) {
        dense_forward(w, spec, x, act);
        x = act;
    }
    if let Some(offset) = raw_offset {
        let head = scratch.base_acts.last_mut().expect("head layer");
        for (h, o) in head.iter_mut().zip(offset) {
            *h += o;
        }
    }
}

/// Gradients at the network inputs from one backward pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct InputGradient {
    /// Gradient at each normalized ring slot (zero for absent slots).
    pub slots: [[f64; 2]; 2],
    /// Gradient at the normalized scalar features.
    pub scalars: [f64; SCALAR_FEATURES],
}

/// Backward pass from `d_raw` (gradient at the raw coefficient vector).
/// Accumulates parameter gradients into `grad` (which must be
/// `layout.total` long) and returns the input gradients. Must be called
/// with the `scratch` of the matching `forward`.
pub(crate) fn backward(
    w: &[f64],
    layout: &WeightLayout,
    input: &NetInput,
    scratch: &mut Scratch,
    d_raw: &[f64],
    grad: &mut [f64],
) -> InputGradient {
    // Base chain, head first.
    scratch.delta_a[..d_raw.len()].copy_from_slice(d_raw);
    let mut delta_len = d_raw.len();
    for (idx, spec) in layout.base.iter().enumerate().rev() {
        let layer_input: &[f64] = if idx == 0 {
            &scratch.concat
        } else {
            &scratch.base_acts[idx - 1]
        };
        // Split borrows: delta_a holds d(activation), delta_b receives d(input).
        dense_backward(
            w,
            spec,
            layer_input,
            &scratch.base_acts[idx],
            &scratch.delta_a[..delta_len],
            grad,
            &mut scratch.delta_b,
        );
        std::mem::swap(&mut scratch.delta_a, &mut scratch.delta_b);
        delta_len = spec.in_dim;
    }
    let latent_out = layout.latent_out();
    let mut scalars = [0.0; SCALAR_FEATURES];
    scalars.copy_from_slice(&scratch.delta_a[latent_out..latent_out + SCALAR_FEATURES]);
    // Pre chain back to the summed ring latent.
    delta_len = latent_out;
    for (idx, spec) in layout.pre.iter().enumerate().rev() {
        let layer_input: &[f64] = if idx == 0 {
            &scratch.latent
        } else {
            &scratch.pre_acts[idx - 1]
        };
        dense_backward(
            w,
            spec,
            layer_input,
            &scratch.pre_acts[idx],
            &scratch.delta_a[..delta_len],
            grad,
            &mut scratch.delta_b,
        );
        std::mem::swap(&mut scratch.delta_a, &mut scratch.delta_b);
        delta_len = spec.in_dim;
    }
    debug_assert_eq!(delta_len, layout.d);
    // Ring encoder: the latent gradient flows into T (per present slot),
    // e_NaN (per absent slot), and the slot inputs.
    let mut slots = [[0.0; 2]; 2];
    for (slot_idx, slot) in input.slots.iter().enumerate() {
        match slot {
            Some(v) => {
                let t = &w[layout.t_off..layout.t_off + 2 * layout.d];
                for i in 0..layout.d {
                    let dl = scratch.delta_a[i];
                    grad[layout.t_off + 2 * i] += dl * v[0];
                    grad[layout.t_off + 2 * i + 1] += dl * v[1];
                    slots[slot_idx][0] += t[2 * i] * dl;
                    slots[slot_idx][1] += t[2 * i + 1] * dl;
                }
            }
            None => {
                for i in 0..layout.d {
                    grad[layout.e_nan_off + i] += scratch.delta_a[i];
                }
            }
        }
    }
    InputGradient { slots, scalars }
}

/// Maps raw head outputs to polynomial coefficients: the constant term
/// passes through (it may be negative), every pressure coefficient is
/// squared — smooth, nonnegative by construction, and exactly zero when
/// the raw output is zero, so a zeroed head yields the zero polynomial
/// and the model can genuinely switch a coefficient off.
pub(crate) fn coefficients_from_raw(raw: &[f64], out: &mut [f64]) {
    out[0] = raw[0];
    for k in 1..raw.len() {
        out[k] = raw[k] * raw[k];
    }
}

/// Derivative of the raw-to-coefficient map for coefficient `k`.
pub(crate) fn coefficient_slope(raw_k: f64, k: usize) -> f64 {
    if k == 0 {
        1.0
    } else {
        2.0 * raw_k
    }
}

/// Allocating variant of the raw-to-coefficient map: the constant term
/// passes through, every higher coefficient is squared. This is the map
/// to apply after summing raw coefficient vectors from several networks
/// (as ensemble members do with their frozen companions).
pub fn polynomial_coefficients(raw: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; raw.len()];
    coefficients_from_raw(raw, &mut out);
    out
}

/// Force from coefficients at pressure `p`: the polynomial clamped at zero
/// (a membrane that cannot lift the load pushes with zero force, never a
/// negative one).
pub fn force_from_coefficients(coeffs: &[f64], pressure_kpa: f64) -> f64 {
    let mut poly = 0.0;
    let mut power = 1.0;
    for &a in coeffs {
        poly += a * power;
        power *= pressure_kpa;
    }
    poly.max(0.0)
}

/// A borrowed view of a model's ring encoder: the shared projection matrix,
/// the learned missing-ring vector, and the ring-feature normalization.
#[derive(Debug, Clone, Copy)]
pub struct RingEncoder<'a> {
    pub(crate) t: &'a [f64],
    pub(crate) e_nan: &'a [f64],
    pub(crate) d: usize,
    pub(crate) radius_norm: Affine,
    pub(crate) width_norm: Affine,
}

impl RingEncoder<'_> {
    /// Latent dimension `d`.
    pub fn dim(&self) -> usize {
        self.d
    }
}

/// Encodes two optional rings (`[radius_mm, width_mm]` each) into one
/// latent vector: each present ring is normalized and linearly projected,
/// each absent ring contributes the learned missing-ring vector, and the
/// two encodings are summed — so swapping the slots gives a bit-identical
/// result, and two absent rings give exactly twice the missing-ring
/// vector.
pub fn encode_rings(
    v1: Option<[f64; 2]>,
    v2: Option<[f64; 2]>,
    enc: &RingEncoder<'_>,
) -> Vec<f64> {
    let mut latent = vec![0.0; enc.d];
    for slot in [v1, v2] {
        match slot {
            Some([radius, width]) => {
                let vn = [enc.radius_norm.apply(radius), enc.width_norm.apply(width)];
                for i in 0..enc.d {
                    latent[i] += enc.t[2 * i] * vn[0] + enc.t[2 * i + 1] * vn[1];
                }
            }
            None => {
                for i in 0..enc.d {
                    latent[i] += enc.e_nan[i];
                }
            }
        }
    }
    latent
}
