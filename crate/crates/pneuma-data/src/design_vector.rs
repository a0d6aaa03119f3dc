use serde::{Deserialize, Serialize};

use crate::error::{DataError, Violation};

/// One stiffening ring of a membrane design: centerline radius and radial
/// width, both in millimeters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingParams {
    pub radius_mm: f64,
    pub width_mm: f64,
}

impl RingParams {
    /// Inner edge of the ring (centerline minus half the width).
    pub fn inner_mm(&self) -> f64 {
        self.radius_mm - 0.5 * self.width_mm
    }

    /// Outer edge of the ring (centerline plus half the width).
    pub fn outer_mm(&self) -> f64 {
        self.radius_mm + 0.5 * self.width_mm
    }
}

/// A membrane design as stored in datasets and searched by the optimizers:
/// contact-plate radius, membrane thickness, and up to two stiffening rings.
///
/// A missing ring is an explicit `None` (serialized as JSON `null`), never a
/// numeric sentinel. The two ring slots are unordered — models built on this
/// type treat `ring1`/`ring2` symmetrically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignVector {
    pub contact_radius_mm: f64,
    pub thickness_mm: f64,
    pub ring1: Option<RingParams>,
    pub ring2: Option<RingParams>,
}

impl DesignVector {
    /// A design with no stiffening rings.
    pub fn ringless(contact_radius_mm: f64, thickness_mm: f64) -> Self {
        DesignVector {
            contact_radius_mm,
            thickness_mm,
            ring1: None,
            ring2: None,
        }
    }

    /// A design with both ring slots filled, each ring given as
    /// `(radius_mm, width_mm)`.
    pub fn with_rings(
        contact_radius_mm: f64,
        thickness_mm: f64,
        ring1: (f64, f64),
        ring2: (f64, f64),
    ) -> Self {
        DesignVector {
            contact_radius_mm,
            thickness_mm,
            ring1: Some(RingParams {
                radius_mm: ring1.0,
                width_mm: ring1.1,
            }),
            ring2: Some(RingParams {
                radius_mm: ring2.0,
                width_mm: ring2.1,
            }),
        }
    }

    /// Builds the design from the canonical six-coordinate layout used by
    /// the continuous design-space searches:
    /// `[contact_radius, thickness, ring1_radius, ring1_width, ring2_radius,
    /// ring2_width]` (all mm, both rings present).
    pub fn from_coords(x: &[f64; 6]) -> Self {
        DesignVector::with_rings(x[0], x[1], (x[2], x[3]), (x[4], x[5]))
    }

    /// The canonical six-coordinate layout, if both rings are present.
    pub fn coords(&self) -> Option<[f64; 6]> {
        match (self.ring1, self.ring2) {
            (Some(r1), Some(r2)) => Some([
                self.contact_radius_mm,
                self.thickness_mm,
                r1.radius_mm,
                r1.width_mm,
                r2.radius_mm,
                r2.width_mm,
            ]),
            _ => None,
        }
    }

    /// The two ring slots as optional `[radius, width]` pairs, in slot order.
    pub fn ring_slots(&self) -> [Option<[f64; 2]>; 2] {
        let as_pair = |r: Option<RingParams>| r.map(|r| [r.radius_mm, r.width_mm]);
        [as_pair(self.ring1), as_pair(self.ring2)]
    }

    /// Number of rings present.
    pub fn ring_count(&self) -> usize {
        self.ring1.is_some() as usize + self.ring2.is_some() as usize
    }

    /// Checks the numeric invariants: every stored value finite, lengths
    /// strictly positive, and each present ring's inner edge nonnegative.
    pub fn validate(&self) -> Result<(), DataError> {
        let mut violations = Vec::new();
        self.collect_violations("design", &mut violations);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(DataError::schema(violations))
        }
    }

    pub(crate) fn collect_violations(&self, path: &str, out: &mut Vec<Violation>) {
        let positive = |value: f64, field: &str, out: &mut Vec<Violation>| {
            if !(value.is_finite() && value > 0.0) {
                out.push(Violation {
                    path: format!("{path}.{field}"),
                    detail: format!("must be a positive finite length in mm, got {value}"),
                });
            }
        };
        positive(self.contact_radius_mm, "contact_radius_mm", out);
        positive(self.thickness_mm, "thickness_mm", out);
        for (slot, ring) in [("ring1", self.ring1), ("ring2", self.ring2)] {
            let Some(ring) = ring else { continue };
            positive(ring.radius_mm, &format!("{slot}.radius_mm"), out);
            positive(ring.width_mm, &format!("{slot}.width_mm"), out);
            if ring.radius_mm.is_finite()
                && ring.width_mm.is_finite()
                && ring.inner_mm() < 0.0
            {
                out.push(Violation {
                    path: format!("{path}.{slot}"),
                    detail: format!(
                        "inner edge {} mm is negative (radius {}, width {})",
                        ring.inner_mm(),
                        ring.radius_mm,
                        ring.width_mm
                    ),
                });
            }
        }
    }
}
