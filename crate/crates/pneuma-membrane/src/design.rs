//! Membrane geometry: the annular free span between the contact disc and
//! the clamped rim, optionally stiffened by concentric limiter rings.

use crate::error::MembraneError;
use pneuma_material::GentMaterial;

/// A concentric stiffening ring, given by its centreline radius and half
/// width (both [m], measured on the undeformed membrane).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingSpec {
    /// Centreline radius of the ring [m].
    pub center: f64,
    /// Half of the ring's radial width [m].
    pub half_width: f64,
}

impl RingSpec {
    /// Inner edge radius [m].
    pub fn inner(&self) -> f64 {
        self.center - self.half_width
    }

    /// Outer edge radius [m].
    pub fn outer(&self) -> f64 {
        self.center + self.half_width
    }
}

/// An axisymmetric membrane: uniform thickness sheet clamped at the outer
/// rim, touching a rigid disc at the inner radius, with up to two limiter
/// rings bonded in between.
///
/// Only the material constants change across ring edges; thickness and the
/// equilibrium equations are shared by every segment.
#[derive(Debug, Clone)]
pub struct MembraneDesign {
    /// Radius of the rigid contact disc [m] (inner edge of the free span).
    pub contact_radius: f64,
    /// Clamp radius [m] (outer edge of the free span).
    pub clamp_radius: f64,
    /// Undeformed sheet thickness [m].
    pub thickness: f64,
    /// Base elastomer.
    pub elastic: GentMaterial,
    /// Stiff ring material.
    pub limiter: GentMaterial,
    /// Limiter rings, at most two, strictly inside the free span.
    pub rings: Vec<RingSpec>,
}

/// One radial interval of the free span with its governing material.
#[derive(Debug, Clone, Copy)]
pub struct Segment<'a> {
    /// Inner radius [m].
    pub start: f64,
    /// Outer radius [m].
    pub end: f64,
    /// Material governing this interval.
    pub material: &'a GentMaterial,
    /// Whether this interval lies inside a limiter ring.
    pub is_limiter: bool,
}

impl MembraneDesign {
    /// A ringless design (single elastic segment); the limiter material is
    /// still recorded for later ring edits.
    pub fn ringless(
        contact_radius: f64,
        clamp_radius: f64,
        thickness: f64,
        elastic: GentMaterial,
        limiter: GentMaterial,
    ) -> Self {
        Self {
            contact_radius,
            clamp_radius,
            thickness,
            elastic,
            limiter,
            rings: Vec::new(),
        }
    }

    /// Check the geometric invariants: positive finite dimensions, contact
    /// disc inside the clamp, at most two rings, each ring strictly inside
    /// the free span, rings sorted and non-overlapping.
    pub fn validate(&self) -> Result<(), MembraneError> {
        let bad = |detail: String| Err(MembraneError::InvalidDesign { detail });
        for (name, v) in [
            ("contact_radius", self.contact_radius),
            ("clamp_radius", self.clamp_radius),
            ("thickness", self.thickness),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return bad(format!("{name} = {v} must be positive and finite"));
            }
        }
        if self.contact_radius >= self.clamp_radius {
            return bad(format!(
                "contact radius {} must be smaller than clamp radius {}",
                self.contact_radius, self.clamp_radius
            ));
        }
        if self.rings.len() > 2 {
            return bad(format!("{} rings requested, at most 2 supported", self.rings.len()));
        }
        for ring in &self.rings {
            if !ring.center.is_finite() || !ring.half_width.is_finite() || ring.half_width <= 0.0 {
                return bad(format!(
                    "ring at {} with half width {} is degenerate",
                    ring.center, ring.half_width
                ));
            }
            if ring.inner() <= self.contact_radius || ring.outer() >= self.clamp_radius {
                return bad(format!(
                    "ring [{}, {}] must sit strictly inside the span ({}, {})",
                    ring.inner(),
                    ring.outer(),
                    self.contact_radius,
                    self.clamp_radius
                ));
            }
        }
        if self.rings.len() == 2 {
            let (a, b) = (&self.rings[0], &self.rings[1]);
            if a.center >= b.center {
                return bad("rings must be listed inner to outer".to_string());
            }
            if a.outer() > b.inner() {
                return bad(format!(
                    "rings overlap: [{}, {}] and [{}, {}]",
                    a.inner(),
                    a.outer(),
                    b.inner(),
                    b.outer()
                ));
            }
        }
        Ok(())
    }

    /// Partition the free span into alternating elastic / limiter segments
    /// (at most five). Zero-width intervals (touching rings) are dropped.
    pub fn segments(&self) -> Result<Vec<Segment<'_>>, MembraneError> {
        self.validate()?;
        let mut out = Vec::with_capacity(2 * self.rings.len() + 1);
        let mut cursor = self.contact_radius;
        for ring in &self.rings {
            out.push(Segment {
                start: cursor,
                end: ring.inner(),
                material: &self.elastic,
                is_limiter: false,
            });
            out.push(Segment {
                start: ring.inner(),
                end: ring.outer(),
                material: &self.limiter,
                is_limiter: true,
            });
            cursor = ring.outer();
        }
        out.push(Segment {
            start: cursor,
            end: self.clamp_radius,
            material: &self.elastic,
            is_limiter: false,
        });
        out.retain(|s| s.end > s.start);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn materials() -> (GentMaterial, GentMaterial) {
        (
            GentMaterial::new(31.7e3, 39.6).unwrap(),
            GentMaterial::new(1.0e6, 25.0).unwrap(),
        )
    }

    fn base() -> MembraneDesign {
        let (e, l) = materials();
        MembraneDesign::ringless(25.4e-3, 70.0e-3, 2.0e-3, e, l)
    }

    #[test]
    fn ringless_design_is_one_elastic_segment() {
        let d = base();
        let segs = d.segments().unwrap();
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].start, d.contact_radius);
        assert_eq!(segs[0].end, d.clamp_radius);
        assert!(!segs[0].is_limiter);
    }

    #[test]
    fn two_rings_make_five_alternating_segments() {
        let mut d = base();
        d.rings = vec![
            RingSpec { center: 35.0e-3, half_width: 3.0e-3 },
            RingSpec { center: 55.0e-3, half_width: 4.0e-3 },
        ];
        let segs = d.segments().unwrap();
        assert_eq!(segs.len(), 5);
        let flags: Vec<bool> = segs.iter().map(|s| s.is_limiter).collect();
        assert_eq!(flags, vec![false, true, false, true, false]);
        // contiguity
        for pair in segs.windows(2) {
            assert_eq!(pair[0].end, pair[1].start);
        }
        assert_eq!(segs[0].start, d.contact_radius);
        assert_eq!(segs[4].end, d.clamp_radius);
    }

    #[test]
    fn touching_rings_drop_the_middle_sliver() {
        let mut d = base();
        d.rings = vec![
            RingSpec { center: 35.0e-3, half_width: 5.0e-3 },
            RingSpec { center: 45.0e-3, half_width: 5.0e-3 },
        ];
        let segs = d.segments().unwrap();
        assert_eq!(segs.len(), 4);
    }

    #[test]
    fn overlapping_rings_are_rejected() {
        let mut d = base();
        d.rings = vec![
            RingSpec { center: 35.0e-3, half_width: 6.0e-3 },
            RingSpec { center: 45.0e-3, half_width: 6.0e-3 },
        ];
        assert!(matches!(
            d.segments(),
            Err(MembraneError::InvalidDesign { .. })
        ));
    }

    #[test]
    fn ring_touching_the_boundary_is_rejected() {
        let mut d = base();
        d.rings = vec![RingSpec { center: 30.0e-3, half_width: 4.6e-3 }];
        assert!(d.validate().is_err()); // inner edge hits the contact disc
        d.rings = vec![RingSpec { center: 66.0e-3, half_width: 4.0e-3 }];
        assert!(d.validate().is_err()); // outer edge hits the clamp
    }

    #[test]
    fn inverted_annulus_is_rejected() {
        let mut d = base();
        d.clamp_radius = d.contact_radius;
        assert!(d.validate().is_err());
    }

    #[test]
    fn third_ring_is_rejected() {
        let mut d = base();
        d.rings = vec![
            RingSpec { center: 30.0e-3, half_width: 1.0e-3 },
            RingSpec { center: 40.0e-3, half_width: 1.0e-3 },
            RingSpec { center: 50.0e-3, half_width: 1.0e-3 },
        ];
        assert!(d.validate().is_err());
    }
}
