//! Integration paths for the Riesz-Dunford integral: sector rays, circular
//! arcs and vertical chords, positively oriented (spectrum on the left).
//!
//! All keyhole variants enter along the upper ray at angle `+δ′` from
//! infinity, pass the origin region (arc or chord), and leave along the
//! lower ray at `−δ′`.

use crate::error::{Error, Result};
use crate::{Cplx, Real};

/// One parametrized piece of a contour.
#[derive(Debug, Clone, PartialEq)]
pub enum Segment {
    /// `z = r·e^{iθ}`, `r` running `from_radius → to_radius`
    /// (`to_radius = ∞` for outgoing rays, `from_radius = ∞` for incoming).
    Ray {
        angle: Real,
        from_radius: Real,
        to_radius: Real,
    },
    /// `z = radius·e^{ia}`, `a` running `from_angle → to_angle`.
    Arc {
        radius: Real,
        from_angle: Real,
        to_angle: Real,
    },
    /// Straight segment `from → to`.
    Chord { from: Cplx, to: Cplx },
}

impl Segment {
    fn start(&self) -> Option<Cplx> {
        match *self {
            Segment::Ray {
                angle, from_radius, ..
            } => from_radius.is_finite().then(|| Cplx::from_polar(from_radius, angle)),
            Segment::Arc {
                radius, from_angle, ..
            } => Some(Cplx::from_polar(radius, from_angle)),
            Segment::Chord { from, .. } => Some(from),
        }
    }

    fn end(&self) -> Option<Cplx> {
        match *self {
            Segment::Ray {
                angle, to_radius, ..
            } => to_radius.is_finite().then(|| Cplx::from_polar(to_radius, angle)),
            Segment::Arc {
                radius, to_angle, ..
            } => Some(Cplx::from_polar(radius, to_angle)),
            Segment::Chord { to, .. } => Some(to),
        }
    }

    /// Distance from a point to this segment.
    pub fn distance_to(&self, p: Cplx) -> Real {
        match *self {
            Segment::Ray {
                angle,
                from_radius,
                to_radius,
            } => {
                let (lo, hi) = if from_radius <= to_radius {
                    (from_radius, to_radius)
                } else {
                    (to_radius, from_radius)
                };
                let dir = Cplx::from_polar(1.0, angle);
                // projection of p onto the ray direction
                let t = (p * dir.conj()).re;
                let t = t.clamp(lo, if hi.is_finite() { hi } else { Real::MAX });
                (p - dir * t).norm()
            }
            Segment::Arc {
                radius,
                from_angle,
                to_angle,
            } => {
                let (lo, hi) = if from_angle <= to_angle {
                    (from_angle, to_angle)
                } else {
                    (to_angle, from_angle)
                };
                let a = p.arg();
                // candidate angles: clamped projection plus 2π-shifted versions
                let mut best = Real::MAX;
                for shift in [-2.0 * std::f64::consts::PI, 0.0, 2.0 * std::f64::consts::PI] {
                    let cand = (a + shift).clamp(lo, hi);
                    let q = Cplx::from_polar(radius, cand);
                    best = best.min((p - q).norm());
                }
                best
            }
            Segment::Chord { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                if len2 == 0.0 {
                    return (p - from).norm();
                }
                let t = ((p - from) * d.conj()).re / len2;
                (p - (from + d * t.clamp(0.0, 1.0))).norm()
            }
        }
    }
}

/// Positively oriented piecewise integration path.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourPath {
    pub segments: Vec<Segment>,
    /// Sector half-angle `δ′` of the bounding rays.
    pub angle: Real,
    /// Inner radius of the origin detour (zero for a plain sector boundary).
    pub inner_radius: Real,
    pub variant: PathVariant,
}

/// The path families used by the calculus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathVariant {
    /// `∂Σ_{δ′}`: two rays meeting at the origin.
    SectorBoundary,
    /// `∂(B_r(0) ∪ Σ_{δ′})`: rays from radius `r` plus the far arc
    /// through the left half-plane.
    BallUnionSector,
    /// `∂(B_r(0)^c ∩ Σ_{δ′})`: rays from radius `r` plus the near arc
    /// through the right half-plane.
    BallComplementSector,
    /// Rays from radius `r` joined by the vertical chord through
    /// `r·e^{±iθ}`.
    ChordKeyhole,
}

impl ContourPath {
    /// Minimal distance from the path to a point set.
    pub fn distance_to_spectrum(&self, spectrum: &[Cplx]) -> Real {
        spectrum
            .iter()
            .map(|&z| {
                self.segments
                    .iter()
                    .map(|s| s.distance_to(z))
                    .fold(Real::MAX, Real::min)
            })
            .fold(Real::MAX, Real::min)
    }

    /// Checks that every point of `spectrum` lies in the region the path
    /// positively encloses.
    pub fn encloses(&self, spectrum: &[Cplx]) -> bool {
        spectrum.iter().all(|&z| {
            let (r, a) = (z.norm(), z.arg());
            match self.variant {
                PathVariant::SectorBoundary => a.abs() < self.angle,
                PathVariant::BallUnionSector => a.abs() < self.angle || r < self.inner_radius,
                PathVariant::BallComplementSector | PathVariant::ChordKeyhole => {
                    a.abs() < self.angle && r > self.inner_radius
                }
            }
        })
    }

    /// Endpoint continuity of consecutive segments.
    pub fn is_connected(&self) -> bool {
        self.segments.windows(2).all(|w| match (w[0].end(), w[1].start()) {
            (Some(a), Some(b)) => {
                let scale = a.norm().max(b.norm()).max(1e-300);
                (a - b).norm() <= 1e-12 * scale
            }
            _ => false,
        })
    }
}

/// Builds one of the four keyhole-path variants at sector angle
/// `delta_prime` with detour radius `r` (ignored for `SectorBoundary`).
pub fn build_keyhole_path(delta_prime: Real, r: Real, variant: PathVariant) -> Result<ContourPath> {
    if !(delta_prime > 0.0 && delta_prime < std::f64::consts::FRAC_PI_2) {
        return Err(Error::domain(format!(
            "path angle must lie in (0, π/2), got {delta_prime}"
        )));
    }
    let needs_r = !matches!(variant, PathVariant::SectorBoundary);
    if needs_r && !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain(format!("ball variants need r > 0, got {r}")));
    }
    let d = delta_prime;
    let inf = Real::INFINITY;
    let segments = match variant {
        PathVariant::SectorBoundary => vec![
            Segment::Ray {
                angle: d,
                from_radius: inf,
                to_radius: 0.0,
            },
            Segment::Ray {
                angle: -d,
                from_radius: 0.0,
                to_radius: inf,
            },
        ],
        PathVariant::BallUnionSector => vec![
            Segment::Ray {
                angle: d,
                from_radius: inf,
                to_radius: r,
            },
            // far arc through the left half-plane, split at ±π to keep
            // branch-cut functions off the negative axis nodes
            Segment::Arc {
                radius: r,
                from_angle: d,
                to_angle: std::f64::consts::PI,
            },
            Segment::Arc {
                radius: r,
                from_angle: std::f64::consts::PI,
                to_angle: 2.0 * std::f64::consts::PI - d,
            },
            Segment::Ray {
                angle: -d,
                from_radius: r,
                to_radius: inf,
            },
        ],
        PathVariant::BallComplementSector => vec![
            Segment::Ray {
                angle: d,
                from_radius: inf,
                to_radius: r,
            },
            Segment::Arc {
                radius: r,
                from_angle: d,
                to_angle: -d,
            },
            Segment::Ray {
                angle: -d,
                from_radius: r,
                to_radius: inf,
            },
        ],
        PathVariant::ChordKeyhole => {
            let top = Cplx::from_polar(r, d);
            vec![
                Segment::Ray {
                    angle: d,
                    from_radius: inf,
                    to_radius: r,
                },
                Segment::Chord {
                    from: top,
                    to: top.conj(),
                },
                Segment::Ray {
                    angle: -d,
                    from_radius: r,
                    to_radius: inf,
                },
            ]
        }
    };
    let path = ContourPath {
        segments,
        angle: d,
        inner_radius: if needs_r { r } else { 0.0 },
        variant,
    };
    debug_assert!(path.is_connected());
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn sector_boundary_shape() {
        let p = build_keyhole_path(FRAC_PI_4, 0.0, PathVariant::SectorBoundary).unwrap();
        assert_eq!(p.segments.len(), 2);
        assert!(p.is_connected());
        assert!(p.encloses(&[Cplx::new(1.0, 0.0)]));
        assert!(!p.encloses(&[Cplx::new(0.0, 1.0)]));
    }

    #[test]
    fn ball_union_arc_sweeps_left_half_plane() {
        let p = build_keyhole_path(FRAC_PI_4, 1.0, PathVariant::BallUnionSector).unwrap();
        assert!(p.is_connected());
        // arc pieces jointly cover angle 2π − 2δ′
        let total: f64 = p
            .segments
            .iter()
            .filter_map(|s| match *s {
                Segment::Arc {
                    from_angle,
                    to_angle,
                    ..
                } => Some(to_angle - from_angle),
                _ => None,
            })
            .sum();
        assert!((total - (2.0 * PI - 2.0 * FRAC_PI_4)).abs() < 1e-14);
        // encloses the origin and the sector
        assert!(p.encloses(&[Cplx::new(0.1, 0.0), Cplx::new(5.0, 1.0)]));
    }

    #[test]
    fn chord_keyhole_is_vertical() {
        let r = 2.0;
        let p = build_keyhole_path(FRAC_PI_4, r, PathVariant::ChordKeyhole).unwrap();
        match p.segments[1] {
            Segment::Chord { from, to } => {
                assert!((from.re - to.re).abs() < 1e-14);
                assert!((from.im - r * FRAC_PI_4.sin()).abs() < 1e-14);
                assert!(((from.im - to.im) - 2.0 * r * FRAC_PI_4.sin()).abs() < 1e-14);
            }
            _ => panic!("expected chord"),
        }
        assert!(p.is_connected());
    }

    #[test]
    fn complement_variant_excludes_ball() {
        let p = build_keyhole_path(FRAC_PI_4, 1.0, PathVariant::BallComplementSector).unwrap();
        assert!(p.encloses(&[Cplx::new(2.0, 0.0)]));
        assert!(!p.encloses(&[Cplx::new(0.5, 0.0)]));
        assert!(p.is_connected());
    }

    #[test]
    fn angle_validation() {
        assert!(build_keyhole_path(0.0, 1.0, PathVariant::SectorBoundary).is_err());
        assert!(build_keyhole_path(1.6, 1.0, PathVariant::SectorBoundary).is_err());
        assert!(build_keyhole_path(FRAC_PI_4, 0.0, PathVariant::ChordKeyhole).is_err());
    }

    #[test]
    fn distances() {
        let p = build_keyhole_path(FRAC_PI_4, 1.0, PathVariant::BallComplementSector).unwrap();
        // point on the positive axis beyond the arc
        let d = p.distance_to_spectrum(&[Cplx::new(2.0, 0.0)]);
        // nearest approach is either the arc (distance 1) or the rays
        let ray_dist = 2.0 * FRAC_PI_4.sin();
        assert!((d - ray_dist.min(1.0)).abs() < 1e-12);
    }
}
