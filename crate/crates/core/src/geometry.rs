//! Discrete sample sets for the two point sets `E` and `F`.
//!
//! Every set is a union of simple shapes sampled at a fixed number of
//! points. Shapes serialize to JSON with a `"shape"` tag and complex numbers
//! written as `[re, im]` pairs.

use std::collections::HashSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// A declarative shape sampled into a finite list of points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShapeSpec {
    /// `center + radius * exp(2 pi i k / count)`, `k = 1..=count`.
    Circle { center: Complex64, radius: f64, count: usize },
    /// Chebyshev points of the second kind on the segment `[a, b]`.
    Interval { endpoint_a: Complex64, endpoint_b: Complex64, count: usize },
    /// `center + exp(i rotation) (semi_x cos t + i semi_y sin t)` at the
    /// circle angles.
    Ellipse {
        center: Complex64,
        semi_x: f64,
        semi_y: f64,
        #[serde(default)]
        rotation: f64,
        count: usize,
    },
    /// Equispaced angles from `angle_start` to `angle_end`, both included.
    Arc { center: Complex64, radius: f64, angle_start: f64, angle_end: f64, count: usize },
    /// Chebyshev points on each side between consecutive vertices. Close the
    /// polygon by repeating the first vertex.
    Polyline { vertices: Vec<Complex64>, count_per_side: usize },
    /// `anchor - 10^t` for `t` equispaced in `[decade_start, decade_end]`.
    GradedRay { anchor: Complex64, decade_start: f64, decade_end: f64, count: usize },
    /// `scale * z + shift` applied to every point of `inner`.
    Transform {
        inner: Box<ShapeSpec>,
        #[serde(default = "one")]
        scale: Complex64,
        #[serde(default)]
        shift: Complex64,
    },
}

/// `exp(i theta)` with components below 1e-15 flushed to zero, so that
/// quarter-turn angles land exactly on the axes.
fn cis(theta: f64) -> Complex64 {
    let (s, c) = theta.sin_cos();
    let snap = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    Complex64::new(snap(c), snap(s))
}

fn check_count(count: usize, what: &'static str) -> Result<()> {
    if count == 0 {
        Err(Error::EmptySet(what))
    } else {
        Ok(())
    }
}

fn check_finite(z: Complex64, what: &str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidShape(format!("{what} must be finite")))
    }
}

fn check_positive(x: f64, what: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidShape(format!("{what} must be positive, got {x}")))
    }
}

/// `m` Chebyshev points of the second kind mapped onto the segment from `a`
/// to `b`, ordered from `a` to `b`. Endpoints are hit exactly.
pub fn chebyshev_points(a: Complex64, b: Complex64, m: usize) -> Result<Vec<Complex64>> {
    check_count(m, "chebyshev_points needs m >= 1")?;
    check_finite(a, "segment endpoint")?;
    check_finite(b, "segment endpoint")?;
    if a == b {
        return Err(Error::DegenerateSegment);
    }
    if m == 1 {
        return Ok(vec![(a + b) * 0.5]);
    }
    let n = (m - 1) as f64;
    Ok((0..m)
        .map(|j| {
            // sin form keeps the nodes exactly antisymmetric about the midpoint
            let x = (PI * (2.0 * j as f64 - n) / (2.0 * n)).sin();
            (a * (1.0 - x) + b * (1.0 + x)) * 0.5
        })
        .collect())
}

/// The `m`-th roots of unity `exp(2 pi i k / m)`, `k = 1..=m`.
///
/// Points `k` and `m - k` are exact conjugates.
pub fn unit_circle_points(m: usize) -> Result<Vec<Complex64>> {
    check_count(m, "unit_circle_points needs m >= 1")?;
    Ok((1..=m)
        .map(|k| {
            let kk = k % m;
            if 2 * kk > m {
                cis(2.0 * PI * (m - kk) as f64 / m as f64).conj()
            } else {
                cis(2.0 * PI * kk as f64 / m as f64)
            }
        })
        .collect())
}

impl ShapeSpec {
    /// Samples the shape. Validates parameters first.
    pub fn points(&self) -> Result<Vec<Complex64>> {
        match self {
            ShapeSpec::Circle { center, radius, count } => {
                check_finite(*center, "circle center")?;
                check_positive(*radius, "circle radius")?;
                Ok(unit_circle_points(*count)?.into_iter().map(|s| center + s * radius).collect())
            }
            ShapeSpec::Interval { endpoint_a, endpoint_b, count } => chebyshev_points(*endpoint_a, *endpoint_b, *count),
            ShapeSpec::Ellipse { center, semi_x, semi_y, rotation, count } => {
                check_finite(*center, "ellipse center")?;
                check_positive(*semi_x, "ellipse semi_x")?;
                check_positive(*semi_y, "ellipse semi_y")?;
                if !rotation.is_finite() {
                    return Err(Error::InvalidShape("ellipse rotation must be finite".into()));
                }
                let rot = if *rotation == 0.0 { one() } else { cis(*rotation) };
                Ok(unit_circle_points(*count)?
                    .into_iter()
                    .map(|s| center + rot * Complex64::new(semi_x * s.re, semi_y * s.im))
                    .collect())
            }
            ShapeSpec::Arc { center, radius, angle_start, angle_end, count } => {
                check_count(*count, "arc count must be >= 1")?;
                check_finite(*center, "arc center")?;
                check_positive(*radius, "arc radius")?;
                if !angle_start.is_finite() || !angle_end.is_finite() {
                    return Err(Error::InvalidShape("arc angles must be finite".into()));
                }
                let last = (*count - 1).max(1) as f64;
                Ok((0..*count)
                    .map(|j| {
                        let theta = if j + 1 == *count && *count > 1 {
                            *angle_end
                        } else {
                            angle_start + (angle_end - angle_start) * j as f64 / last
                        };
                        center + cis(theta) * radius
                    })
                    .collect())
            }
            ShapeSpec::Polyline { vertices, count_per_side } => {
                if vertices.len() < 2 {
                    return Err(Error::InvalidShape("polyline needs at least two vertices".into()));
                }
                let mut out = Vec::with_capacity(count_per_side * (vertices.len() - 1));
                for side in vertices.windows(2) {
                    out.extend(chebyshev_points(side[0], side[1], *count_per_side)?);
                }
                Ok(out)
            }
            ShapeSpec::GradedRay { anchor, decade_start, decade_end, count } => {
                check_count(*count, "graded ray count must be >= 1")?;
                check_finite(*anchor, "ray anchor")?;
                if !decade_start.is_finite() || !decade_end.is_finite() {
                    return Err(Error::InvalidShape("ray decades must be finite".into()));
                }
                let last = (*count - 1).max(1) as f64;
                Ok((0..*count)
                    .map(|j| {
                        let t = if j + 1 == *count && *count > 1 {
                            *decade_end
                        } else {
                            decade_start + (decade_end - decade_start) * j as f64 / last
                        };
                        anchor - 10f64.powf(t)
                    })
                    .collect())
            }
            ShapeSpec::Transform { inner, scale, shift } => {
                check_finite(*scale, "transform scale")?;
                check_finite(*shift, "transform shift")?;
                if scale.norm() == 0.0 {
                    return Err(Error::InvalidShape("transform scale must be nonzero".into()));
                }
                Ok(inner.points()?.into_iter().map(|z| scale * z + shift).collect())
            }
        }
    }

    /// The shape with every complex parameter conjugated and every angle
    /// negated; its points are the conjugates of this shape's points.
    pub fn conjugate(&self) -> ShapeSpec {
        match self {
            ShapeSpec::Circle { center, radius, count } => {
                ShapeSpec::Circle { center: center.conj(), radius: *radius, count: *count }
            }
            ShapeSpec::Interval { endpoint_a, endpoint_b, count } => {
                ShapeSpec::Interval { endpoint_a: endpoint_a.conj(), endpoint_b: endpoint_b.conj(), count: *count }
            }
            ShapeSpec::Ellipse { center, semi_x, semi_y, rotation, count } => ShapeSpec::Ellipse {
                center: center.conj(),
                semi_x: *semi_x,
                semi_y: *semi_y,
                rotation: -rotation,
                count: *count,
            },
            ShapeSpec::Arc { center, radius, angle_start, angle_end, count } => ShapeSpec::Arc {
                center: center.conj(),
                radius: *radius,
                angle_start: -angle_start,
                angle_end: -angle_end,
                count: *count,
            },
            ShapeSpec::Polyline { vertices, count_per_side } => ShapeSpec::Polyline {
                vertices: vertices.iter().map(|v| v.conj()).collect(),
                count_per_side: *count_per_side,
            },
            ShapeSpec::GradedRay { anchor, decade_start, decade_end, count } => ShapeSpec::GradedRay {
                anchor: anchor.conj(),
                decade_start: *decade_start,
                decade_end: *decade_end,
                count: *count,
            },
            ShapeSpec::Transform { inner, scale, shift } => {
                ShapeSpec::Transform { inner: Box::new(inner.conjugate()), scale: scale.conj(), shift: shift.conj() }
            }
        }
    }
}

/// Sample points of `E` (target -1) and `F` (target +1).
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    pub points_e: Vec<Complex64>,
    pub points_f: Vec<Complex64>,
}

fn bit_key(z: Complex64) -> (u64, u64) {
    // +0.0 folds -0.0 onto 0.0 so the key matches `==`
    ((z.re + 0.0).to_bits(), (z.im + 0.0).to_bits())
}

fn collect_side(shapes: &[ShapeSpec], side: &'static str) -> Result<Vec<Complex64>> {
    if shapes.is_empty() {
        return Err(Error::EmptySet(side));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for shape in shapes {
        for z in shape.points()? {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite("generated sample point"));
            }
            if seen.insert(bit_key(z)) {
                out.push(z);
            }
        }
    }
    Ok(out)
}

impl SampleSet {
    /// Builds a sample set from explicit point lists, deduplicating each side
    /// and checking disjointness.
    pub fn from_points(points_e: Vec<Complex64>, points_f: Vec<Complex64>) -> Result<Self> {
        let dedup = |pts: Vec<Complex64>, side: &'static str| -> Result<Vec<Complex64>> {
            if pts.is_empty() {
                return Err(Error::EmptySet(side));
            }
            let mut seen = HashSet::new();
            let mut out = Vec::with_capacity(pts.len());
            for z in pts {
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite("sample point"));
                }
                if seen.insert(bit_key(z)) {
                    out.push(z);
                }
            }
            Ok(out)
        };
        let set = SampleSet { points_e: dedup(points_e, "E")?, points_f: dedup(points_f, "F")? };
        set.check_disjoint()?;
        Ok(set)
    }

    fn check_disjoint(&self) -> Result<()> {
        let e_keys: HashSet<_> = self.points_e.iter().map(|&z| bit_key(z)).collect();
        let shared: Vec<Complex64> = self.points_f.iter().copied().filter(|&z| e_keys.contains(&bit_key(z))).collect();
        if let Some(first) = shared.first() {
            return Err(Error::NotDisjoint { count: shared.len(), first: format!("{first}") });
        }
        Ok(())
    }

    /// All samples, `E` first, then `F`.
    pub fn all_points(&self) -> Vec<Complex64> {
        self.points_e.iter().chain(&self.points_f).copied().collect()
    }

    /// The sign data matching [`SampleSet::all_points`]: -1 on `E`, +1 on `F`.
    pub fn sign_data(&self) -> Vec<Complex64> {
        let m1 = Complex64::new(-1.0, 0.0);
        std::iter::repeat_n(m1, self.points_e.len()).chain(std::iter::repeat_n(one(), self.points_f.len())).collect()
    }

    pub fn len(&self) -> usize {
        self.points_e.len() + self.points_f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The same problem with the roles of `E` and `F` exchanged.
    pub fn swapped(&self) -> SampleSet {
        SampleSet { points_e: self.points_f.clone(), points_f: self.points_e.clone() }
    }

    /// The mirror image in the real axis, point order kept. Conjugating the
    /// shape specs instead can reorder samples (a circle changes
    /// orientation), which changes the solver's tie-breaks.
    pub fn conjugate(&self) -> SampleSet {
        let conj = |pts: &[Complex64]| pts.iter().map(|z| z.conj()).collect();
        SampleSet { points_e: conj(&self.points_e), points_f: conj(&self.points_f) }
    }

    /// `(x_min, x_max, y_min, y_max)` of all samples.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        let mut bb = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for z in self.points_e.iter().chain(&self.points_f) {
            bb.0 = bb.0.min(z.re);
            bb.1 = bb.1.max(z.re);
            bb.2 = bb.2.min(z.im);
            bb.3 = bb.3.max(z.im);
        }
        bb
    }
}

/// Samples both shape lists and assembles a [`SampleSet`].
pub fn build_sample_set(shapes_e: &[ShapeSpec], shapes_f: &[ShapeSpec]) -> Result<SampleSet> {
    let set = SampleSet { points_e: collect_side(shapes_e, "E")?, points_f: collect_side(shapes_f, "F")? };
    set.check_disjoint()?;
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn chebyshev_three_points() {
        let p = chebyshev_points(c(-1.0, 0.0), c(1.0, 0.0), 3).unwrap();
        assert_eq!(p, vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn chebyshev_two_points_are_endpoints() {
        let (a, b) = (c(-1.0, -0.75), c(-1.0, 0.75));
        assert_eq!(chebyshev_points(a, b, 2).unwrap(), vec![a, b]);
    }

    #[test]
    fn chebyshev_two_hundred_on_interval() {
        let p = chebyshev_points(c(-1.5, 0.0), c(-0.5, 0.0), 200).unwrap();
        assert_eq!(p.len(), 200);
        assert_eq!(p[0], c(-1.5, 0.0));
        assert_eq!(p[199], c(-0.5, 0.0));
        let min = p.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        let max = p.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        assert_eq!((min, max), (-1.5, -0.5));
        for j in 0..200 {
            assert!((p[j].re + 1.0 + (p[199 - j].re + 1.0)).abs() < 1e-15);
            assert_eq!(p[j].im, 0.0);
        }
    }

    #[test]
    fn chebyshev_errors() {
        assert_eq!(chebyshev_points(one(), c(2.0, 0.0), 0), Err(Error::EmptySet("chebyshev_points needs m >= 1")));
        assert_eq!(chebyshev_points(one(), one(), 5), Err(Error::DegenerateSegment));
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(unit_circle_points(4).unwrap(), vec![c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0), c(1.0, 0.0)]);
        assert_eq!(unit_circle_points(1).unwrap(), vec![one()]);
        let s = unit_circle_points(200).unwrap();
        assert_eq!(s.len(), 200);
        assert!(s.iter().all(|z| (z.norm() - 1.0).abs() <= 1e-15));
        assert_eq!(s[199], one());
        for k in 1..200 {
            assert_eq!(s[k - 1], s[199 - k].conj());
        }
        assert!(unit_circle_points(0).is_err());
    }

    #[test]
    fn two_disks_sample_counts() {
        let e = ShapeSpec::Circle { center: c(-1.0, 0.0), radius: 0.5, count: 200 };
        let f = ShapeSpec::Circle { center: c(1.0, 0.0), radius: 0.5, count: 200 };
        let set = build_sample_set(&[e], &[f]).unwrap();
        assert_eq!((set.points_e.len(), set.points_f.len()), (200, 200));
        assert_eq!(set.sign_data().iter().filter(|z| z.re < 0.0).count(), 200);
    }

    #[test]
    fn overlapping_sides_rejected() {
        let s = ShapeSpec::Circle { center: c(0.0, 0.0), radius: 1.0, count: 10 };
        assert!(matches!(
            build_sample_set(std::slice::from_ref(&s), std::slice::from_ref(&s)),
            Err(Error::NotDisjoint { count: 10, .. })
        ));
    }

    #[test]
    fn empty_side_rejected() {
        let s = ShapeSpec::Circle { center: c(0.0, 0.0), radius: 1.0, count: 10 };
        assert_eq!(build_sample_set(&[], &[s]), Err(Error::EmptySet("E")));
    }

    #[test]
    fn invalid_shapes() {
        let bad = [
            ShapeSpec::Circle { center: c(0.0, 0.0), radius: -1.0, count: 3 },
            ShapeSpec::Circle { center: c(0.0, 0.0), radius: 1.0, count: 0 },
            ShapeSpec::Ellipse { center: c(0.0, 0.0), semi_x: 0.0, semi_y: 1.0, rotation: 0.0, count: 3 },
            ShapeSpec::Polyline { vertices: vec![one()], count_per_side: 3 },
            ShapeSpec::Circle { center: c(f64::NAN, 0.0), radius: 1.0, count: 3 },
        ];
        for shape in bad {
            assert!(shape.points().is_err(), "{shape:?}");
        }
    }

    #[test]
    fn polyline_shares_corners() {
        let square = ShapeSpec::Polyline {
            vertices: vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0), c(0.0, 0.0)],
            count_per_side: 10,
        };
        assert_eq!(square.points().unwrap().len(), 40);
        let far = ShapeSpec::Circle { center: c(5.0, 0.0), radius: 1.0, count: 4 };
        let set = build_sample_set(&[square], &[far]).unwrap();
        assert_eq!(set.points_e.len(), 36);
    }

    #[test]
    fn graded_ray_matches_logspace() {
        let ray = ShapeSpec::GradedRay { anchor: one(), decade_start: 0.0, decade_end: 5.0, count: 200 };
        let p = ray.points().unwrap();
        assert_eq!(p[0], c(0.0, 0.0));
        assert_eq!(p[199], c(1.0 - 1e5, 0.0));
        assert!(p.windows(2).all(|w| w[1].re < w[0].re));
    }

    #[test]
    fn shape_json_round_trip() {
        let shape = ShapeSpec::Transform {
            inner: Box::new(ShapeSpec::Interval { endpoint_a: c(-0.5, 0.0), endpoint_b: c(0.5, 0.0), count: 100 }),
            scale: c(0.0, 1.0),
            shift: c(1.0, -1.0),
        };
        let json = serde_json::to_string(&shape).unwrap();
        assert!(json.contains("\"shape\":\"transform\""));
        let back: ShapeSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, shape);
        let with_defaults: ShapeSpec = serde_json::from_str(
            r#"{"shape":"transform","inner":{"shape":"circle","center":[0,0],"radius":1,"count":4}}"#,
        )
        .unwrap();
        assert_eq!(with_defaults.points().unwrap(), unit_circle_points(4).unwrap());
        let unknown =
            serde_json::from_str::<ShapeSpec>(r#"{"shape":"circle","center":[0,0],"radius":1,"count":4,"x":1}"#);
        assert!(unknown.is_err());
    }

    fn arb_complex() -> impl Strategy<Value = Complex64> {
        (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(re, im)| c(re, im))
    }

    fn arb_shape() -> impl Strategy<Value = ShapeSpec> {
        prop_oneof![
            (arb_complex(), 0.1f64..2.0, 1usize..40).prop_map(|(center, radius, count)| ShapeSpec::Circle {
                center,
                radius,
                count
            }),
            (arb_complex(), arb_complex(), 1usize..40).prop_filter_map("degenerate", |(a, b, count)| {
                (a != b).then_some(ShapeSpec::Interval { endpoint_a: a, endpoint_b: b, count })
            }),
            (arb_complex(), 0.1f64..2.0, 0.1f64..2.0, -3.0f64..3.0, 1usize..40).prop_map(
                |(center, semi_x, semi_y, rotation, count)| ShapeSpec::Ellipse {
                    center,
                    semi_x,
                    semi_y,
                    rotation,
                    count
                }
            ),
            (arb_complex(), 0.1f64..2.0, -3.0f64..3.0, -3.0f64..3.0, 1usize..40).prop_map(
                |(center, radius, angle_start, angle_end, count)| ShapeSpec::Arc {
                    center,
                    radius,
                    angle_start,
                    angle_end,
                    count
                }
            ),
        ]
    }

    proptest! {
        #[test]
        fn conjugating_parameters_conjugates_points(shape in arb_shape()) {
            // same point set; circle-based shapes come out in reversed order
            let key = |z: &Complex64| (z.re.to_bits(), z.im.to_bits());
            let mut p: Vec<_> = shape.points().unwrap().iter().map(|z| z.conj() + 0.0).collect();
            let mut q: Vec<_> = shape.conjugate().points().unwrap().iter().map(|z| z + 0.0).collect();
            p.sort_by_key(key);
            q.sort_by_key(key);
            prop_assert_eq!(p, q);
        }

        #[test]
        fn transform_is_affine_image(shape in arb_shape(), s in arb_complex(), t in arb_complex()) {
            prop_assume!(s.norm() > 1e-3);
            let inner = shape.points().unwrap();
            let mapped = ShapeSpec::Transform { inner: Box::new(shape), scale: s, shift: t }.points().unwrap();
            prop_assert_eq!(inner.len(), mapped.len());
            for (z, w) in inner.iter().zip(&mapped) {
                prop_assert_eq!(s * z + t, *w);
            }
        }

        #[test]
        fn generated_points_are_finite_and_counted(shape in arb_shape()) {
            let p = shape.points().unwrap();
            prop_assert!(p.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
            let expected = match &shape {
                ShapeSpec::Circle { count, .. } | ShapeSpec::Interval { count, .. }
                | ShapeSpec::Ellipse { count, .. } | ShapeSpec::Arc { count, .. } => *count,
                _ => unreachable!(),
            };
            prop_assert_eq!(p.len(), expected);
        }
    }
}
