//! Named geometries for the reference problems.
//!
//! `S` below is the 200 roots of unity, `T` the 101 of them with
//! nonnegative real part.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, FRAC_PI_8, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{build_sample_set, SampleSet, ShapeSpec};
use crate::zolotarev::ProblemSpec;

pub const PRESET_NAMES: [&str; 17] = [
    "fig1a", "fig1b", "fig1c", "fig1d", "fig1e", "fig1f", "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b",
    "fig3c", "fig3d", "fig5", "fig6", "fig7",
];

/// Capacity of the two-rectangle condenser of `fig7`.
pub const FIG7_CAPACITY: f64 = 2.78805;

#[derive(Clone, Debug, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub shapes_e: Vec<ShapeSpec>,
    pub shapes_f: Vec<ShapeSpec>,
    pub degree: usize,
    pub lawson_steps: usize,
    pub damping: f64,
    pub capacity: Option<f64>,
}

impl Preset {
    pub fn samples(&self) -> Result<SampleSet> {
        build_sample_set(&self.shapes_e, &self.shapes_f)
    }

    /// A problem spec with this preset's degree, step count and damping, and
    /// sign blending on.
    pub fn problem(&self) -> Result<ProblemSpec> {
        let mut spec = ProblemSpec::new(self.samples()?, self.degree);
        spec.lawson_opts.steps = self.lawson_steps;
        spec.lawson_opts.delta = self.damping;
        Ok(spec)
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn circle(center: Complex64, radius: f64) -> ShapeSpec {
    ShapeSpec::Circle { center, radius, count: 200 }
}

fn interval(a: Complex64, b: Complex64, count: usize) -> ShapeSpec {
    ShapeSpec::Interval { endpoint_a: a, endpoint_b: b, count }
}

fn affine(inner: ShapeSpec, scale: Complex64, shift: Complex64) -> ShapeSpec {
    ShapeSpec::Transform { inner: Box::new(inner), scale, shift }
}

fn half_circle() -> ShapeSpec {
    ShapeSpec::Arc { center: c(0.0, 0.0), radius: 1.0, angle_start: -FRAC_PI_2, angle_end: FRAC_PI_2, count: 101 }
}

/// Closed polygon through `vertices`, `per_side` Chebyshev points per side.
fn polygon(vertices: &[Complex64], per_side: usize) -> ShapeSpec {
    let mut v = vertices.to_vec();
    v.push(vertices[0]);
    ShapeSpec::Polyline { vertices: v, count_per_side: per_side }
}

/// Equilateral triangle inscribed in the circle of radius 0.5 about `center`,
/// first vertex at angle `phase`.
fn triangle(center: Complex64, phase: f64) -> ShapeSpec {
    let v: Vec<_> = (0..3).map(|k| center + Complex64::from_polar(0.5, phase + 2.0 * PI * k as f64 / 3.0)).collect();
    polygon(&v, 100)
}

/// Two perpendicular segments of length 1 crossing at `center`, turned by `angle`.
fn cross(center: Complex64, angle: f64) -> Vec<ShapeSpec> {
    let rot = Complex64::from_polar(1.0, angle);
    vec![
        affine(interval(c(-0.5, 0.0), c(0.5, 0.0), 100), rot, center),
        affine(interval(c(0.0, -0.5), c(0.0, 0.5), 100), rot, center),
    ]
}

fn rectangle(x0: f64, x1: f64, y0: f64, y1: f64, per_short: usize, per_long: usize) -> Vec<ShapeSpec> {
    let (a, b, cc, d) = (c(x0, y0), c(x1, y0), c(x1, y1), c(x0, y1));
    let count = |p: Complex64, q: Complex64| {
        if (p - q).norm() <= (x1 - x0).min(y1 - y0) + 1e-12 {
            per_short
        } else {
            per_long
        }
    };
    vec![
        interval(a, b, count(a, b)),
        interval(b, cc, count(b, cc)),
        interval(cc, d, count(cc, d)),
        interval(d, a, count(d, a)),
    ]
}

/// The yin tadpole: the left half of the unit circle, a half-size semicircle
/// from `i` to `0` bulging right, and one from `0` to `-i` bulging left,
/// all shifted left by 0.5.
fn yin() -> Vec<ShapeSpec> {
    let shift = c(-0.5, 0.0);
    vec![
        affine(half_circle(), c(-1.0, 0.0), shift),
        affine(half_circle(), c(0.5, 0.0), c(0.0, 0.5) + shift),
        affine(half_circle(), c(-0.5, 0.0), c(0.0, -0.5) + shift),
    ]
}

fn negate(shapes: Vec<ShapeSpec>) -> Vec<ShapeSpec> {
    shapes.into_iter().map(|s| affine(s, c(-1.0, 0.0), c(0.0, 0.0))).collect()
}

fn preset(name: &'static str, e: Vec<ShapeSpec>, f: Vec<ShapeSpec>, steps: usize) -> Preset {
    Preset { name, shapes_e: e, shapes_f: f, degree: 12, lawson_steps: steps, damping: 0.95, capacity: None }
}

/// Looks up a preset by name.
pub fn preset_by_name(name: &str) -> Result<Preset> {
    let p = match name {
        "fig1a" => preset("fig1a", vec![circle(c(-1.0, 0.0), 0.5)], vec![circle(c(1.0, 0.0), 0.5)], 200),
        "fig1b" => preset(
            "fig1b",
            vec![interval(c(-1.5, 0.0), c(-0.5, 0.0), 200)],
            vec![interval(c(0.5, 0.0), c(1.5, 0.0), 200)],
            200,
        ),
        "fig1c" => preset(
            "fig1c",
            vec![interval(c(-1.0, -0.75), c(-1.0, 0.75), 200)],
            // (0.2 Re S + i Im S) / sqrt(i)
            vec![ShapeSpec::Ellipse {
                center: c(1.0, 0.0),
                semi_x: 0.2,
                semi_y: 1.0,
                rotation: -FRAC_PI_4,
                count: 200,
            }],
            200,
        ),
        "fig1d" => preset("fig1d", yin(), negate(yin()), 200),
        "fig1e" => {
            // square of side 0.75 about -1 without its right side
            let h = 0.375;
            let sides = ShapeSpec::Polyline {
                vertices: vec![c(-1.0 + h, h), c(-1.0 - h, h), c(-1.0 - h, -h), c(-1.0 + h, -h)],
                count_per_side: 100,
            };
            preset("fig1e", vec![sides], vec![affine(half_circle(), c(-0.74, 0.0), c(1.0, 0.0))], 200)
        }
        "fig1f" => preset(
            "fig1f",
            vec![ShapeSpec::GradedRay { anchor: c(1.0, 0.0), decade_start: 0.0, decade_end: 5.0, count: 200 }],
            vec![interval(c(1.0, 0.0), c(2.0, 0.0), 200)],
            200,
        ),
        "fig2a" => preset(
            "fig2a",
            vec![circle(c(-1.0, 0.0), 0.5)],
            vec![circle(c(0.8, 0.6), 0.3), circle(c(0.8, -0.6), 0.3)],
            400,
        ),
        "fig2b" => preset(
            "fig2b",
            vec![interval(c(-2.0, 0.0), c(-1.0, 0.0), 100), interval(c(1.0, 0.0), c(2.0, 0.0), 100)],
            vec![interval(c(-0.5, 0.0), c(0.5, 0.0), 100)],
            400,
        ),
        "fig2c" => {
            let e = [cross(c(-1.0, 1.0), 0.0), cross(c(-1.0, -1.0), 0.0)].concat();
            let f = [cross(c(1.0, 1.0), 0.0), cross(c(1.0, -1.0), FRAC_PI_4)].concat();
            preset("fig2c", e, f, 400)
        }
        "fig2d" => {
            let s3 = 1.0 / 3f64.sqrt();
            let e = vec![
                triangle(c(-1.0, 0.0), FRAC_PI_6),
                triangle(c(-1.0 - s3, 1.0), FRAC_PI_6),
                triangle(c(-1.0 + s3, -1.0), FRAC_PI_6),
            ];
            let f = vec![triangle(c(1.0, 0.0), 0.0), triangle(c(1.0, 1.0), 0.0), triangle(c(1.0, -1.0), 0.0)];
            preset("fig2d", e, f, 400)
        }
        "fig3a" => preset("fig3a", vec![circle(c(0.2, 0.0), 0.5)], vec![circle(c(0.0, 0.0), 1.0)], 400),
        "fig3b" => {
            let rot = Complex64::from_polar(1.0, FRAC_PI_8);
            let square: Vec<_> =
                [c(0.5, 0.5), c(-0.5, 0.5), c(-0.5, -0.5), c(0.5, -0.5)].iter().map(|v| rot * v).collect();
            let ellipse =
                ShapeSpec::Ellipse { center: c(0.0, 0.0), semi_x: 1.5, semi_y: 1.0, rotation: 0.0, count: 200 };
            preset("fig3b", vec![polygon(&square, 100)], vec![ellipse], 400)
        }
        "fig3c" => preset(
            "fig3c",
            vec![ShapeSpec::Ellipse { center: c(0.0, 0.0), semi_x: 0.4, semi_y: 0.7, rotation: 0.2, count: 200 }],
            vec![circle(c(0.0, 0.0), 1.0)],
            400,
        ),
        "fig3d" => preset(
            "fig3d",
            vec![circle(c(0.1, 0.5), 0.3), circle(c(0.1, -0.5), 0.3)],
            vec![circle(c(0.0, 0.0), 1.0)],
            400,
        ),
        "fig5" => Preset {
            degree: 13,
            ..preset(
                "fig5",
                vec![interval(c(-1.5, 0.0), c(-0.5, 0.0), 200)],
                vec![interval(c(0.5, 0.0), c(1.5, 0.0), 200)],
                200,
            )
        },
        "fig6" => Preset {
            degree: 15,
            damping: 0.8,
            ..preset(
                "fig6",
                vec![interval(c(-1.8, 0.0), c(-0.2, 0.0), 100)],
                vec![interval(c(0.5, 0.0), c(1.5, 0.0), 100)],
                150,
            )
        },
        "fig7" => Preset {
            capacity: Some(FIG7_CAPACITY),
            ..preset("fig7", rectangle(-1.0, -0.25, -1.0, 1.0, 50, 100), rectangle(0.25, 1.0, -1.0, 1.0, 50, 100), 200)
        },
        other => return Err(Error::Config(format!("unknown preset {other:?}; known: {}", PRESET_NAMES.join(", ")))),
    };
    Ok(p)
}
