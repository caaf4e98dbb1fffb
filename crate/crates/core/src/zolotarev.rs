//! The sign problem (Z4) solved by AAA plus damped Lawson, and its
//! conversion to the ratio problem (Z3) through a Moebius map.
//!
//! With `tau` the sup-norm error of the best sign approximation `r_hat`,
//!
//! ```text
//! sigma = (tau / (1 + sqrt(1 - tau^2)))^2,    p = (1 - sigma) / (1 + sigma),
//! r_star(z) = sqrt(sigma) (p + r_hat(z)) / (p - r_hat(z)).
//! ```

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aaa::{aaa_fit, AaaOptions};
use crate::barycentric::{cdiv, BarycentricRational};
use crate::error::{Error, Result};
use crate::geometry::SampleSet;
use crate::lawson::{lawson_refine, LawsonOptions};

/// Warning attached to every solution whose error reaches 1.
pub const DEGREE_TOO_LOW: &str = "tau=1: degree too low";

/// Samples whose error is at least this fraction of `tau` count as extremal.
pub const EXTREMAL_FRACTION: f64 = 0.99;

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub samples: SampleSet,
    pub degree: usize,
    /// AAA settings; `degree` here is ignored in favor of `ProblemSpec::degree`.
    pub aaa_opts: AaaOptions,
    pub lawson_opts: LawsonOptions,
}

impl ProblemSpec {
    /// Degree `n` with the reference settings: sign blending, 200 Lawson
    /// steps, damping 0.95.
    pub fn new(samples: SampleSet, degree: usize) -> Self {
        Self {
            samples,
            degree,
            aaa_opts: AaaOptions { degree, sign_blend: true, tolerance: 0.0 },
            lawson_opts: LawsonOptions { steps: 200, delta: 0.95, sign_blend: true },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples.points_e.is_empty() {
            return Err(Error::EmptySet("E"));
        }
        if self.samples.points_f.is_empty() {
            return Err(Error::EmptySet("F"));
        }
        if self.samples.len() < self.degree + 2 {
            return Err(Error::TooFewSamples { needed: self.degree + 2, got: self.samples.len() });
        }
        self.lawson_opts.validate()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Z4Solution {
    pub r_hat: BarycentricRational,
    /// Max of `error_curve`.
    pub tau: f64,
    /// `|r_hat(z) - sign(z)|` at each sample, `E` first, then `F`.
    pub error_curve: Vec<f64>,
    /// Samples with error at least `0.99 tau`.
    pub extremal_points: Vec<Complex64>,
    /// Max error after AAA, then after each Lawson step.
    pub tau_history: Vec<f64>,
    /// Max error of the AAA fit before Lawson.
    pub aaa_error: f64,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Z3Solution {
    pub sigma: f64,
    pub p: f64,
    pub poles: Vec<Complex64>,
    pub zeros: Vec<Complex64>,
    pub min_on_f: f64,
    pub max_on_e: f64,
    pub r_hat: BarycentricRational,
}

impl Z3Solution {
    /// `r_star(z)`, evaluated through `r_hat`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let q = self.r_hat.evaluate(z).map(|e| e.value).unwrap_or_else(|_| self.r_hat.eval(z));
        let p = Complex64::new(self.p, 0.0);
        cdiv(p + q, p - q) * self.sigma.sqrt()
    }

    /// Inverts the Moebius map: the `r_hat` value belonging to an `r_star` value.
    pub fn r_hat_from_r_star(&self, r: Complex64) -> Complex64 {
        let s = Complex64::new(self.sigma.sqrt(), 0.0);
        cdiv(r - s, r + s) * self.p
    }
}

fn domain(what: &str, x: f64) -> Error {
    Error::Domain(format!("{what} must lie in (0, 1], got {x}"))
}

/// `sigma` from `tau`, both in `(0, 1]`.
pub fn tau_to_sigma(tau: f64) -> Result<f64> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(domain("tau", tau));
    }
    let root = ((1.0 - tau) * (1.0 + tau)).sqrt();
    let q = tau / (1.0 + root);
    Ok(q * q)
}

/// `tau` from `sigma`, both in `(0, 1]`.
pub fn sigma_to_tau(sigma: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(domain("sigma", sigma));
    }
    Ok(2.0 * sigma.sqrt() / (1.0 + sigma))
}

/// Lower bound `exp(-n / cap)` on `sigma_n` for a condenser of capacity `cap`.
pub fn capacity_bound(n: usize, cap: f64) -> Result<f64> {
    if !(cap > 0.0 && cap.is_finite()) {
        return Err(Error::Domain(format!("capacity must be positive and finite, got {cap}")));
    }
    Ok((-(n as f64) / cap).exp())
}

fn constant_zero(anchor: Complex64) -> BarycentricRational {
    let zero = Complex64::new(0.0, 0.0);
    BarycentricRational::new(vec![anchor], vec![zero], vec![Complex64::new(1.0, 0.0)]).expect("valid constant")
}

fn errors_of(r: &BarycentricRational, points: &[Complex64], data: &[Complex64]) -> (Vec<f64>, f64) {
    let curve: Vec<f64> = points
        .iter()
        .zip(data)
        .map(|(z, f)| {
            let e = (r.eval(*z) - f).norm();
            if e.is_nan() {
                f64::INFINITY
            } else {
                e
            }
        })
        .collect();
    let tau = curve.iter().fold(0.0, |a: f64, &b| a.max(b));
    (curve, tau)
}

pub fn solve_z4(spec: &ProblemSpec) -> Result<Z4Solution> {
    spec.validate()?;
    let points = spec.samples.all_points();
    let data = spec.samples.sign_data();
    let mut warnings = Vec::new();

    let (mut r_hat, tau_history, aaa_error) = if spec.degree == 0 {
        // the best constant for data in {-1, +1} is 0
        (constant_zero(points[0]), vec![1.0], 1.0)
    } else {
        let aaa = aaa_fit(&points, &data, &AaaOptions { degree: spec.degree, ..spec.aaa_opts })?;
        let state = lawson_refine(&aaa.fit, &points, &data, &spec.lawson_opts)?;
        (state.fit, state.tau_history, aaa.final_error)
    };

    let (mut error_curve, mut tau) = errors_of(&r_hat, &points, &data);
    if tau > 1.0 {
        warnings.push(format!("fit error {tau:e} exceeds 1; falling back to r_hat = 0"));
        r_hat = constant_zero(points[0]);
        (error_curve, tau) = errors_of(&r_hat, &points, &data);
    }
    if tau >= 1.0 {
        warnings.push(DEGREE_TOO_LOW.to_string());
    }
    let extremal_points =
        points.iter().zip(&error_curve).filter(|(_, &e)| e >= EXTREMAL_FRACTION * tau).map(|(z, _)| *z).collect();
    Ok(Z4Solution { r_hat, tau, error_curve, extremal_points, tau_history, aaa_error, warnings })
}

/// Applies the Moebius map to a Z4 solution on the sample set it came from.
pub fn z4_to_z3(z4: &Z4Solution, samples: &SampleSet) -> Result<Z3Solution> {
    if !(z4.tau < 1.0) {
        return Err(Error::DegreeTooLow(z4.tau));
    }
    let sigma = tau_to_sigma(z4.tau)?;
    let p = (1.0 - sigma) / (1.0 + sigma);
    let pc = Complex64::new(p, 0.0);
    // r_star vanishes where r_hat = -p and blows up where r_hat = +p
    let zeros = z4.r_hat.shift_values(pc).zeros()?;
    let poles = z4.r_hat.shift_values(-pc).zeros()?;
    let mut z3 = Z3Solution { sigma, p, poles, zeros, min_on_f: 0.0, max_on_e: 0.0, r_hat: z4.r_hat.clone() };
    z3.min_on_f = samples.points_f.iter().map(|z| z3.eval(*z).norm()).fold(f64::INFINITY, f64::min);
    z3.max_on_e = samples.points_e.iter().map(|z| z3.eval(*z).norm()).fold(0.0, f64::max);
    Ok(z3)
}

/// Both stages. The Z3 part is `None` when `tau >= 1`.
pub fn solve(spec: &ProblemSpec) -> Result<(Z4Solution, Option<Z3Solution>)> {
    let z4 = solve_z4(spec)?;
    let z3 = if z4.tau < 1.0 { Some(z4_to_z3(&z4, &spec.samples)?) } else { None };
    Ok((z4, z3))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub degree: usize,
    pub tau: Option<f64>,
    /// 1 whenever `tau >= 1`.
    pub sigma: Option<f64>,
    /// Reason the solve failed; `tau` and `sigma` are then absent.
    pub failure: Option<String>,
}

/// Solves each degree independently, in parallel, and returns the entries in
/// the order given. `base` supplies everything except the degree.
pub fn degree_sweep(base: &ProblemSpec, degrees: &[usize]) -> Result<Vec<SweepEntry>> {
    if degrees.is_empty() {
        return Err(Error::Config("degree list is empty".into()));
    }
    if degrees.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("degrees must be strictly ascending".into()));
    }
    Ok(degrees
        .par_iter()
        .map(|&n| {
            let spec = ProblemSpec { degree: n, ..base.clone() };
            match solve_z4(&spec).and_then(|z4| {
                let sigma = if z4.tau < 1.0 { tau_to_sigma(z4.tau)? } else { 1.0 };
                Ok((z4.tau, sigma))
            }) {
                Ok((tau, sigma)) => SweepEntry { degree: n, tau: Some(tau), sigma: Some(sigma), failure: None },
                Err(e) => SweepEntry { degree: n, tau: None, sigma: None, failure: Some(e.to_string()) },
            }
        })
        .collect())
}
