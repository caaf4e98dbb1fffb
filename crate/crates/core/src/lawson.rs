//! Damped Lawson (iteratively reweighted least squares) refinement of a
//! barycentric fit on fixed support points.

use num_complex::Complex64;

use crate::aaa::validate_samples;
use crate::barycentric::{cdiv, BarycentricRational};
use crate::error::{Error, Result};
use crate::linalg::{blended_weight_vector, min_singular_vector, svd_right, CMatrix};

/// Smallest sample weight kept after renormalization, so that weights stay
/// strictly positive even when `delta = 1` and an error vanishes.
pub const WEIGHT_FLOOR: f64 = 1e-300;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LawsonOptions {
    pub steps: usize,
    /// Damping factor in `(0, 1]`; 1 is the classical update.
    pub delta: f64,
    /// Blend the singular vectors of each least-squares solve the way AAA
    /// does for sign data. Sign problems often have a nearly degenerate
    /// smallest singular value, which makes the last vector alone erratic.
    pub sign_blend: bool,
}

impl Default for LawsonOptions {
    fn default() -> Self {
        Self { steps: 200, delta: 0.95, sign_blend: false }
    }
}

impl LawsonOptions {
    pub fn new(steps: usize, delta: f64) -> Result<Self> {
        let opts = Self { steps, delta, sign_blend: false };
        opts.validate()?;
        Ok(opts)
    }

    pub fn validate(&self) -> Result<()> {
        if self.delta > 0.0 && self.delta <= 1.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!("Lawson damping must lie in (0, 1], got {}", self.delta)))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LawsonState {
    /// Sample weights after the last step, summing to 1.
    pub sample_weights: Vec<f64>,
    /// Best iterate by max error, the input fit included.
    pub fit: BarycentricRational,
    /// Max error of the input fit, then of each step.
    pub tau_history: Vec<f64>,
    /// Index into `tau_history` of the returned fit.
    pub best_index: usize,
}

impl LawsonState {
    pub fn best_error(&self) -> f64 {
        self.tau_history[self.best_index]
    }
}

/// `((1 - delta) + delta |e_j| / max|e|) w_j`, unnormalized.
///
/// Accepts `delta = 0` so the identity case can be checked in isolation.
/// Returns the weights unchanged when every error is zero.
pub fn damped_weight_update(weights: &[f64], errors: &[f64], delta: f64) -> Vec<f64> {
    let emax = errors.iter().fold(0.0, |a: f64, e| a.max(e.abs()));
    if emax == 0.0 || !emax.is_finite() {
        return weights.to_vec();
    }
    weights.iter().zip(errors).map(|(w, e)| ((1.0 - delta) + delta * e.abs() / emax) * w).collect()
}

/// Scales weights to sum 1, then raises each to at least [`WEIGHT_FLOOR`].
pub fn normalize_weights(weights: &mut [f64]) {
    let total: f64 = weights.iter().sum();
    if total > 0.0 && total.is_finite() {
        for w in weights.iter_mut() {
            *w = (*w / total).max(WEIGHT_FLOOR);
        }
    }
}

fn max_error(fit: &BarycentricRational, points: &[Complex64], data: &[Complex64]) -> (Vec<f64>, f64) {
    let errors: Vec<f64> = points.iter().zip(data).map(|(z, f)| (fit.eval(*z) - f).norm()).collect();
    let emax = errors.iter().fold(0.0, |a: f64, &e| if e.is_nan() { f64::INFINITY } else { a.max(e) });
    (errors, emax)
}

/// Minimizes `sum w_j |D(z_j) f_j - N(z_j)|^2` over unit coefficient vectors
/// `(beta, alpha)` and returns the resulting rational. With `blend` the
/// coefficients are the `1/s^2` blend of all right singular vectors.
pub fn weighted_solve(
    nodes: &[Complex64],
    points: &[Complex64],
    data: &[Complex64],
    weights: &[f64],
    blend: bool,
) -> Result<BarycentricRational> {
    let m = nodes.len();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut a = CMatrix::zeros(points.len(), 2 * m);
    for (j, (z, f)) in points.iter().zip(data).enumerate() {
        match nodes.iter().position(|t| t == z) {
            // multiply the row through by (z - t_k): only beta_k f_j - alpha_k survives
            Some(k) => {
                a[(j, k)] = *f;
                a[(j, m + k)] = -one;
            }
            None => {
                for (k, t) in nodes.iter().enumerate() {
                    let c = cdiv(one, z - t);
                    a[(j, k)] = f * c;
                    a[(j, m + k)] = -c;
                }
            }
        }
        a.scale_row(j, weights[j].sqrt());
    }
    let svd = svd_right(&a)?;
    let v = if blend { blended_weight_vector(&svd)? } else { min_singular_vector(&svd) };
    let (beta, alpha) = v.split_at(m);
    if beta.iter().all(|b| *b == zero) {
        return Err(Error::Degenerate("weighted least-squares solution has zero denominator"));
    }
    BarycentricRational::from_coefficients(nodes.to_vec(), alpha, beta)
}

pub fn lawson_refine(
    fit: &BarycentricRational,
    points: &[Complex64],
    data: &[Complex64],
    opts: &LawsonOptions,
) -> Result<LawsonState> {
    opts.validate()?;
    let coeffs = 2 * fit.nodes().len();
    validate_samples(points, data, if opts.steps > 0 { coeffs } else { 1 })?;

    let n = points.len();
    let mut weights = vec![1.0 / n as f64; n];
    let (_, e0) = max_error(fit, points, data);
    let mut tau_history = vec![e0];
    let mut best = fit.clone();
    let mut best_index = 0;

    for step in 1..=opts.steps {
        if tau_history[step - 1] == 0.0 {
            break;
        }
        let current = weighted_solve(fit.nodes(), points, data, &weights, opts.sign_blend)?;
        let (errs, emax) = max_error(&current, points, data);
        if !emax.is_finite() {
            // a pole landed on a sample; keep the best so far
            break;
        }
        tau_history.push(emax);
        if emax < tau_history[best_index] {
            best = current;
            best_index = step;
        }
        weights = damped_weight_update(&weights, &errs, opts.delta);
        normalize_weights(&mut weights);
    }
    Ok(LawsonState { sample_weights: weights, fit: best, tau_history, best_index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aaa::{aaa_fit, AaaOptions};
    use crate::geometry::chebyshev_points;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn options_validated() {
        assert!(LawsonOptions::new(10, 0.0).is_err());
        assert!(LawsonOptions::new(10, 1.5).is_err());
        assert!(LawsonOptions::new(10, f64::NAN).is_err());
        assert!(LawsonOptions::new(0, 1.0).is_ok());
    }

    #[test]
    fn zero_damping_is_identity() {
        let w = [0.1, 0.2, 0.3, 0.4];
        let e = [1.0, 0.0, 3.0, 0.5];
        assert_eq!(damped_weight_update(&w, &e, 0.0), w.to_vec());
    }

    #[test]
    fn full_damping_is_classical_rule() {
        let w = [0.1, 0.2, 0.3, 0.4];
        let e = [1.0, 0.0, 3.0, 0.5];
        let new = damped_weight_update(&w, &e, 1.0);
        for k in 0..4 {
            assert!((new[k] - w[k] * e[k] / 3.0).abs() <= 1e-16);
        }
    }

    #[test]
    fn normalization_sums_to_one_and_stays_positive() {
        let mut w = vec![2.0, 0.0, 6.0];
        normalize_weights(&mut w);
        assert!((w.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        assert!(w.iter().all(|x| *x > 0.0));
    }

    fn sign_setup(deg: usize) -> (Vec<Complex64>, Vec<Complex64>, BarycentricRational) {
        let mut pts = chebyshev_points(c(-1.5, 0.0), c(-0.5, 0.0), 100).unwrap();
        pts.extend(chebyshev_points(c(0.5, 0.0), c(1.5, 0.0), 100).unwrap());
        let data: Vec<_> = pts.iter().map(|z| c(z.re.signum(), 0.0)).collect();
        let fit = aaa_fit(&pts, &data, &AaaOptions { degree: deg, ..Default::default() }).unwrap().fit;
        (pts, data, fit)
    }

    #[test]
    fn zero_steps_return_input() {
        let (pts, data, fit) = sign_setup(4);
        let st = lawson_refine(&fit, &pts, &data, &LawsonOptions { steps: 0, delta: 0.95, sign_blend: false }).unwrap();
        assert_eq!(st.fit, fit);
        assert_eq!(st.tau_history.len(), 1);
        assert_eq!(st.best_index, 0);
    }

    #[test]
    fn best_iterate_contract() {
        let (pts, data, fit) = sign_setup(6);
        let st = lawson_refine(&fit, &pts, &data, &LawsonOptions { steps: 40, delta: 0.95, sign_blend: true }).unwrap();
        assert_eq!(st.tau_history.len(), 41);
        assert!(st.tau_history.iter().all(|t| t.is_finite()));
        let (_, achieved) = max_error(&st.fit, &pts, &data);
        assert_eq!(achieved, st.best_error());
        assert!(st.tau_history.iter().all(|t| achieved <= *t));
        assert!(st.best_error() < st.tau_history[0]);
        assert!((st.sample_weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        assert!(st.sample_weights.iter().all(|w| *w > 0.0));
        assert_eq!(st.fit.nodes(), fit.nodes());
    }

    #[test]
    fn too_few_samples() {
        let (pts, data, fit) = sign_setup(6);
        let err =
            lawson_refine(&fit, &pts[..10], &data[..10], &LawsonOptions { steps: 3, delta: 0.5, sign_blend: false });
        assert_eq!(err, Err(Error::TooFewSamples { needed: 14, got: 10 }));
        assert!(lawson_refine(
            &fit,
            &pts[..10],
            &data[..10],
            &LawsonOptions { steps: 0, delta: 0.5, sign_blend: false }
        )
        .is_ok());
    }

    #[test]
    fn conjugation_equivariance() {
        let pts: Vec<_> = (0..80).map(|k| Complex64::from_polar(0.6 + 0.005 * k as f64, 0.41 * k as f64)).collect();
        let data: Vec<_> = pts.iter().map(|z| c(if z.re > 0.0 { 1.0 } else { -1.0 }, 0.0) + z * 0.1).collect();
        let fit = aaa_fit(&pts, &data, &AaaOptions { degree: 5, ..Default::default() }).unwrap().fit;
        let cp: Vec<_> = pts.iter().map(|z| z.conj()).collect();
        let cd: Vec<_> = data.iter().map(|z| z.conj()).collect();
        let opts = LawsonOptions { steps: 20, delta: 0.9, sign_blend: false };
        let a = lawson_refine(&fit, &pts, &data, &opts).unwrap();
        let b = lawson_refine(&fit.conjugate(), &cp, &cd, &opts).unwrap();
        assert_eq!(a.tau_history, b.tau_history);
        assert_eq!(a.fit.conjugate(), b.fit);
    }
}
