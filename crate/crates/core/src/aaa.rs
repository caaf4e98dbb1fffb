//! Greedy AAA fitting with an optional sign-data blend of the SVD weights.

use std::collections::HashSet;

use num_complex::Complex64;

use crate::barycentric::{cdiv, BarycentricRational};
use crate::error::{Error, Result};
use crate::linalg::{blended_weight_vector, min_singular_vector, svd_right, CMatrix};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AaaOptions {
    pub degree: usize,
    /// Blend all right singular vectors instead of taking the last one.
    pub sign_blend: bool,
    /// Stop early once the max error is at or below this value.
    pub tolerance: f64,
}

impl Default for AaaOptions {
    fn default() -> Self {
        Self { degree: 12, sign_blend: true, tolerance: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AaaReport {
    pub fit: BarycentricRational,
    /// `(degree, max error over all samples)` after each greedy step.
    pub error_history: Vec<(usize, f64)>,
    pub final_error: f64,
    /// Sample indices chosen as support points, in order of selection.
    pub support_indices: Vec<usize>,
}

/// Checks sample/data shapes shared by the fitting stages.
pub(crate) fn validate_samples(points: &[Complex64], data: &[Complex64], needed: usize) -> Result<()> {
    if points.len() != data.len() {
        return Err(Error::Dimension(format!("{} points but {} data values", points.len(), data.len())));
    }
    if points.len() < needed {
        return Err(Error::TooFewSamples { needed, got: points.len() });
    }
    let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
    if !points.iter().all(finite) {
        return Err(Error::NonFinite("sample points"));
    }
    if !data.iter().all(finite) {
        return Err(Error::NonFinite("sample data"));
    }
    let mut seen = HashSet::new();
    for (j, z) in points.iter().enumerate() {
        if !seen.insert(((z.re + 0.0).to_bits(), (z.im + 0.0).to_bits())) {
            return Err(Error::RepeatedPoint(j));
        }
    }
    Ok(())
}

pub fn aaa_fit(points: &[Complex64], data: &[Complex64], opts: &AaaOptions) -> Result<AaaReport> {
    if !(opts.tolerance >= 0.0) {
        return Err(Error::Domain(format!("tolerance must be >= 0, got {}", opts.tolerance)));
    }
    validate_samples(points, data, opts.degree + 2)?;
    let m_total = points.len();
    let zero = Complex64::new(0.0, 0.0);

    let mean = data.iter().sum::<Complex64>() / m_total as f64;
    let mut approx = vec![mean; m_total];
    let mut is_support = vec![false; m_total];
    let mut support: Vec<usize> = Vec::with_capacity(opts.degree + 1);
    let mut history = Vec::with_capacity(opts.degree + 1);
    let mut fit = None;

    for step in 0..=opts.degree {
        // next support point: largest current error, lowest index on ties
        let mut pick = None;
        let mut pick_err = -1.0;
        for j in 0..m_total {
            if is_support[j] {
                continue;
            }
            let e = (data[j] - approx[j]).norm();
            if e > pick_err {
                pick_err = e;
                pick = Some(j);
            }
        }
        let pick = pick.ok_or(Error::TooFewSamples { needed: step + 2, got: m_total })?;
        is_support[pick] = true;
        support.push(pick);

        let rows: Vec<usize> = (0..m_total).filter(|&j| !is_support[j]).collect();
        let ncols = support.len();
        let cauchy = CMatrix::from_fn(rows.len(), ncols, |i, k| {
            cdiv(Complex64::new(1.0, 0.0), points[rows[i]] - points[support[k]])
        });
        let loewner = CMatrix::from_fn(rows.len().max(ncols), ncols, |i, k| {
            if i < rows.len() {
                (data[rows[i]] - data[support[k]]) * cauchy[(i, k)]
            } else {
                zero
            }
        });
        let svd = svd_right(&loewner)?;
        // a zero Loewner matrix (data already matched) has no spectrum to blend
        let weights = if opts.sign_blend && svd.singular_values[0] > 0.0 {
            blended_weight_vector(&svd)?
        } else {
            min_singular_vector(&svd)
        };

        for (i, &j) in rows.iter().enumerate() {
            if ncols == 1 {
                approx[j] = data[support[0]];
                continue;
            }
            let mut num = zero;
            let mut den = zero;
            for k in 0..ncols {
                let c = weights[k] * cauchy[(i, k)];
                num += c * data[support[k]];
                den += c;
            }
            approx[j] = cdiv(num, den);
        }
        for &k in &support {
            approx[k] = data[k];
        }
        let err = data.iter().zip(&approx).map(|(f, r)| (f - r).norm()).fold(0.0, |a: f64, b| a.max(b));
        history.push((step, if err.is_nan() { f64::INFINITY } else { err }));

        let nodes = support.iter().map(|&k| points[k]).collect();
        let values = support.iter().map(|&k| data[k]).collect();
        fit = Some(BarycentricRational::new(nodes, values, weights)?);
        if err <= opts.tolerance {
            break;
        }
    }

    let final_error = history.last().map(|h| h.1).unwrap_or(0.0);
    Ok(AaaReport {
        fit: fit.expect("at least one greedy step runs"),
        error_history: history,
        final_error,
        support_indices: support,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::chebyshev_points;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sign_problem() -> (Vec<Complex64>, Vec<Complex64>) {
        let mut pts = chebyshev_points(c(-1.5, 0.0), c(-0.5, 0.0), 200).unwrap();
        pts.extend(chebyshev_points(c(0.5, 0.0), c(1.5, 0.0), 200).unwrap());
        let data = pts.iter().map(|z| c(z.re.signum(), 0.0)).collect();
        (pts, data)
    }

    #[test]
    fn constant_data_stops_at_degree_zero() {
        let pts: Vec<_> = (0..10).map(|k| c(k as f64, 0.5 * k as f64)).collect();
        let data = vec![c(3.0, 0.0); 10];
        let rep = aaa_fit(&pts, &data, &AaaOptions { degree: 5, ..Default::default() }).unwrap();
        assert_eq!(rep.final_error, 0.0);
        assert_eq!(rep.fit.degree(), 0);
        assert_eq!(rep.fit.eval(c(0.3, -2.0)), c(3.0, 0.0));
    }

    #[test]
    fn identity_data_at_degree_one() {
        let pts: Vec<_> = (0..20).map(|k| Complex64::from_polar(1.0 + 0.1 * k as f64, 0.7 * k as f64)).collect();
        for blend in [false, true] {
            let rep = aaa_fit(&pts, &pts, &AaaOptions { degree: 1, sign_blend: blend, tolerance: 0.0 }).unwrap();
            assert!(rep.final_error <= 1e-12, "{}", rep.final_error);
            let z = rep.fit.zeros().unwrap();
            assert_eq!(z.len(), 1);
            assert!(z[0].norm() < 1e-12);
        }
    }

    #[test]
    fn input_validation() {
        let pts = vec![c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)];
        let data = vec![c(1.0, 0.0); 3];
        let opts = AaaOptions { degree: 2, ..Default::default() };
        assert_eq!(aaa_fit(&pts, &data, &opts), Err(Error::TooFewSamples { needed: 4, got: 3 }));
        let rep = vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        assert_eq!(aaa_fit(&rep, &data, &AaaOptions { degree: 1, ..Default::default() }), Err(Error::RepeatedPoint(2)));
        let nan = vec![c(0.0, 0.0), c(f64::NAN, 0.0), c(1.0, 0.0)];
        assert!(aaa_fit(&pts, &nan, &AaaOptions { degree: 1, ..Default::default() }).is_err());
        assert!(aaa_fit(&pts, &data[..2], &AaaOptions { degree: 0, ..Default::default() }).is_err());
        assert!(aaa_fit(&pts, &data, &AaaOptions { degree: 0, sign_blend: false, tolerance: -1.0 }).is_err());
    }

    #[test]
    fn blend_beats_plain_on_sign_data() {
        let (pts, data) = sign_problem();
        let blended = aaa_fit(&pts, &data, &AaaOptions { degree: 13, sign_blend: true, tolerance: 0.0 }).unwrap();
        let plain = aaa_fit(&pts, &data, &AaaOptions { degree: 13, sign_blend: false, tolerance: 0.0 }).unwrap();
        assert!(blended.final_error < 1e-2, "blended {}", blended.final_error);
        assert!(
            blended.final_error <= plain.final_error,
            "blended {} plain {}",
            blended.final_error,
            plain.final_error
        );
    }

    #[test]
    fn history_is_finite_and_picks_attain_max() {
        let (pts, data) = sign_problem();
        let rep = aaa_fit(&pts, &data, &AaaOptions { degree: 8, ..Default::default() }).unwrap();
        assert_eq!(rep.error_history.len(), 9);
        assert_eq!(rep.support_indices.len(), 9);
        assert!(rep.error_history.iter().all(|h| h.1.is_finite()));
        // the support point added at step k carried the max error of step k-1
        for k in 1..rep.support_indices.len() {
            let prev = aaa_fit(&pts, &data, &AaaOptions { degree: k - 1, ..Default::default() }).unwrap();
            let j = rep.support_indices[k];
            let e = (data[j] - prev.fit.eval(pts[j])).norm();
            assert!((e - prev.final_error).abs() <= 1e-12 * prev.final_error.max(1.0), "step {k}");
        }
        let unique: HashSet<_> = rep.support_indices.iter().collect();
        assert_eq!(unique.len(), 9);
    }

    #[test]
    fn conjugation_equivariance() {
        let pts: Vec<_> =
            (0..60).map(|k| Complex64::from_polar(0.5 + 0.01 * k as f64, 0.37 * k as f64) + 0.2).collect();
        let data: Vec<_> = pts.iter().map(|z| (z * 3.0).exp() / (z - c(2.0, 1.0))).collect();
        let cp: Vec<_> = pts.iter().map(|z| z.conj()).collect();
        let cd: Vec<_> = data.iter().map(|z| z.conj()).collect();
        for blend in [false, true] {
            let opts = AaaOptions { degree: 7, sign_blend: blend, tolerance: 0.0 };
            let a = aaa_fit(&pts, &data, &opts).unwrap();
            let b = aaa_fit(&cp, &cd, &opts).unwrap();
            assert_eq!(a.error_history, b.error_history);
            assert_eq!(a.support_indices, b.support_indices);
            for (x, y) in a.fit.nodes().iter().zip(b.fit.nodes()) {
                assert_eq!(x.conj(), *y);
            }
        }
    }

    #[test]
    fn affine_equivariance() {
        let (pts, data) = sign_problem();
        let (a, b) = (c(0.3, 1.7), c(-2.0, 0.5));
        let moved: Vec<_> = pts.iter().map(|z| a * z + b).collect();
        let opts = AaaOptions { degree: 6, ..Default::default() };
        let r1 = aaa_fit(&pts, &data, &opts).unwrap();
        let r2 = aaa_fit(&moved, &data, &opts).unwrap();
        assert_eq!(r1.support_indices, r2.support_indices);
        for (x, y) in r1.error_history.iter().zip(&r2.error_history) {
            assert!((x.1 - y.1).abs() <= 1e-9 * x.1.max(1e-3), "{x:?} {y:?}");
        }
    }
}
