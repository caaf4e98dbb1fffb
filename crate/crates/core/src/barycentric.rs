//! Rational functions in barycentric form
//! `r(z) = sum w_k f_k / (z - t_k) / sum w_k / (z - t_k)`.

use std::collections::HashSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{generalized_eigenvalues, CMatrix};

/// Eigenvalues closer than this (relative to the node scale) to a support
/// point are candidates for the spurious-root filter.
const NODE_MATCH_TOL: f64 = 1e-10;
/// A barycentric coefficient this small relative to the largest is treated
/// as zero by the spurious-root filter.
const NEGLIGIBLE_COEF: f64 = 1e-14;
/// A pole and a zero this close (relative) are a common factor.
const COMMON_ROOT_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BarycentricRational {
    nodes: Vec<Complex64>,
    values: Vec<Complex64>,
    weights: Vec<Complex64>,
}

/// Result of a checked evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    /// The point hit a zero-weight node and was nudged off it.
    pub perturbed: bool,
}

/// Smith's complex division: avoids squaring the divisor and is exact
/// real division when both operands are real.
pub(crate) fn cdiv(a: Complex64, b: Complex64) -> Complex64 {
    if b.im == 0.0 {
        return Complex64::new(a.re / b.re, a.im / b.re);
    }
    if b.re.abs() >= b.im.abs() {
        let r = b.im / b.re;
        let d = b.re + b.im * r;
        Complex64::new((a.re + a.im * r) / d, (a.im - a.re * r) / d)
    } else {
        let r = b.re / b.im;
        let d = b.re * r + b.im;
        Complex64::new((a.re * r + a.im) / d, (a.im * r - a.re) / d)
    }
}

fn finite(z: &Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

impl BarycentricRational {
    pub fn new(nodes: Vec<Complex64>, values: Vec<Complex64>, weights: Vec<Complex64>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::EmptySet("barycentric nodes"));
        }
        if values.len() != nodes.len() || weights.len() != nodes.len() {
            return Err(Error::Dimension(format!(
                "{} nodes, {} values, {} weights",
                nodes.len(),
                values.len(),
                weights.len()
            )));
        }
        if !nodes.iter().chain(&values).chain(&weights).all(finite) {
            return Err(Error::NonFinite("barycentric data"));
        }
        if weights.iter().all(|w| *w == Complex64::new(0.0, 0.0)) {
            return Err(Error::Degenerate("all barycentric weights are zero"));
        }
        let mut seen = HashSet::new();
        for (k, t) in nodes.iter().enumerate() {
            if !seen.insert(((t.re + 0.0).to_bits(), (t.im + 0.0).to_bits())) {
                return Err(Error::RepeatedPoint(k));
            }
        }
        Ok(Self { nodes, values, weights })
    }

    /// Builds the rational `sum alpha_k/(z-t_k) / sum beta_k/(z-t_k)`.
    ///
    /// A node with `beta_k = 0` but `alpha_k != 0` has no value/weight form
    /// and is rejected.
    pub fn from_coefficients(nodes: Vec<Complex64>, alpha: &[Complex64], beta: &[Complex64]) -> Result<Self> {
        if alpha.len() != nodes.len() || beta.len() != nodes.len() {
            return Err(Error::Dimension(format!(
                "{} nodes, {} alphas, {} betas",
                nodes.len(),
                alpha.len(),
                beta.len()
            )));
        }
        let zero = Complex64::new(0.0, 0.0);
        let mut values = Vec::with_capacity(nodes.len());
        for (a, b) in alpha.iter().zip(beta) {
            if *b == zero {
                if *a != zero {
                    return Err(Error::Degenerate("numerator coefficient at a zero-weight node"));
                }
                values.push(zero);
            } else {
                values.push(a / b);
            }
        }
        Self::new(nodes, values, beta.to_vec())
    }

    /// Degree `n`, one less than the number of nodes.
    pub fn degree(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    /// Numerator coefficients `alpha_k = w_k f_k`.
    pub fn alphas(&self) -> Vec<Complex64> {
        self.weights.iter().zip(&self.values).map(|(w, f)| w * f).collect()
    }

    /// Raw evaluation. Returns `f_k` at a node with nonzero weight and an
    /// infinite value at an exact pole. Non-finite input propagates.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        if self.nodes.len() == 1 {
            // w f / w would round; a single live node is a constant
            return self.values[0];
        }
        let mut num = zero;
        let mut den = zero;
        for ((t, f), w) in self.nodes.iter().zip(&self.values).zip(&self.weights) {
            let d = z - t;
            if d == zero {
                if *w != zero {
                    return *f;
                }
                continue;
            }
            let c = cdiv(*w, d);
            num += c * f;
            den += c;
        }
        if den == zero {
            return if num == zero { Complex64::new(f64::NAN, f64::NAN) } else { Complex64::new(f64::INFINITY, 0.0) };
        }
        cdiv(num, den)
    }

    /// Checked evaluation: rejects non-finite `z` and nudges `z` off a
    /// zero-weight node, reporting that it did so.
    pub fn evaluate(&self, z: Complex64) -> Result<Evaluation> {
        if !finite(&z) {
            return Err(Error::NonFinite("evaluation point"));
        }
        let zero = Complex64::new(0.0, 0.0);
        let hits_dead_node = self.nodes.iter().zip(&self.weights).any(|(t, w)| *t == z && *w == zero);
        if hits_dead_node {
            let h = 1e-12 * z.norm().max(1.0);
            Ok(Evaluation { value: self.eval(z + h), perturbed: true })
        } else {
            Ok(Evaluation { value: self.eval(z), perturbed: false })
        }
    }

    /// The same function with every value shifted by `c`.
    pub fn shift_values(&self, c: Complex64) -> Self {
        Self {
            nodes: self.nodes.clone(),
            values: self.values.iter().map(|f| f + c).collect(),
            weights: self.weights.clone(),
        }
    }

    /// Conjugates nodes, values, and weights, giving `conj(r(conj(z)))`.
    pub fn conjugate(&self) -> Self {
        let conj = |v: &[Complex64]| v.iter().map(|z| z.conj()).collect();
        Self { nodes: conj(&self.nodes), values: conj(&self.values), weights: conj(&self.weights) }
    }

    /// Finite poles, from the denominator's arrowhead pencil.
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        Ok(self.poles_and_zeros()?.0)
    }

    /// Finite zeros, from the numerator's arrowhead pencil. The identically
    /// zero function reports none.
    pub fn zeros(&self) -> Result<Vec<Complex64>> {
        Ok(self.poles_and_zeros()?.1)
    }

    /// Poles and zeros with common roots of numerator and denominator
    /// cancelled in pairs.
    pub fn poles_and_zeros(&self) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let alphas = self.alphas();
        let mut poles = self.pencil_roots(&self.weights, &alphas)?;
        let mut zeros = self.pencil_roots(&alphas, &self.weights)?;
        cancel_common(&mut poles, &mut zeros);
        Ok((poles, zeros))
    }

    /// Roots of `sum a_k/(z - t_k)`. An eigenvalue sitting on node `t_k`
    /// is a real root of the quotient only if the other sum's coefficient
    /// `b_k` is nonzero there.
    fn pencil_roots(&self, a: &[Complex64], b: &[Complex64]) -> Result<Vec<Complex64>> {
        let m = self.nodes.len();
        let a_max = a.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if m == 1 || a_max == 0.0 {
            return Ok(Vec::new());
        }
        let b_max = b.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let mut e = CMatrix::zeros(m + 1, m + 1);
        let mut bm = CMatrix::zeros(m + 1, m + 1);
        for k in 0..m {
            e[(0, k + 1)] = a[k] / a_max;
            e[(k + 1, 0)] = Complex64::new(1.0, 0.0);
            e[(k + 1, k + 1)] = self.nodes[k];
            bm[(k + 1, k + 1)] = Complex64::new(1.0, 0.0);
        }
        let scale = self.nodes.iter().map(|t| t.norm()).fold(1.0, f64::max);
        let roots = generalized_eigenvalues(&e, &bm)?
            .into_iter()
            .filter(|lam| {
                let near = self
                    .nodes
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| (*lam - *t).norm() <= NODE_MATCH_TOL * scale)
                    .min_by(|x, y| (*lam - x.1).norm().total_cmp(&(*lam - y.1).norm()));
                match near {
                    None => true,
                    Some((k, _)) => b[k].norm() > NEGLIGIBLE_COEF * b_max,
                }
            })
            .collect();
        Ok(roots)
    }
}

/// Removes pole/zero pairs closer than `COMMON_ROOT_TOL` (relative),
/// nearest pairs first.
fn cancel_common(poles: &mut Vec<Complex64>, zeros: &mut Vec<Complex64>) {
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for (i, p) in poles.iter().enumerate() {
            for (j, z) in zeros.iter().enumerate() {
                let d = (p - z).norm() / p.norm().max(1.0);
                if d <= COMMON_ROOT_TOL && best.is_none_or(|b| d < b.2) {
                    best = Some((i, j, d));
                }
            }
        }
        match best {
            Some((i, j, _)) => {
                poles.remove(i);
                zeros.remove(j);
            }
            None => return,
        }
    }
}
