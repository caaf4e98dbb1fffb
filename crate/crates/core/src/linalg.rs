//! Dense complex kernels used by the rational fitting code.
//!
//! The SVD is computed as a Householder QR followed by one-sided Jacobi on
//! the triangular factor, which keeps small singular values accurate in a
//! relative sense. Generalized eigenvalues come from a single-shift complex
//! QZ iteration; infinite eigenvalues of a singular `B` are deflated
//! explicitly and never returned.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ULP: f64 = f64::EPSILON;

/// Floor applied to singular values, relative to the largest, before the
/// inverse-quadratic blend.
pub const BLEND_FLOOR: f64 = 1e-14;

const JACOBI_MAX_SWEEPS: usize = 100;

/// Column-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Self::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn column_mut(&mut self, j: usize) -> &mut [Complex64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for (j, &vj) in v.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.column(j)) {
                *o += a * vj;
            }
        }
        out
    }

    pub fn scale_row(&mut self, i: usize, factor: f64) {
        for j in 0..self.cols {
            self[(i, j)] *= factor;
        }
    }

    pub fn conj(&self) -> Self {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    /// `self - lambda * other`.
    pub fn sub_scaled(&self, lambda: Complex64, other: &CMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - lambda * b).collect(),
        }
    }

    fn rotate_rows(&mut self, i: usize, k: usize, c: f64, s: Complex64) {
        for j in 0..self.cols {
            let x = self[(i, j)];
            let y = self[(k, j)];
            self[(i, j)] = x * c + s * y;
            self[(k, j)] = -s.conj() * x + y * c;
        }
    }

    /// Applies the column rotation built by [`givens`] from `(a, b)` where
    /// `b` sits in column `zeroed` and `a` in column `kept`.
    fn rotate_cols(&mut self, zeroed: usize, kept: usize, c: f64, s: Complex64) {
        for i in 0..self.rows {
            let x = self[(i, zeroed)];
            let y = self[(i, kept)];
            self[(i, zeroed)] = x * c - s.conj() * y;
            self[(i, kept)] = s * x + y * c;
        }
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

/// Singular values (descending) and the matching right singular vectors.
#[derive(Clone, Debug)]
pub struct SvdResult {
    pub singular_values: Vec<f64>,
    /// Columns are the right singular vectors.
    pub right_vectors: CMatrix,
}

impl SvdResult {
    pub fn right_vector(&self, i: usize) -> &[Complex64] {
        self.right_vectors.column(i)
    }
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Upper-triangular factor of a Householder QR, `cols x cols`.
fn householder_r(a: &CMatrix) -> CMatrix {
    let (m, n) = (a.nrows(), a.ncols());
    let mut work = a.clone();
    for k in 0..n.min(m) {
        let x = &work.column(k)[k..];
        let alpha = vec_norm(x);
        if alpha == 0.0 {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let mut v: Vec<Complex64> = x.to_vec();
        v[0] += phase * alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        for j in k..n {
            let col = &mut work.column_mut(j)[k..];
            let dot: Complex64 = v.iter().zip(col.iter()).map(|(vi, ci)| vi.conj() * ci).sum();
            let f = dot * (2.0 / vnorm2);
            for (ci, vi) in col.iter_mut().zip(&v) {
                *ci -= f * vi;
            }
        }
        work[(k, k)] = -phase * alpha;
        for i in k + 1..m {
            work[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    CMatrix::from_fn(n, n, |i, j| if i <= j && i < m { work[(i, j)] } else { Complex64::new(0.0, 0.0) })
}

/// Rotates each column so its largest-modulus entry (lowest index on ties)
/// is real and positive.
fn normalize_phases(v: &mut CMatrix) {
    for j in 0..v.ncols() {
        let col = v.column_mut(j);
        let mut best = 0;
        let mut best_abs = -1.0;
        for (i, z) in col.iter().enumerate() {
            let a = z.norm();
            if a > best_abs {
                best_abs = a;
                best = i;
            }
        }
        if best_abs > 0.0 {
            let phase = col[best].conj() / best_abs;
            for z in col.iter_mut() {
                *z *= phase;
            }
            col[best] = Complex64::new(col[best].re, 0.0);
        }
    }
}

/// Right singular vectors and singular values of a tall (or square) matrix.
pub fn svd_right(a: &CMatrix) -> Result<SvdResult> {
    let (m, n) = (a.nrows(), a.ncols());
    if m == 0 || n == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    if m < n {
        return Err(Error::Dimension(format!("svd_right needs rows >= cols, got {m}x{n}")));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite("matrix entries"));
    }

    let mut g = householder_r(a);
    let mut v = CMatrix::identity(n);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let (gp, gq) = (g.column(p), g.column(q));
                let alpha: f64 = gp.iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = gq.iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = gp.iter().zip(gq).map(|(x, y)| x.conj() * y).sum();
                let gabs = gamma.norm();
                if gabs == 0.0 || gabs <= ULP * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase_conj = (gamma / gabs).conj();
                let zeta = (beta - alpha) / (2.0 * gabs);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    let sgn = if zeta >= 0.0 { 1.0 } else { -1.0 };
                    sgn / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for mat in [&mut g, &mut v] {
                    for i in 0..n {
                        let xp = mat[(i, p)];
                        let xq = mat[(i, q)] * phase_conj;
                        mat[(i, p)] = xp * c - xq * s;
                        mat[(i, q)] = xp * s + xq * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..n).map(|j| vec_norm(g.column(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));
    let singular_values = order.iter().map(|&i| norms[i]).collect();
    let mut right_vectors = CMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    normalize_phases(&mut right_vectors);
    Ok(SvdResult { singular_values, right_vectors })
}

/// Weight vector blending every right singular vector with factor `1/s^2`,
/// normalized to unit length. Singular values below `BLEND_FLOOR * s_max`
/// are raised to that floor.
pub fn blended_weight_vector(svd: &SvdResult) -> Result<Vec<Complex64>> {
    let s = &svd.singular_values;
    if s.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("singular values"));
    }
    let s_max = s.iter().cloned().fold(0.0, f64::max);
    if s_max <= 0.0 {
        return Err(Error::Degenerate("all singular values are zero"));
    }
    let n = svd.right_vectors.nrows();
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    for (k, &sk) in s.iter().enumerate() {
        // (s_max / s)^2 is 1/s^2 up to a constant that normalization removes.
        let ratio = s_max / sk.max(BLEND_FLOOR * s_max);
        let factor = ratio * ratio;
        for (wi, vi) in w.iter_mut().zip(svd.right_vector(k)) {
            *wi += vi * factor;
        }
    }
    let norm = vec_norm(&w);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::Degenerate("blended weight vector vanished"));
    }
    Ok(w.into_iter().map(|x| x / norm).collect())
}

/// Right singular vector of the smallest singular value (last column of V).
pub fn min_singular_vector(svd: &SvdResult) -> Vec<Complex64> {
    let last = svd.right_vectors.ncols() - 1;
    svd.right_vector(last).to_vec()
}

/// Rotation `[c s; -conj(s) c]` mapping `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    if b == zero {
        return (1.0, zero, a);
    }
    if a == zero {
        let nb = b.norm();
        return (0.0, b.conj() / nb, Complex64::new(nb, 0.0));
    }
    let (na, nb) = (a.norm(), b.norm());
    let norm = na.hypot(nb);
    let phase = a / na;
    (na / norm, phase * b.conj() / norm, phase * norm)
}

/// Finite eigenvalues `lambda` of the pencil `M - lambda B`.
///
/// Infinite eigenvalues (singular `B`) are dropped, as are eigenvalues
/// whose modulus exceeds `(|M| / |B|) / sqrt(eps)`.
pub fn generalized_eigenvalues(m: &CMatrix, b: &CMatrix) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if m.ncols() != n || b.nrows() != n || b.ncols() != n {
        return Err(Error::Dimension(format!(
            "pencil needs square matrices of one size, got {}x{} and {}x{}",
            m.nrows(),
            m.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    if !m.is_finite() || !b.is_finite() {
        return Err(Error::NonFinite("pencil entries"));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let (m_norm, b_norm) = (m.frobenius_norm(), b.frobenius_norm());
    if b_norm == 0.0 {
        return Ok(Vec::new());
    }
    let limit = if m_norm > 0.0 { m_norm / b_norm / ULP.sqrt() } else { 1.0 / ULP.sqrt() };

    let pairs = qz_eigen_pairs(m.clone(), b.clone())?;
    Ok(pairs
        .into_iter()
        .filter(|(_, beta)| beta.norm() > 0.0)
        .map(|(alpha, beta)| alpha / beta)
        .filter(|lambda| lambda.norm() <= limit && lambda.re.is_finite() && lambda.im.is_finite())
        .collect())
}

/// Generalized Schur form by QZ; returns `(alpha, beta)` diagonal pairs,
/// with `beta == 0` exactly for deflated infinite eigenvalues.
fn qz_eigen_pairs(mut h: CMatrix, mut t: CMatrix) -> Result<Vec<(Complex64, Complex64)>> {
    let n = h.nrows();
    let zero = Complex64::new(0.0, 0.0);

    // T <- Q^H T upper triangular, H <- Q^H H.
    for k in 0..n.saturating_sub(1) {
        let x: Vec<Complex64> = t.column(k)[k..].to_vec();
        let alpha = vec_norm(&x);
        if alpha == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { Complex64::new(1.0, 0.0) };
        let mut v = x;
        v[0] += phase * alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        for mat in [&mut t, &mut h] {
            for j in 0..n {
                let col = &mut mat.column_mut(j)[k..];
                let dot: Complex64 = v.iter().zip(col.iter()).map(|(vi, ci)| vi.conj() * ci).sum();
                let f = dot * (2.0 / vnorm2);
                for (ci, vi) in col.iter_mut().zip(&v) {
                    *ci -= f * vi;
                }
            }
        }
        t[(k, k)] = -phase * alpha;
        for i in k + 1..n {
            t[(i, k)] = zero;
        }
    }

    // Hessenberg-triangular reduction.
    for j in 0..n.saturating_sub(2) {
        for i in (j + 2..n).rev() {
            let (c, s, _) = givens(h[(i - 1, j)], h[(i, j)]);
            h.rotate_rows(i - 1, i, c, s);
            t.rotate_rows(i - 1, i, c, s);
            h[(i, j)] = zero;
            let (c, s, _) = givens(t[(i, i)], t[(i, i - 1)]);
            t.rotate_cols(i - 1, i, c, s);
            h.rotate_cols(i - 1, i, c, s);
            t[(i, i - 1)] = zero;
        }
    }

    let atol = f64::MIN_POSITIVE.max(ULP * h.frobenius_norm());
    let btol = f64::MIN_POSITIVE.max(ULP * t.frobenius_norm());
    let mut pairs = vec![(zero, zero); n];
    let max_steps = 100.max(60 * n);
    let mut steps = 0;
    let mut since_deflation = 0;
    let mut hi = n - 1;

    loop {
        if hi == 0 {
            pairs[0] = (h[(0, 0)], t[(0, 0)]);
            break;
        }
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let local = ULP * (h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm());
            if sub <= atol.max(local) {
                h[(lo, lo - 1)] = zero;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            pairs[hi] = (h[(hi, hi)], t[(hi, hi)]);
            hi -= 1;
            since_deflation = 0;
            continue;
        }

        if let Some(k) = (lo..=hi).find(|&k| t[(k, k)].norm() <= btol) {
            t[(k, k)] = zero;
            if k == lo {
                let (c, s, _) = givens(h[(lo, lo)], h[(lo + 1, lo)]);
                h.rotate_rows(lo, lo + 1, c, s);
                t.rotate_rows(lo, lo + 1, c, s);
                h[(lo + 1, lo)] = zero;
                t[(lo + 1, lo)] = zero;
            } else {
                for j in k..hi {
                    let (c, s, _) = givens(t[(j, j + 1)], t[(j + 1, j + 1)]);
                    t.rotate_rows(j, j + 1, c, s);
                    h.rotate_rows(j, j + 1, c, s);
                    t[(j + 1, j + 1)] = zero;
                    t[(j + 1, j)] = zero;
                    if j > lo {
                        let (c, s, _) = givens(h[(j + 1, j)], h[(j + 1, j - 1)]);
                        h.rotate_cols(j - 1, j, c, s);
                        t.rotate_cols(j - 1, j, c, s);
                        h[(j + 1, j - 1)] = zero;
                        t[(j, j - 1)] = zero;
                    }
                }
                let (c, s, _) = givens(h[(hi, hi)], h[(hi, hi - 1)]);
                h.rotate_cols(hi - 1, hi, c, s);
                t.rotate_cols(hi - 1, hi, c, s);
                h[(hi, hi - 1)] = zero;
                t[(hi, hi - 1)] = zero;
            }
            continue;
        }

        steps += 1;
        since_deflation += 1;
        if steps > max_steps {
            return Err(Error::NoConvergence(steps));
        }

        let shift = if since_deflation % 10 == 0 {
            h[(hi, hi)] / t[(hi, hi)] + h[(hi, hi - 1)].norm() / t[(hi - 1, hi - 1)].norm()
        } else {
            wilkinson_shift(&h, &t, hi)
        };

        let (c, s, _) = givens(h[(lo, lo)] - shift * t[(lo, lo)], h[(lo + 1, lo)]);
        h.rotate_rows(lo, lo + 1, c, s);
        t.rotate_rows(lo, lo + 1, c, s);
        for j in lo..hi {
            let (c, s, _) = givens(t[(j + 1, j + 1)], t[(j + 1, j)]);
            t.rotate_cols(j, j + 1, c, s);
            h.rotate_cols(j, j + 1, c, s);
            t[(j + 1, j)] = zero;
            if j + 2 <= hi {
                let (c, s, _) = givens(h[(j + 1, j)], h[(j + 2, j)]);
                h.rotate_rows(j + 1, j + 2, c, s);
                t.rotate_rows(j + 1, j + 2, c, s);
                h[(j + 2, j)] = zero;
            }
        }
    }
    Ok(pairs)
}

/// Eigenvalue of the trailing 2x2 pencil closest to `h[hi,hi] / t[hi,hi]`.
fn wilkinson_shift(h: &CMatrix, t: &CMatrix, hi: usize) -> Complex64 {
    let k = hi - 1;
    let (a, b, c, d) = (h[(k, k)], h[(k, hi)], h[(hi, k)], h[(hi, hi)]);
    let (p, q, r) = (t[(k, k)], t[(k, hi)], t[(hi, hi)]);
    let m11 = a / p;
    let m12 = b / r - a * q / (p * r);
    let m21 = c / p;
    let m22 = d / r - c * q / (p * r);
    let half = (m11 - m22) * 0.5;
    let disc = (half * half + m12 * m21).sqrt();
    let big = if (half.conj() * disc).re >= 0.0 { half + disc } else { half - disc };
    if big.norm() == 0.0 {
        m22
    } else {
        m22 - m12 * m21 / big
    }
}
