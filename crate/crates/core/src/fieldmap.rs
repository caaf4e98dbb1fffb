//! Log-magnitude fields on rectangular grids, contour extraction, and CSV
//! and SVG export.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::barycentric::BarycentricRational;
use crate::error::{Error, Result};

/// Field values are clamped to `[-CLAMP, CLAMP]`.
pub const CLAMP: f64 = 300.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bbox {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Bbox {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let b = Self { x_min, x_max, y_min, y_max };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max].iter().all(|v| v.is_finite());
        if !finite || !(self.x_min < self.x_max) || !(self.y_min < self.y_max) {
            return Err(Error::Domain(format!("invalid bounding box {self:?}")));
        }
        Ok(())
    }

    /// `(x_min, x_max, y_min, y_max)` grown on every side by `fraction` of
    /// the larger extent, so that flat boxes (samples on a line) open up.
    pub fn padded(extent: (f64, f64, f64, f64), fraction: f64) -> Result<Self> {
        let (x0, x1, y0, y1) = extent;
        let span = (x1 - x0).max(y1 - y0);
        let pad = if span > 0.0 { fraction * span } else { 1.0 };
        Self::new(x0 - pad, x1 + pad, y0 - pad, y1 + pad)
    }
}

/// `values[i][j]` belongs to the point `x(i) + i y(j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldGrid {
    pub bbox: Bbox,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<Vec<f64>>,
    /// Grid points where the function was infinite or undefined.
    pub pole_hits: usize,
}

impl FieldGrid {
    pub fn x(&self, i: usize) -> f64 {
        axis(self.bbox.x_min, self.bbox.x_max, self.nx, i)
    }

    pub fn y(&self, j: usize) -> f64 {
        axis(self.bbox.y_min, self.bbox.y_max, self.ny, j)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().flatten().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().flatten().cloned().fold(f64::NEG_INFINITY, f64::max)
    }
}

// written so that a box symmetric about 0 gives exactly mirrored nodes
fn axis(lo: f64, hi: f64, n: usize, k: usize) -> f64 {
    let d = (n - 1) as f64;
    ((n - 1 - k) as f64 * lo + k as f64 * hi) / d
}

fn clamped_log(v: Complex64) -> (f64, bool) {
    let a = v.norm();
    if a.is_nan() || a.is_infinite() {
        (CLAMP, true)
    } else if a == 0.0 {
        (-CLAMP, false)
    } else {
        (a.log10().clamp(-CLAMP, CLAMP), false)
    }
}

fn check_resolution(nx: usize, ny: usize) -> Result<()> {
    if nx < 2 || ny < 2 {
        return Err(Error::Domain(format!("grid needs at least 2x2 points, got {nx}x{ny}")));
    }
    Ok(())
}

/// `log10 |f(z)|` on an `nx` by `ny` grid. Rows in x are evaluated in parallel.
pub fn magnitude_field<F>(f: F, bbox: Bbox, nx: usize, ny: usize) -> Result<FieldGrid>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    bbox.validate()?;
    check_resolution(nx, ny)?;
    let ys: Vec<f64> = (0..ny).map(|j| axis(bbox.y_min, bbox.y_max, ny, j)).collect();
    let rows: Vec<(Vec<f64>, usize)> = (0..nx)
        .into_par_iter()
        .map(|i| {
            let x = axis(bbox.x_min, bbox.x_max, nx, i);
            let mut hits = 0;
            let col = ys
                .iter()
                .map(|&y| {
                    let (v, hit) = clamped_log(f(Complex64::new(x, y)));
                    hits += hit as usize;
                    v
                })
                .collect();
            (col, hits)
        })
        .collect();
    let pole_hits = rows.iter().map(|r| r.1).sum();
    Ok(FieldGrid { bbox, nx, ny, values: rows.into_iter().map(|r| r.0).collect(), pole_hits })
}

/// `log10 |r(z) - 1|` and `log10 |r(z) + 1|`.
pub fn sign_distance_fields(
    r: &BarycentricRational,
    bbox: Bbox,
    nx: usize,
    ny: usize,
) -> Result<(FieldGrid, FieldGrid)> {
    let one = Complex64::new(1.0, 0.0);
    let a = magnitude_field(|z| r.eval(z) - one, bbox, nx, ny)?;
    let b = magnitude_field(|z| r.eval(z) + one, bbox, nx, ny)?;
    Ok((a, b))
}

/// Contour level conventions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Levels {
    /// 0, -1, -2, ...
    Decades,
    /// 0, -1/3, -2/3, ...
    Thirds,
}

impl Levels {
    /// Levels from 0 downward that stay strictly above `floor`, at most `max_count`.
    pub fn values(self, floor: f64, max_count: usize) -> Vec<f64> {
        let step = match self {
            Levels::Decades => 1.0,
            Levels::Thirds => 1.0 / 3.0,
        };
        (0..max_count).map(|k| -(k as f64) * step).take_while(|&l| l > floor).collect()
    }
}

pub type Segment = ((f64, f64), (f64, f64));

/// Marching-squares line segments of `grid` at `level`, in plane coordinates.
/// Saddle cells are resolved by the cell-center average.
pub fn contour_segments(grid: &FieldGrid, level: f64) -> Vec<Segment> {
    let mut out = Vec::new();
    for i in 0..grid.nx - 1 {
        for j in 0..grid.ny - 1 {
            // corners counterclockwise from bottom-left
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let v: Vec<f64> = corners.iter().map(|&(a, b)| grid.values[a][b]).collect();
            let p: Vec<(f64, f64)> = corners.iter().map(|&(a, b)| (grid.x(a), grid.y(b))).collect();
            let above: Vec<bool> = v.iter().map(|&x| x > level).collect();
            let crossing = |e: usize| {
                let (a, b) = (e, (e + 1) % 4);
                let t = (level - v[a]) / (v[b] - v[a]);
                (p[a].0 + t * (p[b].0 - p[a].0), p[a].1 + t * (p[b].1 - p[a].1))
            };
            let edges: Vec<usize> = (0..4).filter(|&e| above[e] != above[(e + 1) % 4]).collect();
            match edges.len() {
                2 => out.push((crossing(edges[0]), crossing(edges[1]))),
                4 => {
                    let center_above = v.iter().sum::<f64>() / 4.0 > level;
                    // pair edges so that the center stays on its own side
                    if center_above == above[0] {
                        out.push((crossing(0), crossing(3)));
                        out.push((crossing(1), crossing(2)));
                    } else {
                        out.push((crossing(0), crossing(1)));
                        out.push((crossing(2), crossing(3)));
                    }
                }
                _ => {}
            }
        }
    }
    out
}

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV: `#` metadata lines, then one line per grid row of constant `y`
/// (ascending), each holding `nx` values in ascending `x`.
pub fn write_csv(out: &mut String, grid: &FieldGrid, quantity: &str) {
    let b = &grid.bbox;
    let _ = writeln!(out, "# quantity={quantity}");
    let _ = writeln!(
        out,
        "# x_min={},x_max={},y_min={},y_max={}",
        fmt_f64(b.x_min),
        fmt_f64(b.x_max),
        fmt_f64(b.y_min),
        fmt_f64(b.y_max)
    );
    let _ = writeln!(out, "# nx={},ny={},pole_hits={}", grid.nx, grid.ny, grid.pole_hits);
    for j in 0..grid.ny {
        let row: Vec<String> = (0..grid.nx).map(|i| fmt_f64(grid.values[i][j])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
}

/// One contoured field in an SVG rendering.
pub struct SvgLayer<'a> {
    pub grid: &'a FieldGrid,
    pub levels: Vec<f64>,
    pub color: &'a str,
}

/// Renders contour layers plus point markers `(z, color)`.
pub fn render_svg(layers: &[SvgLayer<'_>], markers: &[(Complex64, &str)]) -> Result<String> {
    let bbox = layers.first().ok_or(Error::Config("nothing to render".into()))?.grid.bbox;
    let width = 800.0;
    let height = width * (bbox.y_max - bbox.y_min) / (bbox.x_max - bbox.x_min);
    let sx = |x: f64| (x - bbox.x_min) / (bbox.x_max - bbox.x_min) * width;
    let sy = |y: f64| (bbox.y_max - y) / (bbox.y_max - bbox.y_min) * height;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#,
        w = width,
        h = height
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for layer in layers {
        for (k, &level) in layer.levels.iter().enumerate() {
            let opacity = 1.0 - 0.6 * k as f64 / layer.levels.len().max(1) as f64;
            let _ = write!(
                s,
                r#"<path data-level="{level:.6}" fill="none" stroke="{}" stroke-opacity="{opacity:.3}" stroke-width="1" d=""#,
                layer.color
            );
            for ((x0, y0), (x1, y1)) in contour_segments(layer.grid, level) {
                let _ = write!(s, "M{:.3} {:.3}L{:.3} {:.3}", sx(x0), sy(y0), sx(x1), sy(y1));
            }
            s.push_str("\"/>\n");
        }
    }
    for (z, color) in markers {
        let _ = writeln!(s, r#"<circle cx="{:.3}" cy="{:.3}" r="2" fill="{color}"/>"#, sx(z.re), sy(z.im));
    }
    s.push_str("</svg>\n");
    Ok(s)
}
