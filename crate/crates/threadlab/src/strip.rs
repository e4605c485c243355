//! Fields on the reference strip `Omega = S x (-1, 1)`.
//!
//! A [`StripField`] stores per-mode profiles `w_p(y_j)` for `|p| <= P` at
//! the Gauss–Lobatto nodes `y_j`, i.e. `w(x, y) = sum_p w_p(y) e^{ipx}`.
//! The strip Sobolev norm is
//! `||w||_s = (sum_p ||w_p||_s^2 + |p|^{2s} ||w_p||_0^2)^{1/2}` with the 1D
//! norm `||g||_s^2 = sum_{j=0..s} ||g^{(j)}||_{L^2(-1,1)}^2`, and the scaled
//! norm is `||w||_{s,eps} = ||w||_{s-1} + ||d_y w||_{s-1} + eps ||w||_s`.
//!
//! The module also carries the explicit even extension operator from the
//! top boundary circle and measured-ratio checks for the scaled Poincare
//! and trace inequalities (the analytic constants are nonconstructive; we
//! report empirical ratios).

use num_complex::Complex64;

use crate::cheb;
use crate::spectral::PeriodicField;
use crate::{Error, Result};

/// Function on the strip as Fourier modes in `x` times node values in `y`.
#[derive(Debug, Clone)]
pub struct StripField {
    /// `data[(p + P) * (ny + 1) + j] = w_p(y_j)`, nodes in decreasing order.
    data: Vec<Complex64>,
    p_max: usize,
    ny: usize,
    even_in_y: bool,
}

impl StripField {
    pub fn zeros(p_max: usize, ny: usize) -> Self {
        Self {
            data: vec![Complex64::new(0.0, 0.0); (2 * p_max + 1) * (ny + 1)],
            p_max,
            ny,
            even_in_y: true,
        }
    }

    /// Builds from a closure over `(p, y)` evaluated for `p >= 0`; negative
    /// modes are filled by conjugation so the field is real.
    pub fn from_modal(
        p_max: usize,
        ny: usize,
        even_in_y: bool,
        mut f: impl FnMut(i64, f64) -> Complex64,
    ) -> Self {
        let y = cheb::nodes(ny);
        let mut out = Self::zeros(p_max, ny);
        for p in 0..=p_max as i64 {
            for (j, &yj) in y.iter().enumerate() {
                let v = f(p, yj);
                out.set(p, j, v);
                if p > 0 {
                    out.set(-p, j, v.conj());
                }
            }
        }
        out.even_in_y = even_in_y;
        out
    }

    /// Extends a boundary field constant in `y`.
    pub fn const_in_y(f: &PeriodicField, ny: usize) -> Self {
        let mut out = Self::zeros(f.truncation(), ny);
        for p in -(f.truncation() as i64)..=(f.truncation() as i64) {
            for j in 0..=ny {
                out.set(p, j, f.coeff(p));
            }
        }
        out.even_in_y = true;
        out
    }

    /// Separable field `f(x) g(y)` with `g` given by node values.
    pub fn separable(f: &PeriodicField, g_nodes: &[f64], even_in_y: bool) -> Self {
        let ny = g_nodes.len() - 1;
        let mut out = Self::zeros(f.truncation(), ny);
        for p in -(f.truncation() as i64)..=(f.truncation() as i64) {
            for (j, &g) in g_nodes.iter().enumerate() {
                out.set(p, j, f.coeff(p) * g);
            }
        }
        out.even_in_y = even_in_y;
        out
    }

    pub fn truncation(&self) -> usize {
        self.p_max
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    /// Whether the constructors guaranteed evenness in `y`.
    pub fn even_in_y(&self) -> bool {
        self.even_in_y
    }

    pub fn get(&self, p: i64, j: usize) -> Complex64 {
        let i = p + self.p_max as i64;
        if i < 0 || i >= (2 * self.p_max + 1) as i64 {
            return Complex64::new(0.0, 0.0);
        }
        self.data[i as usize * (self.ny + 1) + j]
    }

    pub fn set(&mut self, p: i64, j: usize, v: Complex64) {
        let i = (p + self.p_max as i64) as usize;
        self.data[i * (self.ny + 1) + j] = v;
    }

    fn mode_slice(&self, p: i64) -> &[Complex64] {
        let i = (p + self.p_max as i64) as usize;
        &self.data[i * (self.ny + 1)..(i + 1) * (self.ny + 1)]
    }

    /// Averages paired nodes `y_j`, `-y_j`, producing an exactly even field.
    pub fn symmetrized_even(&self) -> Self {
        let mut out = self.clone();
        for p in -(self.p_max as i64)..=(self.p_max as i64) {
            for j in 0..=self.ny {
                let avg = (self.get(p, j) + self.get(p, self.ny - j)) * 0.5;
                out.set(p, j, avg);
            }
        }
        out.even_in_y = true;
        out
    }

    /// Measured deviation from evenness at paired nodes.
    pub fn evenness_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for p in -(self.p_max as i64)..=(self.p_max as i64) {
            for j in 0..=self.ny {
                let d = (self.get(p, j) - self.get(p, self.ny - j)).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Trace on the top boundary `Gamma_+` (node `y_0 = 1`).
    pub fn trace_top(&self) -> PeriodicField {
        let coeffs = (-(self.p_max as i64)..=(self.p_max as i64))
            .map(|p| self.get(p, 0))
            .collect();
        PeriodicField::from_coeffs(coeffs).expect("trace of a real strip field is real")
    }

    /// Trace on the bottom boundary `Gamma_-` (node `y_ny = -1`).
    pub fn trace_bottom(&self) -> PeriodicField {
        let coeffs = (-(self.p_max as i64)..=(self.p_max as i64))
            .map(|p| self.get(p, self.ny))
            .collect();
        PeriodicField::from_coeffs(coeffs).expect("trace of a real strip field is real")
    }

    /// Spectral `x`-derivative of order `m`.
    pub fn deriv_x(&self, m: u32) -> Self {
        let mut out = self.clone();
        for p in -(self.p_max as i64)..=(self.p_max as i64) {
            let factor = Complex64::new(0.0, p as f64).powu(m);
            for j in 0..=self.ny {
                out.set(p, j, self.get(p, j) * factor);
            }
        }
        out.even_in_y = self.even_in_y;
        out
    }

    /// Collocation `y`-derivative (applies the Gauss–Lobatto matrix to each
    /// mode profile). Flips evenness.
    pub fn deriv_y(&self) -> Self {
        let d = cheb::diff_matrix(self.ny);
        let m = self.ny + 1;
        let mut out = Self::zeros(self.p_max, self.ny);
        for p in -(self.p_max as i64)..=(self.p_max as i64) {
            let src = self.mode_slice(p).to_vec();
            for i in 0..m {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..m {
                    acc += d[i * m + j] * src[j];
                }
                out.set(p, i, acc);
            }
        }
        out.even_in_y = false;
        out
    }

    pub fn add(&self, g: &Self) -> Self {
        assert_eq!((self.p_max, self.ny), (g.p_max, g.ny));
        let data = self.data.iter().zip(&g.data).map(|(a, b)| a + b).collect();
        Self {
            data,
            p_max: self.p_max,
            ny: self.ny,
            even_in_y: self.even_in_y && g.even_in_y,
        }
    }

    pub fn sub(&self, g: &Self) -> Self {
        assert_eq!((self.p_max, self.ny), (g.p_max, g.ny));
        let data = self.data.iter().zip(&g.data).map(|(a, b)| a - b).collect();
        Self {
            data,
            p_max: self.p_max,
            ny: self.ny,
            even_in_y: self.even_in_y && g.even_in_y,
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        let data = self.data.iter().map(|a| a * c).collect();
        Self {
            data,
            p_max: self.p_max,
            ny: self.ny,
            even_in_y: self.even_in_y,
        }
    }

    /// Dealiased product with a boundary field (constant in `y`), row by row.
    pub fn mul_periodic(&self, g: &PeriodicField) -> Self {
        assert_eq!(self.p_max, g.truncation());
        let mut out = Self::zeros(self.p_max, self.ny);
        for j in 0..=self.ny {
            let row = self.row_field(j);
            let prod = row.product(g);
            for p in -(self.p_max as i64)..=(self.p_max as i64) {
                out.set(p, j, prod.coeff(p));
            }
        }
        out.even_in_y = self.even_in_y;
        out
    }

    /// Dealiased product of two strip fields, row by row in `y`.
    pub fn mul_strip(&self, g: &Self) -> Self {
        assert_eq!((self.p_max, self.ny), (g.p_max, g.ny));
        let mut out = Self::zeros(self.p_max, self.ny);
        for j in 0..=self.ny {
            let prod = self.row_field(j).product(&g.row_field(j));
            for p in -(self.p_max as i64)..=(self.p_max as i64) {
                out.set(p, j, prod.coeff(p));
            }
        }
        out.even_in_y = self.even_in_y && g.even_in_y;
        out
    }

    /// The `x`-slice at node `j` as a periodic field.
    pub fn row_field(&self, j: usize) -> PeriodicField {
        let coeffs = (-(self.p_max as i64)..=(self.p_max as i64))
            .map(|p| self.get(p, j))
            .collect();
        PeriodicField::from_coeffs(coeffs).expect("x-slice of a real strip field is real")
    }

    /// Replaces the `x`-slice at node `j`.
    pub fn set_row(&mut self, j: usize, f: &PeriodicField) {
        assert_eq!(f.truncation(), self.p_max);
        for p in -(self.p_max as i64)..=(self.p_max as i64) {
            self.set(p, j, f.coeff(p));
        }
    }

    /// Physical values on an `nx`-point equispaced grid per node row,
    /// layout `vals[i * (ny + 1) + j] = w(x_i, y_j)`.
    pub fn to_grid(&self, nx: usize) -> Vec<f64> {
        let mut out = vec![0.0; nx * (self.ny + 1)];
        for j in 0..=self.ny {
            let row = self.row_field(j).synthesize(nx);
            for (i, &v) in row.iter().enumerate() {
                out[i * (self.ny + 1) + j] = v;
            }
        }
        out
    }

    /// Analyzes physical grid values (layout as in [`Self::to_grid`]).
    pub fn from_grid(vals: &[f64], nx: usize, p_max: usize, ny: usize) -> Self {
        assert_eq!(vals.len(), nx * (ny + 1));
        let mut out = Self::zeros(p_max, ny);
        let mut row = vec![0.0; nx];
        for j in 0..=ny {
            for i in 0..nx {
                row[i] = vals[i * (ny + 1) + j];
            }
            let f = PeriodicField::analyze(&row, p_max);
            out.set_row(j, &f);
        }
        out.even_in_y = false;
        out
    }

    /// 1D Sobolev norms `||w_p||_j` for `j = 0..=s` of one mode profile.
    fn mode_norms_sq(&self, p: i64, s: usize, d: &[f64], w: &[f64]) -> Vec<f64> {
        let m = self.ny + 1;
        let mut cur = self.mode_slice(p).to_vec();
        let mut out = Vec::with_capacity(s + 1);
        for j in 0..=s {
            let l2: f64 = cur.iter().zip(w).map(|(c, ww)| ww * c.norm_sqr()).sum();
            out.push(l2);
            if j < s {
                let mut next = vec![Complex64::new(0.0, 0.0); m];
                for i in 0..m {
                    for k in 0..m {
                        next[i] += d[i * m + k] * cur[k];
                    }
                }
                cur = next;
            }
        }
        out
    }

    /// Strip Sobolev norm of integer order `s`.
    ///
    /// Rejects `s > ny / 2`: repeated collocation differentiation past that
    /// order is not resolved by the node count.
    pub fn strip_norm(&self, s: usize) -> Result<f64> {
        if s > self.ny / 2 {
            return Err(Error::InvalidInput(format!(
                "norm order s = {s} not resolvable with ny = {}",
                self.ny
            )));
        }
        let d = cheb::diff_matrix(self.ny);
        let w = cheb::quad_weights(self.ny);
        let mut acc = 0.0;
        for p in -(self.p_max as i64)..=(self.p_max as i64) {
            let norms = self.mode_norms_sq(p, s, &d, &w);
            let h_s_sq: f64 = norms.iter().sum();
            // |p|^{2s} carries the x-derivatives; at s = 0 the expression
            // is the plain L^2 norm (checked against 2D quadrature).
            let weight = if s == 0 {
                0.0
            } else {
                ((p * p) as f64).powi(s as i32)
            };
            acc += h_s_sq + weight * norms[0];
        }
        Ok(acc.sqrt())
    }

    /// Scaled norm `||w||_{s-1} + ||d_y w||_{s-1} + eps ||w||_s`, `s >= 1`.
    pub fn scaled_norm(&self, s: usize, eps: f64) -> Result<f64> {
        if s == 0 {
            return Err(Error::InvalidInput("scaled norm needs s >= 1".into()));
        }
        Ok(self.strip_norm(s - 1)?
            + self.deriv_y().strip_norm(s - 1)?
            + eps * self.strip_norm(s)?)
    }

    /// Boundary norm on `H^t(Gamma_+) x H^t(Gamma_-)` (fractional `t` fine).
    pub fn boundary_norm(&self, t: f64) -> f64 {
        let top = self.trace_top().sobolev_norm(t);
        let bot = self.trace_bottom().sobolev_norm(t);
        (top * top + bot * bot).sqrt()
    }

    /// `|| grad_eps w ||_0` with `grad_eps = (eps d_x, d_y)`.
    pub fn grad_eps_norm(&self, eps: f64) -> f64 {
        let dx = self.deriv_x(1).strip_norm(0).expect("s = 0 always resolvable");
        let dy = self.deriv_y().strip_norm(0).expect("s = 0 always resolvable");
        ((eps * dx).powi(2) + dy * dy).sqrt()
    }
}

/// Even extension of boundary data from `Gamma_+` into the strip:
/// `w_p(y) = y^2 e^{eps |p| (y^2 - 1)} fhat(p)`.
///
/// The trace on `Gamma_+` is `f` exactly and the field is even in `y` by
/// construction. The exponent carries the factor `eps` so the profiles
/// decay on the `eps |p|` scale used by the scaled estimates.
pub fn extend_plus(f: &PeriodicField, eps: f64, ny: usize) -> StripField {
    StripField::from_modal(f.truncation(), ny, true, |p, y| {
        let decay = (eps * p.unsigned_abs() as f64 * (y * y - 1.0)).exp();
        f.coeff(p) * y * y * decay
    })
}

/// Ratio measured against the extension estimate
/// `||E f||_{t+1,eps} <= C (||f||_t + eps^{1/2} ||f||_{t+1/2})`.
pub fn extension_ratio(f: &PeriodicField, eps: f64, t: usize, ny: usize) -> Result<f64> {
    let e = extend_plus(f, eps, ny);
    let lhs = e.scaled_norm(t + 1, eps)?;
    let rhs = f.sobolev_norm(t as f64) + eps.sqrt() * f.sobolev_norm(t as f64 + 0.5);
    Ok(lhs / rhs)
}

/// Which Poincare inequality variant to measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoincareVariant {
    /// `||w||_0 <= C ||grad_eps w||_0` for `w = 0` on the whole boundary.
    ZeroBoundary,
    /// `||w||_0 <= C eps^{-1} ||grad_eps w||_0` for zero-mean top trace;
    /// the reported ratio carries the `eps` weight.
    ZeroMeanTrace,
}

/// Measured Poincare ratio; the side condition is checked to `1e-8`.
pub fn poincare_check(w: &StripField, eps: f64, variant: PoincareVariant) -> Result<f64> {
    let scale = w.strip_norm(0)?.max(1.0);
    match variant {
        PoincareVariant::ZeroBoundary => {
            let defect = w.boundary_norm(0.0);
            if defect > 1e-8 * scale {
                return Err(Error::SideCondition(format!(
                    "boundary trace norm {defect:.3e} nonzero"
                )));
            }
        }
        PoincareVariant::ZeroMeanTrace => {
            let mean = w.trace_top().mean().abs();
            if mean > 1e-8 * scale {
                return Err(Error::SideCondition(format!(
                    "top trace mean {mean:.3e} nonzero"
                )));
            }
        }
    }
    let num = w.strip_norm(0)?;
    if num == 0.0 {
        return Ok(0.0);
    }
    let grad = w.grad_eps_norm(eps);
    let ratio = num / grad;
    Ok(match variant {
        PoincareVariant::ZeroBoundary => ratio,
        PoincareVariant::ZeroMeanTrace => eps * ratio,
    })
}

/// Measured trace-inequality ratio
/// `(||w||_t + sqrt(eps) ||w||_{t+1/2}) / ||w||_{t+1, eps}` on the boundary.
pub fn trace_check(w: &StripField, eps: f64, t: usize) -> Result<f64> {
    let num = w.boundary_norm(t as f64) + eps.sqrt() * w.boundary_norm(t as f64 + 0.5);
    if num == 0.0 {
        return Ok(0.0);
    }
    let den = w.scaled_norm(t + 1, eps)?;
    Ok(num / den)
}
