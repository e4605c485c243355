//! Real 2π-periodic fields as truncated Fourier series.
//!
//! The convention is the plain expansion `f(x) = sum_p fhat(p) e^{ipx}`
//! over `|p| <= P`, no `1/2pi` factor in the coefficients. Realness is the
//! Hermitian symmetry `fhat(-p) = conj(fhat(p))`, enforced on construction
//! and preserved by every operation. Sobolev norms follow
//! `||f||_s = (sum_p (1 + p^2)^s |fhat(p)|^2)^{1/2}`.
//!
//! Nonlinear operations (products, pointwise compositions) go through a
//! physical grid of `3(P+1)` points and are re-truncated, so quadratic
//! products of degree-`P` fields are alias-free.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;
use std::f64::consts::PI;

use crate::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_forward(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()).process(buf));
}

fn fft_inverse(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()).process(buf));
}

/// Grid size used for dealiased products at truncation order `p_max`.
pub fn padded_grid_size(p_max: usize) -> usize {
    3 * (p_max + 1)
}

/// A real-valued 2π-periodic function stored as Fourier coefficients
/// `fhat(p)`, `|p| <= P`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicField {
    /// Coefficients indexed by `i = p + P`, length `2P + 1`.
    coeffs: Vec<Complex64>,
    p_max: usize,
}

impl PeriodicField {
    /// Builds a field from raw coefficients (length `2P + 1`, index `p + P`).
    ///
    /// Hermitian symmetry is required up to `1e-12` of the largest
    /// coefficient and then enforced exactly.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() % 2 == 0 || coeffs.is_empty() {
            return Err(Error::InvalidInput(format!(
                "coefficient vector length {} is not odd",
                coeffs.len()
            )));
        }
        let p_max = coeffs.len() / 2;
        let scale = coeffs
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max)
            .max(1.0);
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite Fourier coefficient".into()));
        }
        for p in 0..=p_max {
            let a = coeffs[p_max + p];
            let b = coeffs[p_max - p];
            if (a - b.conj()).norm() > 1e-12 * scale {
                return Err(Error::InvalidInput(format!(
                    "Hermitian symmetry violated at mode {p}"
                )));
            }
        }
        let mut f = Self { coeffs, p_max };
        f.symmetrize();
        Ok(f)
    }

    /// Zero field at truncation order `p_max`.
    pub fn zeros(p_max: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * p_max + 1],
            p_max,
        }
    }

    /// Constant field `c`.
    pub fn constant(c: f64, p_max: usize) -> Self {
        let mut f = Self::zeros(p_max);
        f.coeffs[p_max] = Complex64::new(c, 0.0);
        f
    }

    /// `mean + sum_k a_k cos(k x)` from a list of `(k, a_k)`.
    pub fn from_cosines(p_max: usize, mean: f64, cosines: &[(usize, f64)]) -> Self {
        let mut f = Self::constant(mean, p_max);
        for &(k, a) in cosines {
            assert!(k >= 1 && k <= p_max, "cosine mode {k} outside 1..={p_max}");
            f.coeffs[p_max + k] += Complex64::new(a / 2.0, 0.0);
            f.coeffs[p_max - k] += Complex64::new(a / 2.0, 0.0);
        }
        f
    }

    /// `mean + sum_k (a_k cos(k x) + b_k sin(k x))` from `(k, a_k, b_k)`.
    pub fn from_cos_sin(p_max: usize, mean: f64, modes: &[(usize, f64, f64)]) -> Self {
        let mut f = Self::constant(mean, p_max);
        for &(k, a, b) in modes {
            assert!(k >= 1 && k <= p_max, "mode {k} outside 1..={p_max}");
            let c = Complex64::new(a / 2.0, -b / 2.0);
            f.coeffs[p_max + k] += c;
            f.coeffs[p_max - k] += c.conj();
        }
        f
    }

    /// Analyzes real samples at `x_j = 2 pi j / m` into a truncated field.
    /// Requires `m >= 2 p_max + 1`.
    pub fn analyze(values: &[f64], p_max: usize) -> Self {
        let m = values.len();
        assert!(m >= 2 * p_max + 1, "grid of {m} points cannot carry P={p_max}");
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        fft_forward(&mut buf);
        let scale = 1.0 / m as f64;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * p_max + 1];
        for p in -(p_max as i64)..=(p_max as i64) {
            let bin = p.rem_euclid(m as i64) as usize;
            coeffs[(p + p_max as i64) as usize] = buf[bin] * scale;
        }
        let mut f = Self { coeffs, p_max };
        f.symmetrize();
        f
    }

    /// Samples the field on an equispaced grid of `m >= 2P + 1` points.
    pub fn synthesize(&self, m: usize) -> Vec<f64> {
        assert!(m >= 2 * self.p_max + 1, "grid too coarse for synthesis");
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for p in -(self.p_max as i64)..=(self.p_max as i64) {
            let bin = p.rem_euclid(m as i64) as usize;
            buf[bin] = self.coeff(p);
        }
        fft_inverse(&mut buf);
        buf.iter().map(|c| c.re).collect()
    }

    /// Truncation order `P`.
    pub fn truncation(&self) -> usize {
        self.p_max
    }

    /// Coefficient `fhat(p)`; zero outside the stored range.
    pub fn coeff(&self, p: i64) -> Complex64 {
        let i = p + self.p_max as i64;
        if i < 0 || i >= self.coeffs.len() as i64 {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[i as usize]
        }
    }

    /// Mutable coefficient access; the caller must keep Hermitian pairs in
    /// sync (use `set_coeff_pair` where possible).
    pub fn set_coeff_pair(&mut self, p: u32, value: Complex64) {
        let p = p as usize;
        assert!(p <= self.p_max);
        self.coeffs[self.p_max + p] = value;
        self.coeffs[self.p_max - p] = value.conj();
        if p == 0 {
            self.coeffs[self.p_max] = Complex64::new(value.re, 0.0);
        }
    }

    fn symmetrize(&mut self) {
        for p in 1..=self.p_max {
            let a = self.coeffs[self.p_max + p];
            let b = self.coeffs[self.p_max - p];
            let avg = (a + b.conj()) * 0.5;
            self.coeffs[self.p_max + p] = avg;
            self.coeffs[self.p_max - p] = avg.conj();
        }
        self.coeffs[self.p_max] = Complex64::new(self.coeffs[self.p_max].re, 0.0);
    }

    /// `m`-th spectral derivative: coefficient `p` becomes `(ip)^m fhat(p)`.
    pub fn deriv(&self, m: u32) -> Self {
        let mut out = self.clone();
        for p in -(self.p_max as i64)..=(self.p_max as i64) {
            let ip = Complex64::new(0.0, p as f64);
            let factor = ip.powu(m);
            out.coeffs[(p + self.p_max as i64) as usize] = self.coeff(p) * factor;
        }
        out.symmetrize();
        out
    }

    /// `||f||_s = (sum (1 + p^2)^s |fhat(p)|^2)^{1/2}`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for p in -(self.p_max as i64)..=(self.p_max as i64) {
            let w = (1.0 + (p * p) as f64).powf(s);
            acc += w * self.coeff(p).norm_sqr();
        }
        acc.sqrt()
    }

    /// `int_S f dx = 2 pi fhat(0)`.
    pub fn mean(&self) -> f64 {
        2.0 * PI * self.coeffs[self.p_max].re
    }

    /// Dealiased pointwise product; both factors must share `P`.
    pub fn product(&self, g: &Self) -> Self {
        assert_eq!(self.p_max, g.p_max, "incompatible truncation orders");
        let m = padded_grid_size(self.p_max);
        let a = self.synthesize(m);
        let b = g.synthesize(m);
        let prod: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        Self::analyze(&prod, self.p_max)
    }

    /// Applies a scalar function pointwise on the padded grid, then
    /// re-analyzes. The truncation tail of the result should be monitored
    /// via [`Self::tail_energy_fraction`] when `f` is far from polynomial.
    pub fn pointwise_map(&self, f: impl Fn(f64) -> f64) -> Self {
        let m = padded_grid_size(self.p_max);
        let vals: Vec<f64> = self.synthesize(m).into_iter().map(f).collect();
        Self::analyze(&vals, self.p_max)
    }

    /// Raw coefficient vector consumed by constructors elsewhere.
    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Fraction of spectral energy carried by the top third of modes.
    pub fn tail_energy_fraction(&self) -> f64 {
        let total: f64 = (1..=self.p_max as i64)
            .map(|p| self.coeff(p).norm_sqr() + self.coeff(-p).norm_sqr())
            .sum();
        if total == 0.0 {
            return 0.0;
        }
        let cut = (2 * self.p_max) / 3;
        let tail: f64 = ((cut as i64 + 1)..=self.p_max as i64)
            .map(|p| self.coeff(p).norm_sqr() + self.coeff(-p).norm_sqr())
            .sum();
        tail / total
    }

    /// Evaluates the series at a single point.
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for p in -(self.p_max as i64)..=(self.p_max as i64) {
            acc += self.coeff(p) * Complex64::new(0.0, p as f64 * x).exp();
        }
        acc.re
    }

    /// Minimum of the field on the padded physical grid.
    pub fn min_on_grid(&self) -> f64 {
        self.synthesize(padded_grid_size(self.p_max))
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// Translation `x -> x + a`, exactly on coefficients.
    pub fn shift(&self, a: f64) -> Self {
        let mut out = self.clone();
        for p in -(self.p_max as i64)..=(self.p_max as i64) {
            let phase = Complex64::new(0.0, p as f64 * a).exp();
            out.coeffs[(p + self.p_max as i64) as usize] = self.coeff(p) * phase;
        }
        out.symmetrize();
        out
    }

    /// `f + g` (shared truncation).
    pub fn add(&self, g: &Self) -> Self {
        assert_eq!(self.p_max, g.p_max);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&g.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            coeffs,
            p_max: self.p_max,
        }
    }

    /// `f - g` (shared truncation).
    pub fn sub(&self, g: &Self) -> Self {
        assert_eq!(self.p_max, g.p_max);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&g.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            coeffs,
            p_max: self.p_max,
        }
    }

    /// `c * f`.
    pub fn scale(&self, c: f64) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        Self {
            coeffs,
            p_max: self.p_max,
        }
    }

    /// Bilinear pairing `int_S f g dx = 2 pi sum fhat(p) ghat(-p)`.
    pub fn l2_pairing(&self, g: &Self) -> f64 {
        assert_eq!(self.p_max, g.p_max);
        let mut acc = Complex64::new(0.0, 0.0);
        for p in -(self.p_max as i64)..=(self.p_max as i64) {
            acc += self.coeff(p) * g.coeff(-p);
        }
        2.0 * PI * acc.re
    }

    /// Largest coefficient magnitude of `f - g`.
    pub fn max_coeff_distance(&self, g: &Self) -> f64 {
        assert_eq!(self.p_max, g.p_max);
        self.coeffs
            .iter()
            .zip(&g.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Raw coefficient slice, index `p + P`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }
}

/// Pointwise combination of several fields on the shared padded grid,
/// re-analyzed at the common truncation.
pub fn pointwise_combine(fields: &[&PeriodicField], f: impl Fn(&[f64]) -> f64) -> PeriodicField {
    assert!(!fields.is_empty());
    let p_max = fields[0].truncation();
    assert!(fields.iter().all(|g| g.truncation() == p_max));
    let m = padded_grid_size(p_max);
    let grids: Vec<Vec<f64>> = fields.iter().map(|g| g.synthesize(m)).collect();
    let mut args = vec![0.0; fields.len()];
    let vals: Vec<f64> = (0..m)
        .map(|i| {
            for (k, g) in grids.iter().enumerate() {
                args[k] = g[i];
            }
            f(&args)
        })
        .collect();
    PeriodicField::analyze(&vals, p_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_field(rng: &mut ChaCha8Rng, p_max: usize, scale: f64) -> PeriodicField {
        let modes: Vec<(usize, f64, f64)> = (1..=p_max / 2)
            .map(|k| {
                (
                    k,
                    scale * rng.gen_range(-1.0..1.0) / k as f64,
                    scale * rng.gen_range(-1.0..1.0) / k as f64,
                )
            })
            .collect();
        PeriodicField::from_cos_sin(p_max, rng.gen_range(0.5..2.0), &modes)
    }

    #[test]
    fn deriv_of_cos_is_minus_sin() {
        let f = PeriodicField::from_cosines(8, 0.0, &[(1, 1.0)]);
        let df = f.deriv(1);
        let minus_sin = PeriodicField::from_cos_sin(8, 0.0, &[(1, 0.0, -1.0)]);
        assert!(df.max_coeff_distance(&minus_sin) < 1e-15);
    }

    #[test]
    fn deriv_of_constant_vanishes() {
        let f = PeriodicField::constant(1.0, 6);
        for m in 1..=4 {
            assert!(f.deriv(m).sobolev_norm(0.0) == 0.0);
        }
    }

    #[test]
    fn fourth_derivative_cycles_back_to_cos() {
        let f = PeriodicField::from_cosines(8, 0.0, &[(1, 1.0)]);
        assert!(f.deriv(4).max_coeff_distance(&f) < 1e-15);
    }

    #[test]
    fn sobolev_norm_reference_values() {
        let one = PeriodicField::constant(1.0, 8);
        for s in [0.0, 0.5, 1.0, 2.5] {
            assert!((one.sobolev_norm(s) - 1.0).abs() < 1e-15);
        }
        let cosx = PeriodicField::from_cosines(8, 0.0, &[(1, 1.0)]);
        assert!((cosx.sobolev_norm(0.0) - 1.0 / 2.0f64.sqrt()).abs() < 1e-15);
        assert!((cosx.sobolev_norm(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn product_reference_values() {
        let one = PeriodicField::constant(1.0, 8);
        let g = PeriodicField::from_cosines(8, 0.3, &[(2, 0.5)]);
        assert!(one.product(&g).max_coeff_distance(&g) < 1e-14);

        let cosx = PeriodicField::from_cosines(8, 0.0, &[(1, 1.0)]);
        let expected = PeriodicField::from_cosines(8, 0.5, &[(2, 0.5)]);
        assert!(cosx.product(&cosx).max_coeff_distance(&expected) < 1e-14);

        let sinx = PeriodicField::from_cos_sin(8, 0.0, &[(1, 0.0, 1.0)]);
        let expected = PeriodicField::from_cos_sin(8, 0.0, &[(2, 0.0, 0.5)]);
        assert!(sinx.product(&cosx).max_coeff_distance(&expected) < 1e-14);
    }

    #[test]
    fn mean_reference_values() {
        assert!((PeriodicField::constant(1.0, 4).mean() - 2.0 * PI).abs() < 1e-14);
        assert!(PeriodicField::from_cosines(4, 0.0, &[(1, 1.0)]).mean().abs() < 1e-15);
        let f = PeriodicField::from_cosines(4, 1.0, &[(1, 0.1)]);
        assert!((f.mean() - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn synthesis_analysis_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let f = random_field(&mut rng, 16, 1.0);
            for m in [33, 40, 51] {
                let g = PeriodicField::analyze(&f.synthesize(m), 16);
                let rel = f.max_coeff_distance(&g)
                    / f.coeffs().iter().map(|c| c.norm()).fold(1e-300, f64::max);
                assert!(rel < 1e-12, "round trip failed at m={m}: {rel}");
            }
        }
    }

    #[test]
    fn parseval_matches_grid_l2() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let f = random_field(&mut rng, 12, 1.0);
            let m = 101;
            let vals = f.synthesize(m);
            let grid_l2 = vals.iter().map(|v| v * v).sum::<f64>() / m as f64;
            let norm_sq = f.sobolev_norm(0.0).powi(2);
            assert!((grid_l2 - norm_sq).abs() / norm_sq < 1e-10);
        }
    }

    #[test]
    fn product_is_commutative_and_bilinear() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let f = random_field(&mut rng, 10, 1.0);
            let g = random_field(&mut rng, 10, 1.0);
            let h = random_field(&mut rng, 10, 1.0);
            let a = rng.gen_range(-2.0..2.0);

            assert!(f.product(&g).max_coeff_distance(&g.product(&f)) < 1e-14);

            let lhs = f.product(&g.scale(a).add(&h));
            let rhs = f.product(&g).scale(a).add(&f.product(&h));
            assert!(lhs.max_coeff_distance(&rhs) < 1e-13);
        }
    }

    #[test]
    fn shift_translates_values() {
        let f = PeriodicField::from_cosines(8, 1.0, &[(2, 0.3), (3, 0.1)]);
        let g = f.shift(0.7);
        for x in [0.0, 1.0, 2.5] {
            assert!((g.eval(x) - f.eval(x + 0.7)).abs() < 1e-13);
        }
    }

    #[test]
    fn hermitian_violation_is_rejected() {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 5];
        coeffs[3] = Complex64::new(1.0, 0.5);
        coeffs[1] = Complex64::new(1.0, 0.5); // should be the conjugate
        assert!(PeriodicField::from_coeffs(coeffs).is_err());
    }
}
