//! Interface-dependent geometry of the pulled-back problem.
//!
//! The moving domain is straightened by `Phi_h(x, y) = (x, y htilde(x, y))`
//! with the extension `htilde(x, y) := h(x)`, constant in `y`. That choice
//! satisfies every property the transformed operators use (`htilde` even,
//! trace `h` on `Gamma_+`, `d_y htilde = 0` there, `y htilde` strictly
//! increasing for positive `h`) and makes the diffeomorphism coefficients
//! closed-form:
//!
//! `a_1 = -d_x(y htilde) / d_y(y htilde) = -y h'(x) / h(x)`,
//! `a_2 = 1 / d_y(y htilde) = 1 / h(x)`.
//!
//! Curvature of the top boundary is `kappa(eps, h) = h'' / (1 + eps^2 h'^2)^{3/2}`
//! together with its Taylor coefficients in `eps` (odd ones vanish).

use crate::spectral::{pointwise_combine, PeriodicField};
use crate::strip::StripField;
use crate::{Error, Result};

/// Membership parameters for the admissible set: `min h > alpha` on the
/// padded grid and `||h||_s < M`.
#[derive(Debug, Clone, Copy)]
pub struct Admissibility {
    pub alpha: f64,
    pub norm_cap: f64,
    /// Sobolev order used for the cap.
    pub norm_order: f64,
}

impl Default for Admissibility {
    fn default() -> Self {
        Self {
            alpha: 0.1,
            norm_cap: 100.0,
            norm_order: 3.0,
        }
    }
}

impl Admissibility {
    /// Checks `h` against both membership conditions.
    pub fn check(&self, h: &PeriodicField) -> Result<()> {
        let min_h = h.min_on_grid();
        if min_h <= self.alpha {
            return Err(Error::PositivityLost {
                min_h,
                alpha: self.alpha,
            });
        }
        let norm = h.sobolev_norm(self.norm_order);
        if norm >= self.norm_cap {
            return Err(Error::NormCapExceeded {
                norm,
                cap: self.norm_cap,
            });
        }
        Ok(())
    }
}

/// The evolving interface: time, height field, slenderness parameter.
#[derive(Debug, Clone)]
pub struct ThreadState {
    pub time: f64,
    pub h: PeriodicField,
    pub eps: f64,
}

impl ThreadState {
    pub fn new(time: f64, h: PeriodicField, eps: f64, adm: &Admissibility) -> Result<Self> {
        adm.check(&h)?;
        Ok(Self { time, h, eps })
    }
}

/// Diffeomorphism coefficients on the strip.
#[derive(Debug, Clone)]
pub struct GeometryCoeffs {
    pub a1: StripField,
    pub a2: StripField,
    pub h_tilde: StripField,
    h: PeriodicField,
}

impl GeometryCoeffs {
    /// The interface the coefficients were built from.
    pub fn interface(&self) -> &PeriodicField {
        &self.h
    }
}

fn require_positive(h: &PeriodicField) -> Result<f64> {
    let min_h = h.min_on_grid();
    if min_h <= 0.0 {
        return Err(Error::PositivityLost { min_h, alpha: 0.0 });
    }
    Ok(min_h)
}

/// Constant-in-`y` extension `htilde(x, y) = h(x)`.
pub fn extend_h(h: &PeriodicField, ny: usize) -> Result<StripField> {
    require_positive(h)?;
    Ok(StripField::const_in_y(h, ny))
}

/// Builds `a_1 = -y h'/h`, `a_2 = 1/h`, and `htilde` at `ny + 1` nodes.
pub fn coeffs(h: &PeriodicField, ny: usize) -> Result<GeometryCoeffs> {
    require_positive(h)?;
    let dh = h.deriv(1);
    // -h'/h and 1/h evaluated pointwise on the padded grid.
    let slope = pointwise_combine(&[&dh, h], |v| -v[0] / v[1]);
    let recip = h.pointwise_map(|v| 1.0 / v);
    let y = crate::cheb::nodes(ny);
    let a1 = StripField::separable(&slope, &y, false);
    let a2 = StripField::const_in_y(&recip, ny);
    let h_tilde = StripField::const_in_y(h, ny);
    Ok(GeometryCoeffs {
        a1,
        a2,
        h_tilde,
        h: h.clone(),
    })
}

/// Curvature `kappa(eps, h) = h'' / (1 + eps^2 h'^2)^{3/2}`, evaluated
/// pointwise on the padded grid and re-analyzed.
pub fn curvature(eps: f64, h: &PeriodicField) -> PeriodicField {
    let dh = h.deriv(1);
    let d2h = h.deriv(2);
    pointwise_combine(&[&d2h, &dh], |v| {
        v[0] / (1.0 + eps * eps * v[1] * v[1]).powf(1.5)
    })
}

/// Binomial coefficient `C(-3/2, m) = (-1)^m (2m+1)!! / (2^m m!)`, the
/// `u^m` coefficient of `(1 + u)^{-3/2}`.
fn binom_neg_three_half(m: u32) -> f64 {
    let mut val = 1.0;
    for i in 0..m {
        // multiply by (-3/2 - i) / (i + 1)
        val *= (-1.5 - i as f64) / (i as f64 + 1.0);
    }
    val
}

/// The `eps^p` Taylor coefficient of `eps -> kappa(eps, h)` at `eps = 0`:
/// `kappa^[0] = h''`, `kappa^[2m] = C(-3/2, m) h'' (h')^{2m}`, zero for odd `p`.
pub fn curvature_coeff(h: &PeriodicField, p: u32) -> PeriodicField {
    if p % 2 == 1 {
        return PeriodicField::zeros(h.truncation());
    }
    let m = p / 2;
    let d2h = h.deriv(2);
    if m == 0 {
        return d2h;
    }
    let dh = h.deriv(1);
    let dh_sq = dh.product(&dh);
    let mut pow = dh_sq.clone();
    for _ in 1..m {
        pow = pow.product(&dh_sq);
    }
    d2h.product(&pow).scale(binom_neg_three_half(m))
}
