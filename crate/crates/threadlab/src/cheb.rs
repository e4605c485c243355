//! Chebyshev–Gauss–Lobatto collocation on `[-1, 1]`.
//!
//! Nodes `y_j = cos(j pi / n)`, `j = 0..=n`, so `y_0 = 1` and `y_n = -1` are
//! grid points and boundary traces are plain node values. Differentiation is
//! the standard dense collocation matrix (negative-sum trick on the
//! diagonal), integration is Clenshaw–Curtis.

use std::f64::consts::PI;

/// Collocation nodes `cos(j pi / n)` in decreasing order, length `n + 1`.
pub fn nodes(n: usize) -> Vec<f64> {
    assert!(n >= 1, "need at least two collocation nodes");
    (0..=n).map(|j| (PI * j as f64 / n as f64).cos()).collect()
}

/// Dense first-derivative matrix on the Gauss–Lobatto nodes, row-major
/// `(n + 1) x (n + 1)`.
pub fn diff_matrix(n: usize) -> Vec<f64> {
    let y = nodes(n);
    let m = n + 1;
    let c = |j: usize| -> f64 {
        let base = if j == 0 || j == n { 2.0 } else { 1.0 };
        base * if j % 2 == 0 { 1.0 } else { -1.0 }
    };
    let mut d = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            if i != j {
                d[i * m + j] = c(i) / c(j) / (y[i] - y[j]);
            }
        }
    }
    // Diagonal from the row-sum identity: exact derivative of constants is 0.
    for i in 0..m {
        let s: f64 = (0..m).filter(|&j| j != i).map(|j| d[i * m + j]).sum();
        d[i * m + i] = -s;
    }
    d
}

/// Clenshaw–Curtis quadrature weights for `int_{-1}^{1} f dy` on the
/// Gauss–Lobatto nodes.
pub fn quad_weights(n: usize) -> Vec<f64> {
    let m = n + 1;
    let mut w = vec![0.0; m];
    // w_j = sum over even k of (2 / (1 - k^2)) * cardinal-coefficient term.
    for j in 0..m {
        let cj = if j == 0 || j == n { 2.0 } else { 1.0 };
        let mut acc = 0.0;
        let mut k = 0usize;
        while k <= n {
            let ck = if k == 0 || k == n { 2.0 } else { 1.0 };
            let moment = 2.0 / (1.0 - (k * k) as f64); // int T_k, k even
            acc += moment * 2.0 / (n as f64 * ck * cj) * (PI * (k * j) as f64 / n as f64).cos();
            k += 2;
        }
        w[j] = acc;
    }
    w
}

/// Chebyshev coefficients `a_k` of the interpolant `sum a_k T_k(y)` through
/// node values `f_j` (values ordered like [`nodes`]).
pub fn coefficients(values: &[f64], n: usize) -> Vec<f64> {
    assert_eq!(values.len(), n + 1);
    let mut a = vec![0.0; n + 1];
    for (k, ak) in a.iter_mut().enumerate() {
        let ck = if k == 0 || k == n { 2.0 } else { 1.0 };
        let mut s = 0.0;
        for (j, &fj) in values.iter().enumerate() {
            let cj = if j == 0 || j == n { 2.0 } else { 1.0 };
            s += fj / cj * (PI * (k * j) as f64 / n as f64).cos();
        }
        *ak = 2.0 * s / (n as f64 * ck);
    }
    a
}

/// Evaluate a Chebyshev series `sum a_k T_k(y)` via Clenshaw recurrence.
pub fn eval_series(coeffs: &[f64], y: f64) -> f64 {
    if coeffs.is_empty() {
        return 0.0;
    }
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &a in coeffs[1..].iter().rev() {
        let b0 = a + 2.0 * y * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    coeffs[0] + y * b1 - b2
}

/// Coefficients of the antiderivative with value zero at `y = 0`.
///
/// `int T_0 = T_1`, `int T_1 = T_2 / 4 + const`, and for `k >= 2`
/// `int T_k = T_{k+1} / (2(k+1)) - T_{k-1} / (2(k-1))`.
pub fn antiderivative(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len();
    let mut b = vec![0.0; n + 1];
    if n > 0 {
        b[1] += coeffs[0];
    }
    if n > 1 {
        b[2] += coeffs[1] / 4.0;
        b[0] += coeffs[1] / 4.0;
    }
    for k in 2..n {
        b[k + 1] += coeffs[k] / (2.0 * (k as f64 + 1.0));
        b[k - 1] -= coeffs[k] / (2.0 * (k as f64 - 1.0));
    }
    // Pin the integration constant so the antiderivative vanishes at 0.
    b[0] -= eval_series(&b, 0.0);
    b
}

/// Barycentric interpolation matrix from the `n`-node grid to arbitrary
/// targets, row-major `targets.len() x (n + 1)`.
pub fn interp_matrix(n: usize, targets: &[f64]) -> Vec<f64> {
    let y = nodes(n);
    let m = n + 1;
    // Barycentric weights for Gauss-Lobatto points: (-1)^j, halved at ends.
    let bw = |j: usize| -> f64 {
        let s = if j % 2 == 0 { 1.0 } else { -1.0 };
        if j == 0 || j == n {
            0.5 * s
        } else {
            s
        }
    };
    let mut out = vec![0.0; targets.len() * m];
    for (r, &t) in targets.iter().enumerate() {
        if let Some(hit) = y.iter().position(|&yy| (yy - t).abs() < 1e-14) {
            out[r * m + hit] = 1.0;
            continue;
        }
        let terms: Vec<f64> = (0..m).map(|j| bw(j) / (t - y[j])).collect();
        let denom: f64 = terms.iter().sum();
        for j in 0..m {
            out[r * m + j] = terms[j] / denom;
        }
    }
    out
}

/// Apply a row-major `rows x cols` matrix to a vector.
pub fn mat_vec(mat: &[f64], rows: usize, cols: usize, v: &[f64]) -> Vec<f64> {
    assert_eq!(v.len(), cols);
    let mut out = vec![0.0; rows];
    for i in 0..rows {
        let row = &mat[i * cols..(i + 1) * cols];
        out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_integrates_low_degree_polynomials_exactly() {
        for n in [8usize, 13, 16] {
            let y = nodes(n);
            let w = quad_weights(n);
            for m in 0..=n.min(10) {
                let q: f64 = y.iter().zip(&w).map(|(yy, ww)| ww * yy.powi(m as i32)).sum();
                let exact = if m % 2 == 0 { 2.0 / (m as f64 + 1.0) } else { 0.0 };
                assert!(
                    (q - exact).abs() < 1e-13,
                    "n={n} m={m}: got {q}, want {exact}"
                );
            }
        }
    }

    #[test]
    fn differentiation_is_exact_on_polynomials() {
        let n = 12;
        let y = nodes(n);
        let d = diff_matrix(n);
        let f: Vec<f64> = y.iter().map(|&v| v.powi(5) - 3.0 * v * v + 1.0).collect();
        let df = mat_vec(&d, n + 1, n + 1, &f);
        for (j, &yy) in y.iter().enumerate() {
            let exact = 5.0 * yy.powi(4) - 6.0 * yy;
            assert!((df[j] - exact).abs() < 1e-10, "node {j}");
        }
    }

    #[test]
    fn coefficients_round_trip_through_clenshaw() {
        let n = 10;
        let y = nodes(n);
        let f: Vec<f64> = y.iter().map(|&v| (2.0 * v).sin()).collect();
        let a = coefficients(&f, n);
        for (j, &yy) in y.iter().enumerate() {
            assert!((eval_series(&a, yy) - f[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn antiderivative_matches_closed_form() {
        // f = 3y^2 => F = y^3 with F(0) = 0
        let n = 8;
        let y = nodes(n);
        let f: Vec<f64> = y.iter().map(|&v| 3.0 * v * v).collect();
        let a = coefficients(&f, n);
        let b = antiderivative(&a);
        for &yy in &y {
            assert!((eval_series(&b, yy) - yy.powi(3)).abs() < 1e-12);
        }
        assert!(eval_series(&b, 0.0).abs() < 1e-14);
    }

    #[test]
    fn interpolation_reproduces_polynomials_on_fine_grid() {
        let n = 9;
        let fine = nodes(2 * n);
        let p = interp_matrix(n, &fine);
        let y = nodes(n);
        let f: Vec<f64> = y.iter().map(|&v| v.powi(7) - v).collect();
        let g = mat_vec(&p, fine.len(), n + 1, &f);
        for (i, &t) in fine.iter().enumerate() {
            assert!((g[i] - (t.powi(7) - t)).abs() < 1e-12);
        }
    }
}
