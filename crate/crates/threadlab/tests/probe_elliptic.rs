// scratch probe: grid-pointwise total vs matrix
use threadlab::cheb;
use threadlab::elliptic::DirichletSolver;
use threadlab::geometry::coeffs;
use threadlab::spectral::PeriodicField;
use threadlab::strip::StripField;

fn interior_diff(a: &StripField, b: &StripField) -> f64 {
    let mut worst = 0.0f64;
    for p in -(a.truncation() as i64)..=(a.truncation() as i64) {
        for j in 1..a.ny() {
            worst = worst.max((a.get(p, j) - b.get(p, j)).norm());
        }
    }
    worst
}

#[test]
fn probe() {
    let p_max = 10;
    let ny = 12;
    let h = PeriodicField::from_cosines(p_max, 1.0, &[(1, 0.1)]);
    let geom = coeffs(&h, ny).unwrap();
    let eps = 0.2;
    let e2 = eps * eps;
    let solver = DirichletSolver::new(eps, &geom).unwrap();
    let y = cheb::nodes(ny);
    let nx = 2 * p_max + 1;

    for (label, modes) in [
        ("mode1", vec![(1usize, 0.7f64)]),
        ("mode5", vec![(5, 0.1)]),
        ("both", vec![(1, 0.7), (2, 0.3), (5, 0.1)]),
    ] {
        let fx = PeriodicField::from_cosines(p_max, 0.4, &modes);
        let w = StripField::separable(&fx, &y, false);
        let via_matrix = solver.apply_matrix(&w);

        // all-pointwise-on-grid total
        let a1g = geom.a1.to_grid(nx);
        let a2g = geom.a2.to_grid(nx);
        let da1x = geom.a1.deriv_x(1).to_grid(nx);
        let da1y = geom.a1.deriv_y().to_grid(nx);
        let da2y = geom.a2.deriv_y().to_grid(nx);
        let wxx = w.deriv_x(2).to_grid(nx);
        let wxy = w.deriv_x(1).deriv_y().to_grid(nx);
        let wyy = w.deriv_y().deriv_y().to_grid(nx);
        let wy = w.deriv_y().to_grid(nx);
        let total_grid: Vec<f64> = (0..a1g.len())
            .map(|i| {
                let c2 = e2 * a1g[i] * a1g[i] + a2g[i] * a2g[i];
                let c1 = e2 * da1x[i] + e2 * a1g[i] * da1y[i] + a2g[i] * da2y[i];
                -(e2 * wxx[i] + 2.0 * e2 * a1g[i] * wxy[i] + c2 * wyy[i] + c1 * wy[i])
            })
            .collect();
        let total_field = StripField::from_grid(&total_grid, nx, p_max, ny);
        println!("{label}: grid-total vs matrix: {:.3e}", interior_diff(&total_field, &via_matrix));
    }
}
