//! Deterministic quadrature rules: Gauss-Legendre, periodic trapezoid on the
//! circle, and composite/piecewise drivers used by the d = 2 estimators.

/// Gauss-Legendre nodes and weights on `[-1, 1]`, computed by Newton
/// iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut out = Vec::with_capacity(n);
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative via the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((-x, w));
        if n - 1 - i != i {
            out.push((x, w));
        }
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

/// Composite Gauss-Legendre integration of `f` over `[a, b]` with roughly
/// `budget` evaluations split into 8-point panels.
pub fn integrate_interval(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, budget: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let per_panel = 8;
    let panels = (budget / per_panel).max(1);
    let nodes = gauss_legendre(per_panel);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        let mut acc = 0.0;
        for &(x, w) in &nodes {
            acc += w * f(mid + 0.5 * h * x);
        }
        total += acc * 0.5 * h;
    }
    total
}

/// Integrates `f` over `[a, b]` split at the sorted interior `breaks`,
/// distributing `budget` evaluations across the pieces by length.
pub fn integrate_piecewise(
    f: &mut dyn FnMut(f64) -> f64,
    a: f64,
    b: f64,
    breaks: &[f64],
    budget: usize,
) -> f64 {
    let mut cuts = vec![a];
    for &t in breaks {
        if t > a && t < b {
            cuts.push(t);
        }
    }
    cuts.push(b);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
    let len = b - a;
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let piece = ((w[1] - w[0]) / len * budget as f64).ceil() as usize;
        total += integrate_interval(f, w[0], w[1], piece.max(16));
    }
    total
}

/// Equal-weight trapezoid nodes on the circle: `theta_k = 2 pi k / n` with
/// weight `2 pi / n`. Exact for trigonometric polynomials of degree < n.
pub fn circle_quadrature(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 4, "circle quadrature needs at least 4 nodes");
    let w = std::f64::consts::TAU / n as f64;
    (0..n).map(|k| (k as f64 * w, w)).collect()
}

/// Quadrature nodes over a triangle `(v0, v1, v2)` in `R^k` via the Duffy
/// map from the unit square, as `(point, weight)` pairs; weights sum to the
/// triangle area supplied by the caller.
pub fn triangle_rule(
    v0: &nalgebra::DVector<f64>,
    v1: &nalgebra::DVector<f64>,
    v2: &nalgebra::DVector<f64>,
    area: f64,
    n: usize,
) -> Vec<(nalgebra::DVector<f64>, f64)> {
    let gl = gauss_legendre(n);
    let mut out = Vec::with_capacity(n * n);
    for &(xs, ws) in &gl {
        let s = 0.5 * (xs + 1.0);
        for &(xt, wt) in &gl {
            let t = 0.5 * (xt + 1.0);
            // x = (1-s) v0 + s ((1-t) v1 + t v2), Jacobian 2 * area * s.
            let p = v0 * (1.0 - s) + v1 * (s * (1.0 - t)) + v2 * (s * t);
            let w = 2.0 * area * s * (0.25 * ws * wt);
            out.push((p, w));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::dvector;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        // GL with n nodes is exact through degree 2n - 1.
        let nodes = gauss_legendre(8);
        let total: f64 = nodes.iter().map(|&(_, w)| w).sum();
        assert_relative_eq!(total, 2.0, epsilon = 1e-14);
        let m14: f64 = nodes.iter().map(|&(x, w)| w * x.powi(14)).sum();
        assert_relative_eq!(m14, 2.0 / 15.0, epsilon = 1e-13);
    }

    #[test]
    fn circle_rule_constants_and_cosine_squared() {
        let nodes = circle_quadrature(8);
        let ones: f64 = nodes.iter().map(|&(_, w)| w).sum();
        assert_relative_eq!(ones, std::f64::consts::TAU, epsilon = 1e-12);
        let cos2: f64 = nodes.iter().map(|&(t, w)| w * t.cos().powi(2)).sum();
        assert_relative_eq!(cos2, std::f64::consts::PI, epsilon = 1e-12);

        // Degree-2 integrand is exact already at n = 4.
        let nodes = circle_quadrature(4);
        let cos2: f64 = nodes.iter().map(|&(t, w)| w * t.cos().powi(2)).sum();
        assert_relative_eq!(cos2, std::f64::consts::PI, epsilon = 1e-14);
    }

    #[test]
    fn interval_integration_of_sec_squared() {
        let mut f = |t: f64| 1.0 / (t.cos() * t.cos());
        let v = integrate_interval(&mut f, -std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_4, 256);
        assert_relative_eq!(v, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn piecewise_handles_kinks() {
        let mut f = |t: f64| t.abs();
        let v = integrate_piecewise(&mut f, -1.0, 2.0, &[0.0], 128);
        assert_relative_eq!(v, 2.5, epsilon = 1e-13);
    }

    #[test]
    fn triangle_rule_area_and_linear_moment() {
        let v0 = dvector![0.0, 0.0];
        let v1 = dvector![1.0, 0.0];
        let v2 = dvector![0.0, 1.0];
        let rule = triangle_rule(&v0, &v1, &v2, 0.5, 12);
        let area: f64 = rule.iter().map(|(_, w)| w).sum();
        assert_relative_eq!(area, 0.5, epsilon = 1e-13);
        let mx: f64 = rule.iter().map(|(p, w)| w * p[0]).sum();
        assert_relative_eq!(mx, 1.0 / 6.0, epsilon = 1e-12);
    }
}
