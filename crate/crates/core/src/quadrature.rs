//! Gauss–Legendre quadrature nodes and weights, plus the ball rules the
//! mollifier integrates over.

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
/// Newton iteration on the Legendre recurrence, symmetric about zero.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = ((i as f64 + 0.75) / (n as f64 + 0.5) * std::f64::consts::PI).cos();
        loop {
            let (p, dp) = legendre_and_derivative(n, z);
            let step = p / dp;
            z -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, z);
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// The rule mapped onto [a, b].
pub fn gauss_legendre_on(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (nodes, weights) = gauss_legendre(n);
    let half = (b - a) / 2.0;
    let mid = (a + b) / 2.0;
    (
        nodes.iter().map(|&x| mid + half * x).collect(),
        weights.iter().map(|&w| w * half).collect(),
    )
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let next = ((2 * k - 1) as f64 * x * p - (k - 1) as f64 * p_prev) / k as f64;
        p_prev = p;
        p = next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Quadrature points and weights covering the closed ball of radius
/// `radius` in `dimension` ∈ {1, 2, 3}: a plain interval rule for N = 1 and
/// radial × angular tensor rules otherwise, so integrands that are smooth on
/// the ball (the mollifier kernel times a smooth function) are integrated
/// with spectral accuracy and without boundary-indicator kinks.
pub fn ball_rule(dimension: usize, radius: f64, nodes_per_axis: usize) -> Vec<(Vec<f64>, f64)> {
    assert!(radius > 0.0);
    match dimension {
        1 => {
            let (xs, ws) = gauss_legendre_on(-radius, radius, nodes_per_axis);
            xs.into_iter().zip(ws).map(|(x, w)| (vec![x], w)).collect()
        }
        2 => {
            let (rs, wr) = gauss_legendre_on(0.0, radius, nodes_per_axis);
            let (ths, wth) = gauss_legendre_on(0.0, std::f64::consts::TAU, nodes_per_axis);
            let mut out = Vec::with_capacity(nodes_per_axis * nodes_per_axis);
            for (&r, &wr) in rs.iter().zip(&wr) {
                for (&th, &wt) in ths.iter().zip(&wth) {
                    out.push((vec![r * th.cos(), r * th.sin()], wr * wt * r));
                }
            }
            out
        }
        3 => {
            let (rs, wr) = gauss_legendre_on(0.0, radius, nodes_per_axis);
            let (ths, wth) = gauss_legendre_on(0.0, std::f64::consts::TAU, nodes_per_axis);
            let (mus, wmu) = gauss_legendre_on(-1.0, 1.0, nodes_per_axis);
            let mut out = Vec::with_capacity(nodes_per_axis.pow(3));
            for (&r, &wr) in rs.iter().zip(&wr) {
                for (&th, &wt) in ths.iter().zip(&wth) {
                    for (&mu, &wm) in mus.iter().zip(&wmu) {
                        let s = (1.0 - mu * mu).sqrt();
                        out.push((
                            vec![r * s * th.cos(), r * s * th.sin(), r * mu],
                            wr * wt * wm * r * r,
                        ));
                    }
                }
            }
            out
        }
        d => panic!("ball quadrature supports dimensions 1-3, got {d}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        // 5-point rule is exact through degree 9
        let (xs, ws) = gauss_legendre_on(0.0, 1.0, 5);
        let integral: f64 = xs.iter().zip(&ws).map(|(&x, &w)| w * x.powi(9)).sum();
        assert!((integral - 0.1).abs() < 1e-14);

        let (xs, ws) = gauss_legendre(16);
        let integral: f64 = xs.iter().zip(&ws).map(|(&x, &w)| w * x * x).sum();
        assert!((integral - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [1, 2, 7, 24] {
            let (_, ws) = gauss_legendre(n);
            let total: f64 = ws.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n={n}: {total}");
        }
    }

    #[test]
    fn ball_rule_measures_volumes() {
        // |B_R| = 2R, πR², 4πR³/3
        let r = 0.35;
        let expected = [
            2.0 * r,
            std::f64::consts::PI * r * r,
            4.0 * std::f64::consts::PI * r.powi(3) / 3.0,
        ];
        for dim in 1..=3usize {
            let total: f64 = ball_rule(dim, r, 24).iter().map(|(_, w)| w).sum();
            assert!(
                (total - expected[dim - 1]).abs() < 1e-12,
                "dim={dim}: {total} vs {}",
                expected[dim - 1]
            );
        }
    }

    #[test]
    fn ball_rule_integrates_radial_polynomial() {
        // ∫_{|y|≤1} (1−|y|²) dy over the 2-ball = π/2
        let value: f64 = ball_rule(2, 1.0, 24)
            .iter()
            .map(|(y, w)| w * (1.0 - y[0] * y[0] - y[1] * y[1]))
            .sum();
        assert!((value - std::f64::consts::PI / 2.0).abs() < 1e-12);
    }
}
