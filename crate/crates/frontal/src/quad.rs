//! Fixed-order quadrature and a small ODE stepper.

/// Positive nodes and weights of the 16-point Gauss-Legendre rule on [-1, 1].
const GL16: [(f64, f64); 8] = [
    (0.09501250983763745, 0.18945061045506859),
    (0.2816035507792589, 0.1826034150449236),
    (0.45801677765722737, 0.16915651939500262),
    (0.6178762444026438, 0.14959598881657676),
    (0.755404408355003, 0.12462897125553403),
    (0.8656312023878318, 0.09515851168249259),
    (0.9445750230732326, 0.062253523938647706),
    (0.9894009349916499, 0.027152459411754037),
];

/// Nodes and weights mapped to `[a, b]`.
pub fn gauss_legendre(a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    GL16.iter()
        .flat_map(move |&(x, w)| [(mid - half * x, half * w), (mid + half * x, half * w)])
}

/// Classical fourth-order Runge-Kutta for `y' = g(t, y)` from `t0` to `t1`.
pub fn rk4(t0: f64, t1: f64, y0: f64, step: f64, g: impl Fn(f64, f64) -> f64) -> f64 {
    let span = t1 - t0;
    if span == 0.0 {
        return y0;
    }
    let n = (span.abs() / step).ceil().max(1.0) as usize;
    let dt = span / n as f64;
    let mut y = y0;
    for i in 0..n {
        let t = t0 + i as f64 * dt;
        let k1 = g(t, y);
        let k2 = g(t + 0.5 * dt, y + 0.5 * dt * k1);
        let k3 = g(t + 0.5 * dt, y + 0.5 * dt * k2);
        let k4 = g(t + dt, y + dt * k3);
        y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_high_degree() {
        let got: f64 = gauss_legendre(0.0, 2.0).map(|(x, w)| w * x.powi(31)).sum();
        assert!((got - 2f64.powi(32) / 32.0).abs() / got < 1e-13);
    }

    #[test]
    fn rk4_exponential() {
        let y = rk4(0.0, 1.0, 1.0, 1e-3, |_, y| y);
        assert!((y - 1f64.exp()).abs() < 1e-12);
    }
}
