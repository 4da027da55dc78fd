//! Monotone piecewise cubic Hermite interpolation (Fritsch–Carlson slopes
//! with the weighted harmonic mean, three-point shape-preserving ends).

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if s.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        s
    }
}

/// Node slopes of the monotone interpolant through `(x, y)`; `x` strictly increasing.
pub fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    assert!(n >= 2 && y.len() == n);
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let del: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return vec![del[0]; 2];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        if del[k - 1] * del[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
        }
    }
    d[0] = end_slope(h[0], h[1], del[0], del[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    d
}

/// Evaluates the interpolant at sorted targets inside `[x₀, x_last]`.
pub fn pchip_eval(x: &[f64], y: &[f64], targets: &[f64]) -> Vec<f64> {
    let d = pchip_slopes(x, y);
    let mut out = Vec::with_capacity(targets.len());
    let mut seg = 0;
    for &t in targets {
        while seg + 2 < x.len() && t > x[seg + 1] {
            seg += 1;
        }
        let (x0, x1) = (x[seg], x[seg + 1]);
        let hh = x1 - x0;
        let s = (t - x0) / hh;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        out.push(h00 * y[seg] + h10 * hh * d[seg] + h01 * y[seg + 1] + h11 * hh * d[seg + 1]);
    }
    out
}
