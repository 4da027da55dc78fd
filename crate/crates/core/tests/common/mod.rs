//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use sympflow::qform::{CanonicalIndex, SymTensor3};
use sympflow::sympl::SingularSpectrum;

/// Dense symmetric tensor with entries drawn per unordered triple.
pub struct Dense {
    pub d: usize,
    pub h: Vec<f64>,
}

impl Dense {
    pub fn at(&self, i: usize, j: usize, k: usize) -> f64 {
        self.h[(i * self.d + j) * self.d + k]
    }
}

pub fn random_dense<R: Rng>(n: usize, rng: &mut R) -> Dense {
    let d = 2 * n;
    let mut h = vec![0.0; d * d * d];
    for i in 0..d {
        for j in i..d {
            for k in j..d {
                let v: f64 = rng.random_range(-1.0..1.0);
                for (a, b, c) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                    h[(a * d + b) * d + c] = v;
                }
            }
        }
    }
    Dense { d, h }
}

pub fn to_sym(n: usize, dense: &Dense) -> SymTensor3 {
    let idx = CanonicalIndex::new(n);
    let mut t = SymTensor3::zeros(n);
    let d = 2 * n;
    for i in 0..d {
        for j in i..d {
            for k in j..d {
                t.set(&idx, i, j, k, dense.at(i, j, k));
            }
        }
    }
    t
}

pub fn random_spectrum<R: Rng>(n: usize, rng: &mut R) -> SingularSpectrum {
    let t: Vec<f64> = (0..n).map(|_| rng.random_range(-1.2..1.2)).collect();
    SingularSpectrum::from_log_pairs(&t)
}

// The loops below use 1-based indices as written, with i' = i + (-1)^{i+1}.
fn partner(i: usize) -> usize {
    if i % 2 == 1 {
        i + 1
    } else {
        i - 1
    }
}

fn hh(h: &Dense, i: usize, j: usize, k: usize) -> f64 {
    h.at(i - 1, j - 1, k - 1)
}

fn common(h: &Dense) -> f64 {
    let d = h.d;
    let mut s = 0.0;
    for i in 1..=d {
        for j in 1..=d {
            for k in 1..=d {
                s += hh(h, i, j, k).powi(2);
            }
        }
    }
    for k in 1..=d {
        for i in (1..=d).filter(|i| i % 2 == 1) {
            let ip = partner(i);
            s -= 2.0 * (hh(h, i, i, k) * hh(h, ip, ip, k) - hh(h, i, ip, k).powi(2));
        }
    }
    s
}

/// Q from the sum over `i < j`, `j ≠ i'` with weights `(-1)^{i+j} λᵢλⱼ`.
pub fn q_evolution(lambda: &[f64], h: &Dense) -> f64 {
    let d = h.d;
    let l = |i: usize| lambda[i - 1];
    let mut s = common(h);
    for k in 1..=d {
        for i in 1..=d {
            for j in i + 1..=d {
                if j == partner(i) {
                    continue;
                }
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                let (ip, jp) = (partner(i), partner(j));
                s -= 2.0 * sign * l(i) * l(j) * (hh(h, ip, i, k) * hh(h, jp, j, k) - hh(h, ip, j, k) * hh(h, jp, i, k));
            }
        }
    }
    s
}

/// Q regrouped over pairs of odd indices.
pub fn q_regrouped(lambda: &[f64], h: &Dense) -> f64 {
    let d = h.d;
    let l = |i: usize| lambda[i - 1];
    let mut s = common(h);
    for k in 1..=d {
        for i in (1..=d).filter(|i| i % 2 == 1) {
            for j in (i + 1..=d).filter(|j| j % 2 == 1) {
                let (ip, jp) = (partner(i), partner(j));
                s -= 2.0 * (l(i) - l(ip)) * (l(j) - l(jp)) * hh(h, ip, i, k) * hh(h, jp, j, k);
                s -= 2.0
                    * (-(l(i) * l(j) + l(ip) * l(jp)) * hh(h, ip, j, k) * hh(h, jp, i, k)
                        + (l(ip) * l(j) + l(i) * l(jp)) * hh(h, i, j, k) * hh(h, jp, ip, k));
            }
        }
    }
    s
}

/// Q̃ = Q + Σ_k [Σ_{i odd} (λᵢ − λ_{i'}) h_{ii'k}]².
pub fn q_tilde(lambda: &[f64], h: &Dense) -> f64 {
    let d = h.d;
    let mut g = 0.0;
    for k in 1..=d {
        let mut inner = 0.0;
        for i in (1..=d).filter(|i| i % 2 == 1) {
            inner += (lambda[i - 1] - lambda[partner(i) - 1]) * hh(h, i, partner(i), k);
        }
        g += inner * inner;
    }
    q_evolution(lambda, h) + g
}

/// Classical fourth-order Runge–Kutta for a scalar autonomous ODE.
pub fn rk4(f: impl Fn(f64) -> f64, y0: f64, t: f64, steps: usize) -> f64 {
    let h = t / steps as f64;
    let mut y = y0;
    for _ in 0..steps {
        let k1 = f(y);
        let k2 = f(y + 0.5 * h * k1);
        let k3 = f(y + 0.5 * h * k2);
        let k4 = f(y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    y
}
