//! Pointwise geometry of the graph surface in `S² × S² ⊂ ℝ⁶`.
//!
//! The surface is `F(θ, φ) = (p(θ, φ), q(Θ(θ), φ + g(θ)))` with `p`, `q`
//! unit vectors in spherical coordinates. Equivariance gives
//! `F_φ = K F` and `F_φφ = K² F` with `K` the rotation generator about the
//! polar axis in each factor, so only θ-derivatives are discretized, all at
//! `φ = 0` by centered differences.
//!
//! The mean curvature in `S² × S²` is the trace of the second fundamental
//! form `II_ab = P_N(F_ab)`, where `P_N` drops the components along `p` and
//! `q` (the sphere normals) and then the components tangent to the surface.
//! This equals `Δ_Σ F` minus its sphere-normal part.

use nalgebra::Vector3;
use serde::Serialize;

use super::state::FlowState;

type V3 = Vector3<f64>;

/// A vector in `ℝ⁶ = ℝ³ × ℝ³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pair {
    pub p: V3,
    pub q: V3,
}

impl Pair {
    pub fn zero() -> Self {
        Pair { p: V3::zeros(), q: V3::zeros() }
    }

    #[inline]
    pub fn add(&self, o: &Pair) -> Pair {
        Pair { p: self.p + o.p, q: self.q + o.q }
    }

    #[inline]
    pub fn sub(&self, o: &Pair) -> Pair {
        Pair { p: self.p - o.p, q: self.q - o.q }
    }

    #[inline]
    pub fn scale(&self, c: f64) -> Pair {
        Pair { p: self.p * c, q: self.q * c }
    }

    #[inline]
    pub fn axpy(&self, c: f64, o: &Pair) -> Pair {
        Pair { p: self.p + o.p * c, q: self.q + o.q * c }
    }

    #[inline]
    pub fn dot(&self, o: &Pair) -> f64 {
        self.p.dot(&o.p) + self.q.dot(&o.q)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// `K(x, y, z) = (−y, x, 0)` in both factors.
    #[inline]
    pub fn rot(&self) -> Pair {
        Pair { p: V3::new(-self.p.y, self.p.x, 0.0), q: V3::new(-self.q.y, self.q.x, 0.0) }
    }

    /// Projection onto `T_p S² × T_q S²` at the point `at`.
    #[inline]
    pub fn tangent_part(&self, at: &Pair) -> Pair {
        Pair { p: self.p - at.p * at.p.dot(&self.p), q: self.q - at.q * at.q.dot(&self.q) }
    }

    /// Complex structure `(u, v) ↦ (p × u, −q × v)` of `S² × (−S²)` at `at`.
    #[inline]
    pub fn complex(&self, at: &Pair) -> Pair {
        Pair { p: at.p.cross(&self.p), q: -at.q.cross(&self.q) }
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.p.x, self.p.y, self.p.z, self.q.x, self.q.y, self.q.z]
    }
}

/// `F(θ, 0)`.
#[inline]
pub fn embed(theta: f64, big_theta: f64, g: f64) -> Pair {
    let (st, ct) = theta.sin_cos();
    let (sb, cb) = big_theta.sin_cos();
    let (sg, cg) = g.sin_cos();
    Pair { p: V3::new(st, 0.0, ct), q: V3::new(sb * cg, sb * sg, cb) }
}

pub(crate) fn embed_all(s: &FlowState) -> Vec<Pair> {
    (0..=s.n()).map(|k| embed(s.theta_grid[k], s.big_theta[k], s.g[k])).collect()
}

/// Tangent frame, inverse metric and second fundamental form at an interior node.
#[derive(Debug, Clone, Copy)]
pub(crate) struct NodeFrame {
    pub f: Pair,
    /// `F_θ` projected to `T(S² × S²)`.
    pub t1: Pair,
    /// `F_φ`.
    pub t2: Pair,
    /// `(g^θθ, g^θφ, g^φφ)`.
    pub ginv: [f64; 3],
    /// `II_θθ, II_θφ, II_φφ`.
    pub ii: [Pair; 3],
    pub mean: Pair,
}

impl NodeFrame {
    fn normal_part(x: &Pair, f: &Pair, t1: &Pair, t2: &Pair, ginv: &[f64; 3]) -> Pair {
        let x = x.tangent_part(f);
        let (a1, a2) = (x.dot(t1), x.dot(t2));
        let c1 = ginv[0] * a1 + ginv[1] * a2;
        let c2 = ginv[1] * a1 + ginv[2] * a2;
        x.axpy(-c1, t1).axpy(-c2, t2)
    }

    pub fn new(fm: &Pair, f: &Pair, fp: &Pair, h: f64) -> NodeFrame {
        let ft = fp.sub(fm).scale(0.5 / h);
        let ftt = fp.sub(&f.scale(2.0)).add(fm).scale(1.0 / (h * h));
        let t1 = ft.tangent_part(f);
        let t2 = f.rot();
        let (g11, g12, g22) = (t1.dot(&t1), t1.dot(&t2), t2.dot(&t2));
        let det = g11 * g22 - g12 * g12;
        let ginv = [g22 / det, -g12 / det, g11 / det];
        let ii = [
            Self::normal_part(&ftt, f, &t1, &t2, &ginv),
            Self::normal_part(&ft.rot(), f, &t1, &t2, &ginv),
            Self::normal_part(&t2.rot(), f, &t1, &t2, &ginv),
        ];
        let mean = ii[0].scale(ginv[0]).axpy(2.0 * ginv[1], &ii[1]).axpy(ginv[2], &ii[2]);
        NodeFrame { f: *f, t1, t2, ginv, ii, mean }
    }

    /// `|II|² = g^{ac} g^{bd} ⟨II_ab, II_cd⟩`.
    pub fn sff_norm_sq(&self) -> f64 {
        let [a, b, c] = self.ginv;
        let [i11, i12, i22] = &self.ii;
        let m = |x: &Pair, y: &Pair| x.dot(y);
        // raise both indices: sum over (a,b),(c,d) with ginv entries
        let g = [[a, b], [b, c]];
        let ii = [[i11, i12], [i12, i22]];
        let mut s = 0.0;
        for p in 0..2 {
            for q in 0..2 {
                for r in 0..2 {
                    for t in 0..2 {
                        s += g[p][r] * g[q][t] * m(ii[p][q], ii[r][t]);
                    }
                }
            }
        }
        s
    }

    /// `II(u, v)` for coordinate vectors `u`, `v`.
    pub fn ii_at(&self, u: [f64; 2], v: [f64; 2]) -> Pair {
        self.ii[0]
            .scale(u[0] * v[0])
            .axpy(u[0] * v[1] + u[1] * v[0], &self.ii[1])
            .axpy(u[1] * v[1], &self.ii[2])
    }
}

/// Frames at the interior nodes `1..N` (index 0 unused).
pub(crate) fn frames(s: &FlowState, pts: &[Pair]) -> Vec<NodeFrame> {
    let h = s.h();
    (1..s.n()).map(|k| NodeFrame::new(&pts[k - 1], &pts[k], &pts[k + 1], h)).collect()
}

/// Mean curvature vectors at all nodes; zero at the fixed poles.
pub fn mean_curvature(s: &FlowState) -> Vec<Pair> {
    let pts = embed_all(s);
    let mut out = vec![Pair::zero(); s.n() + 1];
    for (i, fr) in frames(s, &pts).iter().enumerate() {
        out[i + 1] = fr.mean;
    }
    out
}

/// `df` in the orthonormal frames `(e_θ, e_φ)` and `(e_Θ, e_Φ)`.
#[inline]
pub fn df_matrix(theta: f64, big_theta: f64, d_big_theta: f64, dg: f64) -> [[f64; 2]; 2] {
    let sb = big_theta.sin();
    [[d_big_theta, 0.0], [sb * dg, sb / theta.sin()]]
}

/// Singular values `σ₁ ≥ σ₂` and the right singular vector for `σ₁`.
pub fn singular_2x2(m: [[f64; 2]; 2]) -> (f64, f64, [f64; 2]) {
    let a = m[0][0] * m[0][0] + m[1][0] * m[1][0];
    let b = m[0][0] * m[0][1] + m[1][0] * m[1][1];
    let c = m[0][1] * m[0][1] + m[1][1] * m[1][1];
    let mid = 0.5 * (a + c);
    let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    let (l1, l2) = (mid + rad, (mid - rad).max(0.0));
    let v = if a >= c { [l1 - c, b] } else { [b, l1 - a] };
    let nv = (v[0] * v[0] + v[1] * v[1]).sqrt();
    let v = if nv > 1e-300 { [v[0] / nv, v[1] / nv] } else { [1.0, 0.0] };
    (l1.sqrt(), l2.sqrt(), v)
}

/// `*Ω = 1/√((1+σ₁²)(1+σ₂²))`, the Jacobian of the projection onto the first factor.
#[inline]
pub fn star_omega_from(s1: f64, s2: f64) -> f64 {
    1.0 / ((1.0 + s1 * s1) * (1.0 + s2 * s2)).sqrt()
}

/// First-order derivative data of `(Θ, g)` at every node; poles use the
/// reflections `Θ(−θ) = −Θ(θ)`, `g(−θ) = g(θ)`.
pub(crate) fn derivatives(s: &FlowState) -> (Vec<f64>, Vec<f64>) {
    let n = s.n();
    let h = s.h();
    let mut dt = vec![0.0; n + 1];
    let mut dg = vec![0.0; n + 1];
    for k in 1..n {
        dt[k] = (s.big_theta[k + 1] - s.big_theta[k - 1]) / (2.0 * h);
        dg[k] = (s.g[k + 1] - s.g[k - 1]) / (2.0 * h);
    }
    dt[0] = s.big_theta[1] / h;
    dt[n] = (std::f64::consts::PI - s.big_theta[n - 1]) / h;
    (dt, dg)
}

/// `√det g` from `(θ, Θ, Θ', g')`.
#[inline]
pub fn area_density(theta: f64, big_theta: f64, d_big_theta: f64, dg: f64) -> f64 {
    let sb2 = big_theta.sin().powi(2);
    let gtt = 1.0 + d_big_theta * d_big_theta + sb2 * dg * dg;
    let gpp = theta.sin().powi(2) + sb2;
    let gtp = sb2 * dg;
    (gtt * gpp - gtp * gtp).max(0.0).sqrt()
}

/// Per-node geometric quantities.
#[derive(Debug, Clone, Serialize)]
pub struct SliceGeometry {
    /// Larger singular value of `df`.
    pub lambda: Vec<f64>,
    pub star_omega: Vec<f64>,
    pub sff_norm: Vec<f64>,
    pub mean_curvature_norm: Vec<f64>,
    /// `√det g` in `(θ, φ)` coordinates.
    pub area_element: Vec<f64>,
    /// `|det df − 1|`.
    pub symplectic_residual: Vec<f64>,
}

fn pole_even(v: &mut [f64]) {
    let n = v.len() - 1;
    v[0] = (4.0 * v[1] - v[2]) / 3.0;
    v[n] = (4.0 * v[n - 1] - v[n - 2]) / 3.0;
}

/// Geometry of a state; fails when the graph condition is lost.
pub fn geometry(s: &FlowState) -> crate::Result<SliceGeometry> {
    s.check_graph().map_err(|reason| crate::Error::Flow { t: s.t, reason })?;
    let n = s.n();
    let pts = embed_all(s);
    let fr = frames(s, &pts);
    let (dt, dg) = derivatives(s);
    let mut out = SliceGeometry {
        lambda: vec![0.0; n + 1],
        star_omega: vec![0.0; n + 1],
        sff_norm: vec![0.0; n + 1],
        mean_curvature_norm: vec![0.0; n + 1],
        area_element: vec![0.0; n + 1],
        symplectic_residual: vec![0.0; n + 1],
    };
    for k in 0..=n {
        let (s1, s2) = if k == 0 || k == n {
            (dt[k], dt[k])
        } else {
            let m = df_matrix(s.theta_grid[k], s.big_theta[k], dt[k], dg[k]);
            let (a, b, _) = singular_2x2(m);
            (a, b)
        };
        out.lambda[k] = s1;
        out.star_omega[k] = star_omega_from(s1, s2);
        out.symplectic_residual[k] = (s1 * s2 - 1.0).abs();
        if k > 0 && k < n {
            out.area_element[k] = area_density(s.theta_grid[k], s.big_theta[k], dt[k], dg[k]);
            let f = &fr[k - 1];
            out.sff_norm[k] = f.sff_norm_sq().max(0.0).sqrt();
            out.mean_curvature_norm[k] = f.mean.norm();
        }
    }
    pole_even(&mut out.sff_norm);
    pole_even(&mut out.mean_curvature_norm);
    Ok(out)
}

/// `h_ijk = ⟨II(eᵢ, eⱼ), 𝒥 e_k⟩` in the frame built from the singular
/// directions of `df` (with `a₂ = J a₁`), at interior node `k`.
pub(crate) fn sff_tensor(s: &FlowState, fr: &NodeFrame, k: usize, d_big_theta: f64, dg: f64) -> ([[[f64; 2]; 2]; 2], f64, f64) {
    let theta = s.theta_grid[k];
    let m = df_matrix(theta, s.big_theta[k], d_big_theta, dg);
    let (s1, s2, v) = singular_2x2(m);
    let st = theta.sin();
    let dirs = [[v[0], v[1]], [-v[1], v[0]]];
    let mut coord = [[0.0; 2]; 2];
    let mut e = [Pair::zero(); 2];
    for i in 0..2 {
        let c = [dirs[i][0], dirs[i][1] / st];
        let w = fr.t1.scale(c[0]).axpy(c[1], &fr.t2);
        let nw = w.norm();
        coord[i] = [c[0] / nw, c[1] / nw];
        e[i] = w.scale(1.0 / nw);
    }
    let je = [e[0].complex(&fr.f), e[1].complex(&fr.f)];
    let mut h = [[[0.0; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let ii = fr.ii_at(coord[i], coord[j]);
            for kk in 0..2 {
                h[i][j][kk] = ii.dot(&je[kk]);
            }
        }
    }
    (h, s1, s2)
}
