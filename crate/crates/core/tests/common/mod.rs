//! Reference implementations written independently of the library, used as
//! test oracles.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Hip pose `(t, z, phi)` of a two-link leg with the ankle at the origin.
/// Angles are relative bends, ankle first.
pub fn fk(l1: f64, l2: f64, q: [f64; 3]) -> [f64; 3] {
    let shank = q[0];
    let thigh = q[0] + q[1];
    [
        l2 * shank.sin() + l1 * thigh.sin(),
        l2 * shank.cos() + l1 * thigh.cos(),
        q[0] + q[1] + q[2],
    ]
}

/// Central finite-difference Jacobian of [`fk`], rows `(t, z, phi)`.
pub fn fd_jacobian(l1: f64, l2: f64, q: [f64; 3], step: f64) -> [[f64; 3]; 3] {
    let mut j = [[0.0; 3]; 3];
    for c in 0..3 {
        let mut qp = q;
        let mut qm = q;
        qp[c] += step;
        qm[c] -= step;
        let (p, m) = (fk(l1, l2, qp), fk(l1, l2, qm));
        for r in 0..3 {
            j[r][c] = (p[r] - m[r]) / (2.0 * step);
        }
    }
    j
}

/// Analytic Jacobian of [`fk`], derived by hand.
pub fn jacobian(l1: f64, l2: f64, q: [f64; 3]) -> [[f64; 3]; 3] {
    let shank = q[0];
    let thigh = q[0] + q[1];
    [
        [l2 * shank.cos() + l1 * thigh.cos(), l1 * thigh.cos(), 0.0],
        [-l2 * shank.sin() - l1 * thigh.sin(), -l1 * thigh.sin(), 0.0],
        [1.0, 1.0, 1.0],
    ]
}

/// `Jᵀ w` in joint order (ankle, knee, hip).
pub fn transpose_apply(j: &[[f64; 3]; 3], w: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (c, o) in out.iter_mut().enumerate() {
        *o = (0..3).map(|r| j[r][c] * w[r]).sum();
    }
    out
}

/// Frontal-chain joint torques `(ankle, knee, hip)` for internal force `fy`,
/// internal moment `m` and per-leg gravity load.
pub fn frontal_torques(j: &[[f64; 3]; 3], leg_load: f64, fy: f64, m: f64) -> [f64; 3] {
    transpose_apply(j, [fy, -leg_load, m])
}

pub fn norm(v: [f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn max_abs(v: [f64; 3]) -> f64 {
    v.iter().fold(0.0, |a: f64, x| a.max(x.abs()))
}

/// Solves the 3×3 system `A x = b` by Cramer's rule.
pub fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(a);
    if d.abs() < 1e-12 {
        return None;
    }
    let mut x = [0.0; 3];
    for (c, xc) in x.iter_mut().enumerate() {
        let mut m = a;
        for r in 0..3 {
            m[r][c] = b[r];
        }
        *xc = det(m) / d;
    }
    Some(x)
}

/// Random leg geometry `(l1, l2)` with `l2 > l1`.
pub fn random_geometry(r: &mut impl Rng) -> (f64, f64) {
    let l1 = r.random_range(0.2..0.6);
    let crawl = r.random_range(0.3..0.8);
    (l1, l1 + crawl)
}

/// Height strictly inside the reachable band of a leg with lateral offset `d`.
pub fn random_height(r: &mut impl Rng, l1: f64, l2: f64, d: f64) -> Option<f64> {
    let lo_r = (l2 - l1) * 1.02;
    let hi_r = (l1 + l2) * 0.98;
    let lo = (lo_r * lo_r - d * d).max(0.0).sqrt().max(1e-3);
    let hi2 = hi_r * hi_r - d * d;
    if hi2 <= lo * lo {
        return None;
    }
    Some(r.random_range(lo..hi2.sqrt()))
}
