//! Floating-point helpers for 2x2 matrices, including `exp(tA)`.
//!
//! The exponential uses the closed form for 2x2 matrices: with
//! `N = A - (tr A / 2) I` one has `N^2 = delta I`, `delta = (tr A / 2)^2 - det A`,
//! so `exp(tA) = exp(t tr A / 2) (C I + S N)` where `(C, S)` is
//! `(cosh(t r), sinh(t r) / r)`, `(cos(t r), sin(t r) / r)` or `(1, t)` for
//! `delta > 0`, `< 0`, `= 0` with `r = sqrt(|delta|)`. The norm-wise relative
//! error is a few ulps of the largest entry.

pub type M2 = [[f64; 2]; 2];

pub fn identity() -> M2 {
    [[1.0, 0.0], [0.0, 1.0]]
}

pub fn mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn add(a: &M2, b: &M2) -> M2 {
    [[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]]
}

pub fn scale(a: &M2, s: f64) -> M2 {
    a.map(|r| r.map(|v| v * s))
}

pub fn inverse(a: &M2) -> Option<M2> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    Some([[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]])
}

pub fn mul_vec(a: &M2, v: &[f64; 2]) -> [f64; 2] {
    [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
}

/// Max-norm of the entries.
pub fn max_norm(a: &M2) -> f64 {
    a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// `exp(tA)`.
pub fn mat_exp_numeric(a: &M2, t: f64) -> M2 {
    let half_tr = 0.5 * (a[0][0] + a[1][1]);
    let n = [[a[0][0] - half_tr, a[0][1]], [a[1][0], a[1][1] - half_tr]];
    // delta computed from N directly avoids cancellation in half_tr^2 - det
    let delta = n[0][0] * n[0][0] + n[0][1] * n[1][0];
    let (c, s) = if delta > 0.0 {
        let r = delta.sqrt();
        ((t * r).cosh(), (t * r).sinh() / r)
    } else if delta < 0.0 {
        let r = (-delta).sqrt();
        ((t * r).cos(), (t * r).sin() / r)
    } else {
        (1.0, t)
    };
    let g = (t * half_tr).exp();
    [
        [g * (c + s * n[0][0]), g * s * n[0][1]],
        [g * s * n[1][0], g * (c + s * n[1][1])],
    ]
}
