//! Point-symmetry candidates `xi(x) d_x + (M(x) u + g(x)) . d_u`, `u = (y, z)`.

use std::fmt;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::algebra::{ExpPoly, Mat2, Scalar};

#[derive(Clone, Default, PartialEq, Eq, Debug, Serialize)]
pub struct EpVec2(pub [ExpPoly; 2]);

#[derive(Clone, Default, PartialEq, Eq, Debug, Serialize)]
pub struct EpMat2(pub [[ExpPoly; 2]; 2]);

impl EpVec2 {
    pub fn zero() -> Self {
        EpVec2::default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(ExpPoly::is_zero)
    }

    pub fn derive(&self) -> EpVec2 {
        EpVec2(self.0.clone().map(|p| p.derive()))
    }

    pub fn add(&self, o: &EpVec2) -> EpVec2 {
        EpVec2([&self.0[0] + &o.0[0], &self.0[1] + &o.0[1]])
    }

    pub fn sub(&self, o: &EpVec2) -> EpVec2 {
        EpVec2([&self.0[0] - &o.0[0], &self.0[1] - &o.0[1]])
    }

    pub fn scale(&self, p: &ExpPoly) -> EpVec2 {
        EpVec2([&self.0[0] * p, &self.0[1] * p])
    }

    pub fn map(&self, f: impl Fn(&ExpPoly) -> ExpPoly) -> EpVec2 {
        EpVec2([f(&self.0[0]), f(&self.0[1])])
    }

    /// Constant matrix on the left.
    pub fn left_mul(&self, a: &Mat2) -> EpVec2 {
        let e = |i: usize| &self.0[0].scale(a.get(i, 0)) + &self.0[1].scale(a.get(i, 1));
        EpVec2([e(0), e(1)])
    }
}

impl EpMat2 {
    pub fn zero() -> Self {
        EpMat2::default()
    }

    /// `p * I`.
    pub fn scalar(p: &ExpPoly) -> Self {
        EpMat2([[p.clone(), ExpPoly::zero()], [ExpPoly::zero(), p.clone()]])
    }

    /// `p * m` for a constant matrix `m`.
    pub fn from_const(m: &Mat2, p: &ExpPoly) -> Self {
        EpMat2([
            [p.scale(m.get(0, 0)), p.scale(m.get(0, 1))],
            [p.scale(m.get(1, 0)), p.scale(m.get(1, 1))],
        ])
    }

    pub fn get(&self, i: usize, j: usize) -> &ExpPoly {
        &self.0[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(ExpPoly::is_zero)
    }

    pub fn map(&self, f: impl Fn(&ExpPoly) -> ExpPoly) -> EpMat2 {
        EpMat2([[f(&self.0[0][0]), f(&self.0[0][1])], [f(&self.0[1][0]), f(&self.0[1][1])]])
    }

    pub fn derive(&self) -> EpMat2 {
        self.map(ExpPoly::derive)
    }

    pub fn add(&self, o: &EpMat2) -> EpMat2 {
        let e = |i: usize, j: usize| &self.0[i][j] + &o.0[i][j];
        EpMat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn sub(&self, o: &EpMat2) -> EpMat2 {
        let e = |i: usize, j: usize| &self.0[i][j] - &o.0[i][j];
        EpMat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn scale(&self, p: &ExpPoly) -> EpMat2 {
        self.map(|q| q * p)
    }

    pub fn mul(&self, o: &EpMat2) -> EpMat2 {
        let e = |i: usize, j: usize| &(&self.0[i][0] * &o.0[0][j]) + &(&self.0[i][1] * &o.0[1][j]);
        EpMat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    /// `a * self` with `a` constant.
    pub fn left_mul(&self, a: &Mat2) -> EpMat2 {
        let e = |i: usize, j: usize| &self.0[0][j].scale(a.get(i, 0)) + &self.0[1][j].scale(a.get(i, 1));
        EpMat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    /// `self * a` with `a` constant.
    pub fn right_mul(&self, a: &Mat2) -> EpMat2 {
        let e = |i: usize, j: usize| &self.0[i][0].scale(a.get(0, j)) + &self.0[i][1].scale(a.get(1, j));
        EpMat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn mul_vec(&self, v: &EpVec2) -> EpVec2 {
        let e = |i: usize| &(&self.0[i][0] * &v.0[0]) + &(&self.0[i][1] * &v.0[1]);
        EpVec2([e(0), e(1)])
    }
}

#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct VectorField {
    pub xi: ExpPoly,
    pub m: EpMat2,
    /// Affine part; nonzero only for generators carried through a
    /// particular-solution shift.
    pub g: EpVec2,
}

impl VectorField {
    pub fn new(xi: ExpPoly, m: EpMat2) -> Self {
        VectorField { xi, m, g: EpVec2::zero() }
    }

    /// `d_x`.
    pub fn dx() -> Self {
        VectorField::new(ExpPoly::constant(Scalar::one()), EpMat2::zero())
    }

    /// `y d_y + z d_z`.
    pub fn scaling() -> Self {
        VectorField::new(ExpPoly::zero(), EpMat2::scalar(&ExpPoly::constant(Scalar::one())))
    }

    pub fn is_zero(&self) -> bool {
        self.xi.is_zero() && self.m.is_zero() && self.g.is_zero()
    }

    pub fn scale(&self, c: &Scalar) -> VectorField {
        let p = ExpPoly::constant(c.clone());
        VectorField { xi: self.xi.scale(c), m: self.m.scale(&p), g: self.g.scale(&p) }
    }

    pub fn add(&self, o: &VectorField) -> VectorField {
        VectorField { xi: &self.xi + &o.xi, m: self.m.add(&o.m), g: self.g.add(&o.g) }
    }

    /// Lie bracket `[self, other]`.
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        let (x, y) = (self, other);
        let xi = &(&x.xi * &y.xi.derive()) - &(&y.xi * &x.xi.derive());
        let m = y
            .m
            .derive()
            .scale(&x.xi)
            .sub(&x.m.derive().scale(&y.xi))
            .add(&y.m.mul(&x.m))
            .sub(&x.m.mul(&y.m));
        let g = y
            .g
            .derive()
            .scale(&x.xi)
            .sub(&x.g.derive().scale(&y.xi))
            .add(&y.m.mul_vec(&x.g))
            .sub(&x.m.mul_vec(&y.g));
        VectorField { xi, m, g }
    }

    pub fn to_numeric(&self) -> NumField {
        let dm = self.m.derive();
        let dg = self.g.derive();
        let dxi = self.xi.derive();
        let mut polys: Vec<&ExpPoly> = vec![&self.xi, &dxi];
        polys.extend(self.m.0.iter().flatten());
        polys.extend(dm.0.iter().flatten());
        polys.extend(self.g.0.iter());
        polys.extend(dg.0.iter());

        let mut mus: Vec<f64> = Vec::new();
        let mut compiled: [Vec<(f64, i32, usize)>; 14] = Default::default();
        for (slot, p) in compiled.iter_mut().zip(polys) {
            for &(c, k, mu) in p.to_numeric().terms() {
                let idx = match mus.iter().position(|m| *m == mu) {
                    Some(i) => i,
                    None => {
                        mus.push(mu);
                        mus.len() - 1
                    }
                };
                slot.push((c, k, idx));
            }
        }
        NumField { mus, polys: compiled }
    }
}

/// Float snapshot of a [`VectorField`] and the derivatives its first
/// prolongation needs, sharing one exponential per distinct rate.
#[derive(Clone, Debug)]
pub struct NumField {
    mus: Vec<f64>,
    /// `xi, xi', M (row-major), M', g, g'` as `(c, k, index into mus)`.
    polys: [Vec<(f64, i32, usize)>; 14],
}

impl NumField {
    fn eval_all(&self, x: f64) -> [f64; 14] {
        let exps: Vec<f64> = self.mus.iter().map(|mu| if *mu == 0.0 { 1.0 } else { (mu * x).exp() }).collect();
        std::array::from_fn(|i| {
            self.polys[i].iter().map(|&(c, k, j)| if k == 0 { c * exps[j] } else { c * x.powi(k) * exps[j] }).sum()
        })
    }

    /// Generator of the prolonged flow on `(x, u, u')`:
    /// `(xi, M u + g, M' u + (M - xi' I) u' + g')`.
    pub fn prolonged(&self, x: f64, u: &[f64; 2], du: &[f64; 2]) -> (f64, [f64; 2], [f64; 2]) {
        let v = self.eval_all(x);
        let (xi, dxi) = (v[0], v[1]);
        let m = [[v[2], v[3]], [v[4], v[5]]];
        let dm = [[v[6], v[7]], [v[8], v[9]]];
        let g = [v[10], v[11]];
        let dg = [v[12], v[13]];
        let mut eta = [0.0; 2];
        let mut eta1 = [0.0; 2];
        for i in 0..2 {
            eta[i] = m[i][0] * u[0] + m[i][1] * u[1] + g[i];
            eta1[i] = dm[i][0] * u[0] + dm[i][1] * u[1] + m[i][0] * du[0] + m[i][1] * du[1] - dxi * du[i] + dg[i];
        }
        (xi, eta, eta1)
    }
}

impl Serialize for VectorField {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let with_g = !self.g.is_zero();
        let mut st = s.serialize_struct("VectorField", if with_g { 3 } else { 2 })?;
        st.serialize_field("xi", &self.xi)?;
        st.serialize_field("M", &self.m)?;
        if with_g {
            st.serialize_field("g", &self.g)?;
        }
        st.end()
    }
}

fn coeff_str(p: &ExpPoly) -> String {
    let s = p.to_string();
    if p.len() > 1 || s.starts_with('-') {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for VectorField {
    /// ASCII rendering such as `(e^{-2*x})*z d_y`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.xi.is_zero() {
            let c = coeff_str(&self.xi);
            parts.push(if c == "1" { "d_x".to_string() } else { format!("{c}*d_x") });
        }
        for (i, d) in ["d_y", "d_z"].iter().enumerate() {
            let mut comp = Vec::new();
            for (j, v) in ["y", "z"].iter().enumerate() {
                let p = &self.m.0[i][j];
                if !p.is_zero() {
                    let c = coeff_str(p);
                    comp.push(if c == "1" { v.to_string() } else { format!("{c}*{v}") });
                }
            }
            if !self.g.0[i].is_zero() {
                comp.push(coeff_str(&self.g.0[i]));
            }
            if !comp.is_empty() {
                let body = comp.join(" + ");
                if comp.len() > 1 {
                    parts.push(format!("({body}) {d}"));
                } else {
                    parts.push(format!("{body} {d}"));
                }
            }
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}
