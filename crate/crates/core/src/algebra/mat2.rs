//! 2x2 matrices and 2-vectors over [`Scalar`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::scalar::{common_radicand, Scalar};
use crate::error::Result;

#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Vec2(pub [Scalar; 2]);

#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Mat2(pub [[Scalar; 2]; 2]);

impl Vec2 {
    pub fn new(y: Scalar, z: Scalar) -> Self {
        Vec2([y, z])
    }

    pub fn zero() -> Self {
        Vec2::default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> Vec2 {
        Vec2([&self.0[0] * c, &self.0[1] * c])
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [self.0[0].to_f64(), self.0[1].to_f64()]
    }
}

impl Mat2 {
    pub fn new(a11: Scalar, a12: Scalar, a21: Scalar, a22: Scalar) -> Self {
        Mat2([[a11, a12], [a21, a22]])
    }

    /// Integer-entry convenience constructor.
    pub fn from_ints(m: [[i64; 2]; 2]) -> Self {
        Mat2(m.map(|r| r.map(Scalar::from)))
    }

    pub fn zero() -> Self {
        Mat2::default()
    }

    pub fn identity() -> Self {
        Mat2::diag(Scalar::one(), Scalar::one())
    }

    pub fn diag(a: Scalar, b: Scalar) -> Self {
        Mat2([[a, Scalar::zero()], [Scalar::zero(), b]])
    }

    pub fn scalar(c: Scalar) -> Self {
        Mat2::diag(c.clone(), c)
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.0[i][j]
    }

    pub fn entries(&self) -> impl Iterator<Item = &Scalar> {
        self.0.iter().flatten()
    }

    pub fn is_zero(&self) -> bool {
        self.entries().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2::identity()
    }

    pub fn is_diagonal(&self) -> bool {
        self.0[0][1].is_zero() && self.0[1][0].is_zero()
    }

    /// True when the matrix is a multiple of the identity.
    pub fn is_scalar(&self) -> bool {
        self.is_diagonal() && self.0[0][0] == self.0[1][1]
    }

    pub fn trace(&self) -> Scalar {
        &self.0[0][0] + &self.0[1][1]
    }

    pub fn det(&self) -> Scalar {
        &self.0[0][0] * &self.0[1][1] - &self.0[0][1] * &self.0[1][0]
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let inv_det = self.det().recip()?;
        let [[a, b], [c, d]] = &self.0;
        Some(Mat2([
            [d * &inv_det, -(b * &inv_det)],
            [-(c * &inv_det), a * &inv_det],
        ]))
    }

    pub fn transpose(&self) -> Mat2 {
        let [[a, b], [c, d]] = &self.0;
        Mat2([[a.clone(), c.clone()], [b.clone(), d.clone()]])
    }

    pub fn scale(&self, c: &Scalar) -> Mat2 {
        Mat2(self.0.clone().map(|r| r.map(|e| &e * c)))
    }

    pub fn mul_vec(&self, v: &Vec2) -> Vec2 {
        let m = &self.0;
        Vec2([
            &m[0][0] * &v.0[0] + &m[0][1] * &v.0[1],
            &m[1][0] * &v.0[0] + &m[1][1] * &v.0[1],
        ])
    }

    /// `P * self * P^-1` for a nonsingular `P`.
    pub fn conjugate_by(&self, p: &Mat2, p_inv: &Mat2) -> Mat2 {
        &(p * self) * p_inv
    }

    /// The quadratic extension used by the entries, if any.
    pub fn radicand(&self) -> Result<Option<i64>> {
        common_radicand(self.entries())
    }

    pub fn to_f64(&self) -> [[f64; 2]; 2] {
        let m = &self.0;
        [
            [m[0][0].to_f64(), m[0][1].to_f64()],
            [m[1][0].to_f64(), m[1][1].to_f64()],
        ]
    }
}

/// `AB - BA`.
pub fn commutator(a: &Mat2, b: &Mat2) -> Mat2 {
    &(a * b) - &(b * a)
}

impl Add<&Mat2> for &Mat2 {
    type Output = Mat2;
    fn add(self, rhs: &Mat2) -> Mat2 {
        let (x, y) = (&self.0, &rhs.0);
        Mat2([
            [&x[0][0] + &y[0][0], &x[0][1] + &y[0][1]],
            [&x[1][0] + &y[1][0], &x[1][1] + &y[1][1]],
        ])
    }
}

impl Sub<&Mat2> for &Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: &Mat2) -> Mat2 {
        self + &(-rhs)
    }
}

impl Neg for &Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        Mat2(self.0.clone().map(|r| r.map(|e| -e)))
    }
}

impl Mul<&Mat2> for &Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: &Mat2) -> Mat2 {
        let (x, y) = (&self.0, &rhs.0);
        let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

impl Add<&Vec2> for &Vec2 {
    type Output = Vec2;
    fn add(self, rhs: &Vec2) -> Vec2 {
        Vec2([&self.0[0] + &rhs.0[0], &self.0[1] + &rhs.0[1]])
    }
}

impl Sub<&Vec2> for &Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: &Vec2) -> Vec2 {
        Vec2([&self.0[0] - &rhs.0[0], &self.0[1] - &rhs.0[1]])
    }
}

impl Neg for &Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2([-&self.0[0], -&self.0[1]])
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0[0], self.0[1])
    }
}

impl fmt::Debug for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
