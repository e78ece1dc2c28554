//! Real Jordan form of a 2x2 matrix with exact entries.

use serde::Serialize;

use super::mat2::{Mat2, Vec2};
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum JordanKind {
    /// `diag(a, b)`, real eigenvalues, diagonalizable.
    J1,
    /// `[[a, c], [-c, a]]` with `c > 0`.
    J2,
    /// `[[a, 1], [0, a]]`, defective.
    J3,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EigenData {
    Real { a: Scalar, b: Scalar },
    Complex { a: Scalar, c: Scalar },
    Defective { a: Scalar },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JordanResult {
    pub kind: JordanKind,
    #[serde(rename = "J")]
    pub j: Mat2,
    /// `J = P A P^-1`.
    #[serde(rename = "P")]
    pub p: Mat2,
    pub eigen: EigenData,
}

impl JordanResult {
    pub fn p_inverse(&self) -> Mat2 {
        self.p.inverse().expect("Jordan transform is nonsingular")
    }
}

/// Computes `J = P A P^-1` with `J` one of the three real 2x2 Jordan types.
///
/// Irrational eigenvalues (or an irrational `c`) open the quadratic extension
/// they need; if the entries of `A` already live in a different one the call
/// fails with [`Error::UnsupportedDiscriminant`].
pub fn real_jordan(a: &Mat2) -> Result<JordanResult> {
    real_jordan_in(a, None)
}

/// [`real_jordan`] inside a computation whose radicand is already `context`.
pub fn real_jordan_in(a: &Mat2, context: Option<i64>) -> Result<JordanResult> {
    let fixed = match (a.radicand()?, context) {
        (Some(x), Some(y)) if x != y => return Err(Error::ConflictingDiscriminant(y, x)),
        (x, y) => x.or(y),
    };
    let two = Scalar::from(2);
    let tr = a.trace();
    let disc = &tr * &tr - &a.det() * &Scalar::from(4);
    let half_tr = &tr / &two;

    if a.is_scalar() {
        let v = a.get(0, 0).clone();
        return Ok(JordanResult {
            kind: JordanKind::J1,
            j: a.clone(),
            p: Mat2::identity(),
            eigen: EigenData::Real { a: v.clone(), b: v },
        });
    }

    match disc.signum() {
        1 => {
            if a.is_diagonal() {
                return Ok(JordanResult {
                    kind: JordanKind::J1,
                    j: a.clone(),
                    p: Mat2::identity(),
                    eigen: EigenData::Real { a: a.get(0, 0).clone(), b: a.get(1, 1).clone() },
                });
            }
            let root = disc.sqrt(fixed)?;
            let mu1 = &(&tr + &root) / &two;
            let mu2 = &(&tr - &root) / &two;
            let v1 = left_eigenvector(a, &mu1);
            let v2 = left_eigenvector(a, &mu2);
            let p = Mat2([v1.0, v2.0]);
            if p.inverse().is_none() {
                return Err(Error::InternalInconsistency("eigenvectors are dependent".into()));
            }
            Ok(JordanResult {
                kind: JordanKind::J1,
                j: Mat2::diag(mu1.clone(), mu2.clone()),
                p,
                eigen: EigenData::Real { a: mu1, b: mu2 },
            })
        }
        -1 => {
            let c = (-&disc / Scalar::from(4)).sqrt(fixed)?;
            let n = a - &Mat2::scalar(half_tr.clone());
            // columns of P^-1: u = e1, v = -N u / c, so that N u = -c v and N v = c u
            let v0 = -(n.get(0, 0) / &c);
            let v1 = -(n.get(1, 0) / &c);
            let p_inv = Mat2::new(Scalar::one(), v0, Scalar::zero(), v1);
            let p = p_inv.inverse().ok_or(Error::SingularP)?;
            let j = Mat2::new(half_tr.clone(), c.clone(), -&c, half_tr.clone());
            Ok(JordanResult { kind: JordanKind::J2, j, p, eigen: EigenData::Complex { a: half_tr, c } })
        }
        _ => {
            let n = a - &Mat2::scalar(half_tr.clone());
            let e1 = Vec2::new(Scalar::one(), Scalar::zero());
            let e2 = Vec2::new(Scalar::zero(), Scalar::one());
            let v = if n.mul_vec(&e1).is_zero() { e2 } else { e1 };
            let u = n.mul_vec(&v);
            let [u0, u1] = u.0;
            let [v0, v1] = v.0;
            let p_inv = Mat2::new(u0, v0, u1, v1);
            let p = p_inv.inverse().ok_or(Error::SingularP)?;
            let j = Mat2::new(half_tr.clone(), Scalar::one(), Scalar::zero(), half_tr.clone());
            Ok(JordanResult { kind: JordanKind::J3, j, p, eigen: EigenData::Defective { a: half_tr } })
        }
    }
}

/// Row vector `v` with `v (A - mu I) = 0`, for `mu` an eigenvalue of a
/// non-diagonal `A`.
fn left_eigenvector(a: &Mat2, mu: &Scalar) -> Vec2 {
    let first = Vec2::new(a.get(1, 0).clone(), mu - a.get(0, 0));
    if !first.is_zero() {
        return first;
    }
    Vec2::new(mu - a.get(1, 1), a.get(0, 1).clone())
}
