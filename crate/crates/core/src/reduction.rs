//! Homogenization, the commutation criterion, and equivalence transformations.
//!
//! Each [`TransformStep`] is a change of variables from old coordinates
//! `(x, y)` to new ones `(x', y')`:
//!
//! | step               | change                      | effect on `(A, B)`              |
//! |--------------------|-----------------------------|---------------------------------|
//! | `LinearChange(P)`  | `y' = P y`                  | `(P A P^-1, P B P^-1)`          |
//! | `ExpShift(tau)`    | `y' = e^(tau x) y`          | `(A + 2 tau I, B - tau A - tau^2 I)` |
//! | `ScaleX(sigma)`    | `x' = sigma x`              | `(A / sigma, B / sigma^2)`      |
//! | `ShiftX(x0)`       | `x' = x + x0`               | unchanged                       |
//! | `ParticularShift`  | `y' = y - y_p(x)`           | unchanged, removes `f`          |

use serde::{Deserialize, Serialize};

use crate::algebra::linsolve;
use crate::algebra::matexp::{self, M2};
use crate::algebra::{commutator, mat_exp_numeric, ExpPoly, Mat2, Scalar, Vec2};
use crate::error::{Error, Result};
use crate::vector_field::{EpMat2, EpVec2, VectorField};

/// Largest degree tried for a polynomial particular solution. Zero is a root
/// of `det(s^2 I - s A - B)` of multiplicity at most four, so degree four
/// always suffices for constant `f`.
pub const MAX_PARTICULAR_DEGREE: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSpec {
    #[serde(rename = "A")]
    pub a: Mat2,
    #[serde(rename = "B")]
    pub b: Mat2,
    pub f: Vec2,
}

impl SystemSpec {
    pub fn new(a: Mat2, b: Mat2, f: Vec2) -> Self {
        SystemSpec { a, b, f }
    }

    pub fn homogeneous(a: Mat2, b: Mat2) -> Self {
        SystemSpec { a, b, f: Vec2::zero() }
    }

    pub fn radicand(&self) -> Result<Option<i64>> {
        crate::algebra::scalar::common_radicand(
            self.a.entries().chain(self.b.entries()).chain(self.f.0.iter()),
        )
    }
}

/// Vector polynomial `sum_j coeffs[j] x^j`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolyVec2 {
    pub coeffs: Vec<Vec2>,
}

impl PolyVec2 {
    pub fn new(mut coeffs: Vec<Vec2>) -> Self {
        while coeffs.last().is_some_and(Vec2::is_zero) {
            coeffs.pop();
        }
        PolyVec2 { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Vec2::is_zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn derive(&self) -> PolyVec2 {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c.scale(&Scalar::from(j as i64)))
            .collect();
        PolyVec2::new(coeffs)
    }

    pub fn neg(&self) -> PolyVec2 {
        PolyVec2 { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn left_mul(&self, m: &Mat2) -> PolyVec2 {
        PolyVec2::new(self.coeffs.iter().map(|c| m.mul_vec(c)).collect())
    }

    pub fn add(&self, o: &PolyVec2) -> PolyVec2 {
        let n = self.coeffs.len().max(o.coeffs.len());
        let get = |p: &PolyVec2, j: usize| p.coeffs.get(j).cloned().unwrap_or_default();
        PolyVec2::new((0..n).map(|j| &get(self, j) + &get(o, j)).collect())
    }

    pub fn to_expoly(&self) -> EpVec2 {
        let comp = |i: usize| {
            self.coeffs.iter().enumerate().fold(ExpPoly::zero(), |acc, (j, c)| {
                &acc + &ExpPoly::term(c.0[i].clone(), j as u32, Scalar::zero())
            })
        };
        EpVec2([comp(0), comp(1)])
    }

    pub fn eval(&self, x: f64) -> [f64; 2] {
        let mut out = [0.0; 2];
        for c in self.coeffs.iter().rev() {
            let c = c.to_f64();
            out = [out[0] * x + c[0], out[1] * x + c[1]];
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum TransformStep {
    LinearChange {
        #[serde(rename = "P")]
        p: Mat2,
    },
    ExpShift {
        tau: Scalar,
    },
    ScaleX {
        sigma: Scalar,
    },
    ShiftX {
        x0: Scalar,
    },
    ParticularShift {
        y_p: PolyVec2,
    },
}

impl TransformStep {
    pub fn validate(&self) -> Result<()> {
        match self {
            TransformStep::LinearChange { p } if p.inverse().is_none() => Err(Error::SingularP),
            TransformStep::ScaleX { sigma } if sigma.is_zero() => {
                Err(Error::InvalidStep("ScaleX with sigma = 0".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn inverse(&self) -> Result<TransformStep> {
        self.validate()?;
        Ok(match self {
            TransformStep::LinearChange { p } => TransformStep::LinearChange { p: p.inverse().unwrap() },
            TransformStep::ExpShift { tau } => TransformStep::ExpShift { tau: -tau },
            TransformStep::ScaleX { sigma } => TransformStep::ScaleX { sigma: sigma.recip().unwrap() },
            TransformStep::ShiftX { x0 } => TransformStep::ShiftX { x0: -x0 },
            TransformStep::ParticularShift { y_p } => TransformStep::ParticularShift { y_p: y_p.neg() },
        })
    }

    /// Maps a point `(x, u, u')` of a solution curve to the new coordinates.
    pub fn map_point(&self, x: f64, u: [f64; 2], du: [f64; 2]) -> (f64, [f64; 2], [f64; 2]) {
        match self {
            TransformStep::LinearChange { p } => {
                let p = p.to_f64();
                (x, matexp::mul_vec(&p, &u), matexp::mul_vec(&p, &du))
            }
            TransformStep::ExpShift { tau } => {
                let t = tau.to_f64();
                let e = (t * x).exp();
                (x, [e * u[0], e * u[1]], [e * (du[0] + t * u[0]), e * (du[1] + t * u[1])])
            }
            TransformStep::ScaleX { sigma } => {
                let s = sigma.to_f64();
                (s * x, u, [du[0] / s, du[1] / s])
            }
            TransformStep::ShiftX { x0 } => (x + x0.to_f64(), u, du),
            TransformStep::ParticularShift { y_p } => {
                let p = y_p.eval(x);
                let dp = y_p.derive().eval(x);
                (x, [u[0] - p[0], u[1] - p[1]], [du[0] - dp[0], du[1] - dp[1]])
            }
        }
    }
}

/// Effect of one step on the coefficient pair of a homogeneous system.
pub fn apply_step(a: &Mat2, b: &Mat2, step: &TransformStep) -> Result<(Mat2, Mat2)> {
    step.validate()?;
    Ok(match step {
        TransformStep::LinearChange { p } => {
            let p_inv = p.inverse().ok_or(Error::SingularP)?;
            (a.conjugate_by(p, &p_inv), b.conjugate_by(p, &p_inv))
        }
        TransformStep::ExpShift { tau } => {
            let two_tau = tau * &Scalar::from(2);
            let a2 = a + &Mat2::scalar(two_tau);
            let b2 = &(b - &a.scale(tau)) - &Mat2::scalar(tau * tau);
            (a2, b2)
        }
        TransformStep::ScaleX { sigma } => {
            let inv = sigma.recip().unwrap();
            (a.scale(&inv), b.scale(&(&inv * &inv)))
        }
        TransformStep::ShiftX { .. } | TransformStep::ParticularShift { .. } => (a.clone(), b.clone()),
    })
}

/// Effect of one step on a full system, forcing term included.
pub fn apply_step_system(spec: &SystemSpec, step: &TransformStep) -> Result<SystemSpec> {
    let (a, b) = apply_step(&spec.a, &spec.b, step)?;
    let f = match step {
        TransformStep::LinearChange { p } => p.mul_vec(&spec.f),
        TransformStep::ExpShift { tau } if !tau.is_zero() && !spec.f.is_zero() => {
            return Err(Error::InvalidStep(
                "exponential shift of an inhomogeneous system leaves the constant-coefficient class".into(),
            ));
        }
        TransformStep::ScaleX { sigma } => {
            let inv = sigma.recip().unwrap();
            spec.f.scale(&(&inv * &inv))
        }
        TransformStep::ParticularShift { y_p } => {
            // y' = y - p  =>  f' = f - (p'' - A p' - B p); must stay constant
            let d1 = y_p.derive();
            let d2 = d1.derive();
            let defect = d2.add(&d1.left_mul(&spec.a).neg()).add(&y_p.left_mul(&spec.b).neg());
            if defect.degree().unwrap_or(0) > 0 {
                return Err(Error::InvalidStep(
                    "particular shift leaves a non-constant forcing term".into(),
                ));
            }
            let c = defect.coeffs.first().cloned().unwrap_or_default();
            &spec.f - &c
        }
        _ => spec.f.clone(),
    };
    Ok(SystemSpec { a, b, f })
}

/// Ordered record of equivalence steps, in application order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TransformChain {
    pub steps: Vec<TransformStep>,
}

impl TransformChain {
    pub fn new() -> Self {
        TransformChain::default()
    }

    pub fn push(&mut self, step: TransformStep) {
        self.steps.push(step);
    }

    pub fn extend(&mut self, other: &TransformChain) {
        self.steps.extend(other.steps.iter().cloned());
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn inverse(&self) -> Result<TransformChain> {
        let steps = self.steps.iter().rev().map(TransformStep::inverse).collect::<Result<_>>()?;
        Ok(TransformChain { steps })
    }

    pub fn apply(&self, a: &Mat2, b: &Mat2) -> Result<(Mat2, Mat2)> {
        self.steps
            .iter()
            .try_fold((a.clone(), b.clone()), |(a, b), s| apply_step(&a, &b, s))
    }

    pub fn apply_system(&self, spec: &SystemSpec) -> Result<SystemSpec> {
        self.steps.iter().try_fold(spec.clone(), |s, step| apply_step_system(&s, step))
    }

    pub fn map_point(&self, x: f64, u: [f64; 2], du: [f64; 2]) -> (f64, [f64; 2], [f64; 2]) {
        self.steps.iter().fold((x, u, du), |(x, u, du), s| s.map_point(x, u, du))
    }
}

/// Polynomial particular solution of minimal degree; returns the homogeneous
/// pair and a chain holding the `ParticularShift` (empty when `f = 0`).
pub fn homogenize(spec: &SystemSpec) -> Result<(Mat2, Mat2, TransformChain)> {
    let mut chain = TransformChain::new();
    if spec.f.is_zero() {
        return Ok((spec.a.clone(), spec.b.clone(), chain));
    }
    let y_p = particular_solution(&spec.a, &spec.b, &spec.f)?;
    chain.push(TransformStep::ParticularShift { y_p });
    Ok((spec.a.clone(), spec.b.clone(), chain))
}

fn particular_solution(a: &Mat2, b: &Mat2, f: &Vec2) -> Result<PolyVec2> {
    for n in 0..=MAX_PARTICULAR_DEGREE {
        // unknown index of component i of c_j
        let idx = |j: usize, i: usize| 2 * j + i;
        let nvars = 2 * (n + 1);
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        // x^m coefficient: (m+2)(m+1) c_{m+2} - (m+1) A c_{m+1} - B c_m = f [m == 0]
        for m in 0..=n {
            for i in 0..2 {
                let mut row = vec![Scalar::zero(); nvars];
                if m + 2 <= n {
                    row[idx(m + 2, i)] = &row[idx(m + 2, i)] + &Scalar::from(((m + 2) * (m + 1)) as i64);
                }
                if m < n {
                    let k = Scalar::from((m + 1) as i64);
                    for l in 0..2 {
                        row[idx(m + 1, l)] = &row[idx(m + 1, l)] - &(&k * a.get(i, l));
                    }
                }
                for l in 0..2 {
                    row[idx(m, l)] = &row[idx(m, l)] - b.get(i, l);
                }
                rows.push(row);
                rhs.push(if m == 0 { f.0[i].clone() } else { Scalar::zero() });
            }
        }
        if let Some(sol) = linsolve::solve(&rows, &rhs) {
            let coeffs = (0..=n).map(|j| Vec2::new(sol[idx(j, 0)].clone(), sol[idx(j, 1)].clone())).collect();
            return Ok(PolyVec2::new(coeffs));
        }
    }
    Err(Error::NoPolynomialParticularSolution { max_degree: MAX_PARTICULAR_DEGREE })
}

/// True iff `AB = BA` exactly.
pub fn commute_test(a: &Mat2, b: &Mat2) -> bool {
    commutator(a, b).is_zero()
}

/// `M = B + A^2 / 4` for commuting `A`, `B`.
pub fn reduce_to_m(a: &Mat2, b: &Mat2) -> Result<Mat2> {
    if !commute_test(a, b) {
        return Err(Error::NotCommuting);
    }
    Ok(b + &(a * a).scale(&Scalar::frac(1, 4)))
}

/// `C(t)^-1 (B + A^2/4) C(t)` with `C(t) = exp(tA/2)`.
pub fn bbar_of_t(a: &Mat2, b: &Mat2, t: f64) -> M2 {
    let af = a.to_f64();
    let k = matexp::add(&b.to_f64(), &matexp::scale(&matexp::mul(&af, &af), 0.25));
    let c = mat_exp_numeric(&af, 0.5 * t);
    let c_inv = mat_exp_numeric(&af, -0.5 * t);
    matexp::mul(&matexp::mul(&c_inv, &k), &c)
}

/// Re-expresses a field given in the new coordinates of `step` in the old ones.
pub fn pullback_step(step: &TransformStep, vf: &VectorField) -> Result<VectorField> {
    step.validate()?;
    Ok(match step {
        TransformStep::LinearChange { p } => {
            let p_inv = p.inverse().unwrap();
            VectorField {
                xi: vf.xi.clone(),
                m: vf.m.left_mul(&p_inv).right_mul(p),
                g: vf.g.left_mul(&p_inv),
            }
        }
        TransformStep::ExpShift { tau } => VectorField {
            xi: vf.xi.clone(),
            m: vf.m.sub(&EpMat2::scalar(&vf.xi.scale(tau))),
            g: vf.g.scale(&ExpPoly::exp(-tau)),
        },
        TransformStep::ScaleX { sigma } => {
            let inv = sigma.recip().unwrap();
            VectorField {
                xi: vf.xi.scale_x(sigma).scale(&inv),
                m: vf.m.map(|p| p.scale_x(sigma)),
                g: vf.g.map(|p| p.scale_x(sigma)),
            }
        }
        TransformStep::ShiftX { x0 } => VectorField {
            xi: vf.xi.shift_x(x0),
            m: vf.m.map(|p| p.shift_x(x0)),
            g: vf.g.map(|p| p.shift_x(x0)),
        },
        TransformStep::ParticularShift { y_p } => {
            let p = y_p.to_expoly();
            let dp = y_p.derive().to_expoly();
            VectorField {
                xi: vf.xi.clone(),
                m: vf.m.clone(),
                g: vf.g.sub(&vf.m.mul_vec(&p)).add(&dp.scale(&vf.xi)),
            }
        }
    })
}

/// Re-expresses a field given in the chain's final coordinates in its
/// initial ones.
pub fn pullback_vf(chain: &TransformChain, vf: &VectorField) -> Result<VectorField> {
    chain.steps.iter().rev().try_fold(vf.clone(), |v, s| pullback_step(s, &v))
}
