//! Admittance of candidate generators, checked exactly through the second
//! prolongation and numerically by flowing solutions.

use serde::Serialize;

use crate::algebra::matexp::{self, M2};
use crate::algebra::{ExpPoly, Mat2};
use crate::error::{Error, Result};
use crate::reduction::SystemSpec;
use crate::vector_field::{EpMat2, EpVec2, NumField, VectorField};

/// Coefficients of the symmetry condition after substituting the system:
/// `r1` multiplies `u'`, `r2` multiplies `u`, `r0` is the free term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmittanceResidual {
    pub r1: EpMat2,
    pub r2: EpMat2,
    pub r0: EpVec2,
}

impl AdmittanceResidual {
    pub fn is_zero(&self) -> bool {
        self.r1.is_zero() && self.r2.is_zero() && self.r0.is_zero()
    }

    /// Largest absolute entry at `x`.
    pub fn norm_at(&self, x: f64) -> f64 {
        let mats = self.r1.0.iter().chain(self.r2.0.iter()).flatten();
        mats.chain(self.r0.0.iter()).map(|p| p.eval(x).abs()).fold(0.0, f64::max)
    }
}

fn constant_matrix(a: &Mat2, p: &ExpPoly) -> EpMat2 {
    EpMat2::from_const(a, p)
}

/// Residual of `xi d_x + (M u + g) . d_u` for `u'' = A u' + B u + f`:
///
/// * `r1 = 2M' - (AM - MA) - xi' A - xi'' I`
/// * `r2 = M'' - AM' - (BM - MB) - 2 xi' B`
/// * `r0 = g'' - A g' - B g + (M - 2 xi' I) f`
pub fn admittance_residual_system(spec: &SystemSpec, vf: &VectorField) -> AdmittanceResidual {
    let (a, b) = (&spec.a, &spec.b);
    let one = ExpPoly::constant(crate::algebra::Scalar::one());
    let m = &vf.m;
    let dm = m.derive();
    let ddm = dm.derive();
    let dxi = vf.xi.derive();
    let ddxi = dxi.derive();

    let comm = |c: &Mat2| m.left_mul(c).sub(&m.right_mul(c));
    let r1 = dm
        .scale(&ExpPoly::constant(2.into()))
        .sub(&comm(a))
        .sub(&constant_matrix(a, &dxi))
        .sub(&EpMat2::scalar(&ddxi));
    let r2 = ddm
        .sub(&dm.left_mul(a))
        .sub(&comm(b))
        .sub(&constant_matrix(b, &dxi.scale(&2.into())));

    let g = &vf.g;
    let dg = g.derive();
    let f = EpVec2(spec.f.0.clone().map(|c| one.scale(&c)));
    let shifted = m.sub(&EpMat2::scalar(&dxi.scale(&2.into())));
    let r0 = dg.derive().sub(&dg.left_mul(a)).sub(&g.left_mul(b)).add(&shifted.mul_vec(&f));

    AdmittanceResidual { r1, r2, r0 }
}

/// Residual for the homogeneous system `u'' = A u' + B u`.
pub fn admittance_residual(a: &Mat2, b: &Mat2, vf: &VectorField) -> AdmittanceResidual {
    admittance_residual_system(&SystemSpec::homogeneous(a.clone(), b.clone()), vf)
}

/// Float form of the system, state `(y, z, y', z')`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericSystem {
    pub a: M2,
    pub b: M2,
    pub f: [f64; 2],
}

impl NumericSystem {
    pub fn homogeneous(a: M2, b: M2) -> Self {
        NumericSystem { a, b, f: [0.0; 2] }
    }

    pub fn from_spec(spec: &SystemSpec) -> Self {
        NumericSystem { a: spec.a.to_f64(), b: spec.b.to_f64(), f: spec.f.to_f64() }
    }

    pub fn rhs(&self, s: &[f64; 4]) -> [f64; 4] {
        let (u, du) = ([s[0], s[1]], [s[2], s[3]]);
        let au = matexp::mul_vec(&self.a, &du);
        let bu = matexp::mul_vec(&self.b, &u);
        [du[0], du[1], au[0] + bu[0] + self.f[0], au[1] + bu[1] + self.f[1]]
    }
}

fn axpy(s: &[f64; 4], h: f64, k: &[f64; 4]) -> [f64; 4] {
    std::array::from_fn(|i| s[i] + h * k[i])
}

/// One classic RK4 step of size `h` (which may be negative).
pub fn rk4_step(sys: &NumericSystem, s: &[f64; 4], h: f64) -> [f64; 4] {
    let k1 = sys.rhs(s);
    let k2 = sys.rhs(&axpy(s, h / 2.0, &k1));
    let k3 = sys.rhs(&axpy(s, h / 2.0, &k2));
    let k4 = sys.rhs(&axpy(s, h, &k3));
    std::array::from_fn(|i| s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub h: f64,
    pub xs: Vec<f64>,
    /// `(y, z, y', z')` at each node.
    pub states: Vec<[f64; 4]>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn last(&self) -> Option<(f64, [f64; 4])> {
        Some((*self.xs.last()?, *self.states.last()?))
    }
}

/// Integrates from `x0` to `x1` on a uniform grid whose step is the largest
/// one not exceeding `h` that divides the interval.
pub fn rk4_solve(sys: &NumericSystem, init: [f64; 4], x0: f64, x1: f64, h: f64) -> Result<Trajectory> {
    if !(h > 0.0 && x1 > x0 && h.is_finite() && x0.is_finite() && x1.is_finite()) {
        return Err(Error::MalformedInput(format!("bad grid: x0 = {x0}, x1 = {x1}, h = {h}")));
    }
    let n = ((x1 - x0) / h - 1e-9).ceil().max(1.0) as usize;
    let step = (x1 - x0) / n as f64;
    let mut xs = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    let mut s = init;
    check_finite(x0, &s)?;
    xs.push(x0);
    states.push(s);
    for i in 1..=n {
        s = rk4_step(sys, &s, step);
        let x = if i == n { x1 } else { x0 + i as f64 * step };
        check_finite(x, &s)?;
        xs.push(x);
        states.push(s);
    }
    Ok(Trajectory { h: step, xs, states })
}

fn check_finite(x: f64, s: &[f64; 4]) -> Result<()> {
    if s.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteState { x })
    }
}

/// Largest step in the group parameter used by [`flow_point`].
pub const FLOW_STEP: f64 = 0.002;

/// Image of `(x, u, u')` under the prolonged one-parameter group at `eps`.
pub fn flow_point(nf: &NumField, x: f64, s: &[f64; 4], eps: f64) -> (f64, [f64; 4]) {
    let gen = |p: &[f64; 5]| -> [f64; 5] {
        let (xi, eta, eta1) = nf.prolonged(p[0], &[p[1], p[2]], &[p[3], p[4]]);
        [xi, eta[0], eta[1], eta1[0], eta1[1]]
    };
    let n = (eps.abs() / FLOW_STEP).ceil().max(1.0) as usize;
    let h = eps / n as f64;
    let mut p = [x, s[0], s[1], s[2], s[3]];
    let shift = |p: &[f64; 5], c: f64, k: &[f64; 5]| -> [f64; 5] { std::array::from_fn(|i| p[i] + c * k[i]) };
    for _ in 0..n {
        let k1 = gen(&p);
        let k2 = gen(&shift(&p, h / 2.0, &k1));
        let k3 = gen(&shift(&p, h / 2.0, &k2));
        let k4 = gen(&shift(&p, h, &k3));
        p = std::array::from_fn(|i| p[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    }
    (p[0], [p[1], p[2], p[3], p[4]])
}

/// Flows every node of `traj` by `vf` at parameter `eps`, re-integrates the
/// system from the image of the first node along the image grid, and
/// returns the max-norm gap between the two curves relative to
/// `max(1, |flowed states|)`.
pub fn flow_check(sys: &NumericSystem, vf: &VectorField, eps: f64, traj: &Trajectory) -> Result<f64> {
    flow_check_numeric(sys, &vf.to_numeric(), eps, traj)
}

pub fn flow_check_numeric(sys: &NumericSystem, nf: &NumField, eps: f64, traj: &Trajectory) -> Result<f64> {
    let flowed: Vec<(f64, [f64; 4])> =
        traj.xs.iter().zip(&traj.states).map(|(x, s)| flow_point(nf, *x, s, eps)).collect();
    for (i, (x, s)) in flowed.iter().enumerate() {
        check_finite(*x, s)?;
        if i > 0 && flowed[i - 1].0 >= *x {
            return Err(Error::NonMonotoneReparametrization { index: i });
        }
    }
    let Some(&(mut x, mut s)) = flowed.first() else {
        return Ok(0.0);
    };
    let mut gap: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for &(xn, target) in &flowed[1..] {
        s = rk4_step(sys, &s, xn - x);
        x = xn;
        check_finite(x, &s)?;
        for i in 0..4 {
            gap = gap.max((s[i] - target[i]).abs());
            scale = scale.max(target[i].abs());
        }
    }
    Ok(gap / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Scalar, Vec2};
    use crate::canonical::j1_matrix;
    use crate::classify::{x1_generator, x2_generator};

    fn s(p: i64, q: i64) -> Scalar {
        Scalar::frac(p, q)
    }

    fn m(e: [[i64; 2]; 2]) -> Mat2 {
        Mat2::from_ints(e)
    }

    fn j1_two_extra_b(l: &Scalar) -> Mat2 {
        let l2 = l * l;
        Mat2::new(&l2 / &s(4, 1), s(2, 1), Scalar::zero(), -(&l2 * &s(15, 4)))
    }

    #[test]
    fn generic_fields_are_admitted() {
        for (a, b) in [(m([[1, 2], [3, 4]]), m([[0, -1], [5, 2]])), (j1_matrix(&s(3, 1)), m([[1, 1], [1, 1]]))] {
            assert!(admittance_residual(&a, &b, &VectorField::dx()).is_zero());
            assert!(admittance_residual(&a, &b, &VectorField::scaling()).is_zero());
        }
    }

    #[test]
    fn x1_admitted_iff_b21_zero_and_h2_zero() {
        let l = s(1, 1);
        let a = j1_matrix(&l);
        let b22 = s(-2, 3);
        let good = Mat2::new(&b22 + &s(4, 1), s(7, 1), Scalar::zero(), b22.clone());
        assert!(admittance_residual(&a, &good, &x1_generator(&l)).is_zero());
        let bad = Mat2::new(&b22 + &s(4, 1), s(7, 1), s(1, 1), b22);
        let r = admittance_residual(&a, &bad, &x1_generator(&l));
        assert!(!r.is_zero());
        assert!(!r.r2.get(0, 0).is_zero());
    }

    #[test]
    fn x2_and_bracket_admitted() {
        for l in [s(1, 1), s(-1, 2), s(3, 1)] {
            let a = j1_matrix(&l);
            let b = j1_two_extra_b(&l);
            let x1 = x1_generator(&l);
            let x2 = x2_generator(&l);
            assert!(admittance_residual(&a, &b, &x2).is_zero());
            // X1 and X2 commute; brackets with d_x are multiples of themselves
            assert!(x1.bracket(&x2).is_zero());
            for br in [VectorField::dx().bracket(&x1), VectorField::dx().bracket(&x2)] {
                assert!(!br.is_zero());
                assert!(admittance_residual(&a, &b, &br).is_zero());
            }
            let mut wrong = b.clone();
            wrong.0[0][0] = &wrong.0[0][0] + &s(1, 1);
            assert!(!admittance_residual(&a, &wrong, &x2).is_zero());
        }
    }

    #[test]
    fn affine_part_with_forcing() {
        // y'' = y + 1 has the particular solution -1, so the shifted scaling
        // (y + 1) d_y + z d_z is admitted.
        let spec = SystemSpec::new(Mat2::zero(), Mat2::identity(), Vec2::new(s(1, 1), Scalar::zero()));
        let mut vf = VectorField::scaling();
        vf.g.0[0] = ExpPoly::constant(s(1, 1));
        assert!(admittance_residual_system(&spec, &vf).is_zero());
        assert!(!admittance_residual_system(&spec, &VectorField::scaling()).is_zero());
    }

    #[test]
    fn rk4_examples() {
        let zero = [[0.0; 2]; 2];
        let t = rk4_solve(&NumericSystem::homogeneous(zero, zero), [1.0, 0.0, 0.0, 0.0], 0.0, 1.0, 0.1).unwrap();
        assert!(t.states.iter().all(|s| *s == [1.0, 0.0, 0.0, 0.0]));

        let t = rk4_solve(&NumericSystem::homogeneous(zero, matexp::identity()), [1.0, 0.0, 0.0, 0.0], 0.0, 1.0, 1e-3)
            .unwrap();
        assert!((t.last().unwrap().1[0] - 1f64.cosh()).abs() < 1e-8);

        let a = [[0.0, 0.0], [0.0, 4.0]];
        let t = rk4_solve(&NumericSystem::homogeneous(a, zero), [0.0, 1.0, 0.0, 1.0], 0.0, 1.0, 1e-3).unwrap();
        let exact = (4f64.exp() + 3.0) / 4.0;
        assert!((t.last().unwrap().1[1] - exact).abs() < 1e-6);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let a = [[0.0, 0.0], [0.0, 4.0]];
        let sys = NumericSystem::homogeneous(a, [[0.0; 2]; 2]);
        let exact = (4f64.exp() + 3.0) / 4.0;
        let err = |h| (rk4_solve(&sys, [0.0, 1.0, 0.0, 1.0], 0.0, 1.0, h).unwrap().last().unwrap().1[1] - exact).abs();
        let ratio = err(1e-2) / err(5e-3);
        assert!((12.0..=20.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn overflow_is_reported() {
        let b = [[1e10, 0.0], [0.0, 0.0]];
        let err = rk4_solve(&NumericSystem::homogeneous([[0.0; 2]; 2], b), [1.0, 0.0, 0.0, 0.0], 0.0, 100.0, 0.5);
        assert!(matches!(err, Err(Error::NonFiniteState { .. })));
    }

    fn j1_fixture() -> (Mat2, Mat2, NumericSystem, Trajectory) {
        let a = j1_matrix(&s(1, 1));
        let b = m([[4, 1], [0, 0]]);
        let sys = NumericSystem::homogeneous(a.to_f64(), b.to_f64());
        let traj = rk4_solve(&sys, [0.3, -0.2, 0.1, 0.4], 0.0, 1.0, 1e-3).unwrap();
        (a, b, sys, traj)
    }

    #[test]
    fn flow_examples() {
        let (_, _, sys, traj) = j1_fixture();
        let x1 = x1_generator(&s(1, 1));
        assert!(flow_check(&sys, &x1, 0.0, &traj).unwrap() < 1e-10);
        assert!(flow_check(&sys, &x1, 0.1, &traj).unwrap() < 1e-6);
        assert!(flow_check(&sys, &VectorField::scaling(), 0.3, &traj).unwrap() < 1e-6);
        assert!(flow_check(&sys, &VectorField::dx(), -0.1, &traj).unwrap() < 1e-6);
    }

    #[test]
    fn x2_flow_matches_closed_form() {
        let l = 0.5;
        let nf = x2_generator(&s(1, 2)).to_numeric();
        for (x, eps) in [(0.0, 0.1), (0.7, -0.05), (2.0, 0.1)] {
            let (xb, _) = flow_point(&nf, x, &[0.0; 4], eps);
            let expected = ((l * x).exp() + 2.0 * l * eps).ln() / l;
            assert!((xb - expected).abs() < 1e-12, "{xb} vs {expected}");
        }
    }

    #[test]
    fn non_admitted_field_is_separated() {
        let (a, _, _, traj) = j1_fixture();
        let b = m([[4, 1], [1, 0]]);
        let sys = NumericSystem::homogeneous(a.to_f64(), b.to_f64());
        let traj2 = rk4_solve(&sys, traj.states[0], 0.0, 1.0, 1e-3).unwrap();
        let x1 = x1_generator(&s(1, 1));
        let r = admittance_residual(&a, &b, &x1);
        assert!(r.norm_at(0.0) >= 1.0);
        assert!(flow_check(&sys, &x1, 0.1, &traj2).unwrap() >= 1e-3);
    }

    #[test]
    fn non_monotone_grid_is_rejected() {
        let (_, _, sys, mut traj) = j1_fixture();
        traj.xs[5] = traj.xs[4];
        let err = flow_check(&sys, &VectorField::dx(), 0.05, &traj);
        assert!(matches!(err, Err(Error::NonMonotoneReparametrization { index: 5 })));
    }
}
