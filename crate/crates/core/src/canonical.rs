//! Reduction of a homogeneous system to one of the canonical branches.

use serde::Serialize;

use crate::algebra::scalar::common_radicand;
use crate::algebra::{real_jordan_in, JordanKind, Mat2, Scalar};
use crate::error::{Error, Result};
use crate::reduction::{apply_step, commute_test, reduce_to_m, TransformChain, TransformStep};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case")]
pub enum CanonicalForm {
    /// `AB = BA`: equivalent to `y'' = M y`.
    #[serde(rename = "commuting")]
    Commuting {
        #[serde(rename = "M")]
        m: Mat2,
    },
    /// `A = diag(0, 4 lambda)`, `lambda != 0`.
    #[serde(rename = "J1")]
    CaseJ1 {
        lambda: Scalar,
        #[serde(rename = "B")]
        b: Mat2,
    },
    /// `A = [[0, 1], [-1, 0]]`.
    #[serde(rename = "J2")]
    CaseJ2 {
        #[serde(rename = "B")]
        b: Mat2,
    },
    /// `A = [[0, 1], [0, 0]]`.
    #[serde(rename = "J3")]
    CaseJ3 {
        #[serde(rename = "B")]
        b: Mat2,
    },
}

impl CanonicalForm {
    /// The `(A, B)` pair of the canonical system; `(0, M)` for the
    /// commuting case.
    pub fn matrices(&self) -> (Mat2, Mat2) {
        match self {
            CanonicalForm::Commuting { m } => (Mat2::zero(), m.clone()),
            CanonicalForm::CaseJ1 { lambda, b } => (j1_matrix(lambda), b.clone()),
            CanonicalForm::CaseJ2 { b } => (Mat2::from_ints([[0, 1], [-1, 0]]), b.clone()),
            CanonicalForm::CaseJ3 { b } => (Mat2::from_ints([[0, 1], [0, 0]]), b.clone()),
        }
    }

    pub fn case_name(&self) -> &'static str {
        match self {
            CanonicalForm::Commuting { .. } => "commuting",
            CanonicalForm::CaseJ1 { .. } => "J1",
            CanonicalForm::CaseJ2 { .. } => "J2",
            CanonicalForm::CaseJ3 { .. } => "J3",
        }
    }
}

/// `diag(0, 4 lambda)`.
pub fn j1_matrix(lambda: &Scalar) -> Mat2 {
    Mat2::diag(Scalar::zero(), lambda * &Scalar::from(4))
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CanonicalizeOptions {
    /// Append `ScaleX(lambda)` in the J1 branch so that `lambda = 1`.
    pub normalize_lambda: bool,
    /// Radicand already fixed by the surrounding computation.
    pub radicand: Option<i64>,
}

/// Drives `(A, B)` to its canonical branch and records the steps taken.
pub fn canonicalize(a: &Mat2, b: &Mat2, opts: CanonicalizeOptions) -> Result<(CanonicalForm, TransformChain)> {
    let mut chain = TransformChain::new();
    if commute_test(a, b) {
        return Ok((CanonicalForm::Commuting { m: reduce_to_m(a, b)? }, chain));
    }

    let context = match (common_radicand(a.entries().chain(b.entries()))?, opts.radicand) {
        (Some(x), Some(y)) if x != y => return Err(Error::ConflictingDiscriminant(y, x)),
        (x, y) => x.or(y),
    };
    let jordan = real_jordan_in(a, context)?;
    let (mut ca, mut cb) = (a.clone(), b.clone());
    let mut push = |step: TransformStep, ca: &mut Mat2, cb: &mut Mat2| -> Result<()> {
        let (na, nb) = apply_step(ca, cb, &step)?;
        *ca = na;
        *cb = nb;
        chain.push(step);
        Ok(())
    };

    if !jordan.p.is_identity() {
        push(TransformStep::LinearChange { p: jordan.p.clone() }, &mut ca, &mut cb)?;
    }
    let tau = -(ca.get(0, 0) / &Scalar::from(2));
    if !tau.is_zero() {
        push(TransformStep::ExpShift { tau }, &mut ca, &mut cb)?;
    }

    let cf = match jordan.kind {
        JordanKind::J1 => {
            let mut lambda = ca.get(1, 1) / &Scalar::from(4);
            if opts.normalize_lambda && !lambda.is_one() {
                push(TransformStep::ScaleX { sigma: lambda.clone() }, &mut ca, &mut cb)?;
                lambda = Scalar::one();
            }
            CanonicalForm::CaseJ1 { lambda, b: cb.clone() }
        }
        JordanKind::J2 => {
            let c = ca.get(0, 1).clone();
            if !c.is_one() {
                push(TransformStep::ScaleX { sigma: c }, &mut ca, &mut cb)?;
            }
            CanonicalForm::CaseJ2 { b: cb.clone() }
        }
        JordanKind::J3 => CanonicalForm::CaseJ3 { b: cb.clone() },
    };

    if cf.matrices() != (ca, cb) {
        return Err(Error::InternalInconsistency(format!("canonical matrices do not match the replayed chain for {cf:?}")));
    }
    if !noncommute_guard(&cf) {
        return Err(Error::InternalInconsistency(format!(
            "commutation test and Jordan branch disagree for {cf:?}"
        )));
    }
    Ok((cf, chain))
}

/// True iff the canonical pair does not commute, read off the branch's
/// commutator formula.
pub fn noncommute_guard(cf: &CanonicalForm) -> bool {
    let sq = |s: &Scalar| s * s;
    match cf {
        CanonicalForm::Commuting { .. } => false,
        CanonicalForm::CaseJ1 { lambda, b } => {
            let bb = lambda * &Scalar::from(4);
            !(&bb * b.get(0, 1)).is_zero() || !(&bb * b.get(1, 0)).is_zero()
        }
        CanonicalForm::CaseJ2 { b } => {
            let s = b.get(0, 1) + b.get(1, 0);
            let d = b.get(1, 1) - b.get(0, 0);
            !(sq(&s) + sq(&d)).is_zero()
        }
        CanonicalForm::CaseJ3 { b } => {
            let d = b.get(1, 1) - b.get(0, 0);
            !(sq(b.get(1, 0)) + sq(&d)).is_zero()
        }
    }
}
