//! Determining equations of the J1 branch and the classification of every
//! canonical form.
//!
//! In the J1 branch (`A = diag(0, 4 lambda)`) the extension of the generic
//! algebra is spanned by `C1 Xbar1 + C2 X2`, and the coefficients obey six
//! linear equations: four multiply `C1`, the remaining ones multiply `C2`.
//! The coefficient space is computed twice, once as the rank of that
//! linear system and once from the closed-form branch conditions, and the
//! two must agree.

use serde::Serialize;

use crate::algebra::linsolve;
use crate::algebra::{real_jordan, ExpPoly, JordanResult, Mat2, Scalar};
use crate::canonical::{j1_matrix, CanonicalForm};
use crate::error::{Error, Result};
use crate::reduction::{TransformChain, TransformStep};
use crate::vector_field::{EpMat2, VectorField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Label {
    CommutingReducible,
    J1NoExtension,
    J1OneExtra,
    J1TwoExtra,
    J2NoExtension,
    J3NoExtension,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::CommutingReducible => "COMMUTING_REDUCIBLE",
            Label::J1NoExtension => "J1_NO_EXTENSION",
            Label::J1OneExtra => "J1_ONE_EXTRA",
            Label::J1TwoExtra => "J1_TWO_EXTRA",
            Label::J2NoExtension => "J2_NO_EXTENSION",
            Label::J3NoExtension => "J3_NO_EXTENSION",
        }
    }

    /// Number of generators beyond `d_x` and `y d_y + z d_z`.
    pub fn extras(&self) -> usize {
        match self {
            Label::J1OneExtra => 1,
            Label::J1TwoExtra => 2,
            _ => 0,
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `h1 = b11 + b22 + 2 lambda^2`, `h2 = b22 - b11 + 4 lambda^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HPair {
    pub h1: Scalar,
    pub h2: Scalar,
}

pub fn h_values(b: &Mat2, lambda: &Scalar) -> HPair {
    let l2 = lambda * lambda;
    let (b11, b22) = (b.get(0, 0), b.get(1, 1));
    HPair {
        h1: b11 + b22 + &l2 * &Scalar::from(2),
        h2: b22 - b11 + &l2 * &Scalar::from(4),
    }
}

/// Left-hand sides of the reduced determining equations, in the order
/// `[C1 sextic, h1 h2 C1, C1 quartic, b21 C2, (4 b22 + 15 l^2) C2, (4 b11 - l^2) C2]`.
pub fn determining_residuals(b: &Mat2, lambda: &Scalar, c1: &Scalar, c2: &Scalar) -> [Scalar; 6] {
    let i = |v: i64| Scalar::from(v);
    let (b11, b12, b21, b22) = (b.get(0, 0), b.get(0, 1), b.get(1, 0), b.get(1, 1));
    let l2 = lambda * lambda;
    let l4 = &l2 * &l2;
    let l6 = &l4 * &l2;
    let b11_2 = b11 * b11;
    let b22_2 = b22 * b22;
    let b12b21 = b12 * b21;

    let sextic = [
        b11 * &b11_2,
        -(&i(2) * &b11_2 * b22),
        &i(7) * &b11_2 * &l2,
        &i(2) * b11 * &b12b21,
        b11 * &b22_2,
        -(&i(6) * b11 * b22 * &l2),
        -(&i(56) * b11 * &l4),
        -(&i(2) * &b12b21 * b22),
        -(&b22_2 * &l2),
        &i(8) * b22 * &l4,
        &i(48) * &l6,
    ]
    .into_iter()
    .sum::<Scalar>();

    let quartic = [
        &i(24) * &l4,
        &i(14) * b22 * &l2,
        -(&i(6) * b11 * &l2),
        -(&i(2) * b11 * b22),
        b12b21.clone(),
        &i(2) * &b22_2,
    ]
    .into_iter()
    .sum::<Scalar>();

    let h = h_values(b, lambda);
    [
        c1 * &sextic,
        &h.h1 * &h.h2 * c1,
        c1 * &quartic,
        c2 * b21,
        (&i(4) * b22 + &i(15) * &l2) * c2,
        (&i(4) * b11 - l2) * c2,
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoeffSpace {
    pub dim: usize,
    pub c1_free: bool,
    pub c2_free: bool,
}

/// Coefficient space from the rank of the linear system in `(C1, C2)`.
pub fn coeff_space_by_rank(b: &Mat2, lambda: &Scalar) -> CoeffSpace {
    let one = Scalar::one();
    let zero = Scalar::zero();
    let col1 = determining_residuals(b, lambda, &one, &zero);
    let col2 = determining_residuals(b, lambda, &zero, &one);
    let rows: Vec<Vec<Scalar>> = col1.iter().zip(&col2).map(|(u, v)| vec![u.clone(), v.clone()]).collect();
    let rank = linsolve::rank(&rows);
    CoeffSpace {
        dim: 2 - rank,
        c1_free: col1.iter().all(Scalar::is_zero),
        c2_free: col2.iter().all(Scalar::is_zero),
    }
}

/// Coefficient space from the closed-form conditions: `C2` is free iff
/// `b11 = lambda^2/4, b22 = -15 lambda^2/4, b21 = 0`; `C1` is free iff
/// `b21 = 0` and `b11 = b22 + 4 lambda^2`.
pub fn coeff_space_by_branches(b: &Mat2, lambda: &Scalar) -> CoeffSpace {
    let l2 = lambda * lambda;
    let b21_zero = b.get(1, 0).is_zero();
    let c2_free = b21_zero
        && *b.get(0, 0) == &l2 / &Scalar::from(4)
        && *b.get(1, 1) == -(&l2 * &Scalar::frac(15, 4));
    let c1_free = b21_zero && *b.get(0, 0) == b.get(1, 1) + &(&l2 * &Scalar::from(4));
    CoeffSpace { dim: c1_free as usize + c2_free as usize, c1_free, c2_free }
}

/// Both routes, which must agree. Requires `b12 != 0`: for `b12 = 0` the
/// `C1` basis element degenerates to zero on the `h2 = 0` branch and the
/// system must be read in the swapped orientation instead.
pub fn solve_coeff_space(b: &Mat2, lambda: &Scalar) -> Result<CoeffSpace> {
    if b.get(0, 1).is_zero() {
        return Err(Error::MalformedInput(format!("J1 determining equations need b12 != 0, got B = {b}")));
    }
    let by_rank = coeff_space_by_rank(b, lambda);
    let by_branch = coeff_space_by_branches(b, lambda);
    if by_rank != by_branch {
        return Err(Error::InternalInconsistency(format!(
            "rank analysis {by_rank:?} disagrees with branch conditions {by_branch:?} for B = {b}, lambda = {lambda}"
        )));
    }
    Ok(by_rank)
}

/// `e^(-2 lambda x) z d_y`.
pub fn x1_generator(lambda: &Scalar) -> VectorField {
    let e = ExpPoly::exp(-(lambda * &Scalar::from(2)));
    VectorField::new(ExpPoly::zero(), EpMat2::from_const(&Mat2::from_ints([[0, 1], [0, 0]]), &e))
}

/// `e^(-lambda x) (2 d_x - lambda (y d_y - 3 z d_z))`.
pub fn x2_generator(lambda: &Scalar) -> VectorField {
    let e = ExpPoly::exp(-lambda);
    let diag = Mat2::diag(-lambda, lambda * &Scalar::from(3));
    VectorField::new(e.scale(&Scalar::from(2)), EpMat2::from_const(&diag, &e))
}

/// `e^(-2 lambda x) (h2 (d_x - lambda (y d_y - z d_z)) - 2 lambda b12 z d_y)`,
/// the `C1` basis element before imposing `h2 = 0`.
pub fn x1_bar_generator(b: &Mat2, lambda: &Scalar) -> VectorField {
    let h2 = h_values(b, lambda).h2;
    let e = ExpPoly::exp(-(lambda * &Scalar::from(2)));
    let m = Mat2::new(
        -(&h2 * lambda),
        -(&Scalar::from(2) * lambda * b.get(0, 1)),
        Scalar::zero(),
        &h2 * lambda,
    );
    VectorField::new(e.scale(&h2), EpMat2::from_const(&m, &e))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedGenerator {
    pub name: String,
    /// Symbolic template, e.g. `e^{-2 lambda x} z d_y`.
    pub formula: String,
    pub field: VectorField,
}

impl NamedGenerator {
    fn new(name: &str, formula: &str, field: VectorField) -> Self {
        NamedGenerator { name: name.to_string(), formula: formula.to_string(), field }
    }
}

pub fn generic_generators() -> Vec<NamedGenerator> {
    vec![
        NamedGenerator::new("Dx", "d_x", VectorField::dx()),
        NamedGenerator::new("S", "y d_y + z d_z", VectorField::scaling()),
    ]
}

/// Pointer for the commuting class, whose sub-classification is in the
/// literature on `y'' = M y`.
pub const LITERATURE_MARKER: &str =
    "see literature: systems y'' = M y with constant M are classified there";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub label: Label,
    /// Canonical form after orientation.
    pub form: CanonicalForm,
    /// Steps applied after canonicalization to reach `form` (the y/z swap).
    pub orientation: TransformChain,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<HPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeff_space: Option<CoeffSpace>,
    /// Real Jordan data of `M` in the commuting case.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_jordan: Option<JordanResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub literature: Option<&'static str>,
    pub generators: Vec<NamedGenerator>,
}

/// Steps exchanging `y` and `z` in the J1 branch and re-zeroing the
/// diagonal: `diag(0, 4 lambda)` becomes `diag(0, -4 lambda)`.
pub fn swap_orientation(lambda: &Scalar) -> TransformChain {
    TransformChain {
        steps: vec![
            TransformStep::LinearChange { p: Mat2::from_ints([[0, 1], [1, 0]]) },
            TransformStep::ExpShift { tau: -(lambda * &Scalar::from(2)) },
        ],
    }
}

fn classify_j1(lambda: &Scalar, b: &Mat2) -> Result<Classification> {
    // Orientations with b12 != 0; non-commutation guarantees at least one.
    let mut candidates = Vec::new();
    if !b.get(0, 1).is_zero() {
        candidates.push((lambda.clone(), b.clone(), TransformChain::new()));
    }
    if !b.get(1, 0).is_zero() {
        let swap = swap_orientation(lambda);
        let (sa, sb) = swap.apply(&j1_matrix(lambda), b)?;
        let s_lambda = -lambda;
        if sa != j1_matrix(&s_lambda) {
            return Err(Error::InternalInconsistency("swap did not preserve the J1 shape".into()));
        }
        candidates.push((s_lambda, sb, swap));
    }
    let mut chosen: Option<(Scalar, Mat2, TransformChain, CoeffSpace)> = None;
    for (l, cb, chain) in candidates {
        let space = solve_coeff_space(&cb, &l)?;
        let better = match &chosen {
            None => true,
            Some((_, _, _, best)) => space.dim > best.dim,
        };
        if better {
            chosen = Some((l, cb, chain, space));
        }
    }
    let Some((l, cb, orientation, space)) = chosen else {
        return Err(Error::InternalInconsistency(format!("J1 form with b12 = b21 = 0: B = {b}")));
    };
    let form = CanonicalForm::CaseJ1 { lambda: l, b: cb };

    let CanonicalForm::CaseJ1 { lambda, b } = &form else { unreachable!() };
    let label = match (space.c1_free, space.c2_free) {
        (false, false) => Label::J1NoExtension,
        (true, false) => Label::J1OneExtra,
        (true, true) => Label::J1TwoExtra,
        (false, true) => {
            return Err(Error::InternalInconsistency("C2 free without C1 free".into()));
        }
    };
    let h = h_values(b, lambda);
    if label != Label::J1NoExtension && !h.h2.is_zero() {
        return Err(Error::InternalInconsistency("extension found with h2 != 0".into()));
    }

    let mut generators = generic_generators();
    if space.c1_free {
        generators.push(NamedGenerator::new("X1", "e^{-2 lambda x} z d_y", x1_generator(lambda)));
    }
    if space.c2_free {
        generators.push(NamedGenerator::new(
            "X2",
            "e^{-lambda x} (2 d_x - lambda (y d_y - 3 z d_z))",
            x2_generator(lambda),
        ));
    }
    Ok(Classification {
        label,
        form: form.clone(),
        orientation,
        h: Some(h),
        coeff_space: Some(space),
        m_jordan: None,
        literature: None,
        generators,
    })
}

/// Label and admitted generators (in canonical coordinates) of a canonical
/// form. For J1 both the given orientation and the y/z swap are tried.
pub fn classify_canonical(cf: &CanonicalForm) -> Result<Classification> {
    let plain = |label: Label| Classification {
        label,
        form: cf.clone(),
        orientation: TransformChain::new(),
        h: None,
        coeff_space: None,
        m_jordan: None,
        literature: None,
        generators: generic_generators(),
    };
    match cf {
        CanonicalForm::Commuting { m } => Ok(Classification {
            m_jordan: real_jordan(m).ok(),
            literature: Some(LITERATURE_MARKER),
            ..plain(Label::CommutingReducible)
        }),
        CanonicalForm::CaseJ1 { lambda, b } => {
            if lambda.is_zero() {
                return Err(Error::InternalInconsistency("J1 with lambda = 0".into()));
            }
            classify_j1(lambda, b)
        }
        CanonicalForm::CaseJ2 { .. } => Ok(plain(Label::J2NoExtension)),
        CanonicalForm::CaseJ3 { .. } => Ok(plain(Label::J3NoExtension)),
    }
}
