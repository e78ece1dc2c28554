//! The full pipeline: homogenize, canonicalize, classify, and carry every
//! generator back to the input coordinates.

use serde::Serialize;

use crate::algebra::Mat2;
use crate::canonical::{canonicalize, CanonicalForm, CanonicalizeOptions};
use crate::classify::{classify_canonical, Classification};
use crate::error::{Error, Result};
use crate::prolong::{admittance_residual, admittance_residual_system};
use crate::reduction::{commute_test, homogenize, pullback_vf, SystemSpec, TransformChain};
use crate::vector_field::VectorField;

#[derive(Clone, Copy, Debug, Default)]
pub struct AnalysisOptions {
    pub normalize_lambda: bool,
    /// Declared radicand of the input, if any.
    pub radicand: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportedGenerator {
    pub name: String,
    pub formula: String,
    pub canonical: VectorField,
    pub original: VectorField,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    pub spec: SystemSpec,
    pub commuting: bool,
    /// All steps from the input to the end point, in application order.
    pub chain: TransformChain,
    /// `(A, B)` reached by replaying `chain` on the input. Equal to the
    /// canonical pair except in the commuting case, where the canonical
    /// system is `y'' = M y`.
    pub end_point: (Mat2, Mat2),
    pub classification: Classification,
    pub generators: Vec<ReportedGenerator>,
}

impl Analysis {
    pub fn canonical_form(&self) -> &CanonicalForm {
        &self.classification.form
    }
}

pub fn analyze(spec: &SystemSpec, opts: AnalysisOptions) -> Result<Analysis> {
    let declared = opts.radicand;
    let found = spec.radicand()?;
    if let (Some(d), Some(e)) = (declared, found) {
        if d != e {
            return Err(Error::ConflictingDiscriminant(d, e));
        }
    }

    let (a, b, mut chain) = homogenize(spec)?;
    let commuting = commute_test(&a, &b);
    let copts = CanonicalizeOptions { normalize_lambda: opts.normalize_lambda, radicand: declared.or(found) };
    let (cf, canon_chain) = canonicalize(&a, &b, copts)?;
    chain.extend(&canon_chain);
    let classification = classify_canonical(&cf)?;
    chain.extend(&classification.orientation);

    let end_point = chain.apply(&spec.a, &spec.b)?;
    if !commuting && end_point != classification.form.matrices() {
        return Err(Error::InternalInconsistency("chain does not reproduce the canonical pair".into()));
    }

    let generators = classification
        .generators
        .iter()
        .map(|g| {
            Ok(ReportedGenerator {
                name: g.name.clone(),
                formula: g.formula.clone(),
                canonical: g.field.clone(),
                original: pullback_vf(&chain, &g.field)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(Analysis { spec: spec.clone(), commuting, chain, end_point, classification, generators })
}

/// Exact admittance of a reported generator, in both coordinate systems.
pub fn symbolic_check(analysis: &Analysis, g: &ReportedGenerator) -> bool {
    let (ea, eb) = &analysis.end_point;
    admittance_residual(ea, eb, &g.canonical).is_zero()
        && admittance_residual_system(&analysis.spec, &g.original).is_zero()
}
