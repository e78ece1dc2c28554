//! Input parsing, verification and report rendering for the command line.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::algebra::{commutator, JordanResult, Mat2, Scalar, Vec2};
use crate::analysis::{analyze, symbolic_check, Analysis, AnalysisOptions, ReportedGenerator};
use crate::canonical::CanonicalForm;
use crate::classify::{CoeffSpace, HPair, Label};
use crate::error::{Error, Result};
use crate::prolong::{flow_check_numeric, rk4_solve, NumericSystem};
use crate::reduction::{SystemSpec, TransformChain};
use crate::vector_field::VectorField;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub verify: bool,
    pub normalize_lambda: bool,
    pub tol: f64,
    pub seed: u64,
    pub epsilons: Vec<f64>,
    /// Integration step of the verification trajectories.
    pub h: f64,
    pub interval: (f64, f64),
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            verify: false,
            normalize_lambda: false,
            tol: 1e-6,
            seed: 0,
            epsilons: vec![-0.1, -0.05, 0.05, 0.1],
            h: 1e-3,
            interval: (0.0, 1.0),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::MalformedInput(format!("tolerance must be positive, got {}", self.tol)));
        }
        if !(self.h > 0.0) || !(self.interval.1 > self.interval.0) {
            return Err(Error::MalformedInput("bad verification grid".into()));
        }
        if self.epsilons.iter().any(|e| !e.is_finite()) {
            return Err(Error::MalformedInput("epsilons must be finite".into()));
        }
        Ok(())
    }
}

/// One system read from an input document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputSystem {
    pub name: Option<String>,
    pub spec: SystemSpec,
    pub d: Option<i64>,
}

/// Reads a single system object or a list of them.
pub fn parse_input(doc: &Value) -> Result<Vec<InputSystem>> {
    match doc {
        Value::Array(items) => items.iter().map(parse_system).collect(),
        Value::Object(_) => Ok(vec![parse_system(doc)?]),
        _ => Err(Error::MalformedInput("expected a system object or a list of systems".into())),
    }
}

pub fn parse_input_str(text: &str) -> Result<Vec<InputSystem>> {
    parse_input(&serde_json::from_str(text)?)
}

/// Parses exactly one system object.
pub fn parse_system_str(text: &str) -> Result<InputSystem> {
    parse_system(&serde_json::from_str(text)?)
}

/// Like [`parse_input_str`] but keeps going past malformed items.
pub fn parse_batch(text: &str) -> Result<Vec<Result<InputSystem>>> {
    match serde_json::from_str(text)? {
        Value::Array(items) => Ok(items.iter().map(parse_system).collect()),
        doc @ Value::Object(_) => Ok(vec![parse_system(&doc)]),
        _ => Err(Error::MalformedInput("expected a system object or a list of systems".into())),
    }
}

pub fn parse_system(v: &Value) -> Result<InputSystem> {
    let obj = v.as_object().ok_or_else(|| Error::MalformedInput("system must be a JSON object".into()))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "A" | "B" | "f" | "d" | "name") {
            return Err(Error::MalformedInput(format!("unknown key {key:?}")));
        }
    }
    let mat = |key: &str| -> Result<Mat2> {
        let m = obj.get(key).ok_or_else(|| Error::MalformedInput(format!("missing {key:?}")))?;
        parse_mat(m).map_err(|e| Error::MalformedInput(format!("{key}: {}", detail(e))))
    };
    let a = mat("A")?;
    let b = mat("B")?;
    let f = match obj.get("f") {
        None | Some(Value::Null) => Vec2::zero(),
        Some(f) => parse_vec(f).map_err(|e| Error::MalformedInput(format!("f: {}", detail(e))))?,
    };
    let d = match obj.get("d") {
        None | Some(Value::Null) => None,
        Some(d) => {
            let d = d.as_i64().filter(|d| *d > 1).ok_or_else(|| {
                Error::MalformedInput("d must be an integer greater than 1".into())
            })?;
            let free = Scalar::sqrt_of(d)?.radicand().ok_or_else(|| {
                Error::MalformedInput(format!("d = {d} is a perfect square"))
            })?;
            Some(free)
        }
    };
    let name = match obj.get("name") {
        None => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(Error::MalformedInput("name must be a string".into())),
    };
    let spec = SystemSpec::new(a, b, f);
    let found = spec.radicand()?;
    if let (Some(d), Some(e)) = (d, found) {
        if d != e {
            return Err(Error::ConflictingDiscriminant(d, e));
        }
    }
    Ok(InputSystem { name, spec, d })
}

fn detail(e: Error) -> String {
    match e {
        Error::MalformedInput(s) => s,
        other => other.to_string(),
    }
}

fn parse_scalar(v: &Value) -> Result<Scalar> {
    serde_json::from_value(v.clone()).map_err(|e| Error::MalformedInput(format!("bad scalar {v}: {e}")))
}

fn parse_vec(v: &Value) -> Result<Vec2> {
    match v.as_array().map(Vec::as_slice) {
        Some([y, z]) => Ok(Vec2::new(parse_scalar(y)?, parse_scalar(z)?)),
        _ => Err(Error::MalformedInput(format!("expected a 2-vector, got {v}"))),
    }
}

fn parse_mat(v: &Value) -> Result<Mat2> {
    match v.as_array().map(Vec::as_slice) {
        Some([r0, r1]) => {
            let [a, b] = parse_vec(r0)?.0;
            let [c, d] = parse_vec(r1)?.0;
            Ok(Mat2::new(a, b, c, d))
        }
        _ => Err(Error::MalformedInput(format!("expected a 2x2 matrix, got {v}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verification {
    pub generator: String,
    pub symbolic: &'static str,
    /// Largest flow discrepancy over `epsilons`; absent unless requested.
    pub numeric_residual: Option<f64>,
    pub epsilons: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CanonicalBlock {
    pub form: CanonicalForm,
    #[serde(rename = "A")]
    pub a: Mat2,
    #[serde(rename = "B")]
    pub b: Mat2,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub input: SystemSpec,
    pub verdict: &'static str,
    pub commutator: Mat2,
    pub chain: TransformChain,
    pub inverse_chain: TransformChain,
    pub canonical: CanonicalBlock,
    pub label: Label,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<HPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeff_space: Option<CoeffSpace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_jordan: Option<JordanResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub literature: Option<&'static str>,
    pub generators: Vec<ReportedGenerator>,
    pub verification: Vec<Verification>,
    pub passed: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Random initial data in `[-1, 1]^4` from the seed.
pub fn initial_data(seed: u64) -> [f64; 4] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::array::from_fn(|_| rng.gen_range(-1.0..=1.0))
}

/// Largest flow discrepancy of `vf` on a solution of `spec` over `eps`.
pub fn numeric_residual(spec: &SystemSpec, vf: &VectorField, cfg: &RunConfig) -> Result<f64> {
    let sys = NumericSystem::from_spec(spec);
    let traj = rk4_solve(&sys, initial_data(cfg.seed), cfg.interval.0, cfg.interval.1, cfg.h)?;
    let nf = vf.to_numeric();
    let mut worst: f64 = 0.0;
    for &eps in &cfg.epsilons {
        worst = worst.max(flow_check_numeric(&sys, &nf, eps, &traj)?);
    }
    Ok(worst)
}

pub fn run_report(input: &InputSystem, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let opts = AnalysisOptions { normalize_lambda: cfg.normalize_lambda, radicand: input.d };
    let an = analyze(&input.spec, opts)?;
    build_report(input, &an, cfg)
}

fn build_report(input: &InputSystem, an: &Analysis, cfg: &RunConfig) -> Result<Report> {
    let mut verification = Vec::new();
    let mut passed = true;
    for g in &an.generators {
        let symbolic = symbolic_check(an, g);
        passed &= symbolic;
        let numeric = if cfg.verify {
            let r = numeric_residual(&an.spec, &g.original, cfg)?;
            passed &= r < cfg.tol;
            Some(r)
        } else {
            None
        };
        verification.push(Verification {
            generator: g.name.clone(),
            symbolic: if symbolic { "zero" } else { "nonzero" },
            numeric_residual: numeric,
            epsilons: if cfg.verify { cfg.epsilons.clone() } else { Vec::new() },
        });
    }
    let cl = &an.classification;
    Ok(Report {
        schema: SCHEMA_VERSION,
        name: input.name.clone(),
        input: an.spec.clone(),
        verdict: if an.commuting { "commuting" } else { "non-commuting" },
        commutator: commutator(&an.spec.a, &an.spec.b),
        inverse_chain: an.chain.inverse()?,
        chain: an.chain.clone(),
        canonical: CanonicalBlock { form: cl.form.clone(), a: an.end_point.0.clone(), b: an.end_point.1.clone() },
        label: cl.label,
        h: cl.h.clone(),
        coeff_space: cl.coeff_space,
        m_jordan: cl.m_jordan.clone(),
        literature: cl.literature,
        generators: an.generators.clone(),
        verification,
        passed,
    })
}

/// Human-readable rendering.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let w = &mut out;
    if let Some(n) = &r.name {
        let _ = writeln!(w, "system {n}");
    }
    let _ = writeln!(w, "A = {}, B = {}, f = {}", r.input.a, r.input.b, r.input.f);
    let _ = writeln!(w, "AB - BA = {} ({})", r.commutator, r.verdict);
    let _ = writeln!(w, "chain: {}", chain_text(&r.chain));
    let _ = writeln!(w, "inverse: {}", chain_text(&r.inverse_chain));
    match &r.canonical.form {
        CanonicalForm::Commuting { m } => {
            let _ = writeln!(w, "canonical: y'' = M y with M = {m}");
        }
        CanonicalForm::CaseJ1 { lambda, b } => {
            let _ = writeln!(w, "canonical: J1, lambda = {lambda}, A = diag(0, 4 lambda), B = {b}");
        }
        CanonicalForm::CaseJ2 { b } => {
            let _ = writeln!(w, "canonical: J2, A = [[0, 1], [-1, 0]], B = {b}");
        }
        CanonicalForm::CaseJ3 { b } => {
            let _ = writeln!(w, "canonical: J3, A = [[0, 1], [0, 0]], B = {b}");
        }
    }
    if let Some(h) = &r.h {
        let _ = writeln!(w, "h1 = {}, h2 = {}", h.h1, h.h2);
    }
    let _ = writeln!(w, "label: {}", r.label);
    match r.label {
        Label::J1OneExtra => {
            let _ = writeln!(w, "B has the form [[b22 + 4 lambda^2, b12], [0, b22]]");
        }
        Label::J1TwoExtra => {
            let _ = writeln!(w, "B has the form [[lambda^2/4, b12], [0, -15 lambda^2/4]]");
        }
        _ => {}
    }
    if let Some(lit) = r.literature {
        let _ = writeln!(w, "{lit}");
    }
    let _ = writeln!(w, "generators:");
    for (g, v) in r.generators.iter().zip(&r.verification) {
        let num = v.numeric_residual.map(|x| format!(", numeric {x:.3e}")).unwrap_or_default();
        let _ = writeln!(w, "  {}: {}  [{}]", g.name, g.formula, g.canonical);
        let _ = writeln!(w, "    original: {}  (symbolic {}{num})", g.original, v.symbolic);
    }
    let _ = writeln!(w, "passed: {}", r.passed);
    out
}

fn chain_text(c: &TransformChain) -> String {
    if c.is_empty() {
        return "(empty)".into();
    }
    serde_json::to_string(c).expect("chain serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn parse_examples() {
        let v = json!({"A": [["0","0"],["0","4"]], "B": [["4","1"],["0","0"]]});
        let sys = parse_input(&v).unwrap();
        assert_eq!(sys.len(), 1);
        assert_eq!(sys[0].spec.a, Mat2::from_ints([[0, 0], [0, 4]]));
        assert!(sys[0].spec.f.is_zero());

        let bad = json!({"A": [["0","0"],["0","4"]], "B": [["1"]]});
        assert!(matches!(parse_input(&bad), Err(Error::MalformedInput(_))));
        let bad = json!({"A": [["0","x"],["0","4"]], "B": [["1","0"],["0","1"]]});
        assert!(matches!(parse_input(&bad), Err(Error::MalformedInput(_))));
        let list = json!([v, {"A": [[0, 1], [1, 0]], "B": [[0, 1], [0, 0]], "f": ["1", "1/2"]}]);
        assert_eq!(parse_input(&list).unwrap().len(), 2);
    }

    #[test]
    fn parse_radicands() {
        let v = json!({"A": [["0","0"],["0","4"]], "B": [[{"rat":"0","ext":"1","d":2},"1"],["0","0"]], "d": 3});
        assert!(matches!(parse_input(&v), Err(Error::ConflictingDiscriminant(3, 2))));
        let v = json!({"A": [["0","0"],["0","4"]], "B": [[{"rat":"0","ext":"1","d":2},"1"],["0","0"]], "d": 8});
        assert_eq!(parse_input(&v).unwrap()[0].d, Some(2));
    }

    #[test]
    fn reports() {
        let cfg = RunConfig { verify: true, ..Default::default() };
        let sys = parse_input(&json!({"A": [["0","1"],["1","0"]], "B": [["0","1"],["0","0"]]})).unwrap();
        let r = run_report(&sys[0], &cfg).unwrap();
        assert_eq!(r.verdict, "non-commuting");
        assert_eq!(r.chain.len(), 2);
        assert!(r.passed);
        assert_eq!(r.to_json(), run_report(&sys[0], &cfg).unwrap().to_json());

        let sys = parse_input(&json!({"A": [["0","0"],["0","0"]], "B": [["1","0"],["0","2"]]})).unwrap();
        let r = run_report(&sys[0], &cfg).unwrap();
        assert_eq!(r.label, Label::CommutingReducible);
        assert!(r.literature.is_some());
        assert!(render_text(&r).contains("y'' = M y"));

        let sys = parse_input(&json!({"A": [["0","0"],["0","4"]], "B": [["1/4","1"],["0","-15/4"]]})).unwrap();
        let r = run_report(&sys[0], &cfg).unwrap();
        assert_eq!(r.label, Label::J1TwoExtra);
        assert_eq!(r.generators.len(), 4);
        assert!(r.passed, "{:?}", r.verification);
    }
}
