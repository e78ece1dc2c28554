//! Exponential polynomials `sum c * x^k * e^(mu x)` with exact coefficients.
//!
//! A term may also carry a constant exponent `rho`, i.e. a factor `e^rho`.
//! That factor only appears after substituting `x -> x + x0`; since
//! `e^rho` for distinct algebraic `rho` are linearly independent over the
//! algebraic numbers, terms with different `rho` are kept apart and the
//! zero test stays exact.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use super::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub mu: Scalar,
    pub k: u32,
    pub rho: Scalar,
}

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ExpPoly {
    terms: BTreeMap<TermKey, Scalar>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly::default()
    }

    pub fn constant(c: Scalar) -> Self {
        ExpPoly::term(c, 0, Scalar::zero())
    }

    /// `c * x^k * e^(mu x)`.
    pub fn term(c: Scalar, k: u32, mu: Scalar) -> Self {
        let mut p = ExpPoly::zero();
        p.push(TermKey { mu, k, rho: Scalar::zero() }, c);
        p
    }

    /// `e^(mu x)`.
    pub fn exp(mu: Scalar) -> Self {
        ExpPoly::term(Scalar::one(), 0, mu)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Scalar)> {
        self.terms.iter()
    }

    /// Coefficient of `x^k e^(mu x)` (with `rho = 0`).
    pub fn coeff(&self, k: u32, mu: &Scalar) -> Scalar {
        let key = TermKey { mu: mu.clone(), k, rho: Scalar::zero() };
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    fn push(&mut self, key: TermKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_default();
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, c: &Scalar) -> ExpPoly {
        if c.is_zero() {
            return ExpPoly::zero();
        }
        ExpPoly { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    /// Exact `d/dx`: `(c, k, mu) -> (c mu, k, mu) + (c k, k - 1, mu)`.
    pub fn derive(&self) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (key, c) in &self.terms {
            out.push(key.clone(), c * &key.mu);
            if key.k > 0 {
                let lower = TermKey { k: key.k - 1, ..key.clone() };
                out.push(lower, c * &Scalar::from(key.k as i64));
            }
        }
        out
    }

    /// Substitutes `x -> x + x0`.
    pub fn shift_x(&self, x0: &Scalar) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (key, c) in &self.terms {
            let rho = &key.rho + &(&key.mu * x0);
            // (x + x0)^k = sum_j binom(k, j) x0^(k-j) x^j
            let mut binom = 1i64;
            for j in 0..=key.k {
                let coeff = c * &Scalar::from(binom) * x0.pow(key.k - j);
                out.push(TermKey { mu: key.mu.clone(), k: j, rho: rho.clone() }, coeff);
                binom = binom * (key.k - j) as i64 / (j + 1) as i64;
            }
        }
        out
    }

    /// Substitutes `x -> sigma x`.
    pub fn scale_x(&self, sigma: &Scalar) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (key, c) in &self.terms {
            let key2 = TermKey { mu: &key.mu * sigma, k: key.k, rho: key.rho.clone() };
            out.push(key2, c * &sigma.pow(key.k));
        }
        out
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|(key, c)| c.to_f64() * x.powi(key.k as i32) * (key.mu.to_f64() * x + key.rho.to_f64()).exp())
            .sum()
    }

    /// Float snapshot for fast repeated evaluation.
    pub fn to_numeric(&self) -> NumExpPoly {
        NumExpPoly {
            terms: self
                .terms
                .iter()
                .map(|(key, c)| (c.to_f64() * key.rho.to_f64().exp(), key.k as i32, key.mu.to_f64()))
                .collect(),
        }
    }

    /// Value at `x = 0`, exact when every term has `rho = 0`.
    pub fn at_zero(&self) -> Option<Scalar> {
        let mut acc = Scalar::zero();
        for (key, c) in &self.terms {
            if key.k == 0 {
                if !key.rho.is_zero() {
                    return None;
                }
                acc = &acc + c;
            }
        }
        Some(acc)
    }
}

/// Floating-point form of an [`ExpPoly`].
#[derive(Clone, Debug, Default)]
pub struct NumExpPoly {
    terms: Vec<(f64, i32, f64)>,
}

impl NumExpPoly {
    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|&(c, k, mu)| c * x.powi(k) * (mu * x).exp()).sum()
    }

    /// Terms as `(c, k, mu)`, with any constant factor folded into `c`.
    pub fn terms(&self) -> &[(f64, i32, f64)] {
        &self.terms
    }
}

impl From<Scalar> for ExpPoly {
    fn from(c: Scalar) -> Self {
        ExpPoly::constant(c)
    }
}

impl Add<&ExpPoly> for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.push(k.clone(), c.clone());
        }
        out
    }
}

impl Sub<&ExpPoly> for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.push(k.clone(), -c);
        }
        out
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        self.scale(&Scalar::from(-1))
    }
}

impl Mul<&ExpPoly> for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                let key = TermKey { mu: &ka.mu + &kb.mu, k: ka.k + kb.k, rho: &ka.rho + &kb.rho };
                out.push(key, ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<ExpPoly> for ExpPoly {
            type Output = ExpPoly;
            fn $m(self, rhs: ExpPoly) -> ExpPoly { (&self).$m(&rhs) }
        }
        impl $tr<&ExpPoly> for ExpPoly {
            type Output = ExpPoly;
            fn $m(self, rhs: &ExpPoly) -> ExpPoly { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        -&self
    }
}

fn paren(s: &Scalar) -> String {
    let t = s.to_string();
    if t.contains(' ') || t.contains('/') || t.starts_with('-') {
        format!("({t})")
    } else {
        t
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (key, c) in &self.terms {
            let (neg, mag) = if c.signum() < 0 { (true, -c) } else { (false, c.clone()) };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mut factors = Vec::new();
            if !mag.is_one() {
                factors.push(paren(&mag));
            }
            if !key.rho.is_zero() {
                factors.push(format!("e^{{{}}}", key.rho));
            }
            match key.k {
                0 => {}
                1 => factors.push("x".to_string()),
                k => factors.push(format!("x^{k}")),
            }
            if !key.mu.is_zero() {
                let mu = if key.mu.is_one() {
                    String::new()
                } else if (-&key.mu).is_one() {
                    "-".to_string()
                } else {
                    let t = key.mu.to_string();
                    if t.contains(' ') { format!("({t})*") } else { format!("{t}*") }
                };
                factors.push(format!("e^{{{mu}x}}"));
            }
            if factors.is_empty() {
                f.write_str("1")?;
            } else {
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Serialized as a list of `[c, k, mu]` triples, with a fourth entry `rho`
/// for terms carrying a constant exponent.
impl Serialize for ExpPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(untagged)]
        enum Term<'a> {
            Plain(&'a Scalar, u32, &'a Scalar),
            Shifted(&'a Scalar, u32, &'a Scalar, &'a Scalar),
        }
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (key, c) in &self.terms {
            if key.rho.is_zero() {
                seq.serialize_element(&Term::Plain(c, key.k, &key.mu))?;
            } else {
                seq.serialize_element(&Term::Shifted(c, key.k, &key.mu, &key.rho))?;
            }
        }
        seq.end()
    }
}
