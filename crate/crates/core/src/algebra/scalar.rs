//! Exact scalars in Q or a real quadratic extension Q(sqrt d).
//!
//! A [`Scalar`] is `rat + ext * sqrt(d)` with `d` a square-free integer
//! greater than one. Purely rational values carry `d = 0`. Two irrational
//! scalars over different radicands cannot be combined; callers fix the
//! radicand for a computation up front (see [`common_radicand`]).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    rat: BigRational,
    ext: BigRational,
    /// 0 when `ext == 0`.
    d: i64,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { rat: BigRational::zero(), ext: BigRational::zero(), d: 0 }
    }

    pub fn one() -> Self {
        Scalar::from(1)
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar { rat: r, ext: BigRational::zero(), d: 0 }
    }

    pub fn frac(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar::from_rational(BigRational::new(p.into(), q.into()))
    }

    /// Builds `rat + ext * sqrt(d)`, pulling square factors out of `d`.
    pub fn with_sqrt(rat: BigRational, ext: BigRational, d: i64) -> Result<Self> {
        if ext.is_zero() {
            return Ok(Scalar::from_rational(rat));
        }
        if d <= 0 {
            return Err(Error::UnsupportedDiscriminant(format!(
                "radicand must be positive, got {d}"
            )));
        }
        let (k, free) = split_square(d as u64);
        let ext = ext * BigRational::from_integer(BigInt::from(k));
        if free == 1 {
            return Ok(Scalar::from_rational(rat + ext));
        }
        Ok(Scalar { rat, ext, d: free as i64 })
    }

    /// `sqrt(d)` for a square-free `d > 1`.
    pub fn sqrt_of(d: i64) -> Result<Self> {
        Scalar::with_sqrt(BigRational::zero(), BigRational::one(), d)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn ext_part(&self) -> &BigRational {
        &self.ext
    }

    /// Radicand of the extension, `None` for rationals.
    pub fn radicand(&self) -> Option<i64> {
        (self.d != 0).then_some(self.d)
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.ext.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.ext.is_zero() && self.rat.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.ext.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rat)
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sr = sign_of(&self.rat);
        let se = sign_of(&self.ext);
        if se == 0 {
            return sr;
        }
        if sr == 0 || sr == se {
            return se;
        }
        // Opposite signs: compare rat^2 against ext^2 * d.
        let lhs = &self.rat * &self.rat;
        let rhs = &self.ext * &self.ext * BigRational::from_integer(self.d.into());
        match lhs.cmp(&rhs) {
            Ordering::Greater => sr,
            Ordering::Less => se,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> Scalar {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Galois conjugate `rat - ext * sqrt(d)`.
    pub fn conjugate(&self) -> Scalar {
        Scalar { rat: self.rat.clone(), ext: -&self.ext, d: self.d }
    }

    pub fn recip(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        if self.is_rational() {
            return Some(Scalar::from_rational(self.rat.recip()));
        }
        let norm = &self.rat * &self.rat
            - &self.ext * &self.ext * BigRational::from_integer(self.d.into());
        Some(Scalar {
            rat: &self.rat / &norm,
            ext: -&self.ext / &norm,
            d: self.d,
        })
    }

    pub fn pow(&self, n: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.rat.to_f64().unwrap_or(f64::NAN);
        if self.ext.is_zero() {
            return r;
        }
        r + self.ext.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }

    /// Exact square root inside Q or Q(sqrt d).
    ///
    /// `fixed` is the radicand already in use by the surrounding computation,
    /// if any. A rational non-square argument may open a new extension only
    /// when none is fixed or when it lands in the fixed one.
    pub fn sqrt(&self, fixed: Option<i64>) -> Result<Scalar> {
        if self.signum() < 0 {
            return Err(Error::UnsupportedDiscriminant(format!(
                "square root of negative value {self}"
            )));
        }
        if self.is_zero() {
            return Ok(Scalar::zero());
        }
        if let Some(r) = self.as_rational() {
            if let Some(s) = rational_sqrt(r) {
                return Ok(Scalar::from_rational(s));
            }
            // r = (n/m) = n*m / m^2, so sqrt(r) = sqrt(n*m)/m
            let nm = r.numer() * r.denom();
            let nm = nm.to_u64().ok_or_else(|| {
                Error::UnsupportedDiscriminant(format!("radicand {nm} too large"))
            })?;
            let (k, free) = split_square(nm);
            let free = free as i64;
            if let Some(f) = fixed {
                if f != free {
                    return Err(Error::UnsupportedDiscriminant(format!(
                        "sqrt({r}) needs sqrt({free}) but the computation already uses sqrt({f})"
                    )));
                }
            }
            let coeff = BigRational::new(BigInt::from(k), r.denom().clone());
            return Scalar::with_sqrt(BigRational::zero(), coeff, free);
        }
        // (p + q sqrt d)^2 = x  =>  p^2 = (x_r +- sqrt(N(x))) / 2, N = x_r^2 - d x_e^2
        let d = BigRational::from_integer(self.d.into());
        let norm = &self.rat * &self.rat - &self.ext * &self.ext * &d;
        let nested = || {
            Error::UnsupportedDiscriminant(format!(
                "sqrt({self}) needs a nested radical"
            ))
        };
        let root_norm = rational_sqrt(&norm).ok_or_else(nested)?;
        let two = BigRational::from_integer(2.into());
        for cand in [(&self.rat + &root_norm) / &two, (&self.rat - &root_norm) / &two] {
            if cand.is_positive() {
                if let Some(p) = rational_sqrt(&cand) {
                    let q = &self.ext / (&two * &p);
                    let s = Scalar { rat: p, ext: q, d: self.d };
                    return Ok(if s.signum() < 0 { -s } else { s });
                }
            }
            // p = 0 branch: x = q^2 d, rational; handled above.
        }
        Err(nested())
    }

    fn check_compat(&self, other: &Scalar) -> i64 {
        match (self.d, other.d) {
            (0, d) | (d, 0) => d,
            (a, b) if a == b => a,
            (a, b) => panic!("mixing Q(sqrt {a}) and Q(sqrt {b})"),
        }
    }

    fn normalized(rat: BigRational, ext: BigRational, d: i64) -> Scalar {
        if ext.is_zero() {
            Scalar { rat, ext, d: 0 }
        } else {
            Scalar { rat, ext, d }
        }
    }
}

/// The single radicand shared by `values`, if any.
pub fn common_radicand<'a>(values: impl IntoIterator<Item = &'a Scalar>) -> Result<Option<i64>> {
    let mut seen: Option<i64> = None;
    for v in values {
        if let Some(d) = v.radicand() {
            match seen {
                Some(s) if s != d => return Err(Error::ConflictingDiscriminant(s, d)),
                _ => seen = Some(d),
            }
        }
    }
    Ok(seen)
}

fn sign_of(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    let n = int_sqrt(r.numer())?;
    let d = int_sqrt(r.denom())?;
    Some(BigRational::new(n, d))
}

/// Writes `n = k^2 * free` with `free` square-free.
fn split_square(n: u64) -> (u64, u64) {
    let mut k = 1u64;
    let mut free = 1u64;
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        k *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= p;
        }
        p += 1;
    }
    free *= rest;
    (k, free)
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(v.into()))
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { rat: -&self.rat, ext: -&self.ext, d: self.d }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let d = self.check_compat(rhs);
        Scalar::normalized(&self.rat + &rhs.rat, &self.ext + &rhs.ext, d)
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let d = self.check_compat(rhs);
        Scalar::normalized(&self.rat - &rhs.rat, &self.ext - &rhs.ext, d)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let d = self.check_compat(rhs);
        let dd = BigRational::from_integer(d.into());
        let rat = &self.rat * &rhs.rat + &self.ext * &rhs.ext * dd;
        let ext = &self.rat * &rhs.ext + &self.ext * &rhs.rat;
        Scalar::normalized(rat, ext, d)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.recip().expect("division by zero scalar")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ext.is_zero() {
            return f.write_str(&fmt_rational(&self.rat));
        }
        let ext = if self.ext.is_one() {
            String::new()
        } else if (-&self.ext).is_one() {
            "-".to_string()
        } else {
            format!("{}*", fmt_rational(&self.ext))
        };
        if self.rat.is_zero() {
            write!(f, "{ext}sqrt({})", self.d)
        } else if self.ext.is_negative() {
            let pos = -&self.ext;
            let e = if pos.is_one() { String::new() } else { format!("{}*", fmt_rational(&pos)) };
            write!(f, "{} - {e}sqrt({})", fmt_rational(&self.rat), self.d)
        } else {
            write!(f, "{} + {ext}sqrt({})", fmt_rational(&self.rat), self.d)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses `"p/q"`, `"p"`, or a decimal literal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Ok(r) = BigRational::from_str(s) {
        if r.denom().is_zero() {
            return Err(Error::MalformedInput(format!("zero denominator in {s:?}")));
        }
        return Ok(r);
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
            let num = BigInt::from_str(&digits).map_err(|_| bad_literal(s))?;
            let den = BigInt::from(10u32).pow(frac.len() as u32);
            let r = BigRational::new(num, den);
            return Ok(if neg { -r } else { r });
        }
    }
    Err(bad_literal(s))
}

fn bad_literal(s: &str) -> Error {
    Error::MalformedInput(format!("cannot parse rational literal {s:?}"))
}

impl FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Scalar> {
        parse_rational(s).map(Scalar::from_rational)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.ext.is_zero() {
            return s.serialize_str(&fmt_rational(&self.rat));
        }
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("rat", &fmt_rational(&self.rat))?;
        m.serialize_entry("ext", &fmt_rational(&self.ext))?;
        m.serialize_entry("d", &self.d)?;
        m.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Text(String),
    Int(i64),
    Ext { rat: String, ext: String, d: i64 },
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Scalar, D::Error> {
        match ScalarRepr::deserialize(de)? {
            ScalarRepr::Text(t) => t.parse().map_err(de::Error::custom),
            ScalarRepr::Int(i) => Ok(Scalar::from(i)),
            ScalarRepr::Ext { rat, ext, d } => {
                let rat = parse_rational(&rat).map_err(de::Error::custom)?;
                let ext = parse_rational(&ext).map_err(de::Error::custom)?;
                Scalar::with_sqrt(rat, ext, d).map_err(de::Error::custom)
            }
        }
    }
}
