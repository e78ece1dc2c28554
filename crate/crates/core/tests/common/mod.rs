#![allow(dead_code)]

use linsym::algebra::{Mat2, Scalar, Vec2};
use linsym::canonical::j1_matrix;
use linsym::reduction::{SystemSpec, TransformChain, TransformStep};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn s(p: i64, q: i64) -> Scalar {
    Scalar::frac(p, q)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Random rational `p/q` with `|p| <= 9`, `1 <= q <= 5`.
pub fn rational(rng: &mut ChaCha8Rng) -> Scalar {
    s(rng.gen_range(-9..=9), rng.gen_range(1..=5))
}

pub fn nonzero_rational(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let r = rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

pub fn matrix(rng: &mut ChaCha8Rng) -> Mat2 {
    Mat2::new(rational(rng), rational(rng), rational(rng), rational(rng))
}

/// Invertible matrix with small integer entries.
pub fn invertible(rng: &mut ChaCha8Rng) -> Mat2 {
    loop {
        let m = Mat2::from_ints([
            [rng.gen_range(-3..=3), rng.gen_range(-3..=3)],
            [rng.gen_range(-3..=3), rng.gen_range(-3..=3)],
        ]);
        if !m.det().is_zero() {
            return m;
        }
    }
}

pub const LAMBDAS: [(i64, i64); 3] = [(1, 1), (-1, 2), (3, 1)];

pub fn lambda_values() -> Vec<Scalar> {
    LAMBDAS.iter().map(|&(p, q)| s(p, q)).collect()
}

/// `[[b22 + 4 l^2, b12], [0, b22]]`.
pub fn one_extra_b(lambda: &Scalar, b12: Scalar, b22: Scalar) -> Mat2 {
    let l2 = lambda * lambda;
    Mat2::new(&b22 + &(&l2 * &s(4, 1)), b12, Scalar::zero(), b22)
}

/// `[[l^2/4, b12], [0, -15 l^2/4]]`.
pub fn two_extra_b(lambda: &Scalar, b12: Scalar) -> Mat2 {
    let l2 = lambda * lambda;
    Mat2::new(&l2 / &s(4, 1), b12, Scalar::zero(), -(&l2 * &s(15, 4)))
}

pub fn j1_spec(lambda: &Scalar, b: Mat2) -> SystemSpec {
    SystemSpec::homogeneous(j1_matrix(lambda), b)
}

pub fn j2_a() -> Mat2 {
    Mat2::from_ints([[0, 1], [-1, 0]])
}

pub fn j3_a() -> Mat2 {
    Mat2::from_ints([[0, 1], [0, 0]])
}

/// Moves a canonical system to "original" coordinates by undoing a random
/// linear change, exponential shift and positive x-scaling, then adds a
/// constant forcing.
pub fn disguise(rng: &mut ChaCha8Rng, spec: &SystemSpec) -> SystemSpec {
    let steps = TransformChain {
        steps: vec![
            TransformStep::LinearChange { p: invertible(rng) },
            TransformStep::ExpShift { tau: s(rng.gen_range(-2..=2), 2) },
            TransformStep::ScaleX { sigma: s(rng.gen_range(1..=2), 2) },
        ],
    };
    let (a, b) = steps.inverse().unwrap().apply(&spec.a, &spec.b).unwrap();
    let f = Vec2::new(s(rng.gen_range(-2..=2), 1), s(rng.gen_range(-2..=2), 1));
    SystemSpec::new(a, b, f)
}
