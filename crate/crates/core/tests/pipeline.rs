mod common;

use common::*;
use linsym::algebra::{Mat2, Scalar, Vec2};
use linsym::classify::Label;
use linsym::reduction::{SystemSpec, TransformStep};
use linsym::report::{parse_input_str, run_report, RunConfig};

fn verify_cfg() -> RunConfig {
    RunConfig { verify: true, ..Default::default() }
}

fn report_for(json: &str) -> linsym::report::Report {
    let sys = parse_input_str(json).unwrap();
    run_report(&sys[0], &verify_cfg()).unwrap()
}

#[test]
fn worked_example_report() {
    let r = report_for(r#"{"A": [["0","1"],["1","0"]], "B": [["0","1"],["0","0"]]}"#);
    assert_eq!(r.verdict, "non-commuting");
    assert_eq!(r.commutator, Mat2::from_ints([[-1, 0], [0, 1]]));
    assert_eq!(r.chain.len(), 2);
    assert!(matches!(r.chain.steps[0], TransformStep::LinearChange { .. }));
    assert!(matches!(r.chain.steps[1], TransformStep::ExpShift { .. }));
    assert_eq!(r.canonical.a, Mat2::diag(Scalar::zero(), s(-2, 1)));
    assert_eq!(r.label, Label::J1NoExtension);
    assert!(r.passed);
}

#[test]
fn commuting_report() {
    let r = report_for(r#"{"A": [["0","0"],["0","0"]], "B": [["1","0"],["0","2"]]}"#);
    assert_eq!(r.label, Label::CommutingReducible);
    assert_eq!(r.canonical.form, linsym::canonical::CanonicalForm::Commuting { m: Mat2::diag(Scalar::one(), s(2, 1)) });
    assert!(r.literature.is_some());
    assert!(r.m_jordan.is_some());
}

#[test]
fn two_extra_report_lists_four_generators() {
    let r = report_for(r#"{"A": [["0","0"],["0","4"]], "B": [["1/4","1"],["0","-15/4"]]}"#);
    assert_eq!(r.label, Label::J1TwoExtra);
    let names: Vec<_> = r.generators.iter().map(|g| g.name.as_str()).collect();
    assert_eq!(names, ["Dx", "S", "X1", "X2"]);
    assert!(r.verification.iter().all(|v| v.symbolic == "zero" && v.numeric_residual.unwrap() < 1e-6));
}

#[test]
fn reports_are_deterministic() {
    let json = r#"[{"A": [["1","2"],["3","-1"]], "B": [["0","1"],["2","0"]], "f": ["1","-1"]},
                   {"A": [["0","0"],["0","12"]], "B": [["4","1"],["0","0"]]}]"#;
    let cfg = RunConfig { verify: true, seed: 7, ..Default::default() };
    for sys in parse_input_str(json).unwrap() {
        let a = run_report(&sys, &cfg).unwrap().to_json();
        let b = run_report(&sys, &cfg).unwrap().to_json();
        assert_eq!(a, b);
    }
}

#[test]
fn inverse_chain_restores_the_input() {
    let mut rng = rng(11);
    for i in 0..40 {
        let lambda = nonzero_rational(&mut rng);
        let base = j1_spec(&lambda, one_extra_b(&lambda, nonzero_rational(&mut rng), rational(&mut rng)));
        let spec = if i % 2 == 0 { disguise(&mut rng, &base) } else { SystemSpec::homogeneous(matrix(&mut rng), matrix(&mut rng)) };
        let input = linsym::report::InputSystem { name: None, spec: spec.clone(), d: None };
        let r = match run_report(&input, &RunConfig::default()) {
            Ok(r) => r,
            Err(linsym::Error::UnsupportedDiscriminant(_)) => continue,
            Err(e) => panic!("{e}"),
        };
        let back = r.inverse_chain.apply(&r.canonical.a, &r.canonical.b).unwrap();
        assert_eq!(back, (spec.a.clone(), spec.b.clone()));
        let forward = r.chain.apply_system(&spec).unwrap();
        assert!(forward.f.is_zero());
        let restored = r.inverse_chain.apply_system(&forward).unwrap();
        assert_eq!(restored, spec);
    }
}

#[test]
fn label_is_invariant_under_equivalence() {
    let mut rng = rng(12);
    for lambda in lambda_values() {
        for (label, b) in [
            (Label::J1OneExtra, one_extra_b(&lambda, s(2, 3), s(-1, 1))),
            (Label::J1TwoExtra, two_extra_b(&lambda, s(-5, 2))),
            (Label::J1NoExtension, Mat2::new(s(1, 1), s(1, 1), s(1, 1), s(1, 1))),
        ] {
            for _ in 0..4 {
                let spec = disguise(&mut rng, &j1_spec(&lambda, b.clone()));
                let input = linsym::report::InputSystem { name: None, spec, d: None };
                let r = run_report(&input, &RunConfig::default()).unwrap();
                assert_eq!(r.label, label);
                assert!(r.passed);
            }
        }
    }
}

#[test]
fn mirrored_j1_input_gets_the_same_label() {
    // y <-> z mirror of the one-extra fixture: b12 = 0, b21 != 0
    let lambda = s(1, 1);
    let b = one_extra_b(&lambda, s(5, 1), s(0, 1));
    let swap = linsym::classify::swap_orientation(&lambda);
    let (ma, mb) = swap.apply(&linsym::canonical::j1_matrix(&lambda), &b).unwrap();
    assert!(mb.get(0, 1).is_zero() && !mb.get(1, 0).is_zero());
    let direct = run_report(
        &linsym::report::InputSystem { name: None, spec: SystemSpec::homogeneous(linsym::canonical::j1_matrix(&lambda), b), d: None },
        &verify_cfg(),
    )
    .unwrap();
    let mirrored =
        run_report(&linsym::report::InputSystem { name: None, spec: SystemSpec::homogeneous(ma, mb), d: None }, &verify_cfg())
            .unwrap();
    assert_eq!(direct.label, Label::J1OneExtra);
    assert_eq!(mirrored.label, direct.label);
    assert!(mirrored.passed);
}

#[test]
fn forcing_needing_degree_four() {
    let spec = SystemSpec::new(Mat2::zero(), Mat2::from_ints([[0, 1], [0, 0]]), Vec2::new(Scalar::zero(), Scalar::one()));
    let r = run_report(&linsym::report::InputSystem { name: None, spec, d: None }, &verify_cfg()).unwrap();
    assert_eq!(r.label, Label::CommutingReducible);
    assert!(r.passed);
}

#[test]
fn irrational_eigenvalues_stay_exact() {
    // A has eigenvalues (1 +- sqrt 5)/2
    let r = report_for(r#"{"A": [["1","1"],["1","0"]], "B": [["0","1"],["0","0"]]}"#);
    assert_eq!(r.canonical.form.case_name(), "J1");
    assert!(r.passed);
    let r = report_for(r#"{"A": [["0","1"],["-2","0"]], "B": [["1","0"],["0","0"]]}"#);
    assert_eq!(r.label, Label::J2NoExtension);
    assert!(r.passed);
}
