use proptest::prelude::*;

use super::*;
use crate::exactcore::{Matrix, RfMatrix, UniPoly};
use crate::expr_io::{parse_report, parse_system, serialize_report};
use crate::vfields::bracket_with_x;

fn rf(n: &[i64], d: &[i64]) -> RatFunc {
    RatFunc::new(UniPoly::from_ints(n), UniPoly::from_ints(d)).unwrap()
}

fn c(v: i64) -> RatFunc {
    RatFunc::from_int(v)
}

fn sys(rows: Vec<Vec<RatFunc>>) -> SystemSpec {
    SystemSpec::new(Matrix::from_rows(rows).unwrap()).unwrap()
}

fn kinds(cs: &[GaloisConstraint]) -> Vec<ConstraintKind> {
    cs.iter().map(|c| c.kind.clone()).collect()
}

fn euler(n: usize) -> VerticalField {
    VerticalField::euler(n)
}

#[test]
fn quadratic_family_is_accepted() {
    let y = quadratic_field();
    for (l, m) in [(2, 0), (3, 5), (1, -1)] {
        assert!(stabilizer_check(&quadratic_family_member(l, m), &y).unwrap());
    }
    assert!(stabilizer_check(&qmatrix(&[[1, 0], [0, 1]]), &y).unwrap());
    // sigma_21 = 1 puts y1 into the image of y2
    assert!(!stabilizer_check(&qmatrix(&[[1, 0], [1, 1]]), &y).unwrap());
    // l^2 replaced by l fails the quadratic scaling
    assert!(!stabilizer_check(&qmatrix(&[[2, 0], [0, 2]]), &y).unwrap());
}

#[test]
fn stabilizer_errors() {
    let y = quadratic_field();
    assert_eq!(
        stabilizer_check(&qmatrix(&[[1, 1], [1, 1]]), &y),
        Err(Error::SingularMatrix)
    );
    let xdep = VerticalField::monomial(2, 0, vec![0, 2], rf(&[0, 1], &[1]));
    assert_eq!(
        stabilizer_check(&qmatrix(&[[1, 0], [0, 1]]), &xdep),
        Err(Error::NonConstantCoefficient)
    );
    assert!(matches!(
        stabilizer_check(&qmatrix(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]), &y),
        Err(Error::DimensionMismatch { .. })
    ));
}

proptest! {
    #[test]
    fn euler_field_is_fixed_by_every_invertible_matrix(
        e in prop::collection::vec(-5i64..=5, 9)
    ) {
        let sigma = QMatrix::from_rows(
            e.chunks(3).map(|r| r.iter().map(|&v| qint(v)).collect()).collect(),
        ).unwrap();
        prop_assume!(determinant(&sigma).unwrap() != qint(0));
        prop_assert!(stabilizer_check(&sigma, &euler(3)).unwrap());
    }

    #[test]
    fn identity_fixes_every_constant_field(
        coeffs in prop::collection::vec(-4i64..=4, 6)
    ) {
        // generic quadratic fields in two variables
        let monos = [vec![2, 0], vec![1, 1], vec![0, 2]];
        let comp = |k: usize| {
            monos.iter().enumerate().fold(MvPoly::zero(2), |acc, (i, e)| {
                acc.add(&MvPoly::monomial(2, e.clone(), RatFunc::from_int(coeffs[3 * k + i])))
            })
        };
        let y = VerticalField::new(vec![comp(0), comp(1)]).unwrap();
        prop_assert!(stabilizer_check(&qmatrix(&[[1, 0], [0, 1]]), &y).unwrap());
    }
}

#[test]
fn degree0_constraints() {
    let opts = SolveOptions::default();
    let airy = sys(vec![vec![c(0), c(1)], vec![rf(&[0, 1], &[1]), c(0)]]);
    assert!(constraints_from_degree0(&symmetry_basis(&airy, 0, &opts).unwrap()).is_empty());

    let ce = sys(vec![vec![c(0), c(1)], vec![rf(&[2], &[0, 0, 1]), c(0)]]);
    let cs = constraints_from_degree0(&symmetry_basis(&ce, 0, &opts).unwrap());
    assert_eq!(kinds(&cs), vec![ConstraintKind::FixesVectors { count: 2 }]);
    assert!(dalembert_note(2, 2).unwrap().contains("completely"));

    // y1' = y1/x, y2' = y2 has the single rational solution (x, 0)
    let one = sys(vec![vec![rf(&[1], &[0, 1]), c(0)], vec![c(0), c(1)]]);
    let cs = constraints_from_degree0(&symmetry_basis(&one, 0, &opts).unwrap());
    assert_eq!(kinds(&cs), vec![ConstraintKind::FixesVectors { count: 1 }]);
    assert!(dalembert_note(1, 2).unwrap().contains("reducible by 1"));
}

fn element(rows: Vec<Vec<RatFunc>>) -> EigenringElement {
    let b: RfMatrix = Matrix::from_rows(rows).unwrap();
    crate::symclass::classify_linear(&b, &sys(vec![vec![c(0); 2]; 2])).unwrap()
}

#[test]
fn eigenring_constraints_by_kind() {
    let complete = constraints_from_eigenring(&element(vec![vec![c(1), c(0)], vec![c(0), c(2)]]), &[1]);
    assert_eq!(
        kinds(&complete),
        vec![
            ConstraintKind::DiagonalTorus,
            ConstraintKind::AbelianSymmetryAlgebra { dim: 2 },
            ConstraintKind::LiouvillianSolvable
        ]
    );
    assert!(complete[0].biconditional && !complete[2].biconditional);
    assert!(complete.iter().all(|c| c.rigor == Rigor::ProvedFromWitness));

    let solver = constraints_from_eigenring(&element(vec![vec![c(0), c(1)], vec![c(0), c(0)]]), &[1]);
    assert_eq!(
        kinds(&solver),
        vec![ConstraintKind::Triangularizable, ConstraintKind::LiouvillianSolvable]
    );
    assert!(solver.iter().all(|c| c.rigor == Rigor::HeuristicWitnessSearch && !c.biconditional));

    let trivial = constraints_from_eigenring(&element(vec![vec![c(3), c(0)], vec![c(0), c(3)]]), &[1]);
    assert!(trivial.is_empty());
}

#[test]
fn airy_report() {
    let airy = sys(vec![vec![c(0), c(1)], vec![rf(&[0, 1], &[1]), c(0)]]);
    let r = build_report(&airy, 2, &ReportOptions::default()).unwrap();
    assert_eq!(r.degrees["0"].dimension, 0);
    assert_eq!(r.eigenring.dimension, 1);
    assert!(r.constraints.is_empty());
    assert_eq!(r.summary.best_kind, "trivial");
    assert!(!r.summary.complete);
    assert_eq!(r.degrees.len(), 3);
    assert_eq!(r.degrees["1"].dimension, 1, "Euler field only");
}

#[test]
fn nilpotent_report() {
    let s = sys(vec![vec![c(0), c(1)], vec![c(0), c(0)]]);
    let r = build_report(&s, 1, &ReportOptions::default()).unwrap();
    assert_eq!(r.summary.best_kind, "complete_decomposer");
    assert!(kinds(&r.constraints).contains(&ConstraintKind::DiagonalTorus));
    assert_eq!(r.summary.eigenring_dimension, 4);
    assert!(r.summary.degrees.contains_key("degree_1"));
}

#[test]
fn quadratic_example_report() {
    let s = sys(vec![
        vec![rf(&[2], &[0, 1]), c(1)],
        vec![c(0), rf(&[1], &[0, 1])],
    ]);
    let r = build_report(&s, 2, &ReportOptions::default()).unwrap();
    assert!(r.notes.iter().any(|n| n.contains("[[l^2, m], [0, l]]")));
    let basis = symmetry_basis(&s, 2, &SolveOptions::default()).unwrap();
    assert!(bracket_with_x(&s, &quadratic_field()).unwrap().is_zero());
    assert!(basis.dimension >= 1);
}

#[test]
fn report_round_trip() {
    let s = parse_system(r#"{"n":2,"A":[["0","1"],["2/x^2","0"]]}"#).unwrap();
    let r = build_report(&s, 1, &ReportOptions::default()).unwrap();
    let text = serialize_report(&r);
    assert!(text.contains("\"eigenring_dimension\": 4"));
    assert!(text.contains("\"degree_1\""));
    let back = parse_report(&text).unwrap();
    assert_eq!(back, r);
    assert_eq!(serialize_report(&back), text);
    assert!(matches!(parse_report("{}"), Err(Error::Document(_))));
}
