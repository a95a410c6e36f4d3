use proptest::prelude::*;

use super::*;
use crate::exactcore::{qint, Matrix, UniPoly};

fn rf(n: &[i64], d: &[i64]) -> RatFunc {
    RatFunc::new(UniPoly::from_ints(n), UniPoly::from_ints(d)).unwrap()
}

fn c(v: i64) -> RatFunc {
    RatFunc::from_int(v)
}

fn qmat(rows: &[&[i64]]) -> RfMatrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| c(v)).collect()).collect()).unwrap()
}

fn mono(n: usize, target: usize, exp: &[u32], coeff: RatFunc) -> VerticalField {
    VerticalField::monomial(n, target, exp.to_vec(), coeff)
}

/// The system `y1' = 2a y1 + b y2, y2' = a y2`.
fn quadratic_example(a: RatFunc, b: RatFunc) -> SystemSpec {
    let two_a = a.scale(&qint(2));
    SystemSpec::new(Matrix::from_rows(vec![vec![two_a, b], vec![RatFunc::zero(), a]]).unwrap())
        .unwrap()
}

#[test]
fn euler_bracket_grades_by_degree() {
    let y = mono(2, 0, &[0, 2], c(1));
    let out = lie_bracket(&VerticalField::euler(2), &y).unwrap();
    assert_eq!(out, y);
    let cubic = mono(2, 1, &[2, 1], rf(&[1], &[0, 1]));
    let out = lie_bracket(&VerticalField::euler(2), &cubic).unwrap();
    assert_eq!(out, cubic.scale(&c(2)));
}

#[test]
fn linear_fields_anti_isomorphism() {
    let a = qmat(&[&[0, 1], &[0, 0]]);
    let b = qmat(&[&[0, 0], &[1, 0]]);
    let lhs = lie_bracket(&VerticalField::linear(&a).unwrap(), &VerticalField::linear(&b).unwrap())
        .unwrap();
    let comm = VerticalField::linear(&a.commutator(&b).unwrap()).unwrap();
    assert!(lhs.add(&comm).unwrap().is_zero());
}

#[test]
fn translation_bracket() {
    let d1 = mono(2, 0, &[0, 0], c(1));
    let y1d1 = mono(2, 0, &[1, 0], c(1));
    assert_eq!(lie_bracket(&d1, &y1d1).unwrap(), d1);
}

#[test]
fn bracket_dimension_mismatch() {
    assert!(lie_bracket(&VerticalField::euler(2), &VerticalField::euler(3)).is_err());
    let sys = SystemSpec::new(qmat(&[&[0]])).unwrap();
    assert!(bracket_with_x(&sys, &VerticalField::euler(2)).is_err());
}

#[test]
fn quadratic_symmetry_and_printed_typo() {
    let inv_x = rf(&[1], &[0, 1]);
    let sys = quadratic_example(inv_x, c(1));
    // y2^2 d/dy1 is a symmetry
    let good = mono(2, 0, &[0, 2], c(1));
    assert!(bracket_with_x(&sys, &good).unwrap().is_zero());
    // the field as printed, y1^2 d/dy2, is not; hand expansion of [v_A, y1^2 d/dy2]
    // with a = 1/x, b = 1 gives -b y1^2 d/dy1 + (3a y1^2 + 2b y1 y2) d/dy2
    let printed = mono(2, 1, &[2, 0], c(1));
    let residue = bracket_with_x(&sys, &printed).unwrap();
    let mut second = MvPoly::zero(2);
    second.add_term(vec![2, 0], rf(&[3], &[0, 1]));
    second.add_term(vec![1, 1], c(2));
    assert_eq!(residue.component(1), &second);
    assert_eq!(residue.component(0), &MvPoly::monomial(2, vec![2, 0], c(-1)));
}

#[test]
fn euler_field_is_universal_symmetry() {
    let sys = SystemSpec::new(
        Matrix::from_rows(vec![
            vec![rf(&[1, 2], &[-1, 0, 1]), rf(&[0, 3], &[1])],
            vec![rf(&[-2], &[0, 1]), rf(&[5], &[2, 1, 1])],
        ])
        .unwrap(),
    )
    .unwrap();
    assert!(bracket_with_x(&sys, &VerticalField::euler(2)).unwrap().is_zero());
}

#[test]
fn non_symmetry_hand_expansion() {
    // A = [[0,1],[0,0]], Y = y1 d/dy1: [X, Y] = [v_A, Y] = y2 d/dy1
    let sys = SystemSpec::new(qmat(&[&[0, 1], &[0, 0]])).unwrap();
    let y = mono(2, 0, &[1, 0], c(1));
    let out = bracket_with_x(&sys, &y).unwrap();
    assert_eq!(out, mono(2, 0, &[0, 1], c(1)));
}

#[test]
fn homogeneous_component_examples() {
    let mut p = MvPoly::one(2);
    p.add_term(vec![1, 0], c(1));
    p.add_term(vec![1, 1], c(1));
    let y = VerticalField::new(vec![p, MvPoly::zero(2)]).unwrap();
    let parts = homogeneous_components(&y);
    assert_eq!(parts.iter().map(|(d, _)| *d).collect::<Vec<_>>(), vec![0, 1, 2]);
    let sum = parts
        .iter()
        .fold(VerticalField::zero(2), |acc, (_, f)| acc.add(f).unwrap());
    assert_eq!(sum, y);

    let h = mono(2, 0, &[0, 2], c(1));
    assert_eq!(homogeneous_components(&h), vec![(2, h.clone())]);
    assert!(homogeneous_components(&VerticalField::zero(2)).is_empty());
}

#[test]
fn vertical_representative_examples() {
    let sys = SystemSpec::new(qmat(&[&[0, 1], &[0, 0]])).unwrap();
    let x = AmbientField::connection(&sys);
    assert!(vertical_representative(&x, &sys).unwrap().is_zero());

    let dx = AmbientField::new(MvPoly::one(2), VerticalField::zero(2)).unwrap();
    assert_eq!(
        vertical_representative(&dx, &sys).unwrap(),
        VerticalField::linear(sys.matrix()).unwrap().neg()
    );

    let y1dx = AmbientField::new(MvPoly::var(2, 0), VerticalField::zero(2)).unwrap();
    assert_eq!(
        vertical_representative(&y1dx, &sys).unwrap(),
        mono(2, 0, &[1, 1], c(-1))
    );
}

#[test]
fn maclaurin_examples() {
    let num = mono(2, 0, &[1, 0], c(1));
    let mut den = MvPoly::one(2);
    den.add_term(vec![0, 1], c(-1));
    let parts = maclaurin_truncate(&num, &den, 2).unwrap();
    assert_eq!(
        parts,
        vec![(1, num.clone()), (2, mono(2, 0, &[1, 1], c(1)))]
    );

    let mut p = MvPoly::one(2);
    p.add_term(vec![2, 1], rf(&[0, 1], &[1]));
    let y = VerticalField::new(vec![p, MvPoly::var(2, 1)]).unwrap();
    assert_eq!(
        maclaurin_truncate(&y, &MvPoly::one(2), 5).unwrap(),
        homogeneous_components(&y)
    );
    assert_eq!(
        maclaurin_truncate(&y, &MvPoly::one(2), 1).unwrap(),
        homogeneous_components(&y.truncate(1))
    );

    assert_eq!(
        maclaurin_truncate(&num, &MvPoly::var(2, 0), 2),
        Err(Error::VanishingConstantTerm)
    );
}

#[test]
fn maclaurin_with_function_constant_term() {
    // 1 / (x - y1) = (1/x) (1 + y1/x + y1^2/x^2 + ...)
    let num = mono(1, 0, &[0], c(1));
    let mut den = MvPoly::constant(1, RatFunc::x());
    den.add_term(vec![1], c(-1));
    let parts = maclaurin_truncate(&num, &den, 2).unwrap();
    assert_eq!(parts.len(), 3);
    assert_eq!(parts[2].1, mono(1, 0, &[2], rf(&[1], &[0, 0, 0, 1])));
}

// --- property tests -------------------------------------------------------

fn small_ratfunc() -> impl Strategy<Value = RatFunc> {
    (
        prop::collection::vec(-3i64..=3, 1..3),
        prop::collection::vec(-3i64..=3, 1..3),
    )
        .prop_map(|(n, d)| {
            let den = UniPoly::from_ints(&d);
            let den = if den.is_zero() { UniPoly::one() } else { den };
            RatFunc::new(UniPoly::from_ints(&n), den).unwrap()
        })
}

fn homogeneous_field(n: usize, deg: u32) -> impl Strategy<Value = VerticalField> {
    prop::collection::vec(
        (0..n, prop::collection::vec(0u32..=deg, n), small_ratfunc()),
        0..4,
    )
    .prop_map(move |terms| {
        let mut comps = vec![MvPoly::zero(n); n];
        for (target, mut exp, coeff) in terms {
            // project the random exponent onto total degree `deg`
            let mut total: u32 = exp.iter().sum();
            let mut i = 0;
            while total > deg {
                if exp[i % n] > 0 {
                    exp[i % n] -= 1;
                    total -= 1;
                }
                i += 1;
            }
            exp[0] += deg - total;
            comps[target].add_term(exp, coeff);
        }
        VerticalField::new(comps).unwrap()
    })
}

fn const_matrix(n: usize) -> impl Strategy<Value = RfMatrix> {
    prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| {
        Matrix::new(n, n, v.into_iter().map(RatFunc::from_int).collect()).unwrap()
    })
}

fn rf_matrix(n: usize) -> impl Strategy<Value = RfMatrix> {
    prop::collection::vec(small_ratfunc(), n * n)
        .prop_map(move |v| Matrix::new(n, n, v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bracket_respects_grading(
        (r, y, s, z) in (0u32..3, 0u32..3).prop_flat_map(|(r, s)| {
            (Just(r), homogeneous_field(2, r), Just(s), homogeneous_field(2, s))
        })
    ) {
        let b = lie_bracket(&y, &z).unwrap();
        if r + s == 0 {
            prop_assert!(b.is_zero());
        } else {
            prop_assert!(b.is_homogeneous_of(r + s - 1));
        }
    }

    #[test]
    fn anti_isomorphism_on_linear_fields(a in const_matrix(3), b in const_matrix(3)) {
        let lhs = lie_bracket(&VerticalField::linear(&a).unwrap(), &VerticalField::linear(&b).unwrap()).unwrap();
        let rhs = VerticalField::linear(&a.commutator(&b).unwrap()).unwrap();
        prop_assert!(lhs.add(&rhs).unwrap().is_zero());
    }

    #[test]
    fn jacobi_identity(a in homogeneous_field(2, 1), b in homogeneous_field(2, 2), c in homogeneous_field(2, 0)) {
        let t1 = lie_bracket(&a, &lie_bracket(&b, &c).unwrap()).unwrap();
        let t2 = lie_bracket(&b, &lie_bracket(&c, &a).unwrap()).unwrap();
        let t3 = lie_bracket(&c, &lie_bracket(&a, &b).unwrap()).unwrap();
        prop_assert!(t1.add(&t2).unwrap().add(&t3).unwrap().is_zero());
    }

    #[test]
    fn bracket_with_x_is_additive_and_graded(
        m in rf_matrix(2),
        y in homogeneous_field(2, 1),
        z in homogeneous_field(2, 2),
    ) {
        let sys = SystemSpec::new(m).unwrap();
        let sum = y.add(&z).unwrap();
        let lhs = bracket_with_x(&sys, &sum).unwrap();
        let rhs = bracket_with_x(&sys, &y).unwrap().add(&bracket_with_x(&sys, &z).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        for (d, part) in homogeneous_components(&sum) {
            prop_assert_eq!(bracket_with_x(&sys, &part).unwrap(), lhs.homogeneous_part(d));
        }
    }
}
