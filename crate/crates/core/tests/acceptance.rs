//! Acceptance criteria, one PASS/FAIL line each. Every check is exact unless a
//! wall-clock limit is stated; limits are pinned below.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symgal_core::exactcore::{nullspace, qint, Matrix, QMatrix, RatFunc, RfMatrix, UniPoly};
use symgal_core::expr_io::{parse_system, serialize_report};
use symgal_core::galois_report::{
    build_report, quadratic_family_member, stabilizer_check, ConstraintKind, ReportOptions,
};
use symgal_core::lvhier::{build_lv_matrix, coeffs_to_field, field_to_coeffs, monomial_index};
use symgal_core::ratsolve::{is_solution, rational_solution_basis, SolveOptions};
use symgal_core::symclass::{best_classification, eigenring, symmetry_basis, ClassKind};
use symgal_core::vfields::bracket_with_x;
use symgal_core::{BigRational, SystemSpec, VerticalField};

const SEED: u64 = 0x5eed_0001;
const SUITE_SIZE: usize = 200;
const VECTORS_PER_SYSTEM: usize = 5;
const BRACKET_LIMIT: Duration = Duration::from_secs(60);
const NAMED_LIMIT: Duration = Duration::from_secs(5);
const FIXTURE_LIMIT: Duration = Duration::from_secs(10);
const FIXTURE_MAX_DEGREE: u32 = 3;

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn rf(n: &[i64], d: &[i64]) -> RatFunc {
    RatFunc::new(UniPoly::from_ints(n), UniPoly::from_ints(d)).unwrap()
}

fn c(v: i64) -> RatFunc {
    RatFunc::from_int(v)
}

fn sys(rows: Vec<Vec<RatFunc>>) -> SystemSpec {
    SystemSpec::new(Matrix::from_rows(rows).unwrap()).unwrap()
}

fn poly(rng: &mut ChaCha8Rng, max_deg: usize) -> UniPoly {
    let deg = rng.gen_range(0..=max_deg);
    UniPoly::from_ints(&(0..=deg).map(|_| rng.gen_range(-3..=3)).collect::<Vec<_>>())
}

/// Numerator and denominator of degree at most 2 with coefficients in [-3, 3].
fn random_entry(rng: &mut ChaCha8Rng) -> RatFunc {
    let num = poly(rng, 2);
    let mut den = poly(rng, 2);
    while den.is_zero() {
        den = poly(rng, 2);
    }
    RatFunc::new(num, den).unwrap()
}

fn random_suite() -> Vec<SystemSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..SUITE_SIZE)
        .map(|_| {
            let n = rng.gen_range(2..=3);
            let entries = (0..n * n).map(|_| random_entry(&mut rng)).collect();
            SystemSpec::new(Matrix::new(n, n, entries).unwrap()).unwrap()
        })
        .collect()
}

/// `count` vectors spanning the same Q-space? Decided exactly: a relation among
/// sampled values is found, then checked as an identity of rational functions.
fn in_span(basis: &[Vec<RatFunc>], target: &[RatFunc]) -> bool {
    let points: Vec<BigRational> = (0..)
        .map(qint)
        .filter(|x| basis.iter().chain([&target.to_vec()]).flatten().all(|e| e.eval(x).is_some()))
        .take(16)
        .collect();
    let sample = |v: &[RatFunc]| -> Vec<BigRational> {
        points.iter().flat_map(|x| v.iter().map(move |e| e.eval(x).unwrap())).collect()
    };
    // columns are vectors; a kernel element with nonzero last entry expresses the target
    let cols: Vec<Vec<BigRational>> = basis.iter().map(|v| sample(v)).chain([sample(target)]).collect();
    let rows = cols[0].len();
    let m = QMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone());
    nullspace(&m).iter().any(|k| {
        let last = k.last().unwrap().clone();
        if last == qint(0) {
            return false;
        }
        (0..target.len()).all(|i| {
            let combo = basis.iter().zip(k).fold(RatFunc::zero(), |acc, (v, a)| &acc + &v[i].scale(a));
            &combo + &target[i].scale(&last) == RatFunc::zero()
        })
    })
}

fn criterion_1(suite: &[SystemSpec]) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let mut checks = 0;
    for (k, s) in suite.iter().enumerate() {
        for m in 1..=3 {
            let lv = build_lv_matrix(s, m);
            for _ in 0..VECTORS_PER_SYSTEM {
                let coeffs: Vec<RatFunc> = (0..lv.size()).map(|_| random_entry(&mut rng)).collect();
                let ac = lv.matrix.mul_vec(&coeffs).unwrap();
                let lhs: Vec<RatFunc> = coeffs.iter().zip(&ac).map(|(c, a)| &c.derivative() - a).collect();
                let field = coeffs_to_field(&coeffs, &lv.index).unwrap();
                let rhs = field_to_coeffs(&bracket_with_x(s, &field).unwrap(), &lv.index).unwrap();
                check(lhs == rhs, format!("system {k}, m = {m}: dc/dx - A_m c differs from the bracket"))?;
                checks += 1;
            }
        }
    }
    let t = start.elapsed();
    check(t < BRACKET_LIMIT, format!("took {t:.1?}, limit {BRACKET_LIMIT:?}"))?;
    Ok(format!("{} systems, {checks} exact bracket identities, {t:.1?} (limit {BRACKET_LIMIT:?})", suite.len()))
}

fn criterion_2() -> Outcome {
    let y22 = VerticalField::monomial(2, 0, vec![0, 2], RatFunc::one());
    // the printed y1^2 d/dy2 is not a symmetry: an oracle-detected typo in the source example
    let y11 = VerticalField::monomial(2, 1, vec![2, 0], RatFunc::one());
    let idx = monomial_index(2, 2);
    let target = field_to_coeffs(&y22, &idx).unwrap();
    let cases = [(c(0), c(1)), (rf(&[1], &[0, 1]), c(1)), (rf(&[1], &[0, 1]), rf(&[0, 1], &[1]))];
    for (a, b) in cases {
        let s = sys(vec![vec![&a + &a, b], vec![c(0), a.clone()]]);
        check(bracket_with_x(&s, &y22).unwrap().is_zero(), "y2^2 d/dy1 fails the bracket")?;
        check(!bracket_with_x(&s, &y11).unwrap().is_zero(), "y1^2 d/dy2 unexpectedly passes")?;
        let basis = symmetry_basis(&s, 2, &SolveOptions::default()).unwrap();
        let vecs: Vec<Vec<RatFunc>> =
            basis.fields.iter().map(|f| field_to_coeffs(f, &idx).unwrap()).collect();
        check(in_span(&vecs, &target), "y2^2 d/dy1 missing from the degree-2 basis")?;
    }
    for (l, m) in [(2, 0), (3, 5), (1, -1)] {
        check(stabilizer_check(&quadratic_family_member(l, m), &y22).unwrap(), format!("({l},{m}) rejected"))?;
    }
    let lower = QMatrix::from_rows(vec![vec![qint(1), qint(0)], vec![qint(1), qint(1)]]).unwrap();
    check(!stabilizer_check(&lower, &y22).unwrap(), "[[1,0],[1,1]] accepted")?;
    Ok("y2^2 d/dy1 in all three degree-2 bases; stabilizer family accepted, [[1,0],[1,1]] rejected; \
        printed y1^2 d/dy2 fails the bracket (typo); exact"
        .into())
}

fn criterion_3_and_4(suite: &[SystemSpec]) -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut c3: Outcome = Ok(String::new());
    let mut c4: Outcome = Ok(String::new());
    let opts = SolveOptions::default();
    for (k, s) in suite.iter().enumerate() {
        if c3.is_ok() {
            let idx = monomial_index(s.n(), 1);
            let euler = field_to_coeffs(&VerticalField::euler(s.n()), &idx).unwrap();
            c3 = symmetry_basis(s, 1, &opts)
                .map_err(|e| format!("system {k}: {e}"))
                .and_then(|b| {
                    let vecs: Vec<Vec<RatFunc>> =
                        b.fields.iter().map(|f| field_to_coeffs(f, &idx).unwrap()).collect();
                    check(in_span(&vecs, &euler), format!("system {k}: Euler field not in span"))
                        .map(|_| String::new())
                });
        }
        if c4.is_ok() {
            c4 = (|| {
                let sym0 = symmetry_basis(s, 0, &opts).map_err(|e| e.to_string())?;
                let sols = rational_solution_basis(s.matrix(), &opts).map_err(|e| e.to_string())?;
                check(sym0.dimension == sols.dimension, format!("system {k}: {} vs {}", sym0.dimension, sols.dimension))?;
                Ok(String::new())
            })();
        }
    }
    let t = start.elapsed();
    let tag = |o: Outcome, what: &str| o.map(|_| format!("{} systems: {what}; exact; {t:.1?}", suite.len()));
    (
        tag(c3, "Euler field in the degree-1 span of every system"),
        tag(c4, "dim sym^0 equals the rational solution dimension on every system"),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let s = sys(vec![vec![c(0), c(1)], vec![rf(&[2], &[0, 0, 1]), c(0)]]);
    let opts = SolveOptions::default();
    let sols = rational_solution_basis(s.matrix(), &opts).map_err(|e| e.to_string())?;
    check(sols.dimension == 2, format!("solution dimension {}", sols.dimension))?;
    let closed = [vec![rf(&[0, 0, 1], &[1]), rf(&[0, 2], &[1])], vec![rf(&[1], &[0, 1]), rf(&[-1], &[0, 0, 1])]];
    for v in &closed {
        check(is_solution(s.matrix(), v).unwrap(), "closed form is not a solution")?;
        check(in_span(&sols.vectors, v), "closed form outside the computed span")?;
    }
    for v in &sols.vectors {
        check(in_span(&closed, v), "computed solution outside the closed-form span")?;
    }
    let ring = eigenring(&s, &opts).map_err(|e| e.to_string())?;
    check(ring.dimension() == 4, format!("eigenring dimension {}", ring.dimension()))?;
    let best = best_classification(&ring, &s, 3).map_err(|e| e.to_string())?;
    check(best.element.classification.kind == ClassKind::CompleteDecomposer, "best is not a complete decomposer")?;
    let report = build_report(&s, 1, &ReportOptions::default()).map_err(|e| e.to_string())?;
    check(
        report.constraints.iter().any(|c| c.kind == ConstraintKind::DiagonalTorus),
        "no diagonal_torus constraint",
    )?;
    let t = start.elapsed();
    check(t < NAMED_LIMIT, format!("took {t:.1?}"))?;
    Ok(format!("solutions span {{(x^2,2x),(1/x,-1/x^2)}}, eigenring 4, complete decomposer, diagonal_torus; exact; {t:.1?} (limit {NAMED_LIMIT:?})"))
}

fn criterion_6() -> Outcome {
    let s = sys(vec![vec![c(0), c(1)], vec![c(0), c(0)]]);
    let ring = eigenring(&s, &SolveOptions::default()).map_err(|e| e.to_string())?;
    check(ring.dimension() == 4, format!("eigenring dimension {}", ring.dimension()))?;
    let w: RfMatrix = Matrix::from_rows(vec![vec![c(0), rf(&[0, 1], &[1])], vec![c(0), c(1)]]).unwrap();
    let vecs: Vec<Vec<RatFunc>> = ring.elements.iter().map(|e| e.b.entries().to_vec()).collect();
    check(in_span(&vecs, w.entries()), "[[0,x],[0,1]] not in the eigenring")?;
    let report = build_report(&s, 1, &ReportOptions::default()).map_err(|e| e.to_string())?;
    check(report.summary.best_kind == "complete_decomposer", "best witness is not a complete decomposer")?;
    check(
        report.constraints.iter().any(|c| c.kind == ConstraintKind::DiagonalTorus),
        "no complete-decomposer constraint",
    )?;
    Ok("eigenring 4 containing [[0,x],[0,1]]; diagonal_torus emitted; exact".into())
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let s = sys(vec![vec![c(0), c(1)], vec![rf(&[0, 1], &[1]), c(0)]]);
    let opts = SolveOptions::default();
    let sym0 = symmetry_basis(&s, 0, &opts).map_err(|e| e.to_string())?;
    check(sym0.dimension == 0, format!("sym^0 dimension {}", sym0.dimension))?;
    check(!sym0.solve.infinity.rigorous && !sym0.complete, "not flagged non-rigorous at infinity")?;
    let ring = eigenring(&s, &opts).map_err(|e| e.to_string())?;
    check(ring.dimension() == 1, format!("eigenring dimension {}", ring.dimension()))?;
    check(!ring.solve.infinity.rigorous, "eigenring not flagged non-rigorous at infinity")?;
    let t = start.elapsed();
    check(t < NAMED_LIMIT, format!("took {t:.1?}"))?;
    Ok(format!("sym^0 = 0, eigenring = 1, non-rigorous at infinity; exact; {t:.1?} (limit {NAMED_LIMIT:?})"))
}

fn criterion_8() -> Outcome {
    let s2 = sys(vec![vec![c(0), c(1)], vec![c(1), c(0)]]);
    let s3 = sys(vec![vec![c(1), c(0), c(0)], vec![c(0), c(1), c(0)], vec![c(0), c(0), c(1)]]);
    let a = build_lv_matrix(&s2, 2);
    let b = build_lv_matrix(&s3, 2);
    check(a.size() == 6 && a.matrix.rows() == 6 && a.matrix.cols() == 6, "n=2, m=2 is not 6x6")?;
    check(b.index.len() == 6 && b.size() == 18 && b.matrix.rows() == 18, "n=3, m=2 is not 18x18")?;
    Ok("(n=2,m=2) 6x6, (n=3,m=2) 18x18 with N = 6; exact".into())
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    for _ in 0..50 {
        let a = random_entry(&mut rng);
        let s = SystemSpec::new(Matrix::new(1, 1, vec![a.clone()]).unwrap()).unwrap();
        for m in 0..=6u32 {
            let lv = build_lv_matrix(&s, m);
            check(lv.size() == 1, "scalar system gives a non-scalar matrix")?;
            check(lv.matrix.get(0, 0) == &a.scale(&qint(1 - m as i64)), format!("m = {m}: entry differs from (1-m)a"))?;
        }
    }
    Ok("50 random a(x), m = 0..6: A_m = (1-m) a(x); exact".into())
}

fn criterion_10() -> Outcome {
    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", "systems"].iter().collect();
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    check(!paths.is_empty(), "no fixtures")?;
    let mut slowest = Duration::ZERO;
    for p in &paths {
        let text = std::fs::read_to_string(p).unwrap();
        let start = Instant::now();
        let s = parse_system(&text).map_err(|e| format!("{}: {e}", p.display()))?;
        check(s.n() <= 3, format!("{}: n > 3", p.display()))?;
        let r = build_report(&s, FIXTURE_MAX_DEGREE, &ReportOptions::default())
            .map_err(|e| format!("{}: {e}", p.display()))?;
        let _ = serialize_report(&r);
        let t = start.elapsed();
        check(t < FIXTURE_LIMIT, format!("{}: {t:.1?}", p.display()))?;
        slowest = slowest.max(t);
    }
    Ok(format!(
        "{} fixtures analyzed at max_degree {FIXTURE_MAX_DEGREE}; slowest {slowest:.2?} (limit {FIXTURE_LIMIT:?} each)",
        paths.len()
    ))
}

fn main() -> ExitCode {
    let suite = random_suite();
    let (c3, c4) = criterion_3_and_4(&suite);
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "bracket oracle", criterion_1(&suite)),
        (2, "quadratic example", criterion_2()),
        (3, "Euler field invariant", c3),
        (4, "degree 0 equals rational solutions", c4),
        (5, "Cauchy-Euler companion", criterion_5()),
        (6, "unipotent system", criterion_6()),
        (7, "Airy companion", criterion_7()),
        (8, "size law", criterion_8()),
        (9, "scalar law", criterion_9()),
        (10, "analyze fixtures", criterion_10()),
    ];
    let mut failed = 0;
    for (k, name, r) in &results {
        match r {
            Ok(detail) => println!("PASS criterion {k} ({name}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {k} ({name}): {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
