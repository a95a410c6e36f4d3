//! Galois-group constraints derived from rational symmetries, stabilizer checks
//! for constant matrices, and the aggregated analysis report.
//!
//! The Galois group itself is never computed. Each constraint is an upper bound
//! licensed by a verified witness and carries a rigor tag saying whether a
//! stronger statement could have been missed.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactcore::{determinant, minpoly, qint, squarefree_decomposition, QMatrix, RatFunc};
use crate::expr_io::matrix_to_json;
use crate::lvhier::{field_to_coeffs, monomial_index};
use crate::ratsolve::{is_solution, rational_solution_basis, SolveOptions};
use crate::symclass::{
    best_classification, eigenring_from_basis, pick_evaluation_point, span_dimension,
    symmetry_basis, BestWitness, ClassKind, Classification, Eigenring, EigenringElement,
    SymmetryBasis,
};
use crate::system::SystemSpec;
use crate::vfields::{MvPoly, VerticalField};

/// Variable name used when printing characteristic polynomials.
pub const EIGEN_VAR: &str = "t";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ConstraintKind {
    /// The group fixes `count` independent vectors.
    FixesVectors { count: usize },
    /// Conjugate into block-diagonal matrices with these block sizes.
    BlockDiagonal { sizes: Vec<u32> },
    DiagonalTorus,
    Triangularizable,
    LiouvillianSolvable,
    AbelianSymmetryAlgebra { dim: usize },
}

/// How much the absence of a stronger constraint can be trusted. The emitted
/// constraint itself always follows from a verified witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rigor {
    /// Complete bases and an optimal witness: nothing stronger is available.
    ProvedFromWitness,
    /// Complete bases, but the witness came from a bounded combination search.
    HeuristicWitnessSearch,
    /// Some rational solve used non-rigorous bounds; bases may be incomplete.
    BoundsIncomplete,
}

/// Reference into the report data that justifies a constraint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum Witness {
    /// `degrees["0"].fields`, the rational solutions of the system.
    RationalSolutions { count: usize },
    /// `eigenring.best`, a combination of the eigenring basis.
    EigenringBest { coefficients: Vec<i64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisConstraint {
    pub kind: ConstraintKind,
    pub witness: Witness,
    pub rigor: Rigor,
    /// The witness exists if and only if the constraint holds.
    pub biconditional: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemEcho {
    pub n: usize,
    pub var: String,
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSummary {
    pub dimension: usize,
    pub complete: bool,
    /// Size of the Lie–Vessiot matrix.
    pub lv_size: usize,
    /// Components of each basis field.
    pub fields: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorSummary {
    pub factor: String,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationSummary {
    #[serde(flatten)]
    pub kind: ClassKind,
    pub charpoly_factors: Vec<FactorSummary>,
    pub distinct_eigenvalues: usize,
    pub eigenvalue_multiplicities: Vec<u32>,
    pub minpoly_degree: usize,
    pub irrational_eigenvalues: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementSummary {
    pub matrix: Vec<Vec<String>>,
    pub charpoly: String,
    pub classification: ClassificationSummary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BestSummary {
    pub element: ElementSummary,
    pub coefficients: Vec<i64>,
    pub heuristic: bool,
    pub budget: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenringSummary {
    pub dimension: usize,
    pub complete: bool,
    pub elements: Vec<ElementSummary>,
    pub best: BestSummary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBrief {
    pub dimension: usize,
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub eigenring_dimension: usize,
    pub best_kind: String,
    /// Every rational solve used rigorous bounds.
    pub complete: bool,
    /// Keys `degree_0`, `degree_1`, ...
    #[serde(flatten)]
    pub degrees: BTreeMap<String, DegreeBrief>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisReport {
    pub system: SystemEcho,
    pub evaluation_point: String,
    pub max_degree: u32,
    /// Keyed by the decimal degree.
    pub degrees: BTreeMap<String, DegreeSummary>,
    pub eigenring: EigenringSummary,
    pub constraints: Vec<GaloisConstraint>,
    pub notes: Vec<String>,
    pub summary: ReportSummary,
}

/// Report options beyond the rational-solver bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    pub solve: SolveOptions,
    pub budget: u32,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            solve: SolveOptions::default(),
            budget: 3,
        }
    }
}

/// Does `sigma` map the constant field `y0` to itself, `P_i(sigma y) = sum_j sigma_ij P_j(y)`?
pub fn stabilizer_check(sigma: &QMatrix, y0: &VerticalField) -> Result<bool> {
    let n = sigma.ensure_square()?;
    if n != y0.n() {
        return Err(Error::DimensionMismatch {
            expected: y0.n(),
            found: n,
        });
    }
    if !y0.is_x_free() {
        return Err(Error::NonConstantCoefficient);
    }
    if determinant(sigma)? == qint(0) {
        return Err(Error::SingularMatrix);
    }
    let rf = |c: &crate::BigRational| RatFunc::constant(c.clone());
    let images: Vec<MvPoly> = (0..n)
        .map(|i| MvPoly::linear(&sigma.row(i).iter().map(rf).collect::<Vec<_>>()))
        .collect();
    Ok((0..n).all(|i| {
        let lhs = y0.component(i).substitute(&images);
        let rhs = (0..n).fold(MvPoly::zero(n), |acc, j| {
            acc.add(&y0.component(j).scale_q(sigma.get(i, j)))
        });
        lhs == rhs
    }))
}

/// Constraints from the rational solutions (degree-0 symmetries).
pub fn constraints_from_degree0(basis: &SymmetryBasis) -> Vec<GaloisConstraint> {
    if basis.degree != 0 || basis.dimension == 0 {
        return Vec::new();
    }
    vec![GaloisConstraint {
        kind: ConstraintKind::FixesVectors {
            count: basis.dimension,
        },
        witness: Witness::RationalSolutions {
            count: basis.dimension,
        },
        rigor: if basis.complete {
            Rigor::ProvedFromWitness
        } else {
            Rigor::BoundsIncomplete
        },
        biconditional: false,
    }]
}

/// d'Alembert reduction note for `s` rational solutions of an order-`n` system.
pub fn dalembert_note(s: usize, n: usize) -> Option<String> {
    match s {
        0 => None,
        s if s >= n => Some(format!(
            "d'Alembert: {s} independent rational solutions give a rational fundamental matrix; \
             the system reduces completely by a rational gauge transformation"
        )),
        s => Some(format!(
            "d'Alembert: order reducible by {s} via gauge transformation (from {n} to {})",
            n - s
        )),
    }
}

/// Constraints from the eigenvalue structure of one eigenring element.
pub fn constraints_from_eigenring(best: &EigenringElement, coefficients: &[i64]) -> Vec<GaloisConstraint> {
    let n = best.b.rows();
    let cl = &best.classification;
    let rigor = if matches!(cl.kind, ClassKind::CompleteDecomposer) {
        Rigor::ProvedFromWitness
    } else {
        Rigor::HeuristicWitnessSearch
    };
    let make = |kind, biconditional| GaloisConstraint {
        kind,
        witness: Witness::EigenringBest {
            coefficients: coefficients.to_vec(),
        },
        rigor,
        biconditional,
    };
    let blocks = |m: &[u32]| ConstraintKind::BlockDiagonal { sizes: m.to_vec() };
    match &cl.kind {
        ClassKind::Trivial | ClassKind::Uninformative => Vec::new(),
        ClassKind::CompleteDecomposer => vec![
            make(ConstraintKind::DiagonalTorus, true),
            make(ConstraintKind::AbelianSymmetryAlgebra { dim: n }, false),
            make(ConstraintKind::LiouvillianSolvable, false),
        ],
        ClassKind::Decomposer { multiplicities } => vec![make(blocks(multiplicities), true)],
        ClassKind::DecomposerAndSolver { multiplicities } => vec![
            make(blocks(multiplicities), true),
            make(ConstraintKind::Triangularizable, false),
            make(ConstraintKind::LiouvillianSolvable, false),
        ],
        ClassKind::Solver => vec![
            make(ConstraintKind::Triangularizable, false),
            make(ConstraintKind::LiouvillianSolvable, false),
        ],
    }
}

/// Run every analysis up to `max_degree` and assemble the report.
pub fn build_report(system: &SystemSpec, max_degree: u32, opts: &ReportOptions) -> Result<GaloisReport> {
    let n = system.n();
    let var = system.var();
    // degree 1 is always needed for the eigenring
    let top = max_degree.max(1);
    let bases: Vec<SymmetryBasis> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..=top)
            .map(|m| scope.spawn(move || symmetry_basis(system, m, &opts.solve)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("symmetry worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?;

    let direct = rational_solution_basis(system.matrix(), &opts.solve)?;
    if direct.dimension != bases[0].dimension {
        return Err(Error::Invariant(format!(
            "degree-0 symmetries ({}) differ from rational solutions ({})",
            bases[0].dimension, direct.dimension
        )));
    }

    let ring = eigenring_from_basis(system, &bases[1])?;
    let best = best_classification(&ring, system, opts.budget)?;
    let complete = bases.iter().all(|b| b.complete);

    let mut constraints = constraints_from_degree0(&bases[0]);
    constraints.extend(constraints_from_eigenring(&best.element, &best.coefficients));
    if !complete {
        for c in &mut constraints {
            c.rigor = Rigor::BoundsIncomplete;
        }
    }
    verify_witnesses(system, &bases[0], &ring, &best, &constraints)?;

    let mut notes = Vec::new();
    notes.extend(dalembert_note(bases[0].dimension, n));
    for b in &bases {
        if !b.complete {
            notes.push(format!(
                "degree {}: non-rigorous pole or degree bounds were used; the basis may be incomplete",
                b.degree
            ));
        }
    }
    if best.element.classification.irrational_eigenvalues {
        notes.push(
            "witness has irrational eigenvalues: block sizes refer to a conjugation over the \
             algebraic closure"
                .into(),
        );
    }
    notes.push(format!(
        "witness found by a bounded search over eigenring combinations (budget {})",
        opts.budget
    ));
    if let Some(b2) = bases.get(2) {
        notes.extend(quadratic_family_note(b2)?);
    }

    let degrees: BTreeMap<String, DegreeSummary> = bases
        .iter()
        .filter(|b| b.degree <= max_degree)
        .map(|b| (b.degree.to_string(), degree_summary(b, n, var)))
        .collect();
    let summary = ReportSummary {
        eigenring_dimension: ring.dimension(),
        best_kind: kind_name(&best.element.classification.kind).into(),
        complete,
        degrees: degrees
            .iter()
            .map(|(k, d)| {
                (
                    format!("degree_{k}"),
                    DegreeBrief {
                        dimension: d.dimension,
                        complete: d.complete,
                    },
                )
            })
            .collect(),
    };

    Ok(GaloisReport {
        system: SystemEcho {
            n,
            var: var.to_string(),
            a: string_rows(&matrix_to_json(system.matrix(), var)),
        },
        evaluation_point: pick_evaluation_point(system).to_string(),
        max_degree,
        degrees,
        eigenring: eigenring_summary(&ring, &best, opts.budget, var),
        constraints,
        notes,
        summary,
    })
}

pub fn degree_summary(b: &SymmetryBasis, n: usize, var: &str) -> DegreeSummary {
    DegreeSummary {
        dimension: b.dimension,
        complete: b.complete,
        lv_size: n * monomial_index(n, b.degree).len(),
        fields: b.fields.iter().map(|f| f.to_text(var)).collect(),
    }
}

pub fn eigenring_summary(ring: &Eigenring, best: &BestWitness, budget: u32, var: &str) -> EigenringSummary {
    EigenringSummary {
        dimension: ring.dimension(),
        complete: ring.complete,
        elements: ring.elements.iter().map(|e| element_summary(e, var)).collect(),
        best: BestSummary {
            element: element_summary(&best.element, var),
            coefficients: best.coefficients.clone(),
            heuristic: best.heuristic,
            budget,
        },
    }
}

pub fn kind_name(kind: &ClassKind) -> &'static str {
    match kind {
        ClassKind::Trivial => "trivial",
        ClassKind::CompleteDecomposer => "complete_decomposer",
        ClassKind::DecomposerAndSolver { .. } => "decomposer_and_solver",
        ClassKind::Decomposer { .. } => "decomposer",
        ClassKind::Solver => "solver",
        ClassKind::Uninformative => "uninformative",
    }
}

fn string_rows(v: &serde_json::Value) -> Vec<Vec<String>> {
    serde_json::from_value(v.clone()).expect("rows of strings")
}

pub fn element_summary(e: &EigenringElement, var: &str) -> ElementSummary {
    ElementSummary {
        matrix: string_rows(&matrix_to_json(&e.b, var)),
        charpoly: e.charpoly.to_text(EIGEN_VAR),
        classification: classification_summary(&e.classification),
    }
}

pub fn classification_summary(c: &Classification) -> ClassificationSummary {
    ClassificationSummary {
        kind: c.kind.clone(),
        charpoly_factors: c
            .charpoly_factors
            .iter()
            .map(|(f, m)| FactorSummary {
                factor: f.to_text(EIGEN_VAR),
                multiplicity: *m,
            })
            .collect(),
        distinct_eigenvalues: c.distinct_eigenvalues,
        eigenvalue_multiplicities: c.multiplicities.clone(),
        minpoly_degree: c.minpoly_degree,
        irrational_eigenvalues: c.irrational_eigenvalues,
    }
}

/// Re-derive every constraint's justification from the witness data.
fn verify_witnesses(
    system: &SystemSpec,
    degree0: &SymmetryBasis,
    ring: &Eigenring,
    best: &BestWitness,
    constraints: &[GaloisConstraint],
) -> Result<()> {
    let fail = |what: &str| Err(Error::Invariant(format!("constraint witness fails: {what}")));
    for c in constraints {
        match (&c.witness, &c.kind) {
            (Witness::RationalSolutions { count }, ConstraintKind::FixesVectors { count: k }) => {
                if count != k || *count != degree0.dimension {
                    return fail("solution count");
                }
                for v in &degree0.solve.vectors {
                    if !is_solution(system.matrix(), v)? {
                        return fail("rational solution does not satisfy y' = Ay");
                    }
                }
            }
            (Witness::EigenringBest { coefficients }, kind) => {
                if coefficients.len() != ring.dimension() || *coefficients != best.coefficients {
                    return fail("witness coefficients");
                }
                let b = &best.element.b;
                let chi = &best.element.charpoly;
                let distinct: usize = squarefree_decomposition(chi)?
                    .factors
                    .iter()
                    .map(|(f, _)| f.deg())
                    .sum();
                let x0 = pick_evaluation_point(system);
                let non_derogatory = minpoly(&b.eval(&x0)?)?.deg() == chi.deg();
                let ok = match kind {
                    ConstraintKind::BlockDiagonal { .. } => distinct >= 2,
                    ConstraintKind::DiagonalTorus | ConstraintKind::AbelianSymmetryAlgebra { .. } => {
                        distinct == system.n()
                    }
                    ConstraintKind::Triangularizable => non_derogatory,
                    ConstraintKind::LiouvillianSolvable => non_derogatory || distinct == system.n(),
                    ConstraintKind::FixesVectors { .. } => false,
                };
                if !ok || b.derivative() != system.matrix().commutator(b)? {
                    return fail("eigenring witness");
                }
            }
            _ => return fail("witness kind"),
        }
    }
    Ok(())
}

/// Recognize `y2^2 d/dy1` among the degree-2 symmetries of a 2x2 system and
/// cross-check the stabilizer family it forces.
fn quadratic_family_note(basis: &SymmetryBasis) -> Result<Option<String>> {
    if basis.degree != 2 || basis.fields.first().map_or(true, |f| f.n() != 2) {
        return Ok(None);
    }
    let target = quadratic_field();
    let index = monomial_index(2, 2);
    let mut vectors = basis
        .fields
        .iter()
        .map(|f| field_to_coeffs(f, &index))
        .collect::<Result<Vec<_>>>()?;
    let before = span_dimension(&vectors);
    vectors.push(field_to_coeffs(&target, &index)?);
    if span_dimension(&vectors) != before {
        return Ok(None);
    }
    for (l, m) in [(2, 0), (3, 5), (1, -1)] {
        if !stabilizer_check(&quadratic_family_member(l, m), &target)? {
            return Err(Error::Invariant("stabilizer family member rejected".into()));
        }
    }
    if stabilizer_check(&qmatrix(&[[1, 0], [1, 1]]), &target)? {
        return Err(Error::Invariant("lower-triangular matrix accepted".into()));
    }
    Ok(Some(
        "degree-2 symmetry y2^2 d/dy1: every Galois matrix fixes it, so the group lies in \
         {[[l^2, m], [0, l]] : l != 0}"
            .into(),
    ))
}

/// `y2^2 d/dy1`.
pub fn quadratic_field() -> VerticalField {
    VerticalField::monomial(2, 0, vec![0, 2], RatFunc::one())
}

/// `[[l^2, m], [0, l]]`.
pub fn quadratic_family_member(l: i64, m: i64) -> QMatrix {
    qmatrix(&[[l * l, m], [0, l]])
}

fn qmatrix<const N: usize>(rows: &[[i64; N]; N]) -> QMatrix {
    QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| qint(v)).collect()).collect())
        .expect("square")
}

#[cfg(test)]
mod tests;
