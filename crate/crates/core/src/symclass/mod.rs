//! Symmetry bases per degree, the eigenring, and the eigenvalue structure of
//! linear symmetries.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactcore::{
    charpoly, charpoly_coeffs, minpoly, rational_roots, squarefree_decomposition, QMatrix, RatFunc, RfMatrix,
    UniPoly,
};
use crate::lvhier::{build_lv_matrix, coeffs_to_field, coeffs_to_matrix};
use crate::ratsolve::{rational_solution_basis, SolutionBasis, SolveOptions};
use crate::system::SystemSpec;
use crate::vfields::{bracket_with_x, VerticalField};

/// Degree-`m` homogeneous polynomial symmetries found by the rational solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryBasis {
    pub degree: u32,
    pub fields: Vec<VerticalField>,
    pub dimension: usize,
    /// True when the underlying rational solve used only rigorous bounds.
    pub complete: bool,
    pub solve: SolutionBasis,
}

pub fn symmetry_basis(system: &SystemSpec, m: u32, opts: &SolveOptions) -> Result<SymmetryBasis> {
    let lv = build_lv_matrix(system, m);
    let solve = rational_solution_basis(&lv.matrix, opts)?;
    let fields = solve
        .vectors
        .iter()
        .map(|c| {
            let f = coeffs_to_field(c, &lv.index)?;
            if !bracket_with_x(system, &f)?.is_zero() {
                return Err(Error::Invariant(format!(
                    "degree-{m} basis field does not commute with X"
                )));
            }
            Ok(f)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SymmetryBasis {
        degree: m,
        dimension: fields.len(),
        complete: solve.complete,
        fields,
        solve,
    })
}

/// Eigenvalue structure of a linear symmetry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ClassKind {
    /// A constant multiple of the identity.
    Trivial,
    /// All eigenvalues distinct.
    CompleteDecomposer,
    /// At least two distinct eigenvalues and non-derogatory.
    DecomposerAndSolver { multiplicities: Vec<u32> },
    /// At least two distinct eigenvalues.
    Decomposer { multiplicities: Vec<u32> },
    /// One eigenvalue with a one-dimensional eigenspace.
    Solver,
    /// One eigenvalue, derogatory, yet not scalar: no constraint follows.
    Uninformative,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub kind: ClassKind,
    /// Squarefree decomposition of the (constant) characteristic polynomial.
    pub charpoly_factors: Vec<(UniPoly, u32)>,
    /// Number of distinct eigenvalues over the algebraic closure.
    pub distinct_eigenvalues: usize,
    /// Algebraic multiplicity of each distinct eigenvalue, descending.
    pub multiplicities: Vec<u32>,
    pub minpoly_degree: usize,
    /// Some eigenvalue is irrational, so block sizes refer to a conjugation over the
    /// algebraic closure.
    pub irrational_eigenvalues: bool,
}

impl Classification {
    pub fn is_decomposer(&self) -> bool {
        self.distinct_eigenvalues >= 2
    }

    pub fn is_complete_decomposer(&self) -> bool {
        self.is_decomposer() && self.multiplicities.iter().all(|&m| m == 1)
    }

    pub fn is_solver(&self) -> bool {
        self.minpoly_degree == self.multiplicities.iter().sum::<u32>() as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenringElement {
    pub b: RfMatrix,
    pub charpoly: UniPoly,
    pub classification: Classification,
}

pub fn pick_evaluation_point(system: &SystemSpec) -> BigRational {
    system.evaluation_point()
}

/// Characteristic polynomial of `B` over `Q(x)`, required to be constant.
pub fn constant_charpoly(b: &RfMatrix) -> Result<UniPoly> {
    let coeffs = charpoly_coeffs(b)?;
    let consts = coeffs
        .iter()
        .map(RatFunc::as_constant)
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| {
            let text: Vec<String> = coeffs.iter().map(|c| c.to_text("x")).collect();
            Error::NonConstantCharpoly(text.join(", "))
        })?;
    Ok(UniPoly::new(consts))
}

fn classify_values(chi: &UniPoly, b0: &QMatrix, scalar: bool) -> Result<Classification> {
    let sq = squarefree_decomposition(chi)?;
    let mut multiplicities: Vec<u32> = sq
        .factors
        .iter()
        .flat_map(|(f, m)| std::iter::repeat(*m).take(f.deg()))
        .collect();
    multiplicities.sort_unstable_by(|a, b| b.cmp(a));
    let distinct = multiplicities.len();
    let minpoly_degree = minpoly(b0)?.deg();
    // squarefree factors need not be irreducible: count their rational roots
    let mut irrational_eigenvalues = false;
    for (f, _) in &sq.factors {
        irrational_eigenvalues |= rational_roots(f)?.len() < f.deg();
    }
    let n = b0.rows();
    let solver = minpoly_degree == n;
    let kind = if scalar {
        ClassKind::Trivial
    } else if distinct == n && n >= 2 {
        ClassKind::CompleteDecomposer
    } else if distinct >= 2 && solver {
        ClassKind::DecomposerAndSolver {
            multiplicities: multiplicities.clone(),
        }
    } else if distinct >= 2 {
        ClassKind::Decomposer {
            multiplicities: multiplicities.clone(),
        }
    } else if solver {
        ClassKind::Solver
    } else {
        ClassKind::Uninformative
    };
    Ok(Classification {
        kind,
        charpoly_factors: sq.factors,
        distinct_eigenvalues: distinct,
        multiplicities,
        minpoly_degree,
        irrational_eigenvalues,
    })
}

fn is_constant_scalar(b: &RfMatrix) -> bool {
    b.is_scalar() && b.get(0, 0).is_constant()
}

/// Classify an eigenring element of `system` by its constant eigenvalue structure.
pub fn classify_linear(b: &RfMatrix, system: &SystemSpec) -> Result<EigenringElement> {
    let chi = constant_charpoly(b)?;
    let b0 = b.eval(&pick_evaluation_point(system))?;
    let classification = classify_values(&chi, &b0, is_constant_scalar(b))?;
    Ok(EigenringElement {
        b: b.clone(),
        charpoly: chi,
        classification,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eigenring {
    pub elements: Vec<EigenringElement>,
    pub complete: bool,
    pub solve: SolutionBasis,
}

impl Eigenring {
    pub fn dimension(&self) -> usize {
        self.elements.len()
    }
}

/// Rational solutions of `B' = A B - B A`, each verified and classified.
pub fn eigenring(system: &SystemSpec, opts: &SolveOptions) -> Result<Eigenring> {
    eigenring_from_basis(system, &symmetry_basis(system, 1, opts)?)
}

/// Eigenring read off an already computed degree-1 symmetry basis.
pub fn eigenring_from_basis(system: &SystemSpec, basis: &SymmetryBasis) -> Result<Eigenring> {
    if basis.degree != 1 {
        return Err(Error::Invariant(format!(
            "eigenring needs the degree-1 basis, got degree {}",
            basis.degree
        )));
    }
    let n = system.n();
    let a = system.matrix();
    let elements = basis
        .solve
        .vectors
        .iter()
        .map(|c| {
            let b = coeffs_to_matrix(c, n)?;
            if b.derivative() != a.commutator(&b)? {
                return Err(Error::Invariant("eigenring element fails B' = [A, B]".into()));
            }
            classify_linear(&b, system)
        })
        .collect::<Result<Vec<_>>>()?;
    let ring = Eigenring {
        elements,
        complete: basis.complete,
        solve: basis.solve.clone(),
    };
    if !contains_identity(&ring, n) {
        return Err(Error::Invariant("identity missing from the eigenring".into()));
    }
    Ok(ring)
}

fn contains_identity(ring: &Eigenring, n: usize) -> bool {
    let mut rows: Vec<Vec<RatFunc>> = ring.elements.iter().map(|e| e.b.entries().to_vec()).collect();
    let before = span_dimension(&rows);
    rows.push(RfMatrix::identity(n).entries().to_vec());
    span_dimension(&rows) == before
}

/// Dimension over `Q` of the span of rational-function vectors.
pub(crate) fn span_dimension(vectors: &[Vec<RatFunc>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    // clear denominators and read off polynomial coefficients
    let den = vectors
        .iter()
        .flatten()
        .fold(UniPoly::one(), |acc, e| acc.lcm(e.den()));
    let denf = RatFunc::from_poly(den);
    let polys: Vec<Vec<UniPoly>> = vectors
        .iter()
        .map(|v| v.iter().map(|e| (e * &denf).num().clone()).collect())
        .collect();
    let width = polys.iter().flatten().map(|p| p.coeffs().len()).max().unwrap_or(0).max(1);
    let rows: Vec<Vec<BigRational>> = polys
        .iter()
        .map(|v| v.iter().flat_map(|p| (0..width).map(|k| p.coeff(k))).collect())
        .collect();
    crate::exactcore::rank(&QMatrix::from_rows(rows).expect("rectangular"))
}

/// Result of the witness search: the best element found and its coefficients
/// on the eigenring basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestWitness {
    pub element: EigenringElement,
    pub coefficients: Vec<i64>,
    /// Always true: the search covers only a finite family of combinations.
    pub heuristic: bool,
}

/// Search basis elements and small integer combinations for the element with the
/// most distinct eigenvalues, preferring non-derogatory ones.
///
/// Candidates, in order: each basis element; each pair `a B_i + b B_j` with
/// `a, b` in `[-budget, budget]`; and the combinations `sum_i c_i B_i` with
/// `c_i = 1 + ((k + i) mod budget')`, `k < budget'`. The first candidate reaching the
/// best score wins.
pub fn best_classification(
    ring: &Eigenring,
    system: &SystemSpec,
    budget: u32,
) -> Result<BestWitness> {
    let elems = &ring.elements;
    if elems.is_empty() {
        return Err(Error::Invariant("empty eigenring".into()));
    }
    let n = system.n();
    let x0 = pick_evaluation_point(system);
    let values: Vec<QMatrix> = elems.iter().map(|e| e.b.eval(&x0)).collect::<Result<_>>()?;
    let dim = elems.len();
    let b = budget as i64;

    let mut candidates: Vec<Vec<i64>> = Vec::new();
    for i in 0..dim {
        let mut c = vec![0; dim];
        c[i] = 1;
        candidates.push(c);
    }
    for i in 0..dim {
        for j in i + 1..dim {
            for s in -b..=b {
                for t in -b..=b {
                    if s != 0 && t != 0 {
                        let mut c = vec![0; dim];
                        c[i] = s;
                        c[j] = t;
                        candidates.push(c);
                    }
                }
            }
        }
    }
    let width = b.max(1);
    for k in 0..width {
        candidates.push((0..dim as i64).map(|i| 1 + (k + i) % width).collect());
    }

    let score = |cl: &Classification| (cl.distinct_eigenvalues, cl.is_solver());
    let mut best: Option<(Vec<i64>, (usize, bool))> = None;
    for c in candidates {
        let m0 = combine_q(&values, &c, n);
        let chi = charpoly(&m0)?;
        let cl = classify_values(&chi, &m0, m0.is_scalar())?;
        let s = score(&cl);
        if best.as_ref().map_or(true, |(_, bs)| s > *bs) {
            best = Some((c, s));
            if s == (n, true) {
                break;
            }
        }
    }
    let (coefficients, _) = best.expect("at least one candidate");
    let combined = combine_rf(elems, &coefficients, n);
    Ok(BestWitness {
        element: classify_linear(&combined, system)?,
        coefficients,
        heuristic: true,
    })
}

fn combine_q(values: &[QMatrix], c: &[i64], n: usize) -> QMatrix {
    values.iter().zip(c).filter(|(_, &k)| k != 0).fold(QMatrix::zeros(n, n), |acc, (m, &k)| {
        acc.add(&m.scale(&BigRational::from_integer(k.into()))).expect("same shape")
    })
}

fn combine_rf(elems: &[EigenringElement], c: &[i64], n: usize) -> RfMatrix {
    elems.iter().zip(c).filter(|(_, &k)| k != 0).fold(RfMatrix::zeros(n, n), |acc, (e, &k)| {
        acc.add(&e.b.scale(&RatFunc::from_int(k))).expect("same shape")
    })
}
