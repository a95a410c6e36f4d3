//! Rational solutions of `y' = M(x) y` over `Q(x)`.
//!
//! A rational solution is written `y = P / D` where `D` is a universal
//! denominator built from local pole bounds at the finite singularities and `P`
//! is a polynomial vector whose degree is bounded by the behaviour at infinity.
//! Substituting the ansatz gives a linear system over `Q` for the coefficients
//! of `P`, solved modulo word-size primes with exact verification. Every returned vector is
//! re-checked by exact substitution.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactcore::{
    charpoly, coprime_basis, integer_roots, modular_kernel, rational_roots, squarefree_decomposition,
    Matrix, QMatrix, RatFunc, RfMatrix, UniPoly,
};

/// A singular factor of the common denominator of `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularFactor {
    /// Monic squarefree factor: either linear or free of rational roots
    /// (not necessarily irreducible).
    pub factor: UniPoly,
    /// Largest multiplicity of `factor` in any entry denominator.
    pub pole_order: u32,
    /// Residue of `M` along `factor` with entries reduced modulo `factor`,
    /// present for simple poles.
    pub residue: Option<RfMatrix>,
    /// Integer eigenvalues of the residue at any root of `factor`.
    pub integer_exponents: Vec<BigInt>,
    /// Largest admissible pole order of a rational solution along `factor`.
    pub exponent_bound: u32,
    pub rigorous: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularityData {
    /// Monic least common multiple of the entry denominators.
    pub denominator: UniPoly,
    pub factors: Vec<SingularFactor>,
}

impl SingularityData {
    pub fn rigorous(&self) -> bool {
        self.factors.iter().all(|f| f.rigorous)
    }

    /// `prod factor^exponent_bound`.
    pub fn universal_denominator(&self) -> UniPoly {
        self.factors
            .iter()
            .fold(UniPoly::one(), |acc, f| &acc * &f.factor.pow(f.exponent_bound))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfinityBound {
    /// Bound on the degree of the polynomial numerators.
    pub degree: u32,
    pub rigorous: bool,
    /// Integer eigenvalues of `lim x M(x)` when that limit exists.
    pub integer_exponents: Vec<BigInt>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SolveOptions {
    /// Replaces the fallback pole bound of non-rigorous finite singularities.
    pub pole_bound: Option<u32>,
    /// Replaces the fallback allowance at infinity (added to `deg D`).
    pub inf_bound: Option<u32>,
    /// Abort when an intermediate integer exceeds this many bits.
    pub max_coeff_bits: Option<u64>,
}

/// Fixed ansatz `y = P / denominator` with `deg P <= degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ansatz {
    pub denominator: UniPoly,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionBasis {
    pub vectors: Vec<Vec<RatFunc>>,
    pub dimension: usize,
    /// True when every bound used was rigorous, so the basis spans all rational solutions.
    pub complete: bool,
    pub singularities: SingularityData,
    pub infinity: InfinityBound,
    pub ansatz: Ansatz,
}

/// Fallback pole bound for a factor where no rigorous analysis is available.
pub fn fallback_pole_bound(pole_order: u32, size: usize) -> u32 {
    pole_order * size as u32 + 4
}

/// Fallback numerator allowance at infinity, added to `deg D`.
pub fn fallback_inf_allowance(size: usize) -> u32 {
    2 * size as u32 + 8
}

/// Split the common denominator into singular factors and bound the pole order
/// of rational solutions along each of them.
pub fn analyze_singularities(m: &RfMatrix) -> Result<SingularityData> {
    analyze_with(m, None)
}

fn analyze_with(m: &RfMatrix, pole_override: Option<u32>) -> Result<SingularityData> {
    let size = m.ensure_square()?;
    let denominator = m.common_denominator();
    let mut pieces = Vec::new();
    for e in m.entries() {
        if e.den().is_constant() {
            continue;
        }
        for (f, _) in squarefree_decomposition(e.den())?.factors {
            if !pieces.contains(&f) {
                pieces.push(f);
            }
        }
    }
    let mut factors = Vec::new();
    for piece in coprime_basis(&pieces) {
        for f in split_rational_roots(&piece)? {
            let pole_order = m
                .entries()
                .iter()
                .map(|e| multiplicity(&f, e.den()))
                .max()
                .unwrap_or(0);
            factors.push(local_analysis(m, f, pole_order, size, pole_override)?);
        }
    }
    factors.sort_by(|a, b| {
        a.factor
            .deg()
            .cmp(&b.factor.deg())
            .then_with(|| a.factor.coeffs().cmp(b.factor.coeffs()))
    });
    Ok(SingularityData {
        denominator,
        factors,
    })
}

fn split_rational_roots(p: &UniPoly) -> Result<Vec<UniPoly>> {
    let mut rest = p.clone();
    let mut out = Vec::new();
    for r in rational_roots(p)? {
        let lin = UniPoly::linear_root(&r);
        rest = rest.exact_div(&lin)?;
        out.push(lin);
    }
    if !rest.is_constant() {
        out.push(rest.monic());
    }
    Ok(out)
}

fn multiplicity(f: &UniPoly, p: &UniPoly) -> u32 {
    let mut k = 0;
    let mut rest = p.clone();
    while let Ok((q, r)) = rest.div_rem(f) {
        if !r.is_zero() || rest.is_zero() {
            break;
        }
        rest = q;
        k += 1;
    }
    k
}

fn local_analysis(
    m: &RfMatrix,
    factor: UniPoly,
    pole_order: u32,
    size: usize,
    pole_override: Option<u32>,
) -> Result<SingularFactor> {
    if pole_order != 1 {
        return Ok(SingularFactor {
            exponent_bound: pole_override.unwrap_or_else(|| fallback_pole_bound(pole_order, size)),
            factor,
            pole_order,
            residue: None,
            integer_exponents: Vec::new(),
            rigorous: false,
        });
    }
    let residue = residue_matrix(m, &factor)?;
    let regular = regular_representation(&residue, &factor);
    let exponents = integer_roots(&charpoly(&regular)?)?;
    // a solution with a pole of order k along the factor has leading exponent -k
    let exponent_bound = exponents
        .first()
        .filter(|e| e.is_negative())
        .map_or(0, |e| u32::try_from(-e).unwrap_or(u32::MAX));
    Ok(SingularFactor {
        factor,
        pole_order,
        residue: Some(residue),
        integer_exponents: exponents,
        exponent_bound,
        rigorous: true,
    })
}

/// `(p M) / p'` reduced modulo `p`; `p` must be a simple pole.
fn residue_matrix(m: &RfMatrix, p: &UniPoly) -> Result<RfMatrix> {
    let dp_inv = p
        .derivative()
        .inverse_mod(p)
        .ok_or_else(|| Error::Invariant(format!("singular factor {p} is not squarefree")))?;
    let pf = RatFunc::from_poly(p.clone());
    m.try_map(|e| {
        let scaled = e * &pf;
        let den_inv = scaled.den().inverse_mod(p).ok_or_else(|| {
            Error::Invariant(format!("pole of order above one along {p}"))
        })?;
        let r = (&(scaled.num() * &den_inv) * &dp_inv).div_rem(p)?.1;
        Ok(RatFunc::from_poly(r))
    })
}

/// The `Q`-linear map `v -> R(x) v` on `(Q[x]/(p))^n` in the basis `x^a e_j`.
/// Its eigenvalues are those of `R(alpha)` over all roots `alpha` of `p`.
fn regular_representation(r: &RfMatrix, p: &UniPoly) -> QMatrix {
    let n = r.rows();
    let d = p.deg();
    let mut out = QMatrix::zeros(n * d, n * d);
    for j in 0..n {
        for a in 0..d {
            let xa = UniPoly::monomial(BigRational::one(), a);
            for i in 0..n {
                let e = r.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let img = (e.num() * &xa).div_rem(p).expect("nonzero modulus").1;
                for (b, c) in img.coeffs().iter().enumerate() {
                    out.set(i * d + b, j * d + a, c.clone());
                }
            }
        }
    }
    out
}

/// Degree bound for the numerators of rational solutions with denominator
/// dividing `d`. Rigorous when `lim x M(x)` exists (every entry vanishes at
/// infinity); otherwise `deg d` plus a fallback allowance.
pub fn degree_bound_at_infinity(m: &RfMatrix, d: &UniPoly) -> Result<InfinityBound> {
    infinity_with(m, d, None)
}

fn infinity_with(m: &RfMatrix, d: &UniPoly, allowance: Option<u32>) -> Result<InfinityBound> {
    let size = m.ensure_square()?;
    let deg_d = d.deg() as i64;
    let regular = m
        .entries()
        .iter()
        .all(|e| e.valuation_at_infinity().map_or(true, |v| v >= 1));
    if !regular {
        return Ok(InfinityBound {
            degree: (deg_d as u32) + allowance.unwrap_or_else(|| fallback_inf_allowance(size)),
            rigorous: false,
            integer_exponents: Vec::new(),
        });
    }
    let limit = m.map(|e| match e.valuation_at_infinity() {
        Some(1) => e.num().leading() / e.den().leading(),
        _ => BigRational::zero(),
    });
    let exponents = integer_roots(&charpoly(&limit)?)?;
    // a solution behaving like x^mu at infinity has mu among the exponents
    let top = exponents.last().map_or(0, |e| i64::try_from(e).unwrap_or(i64::MAX / 2));
    let degree = (deg_d + top).clamp(0, u32::MAX as i64) as u32;
    Ok(InfinityBound {
        degree,
        rigorous: true,
        integer_exponents: exponents,
    })
}

/// Basis of rational solutions with canonical (reduced echelon) coefficient vectors.
pub fn rational_solution_basis(m: &RfMatrix, opts: &SolveOptions) -> Result<SolutionBasis> {
    let singularities = analyze_with(m, opts.pole_bound)?;
    let denominator = singularities.universal_denominator();
    let infinity = infinity_with(m, &denominator, opts.inf_bound)?;
    let ansatz = Ansatz {
        denominator,
        degree: infinity.degree,
    };
    let vectors = solve_ansatz(m, &ansatz, opts.max_coeff_bits)?;
    Ok(SolutionBasis {
        dimension: vectors.len(),
        complete: singularities.rigorous() && infinity.rigorous,
        vectors,
        singularities,
        infinity,
        ansatz,
    })
}

/// All solutions of the form `P / ansatz.denominator` with `deg P <= ansatz.degree`,
/// each verified by substitution.
pub fn solve_ansatz(m: &RfMatrix, ansatz: &Ansatz, bit_limit: Option<u64>) -> Result<Vec<Vec<RatFunc>>> {
    let size = m.ensure_square()?;
    let dd = &ansatz.denominator;
    let width = ansatz.degree as usize + 1;
    let ncols = size * width;
    let l = m.common_denominator();
    let lf = RatFunc::from_poly(l.clone());
    // L (P' - (D'/D) P - M P) = 0 with every coefficient polynomial
    let log_der = RatFunc::new(dd.derivative(), dd.clone())?;
    let c1 = as_poly(&(&lf * &log_der))?;
    let lm = m.try_map(|e| as_poly(&(e * &lf)).map(RatFunc::from_poly))?;
    let scale = [&l, &c1]
        .into_iter()
        .chain(lm.entries().iter().map(RatFunc::num))
        .flat_map(|p| p.coeffs().iter())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let to_int = |p: &UniPoly| -> Vec<BigInt> {
        p.coeffs()
            .iter()
            .map(|c| (c * BigRational::from_integer(scale.clone())).to_integer())
            .collect()
    };
    let l_int = to_int(&l);
    let c1_int = to_int(&c1);
    let lm_int: Vec<Vec<BigInt>> = lm.entries().iter().map(|e| to_int(e.num())).collect();

    let max_len = [l_int.len() + width, c1_int.len() + width]
        .into_iter()
        .chain(lm_int.iter().map(|p| p.len() + width))
        .max()
        .unwrap_or(0);
    let nrows = size * max_len;
    let mut rows: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); nrows];
    let mut acc: Vec<BigInt> = Vec::with_capacity(max_len);
    for k in 0..size {
        for s in 0..width {
            let col = k * width + s;
            for i in 0..size {
                acc.clear();
                acc.resize(max_len, BigInt::zero());
                if i == k {
                    if s > 0 {
                        let sb = BigInt::from(s);
                        for (t, c) in l_int.iter().enumerate() {
                            acc[t + s - 1] += c * &sb;
                        }
                    }
                    for (t, c) in c1_int.iter().enumerate() {
                        acc[t + s] -= c;
                    }
                }
                for (t, c) in lm_int[i * size + k].iter().enumerate() {
                    acc[t + s] -= c;
                }
                for (t, v) in acc.iter().enumerate() {
                    if !v.is_zero() {
                        rows[i * max_len + t].push((col, v.clone()));
                    }
                }
            }
        }
    }
    let dpoly = RatFunc::from_poly(dd.clone());
    modular_kernel(&rows, ncols, bit_limit)?
        .into_iter()
        .map(|v| {
            let y: Vec<RatFunc> = (0..size)
                .map(|k| {
                    let p = UniPoly::new(v[k * width..(k + 1) * width].to_vec());
                    RatFunc::from_poly(p).checked_div(&dpoly)
                })
                .collect::<Result<_>>()?;
            if !is_solution(m, &y)? {
                return Err(Error::Invariant("rational solution failed substitution".into()));
            }
            Ok(y)
        })
        .collect()
}

fn as_poly(f: &RatFunc) -> Result<UniPoly> {
    if f.is_polynomial() {
        Ok(f.num().clone())
    } else {
        Err(Error::Invariant(format!("expected a polynomial, found {f}")))
    }
}

/// Exact check of `y' = M y`.
pub fn is_solution(m: &RfMatrix, y: &[RatFunc]) -> Result<bool> {
    let my = m.mul_vec(y)?;
    Ok(y.iter().zip(&my).all(|(v, w)| &v.derivative() == w))
}

/// Rank of the solution vectors evaluated at `at` (full rank means independent).
pub fn rank_at(vectors: &[Vec<RatFunc>], at: &BigRational) -> Result<usize> {
    if vectors.is_empty() {
        return Ok(0);
    }
    let rows = vectors
        .iter()
        .map(|v| {
            v.iter()
                .map(|e| e.eval(at).ok_or_else(|| Error::PoleAtPoint(at.to_string())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(crate::exactcore::rank(&Matrix::from_rows(rows)?))
}
