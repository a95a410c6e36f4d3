//! Linear systems whose rational solutions are the homogeneous polynomial
//! vertical symmetries of a fixed degree.
//!
//! A degree-`m` field `Y = sum_j (sum_i c_{i,j} mu_i(y)) d/dy_j` is stored as the
//! coefficient vector `[c_{1,1}, .., c_{N,1}, .., c_{1,n}, .., c_{N,n}]`: block `j` is
//! the `d/dy_j` component and inside a block the monomials `mu_i` follow
//! [`MonomialIndex`] order. With that layout `Y` is a symmetry of `y' = A y`
//! exactly when `c' = A_m c`, where
//!
//! ```text
//! A_m = A (x) Id_N + Id_n (x) sym^m(-A^T)
//! ```

use std::collections::HashMap;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactcore::{Matrix, RatFunc, RfMatrix};
use crate::system::SystemSpec;
use crate::vfields::{Exponent, MvPoly, VerticalField};

/// Degree-`m` monomials in `n` variables, in descending lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIndex {
    n: usize,
    m: u32,
    exps: Vec<Exponent>,
    position: HashMap<Exponent, usize>,
}

impl MonomialIndex {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Number of monomials, `C(n + m - 1, m)`.
    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.exps
    }

    pub fn position(&self, exp: &[u32]) -> Option<usize> {
        self.position.get(exp).copied()
    }
}

pub fn monomial_index(n: usize, m: u32) -> MonomialIndex {
    assert!(n >= 1, "at least one variable");
    let mut exps = Vec::new();
    let mut cur = vec![0u32; n];
    fill_desc(&mut cur, 0, m, &mut exps);
    let position = exps.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    MonomialIndex {
        n,
        m,
        exps,
        position,
    }
}

fn fill_desc(cur: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<Exponent>) {
    if pos == cur.len() - 1 {
        cur[pos] = left;
        out.push(cur.clone());
        return;
    }
    for a in (0..=left).rev() {
        cur[pos] = a;
        fill_desc(cur, pos + 1, left - a, out);
    }
    cur[pos] = 0;
}

/// Matrix of the derivation induced on degree-`m` monomials by the linear map `M`
/// acting on the variables column-wise (`y_k -> sum_l M_{l,k} y_l`).
///
/// The column of `y^a` receives `a_k M_{l,k}` in the row of `y^(a - e_k + e_l)`;
/// in particular `sym_power_matrix(M, 1) = M`.
pub fn sym_power_matrix(mat: &RfMatrix, m: u32) -> Result<RfMatrix> {
    let n = mat.ensure_square()?;
    let index = monomial_index(n, m);
    Ok(sym_power_with_index(mat, &index))
}

fn sym_power_with_index(mat: &RfMatrix, index: &MonomialIndex) -> RfMatrix {
    let n = index.n;
    let big_n = index.len();
    let mut out = RfMatrix::zeros(big_n, big_n);
    for (col, alpha) in index.exps.iter().enumerate() {
        for k in 0..n {
            if alpha[k] == 0 {
                continue;
            }
            let mult = BigRational::from_integer(alpha[k].into());
            let mut target = alpha.clone();
            target[k] -= 1;
            for l in 0..n {
                let entry = mat.get(l, k);
                if entry.is_zero() {
                    continue;
                }
                target[l] += 1;
                let row = index.position(&target).expect("same degree");
                let v = out.get(row, col) + &entry.scale(&mult);
                out.set(row, col, v);
                target[l] -= 1;
            }
        }
    }
    out
}

/// The induced system `c' = A_m c` for degree-`m` symmetries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieVessiotMatrix {
    pub matrix: RfMatrix,
    pub index: MonomialIndex,
    pub degree: u32,
    pub source: SystemSpec,
}

impl LieVessiotMatrix {
    pub fn size(&self) -> usize {
        self.matrix.rows()
    }
}

pub fn build_lv_matrix(system: &SystemSpec, m: u32) -> LieVessiotMatrix {
    let a = system.matrix();
    let n = system.n();
    let index = monomial_index(n, m);
    let big_n = index.len();
    let dual = a.transpose().neg();
    let sym = sym_power_with_index(&dual, &index);
    let size = n * big_n;
    let mut out = RfMatrix::zeros(size, size);
    // A (x) Id_N
    for j in 0..n {
        for k in 0..n {
            let e = a.get(j, k);
            if e.is_zero() {
                continue;
            }
            for i in 0..big_n {
                out.set(j * big_n + i, k * big_n + i, e.clone());
            }
        }
    }
    // Id_n (x) sym^m(-A^T)
    for j in 0..n {
        for r in 0..big_n {
            for c in 0..big_n {
                let s = sym.get(r, c);
                if s.is_zero() {
                    continue;
                }
                let (row, col) = (j * big_n + r, j * big_n + c);
                let v = out.get(row, col) + s;
                out.set(row, col, v);
            }
        }
    }
    LieVessiotMatrix {
        matrix: out,
        index,
        degree: m,
        source: system.clone(),
    }
}

pub fn coeffs_to_field(c: &[RatFunc], index: &MonomialIndex) -> Result<VerticalField> {
    let n = index.n;
    let big_n = index.len();
    if c.len() != n * big_n {
        return Err(Error::DimensionMismatch {
            expected: n * big_n,
            found: c.len(),
        });
    }
    let components = (0..n)
        .map(|j| {
            let mut p = MvPoly::zero(n);
            for (i, exp) in index.exps.iter().enumerate() {
                p.add_term(exp.clone(), c[j * big_n + i].clone());
            }
            p
        })
        .collect();
    VerticalField::new(components)
}

pub fn field_to_coeffs(y: &VerticalField, index: &MonomialIndex) -> Result<Vec<RatFunc>> {
    if y.n() != index.n {
        return Err(Error::DimensionMismatch {
            expected: index.n,
            found: y.n(),
        });
    }
    if !y.is_homogeneous_of(index.m) {
        return Err(Error::NotHomogeneous { expected: index.m });
    }
    let big_n = index.len();
    let mut out = vec![RatFunc::zero(); index.n * big_n];
    for (j, comp) in y.components().iter().enumerate() {
        for (exp, c) in comp.terms() {
            let i = index.position(exp).expect("homogeneous of the index degree");
            out[j * big_n + i] = c.clone();
        }
    }
    Ok(out)
}

/// Reshape a degree-1 coefficient vector into the matrix `B` of `v_B`
/// (`B_{j,i}` is the coefficient of `y_i` in component `j`).
pub fn coeffs_to_matrix(c: &[RatFunc], n: usize) -> Result<RfMatrix> {
    Matrix::new(n, n, c.to_vec())
}
