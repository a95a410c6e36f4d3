//! Exact linear algebra: fraction-free sparse elimination, kernels, and
//! characteristic / minimal polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::{Coeff, Matrix, QMatrix};
use super::poly::UniPoly;
use crate::error::{Error, Result};

/// Sparse integer row, strictly increasing column indices, no zero entries.
pub type SparseRow = Vec<(usize, BigInt)>;

/// Row-echelon form over the integers built one row at a time.
///
/// Each stored row is primitive (content 1) with a positive leading entry and
/// is indexed by its leading column. Reduction is fraction-free: a row `r` with
/// leading entry `a` is reduced against a pivot `p` with leading entry `b` as
/// `(b/g) r - (a/g) p`, `g = gcd(a, b)`, followed by removal of the content.
#[derive(Debug, Clone)]
pub struct Echelon {
    ncols: usize,
    pivots: Vec<Option<SparseRow>>,
    rank: usize,
    bit_limit: Option<u64>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            pivots: vec![None; ncols],
            rank: 0,
            bit_limit: None,
        }
    }

    /// Abort with [`Error::CoefficientOverflow`] once any entry exceeds `bits`.
    pub fn with_bit_limit(mut self, bits: Option<u64>) -> Self {
        self.bit_limit = bits;
        self
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.as_ref().map(|_| c))
    }

    /// Insert a row; returns `true` if it increased the rank.
    pub fn insert(&mut self, mut row: SparseRow) -> Result<bool> {
        row.retain(|(_, v)| !v.is_zero());
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
        if let Some(&(c, _)) = row.last() {
            assert!(c < self.ncols, "column {c} out of range");
        }
        make_primitive(&mut row);
        self.check_bits(&row)?;
        loop {
            let Some((lead, _)) = row.first() else {
                return Ok(false);
            };
            let lead = *lead;
            match &self.pivots[lead] {
                Some(pivot) => {
                    row = reduce(&row, pivot);
                    self.check_bits(&row)?;
                }
                None => {
                    self.pivots[lead] = Some(row);
                    self.rank += 1;
                    return Ok(true);
                }
            }
        }
    }

    fn check_bits(&self, row: &SparseRow) -> Result<()> {
        if let Some(limit) = self.bit_limit {
            for (_, v) in row {
                let bits = v.bits();
                if bits > limit {
                    return Err(Error::CoefficientOverflow { bits, limit });
                }
            }
        }
        Ok(())
    }

    /// Kernel basis in reduced row-echelon form (each vector's first nonzero entry is 1).
    pub fn kernel(&self) -> Vec<Vec<BigRational>> {
        let free: Vec<usize> = (0..self.ncols).filter(|&c| self.pivots[c].is_none()).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![BigRational::zero(); self.ncols];
            v[f] = BigRational::one();
            for c in (0..self.ncols).rev() {
                let Some(row) = &self.pivots[c] else { continue };
                let mut s = BigRational::zero();
                for (j, a) in &row[1..] {
                    if !v[*j].is_zero() {
                        s += &v[*j] * BigRational::from_integer(a.clone());
                    }
                }
                if !s.is_zero() {
                    v[c] = -s / BigRational::from_integer(row[0].1.clone());
                }
            }
            basis.push(v);
        }
        rref(basis)
    }
}

fn make_primitive(row: &mut SparseRow) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if row.first().is_some_and(|(_, v)| v.is_negative()) {
        g = -g;
    }
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

fn reduce(row: &SparseRow, pivot: &SparseRow) -> SparseRow {
    let a = &row[0].1;
    let b = &pivot[0].1;
    let g = a.gcd(b);
    let ra = b / &g;
    let pa = a / &g;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push((ci, &row[i].1 * &ra));
            i += 1;
        } else if cj < ci {
            out.push((cj, -(&pivot[j].1 * &pa)));
            j += 1;
        } else {
            let v = &row[i].1 * &ra - &pivot[j].1 * &pa;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    make_primitive(&mut out);
    out
}

/// Scale a rational row to a sparse integer row with the same kernel.
pub fn integer_row(row: &[BigRational]) -> SparseRow {
    let den = row
        .iter()
        .filter(|c| !c.is_zero())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    row.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (j, (c * BigRational::from_integer(den.clone())).to_integer()))
        .collect()
}

/// Reduced row-echelon form of a list of rational vectors; zero rows are dropped.
pub fn rref(mut rows: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Basis of `ker M` in reduced echelon form, computed by fraction-free elimination.
pub fn nullspace(m: &QMatrix) -> Vec<Vec<BigRational>> {
    let mut ech = Echelon::new(m.cols());
    for i in 0..m.rows() {
        ech.insert(integer_row(m.row(i))).expect("no bit limit");
    }
    ech.kernel()
}

pub fn rank(m: &QMatrix) -> usize {
    let mut ech = Echelon::new(m.cols());
    for i in 0..m.rows() {
        ech.insert(integer_row(m.row(i))).expect("no bit limit");
    }
    ech.rank()
}

/// Coefficients (lowest degree first, monic) of `det(t Id - M)` by the
/// division-free Berkowitz algorithm; works over any commutative ring.
pub fn charpoly_coeffs<T: Coeff>(m: &Matrix<T>) -> Result<Vec<T>> {
    let n = m.ensure_square()?;
    let mut highest_first = berkowitz(m, 0, n);
    highest_first.reverse();
    debug_assert_eq!(highest_first.len(), n + 1);
    Ok(highest_first)
}

// Characteristic vector (highest degree first) of the trailing principal submatrix
// starting at `start`.
fn berkowitz<T: Coeff>(m: &Matrix<T>, start: usize, n: usize) -> Vec<T> {
    let size = n - start;
    if size == 0 {
        return vec![T::unit()];
    }
    if size == 1 {
        return vec![T::unit(), m.get(start, start).negated()];
    }
    let a = m.get(start, start);
    let sub = start + 1;
    // items: 1, -a, -R C, -R A C, ..., -R A^(size-2) C
    let mut items = Vec::with_capacity(size + 1);
    items.push(T::unit());
    items.push(a.negated());
    let mut col: Vec<T> = (sub..n).map(|i| m.get(i, start).clone()).collect();
    for k in 0..size - 1 {
        let rc = (sub..n).zip(&col).fold(T::nil(), |acc, (j, c)| {
            let r = m.get(start, j);
            if r.is_nil() || c.is_nil() {
                acc
            } else {
                acc.plus(&r.times(c))
            }
        });
        items.push(rc.negated());
        if k + 1 < size - 1 {
            col = (sub..n)
                .map(|i| {
                    (sub..n).zip(&col).fold(T::nil(), |acc, (j, c)| {
                        let e = m.get(i, j);
                        if e.is_nil() || c.is_nil() {
                            acc
                        } else {
                            acc.plus(&e.times(c))
                        }
                    })
                })
                .collect();
        }
    }
    let inner = berkowitz(m, sub, n);
    // Toeplitz (size+1) x size times inner (length size)
    (0..=size)
        .map(|i| {
            (0..size.min(i + 1)).fold(T::nil(), |acc, j| {
                let t = &items[i - j];
                let v = &inner[j];
                if t.is_nil() || v.is_nil() {
                    acc
                } else {
                    acc.plus(&t.times(v))
                }
            })
        })
        .collect()
}

/// Characteristic polynomial `det(t Id - M)`.
pub fn charpoly(m: &QMatrix) -> Result<UniPoly> {
    Ok(UniPoly::new(charpoly_coeffs(m)?))
}

/// Minimal polynomial: the first linear dependency among `Id, M, M^2, ...`.
pub fn minpoly(m: &QMatrix) -> Result<UniPoly> {
    let n = m.ensure_square()?;
    let mut powers: Vec<QMatrix> = vec![QMatrix::identity(n)];
    for k in 1..=n {
        let next = powers[k - 1].mul(m)?;
        powers.push(next);
        // columns are vec(M^0..M^k); a kernel vector is a relation
        let krylov = QMatrix::from_fn(n * n, k + 1, |r, c| powers[c].entries()[r].clone());
        let ker = nullspace(&krylov);
        if let Some(rel) = ker.first() {
            // lower powers are independent, so the M^k coefficient is nonzero
            return Ok(UniPoly::new(rel.clone()).monic());
        }
    }
    Err(Error::Invariant("no polynomial relation of degree <= n".into()))
}

/// Evaluate a polynomial at a square matrix (Horner).
pub fn poly_at_matrix(p: &UniPoly, m: &QMatrix) -> Result<QMatrix> {
    let n = m.ensure_square()?;
    let mut acc = QMatrix::zeros(n, n);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(m)?.add(&QMatrix::identity(n).scale(c))?;
    }
    Ok(acc)
}

/// Determinant by fraction-free elimination.
pub fn determinant(m: &QMatrix) -> Result<BigRational> {
    let n = m.ensure_square()?;
    let mut a: Vec<Vec<BigRational>> = m.to_rows();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Ok(BigRational::zero());
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det *= &piv;
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &piv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    Ok(det)
}
