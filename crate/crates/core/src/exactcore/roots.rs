//! Squarefree decomposition and exact integer / rational root extraction.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::UniPoly;
use crate::error::{Error, Result};

/// `p = unit * prod(f_i ^ m_i)`, factors squarefree, monic, pairwise coprime,
/// multiplicities strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub unit: BigRational,
    pub factors: Vec<(UniPoly, u32)>,
}

impl SquarefreeDecomposition {
    pub fn recompose(&self) -> UniPoly {
        self.factors
            .iter()
            .fold(UniPoly::constant(self.unit.clone()), |acc, (f, m)| &acc * &f.pow(*m))
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, m)| *m == 1)
    }
}

/// Yun's algorithm over the rationals.
pub fn squarefree_decomposition(p: &UniPoly) -> Result<SquarefreeDecomposition> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let unit = p.leading();
    let p = p.monic();
    let mut factors = Vec::new();
    if p.is_constant() {
        return Ok(SquarefreeDecomposition { unit, factors });
    }
    let dp = p.derivative();
    let a0 = p.gcd(&dp);
    let mut b = p.exact_div(&a0)?;
    let mut c = dp.exact_div(&a0)?;
    let mut d = &c - &b.derivative();
    let mut mult = 1u32;
    loop {
        let a = b.gcd(&d);
        if !a.is_constant() {
            factors.push((a.clone(), mult));
        }
        b = b.exact_div(&a)?;
        if b.is_constant() {
            break;
        }
        c = d.exact_div(&a)?;
        d = &c - &b.derivative();
        mult += 1;
    }
    Ok(SquarefreeDecomposition { unit, factors })
}

/// Squarefree part (product of the distinct monic irreducible factors).
pub fn squarefree_part(p: &UniPoly) -> Result<UniPoly> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let m = p.monic();
    Ok(m.exact_div(&m.gcd(&m.derivative()))?)
}

/// Pairwise coprime monic nonconstant polynomials such that every nonzero input
/// is, up to a constant, a product of powers of them. Sorted by degree, then coefficients.
pub fn coprime_basis(polys: &[UniPoly]) -> Vec<UniPoly> {
    let mut basis: Vec<UniPoly> = polys
        .iter()
        .filter(|p| !p.is_constant())
        .map(UniPoly::monic)
        .collect();
    'refine: loop {
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let g = basis[i].gcd(&basis[j]);
                if g.is_constant() {
                    continue;
                }
                let a = basis[i].exact_div(&g).expect("gcd divides");
                let b = basis[j].exact_div(&g).expect("gcd divides");
                basis.swap_remove(j);
                basis.swap_remove(i);
                basis.extend([a, g, b].into_iter().filter(|p| !p.is_constant()));
                continue 'refine;
            }
        }
        break;
    }
    basis.sort_by(|a, b| a.deg().cmp(&b.deg()).then_with(|| a.coeffs().cmp(b.coeffs())));
    basis
}

/// Distinct integer roots in ascending order.
pub fn integer_roots(p: &UniPoly) -> Result<Vec<BigInt>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let s = squarefree_part(p)?;
    let (_, ints) = s.integer_primitive();
    let mut roots = Vec::new();
    // strip the root 0
    let lowest = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let ints = &ints[lowest..];
    if lowest > 0 {
        roots.push(BigInt::zero());
    }
    if ints.len() <= 1 {
        return Ok(roots);
    }
    let poly = UniPoly::from_bigints(ints.to_vec());
    let bound = cauchy_bound(ints);
    let a0 = &ints[0];
    if bound <= BigInt::from(4096) {
        let b: i64 = bound.try_into().expect("small bound");
        for r in -b..=b {
            let r = BigInt::from(r);
            if !r.is_zero() && (a0 % &r).is_zero() && eval_int(ints, &r).is_zero() {
                roots.push(r);
            }
        }
    } else {
        let chain = sturm_chain(&poly);
        isolate_integers(&chain, ints, -bound.clone(), bound, &mut roots);
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// Distinct rational roots in ascending order.
pub fn rational_roots(p: &UniPoly) -> Result<Vec<BigRational>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let s = squarefree_part(p)?;
    let (_, ints) = s.integer_primitive();
    let d = ints.len() - 1;
    if d == 0 {
        return Ok(Vec::new());
    }
    // c_d^(d-1) p(t / c_d) is monic with integer coefficients
    let lead = ints[d].clone();
    let mut scaled = Vec::with_capacity(d + 1);
    let mut pow = BigInt::one();
    for k in (0..=d).rev() {
        if k == d {
            scaled.push(BigInt::one());
        } else {
            scaled.push(&ints[k] * &pow);
            pow *= &lead;
        }
    }
    scaled.reverse();
    let monic = UniPoly::from_bigints(scaled);
    let mut roots: Vec<BigRational> = integer_roots(&monic)?
        .into_iter()
        .map(|t| BigRational::new(t, lead.clone()))
        .collect();
    roots.sort();
    Ok(roots)
}

fn eval_int(coeffs: &[BigInt], at: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = acc * at + c;
    }
    acc
}

// 1 + max |a_i / a_n|, rounded up
fn cauchy_bound(coeffs: &[BigInt]) -> BigInt {
    let lead = coeffs.last().expect("nonempty").abs();
    let max = coeffs[..coeffs.len() - 1]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    BigInt::one() + (&max + &lead - BigInt::one()) / &lead
}

fn sturm_chain(p: &UniPoly) -> Vec<UniPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]).expect("nonzero");
        if r.is_zero() {
            break;
        }
        chain.push(-&r);
    }
    chain
}

fn sign_changes(chain: &[UniPoly], at: &BigRational) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for f in chain {
        let v = f.eval(at);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

// A non-root strictly between k and k + 1.
fn separator(chain: &[UniPoly], k: &BigInt) -> BigRational {
    let base = BigRational::from_integer(k.clone());
    let mut den = 2i64;
    loop {
        let e = &base + BigRational::new(BigInt::one(), den.into());
        if !chain[0].eval(&e).is_zero() {
            return e;
        }
        den += 1;
    }
}

// Integer roots in [lo, hi] of the squarefree polynomial `chain[0]`.
fn isolate_integers(chain: &[UniPoly], ints: &[BigInt], lo: BigInt, hi: BigInt, out: &mut Vec<BigInt>) {
    if lo > hi {
        return;
    }
    let left = separator(chain, &(&lo - BigInt::one()));
    let right = separator(chain, &hi);
    let count = sign_changes(chain, &left).saturating_sub(sign_changes(chain, &right));
    if count == 0 {
        return;
    }
    if lo == hi {
        if eval_int(ints, &lo).is_zero() {
            out.push(lo);
        }
        return;
    }
    let mid: BigInt = (&lo + &hi) >> 1;
    isolate_integers(chain, ints, lo, mid.clone(), out);
    isolate_integers(chain, ints, mid + BigInt::one(), hi, out);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn yun_examples() {
        // (t-1)^2 (t-2) = t^3 - 4t^2 + 5t - 2
        let d = squarefree_decomposition(&p(&[-2, 5, -4, 1])).unwrap();
        assert_eq!(d.factors, vec![(p(&[-2, 1]), 1), (p(&[-1, 1]), 2)]);
        let d = squarefree_decomposition(&p(&[-2, 0, 1])).unwrap();
        assert_eq!(d.factors, vec![(p(&[-2, 0, 1]), 1)]);
        let d = squarefree_decomposition(&p(&[0, 0, 0, 1])).unwrap();
        assert_eq!(d.factors, vec![(p(&[0, 1]), 3)]);
        assert!(squarefree_decomposition(&UniPoly::zero()).is_err());
    }

    #[test]
    fn recomposition_with_unit() {
        let f = p(&[0, 0, 3, 3]); // 3 t^2 (t + 1)
        let d = squarefree_decomposition(&f).unwrap();
        assert_eq!(d.recompose(), f);
    }

    #[test]
    fn integer_root_examples() {
        assert_eq!(integer_roots(&p(&[2, -3, 1])).unwrap(), ints(&[1, 2]));
        assert!(integer_roots(&p(&[1, 0, 1])).unwrap().is_empty());
        assert_eq!(integer_roots(&p(&[0, 3, 1])).unwrap(), ints(&[-3, 0]));
        assert!(integer_roots(&UniPoly::zero()).is_err());
    }

    #[test]
    fn large_roots_use_sturm_isolation() {
        // (t - 100003)(t + 99991)(2t - 1)
        let f = &(&p(&[-100003, 1]) * &p(&[99991, 1])) * &p(&[-1, 2]);
        assert_eq!(integer_roots(&f).unwrap(), ints(&[-99991, 100003]));
    }

    #[test]
    fn rational_root_examples() {
        // (2t - 1)(3t + 2)(t^2 + 1)
        let f = &(&p(&[-1, 2]) * &p(&[2, 3])) * &p(&[1, 0, 1]);
        let r = rational_roots(&f).unwrap();
        assert_eq!(
            r,
            vec![
                BigRational::new((-2).into(), 3.into()),
                BigRational::new(1.into(), 2.into())
            ]
        );
    }

    #[test]
    fn coprime_basis_refines() {
        // (x-1)(x-2), (x-2)(x+3), x^2+1, (x-1)
        let basis = coprime_basis(&[p(&[2, -3, 1]), p(&[-6, 1, 1]), p(&[1, 0, 1]), p(&[-1, 1]), p(&[5])]);
        assert_eq!(basis, vec![p(&[-2, 1]), p(&[-1, 1]), p(&[3, 1]), p(&[1, 0, 1])]);
        for (i, a) in basis.iter().enumerate() {
            for b in &basis[i + 1..] {
                assert!(a.gcd(b).is_one());
            }
        }
        assert_eq!(coprime_basis(&[p(&[0, 2]), p(&[0, 1])]), vec![p(&[0, 1])]);
        assert!(coprime_basis(&[]).is_empty());
    }
}
