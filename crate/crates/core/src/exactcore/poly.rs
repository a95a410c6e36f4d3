//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modular::{inv_mod, mul_mod, rational_reconstruct};

use crate::error::{Error, Result};

/// Prime used for the coprimality pre-check in `gcd`.
const GCD_PRIME: u64 = (1 << 61) - 1;

fn image_mod(p: &UniPoly, q: u64) -> Option<Vec<u64>> {
    let qb = BigInt::from(q);
    p.coeffs
        .iter()
        .map(|c| {
            let d = c.denom().mod_floor(&qb).to_u64()?;
            if d == 0 {
                return None;
            }
            let n = c.numer().mod_floor(&qb).to_u64()?;
            Some(mul_mod(n, inv_mod(d, q), q))
        })
        .collect()
}

/// Common denominator and the integer numerators over it.
fn cleared(p: &UniPoly) -> (BigInt, Vec<BigInt>) {
    let den = p.coeffs.iter().fold(BigInt::one(), |acc, c| {
        if c.denom().is_one() {
            acc
        } else {
            acc.lcm(c.denom())
        }
    });
    let nums = p
        .coeffs
        .iter()
        .map(|c| {
            if c.denom() == &den {
                c.numer().clone()
            } else {
                c.numer() * (&den / c.denom())
            }
        })
        .collect();
    (den, nums)
}

/// Monic gcd of the images modulo `q`, or `None` when a leading coefficient or
/// a denominator vanishes there.
fn gcd_mod(a: &UniPoly, b: &UniPoly, q: u64) -> Option<Vec<u64>> {
    let mut r0 = image_mod(a, q)?;
    let mut r1 = image_mod(b, q)?;
    if r0.last() == Some(&0) || r1.last() == Some(&0) {
        return None;
    }
    while !r1.is_empty() {
        // r0 <- r0 mod r1
        let inv = inv_mod(*r1.last().expect("nonempty"), q);
        while r0.len() >= r1.len() {
            let f = mul_mod(*r0.last().expect("nonempty"), inv, q);
            let shift = r0.len() - r1.len();
            for (i, &c) in r1.iter().enumerate() {
                let t = mul_mod(f, c, q);
                r0[shift + i] = (r0[shift + i] + q - t) % q;
            }
            while r0.last() == Some(&0) {
                r0.pop();
            }
            if r0.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut r0, &mut r1);
    }
    let inv = inv_mod(*r0.last().expect("gcd of nonzero images"), q);
    Some(r0.iter().map(|&c| mul_mod(c, inv, q)).collect())
}

/// Gcd found from one modular image. With both leading coefficients surviving,
/// the modular gcd has degree at least that of the rational one; a lifted
/// candidate of that degree dividing both inputs is therefore the gcd.
fn modular_gcd(a: &UniPoly, b: &UniPoly) -> Option<UniPoly> {
    if a.is_zero() && b.is_zero() {
        return None;
    }
    let image = gcd_mod(a, b, GCD_PRIME)?;
    if image.len() == 1 {
        return Some(UniPoly::one());
    }
    let m = BigInt::from(GCD_PRIME);
    let coeffs = image
        .iter()
        .map(|&c| rational_reconstruct(&BigInt::from(c), &m))
        .collect::<Option<Vec<_>>>()?;
    let g = UniPoly::new(coeffs);
    (g.divides(a) && g.divides(b)).then_some(g)
}

/// Polynomial in one variable with rational coefficients, lowest degree first.
///
/// The coefficient list never ends in a zero; the zero polynomial is the empty list.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn x() -> Self {
        UniPoly {
            coeffs: vec![BigRational::zero(), BigRational::one()],
        }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: BigRational, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        UniPoly { coeffs }
    }

    /// `x - r`
    pub fn linear_root(r: &BigRational) -> Self {
        UniPoly {
            coeffs: vec![-r.clone(), BigRational::one()],
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lc = self.leading();
        if lc.is_one() {
            return self.clone();
        }
        let inv = lc.recip();
        self.scale(&inv)
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn eval(&self, at: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division; fails on a zero divisor.
    pub fn div_rem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let dd = divisor.degree().ok_or_else(|| Error::DivisionByZero {
            numerator: self.to_string(),
            denominator: "0".into(),
        })?;
        let Some(nd) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if nd < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let inv_lc = divisor.leading().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &inv_lc;
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    rem[k + i] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Quotient of a division known to be exact.
    pub fn exact_div(&self, divisor: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Invariant(format!(
                "inexact polynomial division ({self}) / ({divisor})"
            )));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        match other.div_rem(self) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => other.is_zero(),
        }
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        if self.is_constant() && !self.is_zero() || other.is_constant() && !other.is_zero() {
            return Self::one();
        }
        if let Some(g) = modular_gcd(self, other) {
            return g;
        }
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a
    }

    /// Inverse modulo `modulus`, when `gcd(self, modulus) = 1`.
    pub fn inverse_mod(&self, modulus: &UniPoly) -> Option<UniPoly> {
        if modulus.is_constant() {
            return None;
        }
        // extended Euclid keeping only the cofactor of `self`
        let (_, mut r0) = self.div_rem(modulus).ok()?;
        let mut r1 = modulus.clone();
        let mut s0 = Self::one();
        let mut s1 = Self::zero();
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).ok()?;
            let s = &s0 - &(&q * &s1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if !r0.is_constant() || r0.is_zero() {
            return None;
        }
        let inv = s0.scale(&r0.leading().recip());
        Some(inv.div_rem(modulus).ok()?.1)
    }

    /// Monic least common multiple.
    pub fn lcm(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(other);
        let q = self.exact_div(&g).expect("gcd divides");
        (&q * other).monic()
    }

    /// Rational scalar `c` and primitive integer coefficients `p` with `self = c * p`
    /// and a positive leading coefficient in `p`.
    pub fn integer_primitive(&self) -> (BigRational, Vec<BigInt>) {
        if self.is_zero() {
            return (BigRational::zero(), Vec::new());
        }
        let den_lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den_lcm.clone())).to_integer())
            .collect();
        let mut content = scaled.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if scaled.last().is_some_and(|c| c.is_negative()) {
            content = -content;
        }
        let prim = scaled.into_iter().map(|c| c / &content).collect();
        (BigRational::new(content, den_lcm), prim)
    }

    pub fn from_bigints(coeffs: Vec<BigInt>) -> Self {
        Self::new(coeffs.into_iter().map(BigRational::from_integer).collect())
    }

    /// Substitute `x -> x + shift`.
    pub fn taylor_shift(&self, shift: &BigRational) -> Self {
        let mut acc = Self::zero();
        let lin = UniPoly::new(vec![shift.clone(), BigRational::one()]);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Self::constant(c.clone());
        }
        acc
    }

    /// Render in the expression grammar with the given variable name.
    pub fn to_text(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let var_part = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if var_part.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&var_part);
            } else {
                out.push_str(&format!("{mag}*{var_part}"));
            }
        }
        out
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text("x"))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (a, b) in coeffs.iter_mut().zip(&short.coeffs) {
            *a += b;
        }
        UniPoly::new(coeffs)
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(len, BigRational::zero());
        for (a, b) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
        UniPoly::new(coeffs)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        // convolve over the integers: one normalization per output coefficient
        let (da, ia) = cleared(self);
        let (db, ib) = cleared(rhs);
        let mut acc = vec![BigInt::zero(); ia.len() + ib.len() - 1];
        for (i, a) in ia.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in ib.iter().enumerate() {
                if !b.is_zero() {
                    acc[i + j] += a * b;
                }
            }
        }
        let den = da * db;
        UniPoly::new(
            acc.into_iter()
                .map(|c| BigRational::new(c, den.clone()))
                .collect(),
        )
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for UniPoly {
            type Output = UniPoly;
            fn $m(self, rhs: UniPoly) -> UniPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    #[test]
    fn normalizes_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]), p(&[1, 2]));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[0]).degree(), None);
    }

    #[test]
    fn division_and_gcd() {
        // (x^2 - 1) = (x - 1)(x + 1)
        let a = p(&[-1, 0, 1]);
        let b = p(&[-1, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[1, 2, 1])), p(&[1, 1]));
        assert_eq!(a.lcm(&b), a);
        assert!(a.div_rem(&UniPoly::zero()).is_err());
    }

    #[test]
    fn text_form() {
        assert_eq!(p(&[-1, 0, 2]).to_text("x"), "2*x^2 - 1");
        assert_eq!(p(&[0, -1]).to_text("t"), "-t");
        assert_eq!(UniPoly::zero().to_text("x"), "0");
    }

    #[test]
    fn primitive_part() {
        let q = UniPoly::new(vec![
            BigRational::new(1.into(), 2.into()),
            BigRational::new((-3).into(), 4.into()),
        ]);
        let (c, prim) = q.integer_primitive();
        assert_eq!(prim, vec![BigInt::from(-2), BigInt::from(3)]);
        assert_eq!(c, BigRational::new((-1).into(), 4.into()));
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let a = p(&[3, -1, 0, 2]);
        let s = BigRational::from_integer(5.into());
        let shifted = a.taylor_shift(&s);
        for t in -3..4 {
            let t = BigRational::from_integer(t.into());
            assert_eq!(shifted.eval(&t), a.eval(&(&t + &s)));
        }
    }

    #[test]
    fn inverse_modulo() {
        let m = UniPoly::from_ints(&[1, 0, 1]);
        let a = UniPoly::from_ints(&[1, 2]);
        let inv = a.inverse_mod(&m).unwrap();
        assert!((&a * &inv).div_rem(&m).unwrap().1.is_one());
        assert!(UniPoly::from_ints(&[-1, 1]).inverse_mod(&UniPoly::from_ints(&[-1, 0, 1])).is_none());
        assert_eq!(UniPoly::from_ints(&[3]).inverse_mod(&m).unwrap(), UniPoly::constant(crate::exactcore::qfrac(1, 3)));
    }

    fn naive_mul(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let mut out = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        UniPoly::new(out)
    }

    fn euclid_gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (a.monic(), b.monic());
        while !b.is_zero() {
            let r = a.div_rem(&b).unwrap().1.monic();
            a = std::mem::replace(&mut b, r);
        }
        a
    }

    fn arb_poly() -> impl proptest::strategy::Strategy<Value = UniPoly> {
        use proptest::prelude::*;
        (prop::collection::vec(-40i64..=40, 0..6), 1i64..=12).prop_map(|(c, d)| {
            UniPoly::new(c.into_iter().map(|v| crate::exactcore::qfrac(v, d)).collect())
        })
    }

    proptest::proptest! {
        #[test]
        fn fast_paths_match_references(a in arb_poly(), b in arb_poly(), g in arb_poly()) {
            proptest::prop_assert_eq!(&a * &b, naive_mul(&a, &b));
            // a shared factor exercises the lifted modular gcd
            let (ag, bg) = (&a * &g, &b * &g);
            proptest::prop_assert_eq!(ag.gcd(&bg), euclid_gcd(&ag, &bg));
            proptest::prop_assert_eq!(a.gcd(&b), euclid_gcd(&a, &b));
        }
    }

    #[test]
    fn gcd_with_large_coefficients() {
        // coefficients beyond one modular image force the Euclidean fallback
        let big = UniPoly::new(vec![BigRational::new(BigInt::from(3).pow(90u32), BigInt::from(7)), BigRational::one()]);
        let a = &big * &p(&[1, 1]);
        let b = &big * &p(&[2, 1]);
        assert_eq!(a.gcd(&b), big.monic());
        assert!(UniPoly::zero().gcd(&UniPoly::zero()).is_zero());
        assert_eq!(UniPoly::zero().gcd(&p(&[2, 4])), p(&[2, 4]).monic());
    }
}
