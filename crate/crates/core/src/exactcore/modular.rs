//! Kernels of integer matrices by elimination modulo word-size primes,
//! Chinese remaindering and rational reconstruction.
//!
//! Results are never trusted on the modular evidence alone: reconstructed
//! vectors are checked against the integer rows exactly. If a prime of maximal
//! rank sees a kernel of dimension `k` and `k` independent exact kernel vectors
//! are recovered, they span the rational kernel, since reduction modulo a prime
//! can only lower the rank.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::linalg::{rref, SparseRow};
use crate::error::{Error, Result};

/// Kernel basis, in reduced echelon form, of the integer matrix given by sparse rows.
pub fn modular_kernel(
    rows: &[SparseRow],
    ncols: usize,
    bit_limit: Option<u64>,
) -> Result<Vec<Vec<BigRational>>> {
    if let Some(limit) = bit_limit {
        for (_, v) in rows.iter().flatten() {
            if v.bits() > limit {
                return Err(Error::CoefficientOverflow {
                    bits: v.bits(),
                    limit,
                });
            }
        }
    }
    let rows: Vec<&SparseRow> = rows.iter().filter(|r| !r.is_empty()).collect();
    let mut best: Option<Accumulator> = None;
    let mut previous: Option<Vec<Vec<BigRational>>> = None;
    let mut prime = 1u64 << 62;
    loop {
        prime = prev_prime(prime);
        let image = kernel_mod(&rows, ncols, prime);
        match &mut best {
            Some(acc) if acc.pivots == image.pivots => acc.absorb(&image, prime),
            Some(acc) if !image.beats(&acc.pivots) => continue,
            _ => {
                best = Some(Accumulator::new(&image, prime));
                previous = None;
            }
        }
        let acc = best.as_ref().expect("set above");
        if acc.free.is_empty() {
            return Ok(Vec::new());
        }
        if let Some(limit) = bit_limit {
            let bits = acc.modulus.bits() / 2;
            if bits > limit + 64 {
                return Err(Error::CoefficientOverflow { bits, limit });
            }
        }
        let Some(candidate) = acc.reconstruct() else {
            continue;
        };
        // only verify once two consecutive moduli agree
        if previous.as_ref() == Some(&candidate) && verify(&rows, &candidate) {
            return Ok(rref(candidate));
        }
        previous = Some(candidate);
    }
}

struct ModImage {
    pivots: Vec<usize>,
    free: Vec<usize>,
    /// For each free column, the kernel vector (with 1 at that column).
    kernel: Vec<Vec<u64>>,
}

impl ModImage {
    /// Higher rank wins; at equal rank the lexicographically smaller pivot list wins.
    fn beats(&self, pivots: &[usize]) -> bool {
        self.pivots.len() > pivots.len()
            || (self.pivots.len() == pivots.len() && self.pivots.as_slice() < pivots)
    }
}

struct Accumulator {
    pivots: Vec<usize>,
    free: Vec<usize>,
    residues: Vec<Vec<BigInt>>,
    modulus: BigInt,
}

impl Accumulator {
    fn new(image: &ModImage, p: u64) -> Self {
        Accumulator {
            pivots: image.pivots.clone(),
            free: image.free.clone(),
            residues: image
                .kernel
                .iter()
                .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
            modulus: BigInt::from(p),
        }
    }

    fn absorb(&mut self, image: &ModImage, p: u64) {
        let pb = BigInt::from(p);
        // x = r + M * ((a - r) * M^-1 mod p)
        let m_mod_p = (&self.modulus % &pb).to_u64().expect("reduced");
        let m_inv = inv_mod(m_mod_p, p);
        for (res, img) in self.residues.iter_mut().zip(&image.kernel) {
            for (r, &a) in res.iter_mut().zip(img) {
                let r_mod_p = (&*r % &pb).to_u64().expect("reduced");
                let diff = (a + p - r_mod_p) % p;
                let t = mul_mod(diff, m_inv, p);
                if t != 0 {
                    *r += &self.modulus * BigInt::from(t);
                }
            }
        }
        self.modulus *= pb;
    }

    fn reconstruct(&self) -> Option<Vec<Vec<BigRational>>> {
        self.residues
            .iter()
            .map(|v| {
                v.iter()
                    .map(|r| rational_reconstruct(r, &self.modulus))
                    .collect::<Option<Vec<_>>>()
            })
            .collect()
    }
}

fn verify(rows: &[&SparseRow], vectors: &[Vec<BigRational>]) -> bool {
    vectors.iter().all(|v| {
        let den = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = v
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        rows.iter().all(|row| {
            row.iter()
                .filter(|(j, _)| !ints[*j].is_zero())
                .fold(BigInt::zero(), |acc, (j, a)| acc + a * &ints[*j])
                .is_zero()
        })
    })
}

/// `r / s` with `r = s * a mod m` and `|r|, s <= sqrt(m / 2)`.
pub(super) fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let a = a.mod_floor(m);
    if a.is_zero() {
        return Some(BigRational::zero());
    }
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let (q, r) = r0.div_rem(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let t = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let (num, den) = if t1.sign() == Sign::Minus {
        (-r1, -t1)
    } else {
        (r1, t1)
    };
    if !num.gcd(&den).is_one() {
        return None;
    }
    Some(BigRational::new(num, den))
}

fn kernel_mod(rows: &[&SparseRow], ncols: usize, p: u64) -> ModImage {
    let pb = BigInt::from(p);
    let mut mat: Vec<Vec<u64>> = rows
        .iter()
        .map(|row| {
            let mut dense = vec![0u64; ncols];
            for (j, v) in row.iter() {
                dense[*j] = v.mod_floor(&pb).to_u64().expect("reduced");
            }
            dense
        })
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == mat.len() {
            break;
        }
        let Some(pr) = (r..mat.len()).find(|&i| mat[i][c] != 0) else {
            continue;
        };
        mat.swap(r, pr);
        let inv = inv_mod(mat[r][c], p);
        for x in mat[r][c..].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = std::mem::take(&mut mat[r]);
        for (i, row) in mat.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = p - row[c];
            for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if y != 0 {
                    *x = ((*x as u128 + f as u128 * y as u128) % p as u128) as u64;
                }
            }
        }
        mat[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..ncols).filter(|&c| !is_pivot[c]).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![0u64; ncols];
            v[f] = 1;
            for (i, &c) in pivots.iter().enumerate() {
                let x = mat[i][f];
                v[c] = if x == 0 { 0 } else { p - x };
            }
            v
        })
        .collect();
    ModImage {
        pivots,
        free,
        kernel,
    }
}

pub(super) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

pub(super) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    // deterministic for all 64-bit inputs
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn prev_prime(mut n: u64) -> u64 {
    loop {
        n -= 1;
        if is_prime(n) {
            return n;
        }
    }
}
