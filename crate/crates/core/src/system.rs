use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::Result;
use crate::exactcore::{rational_roots, squarefree_part, RfMatrix, UniPoly};

/// A linear system `y' = A(x) y` with `A` an `n x n` matrix over `Q(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSpec {
    a: RfMatrix,
    var: String,
    denominator: UniPoly,
}

impl SystemSpec {
    pub fn new(a: RfMatrix) -> Result<Self> {
        Self::with_var(a, "x")
    }

    pub fn with_var(a: RfMatrix, var: impl Into<String>) -> Result<Self> {
        a.ensure_square()?;
        let denominator = a.common_denominator();
        Ok(SystemSpec {
            a,
            var: var.into(),
            denominator,
        })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn matrix(&self) -> &RfMatrix {
        &self.a
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    /// Least common multiple of the entry denominators; its roots are the finite singularities.
    pub fn denominator(&self) -> &UniPoly {
        &self.denominator
    }

    /// Rational singular points (roots of the common denominator in Q).
    pub fn rational_singularities(&self) -> Vec<BigRational> {
        if self.denominator.is_constant() {
            return Vec::new();
        }
        let sf = squarefree_part(&self.denominator).expect("nonzero");
        rational_roots(&sf).expect("nonzero")
    }

    /// Smallest nonnegative integer that is not a pole of any entry.
    pub fn evaluation_point(&self) -> BigRational {
        let mut k = BigInt::zero();
        loop {
            let at = BigRational::from_integer(k.clone());
            if !self.denominator.eval(&at).is_zero() {
                return at;
            }
            k += 1;
        }
    }
}
