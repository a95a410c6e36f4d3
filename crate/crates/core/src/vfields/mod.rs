//! Polynomial vertical vector fields `sum_j P_j(x, y) d/dy_j` over `Q(x)`.
//!
//! Fields are families parameterized by `x`: [`lie_bracket`] only sees the `y`
//! variables, while [`bracket_with_x`] adds the `d/dx` part coming from the
//! connection field `X = d/dx + v_A` of the system `y' = A y`.

mod mvpoly;

use std::fmt;

use num_rational::BigRational;

pub use mvpoly::{Exponent, MvPoly};

use crate::error::{Error, Result};
use crate::exactcore::{RatFunc, RfMatrix};
use crate::system::SystemSpec;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VerticalField {
    n: usize,
    components: Vec<MvPoly>,
}

impl VerticalField {
    pub fn new(components: Vec<MvPoly>) -> Result<Self> {
        let n = components.len();
        for (i, c) in components.iter().enumerate() {
            if c.nvars() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.nvars(),
                }
                .at_component(i));
            }
        }
        Ok(VerticalField { n, components })
    }

    pub fn zero(n: usize) -> Self {
        VerticalField {
            n,
            components: vec![MvPoly::zero(n); n],
        }
    }

    /// The Euler field `sum_i y_i d/dy_i`.
    pub fn euler(n: usize) -> Self {
        VerticalField {
            n,
            components: (0..n).map(|i| MvPoly::var(n, i)).collect(),
        }
    }

    /// The linear field `v_B = sum_j (sum_l B_jl y_l) d/dy_j`.
    pub fn linear(b: &RfMatrix) -> Result<Self> {
        let n = b.ensure_square()?;
        Ok(VerticalField {
            n,
            components: (0..n).map(|j| MvPoly::linear(b.row(j))).collect(),
        })
    }

    /// `c * y^exp d/dy_{target}`
    pub fn monomial(n: usize, target: usize, exp: Exponent, c: RatFunc) -> Self {
        let mut f = Self::zero(n);
        f.components[target] = MvPoly::monomial(n, exp, c);
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[MvPoly] {
        &self.components
    }

    pub fn component(&self, j: usize) -> &MvPoly {
        &self.components[j]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(MvPoly::is_zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.components.iter().filter_map(MvPoly::degree).max()
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.components.iter().all(|c| c.is_homogeneous_of(d))
    }

    pub fn is_x_free(&self) -> bool {
        self.components.iter().all(MvPoly::is_x_free)
    }

    fn check_same(&self, rhs: &VerticalField) -> Result<()> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: rhs.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, rhs: &VerticalField) -> Result<VerticalField> {
        self.check_same(rhs)?;
        Ok(self.zip_map(rhs, MvPoly::add))
    }

    pub fn sub(&self, rhs: &VerticalField) -> Result<VerticalField> {
        self.check_same(rhs)?;
        Ok(self.zip_map(rhs, MvPoly::sub))
    }

    fn zip_map(&self, rhs: &VerticalField, f: impl Fn(&MvPoly, &MvPoly) -> MvPoly) -> Self {
        VerticalField {
            n: self.n,
            components: self
                .components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &RatFunc) -> VerticalField {
        self.map(|p| p.scale(c))
    }

    /// Multiply every component by a polynomial.
    pub fn mul_poly(&self, p: &MvPoly) -> VerticalField {
        self.map(|c| c.mul(p))
    }

    pub fn neg(&self) -> VerticalField {
        self.map(MvPoly::neg)
    }

    /// `dY/dx`: differentiate every coefficient.
    pub fn derivative_x(&self) -> VerticalField {
        self.map(MvPoly::derivative_x)
    }

    /// The constant field `Y(x0)`.
    pub fn eval_x(&self, at: &BigRational) -> Result<VerticalField> {
        Ok(VerticalField {
            n: self.n,
            components: self
                .components
                .iter()
                .map(|c| c.eval_x(at))
                .collect::<Result<_>>()?,
        })
    }

    pub fn homogeneous_part(&self, d: u32) -> VerticalField {
        self.map(|c| c.homogeneous_part(d))
    }

    pub fn truncate(&self, d: u32) -> VerticalField {
        self.map(|c| c.truncate(d))
    }

    fn map(&self, f: impl Fn(&MvPoly) -> MvPoly) -> VerticalField {
        VerticalField {
            n: self.n,
            components: self.components.iter().map(f).collect(),
        }
    }

    pub fn to_text(&self, var: &str) -> Vec<String> {
        self.components.iter().map(|c| c.to_text(var)).collect()
    }
}

impl fmt::Debug for VerticalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| format!("({c}) d/dy{}", j + 1))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A field `xi(x, y) d/dx + sum_j P_j d/dy_j` with a possibly nonzero `d/dx` part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbientField {
    pub xcomp: MvPoly,
    pub vertical: VerticalField,
}

impl AmbientField {
    pub fn new(xcomp: MvPoly, vertical: VerticalField) -> Result<Self> {
        if xcomp.nvars() != vertical.n() {
            return Err(Error::DimensionMismatch {
                expected: vertical.n(),
                found: xcomp.nvars(),
            });
        }
        Ok(AmbientField { xcomp, vertical })
    }

    /// The connection field `X = d/dx + v_A`.
    pub fn connection(system: &SystemSpec) -> Self {
        let n = system.n();
        AmbientField {
            xcomp: MvPoly::one(n),
            vertical: VerticalField::linear(system.matrix()).expect("square"),
        }
    }
}

/// `[Y, Z]` on the fiber: component `j` is `sum_k (Y_k dZ_j/dy_k - Z_k dY_j/dy_k)`.
pub fn lie_bracket(y: &VerticalField, z: &VerticalField) -> Result<VerticalField> {
    y.check_same(z)?;
    let n = y.n;
    let components = (0..n)
        .map(|j| {
            // gather every product term first so each coefficient is summed once
            let mut terms = Vec::new();
            for k in 0..n {
                if !y.components[k].is_zero() {
                    let p = y.components[k].mul(&z.components[j].partial(k));
                    terms.extend(p.terms().map(|(e, c)| (e.clone(), c.clone())));
                }
                if !z.components[k].is_zero() {
                    let p = z.components[k].mul(&y.components[j].partial(k));
                    terms.extend(p.terms().map(|(e, c)| (e.clone(), -c)));
                }
            }
            MvPoly::from_terms(n, terms)
        })
        .collect();
    Ok(VerticalField { n, components })
}

/// `[X, Y] = dY/dx + [v_A, Y]`; zero exactly when `Y` is a symmetry of `y' = A y`.
pub fn bracket_with_x(system: &SystemSpec, y: &VerticalField) -> Result<VerticalField> {
    if system.n() != y.n {
        return Err(Error::DimensionMismatch {
            expected: system.n(),
            found: y.n,
        });
    }
    let va = VerticalField::linear(system.matrix())?;
    y.derivative_x().add(&lie_bracket(&va, y)?)
}

pub fn is_symmetry(system: &SystemSpec, y: &VerticalField) -> Result<bool> {
    Ok(bracket_with_x(system, y)?.is_zero())
}

/// Nonzero homogeneous components as `(degree, component)` in ascending degree.
pub fn homogeneous_components(y: &VerticalField) -> Vec<(u32, VerticalField)> {
    let Some(top) = y.degree() else {
        return Vec::new();
    };
    (0..=top)
        .map(|d| (d, y.homogeneous_part(d)))
        .filter(|(_, f)| !f.is_zero())
        .collect()
}

/// `Y - (Y x) X`, the vertical field equivalent to `Y` modulo characteristic symmetries.
pub fn vertical_representative(y: &AmbientField, system: &SystemSpec) -> Result<VerticalField> {
    if y.vertical.n() != system.n() {
        return Err(Error::DimensionMismatch {
            expected: system.n(),
            found: y.vertical.n(),
        });
    }
    let va = VerticalField::linear(system.matrix())?;
    y.vertical.sub(&va.mul_poly(&y.xcomp))
}

/// Homogeneous components of degrees `0..=order` of the power series of `num / den` in `y`.
pub fn maclaurin_truncate(
    num: &VerticalField,
    den: &MvPoly,
    order: u32,
) -> Result<Vec<(u32, VerticalField)>> {
    if den.nvars() != num.n() {
        return Err(Error::DimensionMismatch {
            expected: num.n(),
            found: den.nvars(),
        });
    }
    let c0 = den.constant_term();
    if c0.is_zero() {
        return Err(Error::VanishingConstantTerm);
    }
    let inv_c0 = c0.recip()?;
    // 1/den = (1/c0) sum_k (-(den - c0)/c0)^k
    let n = num.n();
    let rest = den.sub(&MvPoly::constant(n, c0)).scale(&(-&inv_c0));
    let mut series = MvPoly::one(n);
    let mut power = MvPoly::one(n);
    for _ in 0..order {
        power = power.mul(&rest).truncate(order);
        if power.is_zero() {
            break;
        }
        series = series.add(&power);
    }
    let series = series.scale(&inv_c0);
    let expanded = num.mul_poly(&series).truncate(order);
    Ok(homogeneous_components(&expanded))
}

#[cfg(test)]
mod tests;
