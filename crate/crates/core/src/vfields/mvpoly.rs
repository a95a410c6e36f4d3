use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exactcore::RatFunc;

/// Exponent vector of a monomial `y1^a1 ... yn^an`.
pub type Exponent = Vec<u32>;

/// Polynomial in `y1..yn` with coefficients in `Q(x)`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MvPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, RatFunc>,
}

impl MvPoly {
    pub fn zero(nvars: usize) -> Self {
        MvPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: RatFunc) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, RatFunc::one())
    }

    /// The coordinate `y_{i+1}` (0-based index `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, RatFunc::one())
    }

    pub fn monomial(nvars: usize, exp: Exponent, c: RatFunc) -> Self {
        assert_eq!(exp.len(), nvars, "exponent length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        MvPoly { nvars, terms }
    }

    /// Linear form `sum_l coeffs[l] * y_l`.
    pub fn linear(coeffs: &[RatFunc]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (l, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[l] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &RatFunc)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &[u32]) -> RatFunc {
        self.terms.get(exp).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Polynomial from unsorted terms; coefficients of equal monomials are summed together.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, RatFunc)>) -> Self {
        let mut groups: BTreeMap<Exponent, Vec<RatFunc>> = BTreeMap::new();
        for (e, c) in terms {
            debug_assert_eq!(e.len(), nvars);
            groups.entry(e).or_default().push(c);
        }
        MvPoly {
            nvars,
            terms: groups
                .into_iter()
                .map(|(e, cs)| (e, RatFunc::sum(&cs)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn add_term(&mut self, exp: Exponent, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(exp.len(), self.nvars);
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    pub fn homogeneous_part(&self, d: u32) -> MvPoly {
        MvPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drop all terms of total degree above `d`.
    pub fn truncate(&self, d: u32) -> MvPoly {
        MvPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn constant_term(&self) -> RatFunc {
        self.coeff(&vec![0; self.nvars])
    }

    /// True when no coefficient depends on `x`.
    pub fn is_x_free(&self) -> bool {
        self.terms.values().all(RatFunc::is_constant)
    }

    /// True when the polynomial does not involve any `y_i`.
    pub fn is_y_free(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&a| a == 0))
    }

    pub fn scale(&self, c: &RatFunc) -> MvPoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MvPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn scale_q(&self, c: &BigRational) -> MvPoly {
        self.scale(&RatFunc::constant(c.clone()))
    }

    pub fn add(&self, rhs: &MvPoly) -> MvPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &MvPoly) -> MvPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> MvPoly {
        MvPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &MvPoly) -> MvPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count");
        let products = self.terms.iter().flat_map(|(ea, ca)| {
            rhs.terms.iter().map(move |(eb, cb)| {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                (e, ca * cb)
            })
        });
        Self::from_terms(self.nvars, products)
    }

    pub fn pow(&self, mut k: u32) -> MvPoly {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `d/dy_i` (0-based).
    pub fn partial(&self, i: usize) -> MvPoly {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c.scale(&BigRational::from_integer(e[i].into())));
        }
        out
    }

    /// Differentiate every coefficient with respect to `x`.
    pub fn derivative_x(&self) -> MvPoly {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.derivative());
        }
        out
    }

    /// Evaluate coefficients at `x = at`.
    pub fn eval_x(&self, at: &BigRational) -> Result<MvPoly> {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let v = c.eval(at).ok_or_else(|| Error::PoleAtPoint(at.to_string()))?;
            out.add_term(e.clone(), RatFunc::constant(v));
        }
        Ok(out)
    }

    /// Substitute `y_i -> images[i]`; the images may live in a different ring of variables.
    pub fn substitute(&self, images: &[MvPoly]) -> MvPoly {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map_or(0, MvPoly::nvars);
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut term = MvPoly::constant(target, c.clone());
            for (i, &a) in e.iter().enumerate() {
                if a > 0 {
                    term = term.mul(&images[i].pow(a));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Embed into a ring with more variables (new variables appended).
    pub fn extend_vars(&self, nvars: usize) -> MvPoly {
        assert!(nvars >= self.nvars);
        MvPoly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2.resize(nvars, 0);
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Render with the given coefficient variable and fiber variable names.
    pub fn to_text_with(&self, var: &str, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut keys: Vec<&Exponent> = self.terms.keys().collect();
        // higher total degree first, then descending lexicographic
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for e in keys {
            let c = &self.terms[e];
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(i, &a)| {
                    if a == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{a}", names[i])
                    }
                })
                .collect();
            let mono = mono.join("*");
            let (neg, body) = term_text(c, var, &mono);
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }

    pub fn to_text(&self, var: &str) -> String {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("y{i}")).collect();
        self.to_text_with(var, &names)
    }
}

// (is_negative, magnitude text)
fn term_text(c: &RatFunc, var: &str, mono: &str) -> (bool, String) {
    if let Some(q) = c.as_constant() {
        let neg = q.is_negative();
        let mag = q.abs();
        let body = if mono.is_empty() {
            mag.to_string()
        } else if mag.is_one() {
            mono.to_string()
        } else {
            format!("{mag}*{mono}")
        };
        return (neg, body);
    }
    let ct = c.to_text(var);
    if mono.is_empty() {
        (false, format!("({ct})"))
    } else {
        (false, format!("({ct})*{mono}"))
    }
}

impl fmt::Debug for MvPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MvPoly({})", self.to_text("x"))
    }
}

impl fmt::Display for MvPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text("x"))
    }
}
