//! Cubic polynomials in canonical monomial form.
//!
//! Symmetrized tensors and Waring decompositions live here. A monomial is a
//! sorted variable triple `[i, j, k]` with `i ≤ j ≤ k`; the stored
//! coefficient is the full coefficient of `x_i·x_j·x_k` in the expansion.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Homogeneous cubic polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CubicPoly {
    nvars: usize,
    terms: BTreeMap<[usize; 3], Scalar>,
}

impl CubicPoly {
    pub fn new(nvars: usize) -> Self {
        CubicPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nnz(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mono: [usize; 3]) -> Scalar {
        let mut m = mono;
        m.sort_unstable();
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    /// Adds `coeff·x_i·x_j·x_k`; the index triple is sorted internally.
    pub fn add_monomial(&mut self, mono: [usize; 3], coeff: Scalar) {
        let mut m = mono;
        m.sort_unstable();
        assert!(m[2] < self.nvars, "variable index out of range");
        let sum = self.coefficient(m) + coeff;
        if sum.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, sum);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = ([usize; 3], &Scalar)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn add(&self, other: &CubicPoly) -> Result<CubicPoly> {
        if self.nvars != other.nvars {
            return Err(Error::Shape(format!(
                "cannot add polynomials in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        let mut out = self.clone();
        for (m, c) in other.iter() {
            out.add_monomial(m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &CubicPoly) -> Result<CubicPoly> {
        if self.nvars != other.nvars {
            return Err(Error::Shape(format!(
                "cannot subtract polynomials in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        let mut out = self.clone();
        for (m, c) in other.iter() {
            out.add_monomial(m, -c);
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::Shape(format!(
                "polynomial in {} variables evaluated at a point of length {}",
                self.nvars,
                point.len()
            )));
        }
        let mut acc = Scalar::zero();
        for ([i, j, k], c) in self.iter() {
            acc += &(&(&(c * &point[i]) * &point[j]) * &point[k]);
        }
        Ok(acc)
    }

    /// Expansion of `coeff·(Σ form_i·x_i)³` via the multinomial theorem.
    pub fn cube_of_linear_form(form: &[Scalar], coeff: &Scalar) -> CubicPoly {
        let n = form.len();
        let mut out = CubicPoly::new(n);
        let support: Vec<usize> = (0..n).filter(|&i| !form[i].is_zero()).collect();
        for (a, &i) in support.iter().enumerate() {
            for (b, &j) in support.iter().enumerate().skip(a) {
                for &k in support.iter().skip(b) {
                    let mult = if i == j && j == k {
                        1
                    } else if i == j || j == k {
                        3
                    } else {
                        6
                    };
                    let c = &(&(&form[i] * &form[j]) * &form[k]) * &Scalar::from_int(mult);
                    out.add_monomial([i, j, k], &c * coeff);
                }
            }
        }
        out
    }
}

impl fmt::Display for CubicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ([i, j, k], c) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})·x{i}·x{j}·x{k}")?;
        }
        Ok(())
    }
}
