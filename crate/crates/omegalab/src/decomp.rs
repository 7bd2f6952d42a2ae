//! Exact verification of rank and Waring decompositions.
//!
//! A verifier never trusts transcription: it expands the claimed terms and
//! compares with the target exactly, reporting the sparse difference on
//! failure.

use crate::error::{Error, Result};
use crate::poly::CubicPoly;
use crate::scalar::Scalar;
use crate::tensor::Tensor3;

/// One rank-one summand `coeff · a ⊗ b ⊗ c`.
///
/// Canonical form scales each vector so its first nonzero entry is 1,
/// pushing all scale into `coeff`; equality of canonicalized terms then
/// coincides with equality of the underlying rank-one tensors. (Normalizing
/// only two of the three vectors would leave a free rescaling between the
/// third vector and the coefficient.)
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct RankOneTerm {
    vec_a: Vec<Scalar>,
    vec_b: Vec<Scalar>,
    vec_c: Vec<Scalar>,
    coeff: Scalar,
}

impl RankOneTerm {
    /// Builds a term; zero vectors and zero coefficients are rejected.
    pub fn new(
        vec_a: Vec<Scalar>,
        vec_b: Vec<Scalar>,
        vec_c: Vec<Scalar>,
        coeff: Scalar,
    ) -> Result<Self> {
        for (name, v) in [("a", &vec_a), ("b", &vec_b), ("c", &vec_c)] {
            if v.iter().all(Scalar::is_zero) {
                return Err(Error::Domain(format!("zero {name}-vector in rank-one term")));
            }
        }
        if coeff.is_zero() {
            return Err(Error::Domain("zero coefficient in rank-one term".into()));
        }
        Ok(RankOneTerm {
            vec_a,
            vec_b,
            vec_c,
            coeff,
        })
    }

    pub fn from_ints(a: &[i64], b: &[i64], c: &[i64], coeff: i64) -> Result<Self> {
        let conv = |v: &[i64]| v.iter().map(|&x| Scalar::from_int(x)).collect();
        RankOneTerm::new(conv(a), conv(b), conv(c), Scalar::from_int(coeff))
    }

    pub fn vec_a(&self) -> &[Scalar] {
        &self.vec_a
    }

    pub fn vec_b(&self) -> &[Scalar] {
        &self.vec_b
    }

    pub fn vec_c(&self) -> &[Scalar] {
        &self.vec_c
    }

    pub fn coeff(&self) -> &Scalar {
        &self.coeff
    }

    pub fn lengths(&self) -> (usize, usize, usize) {
        (self.vec_a.len(), self.vec_b.len(), self.vec_c.len())
    }

    /// Canonical representative of the same rank-one tensor.
    pub fn canonicalize(mut self) -> Self {
        for v in [&mut self.vec_a, &mut self.vec_b, &mut self.vec_c] {
            let lead = v
                .iter()
                .find(|x| !x.is_zero())
                .expect("term vectors are nonzero")
                .clone();
            let inv = lead.recip().expect("nonzero lead");
            for x in v.iter_mut() {
                *x *= &inv;
            }
            self.coeff *= &lead;
        }
        self
    }

    /// Adds `coeff·a⊗b⊗c` into `acc`.
    pub fn accumulate_into(&self, acc: &mut Tensor3) {
        for (i, ai) in self.vec_a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let ca = &self.coeff * ai;
            for (j, bj) in self.vec_b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let cab = &ca * bj;
                for (k, ck) in self.vec_c.iter().enumerate() {
                    if ck.is_zero() {
                        continue;
                    }
                    acc.add_to((i, j, k), &(&cab * ck));
                }
            }
        }
    }
}

/// A claimed expression of a tensor as a sum of rank-one terms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RankDecomposition {
    dims: (usize, usize, usize),
    terms: Vec<RankOneTerm>,
}

impl RankDecomposition {
    pub fn new(dims: (usize, usize, usize), terms: Vec<RankOneTerm>) -> Result<Self> {
        for (n, t) in terms.iter().enumerate() {
            if t.lengths() != dims {
                return Err(Error::Shape(format!(
                    "term {n} has vector lengths {:?}, expected {:?}",
                    t.lengths(),
                    dims
                )));
            }
        }
        Ok(RankDecomposition { dims, terms })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn terms(&self) -> &[RankOneTerm] {
        &self.terms
    }

    pub fn expand_tensor(&self) -> Tensor3 {
        let mut acc = Tensor3::new(self.dims);
        for t in &self.terms {
            t.accumulate_into(&mut acc);
        }
        acc
    }

    /// Exact check of `Σ coeff·a⊗b⊗c = target`.
    pub fn verify(&self, target: &Tensor3) -> Result<RankVerification> {
        if target.dims() != self.dims {
            return Err(Error::Shape(format!(
                "decomposition dims {:?} do not match tensor dims {:?}",
                self.dims,
                target.dims()
            )));
        }
        let difference = self.expand_tensor().sub(target)?;
        Ok(RankVerification {
            pass: difference.is_zero(),
            term_count: self.terms.len(),
            difference,
        })
    }

    /// The multiset of canonicalized terms, sorted; this is the object the
    /// decomposition symmetry group permutes.
    pub fn canonical_terms(&self) -> Vec<RankOneTerm> {
        let mut v: Vec<RankOneTerm> = self
            .terms
            .iter()
            .cloned()
            .map(RankOneTerm::canonicalize)
            .collect();
        v.sort();
        v
    }
}

/// Outcome of a rank-decomposition check.
#[derive(Clone, Debug)]
pub struct RankVerification {
    pub pass: bool,
    pub term_count: usize,
    /// `Σ terms − target`; empty exactly when the check passes.
    pub difference: Tensor3,
}

/// One summand `coeff · (linear form)³` of a Waring decomposition.
///
/// Coefficients are kept explicit: cube roots of rationals need not be
/// rational, so absorbing them into the form would leave ℚ.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct WaringTerm {
    linform: Vec<Scalar>,
    coeff: Scalar,
}

impl WaringTerm {
    pub fn new(linform: Vec<Scalar>, coeff: Scalar) -> Result<Self> {
        if linform.iter().all(Scalar::is_zero) {
            return Err(Error::Domain("zero linear form in Waring term".into()));
        }
        if coeff.is_zero() {
            return Err(Error::Domain("zero coefficient in Waring term".into()));
        }
        Ok(WaringTerm { linform, coeff })
    }

    pub fn from_ints(form: &[i64], coeff: Scalar) -> Result<Self> {
        WaringTerm::new(form.iter().map(|&x| Scalar::from_int(x)).collect(), coeff)
    }

    pub fn linform(&self) -> &[Scalar] {
        &self.linform
    }

    pub fn coeff(&self) -> &Scalar {
        &self.coeff
    }
}

/// A claimed expression of a cubic as a weighted sum of cubes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WaringDecomposition {
    nvars: usize,
    terms: Vec<WaringTerm>,
}

impl WaringDecomposition {
    pub fn new(nvars: usize, terms: Vec<WaringTerm>) -> Result<Self> {
        for (n, t) in terms.iter().enumerate() {
            if t.linform.len() != nvars {
                return Err(Error::Shape(format!(
                    "Waring term {n} has {} variables, expected {nvars}",
                    t.linform.len()
                )));
            }
        }
        Ok(WaringDecomposition { nvars, terms })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[WaringTerm] {
        &self.terms
    }

    pub fn expand_poly(&self) -> CubicPoly {
        let mut acc = CubicPoly::new(self.nvars);
        for t in &self.terms {
            acc = acc
                .add(&CubicPoly::cube_of_linear_form(&t.linform, &t.coeff))
                .expect("matching variable counts");
        }
        acc
    }

    /// Exact check of `Σ coeff·(form)³ = target`.
    pub fn verify(&self, target: &CubicPoly) -> Result<WaringVerification> {
        if target.nvars() != self.nvars {
            return Err(Error::Shape(format!(
                "decomposition in {} variables does not match polynomial in {}",
                self.nvars,
                target.nvars()
            )));
        }
        let difference = self.expand_poly().sub(target)?;
        Ok(WaringVerification {
            pass: difference.is_zero(),
            term_count: self.terms.len(),
            difference,
        })
    }
}

/// Outcome of a Waring-decomposition check.
#[derive(Clone, Debug)]
pub struct WaringVerification {
    pub pass: bool,
    pub term_count: usize,
    /// `Σ cubes − target`; zero exactly when the check passes.
    pub difference: CubicPoly,
}
