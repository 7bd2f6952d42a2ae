//! Sparse order-3 tensors and their structural operations.
//!
//! A tensor lives in `A ⊗ B ⊗ C` with factor dimensions `(a, b, c)`. All
//! composite indices are row-major: flattening a tensor on the A factor
//! produces the `a × (b·c)` matrix with column index `j·c + k`, and the
//! Kronecker product indexes each factor pair-major, `i·a' + i'`. One
//! convention, used everywhere.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::perm::Permutation;
use crate::poly::CubicPoly;
use crate::scalar::Scalar;

/// Which factor of `A ⊗ B ⊗ C` an operation acts on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Factor {
    A,
    B,
    C,
}

impl Factor {
    pub const ALL: [Factor; 3] = [Factor::A, Factor::B, Factor::C];

    pub fn name(self) -> &'static str {
        match self {
            Factor::A => "A",
            Factor::B => "B",
            Factor::C => "C",
        }
    }
}

/// Sparse order-3 tensor; absent entries are zero, stored entries are not.
///
/// Equality is structural: same dimensions and identical entry maps. The
/// map is ordered, so iteration and serialization are deterministic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tensor3 {
    dims: (usize, usize, usize),
    entries: BTreeMap<(usize, usize, usize), Scalar>,
}

impl Tensor3 {
    pub fn new(dims: (usize, usize, usize)) -> Self {
        Tensor3 {
            dims,
            entries: BTreeMap::new(),
        }
    }

    /// Accumulates entries (duplicates sum, zeros drop) with bounds checks.
    pub fn from_entries<I>(dims: (usize, usize, usize), entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize, usize), Scalar)>,
    {
        let mut t = Tensor3::new(dims);
        for (idx, v) in entries {
            t.check_bounds(idx)?;
            t.add_to(idx, &v);
        }
        Ok(t)
    }

    fn check_bounds(&self, (i, j, k): (usize, usize, usize)) -> Result<()> {
        if i >= self.dims.0 || j >= self.dims.1 || k >= self.dims.2 {
            return Err(Error::Shape(format!(
                "index ({i},{j},{k}) out of bounds for dims {:?}",
                self.dims
            )));
        }
        Ok(())
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, idx: (usize, usize, usize)) -> Scalar {
        self.entries.get(&idx).cloned().unwrap_or_default()
    }

    /// Stores `value` at `idx`; zero values delete. Panics out of bounds.
    pub fn set(&mut self, idx: (usize, usize, usize), value: Scalar) {
        self.check_bounds(idx).expect("tensor index in bounds");
        if value.is_zero() {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, value);
        }
    }

    pub fn add_to(&mut self, idx: (usize, usize, usize), value: &Scalar) {
        let sum = self.get(idx) + value;
        self.set(idx, sum);
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize, usize), &Scalar)> {
        self.entries.iter().map(|(&idx, v)| (idx, v))
    }

    pub fn scale(&self, s: &Scalar) -> Tensor3 {
        let mut out = Tensor3::new(self.dims);
        if s.is_zero() {
            return out;
        }
        for (idx, v) in self.iter() {
            out.entries.insert(idx, v * s);
        }
        out
    }

    pub fn sub(&self, other: &Tensor3) -> Result<Tensor3> {
        if self.dims != other.dims {
            return Err(Error::Shape(format!(
                "cannot subtract tensors of dims {:?} and {:?}",
                self.dims, other.dims
            )));
        }
        let mut out = self.clone();
        for (idx, v) in other.iter() {
            let diff = out.get(idx) - v;
            out.set(idx, diff);
        }
        Ok(out)
    }

    /// Kronecker product `self ⊠ other`; factor indices pair up pair-major.
    pub fn kronecker(&self, other: &Tensor3) -> Tensor3 {
        let (a, b, c) = self.dims;
        let (a2, b2, c2) = other.dims;
        let mut out = Tensor3::new((a * a2, b * b2, c * c2));
        for ((i, j, k), v) in self.iter() {
            for ((i2, j2, k2), w) in other.iter() {
                out.entries
                    .insert((i * a2 + i2, j * b2 + j2, k * c2 + k2), v * w);
            }
        }
        out
    }

    /// Left-associated Kronecker power; the 0th power is not defined.
    pub fn kronecker_pow(&self, k: usize) -> Result<Tensor3> {
        if k == 0 {
            return Err(Error::Domain("kronecker power requires k >= 1".into()));
        }
        let mut out = self.clone();
        for _ in 1..k {
            out = out.kronecker(self);
        }
        Ok(out)
    }

    /// Direct sum: `other`'s entries shifted past `self`'s dimensions.
    pub fn direct_sum(&self, other: &Tensor3) -> Tensor3 {
        let (a, b, c) = self.dims;
        let (a2, b2, c2) = other.dims;
        let mut out = Tensor3::new((a + a2, b + b2, c + c2));
        for (idx, v) in self.iter() {
            out.entries.insert(idx, v.clone());
        }
        for ((i, j, k), v) in other.iter() {
            out.entries.insert((a + i, b + j, c + k), v.clone());
        }
        out
    }

    /// Relabels the basis of each factor: entry `(i,j,k)` moves to
    /// `(pa(i), pb(j), pc(k))`.
    pub fn permute_coordinates(
        &self,
        pa: &Permutation,
        pb: &Permutation,
        pc: &Permutation,
    ) -> Result<Tensor3> {
        let (a, b, c) = self.dims;
        if pa.size() != a || pb.size() != b || pc.size() != c {
            return Err(Error::Shape(format!(
                "permutation sizes ({},{},{}) do not match dims {:?}",
                pa.size(),
                pb.size(),
                pc.size(),
                self.dims
            )));
        }
        let mut out = Tensor3::new(self.dims);
        for ((i, j, k), v) in self.iter() {
            out.entries
                .insert((pa.apply(i), pb.apply(j), pc.apply(k)), v.clone());
        }
        Ok(out)
    }

    /// Cycles the factors one step: `A ⊗ B ⊗ C → B ⊗ C ⊗ A`, so the old B
    /// factor ends up in the A position.
    pub fn cycle_factors(&self) -> Tensor3 {
        let (a, b, c) = self.dims;
        let mut out = Tensor3::new((b, c, a));
        for ((i, j, k), v) in self.iter() {
            out.entries.insert((j, k, i), v.clone());
        }
        out
    }

    /// Flattening as a matrix; for factor A the shape is `a × (b·c)` with
    /// column index `j·c + k`, and analogously for B (`i·c + k`) and C
    /// (`i·b + j`).
    pub fn flatten(&self, factor: Factor) -> ExactMatrix {
        let (a, b, c) = self.dims;
        let (rows, cols) = match factor {
            Factor::A => (a, b * c),
            Factor::B => (b, a * c),
            Factor::C => (c, a * b),
        };
        let mut m = ExactMatrix::new(rows, cols);
        for ((i, j, k), v) in self.iter() {
            let (r, col) = match factor {
                Factor::A => (i, j * c + k),
                Factor::B => (j, i * c + k),
                Factor::C => (k, i * b + j),
            };
            m.set(r, col, v.clone());
        }
        m
    }

    /// Koszul flattening of order `p` after projecting the A factor to
    /// dimension `2p+1`.
    ///
    /// With `T' = (projection ⊗ id ⊗ id)·T`, this is the matrix of
    /// `Λ^p A'' ⊗ B* → Λ^{p+1} A'' ⊗ C`, sending `(ω, β)` on a rank-one
    /// `u⊗v⊗w` to `β(v)·(u ∧ ω)⊗w`. Rows are indexed by pairs
    /// (lex-sorted (p+1)-subset, C index), columns by (lex-sorted p-subset,
    /// B index), subset-major. Inserting `i` into a subset `S` carries the
    /// sign `(-1)^{#{s ∈ S : s < i}}`.
    ///
    /// The rank of this matrix divided by `binom(2p, p)`, rounded up, lower
    /// bounds the border rank: rank-one tensors reach exactly `binom(2p, p)`.
    pub fn koszul_flattening(&self, p: usize, projection: &ExactMatrix) -> Result<ExactMatrix> {
        if p == 0 {
            return Err(Error::Domain("koszul flattening requires p >= 1".into()));
        }
        let (a, b, c) = self.dims;
        let m = 2 * p + 1;
        if projection.rows() != m || projection.cols() != a {
            return Err(Error::Shape(format!(
                "projection must be {}x{}, got {}x{}",
                m,
                a,
                projection.rows(),
                projection.cols()
            )));
        }
        // T' = (projection ⊗ id ⊗ id)·T, grouped by projected A index
        let mut projected: BTreeMap<(usize, usize, usize), Scalar> = BTreeMap::new();
        let mut proj_cols: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); a];
        for (r, col, v) in projection.iter() {
            proj_cols[col].push((r, v.clone()));
        }
        for ((i, j, k), v) in self.iter() {
            for (r, w) in &proj_cols[i] {
                let cell = projected.entry((*r, j, k)).or_insert_with(Scalar::zero);
                *cell += &(v * w);
            }
        }
        let subs_p = subsets(m, p);
        let subs_p1 = subsets(m, p + 1);
        let pos_p1: HashMap<u32, usize> = subs_p1
            .iter()
            .enumerate()
            .map(|(n, s)| (mask(s), n))
            .collect();
        let mut out = ExactMatrix::new(subs_p1.len() * c, subs_p.len() * b);
        for ((i, j, k), v) in &projected {
            if v.is_zero() {
                continue;
            }
            for (spos, s) in subs_p.iter().enumerate() {
                let bit = 1u32 << i;
                let sm = mask(s);
                if sm & bit != 0 {
                    continue;
                }
                let below = (sm & (bit - 1)).count_ones();
                let row = pos_p1[&(sm | bit)] * c + k;
                let col = spos * b + j;
                let signed = if below % 2 == 0 { v.clone() } else { -v };
                out.add_to(row, col, &signed);
            }
        }
        Ok(out)
    }

    /// Evaluates the tensor as a trilinear form.
    pub fn eval(&self, x: &[Scalar], y: &[Scalar], z: &[Scalar]) -> Result<Scalar> {
        let (a, b, c) = self.dims;
        if x.len() != a || y.len() != b || z.len() != c {
            return Err(Error::Shape(format!(
                "vector lengths ({},{},{}) do not match dims {:?}",
                x.len(),
                y.len(),
                z.len(),
                self.dims
            )));
        }
        let mut acc = Scalar::zero();
        for ((i, j, k), v) in self.iter() {
            acc += &(&(&(v * &x[i]) * &y[j]) * &z[k]);
        }
        Ok(acc)
    }

    /// The cubic polynomial `x ↦ T(x, x, x)`; defined only when the three
    /// factors are identified (equal dimensions).
    pub fn symmetrize(&self) -> Result<CubicPoly> {
        let (a, b, c) = self.dims;
        if a != b || b != c {
            return Err(Error::Shape(format!(
                "symmetrize requires equal factor dims, got {:?}",
                self.dims
            )));
        }
        let mut poly = CubicPoly::new(a);
        for ((i, j, k), v) in self.iter() {
            poly.add_monomial([i, j, k], v.clone());
        }
        Ok(poly)
    }
}

/// `n choose k` for the small subset counts used here.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// All k-subsets of `0..n` in lexicographic order of the sorted tuples.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

fn mask(subset: &[usize]) -> u32 {
    subset.iter().fold(0u32, |m, &i| m | (1 << i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cw_tensor, matmul_tensor, unit_tensor};

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn kronecker_with_unit_is_identity() {
        let t = cw_tensor(2);
        let u = unit_tensor(1);
        assert_eq!(u.kronecker(&t), t);
        assert_eq!(t.kronecker(&u), t);
    }

    #[test]
    fn kronecker_of_cw2_counts() {
        let t = cw_tensor(2);
        let k = t.kronecker(&t);
        assert_eq!(k.dims(), (9, 9, 9));
        assert_eq!(k.nnz(), 36);
    }

    #[test]
    fn kronecker_power_cases() {
        let t = cw_tensor(2);
        assert_eq!(t.kronecker_pow(1).unwrap(), t);
        assert_eq!(t.kronecker_pow(2).unwrap(), t.kronecker(&t));
        assert!(t.kronecker_pow(0).is_err());

        let diag = unit_tensor(2).kronecker_pow(2).unwrap();
        assert_eq!(diag, unit_tensor(4));
    }

    #[test]
    fn direct_sum_cases() {
        assert_eq!(unit_tensor(1).direct_sum(&unit_tensor(1)), unit_tensor(2));
        let t = cw_tensor(3);
        assert_eq!(t.direct_sum(&Tensor3::new((0, 0, 0))), t);
        let s = matmul_tensor(1, 1, 2).direct_sum(&matmul_tensor(2, 1, 1));
        assert_eq!(s.dims(), (4, 3, 4));
        assert_eq!(s.nnz(), 4);
    }

    #[test]
    fn permute_and_invert() {
        let mut t = Tensor3::new((2, 1, 1));
        t.set((0, 0, 0), Scalar::one());
        let swap = Permutation::from_images(vec![1, 0]).unwrap();
        let id1 = Permutation::identity(1);
        let moved = t.permute_coordinates(&swap, &id1, &id1).unwrap();
        assert_eq!(moved.get((1, 0, 0)), Scalar::one());
        let back = moved
            .permute_coordinates(&swap.inverse(), &id1, &id1)
            .unwrap();
        assert_eq!(back, t);
        assert!(t.permute_coordinates(&id1, &id1, &id1).is_err());
    }

    #[test]
    fn flatten_shapes_and_ranks() {
        let m2 = matmul_tensor(2, 2, 2);
        let fa = m2.flatten(Factor::A);
        assert_eq!((fa.rows(), fa.cols()), (4, 16));
        assert_eq!(fa.rank(), 4);

        let u = unit_tensor(3);
        assert_eq!(u.flatten(Factor::A).rank(), 3);

        let cw = cw_tensor(2);
        let f = cw.flatten(Factor::A);
        assert_eq!((f.rows(), f.cols()), (3, 9));
        assert_eq!(f.rank(), 3);
    }

    #[test]
    fn koszul_rank_one_reaches_binomial() {
        let mut t = Tensor3::new((3, 1, 1));
        t.set((0, 0, 0), Scalar::one());
        let k = t.koszul_flattening(1, &ExactMatrix::identity(3)).unwrap();
        assert_eq!((k.rows(), k.cols()), (3, 3));
        assert_eq!(k.rank(), 2);
    }

    #[test]
    fn koszul_matmul2_full_rank() {
        let m2 = matmul_tensor(2, 2, 2);
        let proj = ExactMatrix::random(3, 4, 1, 5).unwrap();
        let k = m2.koszul_flattening(1, &proj).unwrap();
        assert_eq!((k.rows(), k.cols()), (12, 12));
        assert_eq!(k.rank(), 12);
    }

    #[test]
    fn koszul_shape_errors() {
        let m2 = matmul_tensor(2, 2, 2);
        let bad = ExactMatrix::identity(4);
        assert!(m2.koszul_flattening(1, &bad).is_err());
        assert!(m2
            .koszul_flattening(0, &ExactMatrix::identity(1))
            .is_err());
    }

    #[test]
    fn trilinear_eval_traces() {
        let m2 = matmul_tensor(2, 2, 2);
        let id = ints(&[1, 0, 0, 1]);
        assert_eq!(m2.eval(&id, &id, &id).unwrap(), Scalar::from_int(2));

        let swap = ints(&[0, 1, 1, 0]);
        assert_eq!(
            m2.eval(&swap, &swap, &swap).unwrap(),
            Scalar::zero()
        );

        let ones = ints(&[1, 1, 1]);
        assert_eq!(
            unit_tensor(3).eval(&ones, &ones, &ones).unwrap(),
            Scalar::from_int(3)
        );

        assert!(m2.eval(&ones, &id, &id).is_err());
    }

    #[test]
    fn symmetrize_requires_cubical() {
        assert!(matmul_tensor(1, 1, 2).symmetrize().is_err());
    }

    #[test]
    fn symmetrize_unit_tensor() {
        let p = unit_tensor(2).symmetrize().unwrap();
        let mut expect = CubicPoly::new(2);
        expect.add_monomial([0, 0, 0], Scalar::one());
        expect.add_monomial([1, 1, 1], Scalar::one());
        assert_eq!(p, expect);
    }

    // The trilinear form of cw_tensor(1) on the diagonal is 3·x0·x1².
    #[test]
    fn symmetrize_cw1() {
        let p = cw_tensor(1).symmetrize().unwrap();
        let mut expect = CubicPoly::new(2);
        expect.add_monomial([0, 1, 1], Scalar::from_int(3));
        assert_eq!(p, expect);
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(2, 1), 2);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(3, 5), 0);
    }
}
