//! Closed-form constructors for the structured tensors of fast matrix
//! multiplication.
//!
//! Basis conventions: an `l×m` matrix `X` flattens row-major, so its `(i,j)`
//! entry sits at index `i·m + j`. The matrix multiplication tensor is the
//! trilinear form `(X, Y, Z) ↦ trace(XYZ)`.

use crate::decomp::{RankDecomposition, RankOneTerm};
use crate::perm::Permutation;
use crate::poly::CubicPoly;
use crate::scalar::Scalar;
use crate::tensor::Tensor3;

/// The rectangular matrix multiplication tensor `M⟨l,m,n⟩` on
/// `(l×m) × (m×n) × (n×l)` matrices, with unit entries at
/// `(i·m+j, j·n+k, k·l+i)`.
pub fn matmul_tensor(l: usize, m: usize, n: usize) -> Tensor3 {
    assert!(l >= 1 && m >= 1 && n >= 1, "matmul dimensions must be positive");
    let mut t = Tensor3::new((l * m, m * n, n * l));
    for i in 0..l {
        for j in 0..m {
            for k in 0..n {
                t.set((i * m + j, j * n + k, k * l + i), Scalar::one());
            }
        }
    }
    t
}

/// The diagonal tensor of rank `r` (unit entries on the diagonal).
pub fn unit_tensor(r: usize) -> Tensor3 {
    assert!(r >= 1, "unit tensor size must be positive");
    let mut t = Tensor3::new((r, r, r));
    for i in 0..r {
        t.set((i, i, i), Scalar::one());
    }
    t
}

/// The little Coppersmith–Winograd tensor:
/// `Σ_{j=1}^q a_0⊗b_j⊗c_j + a_j⊗b_0⊗c_j + a_j⊗b_j⊗c_0`
/// in dimension `q+1`, with index 0 the distinguished basis vector.
pub fn cw_tensor(q: usize) -> Tensor3 {
    assert!(q >= 1, "cw tensor parameter must be positive");
    let mut t = Tensor3::new((q + 1, q + 1, q + 1));
    for j in 1..=q {
        t.set((0, j, j), Scalar::one());
        t.set((j, 0, j), Scalar::one());
        t.set((j, j, 0), Scalar::one());
    }
    t
}

/// The big Coppersmith–Winograd tensor in dimension `q+2`: the little tensor
/// embedded in the first `q+1` coordinates plus the three corner terms
/// `a_0⊗b_{q+1}⊗c_0`-style completions
/// (`(0,0,q+1)`, `(0,q+1,0)`, `(q+1,0,0)`), following Coppersmith &
/// Winograd (1990).
pub fn big_cw_tensor(q: usize) -> Tensor3 {
    assert!(q >= 1, "big cw tensor parameter must be positive");
    let mut t = Tensor3::new((q + 2, q + 2, q + 2));
    for j in 1..=q {
        t.set((0, j, j), Scalar::one());
        t.set((j, 0, j), Scalar::one());
        t.set((j, j, 0), Scalar::one());
    }
    t.set((0, 0, q + 1), Scalar::one());
    t.set((0, q + 1, 0), Scalar::one());
    t.set((q + 1, 0, 0), Scalar::one());
    t
}

/// The symmetrized matrix multiplication polynomial `trace(X³)` as a cubic
/// in the `n²` entries of `X`: `Σ_{i,j,k} x_{ij}·x_{jk}·x_{ki}`.
pub fn smat_poly(n: usize) -> CubicPoly {
    assert!(n >= 1, "smat dimension must be positive");
    let mut p = CubicPoly::new(n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                p.add_monomial([i * n + j, j * n + k, k * n + i], Scalar::one());
            }
        }
    }
    p
}

/// The factor relabelings realizing `M⟨l,m,n⟩ ⊠ M⟨l',m',n'⟩ =
/// M⟨ll',mm',nn'⟩`.
///
/// On the A factor the pair-major index `(i·m+j)·(l'm') + (i'·m'+j')` maps to
/// `(i·l'+i')·(mm') + (j·m'+j')`; B and C interleave their `(j,k)` and
/// `(k,i)` pairs the same way.
pub fn matmul_kron_permutation(
    l: usize,
    m: usize,
    n: usize,
    l2: usize,
    m2: usize,
    n2: usize,
) -> (Permutation, Permutation, Permutation) {
    let pa = interleave_pairs(l, m, l2, m2);
    let pb = interleave_pairs(m, n, m2, n2);
    let pc = interleave_pairs(n, l, n2, l2);
    (pa, pb, pc)
}

/// Index map `(u·v)·(u'v') → (uu')·(vv')`:
/// `(u·v + v_idx)·(u'v') + (u'·v' + v'_idx) ↦ (u·u'+u'_idx)·(vv') + (v·v'+v'_idx)`.
fn interleave_pairs(u: usize, v: usize, u2: usize, v2: usize) -> Permutation {
    let size = u * v * u2 * v2;
    let mut images = vec![0; size];
    for i in 0..u {
        for j in 0..v {
            for i2 in 0..u2 {
                for j2 in 0..v2 {
                    let src = (i * v + j) * (u2 * v2) + (i2 * v2 + j2);
                    let dst = (i * u2 + i2) * (v * v2) + (j * v2 + j2);
                    images[src] = dst;
                }
            }
        }
    }
    Permutation::from_images(images).expect("interleaving is a bijection")
}

/// The definitional rank decomposition of `M⟨l,m,n⟩` with one unit term per
/// scalar multiplication (`lmn` terms).
pub fn naive_matmul_decomposition(l: usize, m: usize, n: usize) -> RankDecomposition {
    let mut terms = Vec::with_capacity(l * m * n);
    for i in 0..l {
        for j in 0..m {
            for k in 0..n {
                let mut a = vec![Scalar::zero(); l * m];
                let mut b = vec![Scalar::zero(); m * n];
                let mut c = vec![Scalar::zero(); n * l];
                a[i * m + j] = Scalar::one();
                b[j * n + k] = Scalar::one();
                c[k * l + i] = Scalar::one();
                terms.push(RankOneTerm::new(a, b, c, Scalar::one()).expect("unit term"));
            }
        }
    }
    RankDecomposition::new((l * m, m * n, n * l), terms).expect("naive decomposition")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Factor;

    #[test]
    fn matmul_small_cases() {
        let t = matmul_tensor(1, 1, 1);
        assert_eq!(t.nnz(), 1);
        assert_eq!(t.get((0, 0, 0)), Scalar::one());

        let m2 = matmul_tensor(2, 2, 2);
        assert_eq!(m2.nnz(), 8);

        let r = matmul_tensor(2, 3, 4);
        assert_eq!(r.dims(), (6, 12, 8));
        assert_eq!(r.nnz(), 24);
    }

    // Realized flattening ranks of M<2,3,4>: the A flattening must have rank
    // l·m = 6; B and C are full as well (disjoint supports per basis row).
    #[test]
    fn matmul_234_flattening_ranks() {
        let r = matmul_tensor(2, 3, 4);
        assert_eq!(r.flatten(Factor::A).rank(), 6);
        assert_eq!(r.flatten(Factor::B).rank(), 12);
        assert_eq!(r.flatten(Factor::C).rank(), 8);
    }

    #[test]
    fn unit_tensor_direct_sums() {
        assert_eq!(unit_tensor(2).direct_sum(&unit_tensor(3)), unit_tensor(5));
    }

    #[test]
    fn cw_tensor_entries() {
        let w = cw_tensor(1);
        assert_eq!(w.dims(), (2, 2, 2));
        assert_eq!(w.nnz(), 3);
        assert_eq!(w.get((0, 1, 1)), Scalar::one());
        assert_eq!(w.get((1, 0, 1)), Scalar::one());
        assert_eq!(w.get((1, 1, 0)), Scalar::one());

        assert_eq!(cw_tensor(2).nnz(), 6);
        let big_q = cw_tensor(8);
        assert_eq!(big_q.dims(), (9, 9, 9));
        assert_eq!(big_q.nnz(), 24);
    }

    #[test]
    fn big_cw_tensor_extends_little() {
        let t = big_cw_tensor(1);
        assert_eq!(t.dims(), (3, 3, 3));
        assert_eq!(t.nnz(), 6);

        let t2 = big_cw_tensor(2);
        assert_eq!(t2.dims(), (4, 4, 4));
        assert_eq!(t2.nnz(), 9);
        for f in Factor::ALL {
            assert_eq!(t2.flatten(f).rank(), 4);
        }

        // restriction to the first q+1 coordinates is the little tensor
        let little = cw_tensor(2);
        for (idx, v) in little.iter() {
            assert_eq!(&t2.get(idx), v);
        }
    }

    #[test]
    fn smat_small() {
        let p1 = smat_poly(1);
        assert_eq!(p1.nnz(), 1);
        assert_eq!(p1.coefficient([0, 0, 0]), Scalar::one());

        let p2 = smat_poly(2);
        assert_eq!(p2.nnz(), 4);
        assert_eq!(p2.coefficient([0, 0, 0]), Scalar::one());
        assert_eq!(p2.coefficient([3, 3, 3]), Scalar::one());
        assert_eq!(p2.coefficient([0, 1, 2]), Scalar::from_int(3));
        assert_eq!(p2.coefficient([1, 2, 3]), Scalar::from_int(3));
    }

    #[test]
    fn smat_equals_symmetrized_matmul() {
        for n in 1..=3 {
            assert_eq!(
                smat_poly(n),
                matmul_tensor(n, n, n).symmetrize().unwrap()
            );
        }
    }

    #[test]
    fn kron_permutation_identity_case() {
        let (pa, pb, pc) = matmul_kron_permutation(1, 1, 1, 1, 1, 1);
        assert!(pa.is_identity() && pb.is_identity() && pc.is_identity());
    }

    #[test]
    fn kron_permutation_rectangular() {
        // M<2,1,1> ⊠ M<1,1,2> = M<2,1,2>
        let prod = matmul_tensor(2, 1, 1).kronecker(&matmul_tensor(1, 1, 2));
        let (pa, pb, pc) = matmul_kron_permutation(2, 1, 1, 1, 1, 2);
        let fixed = prod.permute_coordinates(&pa, &pb, &pc).unwrap();
        assert_eq!(fixed, matmul_tensor(2, 1, 2));
    }

    #[test]
    fn naive_decomposition_counts() {
        let d = naive_matmul_decomposition(2, 2, 2);
        assert_eq!(d.terms().len(), 8);
        let report = d.verify(&matmul_tensor(2, 2, 2)).unwrap();
        assert!(report.pass);
    }
}
