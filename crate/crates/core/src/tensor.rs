//! Invariant tensors of valence `(r, s)` with `r ∈ {0, 1}` on a real vector
//! space with a fixed basis, and the derivation action of `gl`.
//!
//! Components are stored densely. For a `(1, s)` tensor the output index
//! comes first: `T[a; i_1, .., i_s]` is the `a`-th coordinate of
//! `T(e_{i_1}, .., e_{i_s})`.

use std::fmt;

use crate::error::{shape, Result};
use crate::linalg::{zero_vec, Matrix, Vector};
use crate::scalar::Scalar;

/// Declared symmetry of the lower slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    None,
    Alternating,
    Symmetric,
}

#[derive(Clone)]
pub struct Tensor {
    dim: usize,
    upper: bool,
    lower: usize,
    symmetry: Symmetry,
    data: Vec<Scalar>,
}

/// Equality compares components; the declared symmetry is only a hint.
impl PartialEq for Tensor {
    fn eq(&self, o: &Tensor) -> bool {
        self.dim == o.dim && self.upper == o.upper && self.lower == o.lower && self.data == o.data
    }
}

impl Eq for Tensor {}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor({}, {}) dim {} {{", self.upper as u8, self.lower, self.dim)?;
        for (idx, v) in self.nonzero_entries() {
            write!(f, " {idx:?}: {v},")?;
        }
        write!(f, " }}")
    }
}

/// Calls `f` on every multi-index of length `len` over `0..dim`, in
/// lexicographic order.
pub fn for_each_index(dim: usize, len: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; len];
    if dim == 0 && len > 0 {
        return;
    }
    loop {
        f(&idx);
        let mut p = len;
        loop {
            if p == 0 {
                return;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < dim {
                break;
            }
            idx[p] = 0;
        }
    }
}

impl Tensor {
    pub fn zeros(dim: usize, upper: bool, lower: usize) -> Self {
        let len = dim.pow(lower as u32 + upper as u32);
        Tensor { dim, upper, lower, symmetry: Symmetry::None, data: vec![Scalar::zero(); len] }
    }

    /// Fills components from `f(full_index)`; the full index includes the
    /// upper slot first when present.
    pub fn from_fn(dim: usize, upper: bool, lower: usize, mut f: impl FnMut(&[usize]) -> Scalar) -> Self {
        let mut t = Self::zeros(dim, upper, lower);
        let mut k = 0;
        for_each_index(dim, t.order(), |idx| {
            t.data[k] = f(idx);
            k += 1;
        });
        t
    }

    /// A `(1,1)` tensor from an endomorphism matrix.
    pub fn from_endomorphism(m: &Matrix) -> Self {
        Self::from_fn(m.rows(), true, 1, |i| m[(i[0], i[1])].clone())
    }

    /// A `(0,2)` tensor from a bilinear form matrix.
    pub fn from_bilinear(m: &Matrix) -> Self {
        Self::from_fn(m.rows(), false, 2, |i| m[(i[0], i[1])].clone())
    }

    /// A `(0,1)` tensor from its components.
    pub fn from_covector(v: &[Scalar]) -> Self {
        Self::from_fn(v.len(), false, 1, |i| v[i[0]].clone())
    }

    /// A `(1,0)` tensor (vector).
    pub fn from_vector(v: &[Scalar]) -> Self {
        Self::from_fn(v.len(), true, 0, |i| v[i[0]].clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn valence(&self) -> (usize, usize) {
        (self.upper as usize, self.lower)
    }

    pub fn is_upper(&self) -> bool {
        self.upper
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    /// Total number of indices.
    pub fn order(&self) -> usize {
        self.lower + self.upper as usize
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    fn flat(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.order());
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    fn unflat(&self, mut k: usize) -> Vec<usize> {
        let mut idx = vec![0; self.order()];
        for p in (0..self.order()).rev() {
            idx[p] = k % self.dim;
            k /= self.dim;
        }
        idx
    }

    pub fn get(&self, idx: &[usize]) -> &Scalar {
        &self.data[self.flat(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Scalar) {
        let k = self.flat(idx);
        self.data[k] = v;
    }

    pub fn add_at(&mut self, idx: &[usize], v: &Scalar) {
        let k = self.flat(idx);
        self.data[k] += v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (Vec<usize>, &Scalar)> + '_ {
        self.data.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (self.unflat(k), v))
    }

    /// First nonzero component in lexicographic index order.
    pub fn first_nonzero(&self) -> Option<(Vec<usize>, Scalar)> {
        self.nonzero_entries().next().map(|(i, v)| (i, v.clone()))
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|v| !v.is_zero()).count()
    }

    fn same_shape(&self, o: &Tensor) -> bool {
        self.dim == o.dim && self.upper == o.upper && self.lower == o.lower
    }

    pub fn add(&self, o: &Tensor) -> Tensor {
        assert!(self.same_shape(o), "tensor shape mismatch");
        let mut t = self.clone();
        t.symmetry = Symmetry::None;
        for (a, b) in t.data.iter_mut().zip(&o.data) {
            *a += b;
        }
        t
    }

    pub fn sub(&self, o: &Tensor) -> Tensor {
        assert!(self.same_shape(o), "tensor shape mismatch");
        let mut t = self.clone();
        t.symmetry = Symmetry::None;
        for (a, b) in t.data.iter_mut().zip(&o.data) {
            *a -= b;
        }
        t
    }

    pub fn scale(&self, s: &Scalar) -> Tensor {
        let mut t = self.clone();
        for a in t.data.iter_mut() {
            *a = &*a * s;
        }
        t
    }

    /// Declares a symmetry after checking it componentwise.
    pub fn with_symmetry(mut self, sym: Symmetry) -> Result<Tensor> {
        let ok = match sym {
            Symmetry::None => true,
            Symmetry::Alternating => self.is_alternating(),
            Symmetry::Symmetric => self.is_symmetric(),
        };
        if !ok {
            return Err(shape(format!("declared symmetry {sym:?} does not hold")));
        }
        self.symmetry = sym;
        Ok(self)
    }

    fn swapped_equals(&self, sign: i32) -> bool {
        let off = self.upper as usize;
        let s = Scalar::from_int(sign as i64);
        let mut ok = true;
        for_each_index(self.dim, self.order(), |idx| {
            if !ok {
                return;
            }
            for p in off..self.order() {
                for q in p + 1..self.order() {
                    let mut j = idx.to_vec();
                    j.swap(p, q);
                    if *self.get(idx) != &s * self.get(&j) {
                        ok = false;
                        return;
                    }
                }
            }
        });
        ok
    }

    /// Antisymmetric under every transposition of lower slots.
    pub fn is_alternating(&self) -> bool {
        self.swapped_equals(-1)
    }

    pub fn is_symmetric(&self) -> bool {
        self.swapped_equals(1)
    }

    /// Evaluates on basis vectors given by the lower indices; returns the
    /// output vector (length `dim`) or a length-1 vector for `r = 0`.
    pub fn eval_basis(&self, lower: &[usize]) -> Vector {
        assert_eq!(lower.len(), self.lower);
        if self.upper {
            (0..self.dim)
                .map(|a| {
                    let mut idx = vec![a];
                    idx.extend_from_slice(lower);
                    self.get(&idx).clone()
                })
                .collect()
        } else {
            vec![self.get(lower).clone()]
        }
    }

    /// Multilinear evaluation on arbitrary vectors.
    pub fn eval(&self, args: &[&[Scalar]]) -> Vector {
        assert_eq!(args.len(), self.lower);
        let out_len = if self.upper { self.dim } else { 1 };
        let mut out = zero_vec(out_len);
        for (idx, v) in self.nonzero_entries() {
            let (a, low) = if self.upper { (idx[0], &idx[1..]) } else { (0, &idx[..]) };
            let mut f = v.clone();
            for (arg, &i) in args.iter().zip(low) {
                if arg[i].is_zero() {
                    f = Scalar::zero();
                    break;
                }
                f = &f * &arg[i];
            }
            if !f.is_zero() {
                out[a] += f;
            }
        }
        out
    }

    /// Scalar value of a `(0,s)` tensor on arbitrary vectors.
    pub fn eval_scalar(&self, args: &[&[Scalar]]) -> Scalar {
        assert!(!self.upper);
        self.eval(args).pop().unwrap()
    }

    /// Derivation action of an endomorphism `A` (differential of the natural
    /// `GL` action): `(A.τ)(Y..) = A τ(Y..) - Σ τ(.., A Y_k, ..)`.
    pub fn gl_action(&self, a: &Matrix) -> Tensor {
        assert_eq!(a.rows(), self.dim);
        let n = self.dim;
        let mut out = Tensor::zeros(n, self.upper, self.lower);
        let off = self.upper as usize;
        let entries: Vec<(Vec<usize>, Scalar)> = self.nonzero_entries().map(|(i, v)| (i, v.clone())).collect();
        for (idx, t) in &entries {
            if self.upper {
                let src = idx[0];
                let mut j = idx.clone();
                for m in 0..n {
                    let c = &a[(m, src)];
                    if !c.is_zero() {
                        j[0] = m;
                        out.add_at(&j, &(c * t));
                    }
                }
            }
            for p in off..self.order() {
                let m = idx[p];
                let mut j = idx.clone();
                for col in 0..n {
                    let c = &a[(m, col)];
                    if !c.is_zero() {
                        j[p] = col;
                        out.add_at(&j, &-(c * t));
                    }
                }
            }
        }
        out
    }

    /// `(0, s+1)` tensor `g(τ(X..), Z)` from a `(1, s)` tensor.
    pub fn lower_with(&self, g: &Matrix) -> Tensor {
        assert!(self.upper, "already covariant");
        let n = self.dim;
        let mut out = Tensor::zeros(n, false, self.lower + 1);
        for (idx, t) in self.nonzero_entries() {
            let mut j: Vec<usize> = idx[1..].to_vec();
            j.push(0);
            for b in 0..n {
                let c = &g[(idx[0], b)];
                if !c.is_zero() {
                    j[self.lower] = b;
                    out.add_at(&j, &(c * t));
                }
            }
        }
        out
    }

    /// Inverse of [`Self::lower_with`]: raises the last slot with `g^{-1}`.
    pub fn raise_last(&self, ginv: &Matrix) -> Tensor {
        assert!(!self.upper && self.lower >= 1);
        let n = self.dim;
        let mut out = Tensor::zeros(n, true, self.lower - 1);
        for (idx, t) in self.nonzero_entries() {
            let b = idx[self.lower - 1];
            let mut j = vec![0];
            j.extend_from_slice(&idx[..self.lower - 1]);
            for a in 0..n {
                let c = &ginv[(a, b)];
                if !c.is_zero() {
                    j[0] = a;
                    out.add_at(&j, &(c * t));
                }
            }
        }
        out
    }

    /// Endomorphism `Y ↦ τ(v, Y)` of a `(1,2)` tensor.
    pub fn contract_first(&self, v: &[Scalar]) -> Matrix {
        assert!(self.upper && self.lower == 2);
        let n = self.dim;
        let mut m = Matrix::zeros(n, n);
        for (idx, t) in self.nonzero_entries() {
            if !v[idx[1]].is_zero() {
                m[(idx[0], idx[2])] += &v[idx[1]] * t;
            }
        }
        m
    }

    /// Endomorphism `τ(X, Y)` of a `(1,3)` tensor.
    pub fn endomorphism_at(&self, x: usize, y: usize) -> Matrix {
        assert!(self.upper && self.lower == 3);
        Matrix::from_fn(self.dim, self.dim, |a, z| self.get(&[a, x, y, z]).clone())
    }

    /// `(1,1)` tensor as a matrix.
    pub fn as_matrix(&self) -> Matrix {
        assert!(self.upper && self.lower == 1);
        Matrix::from_fn(self.dim, self.dim, |a, b| self.get(&[a, b]).clone())
    }

    /// Components in a reordered basis: new basis vector `a` is old basis
    /// vector `order[a]`, in every slot.
    pub fn permute_basis(&self, order: &[usize]) -> Tensor {
        assert_eq!(order.len(), self.dim);
        Tensor::from_fn(self.dim, self.upper, self.lower, |idx| {
            let j: Vec<usize> = idx.iter().map(|&a| order[a]).collect();
            self.get(&j).clone()
        })
    }

    /// Permutes the lower slots: the new slot `k` reads old slot `perm[k]`.
    pub fn permute_lower(&self, perm: &[usize]) -> Tensor {
        assert_eq!(perm.len(), self.lower);
        let off = self.upper as usize;
        Tensor::from_fn(self.dim, self.upper, self.lower, |idx| {
            let mut j = idx.to_vec();
            for (k, &p) in perm.iter().enumerate() {
                j[off + p] = idx[off + k];
            }
            self.get(&j).clone()
        })
    }

    /// Concatenates per-direction tensors into one with a new first lower
    /// slot: result `[a; x, i..] = parts[x][a; i..]`.
    pub fn stack_direction(parts: &[Tensor]) -> Tensor {
        let n = parts.len();
        let upper = parts[0].upper;
        let lower = parts[0].lower;
        Tensor::from_fn(n, upper, lower + 1, |idx| {
            if upper {
                let mut j = vec![idx[0]];
                j.extend_from_slice(&idx[2..]);
                parts[idx[1]].get(&j).clone()
            } else {
                parts[idx[0]].get(&idx[1..]).clone()
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;
    use proptest::prelude::*;

    fn rot4() -> Matrix {
        // A e = Je, A Je = -e on coordinates (z, w, e, Je)
        let mut a = Matrix::zeros(4, 4);
        a[(3, 2)] = qi(1);
        a[(2, 3)] = qi(-1);
        a
    }

    #[test]
    fn skew_kills_metric() {
        let g = Tensor::from_bilinear(&Matrix::identity(4));
        assert!(g.gl_action(&rot4()).is_zero());
    }

    #[test]
    fn j_kills_itself() {
        let j = Matrix::from_ints(2, 2, &[0, -1, 1, 0]);
        assert!(Tensor::from_endomorphism(&j).gl_action(&j).is_zero());
    }

    #[test]
    fn rotation_kills_volume_in_plane() {
        // e* ∧ Je* ∧ z*
        let t = Tensor::from_fn(4, false, 3, |i| {
            let perm = [i[0], i[1], i[2]];
            let target = [2, 3, 0];
            let mut sign = 0i64;
            for p in [[0, 1, 2], [1, 2, 0], [2, 0, 1]] {
                if perm == [target[p[0]], target[p[1]], target[p[2]]] {
                    sign = 1;
                }
            }
            for p in [[1, 0, 2], [0, 2, 1], [2, 1, 0]] {
                if perm == [target[p[0]], target[p[1]], target[p[2]]] {
                    sign = -1;
                }
            }
            qi(sign)
        });
        assert!(t.is_alternating());
        assert!(t.gl_action(&rot4()).is_zero());
    }

    #[test]
    fn lower_raise_round_trip() {
        let g = Matrix::from_ints(2, 2, &[2, 1, 1, 3]);
        let ginv = g.inverse().unwrap();
        let t = Tensor::from_fn(2, true, 2, |i| qi((i[0] * 4 + i[1] * 2 + i[2]) as i64 - 3));
        assert_eq!(t.lower_with(&g).raise_last(&ginv), t);
    }

    fn mat3() -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(-3i64..4, 9).prop_map(|v| Matrix::from_ints(3, 3, &v))
    }

    fn tensor3(upper: bool, lower: usize) -> impl Strategy<Value = Tensor> {
        let len = 3usize.pow(lower as u32 + upper as u32);
        proptest::collection::vec(-3i64..4, len)
            .prop_map(move |v| {
                let mut k = 0;
                Tensor::from_fn(3, upper, lower, |_| {
                    k += 1;
                    qi(v[k - 1])
                })
            })
    }

    proptest! {
        #[test]
        fn commutator_identity(a in mat3(), b in mat3(), t in prop_oneof![tensor3(true, 2), tensor3(false, 3), tensor3(true, 1)]) {
            let lhs = t.gl_action(&a.commutator(&b));
            let rhs = t.gl_action(&b).gl_action(&a).sub(&t.gl_action(&a).gl_action(&b));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn action_is_derivation_on_evaluation(a in mat3(), t in tensor3(true, 2)) {
            // (A.τ)(X,Y) = A τ(X,Y) - τ(AX,Y) - τ(X,AY) on basis vectors
            let at = t.gl_action(&a);
            for x in 0..3 { for y in 0..3 {
                let ex = crate::linalg::unit_vec(3, x);
                let ey = crate::linalg::unit_vec(3, y);
                let mut expect = a.mul_vec(&t.eval(&[&ex, &ey]));
                let t1 = t.eval(&[&a.mul_vec(&ex), &ey]);
                let t2 = t.eval(&[&ex, &a.mul_vec(&ey)]);
                for k in 0..3 { expect[k] = &expect[k] - &t1[k] - &t2[k]; }
                prop_assert_eq!(at.eval_basis(&[x, y]), expect);
            }}
        }
    }
}
