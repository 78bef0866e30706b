//! 𝔨-nilpotent triples: 2-step nilpotent algebras `𝔨 ⊕ V` built from a
//! unitary representation of `𝔨` on a Hermitian vector space `(V, I)`.

use crate::algebra::LieAlgebra;
use crate::error::{inconsistent, shape, Error, Result};
use crate::linalg::{linear_solve, unit_vec, Matrix, RowSpace, Subspace, Vector};
use crate::scalar::Scalar;
use crate::verdict::{Check, Verdict};

/// Input data of a 𝔨-nilpotent triple.
///
/// `k_bracket` holds the structure constants of `𝔨` in the layout used by
/// [`LieAlgebra::new`]; it is all zeros for abelian `𝔨`. `v_metric` is the
/// inner product on `V` (real dimension `2 * v_dim_complex`), and `reps[i]`
/// is the endomorphism of `V` by which the `i`-th basis vector of `𝔨` acts.
#[derive(Clone, Debug, PartialEq)]
pub struct KNilpotentSpec {
    pub k_dim: usize,
    pub k_bracket: Vec<Scalar>,
    pub k_metric: Matrix,
    pub v_dim_complex: usize,
    pub v_metric: Matrix,
    pub i: Matrix,
    pub reps: Vec<Matrix>,
}

/// Output of [`build_k_nilpotent`]. The basis is `z1..zk` (the `𝔨` summand)
/// followed by `v1..v2m`.
#[derive(Clone, Debug)]
pub struct KNilpotent {
    pub algebra: LieAlgebra,
    /// `I` on `V`, as a `2m x 2m` matrix in the `v` coordinates.
    pub transverse_i: Matrix,
    pub g: Matrix,
}

impl KNilpotent {
    /// Frames of the `𝔨` and `V` summands inside the built algebra.
    pub fn decomposition(&self, spec: &KNilpotentSpec) -> (Vec<Vector>, Vec<Vector>) {
        let n = self.algebra.dim();
        let k = spec.k_dim;
        ((0..k).map(|i| unit_vec(n, i)).collect(), (k..n).map(|i| unit_vec(n, i)).collect())
    }

    /// Extends `I` by a complex structure `jk` on `𝔨`.
    pub fn complex_structure(&self, jk: &Matrix) -> Matrix {
        Matrix::block_diag(&[jk, &self.transverse_i])
    }
}

impl KNilpotentSpec {
    /// The abelian spec whose representation is diagonal: on the complex
    /// line `j` of `V = ℂ^m`, the basis vector `K_i` acts by
    /// `i * lambdas[j][i]`. Both metrics are the identity.
    pub fn diagonal(k_dim: usize, lambdas: &[Vec<Scalar>]) -> Self {
        let m = lambdas.len();
        let mut i = Matrix::zeros(2 * m, 2 * m);
        for j in 0..m {
            i[(2 * j + 1, 2 * j)] = Scalar::one();
            i[(2 * j, 2 * j + 1)] = Scalar::from_int(-1);
        }
        let reps = (0..k_dim)
            .map(|a| {
                let mut r = Matrix::zeros(2 * m, 2 * m);
                for (j, l) in lambdas.iter().enumerate() {
                    r[(2 * j + 1, 2 * j)] = l[a].clone();
                    r[(2 * j, 2 * j + 1)] = -&l[a];
                }
                r
            })
            .collect();
        KNilpotentSpec {
            k_dim,
            k_bracket: vec![Scalar::zero(); k_dim * k_dim * k_dim],
            k_metric: Matrix::identity(k_dim),
            v_dim_complex: m,
            v_metric: Matrix::identity(2 * m),
            i,
            reps,
        }
    }

    /// `𝔰𝔲(2)` acting on `n` copies of `ℍ = ℝ⁴` by left multiplication.
    /// The resulting algebra is the quaternionic Heisenberg algebra of
    /// dimension `4n + 3`.
    pub fn quaternionic(n: usize) -> Self {
        // one quaternionic block in the basis e1..e4
        let a1 = Matrix::from_ints(4, 4, &[0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0]);
        let a2 = Matrix::from_ints(4, 4, &[0, 0, -1, 0, 0, 0, 0, -1, 1, 0, 0, 0, 0, 1, 0, 0]);
        let a3 = Matrix::from_ints(4, 4, &[0, 0, 0, -1, 0, 0, 1, 0, 0, -1, 0, 0, 1, 0, 0, 0]);
        // right multiplication by a unit quaternion commutes with all of them
        let i1 = Matrix::from_ints(4, 4, &[0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0]);
        let rep = |a: &Matrix| Matrix::block_diag(&vec![a; n]);
        // [A1, A2] = -2 A3 and cyclically
        let mut c = vec![Scalar::zero(); 27];
        for (a, b, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            c[k * 9 + a * 3 + b] = Scalar::from_int(-2);
            c[k * 9 + b * 3 + a] = Scalar::from_int(2);
        }
        KNilpotentSpec {
            k_dim: 3,
            k_bracket: c,
            k_metric: Matrix::identity(3),
            v_dim_complex: 2 * n,
            v_metric: Matrix::identity(4 * n),
            i: rep(&i1),
            reps: vec![rep(&a1), rep(&a2), rep(&a3)],
        }
    }

    pub fn v_dim(&self) -> usize {
        2 * self.v_dim_complex
    }

    pub fn is_abelian(&self) -> bool {
        self.k_bracket.iter().all(Scalar::is_zero)
    }

    /// `𝔨` as an abstract Lie algebra with basis `z1..zk`.
    pub fn k_algebra(&self) -> Result<LieAlgebra> {
        LieAlgebra::new(LieAlgebra::numbered("z", self.k_dim), self.k_bracket.clone())
    }

    /// Checks every invariant; errors are reported in the order shape,
    /// metrics, complex structure, unitarity, representation, trivial
    /// submodule.
    pub fn validate(&self) -> Result<()> {
        let (k, v) = (self.k_dim, self.v_dim());
        let square = |m: &Matrix, n: usize| m.rows() == n && m.cols() == n;
        if self.k_bracket.len() != k * k * k || self.reps.len() != k {
            return Err(shape("k_bracket must have k^3 entries and there must be one rep per basis vector of k"));
        }
        if !square(&self.k_metric, k) || !square(&self.v_metric, v) || !square(&self.i, v) {
            return Err(shape("metric or complex structure has the wrong size"));
        }
        if self.reps.iter().any(|a| !square(a, v)) {
            return Err(shape(format!("representation matrices must be {v}x{v}")));
        }
        let kalg = self.k_algebra()?;
        for (name, m) in [("k", &self.k_metric), ("V", &self.v_metric)] {
            if !m.is_symmetric() || !m.is_positive_definite() {
                return Err(Error::InvalidHermitian(format!("metric on {name} is not positive definite")));
            }
        }
        if !self.i.mul(&self.i).add(&Matrix::identity(v)).is_zero() {
            return Err(Error::InvalidHermitian("I^2 != -1 on V".into()));
        }
        if self.i.transpose().mul(&self.v_metric).mul(&self.i) != self.v_metric {
            return Err(Error::InvalidHermitian("I is not orthogonal for the metric on V".into()));
        }
        for (a, r) in self.reps.iter().enumerate() {
            if !r.transpose().mul(&self.v_metric).add(&self.v_metric.mul(r)).is_zero() {
                return Err(Error::InvalidRepresentation(format!("A_{} is not skew for the metric on V", a + 1)));
            }
            if !r.commutator(&self.i).is_zero() {
                return Err(Error::InvalidRepresentation(format!("A_{} does not commute with I", a + 1)));
            }
        }
        for a in 0..k {
            for b in 0..k {
                let br = kalg.bracket_basis(a, b);
                let mut lhs = Matrix::zeros(v, v);
                for (c, x) in br.iter().enumerate() {
                    lhs = lhs.add(&self.reps[c].scale(x));
                }
                if lhs != self.reps[a].commutator(&self.reps[b]) {
                    return Err(Error::InvalidRepresentation(format!(
                        "A_[z{},z{}] differs from [A_{}, A_{}]",
                        a + 1,
                        b + 1,
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        let fixed = common_kernel(&self.reps, v);
        if !fixed.is_zero() {
            return Err(Error::TrivialSubmodule(fixed.dim()));
        }
        Ok(())
    }
}

fn common_kernel(reps: &[Matrix], v: usize) -> Subspace {
    let mut rs = RowSpace::new(v);
    for a in reps {
        for r in 0..v {
            rs.insert(a.row(r).to_vec());
        }
    }
    Subspace::span(v, &rs.kernel())
}

/// `s_i = <A_i x, y>_V` for every basis vector of `𝔨`.
fn pairing(spec: &KNilpotentSpec, x: &[Scalar], y: &[Scalar]) -> Vector {
    spec.reps.iter().map(|a| spec.v_metric.bilinear(&a.mul_vec(x), y)).collect()
}

/// The triple's Lie algebra: `[v1, v2]` is the vector of `𝔨` whose pairing
/// with each `K` is `<A_K v1, v2>_V`; `𝔨` is central.
pub fn build_k_nilpotent(spec: &KNilpotentSpec) -> Result<KNilpotent> {
    spec.validate()?;
    let (k, v) = (spec.k_dim, spec.v_dim());
    let n = k + v;
    let gk_inv = spec.k_metric.inverse().expect("positive definite");
    let mut c = vec![Scalar::zero(); n * n * n];
    for a in 0..v {
        for b in 0..v {
            let s = pairing(spec, &unit_vec(v, a), &unit_vec(v, b));
            for (i, x) in gk_inv.mul_vec(&s).into_iter().enumerate() {
                c[i * n * n + (k + a) * n + (k + b)] = x;
            }
        }
    }
    let mut names = LieAlgebra::numbered("z", k);
    names.extend(LieAlgebra::numbered("v", v));
    let algebra = LieAlgebra::new(names, c)?;

    let centre = algebra.centre();
    let ksum = Subspace::span(n, &(0..k).map(|i| unit_vec(n, i)).collect::<Vec<_>>());
    if centre != ksum {
        return Err(inconsistent("centre of the k-nilpotent algebra is not the k summand"));
    }
    let embed = |x: &[Scalar]| {
        let mut out = vec![Scalar::zero(); k];
        out.extend_from_slice(x);
        out
    };
    for a in 0..v {
        for b in 0..v {
            let (x, y) = (unit_vec(v, a), unit_vec(v, b));
            let lhs = algebra.bracket(&embed(&spec.i.mul_vec(&x)), &embed(&spec.i.mul_vec(&y)));
            if lhs != algebra.bracket(&embed(&x), &embed(&y)) {
                return Err(inconsistent("transverse identity [Iv, Iw] = [v, w] fails"));
            }
        }
    }
    Ok(KNilpotent {
        algebra,
        transverse_i: spec.i.clone(),
        g: Matrix::block_diag(&[&spec.k_metric, &spec.v_metric]),
    })
}

/// Checks every clause of the triple definition for `algebra` with the
/// given frames of `𝔨` and `V` and the representation data in `spec`.
pub fn verify_k_nilpotent(algebra: &LieAlgebra, k_frame: &[Vector], v_frame: &[Vector], spec: &KNilpotentSpec) -> Verdict {
    let n = algebra.dim();
    let mut out = Verdict::new();
    let mut frame = k_frame.to_vec();
    frame.extend(v_frame.iter().cloned());
    let spans = k_frame.len() == spec.k_dim
        && v_frame.len() == spec.v_dim()
        && frame.iter().all(|f| f.len() == n)
        && Subspace::span(n, &frame).dim() == n
        && frame.len() == n;
    out.insert("decomposition", Check::flag(spans));
    if !spans {
        return out;
    }
    let k_central = k_frame.iter().all(|z| (0..n).all(|i| algebra.bracket(z, &unit_vec(n, i)).iter().all(Scalar::is_zero)));
    out.insert("k_central", Check::flag(k_central));

    let kf = Matrix::from_cols(n, k_frame);
    let mut two_step = true;
    let mut formula = true;
    for (a, x) in v_frame.iter().enumerate() {
        for (b, y) in v_frame.iter().enumerate() {
            let br = algebra.bracket(x, y);
            match linear_solve(&kf, &br).ok().and_then(|s| s.particular) {
                Some(w) => {
                    let s = pairing(spec, &unit_vec(spec.v_dim(), a), &unit_vec(spec.v_dim(), b));
                    formula &= spec.k_metric.mul_vec(&w) == s;
                }
                None => two_step = false,
            }
        }
    }
    out.insert("two_step", Check::flag(two_step));
    out.insert("bracket_formula", Check::flag(two_step && formula));

    let v = spec.v_dim();
    let complex = spec.i.mul(&spec.i).add(&Matrix::identity(v)).is_zero()
        && spec.i.transpose().mul(&spec.v_metric).mul(&spec.i) == spec.v_metric;
    out.insert("complex_structure", Check::flag(complex));
    let unitary = spec.reps.iter().all(|r| {
        r.transpose().mul(&spec.v_metric).add(&spec.v_metric.mul(r)).is_zero() && r.commutator(&spec.i).is_zero()
    });
    out.insert("unitary", Check::flag(unitary));
    let representation = match spec.k_algebra() {
        Err(_) => false,
        Ok(kalg) => (0..spec.k_dim).all(|a| {
            (0..spec.k_dim).all(|b| {
                let mut lhs = Matrix::zeros(v, v);
                for (c, x) in kalg.bracket_basis(a, b).iter().enumerate() {
                    lhs = lhs.add(&spec.reps[c].scale(x));
                }
                lhs == spec.reps[a].commutator(&spec.reps[b])
            })
        }),
    };
    out.insert("representation", Check::flag(representation));
    out.insert("no_trivial_submodule", Check::flag(common_kernel(&spec.reps, v).is_zero()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    fn frames(t: &KNilpotent, s: &KNilpotentSpec) -> (Vec<Vector>, Vec<Vector>) {
        t.decomposition(s)
    }

    #[test]
    fn heisenberg_from_a_rotation() {
        let s = KNilpotentSpec::diagonal(1, &[vec![qi(1)]]);
        let t = build_k_nilpotent(&s).unwrap();
        // [v1, v2] = <A v1, v2> z1 = z1
        assert_eq!(t.algebra.bracket_basis(1, 2), vec![qi(1), qi(0), qi(0)]);
        assert_eq!(t.algebra.nilpotency_class(), Some(2));
    }

    #[test]
    fn n8_from_three_lines() {
        let s = KNilpotentSpec::diagonal(2, &[vec![qi(1), qi(0)], vec![qi(0), qi(1)], vec![qi(1), qi(1)]]);
        let t = build_k_nilpotent(&s).unwrap();
        assert_eq!(t.algebra.dim(), 8);
        assert_eq!(t.algebra.centre().dim(), 2);
        assert_eq!(t.algebra.bracket_basis(6, 7), vec![qi(1), qi(1), qi(0), qi(0), qi(0), qi(0), qi(0), qi(0)]);
    }

    #[test]
    fn quaternionic_heisenberg_passes_every_clause() {
        let s = KNilpotentSpec::quaternionic(1);
        let t = build_k_nilpotent(&s).unwrap();
        assert_eq!(t.algebra.dim(), 7);
        // [e1,e2] = z1, [e3,e4] = -z1, [e1,e3] = z2, [e1,e4] = z3, [e2,e3] = -z3
        assert_eq!(t.algebra.bracket_basis(3, 4)[0], qi(1));
        assert_eq!(t.algebra.bracket_basis(5, 6)[0], qi(-1));
        assert_eq!(t.algebra.bracket_basis(3, 5)[1], qi(1));
        assert_eq!(t.algebra.bracket_basis(4, 6)[1], qi(1));
        assert_eq!(t.algebra.bracket_basis(3, 6)[2], qi(1));
        assert_eq!(t.algebra.bracket_basis(4, 5)[2], qi(-1));
        let (kf, vf) = frames(&t, &s);
        let v = verify_k_nilpotent(&t.algebra, &kf, &vf, &s);
        assert!(v.all_pass(), "{v:?}");
        assert_eq!(build_k_nilpotent(&KNilpotentSpec::quaternionic(2)).unwrap().algebra.dim(), 11);
    }

    #[test]
    fn non_skew_rep_is_rejected_and_fails_unitarity() {
        let mut s = KNilpotentSpec::diagonal(1, &[vec![qi(1)]]);
        let good = build_k_nilpotent(&s).unwrap();
        s.reps[0] = Matrix::identity(2);
        assert!(matches!(build_k_nilpotent(&s), Err(Error::InvalidRepresentation(_))));
        let (kf, vf) = frames(&good, &s);
        let v = verify_k_nilpotent(&good.algebra, &kf, &vf, &s);
        assert!(!v.passes("unitary"));
        assert!(!v.all_pass());
    }

    #[test]
    fn trivial_submodule_is_rejected() {
        let s = KNilpotentSpec::diagonal(1, &[vec![qi(1)], vec![qi(0)]]);
        assert!(matches!(build_k_nilpotent(&s), Err(Error::TrivialSubmodule(2))));
    }

    #[test]
    fn empty_v_is_abelian_and_passes() {
        let s = KNilpotentSpec::diagonal(2, &[]);
        let t = build_k_nilpotent(&s).unwrap();
        assert!(t.algebra.is_abelian());
        assert_eq!(t.algebra.nilpotency_class(), Some(1));
        let (kf, vf) = frames(&t, &s);
        assert!(verify_k_nilpotent(&t.algebra, &kf, &vf, &s).all_pass());
    }
}
